//! JSON interchange format for configurations.
//!
//! ```json
//! {"dimension": 3, "label": "G3(1)",
//!  "covectors": [{"dir": ["1","-1","0"], "weight": "1/3"}],
//!  "background": [["1","0","0"], ["0","1","0"], ["0","0","-2"]]}
//! ```
//!
//! Rationals are strings `"p/q"` or `"p"`. Output is always in lowest terms.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational, Vector};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigurationFile {
    dimension: usize,
    #[serde(default)]
    label: String,
    covectors: Vec<CovectorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    background: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CovectorEntry {
    dir: Vec<String>,
    weight: String,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() || t != s {
        return Err(Error::Parse(format!("malformed rational {s:?}")));
    }
    t.parse::<Rational>()
        .map_err(|e| Error::Parse(format!("malformed rational {s:?}: {e}")))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_vector(xs: &[String]) -> Result<Vector> {
    xs.iter().map(|x| parse_rational(x)).collect()
}

pub fn parse_matrix(rows: &[Vec<String>]) -> Result<Matrix> {
    let rows = rows.iter().map(|r| parse_vector(r)).collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(&rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|r| vector_json(m.row(r))).collect())
}

/// Parses the configuration JSON format. Zero weights and zero directions are rejected.
pub fn configuration_from_json(text: &str) -> Result<Configuration> {
    let file: ConfigurationFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut raw = Vec::with_capacity(file.covectors.len());
    for entry in &file.covectors {
        raw.push((parse_vector(&entry.dir)?, parse_rational(&entry.weight)?));
    }
    let background = file.background.as_deref().map(parse_matrix).transpose()?;
    Ok(Configuration::build(file.dimension, raw, background)?.with_label(file.label))
}

pub fn configuration_to_value(c: &Configuration) -> Value {
    let covectors: Vec<Value> = c
        .covectors()
        .iter()
        .map(|wc| json!({"dir": vector_json(wc.direction()), "weight": format_rational(wc.weight())}))
        .collect();
    let mut v = json!({
        "dimension": c.dimension(),
        "label": c.label(),
        "covectors": covectors,
    });
    if let Some(b) = c.background() {
        v["background"] = matrix_json(b);
    }
    v
}

pub fn configuration_to_json(c: &Configuration) -> String {
    serde_json::to_string_pretty(&configuration_to_value(c)).expect("serializable")
}

/// Accepts either a bare `[[...], ...]` matrix or an object with a `"background"` field.
pub fn background_from_json(text: &str) -> Result<Matrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = match &v {
        Value::Object(map) => map
            .get("background")
            .ok_or_else(|| Error::Parse("missing \"background\" field".into()))?,
        other => other,
    };
    let rows: Vec<Vec<String>> =
        serde_json::from_value(rows.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    parse_matrix(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn parses_the_documented_example() {
        let text = r#"{"dimension": 2, "label": "x",
            "covectors": [{"dir": ["2","0"], "weight": "1/3"}, {"dir": ["0","-1"], "weight": "5"}],
            "background": [["1","0"],["0","-2"]]}"#;
        let c = configuration_from_json(text).unwrap();
        assert_eq!(c.label(), "x");
        assert_eq!(c.weight(0), &rat(4, 3));
        assert_eq!(c.direction(1), &[int(0), int(1)]);
        assert_eq!(c.background().unwrap()[(1, 1)], int(-2));
        let again = configuration_from_json(&configuration_to_json(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            r#"{"dimension": 1, "covectors": [{"dir": ["1/0"], "weight": "1"}]}"#,
            r#"{"dimension": 1, "covectors": [{"dir": ["x"], "weight": "1"}]}"#,
            r#"{"dimension": 1, "covectors": [{"dir": ["1"], "weight": "0"}]}"#,
            r#"{"dimension": 1, "covectors": [{"dir": ["0"], "weight": "1"}]}"#,
            r#"{"dimension": 1, "covectors": [{"dir": ["1"], "weight": " 1"}]}"#,
            r#"{"dimension": 1, "covectors": [{"dir": ["1"], "weight": "1.5"}]}"#,
            r#"{"dimension": 2, "covectors": [{"dir": ["1"], "weight": "1"}]}"#,
            r#"{"dimension": 1, "covectors": []}"#,
            r#"not json"#,
        ] {
            assert!(configuration_from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn background_file_forms() {
        let bare = background_from_json(r#"[["1","0"],["0","-2"]]"#).unwrap();
        let wrapped = background_from_json(r#"{"background": [["1","0"],["0","-2"]]}"#).unwrap();
        assert_eq!(bare, wrapped);
    }
}
