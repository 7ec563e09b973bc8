//! Deterministic JSON renderings of reports. Keys are sorted and every
//! rational is a `"p/q"` string.

use serde_json::{json, Value};

use crate::config::{Configuration, DualFrame, Fingerprint, Plane};
use crate::io::{format_rational, matrix_json, vector_json};
use crate::transform::Equivalence;
use crate::vee::{PlaneStatus, VeeReport};
use crate::wdvv::SamplePoint;

fn plane_json(p: &Plane) -> Value {
    json!({"members": p.members(), "basis": matrix_json(p.key())})
}

pub fn status_json(s: &PlaneStatus) -> Value {
    match s {
        PlaneStatus::Reducible => json!({"status": "reducible"}),
        PlaneStatus::Proportional(l) => json!({"status": "proportional", "lambda": format_rational(l)}),
        PlaneStatus::Violated(i) => json!({"status": "violated", "witness": i}),
    }
}

pub fn vee_report_json(c: &Configuration, r: &VeeReport) -> Value {
    let planes: Vec<Value> = r
        .verdicts
        .iter()
        .map(|v| {
            let mut p = plane_json(&v.plane);
            if let (Value::Object(m), Value::Object(s)) = (&mut p, status_json(&v.status)) {
                m.extend(s);
            }
            p
        })
        .collect();
    let mut out = json!({
        "label": c.label(),
        "is_vee_system": r.is_vee_system,
        "degenerate_form": r.degenerate_form,
        "violations": r.violations().count(),
        "planes": planes,
    });
    if let Some(l) = &r.well_distributed {
        out["well_distributed"] = json!(format_rational(l));
    }
    out
}

/// The post-merge covector list with indices, weights and squared lengths.
pub fn covectors_json(c: &Configuration, frame: Option<&DualFrame>) -> Value {
    let items: Vec<Value> = (0..c.len())
        .map(|i| {
            let mut v = json!({
                "index": i,
                "dir": vector_json(c.direction(i)),
                "weight": format_rational(c.weight(i)),
            });
            if let Some(f) = frame {
                v["length_squared"] = json!(format_rational(&f.length_squared(c, i)));
            }
            v
        })
        .collect();
    Value::Array(items)
}

pub fn fingerprint_json(c: &Configuration, frame: &DualFrame, f: &Fingerprint) -> Value {
    let profiles: Vec<Value> = f
        .covector_profiles
        .iter()
        .map(|(l, inc)| json!({"length_squared": format_rational(l), "plane_sizes": inc}))
        .collect();
    json!({
        "label": c.label(),
        "dimension": f.dimension,
        "count": f.count,
        "lengths": f.lengths.iter().map(format_rational).collect::<Vec<_>>(),
        "plane_profile": f.plane_profile,
        "covector_profiles": profiles,
        "covectors": covectors_json(c, Some(frame)),
    })
}

pub fn planes_json(c: &Configuration, planes: &[Plane]) -> Value {
    json!({
        "label": c.label(),
        "count": planes.len(),
        "planes": planes.iter().map(plane_json).collect::<Vec<_>>(),
    })
}

pub fn equivalence_json(a: &Configuration, b: &Configuration, w: Option<&Equivalence>) -> Value {
    match w {
        Some(w) => json!({
            "source": a.label(),
            "target": b.label(),
            "equivalent": true,
            "matrix": matrix_json(&w.map.matrix),
            "scale_sq": format_rational(&w.map.scale_sq),
            "sigma": w.sigma,
        }),
        None => json!({"source": a.label(), "target": b.label(), "equivalent": false}),
    }
}

pub fn wdvv_json(c: &Configuration, holds: bool, seed: u64, points: &[SamplePoint]) -> Value {
    json!({
        "label": c.label(),
        "holds": holds,
        "seed": seed,
        "points": points.iter().map(|p| vector_json(p.coords())).collect::<Vec<_>>(),
    })
}
