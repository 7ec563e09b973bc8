//! `vee`: checks and transformations of weighted covector configurations.
//!
//! Exit status: 0 when the checked property holds (or the operation
//! succeeded), 1 when it fails, 2 on input or usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use vee_core::catalog::{make_family, named_restriction, FamilySpec};
use vee_core::io::{background_from_json, configuration_from_json, configuration_to_value, parse_rational};
use vee_core::report;
use vee_core::wdvv::sample_points;
use vee_core::{
    check_vee, check_wdvv, euclidean_check, find_equivalence, restrict, subsystem, Configuration, Error, Rational,
};

#[derive(Parser)]
#[command(name = "vee", version, about = "Exact checks for vee-systems and their restrictions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the vee-conditions plane by plane.
    Check {
        /// Configuration JSON, `-` for stdin.
        file: String,
        /// Check against a background form instead of the canonical one.
        #[arg(long)]
        euclidean: bool,
        /// Background form JSON; defaults to the configuration's own `background`.
        #[arg(long, requires = "euclidean")]
        background: Option<String>,
    },
    /// Check the generalized WDVV identities at seeded sample points.
    Wdvv {
        file: String,
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Restrict along the subsystem generated by some covectors.
    Restrict {
        file: String,
        /// Comma-separated 0-based covector indices.
        #[arg(long, value_delimiter = ',', required = true)]
        along: Vec<usize>,
    },
    /// Extract the subsystem in the span of some covectors.
    Subsystem {
        file: String,
        #[arg(long, value_delimiter = ',', required = true)]
        span: Vec<usize>,
    },
    /// Search for a linear equivalence between two configurations.
    Equiv { first: String, second: String },
    /// Emit a catalog family member or a named Coxeter restriction.
    Catalog {
        /// Family name (A_n, B_n_gamma, B_n_t, D_n, E6, E7, E8, F4, G3, D3,
        /// AB4_A1_1, AB4_A1_2) or a restriction such as "(E7,A2^2)".
        name: String,
        /// Parameter `key=value` with a rational value; `n=` sets the rank.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, Rational)>,
        /// Which fingerprint class to emit when a restriction has several.
        #[arg(long, default_value_t = 0)]
        class: usize,
    },
    /// Equivalence invariants and the indexed covector list.
    Fingerprint { file: String },
    /// List the plane subsystems.
    Planes { file: String },
}

fn parse_param(s: &str) -> Result<(String, Rational), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v = parse_rational(v.trim()).map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), v))
}

/// Failure of a command, mapped to its exit status.
enum Failure {
    /// The property does not hold; the report is still printed.
    Fails(Value),
    /// The operation cannot produce a result.
    Refused(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateForm
            | Error::SingularMatrix
            | Error::IsotropicSubsystem
            | Error::DegenerateRestriction
            | Error::SubsystemNotFound(_) => Failure::Refused(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
    }
}

fn load(path: &str) -> Result<Configuration, Failure> {
    configuration_from_json(&read_source(path)?).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn verdict(value: Value, holds: bool) -> Outcome {
    if holds {
        Ok(value)
    } else {
        Err(Failure::Fails(value))
    }
}

fn with_command(mut v: Value, command: &str) -> Value {
    v["command"] = json!(command);
    v
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check {
            file,
            euclidean,
            background,
        } => {
            let c = load(&file)?;
            let r = if euclidean {
                let b = match background {
                    Some(path) => background_from_json(&read_source(&path)?)
                        .map_err(|e| Failure::Input(format!("{path}: {e}")))?,
                    None => c
                        .background()
                        .cloned()
                        .ok_or_else(|| Failure::Input("--euclidean needs a background form".into()))?,
                };
                if b.rows() != c.dimension() || !b.is_square() {
                    return Err(Failure::Input("background has the wrong size".into()));
                }
                euclidean_check(&c, &b)
            } else {
                check_vee(&c)
            };
            verdict(with_command(report::vee_report_json(&c, &r), "check"), r.is_vee_system)
        }
        Command::Wdvv { file, points, seed } => {
            let c = load(&file)?;
            if points == 0 {
                return Err(Failure::Input("--points must be positive".into()));
            }
            let pts = sample_points(&c, points, seed);
            match check_wdvv(&c, &pts) {
                Ok(holds) => verdict(with_command(report::wdvv_json(&c, holds, seed, &pts), "wdvv"), holds),
                Err(Error::DegenerateForm) => {
                    let mut r = report::wdvv_json(&c, false, seed, &pts);
                    r["reason"] = json!("canonical form is degenerate; the identities need its inverse");
                    Err(Failure::Fails(with_command(r, "wdvv")))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Restrict { file, along } => Ok(configuration_to_value(&restrict(&load(&file)?, &along)?)),
        Command::Subsystem { file, span } => Ok(configuration_to_value(&subsystem(&load(&file)?, &span)?)),
        Command::Equiv { first, second } => {
            if first == "-" && second == "-" {
                return Err(Failure::Input("only one input can come from stdin".into()));
            }
            let a = load(&first)?;
            let b = load(&second)?;
            let w = find_equivalence(&a, &b)?;
            verdict(
                with_command(report::equivalence_json(&a, &b, w.as_ref()), "equiv"),
                w.is_some(),
            )
        }
        Command::Catalog { name, params, class } => {
            let c = if name.contains('(') {
                let map: BTreeMap<String, Rational> = params.into_iter().collect();
                let mut classes = named_restriction(&name, &map)?;
                if class >= classes.len() {
                    return Err(Failure::Input(format!(
                        "{name} has {} fingerprint classes, asked for {class}",
                        classes.len()
                    )));
                }
                if classes.len() > 1 {
                    eprintln!("note: {name} has {} fingerprint classes; emitting class {class}", classes.len());
                }
                classes.swap_remove(class)
            } else {
                let spec = FamilySpec::parse(&name, params.iter().map(|(k, v)| (k.as_str(), v.clone())))?;
                make_family(&spec)?
            };
            Ok(configuration_to_value(&c))
        }
        Command::Fingerprint { file } => {
            let c = load(&file)?;
            let frame = c.dual_frame()?;
            let f = c.fingerprint()?;
            Ok(with_command(report::fingerprint_json(&c, &frame, &f), "fingerprint"))
        }
        Command::Planes { file } => {
            let c = load(&file)?;
            Ok(with_command(report::planes_json(&c, &c.enumerate_planes()), "planes"))
        }
    }
}

fn emit(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    let mut out = io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Fails(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
