//! Scenario configuration: a line-oriented `key = value` format carrying
//! the coefficient bundle, the period, named initial conditions, and the
//! integration horizon.
//!
//! Coefficient grammar: `const <v>` | `harmonic <base> <amp> <phase>` |
//! `sampled <file.csv>` (one value per line, uniform grid over [0, ω)).

use crate::model::{Coefficients, ModelError, State};
use crate::periodic::PeriodicFn;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// A problem anchored to a config line (line numbers are 1-based;
/// line 0 marks file-level problems).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIssue {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("parse errors:\n{}", format_issues(.0))]
    Parse(Vec<ParseIssue>),
    #[error("validation errors:\n{}", format_issues(.0))]
    Validation(Vec<ParseIssue>),
    #[error("cannot read sampled data {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_issues(issues: &[ParseIssue]) -> String {
    issues.iter().map(|i| format!("  {i}")).collect::<Vec<_>>().join("\n")
}

/// Textual form of one coefficient, kept for byte-faithful re-emission.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffSpec {
    Const(f64),
    Harmonic { base: f64, amp: f64, phase: f64 },
    Sampled(String),
}

impl CoeffSpec {
    fn build(&self, omega: f64, base_dir: &Path) -> Result<PeriodicFn, ScenarioError> {
        let built = match self {
            CoeffSpec::Const(v) => PeriodicFn::constant(*v, omega),
            CoeffSpec::Harmonic { base, amp, phase } => {
                PeriodicFn::harmonic(*base, *amp, *phase, omega)
            }
            CoeffSpec::Sampled(file) => {
                let path = base_dir.join(file);
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| ScenarioError::Io { path: path.clone(), source })?;
                let mut values = Vec::new();
                for (i, line) in text.lines().enumerate() {
                    let line = line.trim();
                    if line.is_empty() {
                        continue;
                    }
                    let v: f64 = line.parse().map_err(|_| ScenarioError::Parse(vec![
                        ParseIssue {
                            line: i + 1,
                            message: format!("bad sample value {line:?} in {}", path.display()),
                        },
                    ]))?;
                    values.push(v);
                }
                PeriodicFn::sampled(values, omega)
            }
        };
        built.map_err(|e| {
            ScenarioError::Validation(vec![ParseIssue { line: 0, message: e.to_string() }])
        })
    }

    fn emit(&self) -> String {
        match self {
            CoeffSpec::Const(v) => format!("const {v}"),
            CoeffSpec::Harmonic { base, amp, phase } => format!("harmonic {base} {amp} {phase}"),
            CoeffSpec::Sampled(file) => format!("sampled {file}"),
        }
    }
}

const COEFF_KEYS: [&str; 8] = ["lambda", "beta", "mu", "c", "eta", "k", "r", "b"];

/// A validated scenario: coefficients, period, named initial conditions,
/// horizon, and optional output spacing.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub omega: f64,
    pub specs: BTreeMap<String, CoeffSpec>,
    pub coefficients: Coefficients,
    /// positive-average (C2) diagnostics collected during validation
    pub warnings: Vec<String>,
    pub inits: Vec<(String, State)>,
    pub t_end: f64,
    pub dt: Option<f64>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.omega == other.omega
            && self.specs == other.specs
            && self.inits == other.inits
            && self.t_end == other.t_end
            && self.dt == other.dt
    }
}

impl Scenario {
    pub fn initial_condition(&self, name: &str) -> Option<State> {
        self.inits.iter().find(|(n, _)| n == name).map(|(_, s)| *s)
    }

    /// Canonical text form; parsing it back yields an identical scenario.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        writeln!(out, "omega = {}", self.omega).unwrap();
        for key in COEFF_KEYS {
            writeln!(out, "{key} = {}", self.specs[key].emit()).unwrap();
        }
        writeln!(out, "t_end = {}", self.t_end).unwrap();
        if let Some(dt) = self.dt {
            writeln!(out, "dt = {dt}").unwrap();
        }
        for (name, x) in &self.inits {
            writeln!(out, "init {name} = {},{},{}", x.s, x.i, x.y).unwrap();
        }
        out
    }
}

/// Parse and validate a scenario. `base_dir` anchors `sampled` file
/// references; `strict` promotes positive-average warnings to errors.
pub fn parse_config(text: &str, base_dir: &Path, strict: bool) -> Result<Scenario, ScenarioError> {
    let mut issues = Vec::new();
    let mut specs: BTreeMap<String, CoeffSpec> = BTreeMap::new();
    let mut omega: Option<f64> = None;
    let mut t_end: Option<f64> = None;
    let mut dt: Option<f64> = None;
    let mut inits: Vec<(String, State)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            issues.push(ParseIssue {
                line: line_no,
                message: format!("expected `key = value`, got {line:?}"),
            });
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        if let Some(name) = key.strip_prefix("init ") {
            match parse_init(value) {
                Ok(state) => inits.push((name.trim().to_string(), state)),
                Err(message) => issues.push(ParseIssue { line: line_no, message }),
            }
            continue;
        }
        match key {
            "omega" | "t_end" | "dt" => match value.parse::<f64>() {
                Ok(v) if v > 0.0 => match key {
                    "omega" => omega = Some(v),
                    "t_end" => t_end = Some(v),
                    _ => dt = Some(v),
                },
                _ => issues.push(ParseIssue {
                    line: line_no,
                    message: format!("{key} must be a positive number, got {value:?}"),
                }),
            },
            k if COEFF_KEYS.contains(&k) => match parse_coeff(value) {
                Ok(spec) => {
                    specs.insert(k.to_string(), spec);
                }
                Err(message) => issues.push(ParseIssue { line: line_no, message }),
            },
            _ => issues.push(ParseIssue {
                line: line_no,
                message: format!("unknown key {key:?}"),
            }),
        }
    }

    if omega.is_none() {
        issues.push(ParseIssue { line: 0, message: "missing key `omega`".into() });
    }
    for key in COEFF_KEYS {
        if !specs.contains_key(key) {
            issues.push(ParseIssue { line: 0, message: format!("missing coefficient `{key}`") });
        }
    }
    if !issues.is_empty() {
        return Err(ScenarioError::Parse(issues));
    }

    let omega = omega.unwrap();
    let build = |key: &str| specs[key].build(omega, base_dir);
    let coefficients = Coefficients {
        lambda: build("lambda")?,
        beta: build("beta")?,
        mu: build("mu")?,
        c: build("c")?,
        eta: build("eta")?,
        k: build("k")?,
        r: build("r")?,
        b: build("b")?,
    };
    let (coefficients, warnings) = coefficients.validated(strict).map_err(|e| {
        let issue = ParseIssue {
            line: 0,
            message: match &e {
                ModelError::NegativeCoefficient(name, min) => format!(
                    "nonnegativity condition (C1) violated: {name} attains minimum {min}"
                ),
                ModelError::NonpositiveAverage(msg) => {
                    format!("positive-average condition (C2) violated: {msg}")
                }
                other => other.to_string(),
            },
        };
        ScenarioError::Validation(vec![issue])
    })?;

    // negative initial conditions are rejected here, not in the integrator
    let mut validation = Vec::new();
    for (name, x) in &inits {
        if !(x.s >= 0.0 && x.i >= 0.0 && x.y >= 0.0 && x.is_finite()) {
            validation.push(ParseIssue {
                line: 0,
                message: format!("initial condition {name} = {x:?} leaves the nonnegative cone"),
            });
        }
    }
    if !validation.is_empty() {
        return Err(ScenarioError::Validation(validation));
    }

    Ok(Scenario {
        omega,
        specs,
        coefficients,
        warnings,
        inits,
        t_end: t_end.unwrap_or(100.0 * omega),
        dt,
    })
}

fn parse_coeff(value: &str) -> Result<CoeffSpec, String> {
    let mut parts = value.split_whitespace();
    let head = parts.next().ok_or("empty coefficient spec")?;
    let nums: Vec<&str> = parts.collect();
    let parse_f = |s: &str| {
        s.parse::<f64>().map_err(|_| format!("expected a number, got {s:?}"))
    };
    match head {
        "const" => {
            if nums.len() != 1 {
                return Err(format!("`const` takes 1 value, got {}", nums.len()));
            }
            Ok(CoeffSpec::Const(parse_f(nums[0])?))
        }
        "harmonic" => {
            if nums.len() != 3 {
                return Err(format!("`harmonic` takes base amp phase, got {}", nums.len()));
            }
            Ok(CoeffSpec::Harmonic {
                base: parse_f(nums[0])?,
                amp: parse_f(nums[1])?,
                phase: parse_f(nums[2])?,
            })
        }
        "sampled" => {
            if nums.len() != 1 {
                return Err("`sampled` takes one file path".into());
            }
            Ok(CoeffSpec::Sampled(nums[0].to_string()))
        }
        other => Err(format!("unknown coefficient form {other:?}")),
    }
}

fn parse_init(value: &str) -> Result<State, String> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("initial condition needs S,I,Y, got {value:?}"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| format!("expected a number, got {part:?}"))?;
    }
    Ok(State::new(v[0], v[1], v[2]))
}
