//! Key-value run report with a fixed line order.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use resolvent::{BigComplex, Error, ProjectivePoint};

/// How a run ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A residual or count check exceeded its limit.
    Failed(Vec<String>),
    Degenerate { stage: String, detail: String },
    PrecisionExhausted { stage: String, detail: String },
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Failed(_) => 1,
            Status::Degenerate { .. } => 3,
            Status::PrecisionExhausted { .. } => 4,
        }
    }
}

#[derive(Clone, Debug)]
struct Check {
    name: String,
    value: String,
    limit: String,
    pass: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
    branch_log: Vec<String>,
    checks: Vec<Check>,
    stage: String,
    error: Option<(String, Error)>,
    started: Option<Instant>,
    /// Wall time per stage; kept out of the rendered report.
    timings: Vec<(String, Duration)>,
}

pub fn complex(z: &BigComplex) -> String {
    let (re, im) = z.to_decimal_pair();
    format!("{re} {im}")
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Names the stage that subsequent errors are attributed to.
    pub fn stage(&mut self, name: &str) {
        self.finish();
        self.stage = name.to_string();
        self.started = Some(Instant::now());
    }

    /// Closes the timing of the current stage.
    pub fn finish(&mut self) {
        if let Some(t) = self.started.take() {
            self.timings.push((self.stage.clone(), t.elapsed()));
        }
    }

    pub fn timings(&self) -> &[(String, Duration)] {
        &self.timings
    }

    pub fn current_stage(&self) -> &str {
        &self.stage
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn put_complex(&mut self, key: &str, z: &BigComplex) {
        self.put(key, complex(z));
    }

    pub fn put_list(&mut self, key: &str, values: &[BigComplex]) {
        self.put(format!("{key}.len"), values.len());
        for (i, z) in values.iter().enumerate() {
            self.put_complex(&format!("{key}[{i}]"), z);
        }
    }

    pub fn put_points(&mut self, key: &str, points: &[ProjectivePoint]) {
        self.put(format!("{key}.len"), points.len());
        for (i, p) in points.iter().enumerate() {
            let coords: Vec<String> = p.coords().iter().map(complex).collect();
            self.put(format!("{key}[{i}]"), coords.join(" : "));
        }
    }

    pub fn log(&mut self, entry: impl Into<String>) {
        self.branch_log.push(entry.into());
    }

    /// Records `value <= limit`.
    pub fn residual(&mut self, name: &str, value: f64, limit: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            value: format!("{value:e}"),
            limit: format!("<= {limit:e}"),
            pass: value <= limit,
        });
    }

    /// Records an exact count.
    pub fn count(&mut self, name: &str, value: usize, expected: usize) {
        self.checks.push(Check {
            name: name.to_string(),
            value: value.to_string(),
            limit: format!("== {expected}"),
            pass: value == expected,
        });
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            value: value.to_string(),
            limit: "== true".to_string(),
            pass: value,
        });
    }

    pub fn fail(&mut self, err: Error) {
        self.error = Some((self.stage.clone(), err));
    }

    pub fn status(&self) -> Status {
        if let Some((stage, err)) = &self.error {
            let detail = err.to_string();
            return match err {
                Error::NonConvergence { .. } | Error::DuplicateCollision => Status::PrecisionExhausted {
                    stage: stage.clone(),
                    detail,
                },
                Error::VerificationFailed { check, .. } => Status::Failed(vec![check.clone()]),
                _ => Status::Degenerate {
                    stage: stage.clone(),
                    detail,
                },
            };
        }
        let failed: Vec<String> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
        if failed.is_empty() {
            Status::Ok
        } else {
            Status::Failed(failed)
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("report.version", "1");
        for (k, v) in &self.lines {
            line(k, v);
        }
        line("branch_log.len", &self.branch_log.len().to_string());
        for (i, b) in self.branch_log.iter().enumerate() {
            line(&format!("branch_log[{i}]"), b);
        }
        line("checks.len", &self.checks.len().to_string());
        for c in &self.checks {
            let mark = if c.pass { "ok" } else { "FAILED" };
            line(&format!("check.{}", c.name), &format!("{} {} {mark}", c.value, c.limit));
        }
        match self.status() {
            Status::Ok => line("status", "ok"),
            Status::Failed(names) => {
                line("status", "failed");
                line("failed_checks", &names.join(","));
            }
            Status::Degenerate { stage, detail } => {
                line("status", "degenerate");
                line("failed_stage", &stage);
                line("detail", &detail);
            }
            Status::PrecisionExhausted { stage, detail } => {
                line("status", "precision-exhausted");
                line("failed_stage", &stage);
                line("detail", &detail);
            }
        }
        out
    }
}
