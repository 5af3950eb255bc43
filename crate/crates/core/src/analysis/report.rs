//! Battery runner and report serialization.
//!
//! Two renderings exist. The text form is a header followed by one
//! `name | statistic | p-value | verdict` line per test. The JSON Lines form
//! emits one object per line; every object has a `"record"` field naming its
//! kind (`summary`, `test`, `autocorrelation`, `prd`, `sensitivity`). The
//! fields of each kind are documented in the README.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use super::nist::{self, CusumMode, Minimums};
use super::sensitivity::SensitivityRow;
use super::stats::{autocorrelation, max_offpeak};
use crate::error::Result;

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_MAX_LAG: usize = 1000;

/// Tests that the full suite defines but this crate leaves to external
/// tooling (export the stream with `keystream --format ascii`).
pub const NOT_IMPLEMENTED: [&str; 4] = [
    "Rank",
    "Linear Complexity",
    "Lempel-Ziv Compression",
    "Overlapping Template",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatteryConfig {
    pub alpha: f64,
    pub block_len: usize,
    pub serial_m: usize,
    pub apen_m: usize,
    pub max_lag: usize,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            alpha: DEFAULT_ALPHA,
            block_len: nist::DEFAULT_BLOCK_LEN,
            serial_m: nist::DEFAULT_SERIAL_M,
            apen_m: nist::DEFAULT_APEN_M,
            max_lag: DEFAULT_MAX_LAG,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotImplemented,
    Skipped,
}

impl Verdict {
    fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotImplemented => "NOT IMPLEMENTED",
            Verdict::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Computed {
        statistic: f64,
        p_value: f64,
    },
    NotImplemented,
    /// The test could not run on this input (too short, degenerate).
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestEntry {
    pub name: String,
    pub outcome: Outcome,
}

impl TestEntry {
    pub fn p_value(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Computed { p_value, .. } => Some(p_value),
            _ => None,
        }
    }

    pub fn verdict(&self, alpha: f64) -> Verdict {
        match &self.outcome {
            Outcome::Computed { p_value, .. } if *p_value >= alpha => Verdict::Pass,
            Outcome::Computed { .. } => Verdict::Fail,
            Outcome::NotImplemented => Verdict::NotImplemented,
            Outcome::Skipped(_) => Verdict::Skipped,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutocorrSummary {
    pub max_lag: usize,
    pub lag: usize,
    pub max_abs: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnalysisReport {
    pub alpha: f64,
    pub bit_count: Option<usize>,
    pub tests: Vec<TestEntry>,
    pub autocorrelation: Option<AutocorrSummary>,
    /// Percent residual deviation between original and encrypted signal.
    pub prd: Option<f64>,
    pub sensitivity_rows: Vec<SensitivityRow>,
}

fn computed(r: Result<nist::TestResult>) -> Outcome {
    match r {
        Ok(t) => Outcome::Computed {
            statistic: t.statistic,
            p_value: t.p_value,
        },
        Err(e) => Outcome::Skipped(e.to_string()),
    }
}

/// Runs the nine implemented tests and the keystream autocorrelation.
pub fn run_battery(bits: &[bool], config: &BatteryConfig) -> AnalysisReport {
    let enforce = Minimums::Enforce;
    let serial = match nist::serial(bits, config.serial_m, enforce) {
        Ok(s) => Outcome::Computed {
            statistic: s.del1,
            p_value: s.min_p(),
        },
        Err(e) => Outcome::Skipped(e.to_string()),
    };
    let mut tests = vec![
        TestEntry {
            name: "Frequency".into(),
            outcome: computed(nist::frequency(bits, enforce)),
        },
        TestEntry {
            name: "Block Frequency".into(),
            outcome: computed(nist::block_frequency(bits, config.block_len, enforce)),
        },
        TestEntry {
            name: "Cusum-Forward".into(),
            outcome: computed(nist::cusum(bits, CusumMode::Forward, enforce)),
        },
        TestEntry {
            name: "Cusum-Reverse".into(),
            outcome: computed(nist::cusum(bits, CusumMode::Reverse, enforce)),
        },
        TestEntry {
            name: "Runs".into(),
            outcome: computed(nist::runs(bits, enforce)),
        },
        TestEntry {
            name: "Longest Runs".into(),
            outcome: computed(nist::longest_run(bits)),
        },
        TestEntry {
            name: "FFT".into(),
            outcome: computed(nist::spectral(bits, enforce)),
        },
        TestEntry {
            name: "Serial".into(),
            outcome: serial,
        },
        TestEntry {
            name: "Approximate Entropy".into(),
            outcome: computed(nist::approximate_entropy(bits, config.apen_m, enforce)),
        },
    ];
    tests.extend(NOT_IMPLEMENTED.iter().map(|name| TestEntry {
        name: (*name).into(),
        outcome: Outcome::NotImplemented,
    }));

    let bipolar: Vec<f64> = bits.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect();
    let autocorr = autocorrelation(&bipolar, config.max_lag)
        .ok()
        .and_then(|r| {
            let max_lag = r.len() - 1;
            max_offpeak(&r).map(|(lag, max_abs)| AutocorrSummary {
                max_lag,
                lag,
                max_abs,
            })
        });

    AnalysisReport {
        alpha: config.alpha,
        bit_count: Some(bits.len()),
        tests,
        autocorrelation: autocorr,
        prd: None,
        sensitivity_rows: Vec::new(),
    }
}

impl AnalysisReport {
    pub fn test(&self, name: &str) -> Option<&TestEntry> {
        self.tests.iter().find(|t| t.name == name)
    }

    /// True when every computed test passes at `alpha`.
    pub fn all_computed_pass(&self) -> bool {
        self.tests
            .iter()
            .all(|t| !matches!(t.verdict(self.alpha), Verdict::Fail | Verdict::Skipped))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.tests.is_empty() {
            if let Some(n) = self.bit_count {
                let _ = writeln!(out, "bits: {n}");
            }
            let _ = writeln!(out, "alpha: {}", self.alpha);
            let _ = writeln!(
                out,
                "{:<24} | {:>14} | {:>10} | verdict",
                "test", "statistic", "p-value"
            );
            for t in &self.tests {
                let (stat, p) = match &t.outcome {
                    Outcome::Computed { statistic, p_value } => {
                        (format!("{statistic:.6}"), format!("{p_value:.6}"))
                    }
                    _ => ("-".to_string(), "-".to_string()),
                };
                let _ = write!(
                    out,
                    "{:<24} | {:>14} | {:>10} | {}",
                    t.name,
                    stat,
                    p,
                    t.verdict(self.alpha).label()
                );
                if let Outcome::Skipped(reason) = &t.outcome {
                    let _ = write!(out, " ({reason})");
                }
                out.push('\n');
            }
        }
        if let Some(a) = &self.autocorrelation {
            let _ = writeln!(
                out,
                "autocorrelation: max |r(tau)| = {:.7} at tau = {} (tau in 1..={})",
                a.max_abs, a.lag, a.max_lag
            );
        }
        if let Some(prd) = self.prd {
            let _ = writeln!(out, "prd(original, encrypted): {prd:.3} %");
        }
        if !self.sensitivity_rows.is_empty() {
            let _ = writeln!(out, "{:<24} | % difference", "decryption key");
            for row in &self.sensitivity_rows {
                let _ = write!(out, "{:<24} | {:.3}", row.label, row.percent_difference);
                if row.sub_ulp {
                    out.push_str(" (sub-ulp perturbation)");
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json_lines(&self) -> String {
        let mut records = Vec::new();
        records.push(json!({
            "record": "summary",
            "alpha": self.alpha,
            "bit_count": self.bit_count,
        }));
        for t in &self.tests {
            let (statistic, p_value, note) = match &t.outcome {
                Outcome::Computed { statistic, p_value } => {
                    (Some(*statistic), Some(*p_value), None)
                }
                Outcome::NotImplemented => (None, None, None),
                Outcome::Skipped(reason) => (None, None, Some(reason.clone())),
            };
            records.push(json!({
                "record": "test",
                "name": t.name,
                "statistic": statistic,
                "p_value": p_value,
                "verdict": t.verdict(self.alpha),
                "note": note,
            }));
        }
        if let Some(a) = &self.autocorrelation {
            records.push(json!({
                "record": "autocorrelation",
                "max_abs": a.max_abs,
                "lag": a.lag,
                "max_lag": a.max_lag,
            }));
        }
        if let Some(prd) = self.prd {
            records.push(json!({ "record": "prd", "percent": prd }));
        }
        for row in &self.sensitivity_rows {
            let mut v = serde_json::to_value(row).expect("row serializes");
            v["record"] = json!("sensitivity");
            records.push(v);
        }
        let mut out = String::new();
        for r in records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        out
    }
}
