use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rng::RNG_ALGORITHM;

pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Number of standard errors in a verdict band.
pub const SIGMA_BAND: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    /// Two-sided agreement.
    #[serde(rename = "==")]
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// How a report's verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `estimate +- 3 SE` against the bound.
    ThreeSigma,
    /// Plain comparison of the estimate with the bound.
    Point,
    /// Decided by the experiment (e.g. a monotonicity scan).
    Custom,
}

/// Three-standard-error verdict. A zero standard error reduces to the point
/// comparison.
pub fn judge(estimate: f64, std_error: f64, bound: f64, cmp: Comparison) -> Verdict {
    if !estimate.is_finite() || !std_error.is_finite() {
        return Verdict::Inconclusive;
    }
    let band = SIGMA_BAND * std_error;
    match cmp {
        Comparison::Le => {
            if estimate + band <= bound {
                Verdict::Pass
            } else if estimate - band > bound {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
        Comparison::Ge => {
            if estimate - band >= bound {
                Verdict::Pass
            } else if estimate + band < bound {
                Verdict::Fail
            } else {
                Verdict::Inconclusive
            }
        }
        Comparison::Eq => {
            if (estimate - bound).abs() <= band {
                Verdict::Pass
            } else {
                Verdict::Fail
            }
        }
    }
}

pub fn judge_point(estimate: f64, bound: f64, cmp: Comparison) -> Verdict {
    let ok = match cmp {
        Comparison::Le => estimate <= bound,
        Comparison::Ge => estimate >= bound,
        Comparison::Eq => estimate == bound,
    };
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// One experiment outcome with everything needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    pub comparison: Comparison,
    pub verdict: Verdict,
    pub rule: Rule,
    pub replicas: u64,
    pub seed: u64,
    pub code_version: String,
    pub rng: String,
    pub note: String,
}

impl ExperimentReport {
    /// A report judged by the three-standard-error rule.
    pub fn new(name: &str, estimate: f64, stderr: f64, bound: f64, comparison: Comparison) -> Self {
        ExperimentReport {
            name: name.to_string(),
            params: BTreeMap::new(),
            estimate,
            stderr,
            bound,
            comparison,
            verdict: judge(estimate, stderr, bound, comparison),
            rule: Rule::ThreeSigma,
            replicas: 1,
            seed: 0,
            code_version: CODE_VERSION.to_string(),
            rng: RNG_ALGORITHM.to_string(),
            note: String::new(),
        }
    }

    /// A report judged by the plain comparison `estimate cmp bound`.
    pub fn point(name: &str, estimate: f64, stderr: f64, bound: f64, comparison: Comparison) -> Self {
        let mut r = ExperimentReport::new(name, estimate, stderr, bound, comparison);
        r.verdict = judge_point(estimate, bound, comparison);
        r.rule = Rule::Point;
        r
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn replicas(mut self, replicas: u64) -> Self {
        self.replicas = replicas;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn with_verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self.rule = Rule::Custom;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Sample mean with the standard error `s / sqrt(n)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl MeanEstimate {
    /// Summation in slice order, so results do not depend on scheduling.
    pub fn from_values(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return MeanEstimate {
                mean: f64::NAN,
                std_error: f64::NAN,
                n,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n - 1) as f64 / n as f64).sqrt()
        } else {
            0.0
        };
        MeanEstimate { mean, std_error, n }
    }

    /// Bernoulli frequency with the binomial standard error.
    pub fn from_successes(successes: u64, n: u64) -> Self {
        let p = successes as f64 / n as f64;
        MeanEstimate {
            mean: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            n: n as usize,
        }
    }
}
