//! Synthetic wide binary data from a ground-truth DNF.
//!
//! Each explanatory variable is an independent Bernoulli draw; the response
//! is 1 exactly when all variables of some DNF term equal 1. Relevant
//! variables get calibrated probabilities so that cases and
//! controls are balanced; all others are Bernoulli(0.5).
//!
//! Replicate `r` of a study seeded with `s` uses seed `s ^ r`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Default probability of variables outside every term.
pub const BACKGROUND_PROB: f64 = 0.5;

/// How relevant variables are given their Bernoulli parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Calibration {
    /// Every term fires with the same probability `t`, with
    /// `1 − (1 − t)^T = prevalence`; a variable in a term of size `s` gets
    /// `t^(1/s)`.
    #[default]
    EqualTerm,
    /// A single probability `q` shared by all relevant variables, solving
    /// `1 − Π (1 − q^|term|) = prevalence`.
    Uniform,
}

impl std::str::FromStr for Calibration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal-term" | "equal_term" => Ok(Calibration::EqualTerm),
            "uniform" => Ok(Calibration::Uniform),
            other => Err(Error::invalid_argument(format!("unknown calibration {other:?}"))),
        }
    }
}

impl std::fmt::Display for Calibration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Calibration::EqualTerm => "equal-term",
            Calibration::Uniform => "uniform",
        })
    }
}

/// Ground-truth model and sampling parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub n: usize,
    pub p: usize,
    /// Conjunctions of positive literals (0-based variable indices).
    pub terms: Vec<Vec<usize>>,
    /// Bernoulli parameter of each variable.
    pub probs: Vec<f64>,
    pub seed: u64,
    /// Probability of flipping each label after DNF labeling. Zero gives
    /// the deterministic labeling used by every built-in study.
    pub flip_prob: f64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 {
            return Err(Error::invalid_argument("scenario needs n >= 1 and p >= 1"));
        }
        validate_terms(&self.terms, self.p)?;
        if self.probs.len() != self.p {
            return Err(Error::LengthMismatch {
                left: self.probs.len(),
                right: self.p,
            });
        }
        if let Some(q) = self.probs.iter().find(|q| !(0.0..=1.0).contains(*q)) {
            return Err(Error::invalid_argument(format!("probability {q} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&self.flip_prob) {
            return Err(Error::invalid_argument("flip_prob outside [0, 1]"));
        }
        Ok(())
    }

    /// Variables appearing in some term, ascending.
    pub fn relevant_variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Copy with a different seed.
    pub fn with_seed(&self, seed: u64) -> ScenarioSpec {
        ScenarioSpec {
            seed,
            ..self.clone()
        }
    }

    /// Copy seeded for replicate `r`.
    pub fn replicate(&self, r: u64) -> ScenarioSpec {
        self.with_seed(self.seed ^ r)
    }
}

fn validate_terms(terms: &[Vec<usize>], p: usize) -> Result<()> {
    for t in terms {
        if t.is_empty() {
            return Err(Error::invalid_argument("empty DNF term"));
        }
        if let Some(&j) = t.iter().find(|&&j| j >= p) {
            return Err(Error::invalid_argument(format!(
                "term variable {} outside 1..={p}",
                j + 1
            )));
        }
    }
    Ok(())
}

fn check_disjoint(terms: &[Vec<usize>]) -> Result<()> {
    let mut seen = HashSet::new();
    for t in terms {
        for &j in t {
            if !seen.insert(j) {
                return Err(Error::invalid_argument(format!(
                    "variable {} appears in more than one term; pass explicit probabilities",
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Terms of built-in scenario 1, 2 or 3 (0-based).
pub fn builtin_terms(id: u8) -> Result<Vec<Vec<usize>>> {
    let one_based: Vec<Vec<usize>> = match id {
        1 => (1..=10).map(|j| vec![j]).collect(),
        2 => vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8], vec![9], vec![10]],
        3 => vec![vec![1, 2, 3, 4], vec![5, 6, 7], vec![8, 9], vec![10]],
        other => return Err(Error::invalid_argument(format!("unknown scenario {other}"))),
    };
    Ok(one_based
        .into_iter()
        .map(|t| t.into_iter().map(|j| j - 1).collect())
        .collect())
}

/// Built-in scenario with probabilities calibrated to a prevalence of 0.5.
pub fn builtin_scenario(id: u8, n: usize, p: usize, seed: u64) -> Result<ScenarioSpec> {
    builtin_scenario_with(id, n, p, seed, Calibration::default())
}

pub fn builtin_scenario_with(
    id: u8,
    n: usize,
    p: usize,
    seed: u64,
    calibration: Calibration,
) -> Result<ScenarioSpec> {
    if p < 10 {
        return Err(Error::invalid_argument(format!("built-in scenarios need p >= 10, got {p}")));
    }
    let terms = builtin_terms(id)?;
    let probs = calibrated_probs(&terms, p, 0.5, calibration)?;
    Ok(ScenarioSpec {
        n,
        p,
        terms,
        probs,
        seed,
        flip_prob: 0.0,
    })
}

/// Prevalence `1 − Π (1 − Π_{j∈term} probs[j])` of a disjoint DNF.
pub fn prevalence(terms: &[Vec<usize>], probs: &[f64]) -> f64 {
    1.0 - terms
        .iter()
        .map(|t| 1.0 - t.iter().map(|&j| probs[j]).product::<f64>())
        .product::<f64>()
}

const BISECTION_TOL: f64 = 1e-10;

/// Common literal probability `q` with `1 − Π (1 − q^|term|) = target`,
/// found by bisection on (0, 1).
pub fn calibrate(terms: &[Vec<usize>], target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::invalid_argument(format!("target prevalence {target} outside (0, 1)")));
    }
    if terms.is_empty() || terms.iter().any(Vec::is_empty) {
        return Err(Error::invalid_argument("calibration needs non-empty terms"));
    }
    check_disjoint(terms)?;
    let prev = |q: f64| 1.0 - terms.iter().map(|t| 1.0 - q.powi(t.len() as i32)).product::<f64>();
    // prev is increasing in q, prev(0) = 0, prev(1) = 1.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if prev(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // One more refinement pass so the analytic prevalence at the returned
    // root is within ~1e-11 of the target.
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if prev(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Per-term firing probability `t = 1 − (1 − target)^(1/T)`.
pub fn equal_term_probability(n_terms: usize, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::invalid_argument(format!("target prevalence {target} outside (0, 1)")));
    }
    if n_terms == 0 {
        return Err(Error::invalid_argument("calibration needs at least one term"));
    }
    Ok(1.0 - (1.0 - target).powf(1.0 / n_terms as f64))
}

/// Full probability vector for `p` variables under a calibration rule.
pub fn calibrated_probs(
    terms: &[Vec<usize>],
    p: usize,
    target: f64,
    calibration: Calibration,
) -> Result<Vec<f64>> {
    validate_terms(terms, p)?;
    check_disjoint(terms)?;
    let mut probs = vec![BACKGROUND_PROB; p];
    match calibration {
        Calibration::Uniform => {
            let q = calibrate(terms, target)?;
            for &j in terms.iter().flatten() {
                probs[j] = q;
            }
        }
        Calibration::EqualTerm => {
            let t = equal_term_probability(terms.len(), target)?;
            for term in terms {
                let q = t.powf(1.0 / term.len() as f64);
                for &j in term {
                    probs[j] = q;
                }
            }
        }
    }
    Ok(probs)
}

/// True iff some term has all its variables present (`≥ 1`).
pub fn eval_dnf(terms: &[Vec<usize>], row: &[u8]) -> bool {
    terms.iter().any(|t| t.iter().all(|&j| row[j] >= 1))
}

/// Draws a dataset. Draw order is row-major over `(observation, variable)`;
/// label flips, if any, use further draws from the same stream.
pub fn generate(spec: &ScenarioSpec) -> Result<Dataset> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut x = vec![0u8; n * p];
    let mut row = vec![0u8; p];
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        for (j, v) in row.iter_mut().enumerate() {
            *v = u8::from(rng.gen::<f64>() < spec.probs[j]);
            x[j * n + i] = *v;
        }
        y.push(u8::from(eval_dnf(&spec.terms, &row)));
    }
    if spec.flip_prob > 0.0 {
        for v in y.iter_mut() {
            if rng.gen::<f64>() < spec.flip_prob {
                *v = 1 - *v;
            }
        }
    }
    Dataset::from_columns(n, p, x, y)
}

/// Parses the scenario text format: one term per line, comma-separated
/// 1-based indices. Blank lines and `#` comments are ignored.
pub fn parse_terms(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut terms = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut term = Vec::new();
        for (col, tok) in line.split(',').enumerate() {
            let tok = tok.trim();
            let j: usize = tok.parse().map_err(|_| Error::Parse {
                row: lineno + 1,
                column: col + 1,
                message: format!("invalid variable index {tok:?}"),
            })?;
            if j == 0 {
                return Err(Error::Parse {
                    row: lineno + 1,
                    column: col + 1,
                    message: "variable indices are 1-based".into(),
                });
            }
            term.push(j - 1);
        }
        terms.push(term);
    }
    Ok(terms)
}

pub fn format_terms(terms: &[Vec<usize>]) -> String {
    let mut out = String::new();
    for t in terms {
        let line: Vec<String> = t.iter().map(|j| (j + 1).to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
