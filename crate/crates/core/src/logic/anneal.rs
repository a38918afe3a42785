//! Simulated-annealing fit of a single classification tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bits::{BitMatrix, Confusion};
use super::dnf::{to_dnf, Dnf};
use super::moves::{propose_move, MoveContext, MoveKind};
use super::tree::{Literal, LogicTree};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealParams {
    pub nleaves_max: usize,
    pub iterations: usize,
    /// `None` means `1 + initial_score / 10`.
    pub t_start: Option<f64>,
    /// Geometric ratio applied to the temperature after every iteration.
    pub cooling: f64,
    pub seed: u64,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams {
            nleaves_max: 30,
            iterations: 50_000,
            t_start: None,
            cooling: 0.999,
            seed: 0,
        }
    }
}

impl AnnealParams {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::invalid_argument("iterations must be >= 1"));
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return Err(Error::invalid_argument(format!("cooling {} outside (0, 1)", self.cooling)));
        }
        if self.nleaves_max == 0 {
            return Err(Error::invalid_argument("nleaves_max must be >= 1"));
        }
        if let Some(t) = self.t_start {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::invalid_argument(format!("t_start {t} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedLogicModel {
    pub tree: LogicTree,
    /// Training misclassifications.
    pub score: usize,
    pub predicted_when_true: u8,
    pub predicted_when_false: u8,
    /// `None` when the canonical form exceeds the term cap.
    pub dnf: Option<Dnf>,
    pub iterations_run: usize,
}

impl FittedLogicModel {
    pub fn predict(&self, row: &[u8]) -> u8 {
        if self.tree.eval(row) {
            self.predicted_when_true
        } else {
            self.predicted_when_false
        }
    }

    /// DNF of the condition under which the model predicts a case: the
    /// tree itself, or its complement when the labels are swapped. `None`
    /// when the model predicts a case everywhere or the form overflows.
    pub fn case_dnf(&self) -> Option<Dnf> {
        match (self.predicted_when_true, self.predicted_when_false) {
            (1, 0) => self.dnf.clone(),
            (0, 1) => to_dnf(&self.tree.negated()).ok(),
            (0, 0) => Some(Dnf::default()),
            _ => None,
        }
    }

    pub fn misclassifications(&self, d: &Dataset) -> usize {
        (0..d.n()).filter(|&i| self.predict(&d.row(i)) != d.y()[i]).count()
    }
}

/// State reported to a trace hook after every iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub iteration: usize,
    pub temperature: f64,
    pub kind: MoveKind,
    pub accepted: bool,
    pub current_score: usize,
    pub best_score: usize,
}

fn better(score: usize, leaves: usize, best_score: usize, best_leaves: usize) -> bool {
    score < best_score || (score == best_score && leaves < best_leaves)
}

pub fn anneal_fit(d: &Dataset, params: &AnnealParams) -> Result<FittedLogicModel> {
    anneal_fit_traced(d, params, |_| {})
}

/// Like [`anneal_fit`], calling `trace` once per iteration.
pub fn anneal_fit_traced(
    d: &Dataset,
    params: &AnnealParams,
    mut trace: impl FnMut(&TraceEvent),
) -> Result<FittedLogicModel> {
    params.validate()?;
    d.check_response()?;
    let bits = BitMatrix::from_dataset(d);
    let ctx = MoveContext {
        n_vars: d.p(),
        max_leaves: params.nleaves_max,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let score_of = |t: &LogicTree| bits.confusion(&bits.eval(t)).misclassified();

    let mut current = LogicTree::leaf(Literal {
        var: rng.gen_range(0..d.p()),
        negated: rng.gen_bool(0.5),
    });
    let mut current_score = score_of(&current);
    let mut best = current.clone();
    let mut best_score = current_score;
    let mut temperature = params.t_start.unwrap_or(1.0 + current_score as f64 / 10.0);

    for iteration in 0..params.iterations {
        let (mv, candidate) = propose_move(&current, &ctx, &mut rng);
        let cand_score = score_of(&candidate);
        let delta = cand_score as f64 - current_score as f64;
        let accepted = delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp();
        if accepted {
            current = candidate;
            current_score = cand_score;
            if better(current_score, current.n_leaves(), best_score, best.n_leaves()) {
                best = current.clone();
                best_score = current_score;
            }
        }
        trace(&TraceEvent {
            iteration,
            temperature,
            kind: mv.kind(),
            accepted,
            current_score,
            best_score,
        });
        temperature *= params.cooling;
    }

    let conf: Confusion = bits.confusion(&bits.eval(&best));
    Ok(FittedLogicModel {
        dnf: to_dnf(&best).ok(),
        score: conf.misclassified(),
        predicted_when_true: conf.label_when_true(),
        predicted_when_false: conf.label_when_false(),
        tree: best,
        iterations_run: params.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted(n: usize, p: usize, seed: u64, label: impl Fn(&[u8]) -> bool) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<u8>> = (0..n).map(|_| (0..p).map(|_| rng.gen_range(0..2u8)).collect()).collect();
        let y = rows.iter().map(|r| u8::from(label(r))).collect();
        Dataset::from_rows(&rows, y).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(AnnealParams::default().validate().is_ok());
        let bad = AnnealParams {
            cooling: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = AnnealParams {
            iterations: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn constant_response_is_error() {
        let d = Dataset::from_rows(&[vec![0, 1], vec![1, 0]], vec![1, 1]).unwrap();
        assert!(anneal_fit(&d, &AnnealParams::default()).is_err());
    }

    #[test]
    fn recovers_single_leaf_and_is_consistent() {
        let d = planted(100, 20, 5, |r| r[6] == 1);
        let params = AnnealParams {
            iterations: 5_000,
            seed: 11,
            ..Default::default()
        };
        let m = anneal_fit(&d, &params).unwrap();
        assert_eq!(m.score, 0);
        assert_eq!(m.misclassifications(&d), m.score);
        assert_eq!(m.tree.variables(), vec![6]);
        assert_eq!(anneal_fit(&d, &params).unwrap(), m);
    }

    #[test]
    fn best_score_never_increases() {
        let d = planted(80, 10, 2, |r| r[0] == 1 && r[1] == 1);
        let params = AnnealParams {
            iterations: 3_000,
            seed: 4,
            ..Default::default()
        };
        let mut last = usize::MAX;
        let m = anneal_fit_traced(&d, &params, |e| {
            assert!(e.best_score <= last);
            assert!(e.best_score <= e.current_score);
            last = e.best_score;
        })
        .unwrap();
        assert_eq!(m.score, last);
    }
}
