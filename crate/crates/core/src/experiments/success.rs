//! How many ground-truth variables each criterion captures in its top k.

use rayon::prelude::*;

use super::{mean_se, ExperimentConfig};
use crate::error::Result;
use crate::leverage::compute_scores;
use crate::selection::{select_with_scores, Criterion, SelectionSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessHistogram {
    pub criterion: Criterion,
    /// `counts[c]` replicates captured exactly `c` relevant variables.
    pub counts: Vec<usize>,
    pub mean_captured: f64,
    pub std_err: f64,
}

impl SuccessHistogram {
    fn from_captures(criterion: Criterion, relevant: usize, captured: &[usize]) -> Self {
        let mut counts = vec![0; relevant + 1];
        for &c in captured {
            counts[c] += 1;
        }
        let as_f: Vec<f64> = captured.iter().map(|&c| c as f64).collect();
        let (mean_captured, std_err) = mean_se(&as_f);
        SuccessHistogram {
            criterion,
            counts,
            mean_captured,
            std_err,
        }
    }

    pub fn replicates(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Fraction of replicates capturing at least `c` relevant variables.
    pub fn at_least(&self, c: usize) -> f64 {
        self.counts[c.min(self.counts.len())..].iter().sum::<usize>() as f64 / self.replicates() as f64
    }
}

/// One histogram per configured criterion, in configured order.
pub fn run_success_study(config: &ExperimentConfig) -> Result<Vec<SuccessHistogram>> {
    config.validate()?;
    let spec = config.scenario_spec()?;
    let relevant = spec.relevant_variables();
    let k = config.validate_k()?;
    let per_rep: Vec<Vec<usize>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let d = config.replicate(&spec, r)?;
            let scores = compute_scores(&d)?;
            config
                .criteria
                .iter()
                .map(|&c| {
                    let sel = select_with_scores(&d, Some(&scores), &SelectionSpec::new(c, k))?;
                    Ok(sel.indices.iter().filter(|j| relevant.binary_search(j).is_ok()).count())
                })
                .collect::<Result<Vec<usize>>>()
        })
        .collect::<Result<_>>()?;
    Ok(config
        .criteria
        .iter()
        .enumerate()
        .map(|(ci, &c)| {
            let captured: Vec<usize> = per_rep.iter().map(|v| v[ci]).collect();
            SuccessHistogram::from_captures(c, relevant.len(), &captured)
        })
        .collect())
}

/// `criterion  captured  count`, plus per-criterion summary lines.
pub fn success_tsv(hists: &[SuccessHistogram]) -> String {
    let mut out = String::from("criterion\tcaptured\tcount\n");
    for h in hists {
        for (c, &n) in h.counts.iter().enumerate() {
            out.push_str(&format!("{}\t{c}\t{n}\n", h.criterion));
        }
    }
    out
}

pub fn success_summary_tsv(hists: &[SuccessHistogram]) -> String {
    let mut out = String::from("criterion\treplicates\tmean_captured\tstd_err\tat_least_8\n");
    for h in hists {
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}\n",
            h.criterion,
            h.replicates(),
            h.mean_captured,
            h.std_err,
            h.at_least(8)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_selection_is_point_mass() {
        let mut cfg = ExperimentConfig::new(1, 20, 30);
        cfg.replicates = 5;
        cfg.k = Some(30);
        for h in run_success_study(&cfg).unwrap() {
            assert_eq!(h.counts[10], 5);
            assert_eq!(h.mean_captured, 10.0);
            assert_eq!(h.at_least(8), 1.0);
        }
    }

    #[test]
    fn mass_is_conserved_and_deterministic() {
        let mut cfg = ExperimentConfig::new(3, 30, 80);
        cfg.replicates = 12;
        cfg.seed = 5;
        cfg.k = Some(30);
        let a = run_success_study(&cfg).unwrap();
        assert_eq!(a.len(), 4);
        for h in &a {
            assert_eq!(h.replicates(), 12);
            let mean = h.counts.iter().enumerate().map(|(c, &n)| (c * n) as f64).sum::<f64>() / 12.0;
            assert!((mean - h.mean_captured).abs() < 1e-12);
        }
        assert_eq!(run_success_study(&cfg).unwrap(), a);
    }
}
