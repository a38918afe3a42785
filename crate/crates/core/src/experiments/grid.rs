//! Union-mode LS×CLS combination grid.

use rayon::prelude::*;

use super::{mean_se, ExperimentConfig};
use crate::error::Result;
use crate::leverage::compute_scores;
use crate::selection::{fraction_count, rank_order, rank_positions, ranking_keys, Criterion, SelectionSpec};

/// Percentages 0%, 10%, …, 90%.
pub const GRID_LEVELS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ComboGrid {
    /// Fractions along both axes.
    pub levels: Vec<f64>,
    /// `mean[a][b]`: mean captured proportion with `levels[a]` by CLS and
    /// `levels[b]` by LS.
    pub mean: Vec<Vec<f64>>,
    pub std_err: Vec<Vec<f64>>,
    pub replicates: usize,
}

impl ComboGrid {
    pub fn cell(&self, pct_cls: usize, pct_ls: usize) -> f64 {
        self.mean[pct_cls / 10][pct_ls / 10]
    }

    pub fn cell_se(&self, pct_cls: usize, pct_ls: usize) -> f64 {
        self.std_err[pct_cls / 10][pct_ls / 10]
    }

    /// `pct_cls  pct_ls  mean  std_err`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("pct_cls\tpct_ls\tmean_proportion\tstd_err\n");
        for (a, row) in self.mean.iter().enumerate() {
            for (b, m) in row.iter().enumerate() {
                out.push_str(&format!("{}\t{}\t{m:.6}\t{:.6}\n", a * 10, b * 10, self.std_err[a][b]));
            }
        }
        out
    }
}

/// A variable is captured in cell `(a, b)` iff it ranks within the first
/// `⌈a·p⌉` by CLS or the first `⌈b·p⌉` by LS.
pub fn run_combo_grid(config: &ExperimentConfig) -> Result<ComboGrid> {
    config.validate()?;
    let spec = config.scenario_spec()?;
    let relevant = spec.relevant_variables();
    let p = config.p;
    let levels: Vec<f64> = (0..GRID_LEVELS).map(|i| i as f64 / 10.0).collect();
    let counts: Vec<usize> = levels.iter().map(|&f| fraction_count(f, p)).collect();
    let keys_spec = SelectionSpec::new(Criterion::Cls, 1);
    let per_rep: Vec<Vec<f64>> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let d = config.replicate(&spec, r)?;
            let scores = compute_scores(&d)?;
            let cls = rank_positions(&rank_order(&ranking_keys(&d, Some(&scores), &keys_spec, Criterion::Cls)?.keys));
            let ls = rank_positions(&rank_order(&ranking_keys(&d, Some(&scores), &keys_spec, Criterion::Ls)?.keys));
            let mut cells = vec![0.0; GRID_LEVELS * GRID_LEVELS];
            for (a, &ca) in counts.iter().enumerate() {
                for (b, &cb) in counts.iter().enumerate() {
                    let hit = relevant.iter().filter(|&&j| cls[j] < ca || ls[j] < cb).count();
                    cells[a * GRID_LEVELS + b] = hit as f64 / relevant.len() as f64;
                }
            }
            Ok(cells)
        })
        .collect::<Result<_>>()?;
    let mut mean = vec![vec![0.0; GRID_LEVELS]; GRID_LEVELS];
    let mut std_err = vec![vec![0.0; GRID_LEVELS]; GRID_LEVELS];
    for a in 0..GRID_LEVELS {
        for b in 0..GRID_LEVELS {
            let v: Vec<f64> = per_rep.iter().map(|c| c[a * GRID_LEVELS + b]).collect();
            let (m, se) = mean_se(&v);
            mean[a][b] = m;
            std_err[a][b] = se;
        }
    }
    Ok(ComboGrid {
        levels,
        mean,
        std_err,
        replicates: config.replicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::{select_combined, CombinedMode};
    use crate::simgen::generate;

    #[test]
    fn grid_matches_direct_union_selection() {
        let mut cfg = ExperimentConfig::new(3, 25, 60);
        cfg.replicates = 3;
        cfg.seed = 9;
        cfg.k = Some(20);
        let g = run_combo_grid(&cfg).unwrap();
        assert_eq!(g.cell(0, 0), 0.0);
        let spec = cfg.scenario_spec().unwrap();
        let relevant = spec.relevant_variables();
        for (a, b) in [(10, 10), (20, 0), (0, 80), (50, 30)] {
            let mut total = 0.0;
            for r in 0..3 {
                let d = generate(&spec.replicate(r)).unwrap();
                let s = select_combined(&d, a as f64 / 100.0, b as f64 / 100.0, CombinedMode::Union).unwrap();
                total += s.indices.iter().filter(|j| relevant.contains(j)).count() as f64 / 10.0;
            }
            assert!((g.cell(a, b) - total / 3.0).abs() < 1e-12, "cell ({a}, {b})");
        }
    }
}
