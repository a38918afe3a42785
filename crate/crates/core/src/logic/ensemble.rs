//! Bootstrap ensembles and inclusion-frequency importance.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::anneal::{anneal_fit, AnnealParams, FittedLogicModel};
use super::dnf::Term;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceReport {
    pub b: usize,
    /// Fraction of models whose tree contains each variable (length `p`).
    pub variable_frequency: Vec<f64>,
    /// Fraction of models whose case-predicting DNF contains each term,
    /// most frequent first; ties in canonical term order.
    pub term_frequency: Vec<(Term, f64)>,
    pub models: Vec<FittedLogicModel>,
}

impl ImportanceReport {
    pub fn term(&self, t: &[super::tree::Literal]) -> f64 {
        let mut t = t.to_vec();
        t.sort_unstable();
        self.term_frequency
            .iter()
            .find(|(s, _)| *s == t)
            .map_or(0.0, |(_, f)| *f)
    }
}

/// Bootstrap resample `r` uses seed `seed ^ r`; its annealing seed is the
/// next draw of that stream.
pub fn ensemble_fit(d: &Dataset, params: &AnnealParams, b: usize) -> Result<ImportanceReport> {
    if b == 0 {
        return Err(Error::invalid_argument("bootstrap count must be >= 1"));
    }
    params.validate()?;
    let n = d.n();
    let models = (0..b as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ r);
            let rows: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            let boot = d.select_rows(&rows)?;
            let p = AnnealParams {
                seed: rng.gen(),
                ..*params
            };
            anneal_fit(&boot, &p)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut var_count = vec![0usize; d.p()];
    let mut term_count: HashMap<Term, usize> = HashMap::new();
    for m in &models {
        for v in m.tree.variables() {
            var_count[v] += 1;
        }
        if let Some(dnf) = &m.case_dnf() {
            for t in dnf.terms() {
                *term_count.entry(t.clone()).or_default() += 1;
            }
        }
    }
    let bf = b as f64;
    let mut term_frequency: Vec<(Term, f64)> = term_count
        .into_iter()
        .map(|(t, c)| (t, c as f64 / bf))
        .collect();
    term_frequency.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| a.0.len().cmp(&b.0.len()))
            .then_with(|| a.0.cmp(&b.0))
    });
    Ok(ImportanceReport {
        b,
        variable_frequency: var_count.into_iter().map(|c| c as f64 / bf).collect(),
        term_frequency,
        models,
    })
}
