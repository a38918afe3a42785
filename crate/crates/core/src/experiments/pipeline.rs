//! Reduce the variables, then fit a logic-regression ensemble on what is
//! left, and check which ground-truth terms come back.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;

use super::{mean_se, ExperimentConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::leverage::compute_scores;
use crate::logic::{ensemble_fit, AnnealParams, Literal, Term};
use crate::selection::{select_with_scores, CombinedMode, CombinedSpec, Criterion, SelectionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// No reduction.
    None,
    Single(Criterion),
    /// The `ls` lowest leverages, then the best cross-leverages among the
    /// rest up to `total`.
    Combined { ls: usize, total: usize },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::None => f.write_str("none"),
            Method::Single(c) => write!(f, "{c}"),
            Method::Combined { ls, total } => write!(f, "combined_{ls}ls_{}cls", total - ls),
        }
    }
}

impl Method {
    /// Indices kept, in selection order.
    pub fn reduce(&self, d: &Dataset, k: usize) -> Result<Vec<usize>> {
        let spec = match *self {
            Method::None => return Ok((0..d.p()).collect()),
            Method::Single(c) => SelectionSpec::new(c, k),
            Method::Combined { ls, total } => {
                if ls > total {
                    return Err(Error::invalid_argument("combined LS count exceeds the total"));
                }
                SelectionSpec::combined(CombinedSpec {
                    pct_cls: 0.0,
                    pct_ls: ls as f64 / d.p() as f64,
                    mode: CombinedMode::SequentialDisjoint { total },
                })
            }
        };
        let scores = compute_scores(d)?;
        Ok(select_with_scores(d, Some(&scores), &spec)?.indices)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub base: ExperimentConfig,
    pub methods: Vec<Method>,
    pub anneal: AnnealParams,
    pub bootstraps: usize,
}

impl PipelineConfig {
    /// All six methods; the combined split takes 100 by LS and fills to `k`.
    pub fn new(base: ExperimentConfig) -> Result<Self> {
        let k = base.validate_k()?;
        let mut methods = vec![Method::None];
        methods.extend(Criterion::SINGLE.iter().map(|&c| Method::Single(c)));
        methods.push(Method::Combined {
            ls: 100.min(k),
            total: k,
        });
        Ok(PipelineConfig {
            base,
            methods,
            anneal: AnnealParams::default(),
            bootstraps: 20,
        })
    }

    pub fn echo(&self) -> Vec<(String, String)> {
        let mut e = self.base.echo();
        let methods: Vec<String> = self.methods.iter().map(ToString::to_string).collect();
        e.push(("methods".into(), methods.join(",")));
        e.push(("bootstraps".into(), self.bootstraps.to_string()));
        e.push(("nleaves_max".into(), self.anneal.nleaves_max.to_string()));
        e.push(("iterations".into(), self.anneal.iterations.to_string()));
        e.push((
            "t_start".into(),
            self.anneal.t_start.map_or("auto".into(), |t| t.to_string()),
        ));
        e.push(("cooling".into(), self.anneal.cooling.to_string()));
        e.push(("anneal_seed".into(), self.anneal.seed.to_string()));
        e
    }
}

/// One method on one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineRow {
    pub replicate: usize,
    pub method: Method,
    pub kept: usize,
    /// Relevant variables surviving the reduction.
    pub captured: usize,
    /// Ensemble frequency of each ground-truth term, exact match only.
    pub term_frequency: Vec<f64>,
    /// Ensemble inclusion frequency of each relevant variable.
    pub variable_frequency: Vec<f64>,
    pub fit_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    /// Ground-truth terms, 0-based.
    pub terms: Vec<Vec<usize>>,
    pub relevant: Vec<usize>,
    pub rows: Vec<PipelineRow>,
}

fn term_of(vars: &[usize]) -> Term {
    let mut t: Term = vars.iter().map(|&j| Literal::pos(j)).collect();
    t.sort_unstable();
    t
}

pub fn run_pipeline_study(config: &PipelineConfig) -> Result<PipelineReport> {
    let base = &config.base;
    base.validate()?;
    config.anneal.validate()?;
    if config.bootstraps == 0 {
        return Err(Error::invalid_argument("bootstraps must be >= 1"));
    }
    let spec = base.scenario_spec()?;
    let relevant = spec.relevant_variables();
    let truth: Vec<Term> = spec.terms.iter().map(|t| term_of(t)).collect();
    let k = base.validate_k()?;
    let per_rep: Vec<Vec<PipelineRow>> = (0..base.replicates)
        .into_par_iter()
        .map(|r| {
            let d = base.replicate(&spec, r)?;
            config
                .methods
                .iter()
                .map(|&method| {
                    let kept = method.reduce(&d, k)?;
                    let reduced = d.select_columns(&kept)?;
                    let params = AnnealParams {
                        seed: config.anneal.seed ^ r as u64,
                        ..config.anneal
                    };
                    let start = Instant::now();
                    let rep = ensemble_fit(&reduced, &params, config.bootstraps)?;
                    let fit_seconds = start.elapsed().as_secs_f64();
                    // Map fitted terms back to original indices.
                    let fitted: Vec<(Term, f64)> = rep
                        .term_frequency
                        .iter()
                        .map(|(t, f)| {
                            let mut u: Term = t
                                .iter()
                                .map(|l| Literal {
                                    var: kept[l.var],
                                    negated: l.negated,
                                })
                                .collect();
                            u.sort_unstable();
                            (u, *f)
                        })
                        .collect();
                    let term_frequency = truth
                        .iter()
                        .map(|t| fitted.iter().find(|(u, _)| u == t).map_or(0.0, |(_, f)| *f))
                        .collect();
                    let variable_frequency = relevant
                        .iter()
                        .map(|j| kept.iter().position(|k| k == j).map_or(0.0, |pos| rep.variable_frequency[pos]))
                        .collect();
                    Ok(PipelineRow {
                        replicate: r,
                        method,
                        kept: kept.len(),
                        captured: relevant.iter().filter(|j| kept.contains(j)).count(),
                        term_frequency,
                        variable_frequency,
                        fit_seconds,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(PipelineReport {
        config: config.clone(),
        terms: spec.terms.clone(),
        relevant,
        rows: per_rep.into_iter().flatten().collect(),
    })
}

/// Per-method aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub mean_captured: f64,
    /// Per ground-truth term: fraction of replicates where it appears at
    /// all, and its mean frequency.
    pub term_found: Vec<(f64, f64)>,
    pub mean_fit_seconds: f64,
}

impl PipelineReport {
    pub fn summaries(&self) -> Vec<MethodSummary> {
        self.config
            .methods
            .iter()
            .map(|&m| {
                let rows: Vec<&PipelineRow> = self.rows.iter().filter(|r| r.method == m).collect();
                let reps = rows.len() as f64;
                let captured: Vec<f64> = rows.iter().map(|r| r.captured as f64).collect();
                let term_found = (0..self.terms.len())
                    .map(|t| {
                        let found = rows.iter().filter(|r| r.term_frequency[t] > 0.0).count() as f64 / reps;
                        let mean = rows.iter().map(|r| r.term_frequency[t]).sum::<f64>() / reps;
                        (found, mean)
                    })
                    .collect();
                MethodSummary {
                    method: m,
                    mean_captured: mean_se(&captured).0,
                    term_found,
                    mean_fit_seconds: rows.iter().map(|r| r.fit_seconds).sum::<f64>() / reps,
                }
            })
            .collect()
    }

    fn term_label(t: &[usize]) -> String {
        t.iter().map(|j| format!("X{}", j + 1)).collect::<Vec<_>>().join("&")
    }

    /// Deterministic per-replicate rows (no timings).
    pub fn rows_tsv(&self) -> String {
        let mut out = String::from("replicate\tmethod\tkept\tcaptured");
        for t in &self.terms {
            out.push_str(&format!("\tterm:{}", Self::term_label(t)));
        }
        for j in &self.relevant {
            out.push_str(&format!("\tvar:X{}", j + 1));
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{}\t{}\t{}\t{}", r.replicate, r.method, r.kept, r.captured));
            for f in r.term_frequency.iter().chain(&r.variable_frequency) {
                out.push_str(&format!("\t{f:.4}"));
            }
            out.push('\n');
        }
        out
    }

    /// Per-method summary (no timings).
    pub fn summary_tsv(&self) -> String {
        let mut out = String::from("method\tterm\tfound_fraction\tmean_frequency\n");
        for s in self.summaries() {
            out.push_str(&format!("{}\tcaptured_mean\t\t{:.4}\n", s.method, s.mean_captured));
            for (t, (found, mean)) in self.terms.iter().zip(&s.term_found) {
                out.push_str(&format!("{}\t{}\t{found:.4}\t{mean:.4}\n", s.method, Self::term_label(t)));
            }
        }
        out
    }

    /// Wall-clock fit times; varies between runs.
    pub fn timing_tsv(&self) -> String {
        let mut out = String::from("replicate\tmethod\tkept\tfit_seconds\n");
        for r in &self.rows {
            out.push_str(&format!("{}\t{}\t{}\t{:.6}\n", r.replicate, r.method, r.kept, r.fit_seconds));
        }
        out
    }
}
