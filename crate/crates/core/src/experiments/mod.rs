//! Simulation studies: score densities by variable class, success
//! histograms per criterion, the LS×CLS combination grid, and the
//! reduce-then-fit pipeline.
//!
//! Replicate `r` of every study generates its data with seed `seed ^ r`.
//! Replicates run in parallel and are aggregated in replicate order, so
//! results do not depend on the worker count.

pub mod density;
pub mod grid;
pub mod pipeline;
pub mod success;

pub use density::{run_density_study, variable_classes, DensityStudy, VariableClass};
pub use grid::{run_combo_grid, ComboGrid};
pub use pipeline::{run_pipeline_study, Method, PipelineConfig, PipelineReport};
pub use success::{run_success_study, SuccessHistogram};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::selection::{sample_size, Criterion};
use crate::simgen::{builtin_scenario_with, generate, Calibration, ScenarioSpec};

/// Desk-scale replicate count.
pub const DESK_REPLICATES: usize = 500;
/// Replicate count of a full-scale run.
pub const FULL_REPLICATES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: u8,
    pub n: usize,
    pub p: usize,
    pub replicates: usize,
    /// `None` means `sample_size(n)`.
    pub k: Option<usize>,
    pub criteria: Vec<Criterion>,
    pub seed: u64,
    pub calibration: Calibration,
}

impl ExperimentConfig {
    pub fn new(scenario: u8, n: usize, p: usize) -> Self {
        ExperimentConfig {
            scenario,
            n,
            p,
            replicates: DESK_REPLICATES,
            k: None,
            criteria: Criterion::SINGLE.to_vec(),
            seed: 0,
            calibration: Calibration::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::invalid_argument("replicates must be >= 1"));
        }
        if self.criteria.contains(&Criterion::Combined) {
            return Err(Error::invalid_argument(
                "studies take single criteria; the combined sampler has its own runners",
            ));
        }
        self.scenario_spec().map(|_| ())
    }

    /// Checks the resolved k against `p`, for the studies that select.
    pub fn validate_k(&self) -> Result<usize> {
        let k = self.resolved_k()?;
        if k == 0 || k > self.p {
            return Err(Error::invalid_argument(format!("k = {k} outside 1..={}", self.p)));
        }
        Ok(k)
    }

    pub fn resolved_k(&self) -> Result<usize> {
        match self.k {
            Some(k) => Ok(k),
            None => sample_size(self.n),
        }
    }

    pub fn scenario_spec(&self) -> Result<ScenarioSpec> {
        builtin_scenario_with(self.scenario, self.n, self.p, self.seed, self.calibration)
    }

    /// Dataset of replicate `r`.
    pub fn replicate(&self, spec: &ScenarioSpec, r: usize) -> Result<Dataset> {
        generate(&spec.replicate(r as u64))
    }

    /// Resolved settings as `key = value` pairs, defaults expanded.
    pub fn echo(&self) -> Vec<(String, String)> {
        let criteria: Vec<&str> = self.criteria.iter().map(|c| c.as_str()).collect();
        vec![
            ("scenario".into(), self.scenario.to_string()),
            ("n".into(), self.n.to_string()),
            ("p".into(), self.p.to_string()),
            ("replicates".into(), self.replicates.to_string()),
            (
                "k".into(),
                self.resolved_k().map_or_else(|e| e.to_string(), |k| k.to_string()),
            ),
            ("criteria".into(), criteria.join(",")),
            ("seed".into(), self.seed.to_string()),
            ("calibration".into(), self.calibration.to_string()),
        ]
    }
}

/// Mean and standard error of the mean.
pub(crate) fn mean_se(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

/// `# key = value` lines.
pub fn comment_header(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect()
}
