//! Pooled leverage and cross-leverage samples per ground-truth class.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use super::ExperimentConfig;
use crate::error::Result;
use crate::leverage::compute_scores;
use crate::stats::{kde_with_bandwidth, silverman_bandwidth};

/// Ground-truth role of a variable. Orders as interactions (highest order
/// first), then main effects, then irrelevant variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VariableClass {
    /// Member of a term with this many (≥ 2) variables; stored negated so
    /// higher orders sort first.
    Interaction(std::cmp::Reverse<usize>),
    Main,
    Irrelevant,
}

impl VariableClass {
    pub fn interaction(order: usize) -> Self {
        VariableClass::Interaction(std::cmp::Reverse(order))
    }

    pub fn is_relevant(self) -> bool {
        self != VariableClass::Irrelevant
    }
}

impl fmt::Display for VariableClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableClass::Interaction(o) => write!(f, "interaction{}", o.0),
            VariableClass::Main => f.write_str("main"),
            VariableClass::Irrelevant => f.write_str("irrelevant"),
        }
    }
}

/// Class of every variable given the DNF terms.
pub fn variable_classes(terms: &[Vec<usize>], p: usize) -> Vec<VariableClass> {
    let mut classes = vec![VariableClass::Irrelevant; p];
    for t in terms {
        let c = if t.len() == 1 {
            VariableClass::Main
        } else {
            VariableClass::interaction(t.len())
        };
        for &j in t {
            classes[j] = classes[j].min(c);
        }
    }
    classes
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassSamples {
    pub leverage: Vec<f64>,
    pub cross_leverage: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityStudy {
    pub config: ExperimentConfig,
    pub samples: BTreeMap<VariableClass, ClassSamples>,
    pub response_leverage: Vec<f64>,
}

/// One KDE curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub class: VariableClass,
    pub measure: &'static str,
    pub bandwidth: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

pub fn run_density_study(config: &ExperimentConfig) -> Result<DensityStudy> {
    config.validate()?;
    let spec = config.scenario_spec()?;
    let classes = variable_classes(&spec.terms, config.p);
    let per_rep = (0..config.replicates)
        .into_par_iter()
        .map(|r| compute_scores(&config.replicate(&spec, r)?))
        .collect::<Result<Vec<_>>>()?;
    let mut samples: BTreeMap<VariableClass, ClassSamples> = BTreeMap::new();
    let mut response_leverage = Vec::with_capacity(per_rep.len());
    for s in &per_rep {
        for (j, &c) in classes.iter().enumerate() {
            let e = samples.entry(c).or_default();
            e.leverage.push(s.leverage[j]);
            e.cross_leverage.push(s.cross_leverage[j]);
        }
        response_leverage.push(s.response_leverage);
    }
    Ok(DensityStudy {
        config: config.clone(),
        samples,
        response_leverage,
    })
}

impl DensityStudy {
    pub fn total_samples(&self) -> usize {
        self.samples.values().map(|s| s.leverage.len()).sum()
    }

    /// Pooled samples over the classes selected by `keep`.
    pub fn pooled(&self, keep: impl Fn(VariableClass) -> bool) -> ClassSamples {
        let mut out = ClassSamples::default();
        for (c, s) in &self.samples {
            if keep(*c) {
                out.leverage.extend_from_slice(&s.leverage);
                out.cross_leverage.extend_from_slice(&s.cross_leverage);
            }
        }
        out
    }

    /// KDE of each class and measure. Curves of one measure share a grid
    /// covering every class's samples ±3 of its own bandwidths.
    pub fn curves(&self, points: usize) -> Result<Vec<Curve>> {
        let points = points.max(2);
        let mut out = Vec::new();
        for measure in ["leverage", "cross_leverage"] {
            let pick = |s: &'_ ClassSamples| -> Vec<f64> {
                if measure == "leverage" {
                    s.leverage.clone()
                } else {
                    s.cross_leverage.clone()
                }
            };
            let mut per_class = Vec::new();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for (class, s) in &self.samples {
                let values = pick(s);
                let bw = silverman_bandwidth(&values)?;
                for &v in &values {
                    lo = lo.min(v - 3.0 * bw);
                    hi = hi.max(v + 3.0 * bw);
                }
                per_class.push((*class, values, bw));
            }
            let step = (hi - lo) / (points - 1) as f64;
            let grid: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
            for (class, values, bw) in per_class {
                out.push(Curve {
                    class,
                    measure,
                    bandwidth: bw,
                    density: kde_with_bandwidth(&values, &grid, bw)?,
                    grid: grid.clone(),
                });
            }
        }
        Ok(out)
    }

    /// `class  measure  x  density`.
    pub fn curves_tsv(&self, points: usize) -> Result<String> {
        let mut out = String::from("class\tmeasure\tbandwidth\tx\tdensity\n");
        for c in self.curves(points)? {
            for (x, d) in c.grid.iter().zip(&c.density) {
                out.push_str(&format!("{}\t{}\t{:e}\t{:.9e}\t{:.9e}\n", c.class, c.measure, c.bandwidth, x, d));
            }
        }
        Ok(out)
    }

    /// Per-class summary: count, mean and standard deviation per measure.
    pub fn summary_tsv(&self) -> String {
        let mut out = String::from("class\tcount\tmean_leverage\tsd_leverage\tmean_cross_leverage\tsd_cross_leverage\n");
        let msd = |v: &[f64]| {
            let m = v.len() as f64;
            let mean = v.iter().sum::<f64>() / m;
            let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0)).sqrt();
            (mean, sd)
        };
        for (c, s) in &self.samples {
            let (ml, sl) = msd(&s.leverage);
            let (mc, sc) = msd(&s.cross_leverage);
            out.push_str(&format!("{c}\t{}\t{ml:.9e}\t{sl:.9e}\t{mc:.9e}\t{sc:.9e}\n", s.leverage.len()));
        }
        out
    }

    /// Raw pooled samples: `class  leverage  cross_leverage`.
    pub fn samples_tsv(&self) -> String {
        let mut out = String::from("class\tleverage\tcross_leverage\n");
        for (c, s) in &self.samples {
            for (l, x) in s.leverage.iter().zip(&s.cross_leverage) {
                out.push_str(&format!("{c}\t{l:.9e}\t{x:.9e}\n"));
            }
        }
        out
    }
}
