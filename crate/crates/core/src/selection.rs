//! Ranking of explanatory variables under the four criteria and top-k
//! subset selection, including the combined leverage/cross-leverage sampler.
//!
//! Every criterion is reduced to a "larger is better" key per variable.
//! Undefined keys (zero-variance columns under COR/PVAL) rank last, and ties
//! are broken by the lower index, so rankings are total and deterministic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::leverage::{compute_scores, ScoreSet};
use crate::stats::{pearson, univariate_pvalue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    /// Cross-leverage with the response.
    Cls,
    /// Leverage.
    Ls,
    /// Pearson correlation with the response.
    Cor,
    /// Single-variable regression p-value.
    Pval,
    /// Leverage and cross-leverage combined.
    Combined,
}

impl Criterion {
    /// The four single criteria compared in the studies.
    pub const SINGLE: [Criterion; 4] = [Criterion::Cls, Criterion::Ls, Criterion::Cor, Criterion::Pval];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Cls => "cls",
            Criterion::Ls => "ls",
            Criterion::Cor => "cor",
            Criterion::Pval => "pval",
            Criterion::Combined => "combined",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cls" => Ok(Criterion::Cls),
            "ls" => Ok(Criterion::Ls),
            "cor" => Ok(Criterion::Cor),
            "pval" | "p-value" | "pvalue" => Ok(Criterion::Pval),
            "combined" => Ok(Criterion::Combined),
            other => Err(Error::invalid_argument(format!("unknown criterion {other:?}"))),
        }
    }
}

/// Ordering for signed statistics (cross-leverage, correlation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignMode {
    /// Largest magnitude first.
    #[default]
    Absolute,
    /// Largest signed value first.
    SignedDescending,
}

/// Ordering for leverage scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeverageOrder {
    /// Smallest first; on binary data main effects have low leverage.
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinedMode {
    /// Top `⌈pct_cls·p⌉` by CLS united with top `⌈pct_ls·p⌉` by LS.
    Union,
    /// `⌈pct_ls·p⌉` by LS first, then CLS on the remaining variables until
    /// `total` variables are chosen.
    SequentialDisjoint { total: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedSpec {
    pub pct_cls: f64,
    pub pct_ls: f64,
    pub mode: CombinedMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionSpec {
    pub criterion: Criterion,
    pub k: usize,
    pub cls_mode: SignMode,
    pub ls_mode: LeverageOrder,
    pub cor_mode: SignMode,
    pub combined: Option<CombinedSpec>,
}

impl SelectionSpec {
    pub fn new(criterion: Criterion, k: usize) -> Self {
        SelectionSpec {
            criterion,
            k,
            cls_mode: SignMode::default(),
            ls_mode: LeverageOrder::default(),
            cor_mode: SignMode::default(),
            combined: None,
        }
    }

    pub fn combined(spec: CombinedSpec) -> Self {
        let k = match spec.mode {
            CombinedMode::SequentialDisjoint { total } => total,
            CombinedMode::Union => usize::MAX,
        };
        SelectionSpec {
            combined: Some(spec),
            ..SelectionSpec::new(Criterion::Combined, k)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    /// Chosen variables (0-based), best first.
    pub indices: Vec<usize>,
    /// Raw criterion value of each chosen variable (`None` if undefined).
    pub scores_used: Vec<Option<f64>>,
    pub criterion: Criterion,
    /// Fewer than `k` variables were available.
    pub truncated: bool,
}

/// `⌈n · ln n⌉`.
pub fn sample_size(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::invalid_argument(format!("sample size needs n >= 2, got {n}")));
    }
    let n = n as f64;
    Ok((n * n.ln()).ceil() as usize)
}

/// `⌈fraction · p⌉`, guarded against representation error in the product.
pub fn fraction_count(fraction: f64, p: usize) -> usize {
    let raw = fraction * p as f64;
    let c = (raw - 1e-9).ceil().max(0.0) as usize;
    c.min(p)
}

/// Correlations of every variable with the response.
pub fn correlations(dataset: &Dataset) -> Result<Vec<Option<f64>>> {
    let y: Vec<f64> = dataset.y().iter().map(|&v| f64::from(v)).collect();
    let mut col = vec![0.0; dataset.n()];
    (0..dataset.p())
        .map(|j| {
            for (c, &v) in col.iter_mut().zip(dataset.column(j)) {
                *c = f64::from(v);
            }
            pearson(&col, &y)
        })
        .collect()
}

/// Single-variable regression p-values of every variable.
pub fn pvalues(dataset: &Dataset) -> Result<Vec<Option<f64>>> {
    let y: Vec<f64> = dataset.y().iter().map(|&v| f64::from(v)).collect();
    let mut col = vec![0.0; dataset.n()];
    (0..dataset.p())
        .map(|j| {
            for (c, &v) in col.iter_mut().zip(dataset.column(j)) {
                *c = f64::from(v);
            }
            Ok(univariate_pvalue(&col, &y)?.map(|r| r.p_value))
        })
        .collect()
}

fn key_cls(c: f64, mode: SignMode) -> f64 {
    match mode {
        SignMode::Absolute => c.abs(),
        SignMode::SignedDescending => c,
    }
}

fn key_ls(l: f64, mode: LeverageOrder) -> f64 {
    match mode {
        LeverageOrder::Ascending => -l,
        LeverageOrder::Descending => l,
    }
}

/// Ranking keys ("larger is better") for a single criterion.
pub fn ranking_keys(
    dataset: &Dataset,
    scores: Option<&ScoreSet>,
    spec: &SelectionSpec,
    criterion: Criterion,
) -> Result<CriterionKeys> {
    let owned;
    let scores = match (criterion, scores) {
        (Criterion::Cls | Criterion::Ls, None) => {
            owned = compute_scores(dataset)?;
            Some(&owned)
        }
        (_, s) => s,
    };
    let (raw, keys): (Vec<Option<f64>>, Vec<Option<f64>>) = match criterion {
        Criterion::Cls => {
            let s = scores.expect("scores computed above");
            s.cross_leverage
                .iter()
                .map(|&c| (Some(c), Some(key_cls(c, spec.cls_mode))))
                .unzip()
        }
        Criterion::Ls => {
            let s = scores.expect("scores computed above");
            s.leverage
                .iter()
                .map(|&l| (Some(l), Some(key_ls(l, spec.ls_mode))))
                .unzip()
        }
        Criterion::Cor => correlations(dataset)?
            .into_iter()
            .map(|r| (r, r.map(|r| key_cls(r, spec.cor_mode))))
            .unzip(),
        Criterion::Pval => pvalues(dataset)?
            .into_iter()
            .map(|p| (p, p.map(|p| -p)))
            .unzip(),
        Criterion::Combined => {
            return Err(Error::invalid_argument(
                "the combined criterion has no single ranking key",
            ))
        }
    };
    Ok(CriterionKeys { raw, keys })
}

/// Raw values and ranking keys for one criterion.
#[derive(Debug, Clone)]
pub struct CriterionKeys {
    pub raw: Vec<Option<f64>>,
    pub keys: Vec<Option<f64>>,
}

impl CriterionKeys {
    /// All variables, best first.
    pub fn order(&self) -> Vec<usize> {
        rank_order(&self.keys)
    }
}

fn compare_keys(a: (usize, Option<f64>), b: (usize, Option<f64>)) -> Ordering {
    match (a.1, b.1) {
        (Some(x), Some(y)) => y.total_cmp(&x).then(a.0.cmp(&b.0)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.0.cmp(&b.0),
    }
}

/// Indices sorted best first: larger key first, undefined keys last, ties
/// by lower index.
pub fn rank_order(keys: &[Option<f64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_unstable_by(|&a, &b| compare_keys((a, keys[a]), (b, keys[b])));
    idx
}

/// Position of each variable in `order` (inverse permutation).
pub fn rank_positions(order: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (r, &j) in order.iter().enumerate() {
        pos[j] = r;
    }
    pos
}

/// Selects the top `spec.k` variables under `spec.criterion`.
pub fn select(dataset: &Dataset, spec: &SelectionSpec) -> Result<SelectionResult> {
    select_with_scores(dataset, None, spec)
}

/// Like [`select`], reusing precomputed scores when given.
pub fn select_with_scores(
    dataset: &Dataset,
    scores: Option<&ScoreSet>,
    spec: &SelectionSpec,
) -> Result<SelectionResult> {
    dataset.check_response()?;
    if spec.criterion == Criterion::Combined {
        let c = spec.combined.ok_or_else(|| {
            Error::invalid_argument("combined criterion requires CLS and LS percentages")
        })?;
        return combined_with_scores(dataset, scores, spec, c);
    }
    if spec.k == 0 {
        return Err(Error::invalid_argument("k must be at least 1"));
    }
    let keys = ranking_keys(dataset, scores, spec, spec.criterion)?;
    let order = keys.order();
    let take = spec.k.min(order.len());
    let indices: Vec<usize> = order[..take].to_vec();
    let scores_used = indices.iter().map(|&j| keys.raw[j]).collect();
    Ok(SelectionResult {
        indices,
        scores_used,
        criterion: spec.criterion,
        truncated: spec.k > dataset.p(),
    })
}

/// Combined LS/CLS selection with default ordering modes.
pub fn select_combined(
    dataset: &Dataset,
    pct_cls: f64,
    pct_ls: f64,
    mode: CombinedMode,
) -> Result<SelectionResult> {
    let spec = SelectionSpec::combined(CombinedSpec {
        pct_cls,
        pct_ls,
        mode,
    });
    select_with_scores(dataset, None, &spec)
}

fn combined_with_scores(
    dataset: &Dataset,
    scores: Option<&ScoreSet>,
    spec: &SelectionSpec,
    c: CombinedSpec,
) -> Result<SelectionResult> {
    for (name, v) in [("pct_cls", c.pct_cls), ("pct_ls", c.pct_ls)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid_argument(format!("{name} = {v} outside [0, 1]")));
        }
    }
    let owned;
    let scores = match scores {
        Some(s) => s,
        None => {
            owned = compute_scores(dataset)?;
            &owned
        }
    };
    let p = dataset.p();
    let cls = ranking_keys(dataset, Some(scores), spec, Criterion::Cls)?;
    let ls = ranking_keys(dataset, Some(scores), spec, Criterion::Ls)?;
    let cls_order = cls.order();
    let ls_order = ls.order();
    let mut chosen = vec![false; p];
    let mut indices = Vec::new();
    let mut scores_used = Vec::new();
    let mut push = |j: usize, v: Option<f64>, indices: &mut Vec<usize>, used: &mut Vec<Option<f64>>| {
        if !chosen[j] {
            chosen[j] = true;
            indices.push(j);
            used.push(v);
        }
    };
    let mut truncated = false;
    match c.mode {
        CombinedMode::Union => {
            for &j in &cls_order[..fraction_count(c.pct_cls, p)] {
                push(j, cls.raw[j], &mut indices, &mut scores_used);
            }
            for &j in &ls_order[..fraction_count(c.pct_ls, p)] {
                push(j, ls.raw[j], &mut indices, &mut scores_used);
            }
        }
        CombinedMode::SequentialDisjoint { total } => {
            let n_ls = fraction_count(c.pct_ls, p).min(total);
            for &j in &ls_order[..n_ls] {
                push(j, ls.raw[j], &mut indices, &mut scores_used);
            }
            for &j in &cls_order {
                if indices.len() >= total {
                    break;
                }
                push(j, cls.raw[j], &mut indices, &mut scores_used);
            }
            truncated = total > p;
        }
    }
    Ok(SelectionResult {
        indices,
        scores_used,
        criterion: Criterion::Combined,
        truncated,
    })
}
