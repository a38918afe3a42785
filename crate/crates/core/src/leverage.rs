//! Leverage and cross-leverage scores of the augmented matrix `[X, y]ᵀ`.
//!
//! With `X̃ = QR` (thin, rank `r`), the hat matrix is `H = QQᵀ`. The leverage
//! of variable `i` is `‖Q_{i·}‖²` and its cross-leverage with the response is
//! `⟨Q_{i·}, Q_{p+1,·}⟩`. The full `(p+1) × (p+1)` matrix `H` is only formed
//! by [`hat_matrix_dense`], a small-size check path.

use crate::dataset::{augment, AugmentedMatrix, Dataset};
use crate::error::{Error, Result};
use crate::qr::{thin_q, ThinQ};

/// Default cap on `p` for [`hat_matrix_dense`].
pub const DENSE_HAT_CAP: usize = 2000;

/// Per-variable scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSet {
    /// `lᵢ = h_{ii}` for each explanatory variable.
    pub leverage: Vec<f64>,
    /// `cᵢ = h_{i,p+1}`, the coupling of variable `i` with the response.
    pub cross_leverage: Vec<f64>,
    /// `l_{p+1}`, leverage of the response row.
    pub response_leverage: f64,
    /// Effective numerical rank of `X̃`.
    pub rank: usize,
    /// Set when the rank is below the number of observations (the
    /// triangular factor would be singular without rank truncation).
    pub rank_deficient: bool,
}

impl ScoreSet {
    pub fn p(&self) -> usize {
        self.leverage.len()
    }

    /// Sum of all `p + 1` leverages; equals the rank up to rounding.
    pub fn leverage_trace(&self) -> f64 {
        self.leverage.iter().sum::<f64>() + self.response_leverage
    }
}

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }
}

fn factor(a: &AugmentedMatrix) -> Result<ThinQ> {
    let m = a.rows();
    let n = a.cols();
    let response_norm: f64 = (0..n).map(|c| a.get(m - 1, c).powi(2)).sum::<f64>().sqrt();
    let scale = a.as_col_major().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::RankZero);
    }
    if response_norm <= f64::EPSILON * scale {
        return Err(Error::DegenerateResponse);
    }
    let q = thin_q(m, n, a.as_col_major());
    if q.rank() == 0 {
        return Err(Error::RankZero);
    }
    Ok(q)
}

/// Scores of an arbitrary augmented matrix whose last row is the response.
pub fn scores_of(a: &AugmentedMatrix) -> Result<ScoreSet> {
    let q = factor(a)?;
    let m = q.rows();
    let mut lev = vec![0.0; m];
    let mut cross = vec![0.0; m];
    for k in 0..q.rank() {
        let col = q.column(k);
        let qy = col[m - 1];
        for ((l, c), &v) in lev.iter_mut().zip(cross.iter_mut()).zip(col) {
            *l += v * v;
            *c += v * qy;
        }
    }
    let response_leverage = lev[m - 1];
    lev.truncate(m - 1);
    cross.truncate(m - 1);
    Ok(ScoreSet {
        leverage: lev,
        cross_leverage: cross,
        response_leverage,
        rank: q.rank(),
        rank_deficient: q.rank() < a.cols(),
    })
}

/// Leverage and cross-leverage scores of `[X, y]ᵀ`.
pub fn compute_scores(dataset: &Dataset) -> Result<ScoreSet> {
    dataset.check_response()?;
    if dataset.n() < 2 {
        return Err(Error::invalid_dataset("scores need at least two observations"));
    }
    scores_of(&augment(dataset))
}

/// Full hat matrix `QQᵀ` of an augmented matrix, refusing above `cap`
/// explanatory variables.
pub fn hat_matrix_of(a: &AugmentedMatrix, cap: usize) -> Result<DenseMatrix> {
    let p = a.rows() - 1;
    if p > cap {
        return Err(Error::SizeCap { dim: p, cap });
    }
    let q = factor(a)?;
    let m = q.rows();
    let mut data = vec![0.0; m * m];
    for k in 0..q.rank() {
        let col = q.column(k);
        for i in 0..m {
            let qi = col[i];
            let row = &mut data[i * m..(i + 1) * m];
            for (h, &qj) in row.iter_mut().zip(col) {
                *h += qi * qj;
            }
        }
    }
    Ok(DenseMatrix { dim: m, data })
}

/// Full hat matrix of `[X, y]ᵀ` for small problems.
pub fn hat_matrix_dense(dataset: &Dataset, cap: usize) -> Result<DenseMatrix> {
    if dataset.p() > cap {
        return Err(Error::SizeCap {
            dim: dataset.p(),
            cap,
        });
    }
    dataset.check_response()?;
    hat_matrix_of(&augment(dataset), cap)
}
