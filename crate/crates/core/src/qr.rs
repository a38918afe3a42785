//! Householder QR with column pivoting, producing a thin orthonormal basis
//! of the column space of a tall matrix.
//!
//! The effective rank is the number of pivots whose diagonal entry in `R`
//! exceeds `100 · ε · max(m, n) · |R₁₁|`. With pivoting, `|R₁₁|` is the
//! largest diagonal magnitude.

/// Scale applied to machine epsilon in the rank threshold.
pub const RANK_EPS_SCALE: f64 = 100.0;

/// Thin orthonormal factor of an `m × n` matrix.
#[derive(Debug, Clone)]
pub struct ThinQ {
    rows: usize,
    rank: usize,
    /// Column-major `rows × rank`.
    q: Vec<f64>,
    /// Diagonal of `R` for the first `rank` pivots.
    r_diag: Vec<f64>,
    /// `pivots[k]` is the original column placed at position `k`.
    pivots: Vec<usize>,
}

impl ThinQ {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Column `k` of `Q`.
    pub fn column(&self, k: usize) -> &[f64] {
        &self.q[k * self.rows..(k + 1) * self.rows]
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.q[k * self.rows + i]
    }

    pub fn r_diag(&self) -> &[f64] {
        &self.r_diag
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Applies `I − τ v vᵀ` (with `v[0] = 1` implicit in `tail`) to `col`.
#[inline]
fn reflect(tau: f64, tail: &[f64], col: &mut [f64]) {
    let w = col[0] + dot(tail, &col[1..]);
    let s = -tau * w;
    col[0] += s;
    axpy(s, tail, &mut col[1..]);
}

/// Factors the column-major `m × n` matrix `data` and returns the thin
/// orthonormal basis of its column space.
pub fn thin_q(m: usize, n: usize, data: &[f64]) -> ThinQ {
    assert_eq!(data.len(), m * n, "matrix storage does not match m x n");
    let mut a = data.to_vec();
    let kmax = m.min(n);
    let mut pivots: Vec<usize> = (0..n).collect();
    let mut vn1: Vec<f64> = (0..n).map(|j| norm2(&a[j * m..(j + 1) * m])).collect();
    let mut vn2 = vn1.clone();
    let mut taus = Vec::with_capacity(kmax);
    let mut r_diag = Vec::with_capacity(kmax);
    let tol_sqrt_eps = f64::EPSILON.sqrt();
    let mut tol = 0.0;

    for k in 0..kmax {
        // Pivot: remaining column of largest norm, lowest index on ties.
        let mut pvt = k;
        for j in k + 1..n {
            if vn1[j] > vn1[pvt] {
                pvt = j;
            }
        }
        if pvt != k {
            for i in 0..m {
                a.swap(pvt * m + i, k * m + i);
            }
            pivots.swap(pvt, k);
            vn1.swap(pvt, k);
            vn2.swap(pvt, k);
        }

        let (head, rest) = a.split_at_mut((k + 1) * m);
        let col = &mut head[k * m + k..];
        let alpha = col[0];
        let norm = norm2(col);
        if k == 0 {
            tol = RANK_EPS_SCALE * f64::EPSILON * (m.max(n) as f64) * norm;
        }
        if norm == 0.0 || norm <= tol {
            break;
        }
        let beta = if alpha >= 0.0 { -norm } else { norm };
        let tau = (beta - alpha) / beta;
        let scale = 1.0 / (alpha - beta);
        for v in col[1..].iter_mut() {
            *v *= scale;
        }
        col[0] = beta;
        taus.push(tau);
        r_diag.push(beta);
        let tail = &col[1..];

        for (jj, cj) in rest.chunks_exact_mut(m).enumerate() {
            let j = k + 1 + jj;
            reflect(tau, tail, &mut cj[k..]);
            if vn1[j] != 0.0 {
                let ratio = cj[k].abs() / vn1[j];
                let temp = (1.0 - ratio * ratio).max(0.0);
                let rel = vn1[j] / vn2[j];
                if temp * rel * rel <= tol_sqrt_eps {
                    vn1[j] = norm2(&cj[k + 1..]);
                    vn2[j] = vn1[j];
                } else {
                    vn1[j] *= temp.sqrt();
                }
            }
        }
    }

    let rank = taus.len();
    let mut q = vec![0.0; m * rank];
    for k in 0..rank {
        q[k * m + k] = 1.0;
    }
    for k in (0..rank).rev() {
        let tail = &a[k * m + k + 1..(k + 1) * m];
        for j in k..rank {
            reflect(taus[k], tail, &mut q[j * m + k..(j + 1) * m]);
        }
    }

    ThinQ {
        rows: m,
        rank,
        q,
        r_diag,
        pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_orthonormal(t: &ThinQ) {
        for a in 0..t.rank() {
            for b in 0..t.rank() {
                let d = dot(t.column(a), t.column(b));
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((d - expected).abs() < 1e-12, "QᵀQ[{a},{b}] = {d}");
            }
        }
    }

    #[test]
    fn full_rank_tall() {
        // 4 x 2, column-major
        let data = [1.0, 2.0, 3.0, 4.0, 0.0, 1.0, 0.0, 1.0];
        let t = thin_q(4, 2, &data);
        assert_eq!(t.rank(), 2);
        check_orthonormal(&t);
        // Each original column must lie in span(Q).
        for c in 0..2 {
            let col = &data[c * 4..(c + 1) * 4];
            let mut resid = col.to_vec();
            for k in 0..2 {
                let w = dot(t.column(k), col);
                axpy(-w, t.column(k), &mut resid);
            }
            assert!(norm2(&resid) < 1e-12);
        }
    }

    #[test]
    fn duplicated_column_drops_rank() {
        let data = [1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0];
        let t = thin_q(3, 3, &data);
        assert_eq!(t.rank(), 2);
        check_orthonormal(&t);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let t = thin_q(3, 2, &[0.0; 6]);
        assert_eq!(t.rank(), 0);
    }

    #[test]
    fn pivots_pick_largest_column_first() {
        let data = [1.0, 0.0, 0.0, 3.0, 4.0, 0.0];
        let t = thin_q(3, 2, &data);
        assert_eq!(t.pivots()[0], 1);
        assert!((t.r_diag()[0].abs() - 5.0).abs() < 1e-12);
    }
}
