//! Statistical primitives used by the comparison criteria and the studies:
//! Pearson correlation, single-variable regression p-values, Welch's test,
//! and kernel density estimation.

pub mod kde;
pub mod special;

pub use kde::{default_grid, kde, kde_with_bandwidth, silverman_bandwidth};
pub use special::{inc_beta, ln_gamma, t_cdf, t_two_sided};

use crate::error::{Error, Result};

/// Slope test of `y` on `(1, x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnivariateTestResult {
    pub slope: f64,
    pub t_statistic: f64,
    pub p_value: f64,
    pub df: usize,
}

struct Moments {
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn centered_moments(x: &[f64], y: &[f64]) -> Result<Moments> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let mut mo = Moments {
        sxx: 0.0,
        syy: 0.0,
        sxy: 0.0,
    };
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        mo.sxx += da * da;
        mo.syy += db * db;
        mo.sxy += da * db;
    }
    Ok(mo)
}

/// Pearson product-moment correlation. `None` when either argument has zero
/// variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    if x.len() < 2 {
        return Err(Error::invalid_argument("correlation needs at least two observations"));
    }
    let mo = centered_moments(x, y)?;
    if mo.sxx == 0.0 || mo.syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((mo.sxy / (mo.sxx * mo.syy).sqrt()).clamp(-1.0, 1.0)))
}

/// Ordinary least-squares slope test with `n − 2` degrees of freedom and a
/// two-sided p-value. `None` when `x` is constant. A perfect fit has
/// p-value 0; a constant response has p-value 1.
pub fn univariate_pvalue(x: &[f64], y: &[f64]) -> Result<Option<UnivariateTestResult>> {
    if x.len() < 3 {
        return Err(Error::invalid_argument("slope test needs at least three observations"));
    }
    let mo = centered_moments(x, y)?;
    if mo.sxx == 0.0 {
        return Ok(None);
    }
    let df = x.len() - 2;
    let slope = mo.sxy / mo.sxx;
    if mo.syy == 0.0 {
        return Ok(Some(UnivariateTestResult {
            slope,
            t_statistic: 0.0,
            p_value: 1.0,
            df,
        }));
    }
    let r = (mo.sxy / (mo.sxx * mo.syy).sqrt()).clamp(-1.0, 1.0);
    let one_minus = 1.0 - r * r;
    let (t, p) = if one_minus <= 4.0 * f64::EPSILON {
        (f64::INFINITY.copysign(r), 0.0)
    } else {
        let t = r * (df as f64 / one_minus).sqrt();
        (t, t_two_sided(t, df as f64))
    };
    Ok(Some(UnivariateTestResult {
        slope,
        t_statistic: t,
        p_value: p,
        df,
    }))
}

/// Welch's unequal-variance t-test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchResult {
    pub mean_a: f64,
    pub mean_b: f64,
    pub t_statistic: f64,
    pub df: f64,
    /// One-sided p-value for the alternative `mean_a < mean_b`.
    pub p_less: f64,
}

pub fn welch_test(a: &[f64], b: &[f64]) -> Result<WelchResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::invalid_argument("Welch test needs two observations per group"));
    }
    let stats = |v: &[f64]| {
        let m = v.len() as f64;
        let mean = v.iter().sum::<f64>() / m;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (mean, var / m)
    };
    let (ma, va) = stats(a);
    let (mb, vb) = stats(b);
    let se2 = va + vb;
    if se2 == 0.0 {
        return Err(Error::invalid_argument("Welch test with zero variance in both groups"));
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / (va * va / (a.len() as f64 - 1.0) + vb * vb / (b.len() as f64 - 1.0));
    Ok(WelchResult {
        mean_a: ma,
        mean_b: mb,
        t_statistic: t,
        df,
        p_less: t_cdf(t, df),
    })
}
