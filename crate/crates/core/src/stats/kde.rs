//! Gaussian kernel density estimation with Silverman's bandwidth.

use crate::error::{Error, Result};

/// Sample quantile, linear interpolation between order statistics
/// (the "type 7" definition). `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], prob: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (m - 1.0)).sqrt())
}

/// `0.9 · min(sd, IQR/1.34) · m^(−1/5)`. When the IQR vanishes the standard
/// deviation alone is used; when both vanish the bandwidth falls back to
/// `1e-3 · (1 + |mean|)`.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid_argument("bandwidth of an empty sample"));
    }
    let (mean, sd) = mean_sd(values);
    if sd == 0.0 {
        return Ok(1e-3 * (1.0 + mean.abs()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (values.len() as f64).powf(-0.2))
}

/// Density estimate at each grid point with an explicit bandwidth.
pub fn kde_with_bandwidth(values: &[f64], grid: &[f64], bandwidth: f64) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::invalid_argument("kernel density of an empty sample"));
    }
    if bandwidth.is_nan() || bandwidth <= 0.0 {
        return Err(Error::invalid_argument(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let norm = 1.0 / (values.len() as f64 * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    Ok(grid
        .iter()
        .map(|&g| {
            let s: f64 = values
                .iter()
                .map(|&v| {
                    let z = (g - v) / bandwidth;
                    (-0.5 * z * z).exp()
                })
                .sum();
            s * norm
        })
        .collect())
}

/// Gaussian KDE with Silverman's bandwidth.
pub fn kde(values: &[f64], grid: &[f64]) -> Result<Vec<f64>> {
    let bw = silverman_bandwidth(values)?;
    kde_with_bandwidth(values, grid, bw)
}

/// Evenly spaced grid covering the sample ±3 bandwidths.
pub fn default_grid(values: &[f64], points: usize) -> Result<(Vec<f64>, f64)> {
    let bw = silverman_bandwidth(values)?;
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * bw;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * bw;
    let points = points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    Ok(((0..points).map(|i| lo + step * i as f64).collect(), bw))
}
