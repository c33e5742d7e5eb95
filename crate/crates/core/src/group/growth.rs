use serde::Serialize;

use crate::error::{Error, Result};

/// Least squares fit of `log |B_n|` against `log(n + 1/2)`.
///
/// Shifting the radius by one half absorbs most of the lower order terms of the
/// ball counting polynomial, so short ranges of radii already give the degree to
/// within a few percent. `raw_slope` is the plain fit against `log n`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthFit {
    pub degree: f64,
    pub intercept: f64,
    pub raw_slope: f64,
    pub residual: f64,
    pub points: usize,
}

fn slope(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let res = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a - b * x).powi(2))
        .sum::<f64>()
        .sqrt();
    (b, a, res)
}

/// Fits the growth degree from `(n, |B_n|)` pairs. Radius 0 is ignored, and
/// radius 1 too when at least two larger radii are available.
pub fn growth_fit(sizes: &[(usize, usize)]) -> Result<GrowthFit> {
    let from = |m: usize| -> Vec<(usize, usize)> { sizes.iter().copied().filter(|&(n, _)| n >= m).collect() };
    let mut pts = from(2);
    if pts.len() < 2 {
        pts = from(1);
    }
    if pts.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "growth fit needs at least 2 radii >= 1, got {}",
            pts.len()
        )));
    }
    if pts.iter().any(|&(_, s)| s == 0) {
        return Err(Error::InsufficientData("empty ball size".into()));
    }
    let ys: Vec<f64> = pts.iter().map(|&(_, s)| (s as f64).ln()).collect();
    let shifted: Vec<f64> = pts.iter().map(|&(n, _)| (n as f64 + 0.5).ln()).collect();
    let plain: Vec<f64> = pts.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let (degree, intercept, residual) = slope(&shifted, &ys);
    let (raw_slope, _, _) = slope(&plain, &ys);
    Ok(GrowthFit {
        degree,
        intercept,
        raw_slope,
        residual,
        points: pts.len(),
    })
}
