use serde::Serialize;

use crate::error::{Error, Result};
use crate::montecarlo::SampleTable;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
    /// Standard error of the slope; `None` with only two points.
    pub slope_stderr: Option<f64>,
}

impl RegressionFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares of `ys` on `xs`.
pub fn ols(xs: &[f64], ys: &[f64]) -> Result<RegressionFit> {
    if xs.len() != ys.len() {
        return Err(Error::Estimation(
            "abscissae and ordinates differ in length".into(),
        ));
    }
    let m = xs.len();
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::Estimation("non-finite input".into()));
    }
    let mut distinct = xs.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Estimation(
            "need at least two distinct abscissae".into(),
        ));
    }

    let x_bar = super::mean(xs);
    let y_bar = super::mean(ys);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - x_bar, y - y_bar);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    let slope_stderr = (m > 2).then(|| (ss_res / (m - 2) as f64 / sxx).sqrt());
    Ok(RegressionFit {
        slope,
        intercept,
        r_squared,
        points: m,
        slope_stderr,
    })
}

/// Fits `ln(mean) = intercept + slope * ln(n)`.
pub fn ols_loglog(pairs: &[(f64, f64)]) -> Result<RegressionFit> {
    if let Some(&(n, s)) = pairs.iter().find(|&&(n, s)| n <= 0.0 || s <= 0.0) {
        return Err(Error::Estimation(format!(
            "non-positive value in pair ({n}, {s})"
        )));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    ols(&xs, &ys)
}

/// Log-log fit of the mean per-step tan-point frequency `tan_total / n`
/// against `n`.
pub fn tan_point_exponent(table: &SampleTable) -> Result<RegressionFit> {
    let mut pairs = Vec::new();
    for n in table.grid() {
        let mut freqs = Vec::new();
        for row in table.at(n) {
            let tan = row.tan_total.ok_or_else(|| {
                Error::Estimation(format!(
                    "row n={n} replica={} has no tan count",
                    row.replica
                ))
            })?;
            if n == 0 {
                return Err(Error::Estimation("tan frequency undefined at n=0".into()));
            }
            freqs.push(tan as f64 / n as f64);
        }
        pairs.push((n as f64, super::mean(&freqs)));
    }
    ols_loglog(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::SampleRow;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn exact_power_law() {
        let pairs: Vec<(f64, f64)> = [1.0, 3.0, 10.0, 30.0, 100.0]
            .iter()
            .map(|&n| (n, 1f64.exp() * n * n))
            .collect();
        let fit = ols_loglog(&pairs).unwrap();
        assert!(rel(fit.slope, 2.0) < 1e-12);
        assert!(rel(fit.intercept, 1.0) < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.points, 5);
    }

    #[test]
    fn log_base_does_not_change_the_slope() {
        let pairs = [(10.0, 7.0), (100.0, 40.0), (1000.0, 300.0)];
        let natural = ols_loglog(&pairs).unwrap();
        let xs: Vec<f64> = pairs.iter().map(|p| p.0.log10()).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1.log10()).collect();
        let decimal = ols(&xs, &ys).unwrap();
        assert!(rel(natural.slope, decimal.slope) < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(ols_loglog(&[(10.0, 5.0)]).is_err());
        assert!(ols_loglog(&[(10.0, 5.0), (10.0, 6.0)]).is_err());
        assert!(ols_loglog(&[(10.0, 5.0), (20.0, 0.0)]).is_err());
        assert!(ols(&[1.0, 2.0], &[1.0]).is_err());
    }

    fn row(n: u64, replica: u64, tan: Option<u64>) -> SampleRow {
        SampleRow {
            dim: 2,
            n,
            replica,
            seed: 0,
            s_n: 1,
            created_total: 1,
            tan_total: tan,
            walltime_ms: 0,
        }
    }

    #[test]
    fn tan_exponent_on_an_exact_quarter_law() {
        let mut table = SampleTable::default();
        for (i, n) in [16u64, 256, 4096, 65536].into_iter().enumerate() {
            // tan/n = 2 n^{-1/4}
            let tan = 2 * n / (1u64 << (i + 1));
            table.rows.push(row(n, 0, Some(tan)));
        }
        let fit = tan_point_exponent(&table).unwrap();
        assert!((fit.slope + 0.25).abs() < 1e-12, "{fit:?}");
        table.rows.push(row(10, 0, None));
        assert!(tan_point_exponent(&table).is_err());
    }
}
