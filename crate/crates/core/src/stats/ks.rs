use libm::erfc;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub m: usize,
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Asymptotic Kolmogorov tail `Q(x) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2)`,
/// summed until a term drops below 1e-12.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut k = 1u64;
    loop {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        if term < 1e-12 {
            break;
        }
        sum += if k % 2 == 1 { term } else { -term };
        k += 1;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS test of the standardized sample against N(0, 1), using the
/// sample mean and the (n-1) sample standard deviation. No Lilliefors
/// correction is applied.
pub fn ks_normal(samples: &[f64]) -> Result<KsResult> {
    let m = samples.len();
    if m < 2 {
        return Err(Error::Estimation(format!(
            "KS test needs at least 2 samples, got {m}"
        )));
    }
    let mean = super::mean(samples);
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
    let sd = var.sqrt();
    if sd.is_nan() || sd <= 0.0 {
        return Err(Error::Estimation(
            "sample standard deviation is zero".into(),
        ));
    }
    let mut z: Vec<f64> = samples.iter().map(|x| (x - mean) / sd).collect();
    z.sort_by(f64::total_cmp);

    let mf = m as f64;
    let statistic = z
        .iter()
        .enumerate()
        .map(|(i, &zi)| {
            let f = normal_cdf(zi);
            let above = (i + 1) as f64 / mf - f;
            let below = f - i as f64 / mf;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let p_value = kolmogorov_survival(mf.sqrt() * statistic);
    Ok(KsResult {
        statistic,
        p_value,
        m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_reference_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.959963984540054) - 0.975).abs() < 1e-12);
        assert!(
            (normal_cdf(std::f64::consts::FRAC_1_SQRT_2) - 0.760_249_938_906_523_3).abs() < 1e-12
        );
    }

    #[test]
    fn two_point_sample() {
        assert!(ks_normal(&[0.0]).is_err());
        assert!(ks_normal(&[3.0, 3.0]).is_err());
        // Standardized to -1/sqrt(2), +1/sqrt(2); the widest gap is
        // Phi(1/sqrt 2) - 1/2 at the upper order statistic.
        let r = ks_normal(&[-1.0, 1.0]).unwrap();
        assert!((r.statistic - 0.260_249_938_906_523_3).abs() < 1e-12);
        assert_eq!(r.m, 2);
    }

    #[test]
    fn reported_statistic_maps_to_reported_p_value() {
        let p = kolmogorov_survival((2000f64).sqrt() * 0.0214);
        assert!((p - 0.315).abs() < 0.02, "p = {p}");
    }

    #[test]
    fn survival_limits() {
        assert_eq!(kolmogorov_survival(0.0), 1.0);
        assert!((kolmogorov_survival(1e-3) - 1.0).abs() < 1e-9);
        assert!(kolmogorov_survival(3.0) < 1e-6);
        // Classic critical value: Q(1.3581) = 0.05.
        assert!((kolmogorov_survival(1.3581) - 0.05).abs() < 1e-4);
    }
}
