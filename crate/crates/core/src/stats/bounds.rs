use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PzCheck {
    pub theta: f64,
    /// Fraction of samples strictly above `theta` times the sample mean.
    pub empirical_prob: f64,
    /// `(1 - theta)^2 / 2`.
    pub bound: f64,
}

impl PzCheck {
    pub fn holds(&self) -> bool {
        self.empirical_prob >= self.bound
    }
}

/// Empirical second-moment lower bound check: P(S > theta E S) against
/// (1 - theta)^2 / 2.
pub fn paley_zygmund_check(samples: &[f64], theta: f64) -> Result<PzCheck> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Parameter(format!(
            "theta must lie in (0, 1), got {theta}"
        )));
    }
    if samples.is_empty() {
        return Err(Error::Parameter("no samples".into()));
    }
    let threshold = theta * super::mean(samples);
    let above = samples.iter().filter(|&&s| s > threshold).count();
    Ok(PzCheck {
        theta,
        empirical_prob: above as f64 / samples.len() as f64,
        bound: (1.0 - theta).powi(2) / 2.0,
    })
}

/// Fraction of samples with `S_n >= delta * n^(3/4)`.
pub fn theorem_fraction(samples: &[f64], n: u64, delta: f64) -> Result<f64> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Parameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if samples.is_empty() {
        return Ok(0.0);
    }
    let threshold = delta * (n as f64).powf(0.75);
    let hits = samples.iter().filter(|&&s| s >= threshold).count();
    Ok(hits as f64 / samples.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_theta_bound_is_one_eighth() {
        let r = paley_zygmund_check(&[1.0, 2.0, 3.0], 0.5).unwrap();
        assert_eq!(r.bound, 0.125);
        assert!(paley_zygmund_check(&[1.0], 0.0).is_err());
        assert!(paley_zygmund_check(&[1.0], 1.0).is_err());
        assert!(paley_zygmund_check(&[], 0.5).is_err());
    }

    #[test]
    fn tiny_theta_counts_everything() {
        let r = paley_zygmund_check(&[1.0, 5.0, 9.0], 1e-9).unwrap();
        assert_eq!(r.empirical_prob, 1.0);
        assert!(r.holds());
    }

    #[test]
    fn theorem_fraction_extremes() {
        let samples = [1.0, 10.0, 100.0, 10001.0];
        assert_eq!(theorem_fraction(&samples, 10_000, 1e-12).unwrap(), 1.0);
        // delta * n^{3/4} = 11 * 1000 exceeds n + 1.
        assert_eq!(theorem_fraction(&samples, 10_000, 11.0).unwrap(), 0.0);
        assert_eq!(theorem_fraction(&samples, 10_000, 0.01).unwrap(), 0.75);
        assert!(theorem_fraction(&samples, 10, 0.0).is_err());
    }
}
