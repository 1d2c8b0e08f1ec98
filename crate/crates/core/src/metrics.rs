//! Shared regression metrics.

use crate::{Error, Result};

/// Coefficient of determination R² = 1 − Σ(y−ŷ)²/Σ(y−ȳ)².
///
/// Errors when the targets have zero variance (R² undefined).
pub fn r_squared(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.len() != targets.len() {
        return Err(Error::shape("r² batch", targets.len(), predictions.len()));
    }
    if targets.is_empty() {
        return Err(Error::domain("r² needs at least one sample"));
    }
    let mean = targets.iter().sum::<f64>() / targets.len() as f64;
    let ss_tot: f64 = targets.iter().map(|t| (t - mean) * (t - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::domain(
            "r² undefined: targets are constant (zero variance)",
        ));
    }
    let ss_res: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Root mean squared error.
pub fn rmse(predictions: &[f64], targets: &[f64]) -> Result<f64> {
    if predictions.len() != targets.len() {
        return Err(Error::shape("rmse batch", targets.len(), predictions.len()));
    }
    if targets.is_empty() {
        return Err(Error::domain("rmse needs at least one sample"));
    }
    let sum: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok((sum / targets.len() as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit_scores_one() {
        assert_eq!(r_squared(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
    }

    #[test]
    fn mean_prediction_scores_zero() {
        let r2 = r_squared(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(r2.abs() < 1e-12);
    }

    #[test]
    fn constant_targets_are_rejected() {
        assert!(r_squared(&[1.0, 2.0], &[5.0, 5.0]).is_err());
    }

    #[test]
    fn rmse_basic() {
        let e = rmse(&[0.0, 0.0], &[3.0, 4.0]).unwrap();
        assert!((e - (12.5_f64).sqrt()).abs() < 1e-12);
    }
}
