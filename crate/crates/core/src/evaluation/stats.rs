//! Paired Student's t-test over per-fold accuracies.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Result, WsdError};

/// Two-sided 95% critical value for 9 degrees of freedom (10 folds).
pub const DEFAULT_T_THRESHOLD: f64 = 2.262;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceResult {
    pub t_statistic: f64,
    pub degrees_of_freedom: usize,
    pub threshold: f64,
    pub significant: bool,
}

/// `t = mean(d) / (s_d / sqrt(n))` with `d_i = a_i - b_i` and the sample
/// standard deviation `s_d`. Zero variance (all differences equal) gives `t = 0`.
pub fn paired_t_test(a: &[f64], b: &[f64], threshold: f64) -> Result<SignificanceResult> {
    if a.len() != b.len() {
        return Err(WsdError::Statistics(format!(
            "paired samples differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 2 {
        return Err(WsdError::Statistics("a paired t-test needs at least 2 folds".into()));
    }
    if !threshold.is_finite() || threshold < 0.0 {
        return Err(WsdError::Statistics(format!("invalid threshold {threshold}")));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let nf = n as f64;
    let mean = d.iter().sum::<f64>() / nf;
    let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    // Identical differences have zero variance even when rounding says otherwise.
    let constant = d.iter().all(|&x| x == d[0]);
    let t_statistic = if var > 0.0 && !constant {
        mean / (var.sqrt() / nf.sqrt())
    } else {
        0.0
    };
    Ok(SignificanceResult {
        t_statistic,
        degrees_of_freedom: n - 1,
        threshold,
        significant: t_statistic.abs() > threshold,
    })
}

/// Two-sided critical value at confidence `1 - alpha` for `df` degrees of freedom.
pub fn critical_value(df: usize, alpha: f64) -> Result<f64> {
    if df == 0 || !(alpha > 0.0 && alpha < 1.0) {
        return Err(WsdError::Statistics(format!(
            "no critical value for df={df}, alpha={alpha}"
        )));
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| WsdError::Statistics(e.to_string()))?;
    Ok(dist.inverse_cdf(1.0 - alpha / 2.0))
}

/// Threshold for a given number of folds: the fixed default for 10 folds,
/// the exact 95% value otherwise.
pub fn threshold_for_folds(fold_count: usize) -> Result<f64> {
    if fold_count == 10 {
        Ok(DEFAULT_T_THRESHOLD)
    } else {
        critical_value(fold_count.saturating_sub(1), 0.05)
    }
}
