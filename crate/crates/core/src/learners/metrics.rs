use crate::error::{Result, WsdError};
use crate::features::{FeatureVector, WordSet};

/// Weighted count of disagreeing symbolic attributes. Any context set is ignored.
pub fn hamming_distance(x: &FeatureVector, y: &FeatureVector, weights: &[f64]) -> Result<f64> {
    super::check_schema(x, y)?;
    if weights.len() != x.values.len() {
        return Err(WsdError::SchemaMismatch {
            expected: format!("{} attribute weights", x.values.len()),
            found: format!("{} attribute weights", weights.len()),
        });
    }
    Ok(x.values
        .iter()
        .zip(&y.values)
        .zip(weights)
        .filter(|((a, b), _)| a != b)
        .map(|(_, w)| *w)
        .sum())
}

/// Number of shared words.
pub fn matching_coefficient(a: &WordSet, b: &WordSet) -> usize {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().filter(|w| large.contains(w)).count()
}

/// Summed absolute difference of two sense-conditional profiles.
pub(crate) fn profile_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}
