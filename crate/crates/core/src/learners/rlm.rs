//! Attribute relevance from the López de Mántaras distance between the
//! partition an attribute induces and the sense partition:
//! `d(A,S) = 1 - I(A;S)/H(A,S)`. The weight is `1 - d`, in `[0, 1]`.

use std::collections::HashMap;
use std::hash::Hash;

use super::{Labeled, SenseIndex};

/// Entropy (nats) of a count distribution. Counts are sorted first so the
/// result only depends on the multiset of counts.
fn entropy(mut counts: Vec<usize>) -> f64 {
    counts.sort_unstable();
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    -counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Normalized mutual information `I(A;S)/H(A,S)` of (value, sense) observations.
/// Zero when any of the entropies vanishes.
pub(crate) fn rlm_weight<K: Hash + Eq>(pairs: impl IntoIterator<Item = (K, usize)>) -> f64 {
    let mut joint: HashMap<(K, usize), usize> = HashMap::new();
    for pair in pairs {
        *joint.entry(pair).or_insert(0) += 1;
    }
    let mut values: HashMap<&K, usize> = HashMap::new();
    let mut senses: HashMap<usize, usize> = HashMap::new();
    for ((v, s), c) in &joint {
        *values.entry(v).or_insert(0) += c;
        *senses.entry(*s).or_insert(0) += c;
    }
    let h_value = entropy(values.into_values().collect());
    let h_sense = entropy(senses.into_values().collect());
    let h_joint = entropy(joint.into_values().collect());
    if h_value <= 0.0 || h_sense <= 0.0 || h_joint <= 0.0 {
        return 0.0;
    }
    ((h_value + h_sense - h_joint) / h_joint).clamp(0.0, 1.0)
}

/// One weight per symbolic attribute. Set-valued context is not weighted.
pub fn rlm_attribute_weights(training: &[Labeled]) -> Vec<f64> {
    let Some((first, _)) = training.first() else {
        return Vec::new();
    };
    let Ok(senses) = SenseIndex::from_labels(training.iter().map(|(_, s)| s.as_str()), None) else {
        return Vec::new();
    };
    let labels: Vec<usize> = training
        .iter()
        .map(|(_, s)| senses.id(s).expect("indexed"))
        .collect();
    (0..first.values.len())
        .map(|a| {
            rlm_weight(
                training
                    .iter()
                    .zip(&labels)
                    .map(|((fv, _), &s)| (&fv.values[a], s)),
            )
        })
        .collect()
}
