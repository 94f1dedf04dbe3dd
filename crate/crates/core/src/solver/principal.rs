//! Threshold derivation, principal sets and the two flip rules.

use serde::{Deserialize, Serialize};

use crate::binary::BinaryVector;
use crate::error::{DpcdError, Result};

/// How the thresholds `L1`, `L2` are chosen from the current gradient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ThresholdPolicy {
    /// `L1 = L2 = L0 + epsilon`, `L0` the gradient's Lipschitz constant.
    /// `epsilon = None` selects [`default_epsilon`].
    Lipschitz { epsilon: Option<f64> },
    /// `L1` = mean of the positive gradient entries, `L2` = mean magnitude of
    /// the negative ones.
    GradientAverage,
}

pub fn default_epsilon(l0: f64) -> f64 {
    f64::max(1e-6, 1e-6 * l0)
}

/// Thresholds for the positive and negative side. `None` marks a side with
/// no gradient entries of that sign; its principal set is empty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub l1: Option<f64>,
    pub l2: Option<f64>,
}

pub fn derive_thresholds(gradient: &[f64], policy: ThresholdPolicy, l0: Option<f64>) -> Result<Thresholds> {
    if !gradient.iter().all(|g| g.is_finite()) {
        return Err(DpcdError::NonFinite("gradient".into()));
    }
    match policy {
        ThresholdPolicy::Lipschitz { epsilon } => {
            let l0 = l0.ok_or_else(|| {
                DpcdError::domain("Lipschitz threshold policy needs an objective with a Lipschitz constant")
            })?;
            let eps = epsilon.unwrap_or_else(|| default_epsilon(l0));
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(DpcdError::domain(format!("epsilon must be positive, got {eps}")));
            }
            let l = l0 + eps;
            Ok(Thresholds { l1: Some(l), l2: Some(l) })
        }
        ThresholdPolicy::GradientAverage => {
            let (mut pos_sum, mut pos_n, mut neg_sum, mut neg_n) = (0.0, 0usize, 0.0, 0usize);
            for &g in gradient {
                if g > 0.0 {
                    pos_sum += g;
                    pos_n += 1;
                } else if g < 0.0 {
                    neg_sum -= g;
                    neg_n += 1;
                }
            }
            Ok(Thresholds {
                l1: (pos_n > 0).then(|| pos_sum / pos_n as f64),
                l2: (neg_n > 0).then(|| neg_sum / neg_n as f64),
            })
        }
    }
}

/// `s_plus`: indices with `x_i = +1` and `g_i > alpha1 * L1`;
/// `s_minus`: indices with `x_i = -1` and `g_i < -alpha2 * L2`. Both ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrincipalSets {
    pub s_plus: Vec<usize>,
    pub s_minus: Vec<usize>,
}

impl PrincipalSets {
    pub fn is_empty(&self) -> bool {
        self.s_plus.is_empty() && self.s_minus.is_empty()
    }
}

pub fn principal_sets(
    x: &BinaryVector,
    gradient: &[f64],
    thresholds: Thresholds,
    alpha1: f64,
    alpha2: f64,
) -> Result<PrincipalSets> {
    if x.len() != gradient.len() {
        return Err(DpcdError::Dimension {
            expected: x.len(),
            found: gradient.len(),
        });
    }
    let upper = thresholds.l1.map(|l| alpha1 * l);
    let lower = thresholds.l2.map(|l| -alpha2 * l);
    let mut sets = PrincipalSets::default();
    for (i, (&xi, &g)) in x.as_slice().iter().zip(gradient).enumerate() {
        match (xi, upper, lower) {
            (1, Some(u), _) if g > u => sets.s_plus.push(i),
            (-1, _, Some(l)) if g < l => sets.s_minus.push(i),
            _ => {}
        }
    }
    Ok(sets)
}

/// Flips every principal coordinate.
pub fn unconstrained_flip(x: &BinaryVector, sets: &PrincipalSets) -> BinaryVector {
    let mut out = x.clone();
    out.flip_all(&sets.s_plus);
    out.flip_all(&sets.s_minus);
    out
}

/// Flips the `m = min(|S+|, |S-|)` largest-magnitude coordinates on each side,
/// which keeps the number of +1 entries fixed.
pub fn balanced_flip(x: &BinaryVector, gradient: &[f64], sets: &PrincipalSets) -> BinaryVector {
    let mut out = x.clone();
    out.flip_all(&balanced_flip_indices(gradient, sets));
    out
}

pub(crate) fn balanced_flip_indices(gradient: &[f64], sets: &PrincipalSets) -> Vec<usize> {
    let m = sets.s_plus.len().min(sets.s_minus.len());
    if m == 0 {
        return Vec::new();
    }
    let mut out = top_by_magnitude(gradient, &sets.s_plus, m);
    out.extend(top_by_magnitude(gradient, &sets.s_minus, m));
    out
}

// Stable sort of an ascending index list: equal magnitudes keep ascending ids.
fn top_by_magnitude(gradient: &[f64], indices: &[usize], m: usize) -> Vec<usize> {
    let mut sorted = indices.to_vec();
    sorted.sort_by(|&a, &b| gradient[b].abs().total_cmp(&gradient[a].abs()));
    sorted.truncate(m);
    sorted
}
