use super::BundleError;
use crate::novikov::expsum::{pairing, Class};
use crate::scalar::{Row, Scalar};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Weights w(k, i) for multiplicity k ≥ 1 on class i; absent entries are 0.
pub type SlagWeights = BTreeMap<(u32, usize), Scalar>;

/// Σ over multisets {(kᵢ, Pᵢ)} with Σ kᵢ·Pᵢ = κ of Π w(kᵢ, Pᵢ). Each
/// unordered decomposition is counted once; κ = 0 gives the empty product 1.
///
/// `positivity` must pair strictly positively with every class, which
/// bounds the number of parts by the height of κ.
pub fn slag_count(
    weights: &SlagWeights,
    classes: &[Class],
    kappa: &[Scalar],
    positivity: Option<&[Scalar]>,
) -> Result<Scalar, BundleError> {
    let u = positivity.ok_or_else(|| {
        BundleError::NoPositivity("a positivity covector is required for a finite enumeration".into())
    })?;
    let rank = kappa.len();
    if u.len() != rank || classes.iter().any(|c| c.len() != rank) {
        return Err(BundleError::Invalid(
            "classes, κ and the covector differ in length".into(),
        ));
    }
    let heights: Vec<Scalar> = classes.iter().map(|c| pairing(c, u)).collect();
    if let Some(i) = heights.iter().position(|h| !h.is_positive()) {
        return Err(BundleError::NoPositivity(format!(
            "class {} has non-positive pairing with the positivity covector",
            Row(&classes[i])
        )));
    }
    for &(k, i) in weights.keys() {
        if k == 0 || i >= classes.len() {
            return Err(BundleError::Invalid(format!("weight key ({k}, {i}) is out of range")));
        }
    }
    if pairing(kappa, u).is_negative() {
        return Ok(Scalar::zero());
    }
    let items: Vec<(Class, Scalar, &Scalar)> = weights
        .iter()
        .filter(|(_, w)| !w.is_zero())
        .map(|(&(k, i), w)| {
            let k = Scalar::from_integer(k.into());
            let part: Class = classes[i].iter().map(|x| x * &k).collect();
            (part, &heights[i] * &k, w)
        })
        .collect();
    Ok(count_from(&items, 0, kappa.to_vec(), pairing(kappa, u)))
}

/// Chooses the multiplicity of items[t], then recurses on the rest.
/// `height` is ⟨u, remaining⟩; parts have positive height, so a negative
/// remainder can never be completed.
fn count_from(items: &[(Class, Scalar, &Scalar)], t: usize, remaining: Class, height: Scalar) -> Scalar {
    if remaining.iter().all(Zero::is_zero) {
        return Scalar::one();
    }
    if t == items.len() {
        return Scalar::zero();
    }
    let (part, part_height, w) = &items[t];
    let mut total = Scalar::zero();
    let (mut rest, mut h, mut factor) = (remaining, height, Scalar::one());
    while !h.is_negative() {
        total += &factor * count_from(items, t + 1, rest.clone(), h.clone());
        for (r, p) in rest.iter_mut().zip(part) {
            *r -= p;
        }
        h -= part_height;
        factor *= *w;
    }
    total
}
