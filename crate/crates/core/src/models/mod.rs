//! Models `v = P(z, z̄)`, the superhomogeneity test, and explicit
//! Λ-homogeneous equivalences between models.
//!
//! A map in the group `𝓗` is stored as a [`HoloMap`] read forward:
//! `z̃ = φ(z)`, `w̃ = c·w + D(z)` with `φ` Λ-homogeneous, `c` real and `D`
//! of weighted degree one. It carries `v = P` onto `ṽ = P̃` iff
//! `c·P + Im D = P̃∘φ`.

mod numeric;
mod solver;
pub mod toric;

use num_traits::{One, Zero};

pub use solver::{solve_equivalence, Equivalence};

use crate::engine::MultitypeResult;
use crate::normalize::{is_regular, model_bound, normalize_model};
use crate::poly_core::{GaussRational, HoloPoly, Jet, MonomialKey, Rational};
use crate::transforms::{apply, classify, compose, invert_to_order, Direction, HoloMap, TransformError};
use crate::weights::{homogeneous_part, Weight};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("identity fails at {} key(s)", .0.len())]
    IdentityFails(Vec<MonomialKey>),
    #[error("map is not of the form z ↦ φ(z), w ↦ c·w + D(z) with real c ≠ 0")]
    NotModelMap,
    #[error("no equivalence found within budget ({explored} search nodes)")]
    NotFoundWithinBudget { explored: usize },
    #[error(transparent)]
    Transform(#[from] TransformError),
}

pub fn model_of(result: &MultitypeResult) -> Jet {
    result.model.clone()
}

/// Whether `map` preserves adaptedness for `weight` (homogeneous or superhomogeneous).
pub fn check_superhomogeneous(map: &HoloMap, weight: &Weight) -> bool {
    classify(map, weight).is_superhomogeneous()
}

/// Splits a model map into `(φ, c, D)`.
pub fn model_map_parts(map: &HoloMap) -> Result<(Vec<HoloPoly>, Rational, HoloPoly), ModelError> {
    let n = map.n();
    let (zs, w) = map.components();
    if zs.iter().any(|z| z.depends_on_w()) {
        return Err(ModelError::NotModelMap);
    }
    let c = w.coeff(&vec![0; n], 1);
    if c.is_zero() || !c.is_real() {
        return Err(ModelError::NotModelMap);
    }
    let d = w.filter(|_, m| m == 0);
    if w.sub(&d).sub(&HoloPoly::w(n).scale(&c)).len() > 0 {
        return Err(ModelError::NotModelMap);
    }
    Ok((zs, c.re, d))
}

pub fn model_map(phi: Vec<HoloPoly>, c: &Rational, d: HoloPoly) -> HoloMap {
    let n = phi.len();
    HoloMap::from_components(phi, HoloPoly::w(n).scale(&GaussRational::from_real(c.clone())).add(&d))
}

fn im_of(d: &HoloPoly, bound: u32) -> Jet {
    let j = d.to_jet(bound);
    // Im D = (D − D̄)/(2i)
    j.sub(&j.conjugate()).scale(&GaussRational::from_parts(0, 1, -1, 2))
}

fn substitution_bound(p_tilde: &Jet, phi: &[HoloPoly]) -> u32 {
    let deg_p = p_tilde.max_degree().unwrap_or(0);
    let deg_phi = phi.iter().filter_map(|f| f.max_degree()).max().unwrap_or(1);
    deg_p.saturating_mul(deg_phi).max(1)
}

/// `P̃∘φ` as an exact polynomial.
fn pullback(p_tilde: &Jet, phi: &[HoloPoly]) -> Result<Jet, TransformError> {
    let n = phi.len();
    let bound = substitution_bound(p_tilde, phi);
    let m = HoloMap::from_components(phi.to_vec(), HoloPoly::w(n));
    apply(&p_tilde.with_bound(bound), &m, Direction::Inverse)
}

/// Checks `c·P + Im D = P̃∘φ` coefficient by coefficient.
pub fn verify_model_map(map: &HoloMap, p: &Jet, p_tilde: &Jet) -> Result<(), ModelError> {
    let (phi, c, d) = model_map_parts(map)?;
    let rhs = pullback(p_tilde, &phi)?;
    let bound = rhs.bound().max(p.max_degree().unwrap_or(0)).max(d.max_degree().unwrap_or(0));
    let lhs = p.with_bound(bound).scale_real(&c).add(&im_of(&d, bound));
    let diff = lhs.sub(&rhs.with_bound(bound));
    if diff.is_zero() {
        Ok(())
    } else {
        Err(ModelError::IdentityFails(diff.keys()))
    }
}

/// Inverse of a model map.
pub fn invert_model_map(map: &HoloMap, weight: &Weight) -> Result<HoloMap, ModelError> {
    Ok(invert_to_order(map, model_bound(weight))?)
}

/// The model `P̃` with `P̃∘φ = c·P` (the pluriharmonic `Im D∘φ⁻¹` is absorbed
/// by the normalization of the image).
pub fn apply_model(map: &HoloMap, p: &Jet, weight: &Weight) -> Result<Jet, ModelError> {
    let (phi, c, _) = model_map_parts(map)?;
    let n = phi.len();
    let inv = invert_to_order(&HoloMap::from_components(phi, HoloPoly::w(n)), model_bound(weight))?;
    let (inv_phi, _) = inv.components();
    let out = pullback(p, &inv_phi)?.scale_real(&c);
    let (_, rest) = out.strip_pluriharmonic();
    Ok(homogeneous_part(&rest, weight, &Rational::one()).with_bound(p.bound()))
}

fn is_model(p: &Jet, weight: &Weight) -> bool {
    !p.is_zero() && !p.has_pluriharmonic_terms() && homogeneous_part(p, weight, &Rational::one()) == *p && p.is_real()
}

fn chain_map(chain: &[HoloMap], n: usize, order: u32) -> HoloMap {
    chain.iter().fold(HoloMap::identity(n), |acc, m| compose(&acc, m, order))
}

/// `(φ, c)` with `P̃∘φ = c·P` mod pluriharmonic terms → the full model map.
fn close(phi: Vec<HoloPoly>, c: &Rational, p: &Jet, p_tilde: &Jet) -> Result<HoloMap, ModelError> {
    let pulled = pullback(p_tilde, &phi)?;
    let residual = pulled.sub(&p.with_bound(pulled.bound()).scale_real(c));
    let (g, _) = residual.strip_pluriharmonic();
    // residual = 2 Re h, g = −2i h, and Im D = 2 Re h for D = 2i h = −g
    let map = model_map(phi, c, g.neg());
    verify_model_map(&map, p, p_tilde)?;
    Ok(map)
}

/// Searches a map in `𝓗` carrying `v = P` onto `v = P̃`.
///
/// Both sides are normalized first when they are regular and normalize
/// without residual scalings; the coefficient system between the normal
/// forms is then solved exactly, and the raw system is tried if that fails. `NotFoundWithinBudget` is not a proof of
/// inequivalence.
pub fn equivalence_map(p: &Jet, p_tilde: &Jet, weight: &Weight, budget: usize) -> Result<HoloMap, ModelError> {
    let n = p.n();
    if p_tilde.n() != n || weight.n() != n || !is_model(p, weight) || !is_model(p_tilde, weight) {
        return Err(ModelError::NotFoundWithinBudget { explored: 0 });
    }
    if p == p_tilde {
        return Ok(HoloMap::identity(n));
    }
    let order = model_bound(weight);
    let mut explored = 0;
    if is_regular(p).is_ok() && is_regular(p_tilde).is_ok() {
        // residual scalings leave the normal forms related only over an
        // extension of Q(i), so only clean ones are compared
        if let (Ok(a), Ok(b)) = (normalize_model(p, weight), normalize_model(p_tilde, weight)) {
            if !(a.is_clean() && b.is_clean()) {
                return raw_equivalence(p, p_tilde, weight, budget, explored);
            }
            match solve_equivalence(&a.normalized, &b.normalized, weight, budget) {
                Ok(eq) => {
                    let a_map = chain_map(&a.chain, n, order);
                    let b_map = chain_map(&b.chain, n, order);
                    let a_inv = invert_to_order(&a_map, order)?;
                    let phi0 = HoloMap::from_components(eq.phi, HoloPoly::w(n));
                    let full = compose(&b_map, &compose(&phi0, &a_inv, order), order);
                    if let Ok(map) = close(full.components().0, &eq.c, p, p_tilde) {
                        return Ok(map);
                    }
                    explored += eq.nodes;
                }
                Err(nodes) => explored += nodes,
            }
        }
    }
    raw_equivalence(p, p_tilde, weight, budget, explored)
}

fn raw_equivalence(p: &Jet, p_tilde: &Jet, weight: &Weight, budget: usize, explored: usize) -> Result<HoloMap, ModelError> {
    match solve_equivalence(p, p_tilde, weight, budget) {
        Ok(eq) => close(eq.phi, &eq.c, p, p_tilde).map_err(|_| ModelError::NotFoundWithinBudget { explored: explored + eq.nodes }),
        Err(nodes) => Err(ModelError::NotFoundWithinBudget { explored: explored + nodes }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;
    use crate::transforms::{random_element, MapGroup};

    fn abs_sq(j: &Jet) -> Jet {
        j.mul(&j.conjugate())
    }

    fn z(n: usize, i: usize) -> Jet {
        Jet::z(n, 20, i)
    }

    #[test]
    fn superhomogeneity() {
        let l = Weight::new_unchecked(vec![rat(1, 4)]);
        assert!(check_superhomogeneous(&HoloMap::identity(1), &l));
        let mut f = HoloPoly::zero(1);
        f.add_term(&[2], 0, GaussRational::one());
        assert!(check_superhomogeneous(&HoloMap::from_parts(vec![f], HoloPoly::zero(1)), &l));
        assert!(!check_superhomogeneous(&HoloMap::w_shift(HoloPoly::z(1, 0)), &l));
    }

    #[test]
    fn scaling_verifies_and_wrong_sign_fails() {
        let p = abs_sq(&z(1, 0)).pow(2);
        let phi = vec![HoloPoly::z(1, 0).scale(&GaussRational::from_int(2))];
        let good = model_map(phi.clone(), &rat(16, 1), HoloPoly::zero(1));
        assert_eq!(verify_model_map(&good, &p, &p), Ok(()));
        let bad = model_map(phi, &rat(-16, 1), HoloPoly::zero(1));
        assert_eq!(verify_model_map(&bad, &p, &p), Err(ModelError::IdentityFails(vec![MonomialKey::new(&[2], &[2], 0)])));
        assert_eq!(verify_model_map(&HoloMap::identity(1), &p, &p), Ok(()));
    }

    #[test]
    fn weight_mismatch_is_not_found() {
        let l = Weight::new_unchecked(vec![rat(1, 4)]);
        let p = abs_sq(&z(1, 0)).pow(2);
        let q = abs_sq(&z(1, 0)).pow(3);
        assert_eq!(equivalence_map(&p, &q, &l, 100), Err(ModelError::NotFoundWithinBudget { explored: 0 }));
        assert_eq!(equivalence_map(&p, &p, &l, 100), Ok(HoloMap::identity(1)));
    }

    #[test]
    fn round_trip_and_inverse_agree() {
        let l = Weight::new_unchecked(vec![rat(1, 4), rat(1, 6)]);
        let mut p = abs_sq(&z(2, 0)).pow(2).add(&abs_sq(&z(2, 1)).pow(3));
        let key = MonomialKey::new(&[2, 0], &[0, 3], 0);
        p.add_term(key.clone(), GaussRational::from_int(-1));
        p.add_term(key.conjugate(), GaussRational::from_int(-1));
        for seed in 0..5 {
            let m = random_element(MapGroup::Homogeneous, &l, seed);
            let q = apply_model(&m, &p, &l).unwrap();
            let found = equivalence_map(&p, &q, &l, 2000).unwrap();
            assert_eq!(verify_model_map(&found, &p, &q), Ok(()));
            let inv = invert_model_map(&found, &l).unwrap();
            assert_eq!(verify_model_map(&inv, &q, &p), Ok(()));
        }
    }
}
