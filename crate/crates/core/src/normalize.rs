//! Regular coordinates, leading terms and the normalization of a model.
//!
//! All maps produced here are `w`-preserving, weighted-homogeneous, and give
//! old coordinates in terms of new ones (use with [`Direction::Inverse`]).

use num_traits::{One, Zero};

use crate::poly_core::roots::solve_power_equation;
use crate::poly_core::{GaussRational, HoloPoly, Jet, LeadingTermIndex, MonomialKey};
use crate::transforms::{apply, random_element, Direction, HoloMap, MapGroup, TransformError};
use crate::weights::{monomials_with_length, Weight};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("no regular coordinates found after {attempts} random block-linear changes")]
    RegularityNotAchieved { attempts: usize },
    #[error("coordinates are not regular: restricted leading polynomial does not depend on z{k}")]
    NotRegular { k: usize },
    #[error("no leading term in z{k}")]
    NoTerm { k: usize },
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Ordinary-degree bound covering every key of weighted degree one.
pub fn model_bound(weight: &Weight) -> u32 {
    weight.max_ordinary_degree_at_one().clamp(2, 1 << 16)
}

/// `Ok` when `∂Pᵏ/∂z_k ≢ 0` for all `k`; otherwise the first failing `k` (1-based).
pub fn is_regular(p: &Jet) -> Result<(), usize> {
    for k in 0..p.n() {
        if p.restrict_first_k(k + 1).partial_z(k).is_zero() {
            return Err(k + 1);
        }
    }
    Ok(())
}

/// A block-linear change after which `p` is regular; identity if it already is.
pub fn make_regular(p: &Jet, weight: &Weight, seed: u64) -> Result<HoloMap, NormalizeError> {
    const ATTEMPTS: usize = 64;
    if is_regular(p).is_ok() {
        return Ok(HoloMap::identity(p.n()));
    }
    for attempt in 0..ATTEMPTS {
        let m = random_element(MapGroup::Linear, weight, seed.wrapping_add(attempt as u64));
        let q = apply(p, &m, Direction::Inverse)?;
        if is_regular(&q).is_ok() {
            return Ok(m);
        }
    }
    Err(NormalizeError::RegularityNotAchieved { attempts: ATTEMPTS })
}

/// Lexicographically least `(γ, γ̂)` (compared as the concatenated vector)
/// among keys supported in `z₁..z_{k+1}` that involve `z_k` or `z̄_k` (0-based `k`).
pub fn leading_term(p: &Jet, k: usize) -> Result<LeadingTermIndex, NormalizeError> {
    p.iter()
        .map(|(key, _)| key)
        .filter(|key| key.l() == 0 && key.supported_in_first(k + 1) && key.alpha()[k] + key.alpha_hat()[k] > 0)
        .min_by(|a, b| (a.alpha(), a.alpha_hat()).cmp(&(b.alpha(), b.alpha_hat())))
        .map(|key| LeadingTermIndex { k, gamma: key.alpha().to_vec(), gamma_hat: key.alpha_hat().to_vec() })
        .ok_or(NormalizeError::NoTerm { k: k + 1 })
}

/// Keys `(γ, γ̂ − ε_k + α)` with `α` of weight `μ_k` in the variables after
/// `k`: the coefficients the shear in `z_k` can reach; empty when `γ̂_k = 0`.
pub fn shear_targets(lt: &LeadingTermIndex, weight: &Weight) -> Vec<(Vec<u16>, MonomialKey)> {
    let k = lt.k;
    if lt.gamma_hat[k] == 0 {
        return Vec::new();
    }
    monomials_with_length(weight, weight.get(k))
        .into_iter()
        .filter(|alpha| alpha[..=k].iter().all(|&a| a == 0))
        .map(|alpha| {
            let mut hat = lt.gamma_hat.clone();
            hat[k] -= 1;
            for (h, a) in hat.iter_mut().zip(&alpha) {
                *h += a;
            }
            (alpha, MonomialKey::new(&lt.gamma, &hat, 0))
        })
        .collect()
}

/// Keys with `α = γ`, `α̂_j = γ̂_j` for `j < k`, `α̂_k = γ_k − 1` and
/// `|α̂|_Λ = |γ̂|_Λ`, taken literally (note `γ_k`, not `γ̂_k`).
pub fn literal_targets(lt: &LeadingTermIndex, weight: &Weight) -> Vec<MonomialKey> {
    let k = lt.k;
    let n = lt.gamma.len();
    if lt.gamma[k] == 0 {
        return Vec::new();
    }
    let mut head = lt.gamma_hat[..k].to_vec();
    head.push(lt.gamma[k] - 1);
    head.resize(n, 0);
    let target = weight.length(&lt.gamma_hat);
    let head_len = weight.length(&head);
    if head_len > target {
        return Vec::new();
    }
    let rest = target - head_len;
    // tails in the variables after k
    let tail_weight = Weight::new_unchecked(
        (0..n).map(|j| if j > k { weight.get(j).clone() } else { crate::poly_core::Rational::zero() }).collect(),
    );
    monomials_with_length(&tail_weight, &rest)
        .into_iter()
        .map(|tail| {
            let hat: Vec<u16> = head.iter().zip(&tail).map(|(a, b)| a + b).collect();
            MonomialKey::new(&lt.gamma, &hat, 0)
        })
        .collect()
}

/// Scaling `z_k ↦ c z_k` that could not be done over `Q(i)` with rational `|c|`:
/// the condition `A c^p c̄^q = 1` stays open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualScaling {
    pub k: usize,
    pub coeff: GaussRational,
    pub p: u32,
    pub q: u32,
}

#[derive(Clone, Debug)]
pub struct NormalizationReport {
    /// Shears and scalings, each giving old coordinates in terms of new.
    pub chain: Vec<HoloMap>,
    pub normalized: Jet,
    pub leading_terms: Vec<LeadingTermIndex>,
    pub residuals: Vec<ResidualScaling>,
    /// Coefficients at [`literal_targets`] after normalization, nonzero ones only.
    pub literal_nonzero: Vec<(usize, MonomialKey, GaussRational)>,
}

impl NormalizationReport {
    pub fn is_clean(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// Normalizes a regular model variable by variable: a shear in `z_k` clears
/// every coefficient reachable by it, then a scaling sets `A_Γ = 1` when a
/// root of rational modulus exists.
pub fn normalize_model(p: &Jet, weight: &Weight) -> Result<NormalizationReport, NormalizeError> {
    let n = p.n();
    if let Err(k) = is_regular(p) {
        return Err(NormalizeError::NotRegular { k });
    }
    let mut cur = p.with_bound(model_bound(weight).max(p.bound()));
    let mut chain = Vec::new();
    let mut leading_terms = Vec::new();
    let mut residuals = Vec::new();
    for k in 0..n {
        let lt = leading_term(&cur, k)?;
        let a_gamma = cur.coeff(&lt.key());
        let targets = shear_targets(&lt, weight);
        let scale = GaussRational::from_int(lt.gamma_hat[k] as i64) * a_gamma.clone();
        let mut zk = HoloPoly::z(n, k);
        for (alpha, key) in &targets {
            let a_t = cur.coeff(key);
            if !a_t.is_zero() {
                // z̄_k ↦ z̄_k + C̄_α z̄^α moves A_Γ·γ̂_k·C̄_α onto the target
                let c_bar = -(&a_t / &scale);
                zk.add_term(alpha, 0, c_bar.conj());
            }
        }
        if zk != HoloPoly::z(n, k) {
            let mut zs: Vec<HoloPoly> = (0..n).map(|i| HoloPoly::z(n, i)).collect();
            zs[k] = zk;
            let m = HoloMap::from_components(zs, HoloPoly::w(n));
            cur = apply(&cur, &m, Direction::Inverse)?;
            chain.push(m);
        }
        debug_assert!(targets.iter().all(|(_, key)| cur.coeff(key).is_zero()));

        let a_gamma = cur.coeff(&lt.key());
        let (pk, qk) = (lt.gamma[k] as u32, lt.gamma_hat[k] as u32);
        match solve_power_equation(&a_gamma.inv().expect("leading coefficient is nonzero"), pk, qk) {
            Some(c) if c.is_one() => {}
            Some(c) => {
                let mut zs: Vec<HoloPoly> = (0..n).map(|i| HoloPoly::z(n, i)).collect();
                zs[k] = zs[k].scale(&c);
                let m = HoloMap::from_components(zs, HoloPoly::w(n));
                cur = apply(&cur, &m, Direction::Inverse)?;
                chain.push(m);
            }
            None => residuals.push(ResidualScaling { k, coeff: a_gamma, p: pk, q: qk }),
        }
        leading_terms.push(lt);
    }
    let mut literal_nonzero = Vec::new();
    for lt in &leading_terms {
        for key in literal_targets(lt, weight) {
            let c = cur.coeff(&key);
            if !c.is_zero() {
                literal_nonzero.push((lt.k, key, c));
            }
        }
    }
    Ok(NormalizationReport { chain, normalized: cur, leading_terms, residuals, literal_nonzero })
}

/// [`make_regular`] followed by [`normalize_model`]; the regularizing map is
/// the first chain element when it is not the identity.
pub fn regularize_and_normalize(p: &Jet, weight: &Weight, seed: u64) -> Result<NormalizationReport, NormalizeError> {
    let reg = make_regular(p, weight, seed)?;
    let start = if reg.is_identity() { p.clone() } else { apply(p, &reg, Direction::Inverse)? };
    let mut report = normalize_model(&start, weight)?;
    if !reg.is_identity() {
        report.chain.insert(0, reg);
    }
    Ok(report)
}

/// Every reachable target coefficient vanishes.
pub fn targets_vanish(report: &NormalizationReport, weight: &Weight) -> bool {
    report
        .leading_terms
        .iter()
        .all(|lt| shear_targets(lt, weight).iter().all(|(_, key)| report.normalized.coeff(key).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;
    use crate::transforms::classify;

    fn abs_sq(j: &Jet) -> Jet {
        j.mul(&j.conjugate())
    }

    fn z(n: usize, i: usize) -> Jet {
        Jet::z(n, 20, i)
    }

    #[test]
    fn regularity() {
        let p = abs_sq(&z(2, 0)).pow(2).add(&abs_sq(&z(2, 1)).pow(3));
        assert_eq!(is_regular(&p), Ok(()));
        let q = abs_sq(&z(2, 0).mul(&z(2, 1)));
        assert_eq!(is_regular(&q), Err(1));
        let l = Weight::constant(2, rat(1, 4));
        let m = make_regular(&q, &l, 7).unwrap();
        let r = apply(&q, &m, Direction::Inverse).unwrap();
        assert_eq!(is_regular(&r), Ok(()));
        assert_eq!(m, make_regular(&q, &l, 7).unwrap());
        assert!(make_regular(&p, &l, 1).unwrap().is_identity());
    }

    #[test]
    fn leading_terms() {
        let p = abs_sq(&z(2, 0)).pow(2).add(&abs_sq(&z(2, 1)).pow(3));
        assert_eq!(leading_term(&p, 0).unwrap().key(), MonomialKey::new(&[2, 0], &[2, 0], 0));
        assert_eq!(leading_term(&p, 1).unwrap().key(), MonomialKey::new(&[0, 3], &[0, 3], 0));
        let one = abs_sq(&z(1, 0)).pow(2);
        let lt = leading_term(&one, 0).unwrap();
        assert_eq!((lt.gamma, lt.gamma_hat), (vec![2], vec![2]));
    }

    #[test]
    fn irrational_scaling_is_reported() {
        let p = abs_sq(&z(1, 0)).pow(2).scale_real(&rat(4, 1));
        let l = Weight::new_unchecked(vec![rat(1, 4)]);
        let r = normalize_model(&p, &l).unwrap();
        assert_eq!(r.residuals, vec![ResidualScaling { k: 0, coeff: GaussRational::from_int(4), p: 2, q: 2 }]);
        let p16 = abs_sq(&z(1, 0)).pow(2).scale_real(&rat(16, 1));
        let r16 = normalize_model(&p16, &l).unwrap();
        assert!(r16.is_clean());
        assert_eq!(r16.normalized, abs_sq(&z(1, 0)).pow(2));
    }

    #[test]
    fn shear_clears_reachable_coefficient() {
        // P = |z1|⁴ + 2 Re(z1² z̄1 z̄2) + |z2|⁴ with Λ = (1/4, 1/4)
        let n = 2;
        let mut p = abs_sq(&z(n, 0)).pow(2).add(&abs_sq(&z(n, 1)).pow(2));
        let key = MonomialKey::new(&[2, 0], &[1, 1], 0);
        p.add_term(key.clone(), GaussRational::from_int(1));
        p.add_term(key.conjugate(), GaussRational::from_int(1));
        let l = Weight::constant(2, rat(1, 4));
        let r = normalize_model(&p, &l).unwrap();
        assert!(r.normalized.coeff(&key).is_zero());
        assert!(targets_vanish(&r, &l));
        for m in &r.chain {
            assert_eq!(classify(m, &l), crate::transforms::MapClass::Homogeneous);
        }
        // idempotent
        let again = normalize_model(&r.normalized, &l).unwrap();
        assert!(again.chain.is_empty());
        assert_eq!(again.normalized, r.normalized);
    }

    #[test]
    fn literal_and_reachable_sets() {
        let l = Weight::new_unchecked(vec![rat(1, 4), rat(1, 6)]);
        // γ_k = γ̂_k: both sets agree
        let lt = LeadingTermIndex { k: 0, gamma: vec![2, 0], gamma_hat: vec![2, 0] };
        let reach: Vec<MonomialKey> = shear_targets(&lt, &l).into_iter().map(|(_, k)| k).collect();
        assert_eq!(reach, literal_targets(&lt, &l));
        // γ_k = γ̂_k + 1: the literal set is {Γ} itself
        let lt = LeadingTermIndex { k: 0, gamma: vec![3, 0], gamma_hat: vec![2, 0] };
        assert_eq!(literal_targets(&lt, &l), vec![lt.key()]);
    }
}
