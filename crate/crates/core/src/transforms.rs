//! Polynomial biholomorphisms `(z, w) ↦ (z + f(z, w), w + g(z, w))` and their
//! action on graphs `v = F(z, z̄, u)`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, Matrix};
use crate::poly_core::holo::substitute;
use crate::poly_core::{rat, GaussRational, HoloPoly, Jet, Rational};
use crate::weights::{monomials_with_length, Weight};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("map has singular linear part at the origin")]
    SingularMap,
    #[error("map does not fix the origin")]
    NotOriginPreserving,
    #[error("map does not preserve the tangent hyperplane: coefficient of w in the new w is {0}")]
    NonRealNormalScale(String),
    #[error("truncation bound {bound} is too small; at least {required} is needed")]
    TruncationInsufficient { bound: u32, required: u32 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// How a [`HoloMap`] relates old coordinates `(z, w)` and new ones `(z*, w*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// The map gives new coordinates in terms of old: `z* = z + f(z, w)`.
    Forward,
    /// The map gives old coordinates in terms of new: `z = z* + f(z*, w*)`.
    Inverse,
}

/// `z_i ↦ z_i + f_i(z, w)`, `w ↦ w + g(z, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoloMap {
    n: usize,
    fs: Vec<HoloPoly>,
    g: HoloPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapClass {
    Homogeneous,
    Superhomogeneous,
    Subhomogeneous,
    None,
}

impl MapClass {
    pub fn is_superhomogeneous(self) -> bool {
        matches!(self, MapClass::Homogeneous | MapClass::Superhomogeneous)
    }

    pub fn is_subhomogeneous(self) -> bool {
        matches!(self, MapClass::Homogeneous | MapClass::Subhomogeneous)
    }
}

impl HoloMap {
    pub fn identity(n: usize) -> Self {
        Self { n, fs: vec![HoloPoly::zero(n); n], g: HoloPoly::zero(n) }
    }

    pub fn from_parts(fs: Vec<HoloPoly>, g: HoloPoly) -> Self {
        let n = g.n();
        assert_eq!(fs.len(), n, "need one f per variable");
        Self { n, fs, g }
    }

    /// From full components `z_i ↦ Z_i`, `w ↦ W`.
    pub fn from_components(zs: Vec<HoloPoly>, w: HoloPoly) -> Self {
        let n = w.n();
        let fs = zs.iter().enumerate().map(|(i, c)| c.sub(&HoloPoly::z(n, i))).collect();
        let g = w.sub(&HoloPoly::w(n));
        Self { n, fs, g }
    }

    /// `z ↦ A z`, `w ↦ c w`.
    pub fn linear(a: &Matrix, c: Rational) -> Self {
        let n = a.len();
        let zs = (0..n)
            .map(|i| {
                let mut h = HoloPoly::zero(n);
                for j in 0..n {
                    let mut alpha = vec![0u16; n];
                    alpha[j] = 1;
                    h.add_term(&alpha, 0, a[i][j].clone());
                }
                h
            })
            .collect();
        Self::from_components(zs, HoloPoly::w(n).scale(&GaussRational::from_real(c)))
    }

    /// `z*_i = z_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        Self::from_components(perm.iter().map(|&j| HoloPoly::z(n, j)).collect(), HoloPoly::w(n))
    }

    /// `w ↦ w + g(z)`.
    pub fn w_shift(g: HoloPoly) -> Self {
        let n = g.n();
        Self { n, fs: vec![HoloPoly::zero(n); n], g }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fs(&self) -> &[HoloPoly] {
        &self.fs
    }

    pub fn g(&self) -> &HoloPoly {
        &self.g
    }

    pub fn z_component(&self, i: usize) -> HoloPoly {
        HoloPoly::z(self.n, i).add(&self.fs[i])
    }

    pub fn w_component(&self) -> HoloPoly {
        HoloPoly::w(self.n).add(&self.g)
    }

    pub fn components(&self) -> (Vec<HoloPoly>, HoloPoly) {
        ((0..self.n).map(|i| self.z_component(i)).collect(), self.w_component())
    }

    pub fn is_identity(&self) -> bool {
        self.fs.iter().all(|f| f.is_zero()) && self.g.is_zero()
    }

    /// Rows are components `z₁..zₙ, w`; columns the variables `z₁..zₙ, w`.
    pub fn jacobian(&self) -> Matrix {
        let (zs, w) = self.components();
        zs.iter().chain(std::iter::once(&w)).map(|c| c.linear_coeffs()).collect()
    }

    pub fn is_nonsingular(&self) -> bool {
        !linalg::determinant(&self.jacobian()).is_zero()
    }

    pub fn fixes_origin(&self) -> bool {
        self.fs.iter().all(|f| f.constant_term().is_zero()) && self.g.constant_term().is_zero()
    }

    pub fn depends_on_w(&self) -> bool {
        let (zs, w) = self.components();
        zs.iter().any(|c| c.depends_on_w()) || w.filter(|a, m| m > 1 || (m == 1 && a.iter().any(|&x| x > 0))).depends_on_w()
    }

    pub fn max_degree(&self) -> u32 {
        self.fs.iter().chain(std::iter::once(&self.g)).filter_map(|p| p.max_degree()).max().unwrap_or(1).max(1)
    }

    fn validate(&self) -> Result<(), TransformError> {
        if !self.fixes_origin() {
            return Err(TransformError::NotOriginPreserving);
        }
        if !self.is_nonsingular() {
            return Err(TransformError::SingularMap);
        }
        Ok(())
    }

    /// Relabels variables: new `z_i` is old `z_{perm[i]}` in every component and argument.
    pub fn conjugate_by_permutation(&self, perm: &[usize]) -> Self {
        let fs = perm.iter().map(|&j| self.fs[j].permute(perm)).collect();
        Self { n: self.n, fs, g: self.g.permute(perm) }
    }
}

/// Weighted degree of the monomial `z^α w^m`, with `w` of weight one.
fn holo_degrees(p: &HoloPoly, weight: &Weight) -> Vec<Rational> {
    p.terms().map(|(a, m, _)| weight.holo_degree(a, m)).collect()
}

/// Compares every monomial of each component against the weight of its target
/// variable (`λ_i` for `z_i`, one for `w`).
pub fn classify(map: &HoloMap, weight: &Weight) -> MapClass {
    let (zs, w) = map.components();
    let mut sup = true;
    let mut sub = true;
    let one = Rational::one();
    for (target, comp) in zs.iter().enumerate().map(|(i, c)| (weight.get(i).clone(), c)).chain(std::iter::once((one, &w))) {
        for d in holo_degrees(comp, weight) {
            sup &= d >= target;
            sub &= d <= target;
        }
    }
    match (sup, sub) {
        (true, true) => MapClass::Homogeneous,
        (true, false) => MapClass::Superhomogeneous,
        (false, true) => MapClass::Subhomogeneous,
        (false, false) => MapClass::None,
    }
}

/// Applies `L⁻¹` (as a matrix over `z₁..zₙ, w`) to a vector of components.
fn mat_apply(m: &Matrix, v: &[HoloPoly]) -> Vec<HoloPoly> {
    m.iter()
        .map(|row| {
            let mut acc = HoloPoly::zero(v[0].n());
            for (c, p) in row.iter().zip(v) {
                if !c.is_zero() {
                    acc = acc.add(&p.scale(c));
                }
            }
            acc
        })
        .collect()
}

/// `outer ∘ inner`, truncated at ordinary degree `order`.
pub fn compose(outer: &HoloMap, inner: &HoloMap, order: u32) -> HoloMap {
    let (izs, iw) = inner.components();
    let (ozs, ow) = outer.components();
    let zs = ozs.iter().map(|c| c.compose(&izs, &iw, order).0).collect();
    let w = ow.compose(&izs, &iw, order).0;
    HoloMap::from_components(zs, w)
}

/// A map `Ψ` with `map ∘ Ψ = id` modulo terms of ordinary degree above `order`.
pub fn invert_to_order(map: &HoloMap, order: u32) -> Result<HoloMap, TransformError> {
    map.validate()?;
    let n = map.n;
    let jac = map.jacobian();
    let linv = linalg::inverse(&jac).ok_or(TransformError::SingularMap)?;
    let (zs, w) = map.components();
    let comps: Vec<HoloPoly> = zs.into_iter().chain(std::iter::once(w)).collect();
    let nonlinear: Vec<HoloPoly> = comps.iter().map(|c| c.filter(|a, m| a.iter().map(|&x| x as u32).sum::<u32>() + m as u32 > 1)).collect();
    let ids: Vec<HoloPoly> = (0..n).map(|i| HoloPoly::z(n, i)).chain(std::iter::once(HoloPoly::w(n))).collect();
    let mut psi = mat_apply(&linv, &ids);
    if nonlinear.iter().all(|p| p.is_zero()) {
        return Ok(HoloMap::from_components(psi[..n].to_vec(), psi[n].clone()));
    }
    // Ψ ← L⁻¹(id − N∘Ψ); each pass fixes at least one more degree.
    for _ in 0..=order {
        let rhs: Vec<HoloPoly> = ids
            .iter()
            .zip(&nonlinear)
            .map(|(y, nl)| {
                let (c, _) = nl.compose(&psi[..n], &psi[n], order);
                y.sub(&c)
            })
            .collect();
        let next = mat_apply(&linv, &rhs);
        if next == psi {
            break;
        }
        psi = next;
    }
    Ok(HoloMap::from_components(psi[..n].to_vec(), psi[n].clone()))
}

/// Rewrites the graph `v = F(z, z̄, u)` in the coordinates produced by `map`.
///
/// With old coordinates `z = Z(z*, w*)`, `w = a·w* + h(z*, w*)` (`a` real,
/// `h` free of a linear `w*` term) the new defining function solves
/// `v* = (F(Z, Z̄, Re w) − Im h)/a` with `w* = u* + i v*`; the fixed point is
/// reached degree by degree. The result keeps `F`'s bound and carries the
/// truncation flag if any key was discarded.
pub fn apply(f: &Jet, map: &HoloMap, dir: Direction) -> Result<Jet, TransformError> {
    if f.n() != map.n {
        return Err(TransformError::DimensionMismatch { left: f.n(), right: map.n });
    }
    let bound = f.bound();
    let old_in_new = match dir {
        Direction::Forward => invert_to_order(map, bound)?,
        Direction::Inverse => {
            map.validate()?;
            map.clone()
        }
    };
    regraph(f, &old_in_new)
}

fn regraph(f: &Jet, inv: &HoloMap) -> Result<Jet, TransformError> {
    let n = f.n();
    let bound = f.bound();
    let (zs, w) = inv.components();
    let a = w.coeff(&vec![0; n], 1);
    if !a.is_real() || a.is_zero() {
        return Err(TransformError::NonRealNormalScale(a.to_string()));
    }
    let a_inv = a.inv().expect("nonzero");
    let mut h = w.clone();
    h.add_term(&vec![0; n], 1, -&a);
    let zjets: Vec<Jet> = (0..n).map(|i| Jet::z(n, bound, i)).collect();
    let needs_iteration = zs.iter().any(|c| c.depends_on_w()) || h.depends_on_w();

    let mut v = Jet::zero(n, bound);
    let mut dropped_any = false;
    for _ in 0..=bound + 1 {
        let wstar = Jet::u(n, bound).add(&v.scale(&GaussRational::i()));
        let zimg: Vec<Jet> = zs.iter().map(|c| c.eval_jets(&zjets, &wstar, bound)).collect();
        let himg = h.eval_jets(&zjets, &wstar, bound);
        let w_old = wstar.scale(&a).add(&himg);
        let mut subs: Vec<_> = zimg.iter().map(|j| j.poly().clone()).collect();
        subs.extend(zimg.iter().map(|j| j.conjugate().poly().clone()));
        subs.push(w_old.real_part().poly().clone());
        let (p, dropped) = substitute(f.poly(), &subs, 2 * n + 1, bound);
        let fimg = Jet::from_poly(n, bound, p);
        let next = fimg.sub(&himg.imag_part()).scale(&a_inv);
        dropped_any = dropped || next.truncated() || zimg.iter().any(|j| j.truncated());
        if !needs_iteration || next == v {
            v = next;
            break;
        }
        v = next;
    }
    Ok(v.clear_truncated().with_truncated(dropped_any || f.truncated()))
}

/// Applies a sequence of steps in order.
pub fn apply_chain(f: &Jet, chain: &[(HoloMap, Direction)]) -> Result<Jet, TransformError> {
    let mut cur = f.clone();
    for (m, d) in chain {
        cur = apply(&cur, m, *d)?;
    }
    Ok(cur)
}

/// Raises [`TransformError::TruncationInsufficient`] when keys were discarded
/// that could still have weighted degree `≤ 1` under `weight`.
pub fn check_truncation(jet: &Jet, weight: &Weight) -> Result<(), TransformError> {
    if !jet.truncated() {
        return Ok(());
    }
    let min = weight.min_entry();
    let bound = jet.bound();
    // discarded keys have ordinary degree ≥ bound + 1
    if min.is_zero() || Rational::from_integer((bound + 1).into()) * &min <= Rational::one() {
        let required = weight.max_ordinary_degree_at_one().max(bound + 1);
        return Err(TransformError::TruncationInsufficient { bound, required });
    }
    Ok(())
}

/// The groups a random map can be drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapGroup {
    /// Block-linear maps respecting equal-weight blocks, `w` fixed.
    Linear,
    /// Λ-homogeneous maps fixing `w`.
    HomogeneousZ,
    /// Λ-homogeneous maps with `w ↦ c w + Σ D_α z^α`, `c` real.
    Homogeneous,
}

/// Coefficient with numerators and denominators bounded by `height`.
pub fn random_coefficient(rng: &mut ChaCha8Rng, height: i64, complex: bool) -> GaussRational {
    let part = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-height..=height), rng.gen_range(1..=height));
    let re = part(rng);
    let im = if complex && rng.gen_bool(0.5) { part(rng) } else { Rational::zero() };
    GaussRational::new(re, im)
}

fn nonzero_coefficient(rng: &mut ChaCha8Rng, height: i64, complex: bool) -> GaussRational {
    loop {
        let c = random_coefficient(rng, height, complex);
        if !c.is_zero() {
            return c;
        }
    }
}

const HEIGHT: i64 = 5;

fn random_block_linear(weight: &Weight, rng: &mut ChaCha8Rng) -> Matrix {
    let n = weight.n();
    loop {
        let mut m = linalg::zeros(n, n);
        for block in weight.blocks() {
            for i in block.clone() {
                for j in block.clone() {
                    m[i][j] = random_coefficient(rng, HEIGHT, true);
                }
            }
        }
        if !linalg::determinant(&m).is_zero() {
            return m;
        }
    }
}

/// A pseudo-random member of `group`, deterministic in `seed`.
pub fn random_element(group: MapGroup, weight: &Weight, seed: u64) -> HoloMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = weight.n();
    let lin = random_block_linear(weight, &mut rng);
    let map = HoloMap::linear(&lin, Rational::one());
    if group == MapGroup::Linear {
        return map;
    }
    let mut zs: Vec<HoloPoly> = map.components().0;
    for (i, comp) in zs.iter_mut().enumerate() {
        for alpha in monomials_with_length(weight, weight.get(i)) {
            if alpha.iter().map(|&a| a as u32).sum::<u32>() > 1 && rng.gen_bool(0.5) {
                comp.add_term(&alpha, 0, nonzero_coefficient(&mut rng, HEIGHT, true));
            }
        }
    }
    let mut w = HoloPoly::w(n);
    if group == MapGroup::Homogeneous {
        let c = nonzero_coefficient(&mut rng, HEIGHT, false);
        w = w.scale(&c);
        for alpha in monomials_with_length(weight, &Rational::one()) {
            if rng.gen_bool(0.3) {
                w.add_term(&alpha, 0, nonzero_coefficient(&mut rng, HEIGHT, true));
            }
        }
    }
    HoloMap::from_components(zs, w)
}

/// A Λ-homogeneous map plus a few terms of higher weighted degree (including
/// `w`-dependent ones) of ordinary degree at most `degree_budget`.
pub fn random_superhomogeneous(weight: &Weight, degree_budget: u32, seed: u64) -> HoloMap {
    let base = random_element(MapGroup::Homogeneous, weight, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = weight.n();
    let (mut zs, mut w) = base.components();
    let budget = degree_budget.max(2);
    let extra = |rng: &mut ChaCha8Rng, target: &Rational, comp: &mut HoloPoly| {
        let count = rng.gen_range(0..=2);
        for _ in 0..count {
            for _attempt in 0..16 {
                let m: u16 = if rng.gen_bool(0.25) { 1 } else { 0 };
                let mut alpha = vec![0u16; n];
                let deg = rng.gen_range(1..=budget) as u16;
                for _ in 0..deg.saturating_sub(m) {
                    alpha[rng.gen_range(0..n)] += 1;
                }
                let total: u32 = alpha.iter().map(|&a| a as u32).sum::<u32>() + m as u32;
                if total >= 2 && total <= budget && weight.holo_degree(&alpha, m) > *target {
                    comp.add_term(&alpha, m, nonzero_coefficient(rng, HEIGHT, true));
                    break;
                }
            }
        }
    };
    for (i, comp) in zs.iter_mut().enumerate() {
        extra(&mut rng, weight.get(i), comp);
    }
    extra(&mut rng, &Rational::one(), &mut w);
    HoloMap::from_components(zs, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::MonomialKey;

    fn abs_pow(n: usize, bound: u32, i: usize, p: u32) -> Jet {
        Jet::z(n, bound, i).mul(&Jet::zbar(n, bound, i)).pow(p)
    }

    fn shear(n: usize) -> HoloMap {
        // z1* = z1 + z2², z2* = z2
        let mut f1 = HoloPoly::zero(n);
        f1.add_term(&[0, 2], 0, GaussRational::one());
        HoloMap::from_parts(vec![f1, HoloPoly::zero(n)], HoloPoly::zero(n))
    }

    #[test]
    fn identity_is_neutral() {
        let f = abs_pow(2, 8, 0, 2).add(&abs_pow(2, 8, 1, 3));
        assert_eq!(apply(&f, &HoloMap::identity(2), Direction::Forward).unwrap(), f);
        assert_eq!(invert_to_order(&HoloMap::identity(2), 5).unwrap(), HoloMap::identity(2));
    }

    #[test]
    fn scaling_divides_by_sixteen() {
        // z1* = 2 z1: old z1 = z1*/2
        let f = abs_pow(1, 8, 0, 2);
        let m = HoloMap::linear(&vec![vec![GaussRational::from_int(2)]], Rational::one());
        let got = apply(&f, &m, Direction::Forward).unwrap();
        assert_eq!(got, f.scale_real(&rat(1, 16)));
    }

    #[test]
    fn strip_map_removes_real_cube() {
        let n = 1;
        let z = Jet::z(n, 8, 0);
        let re_z3 = z.pow(3).real_part();
        let f = re_z3.add(&abs_pow(n, 8, 0, 2));
        // w* = w − i z³
        let g = HoloPoly::monomial(&[3], 0, -GaussRational::i());
        let got = apply(&f, &HoloMap::w_shift(g.clone()), Direction::Forward).unwrap();
        assert_eq!(got, abs_pow(n, 8, 0, 2));
        let (g2, rest) = f.strip_pluriharmonic();
        assert_eq!(g2, g);
        assert_eq!(rest, abs_pow(n, 8, 0, 2));
    }

    #[test]
    fn triangular_inverse_is_exact() {
        let inv = invert_to_order(&shear(2), 10).unwrap();
        let mut f1 = HoloPoly::zero(2);
        f1.add_term(&[0, 2], 0, -GaussRational::one());
        assert_eq!(inv, HoloMap::from_parts(vec![f1, HoloPoly::zero(2)], HoloPoly::zero(2)));
        assert!(compose(&shear(2), &inv, 10).is_identity());
    }

    #[test]
    fn shear_round_trip_on_jet() {
        let f = abs_pow(2, 12, 0, 2).add(&abs_pow(2, 12, 1, 3));
        let there = apply(&f, &shear(2), Direction::Forward).unwrap();
        // the pullback: F*(z*) = |z1* − z2*²|⁴ + |z2*|⁶
        let z1 = Jet::z(2, 12, 0).sub(&Jet::z(2, 12, 1).pow(2));
        let expect = z1.mul(&z1.conjugate()).pow(2).add(&abs_pow(2, 12, 1, 3));
        assert_eq!(there, expect);
        let back = apply(&there, &shear(2), Direction::Inverse).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn w_dependent_map_round_trip() {
        // z1* = z1 + z1·w, w* = w + z1²·w
        let n = 1;
        let mut f1 = HoloPoly::zero(n);
        f1.add_term(&[1], 1, GaussRational::one());
        let g = HoloPoly::monomial(&[2], 1, GaussRational::from_parts(1, 2, 1, 1));
        let m = HoloMap::from_parts(vec![f1], g);
        let f = abs_pow(n, 8, 0, 2);
        let there = apply(&f, &m, Direction::Forward).unwrap();
        assert!(there.is_real());
        let back = apply(&there, &m, Direction::Inverse).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn permutation_relabels() {
        let f = abs_pow(2, 8, 0, 2).add(&abs_pow(2, 8, 1, 3));
        let got = apply(&f, &HoloMap::permutation(&[1, 0]), Direction::Forward).unwrap();
        assert_eq!(got, f.permute(&[1, 0]));
        assert_eq!(got.coeff(&MonomialKey::new(&[3, 0], &[3, 0], 0)), GaussRational::one());
    }

    #[test]
    fn classification() {
        let l = Weight::new_unchecked(vec![rat(1, 2), rat(1, 4)]);
        assert_eq!(classify(&shear(2), &l), MapClass::Homogeneous);
        let mut f1 = HoloPoly::zero(1);
        f1.add_term(&[3], 0, GaussRational::one());
        let cube = HoloMap::from_parts(vec![f1], HoloPoly::zero(1));
        assert_eq!(classify(&cube, &Weight::new_unchecked(vec![rat(1, 4)])), MapClass::Superhomogeneous);
        let wz = HoloMap::w_shift(HoloPoly::z(1, 0));
        assert_eq!(classify(&wz, &Weight::new_unchecked(vec![rat(1, 4)])), MapClass::Subhomogeneous);
    }

    #[test]
    fn random_generators() {
        let l = Weight::new_unchecked(vec![rat(1, 4), rat(1, 4), rat(1, 6)]);
        for seed in 0..5 {
            let lin = random_element(MapGroup::Linear, &l, seed);
            assert_eq!(lin.jacobian()[0][2], GaussRational::zero());
            assert_eq!(classify(&lin, &l), MapClass::Homogeneous);
            let h = random_element(MapGroup::Homogeneous, &l, seed);
            assert_eq!(classify(&h, &l), MapClass::Homogeneous);
            assert!(h.is_nonsingular());
            assert_eq!(h, random_element(MapGroup::Homogeneous, &l, seed));
            let s = random_superhomogeneous(&l, 4, seed);
            assert!(classify(&s, &l).is_superhomogeneous());
        }
        let hz = random_element(MapGroup::HomogeneousZ, &l, 3);
        assert!(hz.g().is_zero());
    }

    #[test]
    fn singular_maps_rejected() {
        let m = HoloMap::linear(&vec![vec![GaussRational::zero()]], Rational::one());
        assert_eq!(invert_to_order(&m, 3), Err(TransformError::SingularMap));
        let tilt = HoloMap::linear(&vec![vec![GaussRational::one()]], Rational::one());
        let tilt = HoloMap::from_components(tilt.components().0, HoloPoly::w(1).scale(&GaussRational::i()));
        assert!(matches!(apply(&abs_pow(1, 4, 0, 2), &tilt, Direction::Inverse), Err(TransformError::NonRealNormalScale(_))));
    }
}
