//! Truncated polynomial jets `F(z, z̄, u)`.

use std::fmt;

use num_traits::Zero;
use smallvec::SmallVec;

use super::gauss::{GaussRational, Rational};
use super::holo::HoloPoly;
use super::sparse::{exps_degree, Exps, SparsePoly};
use super::PolyError;

/// Exponents `(α, α̂, l)` of `z^α z̄^α̂ u^l`, stored as one slot vector
/// `[α₁..αₙ, α̂₁..α̂ₙ, l]`. The derived order is lexicographic on that vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MonomialKey(Exps);

impl MonomialKey {
    pub fn new(alpha: &[u16], alpha_hat: &[u16], l: u16) -> Self {
        assert_eq!(alpha.len(), alpha_hat.len(), "multiindex length mismatch");
        let mut e: Exps = SmallVec::with_capacity(2 * alpha.len() + 1);
        e.extend_from_slice(alpha);
        e.extend_from_slice(alpha_hat);
        e.push(l);
        Self(e)
    }

    pub fn from_exps(e: Exps) -> Self {
        debug_assert!(e.len() % 2 == 1);
        Self(e)
    }

    pub fn exps(&self) -> &Exps {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn alpha(&self) -> &[u16] {
        &self.0[..self.n()]
    }

    pub fn alpha_hat(&self) -> &[u16] {
        let n = self.n();
        &self.0[n..2 * n]
    }

    pub fn l(&self) -> u16 {
        self.0[2 * self.n()]
    }

    /// `|α| + |α̂| + l`.
    pub fn degree(&self) -> u32 {
        exps_degree(&self.0)
    }

    pub fn conjugate(&self) -> Self {
        let n = self.n();
        Self::new(&self.0[n..2 * n], &self.0[..n], self.0[2 * n])
    }

    /// Holomorphic or antiholomorphic in `z` with no `u`.
    pub fn is_pluriharmonic(&self) -> bool {
        self.l() == 0 && (self.alpha().iter().all(|&a| a == 0) || self.alpha_hat().iter().all(|&a| a == 0))
    }

    /// True when no variable beyond the first `k` occurs.
    pub fn supported_in_first(&self, k: usize) -> bool {
        let n = self.n();
        (k..n).all(|j| self.0[j] == 0 && self.0[n + j] == 0)
    }
}

impl fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = monomial_text(self);
        if s.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{s}")
        }
    }
}

fn monomial_text(key: &MonomialKey) -> String {
    let n = key.n();
    let mut parts = Vec::new();
    let mut push = |name: String, e: u16| match e {
        0 => {}
        1 => parts.push(name),
        _ => parts.push(format!("{name}^{e}")),
    };
    for j in 0..n {
        push(format!("z{}", j + 1), key.alpha()[j]);
        push(format!("zb{}", j + 1), key.alpha_hat()[j]);
    }
    push("u".to_string(), key.l());
    parts.join("*")
}

/// The leading term `Γᵏ = (γᵏ, γ̂ᵏ)` of a regular leading polynomial in the
/// variable `z_k` (0-based `k`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeadingTermIndex {
    pub k: usize,
    pub gamma: Vec<u16>,
    pub gamma_hat: Vec<u16>,
}

impl LeadingTermIndex {
    pub fn key(&self) -> MonomialKey {
        MonomialKey::new(&self.gamma, &self.gamma_hat, 0)
    }
}

/// A polynomial in `z, z̄, u` with ordinary-degree truncation bound `bound`.
///
/// Keys above the bound are never stored; any operation that had to drop one
/// sets [`Jet::truncated`]. Realness (Hermitian symmetry) is not enforced by
/// the type: derivatives and intermediate substitutions are complex-valued.
#[derive(Clone, Debug)]
pub struct Jet {
    n: usize,
    bound: u32,
    poly: SparsePoly,
    truncated: bool,
}

/// The defining function of a hypersurface; a [`Jet`] that passes
/// [`Jet::assert_real`].
pub type RealJet = Jet;

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.poly == other.poly
    }
}

impl Eq for Jet {}

/// Keys whose coefficients break `coeff(α, α̂, l) = conj(coeff(α̂, α, l))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealnessViolation {
    pub keys: Vec<MonomialKey>,
}

impl fmt::Display for RealnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<String> = self.keys.iter().map(|k| k.to_string()).collect();
        write!(f, "coefficient symmetry fails at {}", keys.join(", "))
    }
}

impl Jet {
    pub fn zero(n: usize, bound: u32) -> Self {
        Self { n, bound, poly: SparsePoly::zero(2 * n + 1), truncated: false }
    }

    fn wrap(&self, poly: SparsePoly, truncated: bool) -> Self {
        Self { n: self.n, bound: self.bound, poly, truncated: self.truncated || truncated }
    }

    pub(crate) fn from_poly(n: usize, bound: u32, mut poly: SparsePoly) -> Self {
        let truncated = poly.truncate(bound);
        Self { n, bound, poly, truncated }
    }

    pub fn from_terms(n: usize, bound: u32, terms: impl IntoIterator<Item = (MonomialKey, GaussRational)>) -> Self {
        let mut j = Self::zero(n, bound);
        for (k, c) in terms {
            j.add_term(k, c);
        }
        j
    }

    pub fn z(n: usize, bound: u32, i: usize) -> Self {
        Self::from_poly(n, bound, SparsePoly::var(2 * n + 1, i))
    }

    pub fn zbar(n: usize, bound: u32, i: usize) -> Self {
        Self::from_poly(n, bound, SparsePoly::var(2 * n + 1, n + i))
    }

    pub fn u(n: usize, bound: u32) -> Self {
        Self::from_poly(n, bound, SparsePoly::var(2 * n + 1, 2 * n))
    }

    pub fn constant(n: usize, bound: u32, c: GaussRational) -> Self {
        Self::from_poly(n, bound, SparsePoly::constant(2 * n + 1, c))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// Whether any operation producing this jet discarded keys above the bound.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn clear_truncated(mut self) -> Self {
        self.truncated = false;
        self
    }

    pub fn with_truncated(mut self, flag: bool) -> Self {
        self.truncated |= flag;
        self
    }

    /// Same coefficients under a different bound (dropping keys above it).
    pub fn with_bound(&self, bound: u32) -> Self {
        let mut poly = self.poly.clone();
        let dropped = poly.truncate(bound);
        Self { n: self.n, bound, poly, truncated: self.truncated || dropped }
    }

    pub(crate) fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn len(&self) -> usize {
        self.poly.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (MonomialKey, &GaussRational)> {
        self.poly.terms().map(|(e, c)| (MonomialKey(e.clone()), c))
    }

    pub fn keys(&self) -> Vec<MonomialKey> {
        self.iter().map(|(k, _)| k).collect()
    }

    pub fn coeff(&self, key: &MonomialKey) -> GaussRational {
        self.poly.coeff(&key.0)
    }

    pub fn add_term(&mut self, key: MonomialKey, c: GaussRational) {
        assert_eq!(key.n(), self.n, "key dimension mismatch");
        if key.degree() > self.bound {
            if !c.is_zero() {
                self.truncated = true;
            }
            return;
        }
        self.poly.add_term(key.0, c);
    }

    pub fn set_term(&mut self, key: MonomialKey, c: GaussRational) {
        if key.degree() > self.bound {
            self.truncated |= !c.is_zero();
            return;
        }
        self.poly.set_term(key.0, c);
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(self.wrap(self.poly.add(&other.poly), other.truncated))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let bound = self.bound.min(other.bound);
        let (p, dropped) = self.poly.mul_trunc(&other.poly, bound);
        Ok(Self { n: self.n, bound, poly: p, truncated: self.truncated || other.truncated || dropped })
    }

    /// Panics on dimension mismatch; see [`Jet::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("jet dimension mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other).expect("jet dimension mismatch");
        self.wrap(self.poly.sub(&other.poly), other.truncated)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("jet dimension mismatch")
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.poly.neg(), false)
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        self.wrap(self.poly.scale(s), false)
    }

    pub fn scale_real(&self, s: &Rational) -> Self {
        self.wrap(self.poly.scale_real(s), false)
    }

    pub fn pow(&self, e: u32) -> Self {
        let (p, dropped) = self.poly.pow_trunc(e, self.bound);
        self.wrap(p, dropped)
    }

    /// Swaps `α ↔ α̂` and conjugates coefficients.
    pub fn conjugate(&self) -> Self {
        let mut out = SparsePoly::zero(2 * self.n + 1);
        for (e, c) in self.poly.terms() {
            out.add_term(MonomialKey(e.clone()).conjugate().0, c.conj());
        }
        self.wrap(out, false)
    }

    /// `(J + J̄)/2`.
    pub fn real_part(&self) -> Self {
        self.add(&self.conjugate()).scale_real(&super::gauss::rat(1, 2))
    }

    /// `(J − J̄)/(2i)`.
    pub fn imag_part(&self) -> Self {
        self.sub(&self.conjugate()).scale(&GaussRational::from_parts(0, 1, -1, 2))
    }

    pub fn is_real(&self) -> bool {
        self.assert_real().is_ok()
    }

    /// Checks Hermitian symmetry key by key.
    pub fn assert_real(&self) -> Result<(), RealnessViolation> {
        let mut keys = Vec::new();
        for (e, c) in self.poly.terms() {
            let k = MonomialKey(e.clone());
            let ck = k.conjugate();
            if self.poly.coeff(&ck.0) != c.conj() {
                keys.push(k);
            }
        }
        if keys.is_empty() {
            Ok(())
        } else {
            Err(RealnessViolation { keys })
        }
    }

    /// Removes the pluriharmonic part `2·Re h(z)` (keys with `α̂ = 0, l = 0`
    /// and their conjugates) and returns `g = −2i·h` together with the rest.
    ///
    /// In the coordinates `w* = w + g(z)` the graph `v = F` reads
    /// `v* = F − 2·Re h`, up to the change `u* = u + Re g` in the
    /// `u`-dependent terms; the engine re-graphs with the full map.
    pub fn strip_pluriharmonic(&self) -> (HoloPoly, Jet) {
        let n = self.n;
        let mut g = HoloPoly::zero(n);
        let mut rest = SparsePoly::zero(2 * n + 1);
        let minus_two_i = GaussRational::from_parts(0, 1, -2, 1);
        for (e, c) in self.poly.terms() {
            let k = MonomialKey(e.clone());
            if k.is_pluriharmonic() {
                if k.alpha_hat().iter().all(|&a| a == 0) && k.degree() > 0 {
                    g.add_term(k.alpha(), 0, c * &minus_two_i);
                }
                continue;
            }
            rest.add_term(e.clone(), c.clone());
        }
        (g, self.wrap(rest, false))
    }

    pub fn has_pluriharmonic_terms(&self) -> bool {
        self.iter().any(|(k, _)| k.is_pluriharmonic() && k.degree() > 0)
    }

    /// Sets `z_{k+1} = … = z_n = 0` (`k` counts variables kept).
    pub fn restrict_first_k(&self, k: usize) -> Self {
        assert!(k <= self.n, "restriction index out of range");
        let n = self.n;
        self.wrap(self.poly.filter(|e| (k..n).all(|j| e[j] == 0 && e[n + j] == 0)), false)
    }

    /// `∂/∂z_k`, 0-based.
    pub fn partial_z(&self, k: usize) -> Self {
        self.wrap(self.poly.derivative(k), false)
    }

    /// `∂/∂z̄_k`, 0-based.
    pub fn partial_zbar(&self, k: usize) -> Self {
        self.wrap(self.poly.derivative(self.n + k), false)
    }

    /// True when some key involves `z_k` or `z̄_k`.
    pub fn depends_on(&self, k: usize) -> bool {
        let n = self.n;
        self.poly.terms().any(|(e, _)| e[k] > 0 || e[n + k] > 0)
    }

    pub fn filter(&self, keep: impl Fn(&MonomialKey) -> bool) -> Self {
        self.wrap(self.poly.filter(|e| keep(&MonomialKey(e.clone()))), false)
    }

    /// Keys without `u`.
    pub fn u_free(&self) -> Self {
        let n = self.n;
        self.wrap(self.poly.filter(|e| e[2 * n] == 0), false)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.poly.max_degree()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.poly.min_degree()
    }

    /// Renames variables: new `z_i` is old `z_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut map: Vec<usize> = perm.to_vec();
        map.extend(perm.iter().map(|&j| n + j));
        map.push(2 * n);
        self.wrap(self.poly.permute_slots(&map), false)
    }
}

impl fmt::Display for Jet {
    /// Canonical text in ascending key order, e.g. `z1^2*zb1^2 - 2*z1*zb2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.iter() {
            let mono = monomial_text(&k);
            let (neg, mag) = if c.is_real() && c.re < Rational::zero() { (true, -c) } else { (false, c.clone()) };
            let one = mag == GaussRational::one_value();
            let body = match (mono.is_empty(), one) {
                (true, _) => mag.to_string(),
                (false, true) => mono,
                (false, false) => format!("{mag}*{mono}"),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::gauss::rat;

    fn g(re: i64) -> GaussRational {
        GaussRational::from_int(re)
    }

    fn abs_pow(n: usize, bound: u32, i: usize, p: u32) -> Jet {
        Jet::z(n, bound, i).mul(&Jet::zbar(n, bound, i)).pow(p)
    }

    #[test]
    fn conjugate_examples() {
        let j = Jet::from_terms(2, 8, [(MonomialKey::new(&[1, 0], &[0, 1], 0), GaussRational::from_parts(1, 1, 2, 1))]);
        let c = j.conjugate();
        assert_eq!(c.coeff(&MonomialKey::new(&[0, 1], &[1, 0], 0)), GaussRational::from_parts(1, 1, -2, 1));
        let q = Jet::from_terms(1, 8, [(MonomialKey::new(&[2], &[0], 0), GaussRational::from_parts(1, 1, 1, 1))]);
        assert_eq!(
            q.conjugate(),
            Jet::from_terms(1, 8, [(MonomialKey::new(&[0], &[2], 0), GaussRational::from_parts(1, 1, -1, 1))])
        );
        let real = abs_pow(2, 8, 0, 2);
        assert_eq!(real.conjugate(), real);
    }

    #[test]
    fn realness() {
        assert!(abs_pow(1, 8, 0, 2).assert_real().is_ok());
        let bad = Jet::from_terms(1, 8, [(MonomialKey::new(&[1], &[1], 0), GaussRational::i())]);
        let err = bad.assert_real().unwrap_err();
        assert_eq!(err.keys, vec![MonomialKey::new(&[1], &[1], 0)]);
        let re = Jet::from_terms(
            2,
            8,
            [
                (MonomialKey::new(&[2, 0], &[0, 1], 0), GaussRational::from_real(rat(1, 2))),
                (MonomialKey::new(&[0, 1], &[2, 0], 0), GaussRational::from_real(rat(1, 2))),
            ],
        );
        assert!(re.assert_real().is_ok());
    }

    #[test]
    fn strip_re_z_cubed() {
        // v = Re(z³) + |z|⁴
        let half = GaussRational::from_real(rat(1, 2));
        let mut f = abs_pow(1, 8, 0, 2);
        f.add_term(MonomialKey::new(&[3], &[0], 0), half.clone());
        f.add_term(MonomialKey::new(&[0], &[3], 0), half);
        let (gp, rest) = f.strip_pluriharmonic();
        assert_eq!(rest, abs_pow(1, 8, 0, 2));
        // w* = w − i z³
        assert_eq!(gp.coeff(&[3], 0), GaussRational::from_parts(0, 1, -1, 1));
        // Im(−i z³) = −Re z³ cancels the stripped part.
        let im = gp.to_jet(8).imag_part();
        assert_eq!(f.add(&im), rest);
        let (g2, rest2) = rest.strip_pluriharmonic();
        assert!(g2.is_zero());
        assert_eq!(rest2, rest);
    }

    #[test]
    fn strip_im_z_squared() {
        // v = Im(z²) + |z|⁶ ; Im(z²) = (z² − z̄²)/(2i)
        let mut f = abs_pow(1, 12, 0, 3);
        f.add_term(MonomialKey::new(&[2], &[0], 0), GaussRational::from_parts(0, 1, -1, 2));
        f.add_term(MonomialKey::new(&[0], &[2], 0), GaussRational::from_parts(0, 1, 1, 2));
        let (gp, rest) = f.strip_pluriharmonic();
        assert_eq!(rest, abs_pow(1, 12, 0, 3));
        // g = −2i·(−i/2) z² = −z²
        assert_eq!(gp.coeff(&[2], 0), g(-1));
        assert_eq!(f.add(&gp.to_jet(12).imag_part()), rest);
    }

    #[test]
    fn restriction_and_partials() {
        let p = abs_pow(2, 12, 0, 2).add(&abs_pow(2, 12, 1, 3));
        assert_eq!(p.restrict_first_k(1), abs_pow(2, 12, 0, 2));
        assert_eq!(p.restrict_first_k(2), p);
        let mixed = abs_pow(2, 12, 0, 1).mul(&abs_pow(2, 12, 1, 1));
        assert!(mixed.restrict_first_k(1).is_zero());

        let d = abs_pow(1, 8, 0, 2).partial_z(0);
        assert_eq!(d, Jet::from_terms(1, 8, [(MonomialKey::new(&[1], &[2], 0), g(2))]));
        assert!(abs_pow(2, 8, 0, 2).partial_z(1).is_zero());

        // ∂/∂z1 Re(z1² z̄2) = z1 z̄2
        let half = GaussRational::from_real(rat(1, 2));
        let re = Jet::from_terms(
            2,
            8,
            [(MonomialKey::new(&[2, 0], &[0, 1], 0), half.clone()), (MonomialKey::new(&[0, 1], &[2, 0], 0), half)],
        );
        assert_eq!(re.partial_z(0), Jet::from_terms(2, 8, [(MonomialKey::new(&[1, 0], &[0, 1], 0), g(1))]));
    }

    #[test]
    fn arithmetic_and_truncation() {
        let j = abs_pow(1, 4, 0, 1);
        assert_eq!(j.add(&Jet::zero(1, 4)), j);
        let sq = j.mul(&j);
        assert_eq!(sq, Jet::from_terms(1, 4, [(MonomialKey::new(&[2], &[2], 0), g(1))]));
        assert!(!sq.truncated());
        assert!(sq.mul(&j).truncated());
        assert!(matches!(j.try_add(&Jet::zero(2, 4)), Err(PolyError::DimensionMismatch { .. })));
    }

    #[test]
    fn display_canonical() {
        let p = abs_pow(2, 12, 0, 2).add(&abs_pow(2, 12, 1, 3)).scale_real(&rat(-3, 2));
        assert_eq!(p.to_string(), "-3/2*z2^3*zb2^3 - 3/2*z1^2*zb1^2");
    }
}
