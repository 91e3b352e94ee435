//! Holomorphic polynomials `h(z, w)`.

use std::fmt;

use num_traits::Zero;
use smallvec::SmallVec;

use super::gauss::GaussRational;
use super::jet::Jet;
use super::sparse::{Exps, SparsePoly};

/// Polynomial in `z₁..zₙ, w`, stored with slots `[α₁..αₙ, m]` for `z^α w^m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HoloPoly {
    n: usize,
    poly: SparsePoly,
}

impl HoloPoly {
    pub fn zero(n: usize) -> Self {
        Self { n, poly: SparsePoly::zero(n + 1) }
    }

    pub fn z(n: usize, i: usize) -> Self {
        Self { n, poly: SparsePoly::var(n + 1, i) }
    }

    pub fn w(n: usize) -> Self {
        Self { n, poly: SparsePoly::var(n + 1, n) }
    }

    pub fn monomial(alpha: &[u16], m: u16, c: GaussRational) -> Self {
        let mut h = Self::zero(alpha.len());
        h.add_term(alpha, m, c);
        h
    }

    pub fn n(&self) -> usize {
        self.n
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

    fn slots(alpha: &[u16], m: u16) -> Exps {
        let mut e: Exps = SmallVec::with_capacity(alpha.len() + 1);
        e.extend_from_slice(alpha);
        e.push(m);
        e
    }

    pub fn add_term(&mut self, alpha: &[u16], m: u16, c: GaussRational) {
        assert_eq!(alpha.len(), self.n, "multiindex length mismatch");
        self.poly.add_term(Self::slots(alpha, m), c);
    }

    pub fn coeff(&self, alpha: &[u16], m: u16) -> GaussRational {
        self.poly.coeff(&Self::slots(alpha, m))
    }

    /// Iterates `(α, w-exponent, coefficient)` in ascending slot order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u16], u16, &GaussRational)> {
        let n = self.n;
        self.poly.terms().map(move |(e, c)| (&e[..n], e[n], c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { n: self.n, poly: self.poly.add(&other.poly) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { n: self.n, poly: self.poly.sub(&other.poly) }
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, poly: self.poly.neg() }
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        Self { n: self.n, poly: self.poly.scale(s) }
    }

    pub fn mul_trunc(&self, other: &Self, max_deg: u32) -> (Self, bool) {
        let (p, d) = self.poly.mul_trunc(&other.poly, max_deg);
        (Self { n: self.n, poly: p }, d)
    }

    pub fn filter(&self, keep: impl Fn(&[u16], u16) -> bool) -> Self {
        let n = self.n;
        Self { n, poly: self.poly.filter(|e| keep(&e[..n], e[n])) }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.poly.max_degree()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.poly.min_degree()
    }

    pub fn truncate(&mut self, max_deg: u32) -> bool {
        self.poly.truncate(max_deg)
    }

    pub fn depends_on_w(&self) -> bool {
        self.terms().any(|(_, m, _)| m > 0)
    }

    /// `∂/∂z_i`, 0-based.
    pub fn derivative_z(&self, i: usize) -> Self {
        Self { n: self.n, poly: self.poly.derivative(i) }
    }

    pub fn integrate_z(&self, i: usize) -> Self {
        Self { n: self.n, poly: self.poly.integrate(i) }
    }

    /// Degree-one part in `(z, w)`: returns the coefficients of `z₁..zₙ, w`.
    pub fn linear_coeffs(&self) -> Vec<GaussRational> {
        let mut out = Vec::with_capacity(self.n + 1);
        for i in 0..=self.n {
            let mut e: Exps = SmallVec::from_elem(0, self.n + 1);
            e[i] = 1;
            out.push(self.poly.coeff(&e));
        }
        out
    }

    pub fn constant_term(&self) -> GaussRational {
        self.poly.coeff(&SmallVec::<[u16; 8]>::from_elem(0, self.n + 1))
    }

    /// Renames variables: new `z_i` is old `z_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut map = perm.to_vec();
        map.push(self.n);
        Self { n: self.n, poly: self.poly.permute_slots(&map) }
    }

    /// Embeds a `w`-free polynomial as a jet in `z` (no `z̄`, no `u`).
    pub fn to_jet(&self, bound: u32) -> Jet {
        assert!(!self.depends_on_w(), "to_jet needs a w-free polynomial");
        let n = self.n;
        let mut p = SparsePoly::zero(2 * n + 1);
        for (e, c) in self.poly.terms() {
            let mut ne: Exps = SmallVec::from_elem(0, 2 * n + 1);
            ne[..n].copy_from_slice(&e[..n]);
            p.add_term(ne, c.clone());
        }
        Jet::from_poly(n, bound, p)
    }

    /// `h(Z₁..Zₙ, W)` for jets `Z_i, W`, truncated at `bound`.
    pub fn eval_jets(&self, zs: &[Jet], w: &Jet, bound: u32) -> Jet {
        assert_eq!(zs.len(), self.n);
        let n = zs.first().map(|j| j.n()).unwrap_or(w.n());
        let mut subs: Vec<SparsePoly> = zs.iter().map(|j| j.poly().clone()).collect();
        subs.push(w.poly().clone());
        let (p, dropped) = substitute(&self.poly, &subs, 2 * n + 1, bound);
        let flag = dropped || zs.iter().any(|j| j.truncated()) || w.truncated();
        Jet::from_poly(n, bound, p).with_truncated(flag)
    }

    /// `h(Z(z,w), W(z,w))` for holomorphic substitutions, truncated at `max_deg`.
    pub fn compose(&self, zs: &[HoloPoly], w: &HoloPoly, max_deg: u32) -> (HoloPoly, bool) {
        assert_eq!(zs.len(), self.n);
        let mut subs: Vec<SparsePoly> = zs.iter().map(|h| h.poly.clone()).collect();
        subs.push(w.poly.clone());
        let n = w.n;
        let (p, dropped) = substitute(&self.poly, &subs, n + 1, max_deg);
        (HoloPoly { n, poly: p }, dropped)
    }
}

/// Substitutes `subs[j]` for variable `j` of `poly`; the substitutions live in
/// a space with `target_vars` slots.
pub(crate) fn substitute(poly: &SparsePoly, subs: &[SparsePoly], target_vars: usize, max_deg: u32) -> (SparsePoly, bool) {
    let mut dropped = false;
    let mut powers: Vec<Vec<SparsePoly>> =
        subs.iter().map(|_| vec![SparsePoly::constant(target_vars, GaussRational::one_value())]).collect();
    let mut out = SparsePoly::zero(target_vars);
    for (e, c) in poly.terms() {
        let mut acc = SparsePoly::constant(target_vars, c.clone());
        for (j, &ej) in e.iter().enumerate() {
            if ej == 0 {
                continue;
            }
            while powers[j].len() <= ej as usize {
                let last = powers[j].last().unwrap();
                let (next, d) = last.mul_trunc(&subs[j], max_deg);
                dropped |= d;
                powers[j].push(next);
            }
            let (next, d) = acc.mul_trunc(&powers[j][ej as usize], max_deg);
            dropped |= d;
            acc = next;
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc);
    }
    (out, dropped)
}

impl fmt::Display for HoloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (alpha, m, c) in self.terms() {
            let mut parts = Vec::new();
            for (j, &a) in alpha.iter().enumerate() {
                match a {
                    0 => {}
                    1 => parts.push(format!("z{}", j + 1)),
                    _ => parts.push(format!("z{}^{a}", j + 1)),
                }
            }
            match m {
                0 => {}
                1 => parts.push("w".to_string()),
                _ => parts.push(format!("w^{m}")),
            }
            let mono = parts.join("*");
            let neg = c.is_real() && c.re < num_rational::BigRational::zero();
            let mag = if neg { -c } else { c.clone() };
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag == GaussRational::one_value() {
                mono
            } else {
                format!("{mag}*{mono}")
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

    #[test]
    fn compose_shear() {
        // h = z1 + z2², substitute z1 → z1 − z2²
        let n = 2;
        let z1 = HoloPoly::z(n, 0);
        let z2 = HoloPoly::z(n, 1);
        let (z2sq, _) = z2.mul_trunc(&z2, 10);
        let h = z1.add(&z2sq);
        let (out, dropped) = h.compose(&[z1.sub(&z2sq), z2.clone()], &HoloPoly::w(n), 10);
        assert!(!dropped);
        assert_eq!(out, z1);
    }

    #[test]
    fn eval_into_jets() {
        let n = 1;
        let h = HoloPoly::monomial(&[2], 0, GaussRational::from_int(3));
        let j = h.eval_jets(&[Jet::z(n, 6, 0).add(&Jet::u(n, 6))], &Jet::zero(n, 6), 6);
        assert_eq!(j.len(), 3);
        assert!(!j.truncated());
    }

    #[test]
    fn display() {
        let mut h = HoloPoly::z(2, 0);
        h.add_term(&[0, 2], 0, GaussRational::from_int(-1));
        h.add_term(&[0, 0], 1, GaussRational::i());
        assert_eq!(h.to_string(), "(i)*w - z2^2 + z1");
    }
}
