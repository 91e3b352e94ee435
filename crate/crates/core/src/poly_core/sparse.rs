//! Sparse polynomials over `Q(i)` keyed by exponent vectors.
//!
//! Both real jets (variables `z, z̄, u`) and holomorphic polynomials
//! (variables `z, w`) are stored as [`SparsePoly`]; the wrappers in
//! [`super::jet`] and [`super::holo`] give the exponent slots their meaning.
//! Products take an ordinary-degree bound and report whether anything above
//! it was dropped.

use std::collections::BTreeMap;
use std::collections::HashMap;

use num_traits::Zero;
use smallvec::SmallVec;

use super::gauss::{GaussRational, Rational};

pub type Exps = SmallVec<[u16; 8]>;

pub fn exps_degree(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

pub fn exps_add(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Exps, GaussRational>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(SmallVec::from_elem(0, nvars), c);
        p
    }

    pub fn monomial(exps: Exps, c: GaussRational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e: Exps = SmallVec::from_elem(0, nvars);
        e[idx] = 1;
        Self::monomial(e, GaussRational::one_value())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &GaussRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> GaussRational {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn get(&self, exps: &[u16]) -> Option<&GaussRational> {
        self.terms.get(exps)
    }

    /// Adds `c·x^exps`, removing the key if the sum cancels.
    pub fn add_term(&mut self, exps: Exps, c: GaussRational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn set_term(&mut self, exps: Exps, c: GaussRational) {
        if c.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
    }

    pub fn remove_term(&mut self, exps: &[u16]) -> Option<GaussRational> {
        self.terms.remove(exps)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| exps_degree(e)).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| exps_degree(e)).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &GaussRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|c| c * s)
    }

    pub fn scale_real(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|c| c.scale(s))
    }

    pub fn map_coeffs(&self, f: impl Fn(&GaussRational) -> GaussRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.set_term(e.clone(), f(c));
        }
        out
    }

    /// Keeps only the terms whose exponent vector satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Exps) -> bool) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Drops terms of ordinary degree above `max_deg`; returns whether any were dropped.
    pub fn truncate(&mut self, max_deg: u32) -> bool {
        let before = self.terms.len();
        self.terms.retain(|e, _| exps_degree(e) <= max_deg);
        before != self.terms.len()
    }

    /// Product truncated at ordinary degree `max_deg`.
    pub fn mul_trunc(&self, other: &Self, max_deg: u32) -> (Self, bool) {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut dropped = false;
        let rhs: Vec<(u32, &Exps, &GaussRational)> =
            other.terms.iter().map(|(e, c)| (exps_degree(e), e, c)).collect();
        let mut acc: HashMap<Exps, GaussRational> = HashMap::new();
        for (e1, c1) in &self.terms {
            let d1 = exps_degree(e1);
            for (d2, e2, c2) in &rhs {
                if d1 + d2 > max_deg {
                    dropped = true;
                    continue;
                }
                let e = exps_add(e1, e2);
                let c = c1 * *c2;
                match acc.get_mut(&e) {
                    Some(v) => *v += &c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        (Self { nvars: self.nvars, terms }, dropped)
    }

    pub fn pow_trunc(&self, e: u32, max_deg: u32) -> (Self, bool) {
        let mut acc = Self::constant(self.nvars, GaussRational::one_value());
        let mut dropped = false;
        for _ in 0..e {
            let (p, d) = acc.mul_trunc(self, max_deg);
            acc = p;
            dropped |= d;
        }
        (acc, dropped)
    }

    /// Formal partial derivative in variable `idx`.
    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[idx] -= 1;
            out.add_term(ne, c.scale(&Rational::from_integer(e[idx].into())));
        }
        out
    }

    /// Antiderivative in variable `idx` with zero constant of integration.
    pub fn integrate(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[idx] += 1;
            let k = Rational::from_integer((ne[idx] as i64).into());
            out.add_term(ne, c.scale(&(Rational::from_integer(1.into()) / k)));
        }
        out
    }

    /// Re-indexes exponent slots: slot `i` of the result is slot `map[i]` of `self`.
    pub fn permute_slots(&self, map: &[usize]) -> Self {
        let mut out = Self::zero(map.len());
        for (e, c) in &self.terms {
            let ne: Exps = map.iter().map(|&j| e[j]).collect();
            out.add_term(ne, c.clone());
        }
        out
    }
}

impl GaussRational {
    pub(crate) fn one_value() -> Self {
        <Self as num_traits::One>::one()
    }
}
