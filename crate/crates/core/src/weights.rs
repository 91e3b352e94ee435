//! Rational weights on the tangential variables, weighted degrees and the
//! adaptedness test `v = P + (terms of weighted degree > 1)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly_core::gauss::fmt_rational;
use crate::poly_core::{rat, Jet, MonomialKey, Rational};

/// `Λ = (λ₁, …, λₙ)` with `0 ≤ λⱼ ≤ 1/2`, nonincreasing, and every nonzero
/// `λ_k` reachable as `Σ_{j≤k} a_j λ_j = 1` with `a_k > 0`.
///
/// Construct through [`validate_weight`]; [`Weight::new_unchecked`] exists for
/// intermediate tuples that are only used for degree bookkeeping.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Weight {
    lambdas: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WeightReason {
    #[error("entry {index} is negative")]
    Negative { index: usize },
    #[error("entry {index} exceeds 1/2")]
    AboveHalf { index: usize },
    #[error("entries {index} and {next} are increasing")]
    Increasing { index: usize, next: usize },
    #[error("entry {index}: no nonnegative integers a_1..a_{index} with a_{index} > 0 give sum a_j*lambda_j = 1")]
    NotConstructible { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("multitype weight has a zero entry at position {index}")]
    InfiniteTypeEntry { index: usize },
    #[error("cannot parse weight: {0}")]
    Parse(String),
}

impl Weight {
    pub fn new_unchecked(lambdas: Vec<Rational>) -> Self {
        Self { lambdas }
    }

    pub fn constant(n: usize, lambda: Rational) -> Self {
        Self { lambdas: vec![lambda; n] }
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.lambdas[i]
    }

    /// Smallest entry.
    pub fn min_entry(&self) -> Rational {
        self.lambdas.iter().min().cloned().unwrap_or_else(Rational::one)
    }

    /// Parses `1/4,1/6`.
    pub fn parse(text: &str) -> Result<Self, WeightError> {
        let mut out = Vec::new();
        for part in text.split(',') {
            out.push(parse_rational(part.trim()).ok_or_else(|| WeightError::Parse(part.to_string()))?);
        }
        Ok(Self { lambdas: out })
    }

    /// `|α|_Λ = Σ λ_i α_i`.
    pub fn length(&self, alpha: &[u16]) -> Rational {
        let mut acc = Rational::zero();
        for (l, &a) in self.lambdas.iter().zip(alpha) {
            if a > 0 {
                acc += l * Rational::from_integer(BigInt::from(a));
            }
        }
        acc
    }

    /// `|(α, α̂)|_Λ`.
    pub fn pair_length(&self, alpha: &[u16], alpha_hat: &[u16]) -> Rational {
        self.length(alpha) + self.length(alpha_hat)
    }

    /// `l + Σ (α_i + α̂_i) λ_i`.
    pub fn degree(&self, key: &MonomialKey) -> Rational {
        self.pair_length(key.alpha(), key.alpha_hat()) + Rational::from_integer(BigInt::from(key.l()))
    }

    /// Weighted degree of `z^α w^m` with `w` of weight one.
    pub fn holo_degree(&self, alpha: &[u16], m: u16) -> Rational {
        self.length(alpha) + Rational::from_integer(BigInt::from(m))
    }

    /// Index ranges of maximal constant blocks.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=self.lambdas.len() {
            if i == self.lambdas.len() || self.lambdas[i] != self.lambdas[start] {
                out.push(start..i);
                start = i;
            }
        }
        out
    }

    /// Largest ordinary degree a monomial of weighted degree `≤ 1` can have.
    pub fn max_ordinary_degree_at_one(&self) -> u32 {
        let m = self.min_entry();
        if m.is_zero() {
            return u32::MAX;
        }
        (Rational::one() / m).floor().to_integer().to_u32().unwrap_or(u32::MAX)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambdas.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Rational::new(a, b))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// First differing entry decides.
pub fn lex_compare(a: &Weight, b: &Weight) -> Ordering {
    assert_eq!(a.n(), b.n(), "weights of different length");
    a.lambdas.cmp(&b.lambdas)
}

/// Whether `1` is `Σ_{j≤k} a_j λ_j` with `a_k > 0` (0-based `k`).
fn constructible(lambdas: &[Rational], k: usize) -> bool {
    let lk = &lambdas[k];
    let max_ak = (Rational::one() / lk).floor().to_integer();
    let mut ak = BigInt::one();
    while ak <= max_ak {
        let rest = Rational::one() - lk * Rational::from_integer(ak.clone());
        if representable(&lambdas[..k], &rest) {
            return true;
        }
        ak += 1;
    }
    false
}

/// Whether `target ≥ 0` is a nonnegative integer combination of `lambdas`.
fn representable(lambdas: &[Rational], target: &Rational) -> bool {
    if target.is_zero() {
        return true;
    }
    if target.is_negative() {
        return false;
    }
    let Some((last, rest)) = lambdas.split_last() else {
        return false;
    };
    if last.is_zero() {
        return representable(rest, target);
    }
    let max_a = (target / last).floor().to_integer();
    let mut a = BigInt::zero();
    while a <= max_a {
        let t = target - last * Rational::from_integer(a.clone());
        if representable(rest, &t) {
            return true;
        }
        a += 1;
    }
    false
}

/// Checks every clause of the weight definition; the first failure is reported.
pub fn validate_weight(lambdas: &[Rational]) -> Result<Weight, WeightReason> {
    let half = rat(1, 2);
    for (i, l) in lambdas.iter().enumerate() {
        if l.is_negative() {
            return Err(WeightReason::Negative { index: i + 1 });
        }
        if *l > half {
            return Err(WeightReason::AboveHalf { index: i + 1 });
        }
        if i + 1 < lambdas.len() && lambdas[i + 1] > *l {
            return Err(WeightReason::Increasing { index: i + 1, next: i + 2 });
        }
    }
    for k in 0..lambdas.len() {
        if !lambdas[k].is_zero() && !constructible(lambdas, k) {
            return Err(WeightReason::NotConstructible { index: k + 1 });
        }
    }
    Ok(Weight { lambdas: lambdas.to_vec() })
}

/// Keys of weighted degree exactly `kappa`.
pub fn homogeneous_part(jet: &Jet, weight: &Weight, kappa: &Rational) -> Jet {
    jet.filter(|k| weight.degree(k) == *kappa)
}

/// Distinct weighted degrees occurring in `jet`.
pub fn occurring_degrees(jet: &Jet, weight: &Weight) -> BTreeSet<Rational> {
    jet.iter().map(|(k, _)| weight.degree(&k)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Adaptedness {
    /// Adapted; carries the weighted-degree-one part.
    Yes(Jet),
    No(NotAdapted),
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NotAdapted {
    /// Keys of weighted degree below one.
    pub below_one: Vec<MonomialKey>,
    /// Degree-one keys that are pluriharmonic or involve `u`.
    pub invalid_leading: Vec<MonomialKey>,
    /// The degree-one part vanishes.
    pub empty_leading: bool,
}

impl Adaptedness {
    pub fn is_yes(&self) -> bool {
        matches!(self, Adaptedness::Yes(_))
    }

    pub fn leading(&self) -> Option<&Jet> {
        match self {
            Adaptedness::Yes(p) => Some(p),
            Adaptedness::No(_) => None,
        }
    }
}

/// Whether `v = jet` reads `v = P + (weighted degree > 1)` with `P ≠ 0`
/// pluriharmonic-free in `z, z̄`.
pub fn is_adapted(jet: &Jet, weight: &Weight) -> Adaptedness {
    let one = Rational::one();
    let mut report = NotAdapted::default();
    let mut leading = Jet::zero(jet.n(), jet.bound());
    for (k, c) in jet.iter() {
        match weight.degree(&k).cmp(&one) {
            Ordering::Less => report.below_one.push(k),
            Ordering::Equal => {
                if k.l() > 0 || k.is_pluriharmonic() {
                    report.invalid_leading.push(k);
                } else {
                    leading.add_term(k, c.clone());
                }
            }
            Ordering::Greater => {}
        }
    }
    report.empty_leading = leading.is_zero();
    if report.below_one.is_empty() && report.invalid_leading.is_empty() && !report.empty_leading {
        Adaptedness::Yes(leading)
    } else {
        Adaptedness::No(report)
    }
}

/// All `λ_k ∈ (δ, λ_{k−1}]` (upper end `1/2` for an empty prefix) of the form
/// `(1 − Σ_{j<k} a_j λ_j)/a_k` with `a_k > 0`.
pub fn enumerate_values(prefix: &[Rational], delta: &Rational) -> BTreeSet<Rational> {
    assert!(delta.is_positive(), "enumeration needs a positive lower bound");
    let upper = prefix.last().cloned().unwrap_or_else(|| rat(1, 2)).min(rat(1, 2));
    let mut out = BTreeSet::new();
    let mut remainders = BTreeSet::new();
    collect_remainders(prefix, Rational::one(), &mut remainders);
    for r in remainders {
        if !r.is_positive() {
            continue;
        }
        // r / a > δ  ⇔  a < r/δ
        let bound = (&r / delta).ceil().to_integer();
        let mut a = BigInt::one();
        while a < bound {
            let v = &r / Rational::from_integer(a.clone());
            if v <= upper && v > *delta {
                out.insert(v);
            }
            a += 1;
        }
    }
    out
}

fn collect_remainders(prefix: &[Rational], rest: Rational, out: &mut BTreeSet<Rational>) {
    let Some((first, tail)) = prefix.split_first() else {
        out.insert(rest);
        return;
    };
    if first.is_zero() {
        collect_remainders(tail, rest, out);
        return;
    }
    let mut r = rest;
    while r.is_positive() {
        collect_remainders(tail, r.clone(), out);
        r -= first;
    }
}

/// The staircase `Λ₁ … Λ_t` from the constant weight to `Λ_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSequence {
    pub weights: Vec<Weight>,
    /// Block lengths `ν_j`.
    pub nus: Vec<usize>,
    /// Cumulative indices `k_j = ν₁ + … + ν_j`.
    pub ks: Vec<usize>,
}

impl GeneratingSequence {
    pub fn t(&self) -> usize {
        self.weights.len()
    }
}

pub fn generating_sequence(multitype_weight: &Weight) -> Result<GeneratingSequence, WeightError> {
    if let Some(i) = multitype_weight.lambdas.iter().position(|l| l.is_zero()) {
        return Err(WeightError::InfiniteTypeEntry { index: i + 1 });
    }
    let blocks = multitype_weight.blocks();
    let nus: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
    let ks: Vec<usize> = blocks.iter().map(|b| b.end).collect();
    let mut weights = Vec::with_capacity(blocks.len());
    for (j, b) in blocks.iter().enumerate() {
        let prev_k = if j == 0 { 0 } else { ks[j - 1] };
        let trailing = multitype_weight.lambdas[b.start].clone();
        let lambdas = (0..multitype_weight.n())
            .map(|i| if i < prev_k { multitype_weight.lambdas[i].clone() } else { trailing.clone() })
            .collect();
        weights.push(Weight { lambdas });
    }
    Ok(GeneratingSequence { weights, nus, ks })
}

/// All `α` with `|α|_Λ = target`, using only variables of positive weight.
pub fn monomials_with_length(weight: &Weight, target: &Rational) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; weight.n()];
    fill_monomials(weight, 0, target.clone(), &mut cur, &mut out);
    out
}

fn fill_monomials(weight: &Weight, idx: usize, rest: Rational, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if rest.is_zero() {
        out.push(cur.clone());
        return;
    }
    if idx == weight.n() || rest.is_negative() {
        return;
    }
    let l = &weight.lambdas[idx];
    if l.is_zero() {
        fill_monomials(weight, idx + 1, rest, cur, out);
        return;
    }
    let max = (&rest / l).floor().to_integer().to_u16().unwrap_or(0);
    for a in 0..=max {
        cur[idx] = a;
        let r = &rest - l * Rational::from_integer(BigInt::from(a));
        fill_monomials(weight, idx + 1, r, cur, out);
    }
    cur[idx] = 0;
}

/// Multitype entry `1/μ`.
pub fn reciprocal(mu: &Rational) -> Option<Rational> {
    if mu.is_zero() {
        None
    } else {
        Some(mu.recip())
    }
}

/// Least common multiple of the entries' denominators.
pub fn denominator_lcm(weight: &Weight) -> BigInt {
    weight.lambdas.iter().fold(BigInt::one(), |acc, l| acc.lcm(l.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::GaussRational;

    fn w(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_weight(&w(&[(1, 2), (1, 4)])).is_ok());
        assert_eq!(validate_weight(&w(&[(1, 2), (2, 5)])), Err(WeightReason::NotConstructible { index: 2 }));
        assert_eq!(validate_weight(&w(&[(1, 4), (1, 2)])), Err(WeightReason::Increasing { index: 1, next: 2 }));
        assert_eq!(validate_weight(&w(&[(2, 3)])), Err(WeightReason::AboveHalf { index: 1 }));
        assert!(validate_weight(&w(&[(1, 3), (1, 3), (0, 1)])).is_ok());
        // 3·(2/9) + 1/3 = 1
        assert!(validate_weight(&w(&[(1, 3), (2, 9)])).is_ok());
        assert_eq!(validate_weight(&w(&[(2, 7)])), Err(WeightReason::NotConstructible { index: 1 }));
    }

    #[test]
    fn lex_order() {
        let a = Weight::new_unchecked(w(&[(1, 2), (1, 4)]));
        let b = Weight::new_unchecked(w(&[(1, 2), (1, 6)]));
        let c = Weight::new_unchecked(w(&[(1, 4), (1, 4)]));
        assert_eq!(lex_compare(&a, &b), Ordering::Greater);
        assert_eq!(lex_compare(&a, &a), Ordering::Equal);
        assert_eq!(lex_compare(&c, &b), Ordering::Less);
    }

    #[test]
    fn weighted_degrees() {
        let l1 = Weight::new_unchecked(w(&[(1, 4)]));
        assert_eq!(l1.degree(&MonomialKey::new(&[2], &[2], 0)), rat(1, 1));
        assert_eq!(l1.degree(&MonomialKey::new(&[1], &[1], 1)), rat(3, 2));
        let l2 = Weight::new_unchecked(w(&[(1, 4), (1, 6)]));
        assert_eq!(l2.degree(&MonomialKey::new(&[1, 1], &[1, 2], 0)), rat(1, 1));
    }

    fn abs_pow(n: usize, i: usize, p: u32) -> Jet {
        Jet::z(n, 16, i).mul(&Jet::zbar(n, 16, i)).pow(p)
    }

    #[test]
    fn homogeneous_parts() {
        let l = Weight::new_unchecked(w(&[(1, 4)]));
        let j = abs_pow(1, 0, 2).add(&abs_pow(1, 0, 3));
        assert_eq!(homogeneous_part(&j, &l, &rat(1, 1)), abs_pow(1, 0, 2));
        assert!(homogeneous_part(&j, &l, &rat(7, 8)).is_zero());

        let l2 = Weight::new_unchecked(w(&[(1, 4), (1, 6)]));
        let mut p = abs_pow(2, 0, 2).add(&abs_pow(2, 1, 3));
        p.add_term(MonomialKey::new(&[2, 0], &[0, 3], 0), GaussRational::from_real(rat(1, 2)));
        p.add_term(MonomialKey::new(&[0, 3], &[2, 0], 0), GaussRational::from_real(rat(1, 2)));
        assert_eq!(homogeneous_part(&p, &l2, &rat(1, 1)), p);
    }

    #[test]
    fn adaptedness() {
        let p = abs_pow(2, 0, 2).add(&abs_pow(2, 1, 3));
        let lm = Weight::new_unchecked(w(&[(1, 4), (1, 6)]));
        assert_eq!(is_adapted(&p, &lm), Adaptedness::Yes(p.clone()));
        let other = Weight::new_unchecked(w(&[(1, 2), (1, 6)]));
        assert_eq!(is_adapted(&p, &other), Adaptedness::Yes(abs_pow(2, 1, 3)));
        let q = abs_pow(1, 0, 1).add(&abs_pow(1, 0, 2));
        match is_adapted(&q, &Weight::new_unchecked(w(&[(1, 4)]))) {
            Adaptedness::No(r) => assert_eq!(r.below_one, vec![MonomialKey::new(&[1], &[1], 0)]),
            _ => panic!("expected not adapted"),
        }
    }

    #[test]
    fn value_enumeration() {
        let got = enumerate_values(&w(&[(1, 2)]), &rat(1, 7));
        assert_eq!(got, w(&[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]).into_iter().collect());
        assert_eq!(enumerate_values(&[], &rat(1, 3)), w(&[(1, 2)]).into_iter().collect());
        assert!(enumerate_values(&w(&[(1, 4)]), &rat(1, 4)).is_empty());
    }

    #[test]
    fn monomials_of_given_length() {
        let l = Weight::new_unchecked(w(&[(1, 2), (1, 4)]));
        let mut got = monomials_with_length(&l, &rat(1, 2));
        got.sort();
        assert_eq!(got, vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(monomials_with_length(&l, &rat(1, 1)).len(), 3);
    }

    #[test]
    fn staircase() {
        let g = generating_sequence(&Weight::new_unchecked(w(&[(1, 4), (1, 6)]))).unwrap();
        assert_eq!(g.t(), 2);
        assert_eq!(g.weights[0], Weight::new_unchecked(w(&[(1, 4), (1, 4)])));
        assert_eq!(g.nus, vec![1, 1]);
        let c = generating_sequence(&Weight::new_unchecked(w(&[(1, 3), (1, 3)]))).unwrap();
        assert_eq!(c.t(), 1);
        let g3 = generating_sequence(&Weight::new_unchecked(w(&[(1, 2), (1, 2), (1, 8)]))).unwrap();
        assert_eq!(g3.t(), 2);
        assert_eq!(g3.weights[0], Weight::new_unchecked(w(&[(1, 2), (1, 2), (1, 2)])));
        assert_eq!(g3.ks, vec![2, 3]);
        assert!(generating_sequence(&Weight::new_unchecked(w(&[(1, 2), (0, 1)]))).is_err());
    }
}
