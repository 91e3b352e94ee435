//! Factorization in `Q(i)` over the Gaussian primes, for small heights.
//!
//! Prime representatives: `1 + i`; rational primes `q ≡ 3 (mod 4)`; and for
//! `p = a² + b² ≡ 1 (mod 4)` both `a + bi` and `a − bi` with `a > b > 0`,
//! so conjugation permutes representatives without unit factors except at
//! `1 + i` (`conj(1 + i) = −i·(1 + i)`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gauss::{GaussRational, Rational};

/// Trial division bound; cofactors below its square are prime.
const TRIAL: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaussPrime {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussPrime {
    fn new(re: BigInt, im: BigInt) -> Self {
        Self { re, im }
    }

    pub fn is_ramified(&self) -> bool {
        self.re.is_one() && self.im.is_one()
    }

    /// Representative of the conjugate prime.
    pub fn conj(&self) -> Self {
        if self.is_ramified() || self.im.is_zero() {
            self.clone()
        } else {
            Self::new(self.re.clone(), -self.im.clone())
        }
    }

    pub fn value(&self) -> GaussRational {
        GaussRational::new(Rational::from_integer(self.re.clone()), Rational::from_integer(self.im.clone()))
    }

    /// The rational prime below.
    pub fn rational(&self) -> BigInt {
        if self.im.is_zero() {
            self.re.clone()
        } else {
            &self.re * &self.re + &self.im * &self.im
        }
    }
}

/// `i^unit · Π π^e`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GaussFactorization {
    pub unit: u8,
    pub exps: BTreeMap<GaussPrime, i64>,
}

impl GaussFactorization {
    pub fn value(&self) -> GaussRational {
        let mut v = GaussRational::i().pow(self.unit as u32);
        for (p, &e) in &self.exps {
            let base = if e >= 0 { p.value() } else { p.value().inv().expect("prime is nonzero") };
            v = &v * &base.pow(e.unsigned_abs() as u32);
        }
        v
    }

    pub fn exp(&self, p: &GaussPrime) -> i64 {
        self.exps.get(p).copied().unwrap_or(0)
    }
}

/// Rational prime factorization of `|n|`, or `None` past the trial bound.
pub fn factor_integer(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut d = 2u64;
    while d <= TRIAL {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() {
        let bd = BigInt::from(TRIAL);
        if n > &bd * &bd {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

/// `a + bi` with `a > b > 0`, `a² + b² = p` for a prime `p ≡ 1 (mod 4)`.
fn split_prime(p: &BigInt) -> Option<GaussPrime> {
    let limit = p.sqrt().to_u64()?;
    for b in 1..=limit {
        let b = BigInt::from(b);
        let rest = p - &b * &b;
        if rest <= BigInt::zero() {
            break;
        }
        let a = rest.sqrt();
        if &a * &a == rest {
            let (a, b) = if a > b { (a, b) } else { (b, a) };
            return Some(GaussPrime::new(a, b));
        }
    }
    None
}

/// Gaussian primes above the rational prime `p`.
pub fn primes_above(p: &BigInt) -> Option<Vec<GaussPrime>> {
    if *p == BigInt::from(2) {
        return Some(vec![GaussPrime::new(BigInt::one(), BigInt::one())]);
    }
    if (p % 4u32) == BigInt::from(3) {
        return Some(vec![GaussPrime::new(p.clone(), BigInt::zero())]);
    }
    let pi = split_prime(p)?;
    Some(vec![pi.conj(), pi])
}

/// Exact quotient `x / π` in `Z[i]` when it exists.
fn div_exact(x: &(BigInt, BigInt), p: &GaussPrime) -> Option<(BigInt, BigInt)> {
    // x / π = x·π̄ / N(π)
    let n = &p.re * &p.re + &p.im * &p.im;
    let re = &x.0 * &p.re + &x.1 * &p.im;
    let im = &x.1 * &p.re - &x.0 * &p.im;
    if (&re % &n).is_zero() && (&im % &n).is_zero() {
        Some((re / &n, im / &n))
    } else {
        None
    }
}

/// Factorization of a nonzero Gaussian rational, or `None` if some prime
/// is out of reach.
pub fn factor(x: &GaussRational) -> Option<GaussFactorization> {
    if x.is_zero() {
        return None;
    }
    let d = x.re.denom().lcm(x.im.denom());
    let dr = Rational::from_integer(d.clone());
    let num = x.scale(&dr);
    let mut g = (num.re.to_integer(), num.im.to_integer());
    let mut out = GaussFactorization::default();
    let norm = &g.0 * &g.0 + &g.1 * &g.1;
    for (p, _) in factor_integer(&norm)? {
        for pi in primes_above(&p)? {
            let mut e = 0;
            while let Some(q) = div_exact(&g, &pi) {
                g = q;
                e += 1;
            }
            if e > 0 {
                *out.exps.entry(pi).or_insert(0) += e;
            }
        }
    }
    out.unit = unit_index(&g)?;
    for (p, e) in factor_integer(&d)? {
        let e = e as i64;
        for pi in primes_above(&p)? {
            let k = if pi.is_ramified() { 2 * e } else { e };
            *out.exps.entry(pi).or_insert(0) -= k;
        }
        if p == BigInt::from(2) {
            // 2 = −i(1+i)², so 1/2 carries the unit i per power
            out.unit = ((out.unit as i64 + e).rem_euclid(4)) as u8;
        }
    }
    out.exps.retain(|_, e| *e != 0);
    debug_assert_eq!(out.value(), *x);
    Some(out)
}

fn unit_index(g: &(BigInt, BigInt)) -> Option<u8> {
    let one = BigInt::one();
    let zero = BigInt::zero();
    match (&g.0, &g.1) {
        (a, b) if *a == one && *b == zero => Some(0),
        (a, b) if *a == zero && *b == one => Some(1),
        (a, b) if *a == -one.clone() && *b == zero => Some(2),
        (a, b) if *a == zero && *b == -one.clone() => Some(3),
        _ => None,
    }
}

/// Factorization of the conjugate.
pub fn conj_factorization(f: &GaussFactorization) -> GaussFactorization {
    let mut out = GaussFactorization { unit: ((4 - f.unit as i64) % 4) as u8, exps: BTreeMap::new() };
    for (p, &e) in &f.exps {
        if p.is_ramified() {
            // conj(1+i) = i³(1+i)
            out.unit = ((out.unit as i64 + 3 * e).rem_euclid(4)) as u8;
        }
        out.exps.insert(p.conj(), e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_round_trips() {
        for x in [
            GaussRational::from_parts(3, 1, 4, 1),
            GaussRational::from_parts(-1, 1, 4, 5),
            GaussRational::from_parts(1875, 1024, 0, 1),
            GaussRational::from_parts(-128, 3645, 0, 1),
            GaussRational::from_parts(11000, 30603, -20000, 275427),
            GaussRational::from_parts(0, 1, -1, 2),
        ] {
            let f = factor(&x).unwrap();
            assert_eq!(f.value(), x);
            assert_eq!(conj_factorization(&f).value(), x.conj());
        }
    }

    #[test]
    fn primes() {
        assert_eq!(primes_above(&BigInt::from(5)).unwrap().len(), 2);
        assert_eq!(primes_above(&BigInt::from(7)).unwrap(), vec![GaussPrime::new(BigInt::from(7), BigInt::zero())]);
        assert_eq!(factor_integer(&BigInt::from(360)).unwrap(), vec![(BigInt::from(2), 3), (BigInt::from(3), 2), (BigInt::from(5), 1)]);
    }
}
