//! Exact solution of monomial systems `Π x_j^{a_j} x̄_j^{b_j} = t` over
//! `Q(i)*`, with one optional real unknown.
//!
//! Writing `x_j = i^{ε_j} Π π^{e_{jπ}}` turns each equation into integer
//! linear equations: one per Gaussian prime for the exponents, and one
//! modulo 4 for the units.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::linalg::solve_integer;
use crate::poly_core::factor::{factor, GaussFactorization, GaussPrime};
use crate::poly_core::{GaussRational, Rational};

/// `Π x_j^{a_j} x̄_j^{b_j} = t` with the exponent pairs indexed by unknown.
#[derive(Clone, Debug)]
pub struct MonomialEquation {
    pub exps: BTreeMap<usize, (i64, i64)>,
    pub target: GaussRational,
}

fn eval(eq: &MonomialEquation, values: &BTreeMap<usize, GaussRational>) -> GaussRational {
    let mut acc = GaussRational::from_int(1);
    for (j, &(a, b)) in &eq.exps {
        let v = &values[j];
        for (e, base) in [(a, v.clone()), (b, v.conj())] {
            let base = if e < 0 { base.inv().expect("nonzero") } else { base };
            acc = &acc * &base.pow(e.unsigned_abs() as u32);
        }
    }
    acc
}

/// Some solution with all unknowns nonzero; `real` is the index of an
/// unknown required to be real, if any.
pub fn solve_monomial_system(eqs: &[MonomialEquation], real: Option<usize>) -> Option<BTreeMap<usize, GaussRational>> {
    let unknowns: Vec<usize> = eqs.iter().flat_map(|e| e.exps.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
    let targets: Vec<GaussFactorization> = eqs.iter().map(|e| factor(&e.target)).collect::<Option<_>>()?;
    let mut primes: BTreeSet<GaussPrime> = BTreeSet::new();
    for t in &targets {
        for p in t.exps.keys() {
            primes.insert(p.clone());
            primes.insert(p.conj());
        }
    }
    let primes: Vec<GaussPrime> = primes.into_iter().collect();
    let rationals: Vec<BigInt> = primes.iter().map(|p| p.rational()).collect::<BTreeSet<_>>().into_iter().collect();
    let cx: Vec<usize> = unknowns.iter().copied().filter(|&j| Some(j) != real).collect();
    let has_real = real.is_some_and(|r| unknowns.contains(&r));

    // exponent columns: e_{jπ} for complex unknowns, then y_p for the real one
    let col = |j_pos: usize, p_pos: usize| j_pos * primes.len() + p_pos;
    let real_base = cx.len() * primes.len();
    let cols = real_base + if has_real { rationals.len() } else { 0 };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (eq, t) in eqs.iter().zip(&targets) {
        for (pp, p) in primes.iter().enumerate() {
            let conj_pos = primes.iter().position(|q| *q == p.conj()).expect("closed under conjugation");
            let mut row = vec![0i64; cols];
            for (&j, &(ea, eb)) in &eq.exps {
                if Some(j) == real {
                    let rp = rationals.iter().position(|r| *r == p.rational()).expect("listed");
                    let mult = if p.is_ramified() { 2 } else { 1 };
                    row[real_base + rp] += (ea + eb) * mult;
                } else {
                    let jp = cx.iter().position(|&x| x == j).expect("listed");
                    row[col(jp, pp)] += ea;
                    row[col(jp, conj_pos)] += eb;
                }
            }
            a.push(row);
            b.push(t.exp(p));
        }
    }
    let x = if cols == 0 {
        if b.iter().any(|&v| v != 0) {
            return None;
        }
        Vec::new()
    } else {
        solve_integer(&a, &b, cols)?
    };

    // units: ε_j per complex unknown, σ for the sign of the real one, k per equation
    let ram = primes.iter().position(|p| p.is_ramified());
    let two = rationals.iter().position(|r| *r == BigInt::from(2));
    let ucols = cx.len() + usize::from(has_real) + eqs.len();
    let mut ua = Vec::new();
    let mut ub = Vec::new();
    for (ei, (eq, t)) in eqs.iter().zip(&targets).enumerate() {
        let mut row = vec![0i64; ucols];
        let mut rhs = t.unit as i64;
        for (&j, &(ea, eb)) in &eq.exps {
            if Some(j) == real {
                // c = (−1)^σ Π p^{y_p}; 2^y contributes i^{3y}
                row[cx.len()] += 2 * (ea + eb);
                if let Some(tp) = two {
                    rhs -= 3 * x[real_base + tp] * (ea + eb);
                }
            } else {
                let jp = cx.iter().position(|&v| v == j).expect("listed");
                // unit(x̄) = −ε + 3·e_{j,1+i}
                row[jp] += ea - eb;
                if let Some(rp) = ram {
                    rhs -= 3 * eb * x[col(jp, rp)];
                }
            }
        }
        row[cx.len() + usize::from(has_real) + ei] = 4;
        ua.push(row);
        ub.push(rhs);
    }
    let units = solve_integer(&ua, &ub, ucols)?;

    let mut values = BTreeMap::new();
    for (jp, &j) in cx.iter().enumerate() {
        let mut f = GaussFactorization { unit: units[jp].rem_euclid(4) as u8, exps: BTreeMap::new() };
        for (pp, p) in primes.iter().enumerate() {
            let e = x[col(jp, pp)];
            if e != 0 {
                f.exps.insert(p.clone(), e);
            }
        }
        values.insert(j, f.value());
    }
    if let Some(r) = real.filter(|_| has_real) {
        let mut v = Rational::from_integer(if units[cx.len()].rem_euclid(2) == 0 { 1.into() } else { (-1).into() });
        for (rp, p) in rationals.iter().enumerate() {
            let e = x[real_base + rp];
            let base = Rational::from_integer(p.clone());
            let pw = num_traits::pow(base, e.unsigned_abs() as usize);
            v = if e >= 0 { v * pw } else { v / pw };
        }
        values.insert(r, GaussRational::from_real(v));
    }
    if values.values().any(|v| v.is_zero()) || eqs.iter().any(|e| eval(e, &values) != e.target) {
        return None;
    }
    Some(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(exps: &[(usize, (i64, i64))], t: GaussRational) -> MonomialEquation {
        MonomialEquation { exps: exps.iter().copied().collect(), target: t }
    }

    #[test]
    fn modulus_and_phase() {
        // |x|⁴/c = (41/25)², |y|⁶/c = 1, x² ȳ³/c = x₀² ȳ₀³ with c real
        let x0 = GaussRational::from_parts(-1, 1, 4, 5);
        let y0 = GaussRational::from_parts(0, 1, -1, 1);
        let sys = vec![
            eq(&[(0, (2, 2)), (2, (-1, 0))], x0.norm_sqr().pow(2).into()),
            eq(&[(1, (3, 3)), (2, (-1, 0))], GaussRational::from_int(1)),
            eq(&[(0, (2, 0)), (1, (0, 3)), (2, (-1, 0))], &x0.pow(2) * &y0.conj().pow(3)),
        ];
        let sol = solve_monomial_system(&sys, Some(2)).unwrap();
        assert!(sol[&2].is_real());
        for e in &sys {
            assert_eq!(eval(e, &sol), e.target);
        }
    }

    #[test]
    fn unsolvable() {
        // x̄ x = −1 has no solution
        assert!(solve_monomial_system(&[eq(&[(0, (1, 1))], GaussRational::from_int(-1))], None).is_none());
        // c² = 2 with c real has no rational solution
        assert!(solve_monomial_system(&[eq(&[(0, (2, 0))], GaussRational::from_int(2))], Some(0)).is_none());
        // x² = i·2: x = 1 + i
        let s = solve_monomial_system(&[eq(&[(0, (2, 0))], GaussRational::from_parts(0, 1, 2, 1))], None).unwrap();
        assert_eq!(s[&0].pow(2), GaussRational::from_parts(0, 1, 2, 1));
    }
}
