//! Exact roots in `Q` and `Q(i)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gauss::{GaussRational, Rational};

/// Exact `m`-th root of a nonnegative rational, if rational.
pub fn rational_root(x: &Rational, m: u32) -> Option<Rational> {
    if x.is_negative() || m == 0 {
        return None;
    }
    let n = x.numer().nth_root(m);
    let d = x.denom().nth_root(m);
    if num_traits::pow(n.clone(), m as usize) == *x.numer() && num_traits::pow(d.clone(), m as usize) == *x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Gaussian integers `a + bi` with `a² + b² = norm`, `a > 0, b ≥ 0` first,
/// then the other unit multiples. Only small norms are searched.
fn gaussian_integers_of_norm(norm: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    if norm.is_zero() {
        out.push((BigInt::zero(), BigInt::zero()));
        return out;
    }
    let Some(limit) = norm.sqrt().to_u64() else {
        return out;
    };
    if limit > 10_000_000 {
        return out;
    }
    for a in 0..=limit {
        let a = BigInt::from(a);
        let rest = norm - &a * &a;
        if rest.is_negative() {
            break;
        }
        let b = rest.sqrt();
        if &b * &b == rest {
            out.push((a, b));
        }
    }
    out
}

fn unit_multiples(a: &BigInt, b: &BigInt) -> [GaussRational; 4] {
    let z = GaussRational::new(Rational::from_integer(a.clone()), Rational::from_integer(b.clone()));
    let i = GaussRational::i();
    let z1 = &z * &i;
    let z2 = &z1 * &i;
    let z3 = &z2 * &i;
    [z, z1, z2, z3]
}

/// Some `c ∈ Q(i)` with `c^m = x`.
pub fn gaussian_root(x: &GaussRational, m: u32) -> Option<GaussRational> {
    if m == 0 {
        return None;
    }
    if x.is_zero() {
        return Some(GaussRational::zero());
    }
    if m == 1 {
        return Some(x.clone());
    }
    // x = g/d with g Gaussian integer, d > 0; root = root(g·d^{m−1})/d
    let d = num_integer::Integer::lcm(x.re.denom(), x.im.denom());
    let dr = Rational::from_integer(d.clone());
    let scale = num_traits::pow(dr.clone(), m as usize - 1);
    let g = x.scale(&(&dr * &scale));
    let norm = (&g.re * &g.re + &g.im * &g.im).to_integer();
    let root_norm = norm.nth_root(m);
    if num_traits::pow(root_norm.clone(), m as usize) != norm {
        return None;
    }
    for (a, b) in gaussian_integers_of_norm(&root_norm) {
        for cand in unit_multiples(&a, &b) {
            if cand.pow(m) == g {
                return Some(cand.scale(&(Rational::one() / &dr)));
            }
        }
    }
    None
}

/// Some `c ∈ Q(i)` of rational modulus with `c^p · c̄^q = y`; `c = 1` when
/// `y = 1`. `None` when `|c| = |y|^{1/(p+q)}` is irrational or no phase in
/// `Q(i)` fits.
pub fn solve_power_equation(y: &GaussRational, p: u32, q: u32) -> Option<GaussRational> {
    if y.is_one() {
        return Some(GaussRational::one());
    }
    if y.is_zero() || p + q == 0 {
        return None;
    }
    if p < q {
        return solve_power_equation(&y.conj(), q, p).map(|c| c.conj());
    }
    let modulus = rational_root(&y.norm_sqr(), 2 * (p + q))?;
    if p == q {
        if !y.is_real() || y.re.is_negative() {
            return None;
        }
        return Some(GaussRational::from_real(modulus));
    }
    // c^{p−q} = y / |c|^{2q}
    let rhs = y.scale(&(Rational::one() / num_traits::pow(modulus, 2 * q as usize)));
    let c = gaussian_root(&rhs, p - q)?;
    debug_assert_eq!(&c.pow(p) * &c.conj().pow(q), *y);
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;

    #[test]
    fn rational_roots() {
        assert_eq!(rational_root(&rat(16, 81), 4), Some(rat(2, 3)));
        assert_eq!(rational_root(&rat(2, 1), 2), None);
        assert_eq!(rational_root(&rat(-1, 1), 3), None);
    }

    #[test]
    fn gaussian_roots() {
        let x = GaussRational::from_parts(1, 1, 1, 1).pow(3).scale(&rat(1, 8));
        let r = gaussian_root(&x, 3).unwrap();
        assert_eq!(r.pow(3), x);
        assert_eq!(gaussian_root(&GaussRational::from_int(2), 2), None);
        assert_eq!(gaussian_root(&GaussRational::from_int(-4), 2).unwrap().pow(2), GaussRational::from_int(-4));
    }

    #[test]
    fn power_equations() {
        // 4 |c|⁴ = 1 needs |c| = 1/√2
        assert_eq!(solve_power_equation(&GaussRational::from_parts(1, 4, 0, 1), 2, 2), None);
        assert_eq!(solve_power_equation(&GaussRational::from_parts(1, 16, 0, 1), 2, 2), Some(GaussRational::from_parts(1, 2, 0, 1)));
        // (1+i) c = 1 has |c| = 1/√2
        let y = GaussRational::from_parts(1, 1, 1, 1).inv().unwrap();
        assert_eq!(solve_power_equation(&y, 1, 0), None);
        // c = 3+4i has rational modulus 5
        let y = GaussRational::from_parts(3, 1, 4, 1);
        assert_eq!(solve_power_equation(&y, 1, 0), Some(y.clone()));
        // c³ c̄ = −16 → |c| = 2, c² = −4
        let c = solve_power_equation(&GaussRational::from_int(-16), 3, 1).unwrap();
        assert_eq!(&c.pow(3) * &c.conj(), GaussRational::from_int(-16));
        // |c|⁴ = −1 has no solution at all
        assert_eq!(solve_power_equation(&GaussRational::from_int(-1), 2, 2), None);
    }
}
