//! Brute-force multitype for small inputs: the lex-least weight (with bounded
//! denominators) for which some map from a fixed finite family produces
//! adapted coordinates. Independent of the stage machinery; used to
//! cross-check it.

use num_traits::{One, Zero};

use crate::engine::{default_bound, strip_all};
use crate::linalg;
use crate::poly_core::{rat, GaussRational, HoloPoly, Jet, Rational};
use crate::transforms::{apply, Direction, HoloMap};
use crate::weights::{enumerate_values, is_adapted, validate_weight, Weight};

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub denominator_bound: u32,
    /// Maximum number of coordinate changes tried.
    pub map_budget: usize,
    pub trunc: Option<u32>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { denominator_bound: 12, map_budget: 400, trunc: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("no candidate weight is adapted for any of the {maps} maps tried")]
    BudgetExceeded { maps: usize },
    #[error("oracle supports n <= 3, got {0}")]
    TooLarge(usize),
}

/// Valid weights with positive entries whose denominators are at most `bound`,
/// in ascending lexicographic order.
pub fn candidate_weights(n: usize, bound: u32) -> Vec<Weight> {
    let delta = rat(1, bound as i64 + 1);
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend(n, bound, &delta, &mut prefix, &mut out);
    out.sort();
    out
}

fn extend(n: usize, bound: u32, delta: &Rational, prefix: &mut Vec<Rational>, out: &mut Vec<Weight>) {
    if prefix.len() == n {
        if let Ok(w) = validate_weight(prefix) {
            out.push(w);
        }
        return;
    }
    for v in enumerate_values(prefix, delta) {
        if *v.denom() > (bound as i64).into() {
            continue;
        }
        prefix.push(v);
        extend(n, bound, delta, prefix, out);
        prefix.pop();
    }
}

/// Identity, then nonsingular linear maps with entries in `{−1, 0, 1}`, then
/// shears `z_i ↦ z_i + c·z_j^p` (`c` a unit of `Z[i]`, `2 ≤ p ≤ 4`), capped at `budget`.
pub fn map_family(n: usize, budget: usize) -> Vec<HoloMap> {
    let mut out = vec![HoloMap::identity(n)];
    let vals = [GaussRational::zero(), GaussRational::one(), -GaussRational::one()];
    let cells = n * n;
    let total = 3usize.pow(cells as u32);
    // shears first: they are few and cover the nonlinear cases
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for p in 2..=4u16 {
                for c in [GaussRational::one(), -GaussRational::one(), GaussRational::i(), -GaussRational::i()] {
                    let mut fs = vec![HoloPoly::zero(n); n];
                    let mut alpha = vec![0u16; n];
                    alpha[j] = p;
                    fs[i].add_term(&alpha, 0, c);
                    out.push(HoloMap::from_parts(fs, HoloPoly::zero(n)));
                }
            }
        }
    }
    for code in 0..total {
        let mut m = linalg::zeros(n, n);
        let mut c = code;
        for cell in 0..cells {
            m[cell / n][cell % n] = vals[c % 3].clone();
            c /= 3;
        }
        if m == linalg::identity(n) || linalg::determinant(&m).is_zero() {
            continue;
        }
        out.push(HoloMap::linear(&m, Rational::one()));
    }
    out.truncate(budget);
    out
}

pub fn oracle_multitype(f: &Jet, options: &OracleOptions) -> Result<Weight, OracleError> {
    let n = f.n();
    if n > 3 {
        return Err(OracleError::TooLarge(n));
    }
    let bound = options.trunc.unwrap_or_else(|| default_bound(f));
    let f = f.with_bound(bound);
    let maps = map_family(n, options.map_budget);
    let images: Vec<Jet> = maps
        .iter()
        .filter_map(|m| {
            let j = apply(&f, m, Direction::Forward).ok()?;
            strip_all(&j, &mut Vec::new()).ok()
        })
        .collect();
    for w in candidate_weights(n, options.denominator_bound) {
        if images.iter().any(|j| is_adapted(j, &w).is_yes()) {
            return Ok(w);
        }
    }
    Err(OracleError::BudgetExceeded { maps: maps.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_sq(j: &Jet) -> Jet {
        j.mul(&j.conjugate())
    }

    #[test]
    fn candidates_are_valid_and_sorted() {
        let c = candidate_weights(2, 6);
        assert!(c.windows(2).all(|p| p[0] < p[1]));
        assert!(c.contains(&Weight::new_unchecked(vec![rat(1, 4), rat(1, 6)])));
        assert!(!c.contains(&Weight::new_unchecked(vec![rat(1, 2), rat(2, 5)])));
        assert_eq!(c[0], Weight::new_unchecked(vec![rat(1, 6), rat(1, 6)]));
    }

    #[test]
    fn diagonal_matches_hand_value() {
        let n = 2;
        let f = abs_sq(&Jet::z(n, 20, 0)).add(&abs_sq(&Jet::z(n, 20, 1)).pow(2));
        let w = oracle_multitype(&f, &OracleOptions::default()).unwrap();
        assert_eq!(w, Weight::new_unchecked(vec![rat(1, 2), rat(1, 4)]));
    }

    #[test]
    fn family_contains_needed_shear() {
        let fam = map_family(2, 1000);
        let mut f1 = HoloPoly::zero(2);
        f1.add_term(&[0, 2], 0, -GaussRational::one());
        assert!(fam.contains(&HoloMap::from_parts(vec![f1, HoloPoly::zero(2)], HoloPoly::zero(2))));
    }
}
