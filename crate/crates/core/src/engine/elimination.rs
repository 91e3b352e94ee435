//! Making a weighted-homogeneous leading polynomial independent of as many
//! trailing variables as possible by a weighted-homogeneous change of
//! coordinates.
//!
//! A homogeneous map `Ψ` with `P∘Ψ` free of `y_k` pushes `∂/∂y_k` forward to a
//! holomorphic field `X = Σ a_i ∂/∂z_i` with `X(P) = 0`, where `a_i` is
//! homogeneous of weighted degree `λ_i − λ` (`λ` the trailing weight). So the
//! candidate directions form the kernel of an exact linear system; on the
//! trailing block the `a_i` are constants, and the rank of that constant
//! projection bounds the number of removable variables. Conversely a field
//! with trailing constant `a_k = 1` is straightened by its flow
//! `Ψ(y) = Flow_X^{y_k}(y|_{y_k=0})`, which is polynomial because each `a_i`
//! only involves variables of strictly smaller weight than `z_i`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg;
use crate::poly_core::{GaussRational, HoloPoly, Jet, MonomialKey, Rational};
use crate::transforms::{apply, Direction, HoloMap, TransformError};
use crate::weights::{monomials_with_length, Weight};

/// Ordinary-degree bound for exact work on leading polynomials.
const WIDE: u32 = 1 << 20;

#[derive(Clone, Debug)]
pub struct EliminationOutcome {
    /// Maps giving old coordinates in terms of new ones, applied in order.
    pub steps: Vec<HoloMap>,
    /// Trailing variables (0-based, in the coordinates after `steps`) the
    /// leading polynomial no longer depends on, in elimination order.
    pub eliminated: Vec<usize>,
    /// Rank of the trailing projection of the annihilating fields of the input.
    pub upper_bound: usize,
    /// `eliminated.len() == upper_bound`, i.e. the count is proven maximal.
    pub complete: bool,
    pub reduced: Jet,
}

impl EliminationOutcome {
    pub fn d(&self) -> usize {
        self.eliminated.len()
    }
}

/// Basis of homogeneous holomorphic fields annihilating `p` that only involve
/// and act on `active` variables. Each field has one component per variable.
pub fn annihilating_fields(p: &Jet, weight: &Weight, trailing: &Rational, active: &[bool]) -> Vec<Vec<HoloPoly>> {
    let n = p.n();
    let p = p.with_bound(WIDE);
    let mut unknowns: Vec<(usize, Vec<u16>)> = Vec::new();
    for i in 0..n {
        if !active[i] {
            continue;
        }
        let target = weight.get(i) - trailing;
        if target < Rational::zero() {
            continue;
        }
        for beta in monomials_with_length(weight, &target) {
            if beta.iter().enumerate().all(|(j, &b)| b == 0 || active[j]) {
                unknowns.push((i, beta));
            }
        }
    }
    let partials: Vec<Jet> = (0..n).map(|i| p.partial_z(i)).collect();
    let mut rows: BTreeMap<MonomialKey, usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, GaussRational)>> = Vec::new();
    for (i, beta) in &unknowns {
        let mono = Jet::from_terms(n, WIDE, [(MonomialKey::new(beta, &vec![0; n], 0), GaussRational::one())]);
        let col = mono.mul(&partials[*i]);
        let mut entries = Vec::new();
        for (k, c) in col.iter() {
            let next = rows.len();
            let r = *rows.entry(k).or_insert(next);
            entries.push((r, c.clone()));
        }
        columns.push(entries);
    }
    let mut mat = linalg::zeros(rows.len(), unknowns.len());
    for (j, entries) in columns.iter().enumerate() {
        for (r, c) in entries {
            mat[*r][j] = c.clone();
        }
    }
    let basis = if rows.is_empty() {
        (0..unknowns.len())
            .map(|j| (0..unknowns.len()).map(|t| if t == j { GaussRational::one() } else { GaussRational::zero() }).collect())
            .collect()
    } else {
        linalg::kernel(&mat, unknowns.len())
    };
    basis
        .into_iter()
        .map(|v| {
            let mut field = vec![HoloPoly::zero(n); n];
            for ((i, beta), c) in unknowns.iter().zip(v) {
                if !c.is_zero() {
                    field[*i].add_term(beta, 0, c);
                }
            }
            field
        })
        .collect()
}

/// Flow-box map `Ψ` for `field` with `field[k] = 1`.
pub fn straightening_map(field: &[HoloPoly], k: usize, order: u32) -> HoloMap {
    let n = field.len();
    let base: Vec<HoloPoly> = (0..n).map(|i| if i == k { HoloPoly::zero(n) } else { HoloPoly::z(n, i) }).collect();
    let w = HoloPoly::w(n);
    let mut cur = base.clone();
    for _ in 0..=order {
        let next: Vec<HoloPoly> = (0..n)
            .map(|i| {
                let (a, _) = field[i].compose(&cur, &w, order);
                base[i].add(&a.integrate_z(k))
            })
            .collect();
        if next == cur {
            break;
        }
        cur = next;
    }
    HoloMap::from_components(cur, w)
}

fn trailing_projection(fields: &[Vec<HoloPoly>], trailing_vars: &[usize]) -> linalg::Matrix {
    let n = fields.first().map(|f| f.len()).unwrap_or(0);
    fields
        .iter()
        .map(|f| trailing_vars.iter().map(|&i| f[i].coeff(&vec![0; n], 0)).collect())
        .collect()
}

/// Greedy elimination among the variables `first_trailing..n`, which all
/// carry the weight `weight[first_trailing]`.
pub fn elimination_search(p: &Jet, weight: &Weight, first_trailing: usize) -> Result<EliminationOutcome, TransformError> {
    let n = p.n();
    let lambda = weight.get(first_trailing).clone();
    let mut active = vec![true; n];
    let mut cur = p.with_bound(WIDE);
    let mut steps = Vec::new();
    let mut eliminated = Vec::new();
    let mut upper_bound = None;
    loop {
        let trailing_vars: Vec<usize> = (first_trailing..n).filter(|&i| active[i]).collect();
        if trailing_vars.is_empty() {
            upper_bound.get_or_insert(0);
            break;
        }
        let fields = annihilating_fields(&cur, weight, &lambda, &active);
        let proj = trailing_projection(&fields, &trailing_vars);
        let rank = linalg::rank(&proj, trailing_vars.len());
        upper_bound.get_or_insert(rank);
        if rank == 0 {
            break;
        }
        // Pick the field whose trailing projection has a pivot at the last
        // possible variable, so earlier variables stay put when they can.
        let mut choice = None;
        for (t, &var) in trailing_vars.iter().enumerate().rev() {
            if let Some(f) = fields.iter().zip(&proj).find(|(_, row)| !row[t].is_zero()) {
                choice = Some((var, f.0.clone(), f.1[t].clone()));
                break;
            }
        }
        let (k, field, lead) = choice.expect("rank is positive");
        let inv = lead.inv().expect("nonzero pivot");
        let field: Vec<HoloPoly> = field.iter().map(|a| a.scale(&inv)).collect();
        let psi = straightening_map(&field, k, WIDE.min(64));
        cur = apply(&cur, &psi, Direction::Inverse)?;
        debug_assert!(!cur.depends_on(k));
        steps.push(psi);
        active[k] = false;
        eliminated.push(k);
    }
    let upper_bound = upper_bound.unwrap_or(0);
    Ok(EliminationOutcome {
        complete: eliminated.len() == upper_bound,
        steps,
        eliminated,
        upper_bound,
        reduced: cur.with_bound(p.bound()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;

    fn abs_sq(j: &Jet) -> Jet {
        j.mul(&j.conjugate())
    }

    #[test]
    fn linear_mixing_is_removed() {
        let n = 2;
        let s = Jet::z(n, 16, 0).add(&Jet::z(n, 16, 1));
        let p = abs_sq(&s).pow(2);
        let l = Weight::constant(2, rat(1, 4));
        let out = elimination_search(&p, &l, 0).unwrap();
        assert_eq!(out.d(), 1);
        assert!(out.complete);
        assert!(out.steps.iter().all(|m| m.max_degree() == 1));
        assert_eq!(out.eliminated, vec![1]);
        assert_eq!(out.reduced, abs_sq(&Jet::z(n, 16, 0)).pow(2));
    }

    #[test]
    fn diagonal_quartics_have_no_kernel() {
        let n = 2;
        let p = abs_sq(&Jet::z(n, 16, 0)).pow(2).add(&abs_sq(&Jet::z(n, 16, 1)).pow(2));
        let out = elimination_search(&p, &Weight::constant(2, rat(1, 4)), 0).unwrap();
        assert_eq!(out.d(), 0);
        assert!(out.complete);
        assert!(out.steps.is_empty());
    }

    #[test]
    fn absent_variables_count() {
        let n = 3;
        let p = abs_sq(&Jet::z(n, 16, 0)).pow(2);
        let out = elimination_search(&p, &Weight::constant(3, rat(1, 4)), 0).unwrap();
        assert_eq!(out.d(), 2);
        assert_eq!(out.reduced, p);
    }

    #[test]
    fn weighted_shear_is_found() {
        // |z1 + z2²|⁴ with Λ = (1/4, 1/8): the field −2 z2 ∂₁ + ∂₂ kills it.
        let n = 2;
        let s = Jet::z(n, 16, 0).add(&Jet::z(n, 16, 1).pow(2));
        let p = abs_sq(&s).pow(2);
        let l = Weight::new_unchecked(vec![rat(1, 4), rat(1, 8)]);
        let out = elimination_search(&p, &l, 1).unwrap();
        assert_eq!(out.eliminated, vec![1]);
        assert_eq!(out.reduced, abs_sq(&Jet::z(n, 16, 0)).pow(2));
        let mut expect = HoloPoly::zero(n);
        expect.add_term(&[0, 2], 0, -GaussRational::one());
        assert_eq!(out.steps[0].fs()[0], expect);
    }

    #[test]
    fn flow_of_constant_field_is_translation_in_y() {
        let n = 2;
        let field = vec![HoloPoly::zero(n).add(&HoloPoly::monomial(&[0, 0], 0, GaussRational::from_int(3))), HoloPoly::monomial(&[0, 0], 0, GaussRational::one())];
        let m = straightening_map(&field, 1, 8);
        let (zs, _) = m.components();
        let mut z1 = HoloPoly::z(n, 0);
        z1.add_term(&[0, 1], 0, GaussRational::from_int(3));
        assert_eq!(zs[0], z1);
        assert_eq!(zs[1], HoloPoly::z(n, 1));
    }
}
