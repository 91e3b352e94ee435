use multitype::cli::{parse_expression, print_document, parse_document};
use multitype::models::{apply_model, invert_model_map, model_map_parts, model_map};
use multitype::normalize::{normalize_model, regularize_and_normalize};
use multitype::transforms::{apply, random_element, random_superhomogeneous, MapGroup};
use multitype::weights::validate_weight;
use multitype::{compute_multitype, equivalence_map, verify_model_map, Direction, EngineOptions, GaussRational, Jet, MonomialKey, Rational, Weight};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn abs_sq(j: &Jet) -> Jet {
    j.mul(&j.conjugate())
}

fn z(n: usize, i: usize) -> Jet {
    Jet::z(n, 30, i)
}

fn small_models() -> Vec<(Jet, Weight)> {
    let mut cross = abs_sq(&z(2, 0)).pow(2).add(&abs_sq(&z(2, 1)).pow(3));
    let key = MonomialKey::new(&[2, 0], &[0, 3], 0);
    cross.add_term(key.clone(), GaussRational::from_int(-1));
    cross.add_term(key.conjugate(), GaussRational::from_int(-1));
    vec![
        (abs_sq(&z(2, 0)).add(&abs_sq(&z(2, 1)).pow(2)), Weight::new_unchecked(vec![q(1, 2), q(1, 4)])),
        (cross, Weight::new_unchecked(vec![q(1, 4), q(1, 6)])),
        (abs_sq(&z(1, 0)).pow(3), Weight::new_unchecked(vec![q(1, 6)])),
    ]
}

/// Clause-by-clause restatement of weight validity, by exhaustive search.
fn valid_by_search(l: &[Rational]) -> bool {
    let half = q(1, 2);
    if l.iter().any(|x| x.is_negative() || *x > half) || l.windows(2).any(|w| w[1] > w[0]) {
        return false;
    }
    fn reach(l: &[Rational], t: Rational) -> bool {
        if t.is_zero() {
            return true;
        }
        let Some((last, rest)) = l.split_last() else { return false };
        if last.is_zero() {
            return reach(rest, t);
        }
        let mut t = t;
        while !t.is_negative() {
            if reach(rest, t.clone()) {
                return true;
            }
            t -= last;
        }
        false
    }
    (0..l.len()).all(|k| {
        if l[k].is_zero() {
            return true;
        }
        let mut t = Rational::one() - &l[k];
        while !t.is_negative() {
            if reach(&l[..k], t.clone()) {
                return true;
            }
            t -= &l[k];
        }
        false
    })
}

fn random_real_jet(n: usize, terms: &[(Vec<u16>, Vec<u16>, u16, i64, i64)]) -> Jet {
    let mut f = Jet::zero(n, 40);
    for (a, b, l, re, im) in terms {
        let key = MonomialKey::new(&a[..n], &b[..n], *l);
        let c = GaussRational::from_parts(*re, 3, *im, 2);
        f.add_term(key.conjugate(), c.conj());
        f.add_term(key, c);
    }
    f
}

fn term() -> impl Strategy<Value = (Vec<u16>, Vec<u16>, u16, i64, i64)> {
    (prop::collection::vec(0u16..3, 3), prop::collection::vec(0u16..3, 3), 0u16..2, -4i64..5, -4i64..5)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn verification_is_symmetric_under_inversion(which in 0usize..3, seed in 0u64..10_000, perturb in any::<bool>()) {
        let (p, l) = small_models().swap_remove(which);
        let m = random_element(MapGroup::Homogeneous, &l, seed);
        let image = apply_model(&m, &p, &l).unwrap();
        let found = equivalence_map(&p, &image, &l, 3000).unwrap();
        let m = if perturb {
            let (phi, c, d) = model_map_parts(&found).unwrap();
            model_map(phi, &(c * q(2, 1)), d)
        } else {
            found
        };
        let forward = verify_model_map(&m, &p, &image).is_ok();
        let inv = invert_model_map(&m, &l).unwrap();
        let backward = verify_model_map(&inv, &image, &p).is_ok();
        prop_assert_eq!(forward, backward);
        prop_assert_eq!(forward, !perturb);
    }

    #[test]
    fn normalization_is_idempotent(which in 0usize..3, seed in 0u64..10_000) {
        let (p, l) = small_models().swap_remove(which);
        let image = apply_model(&random_element(MapGroup::Homogeneous, &l, seed), &p, &l).unwrap();
        let once = regularize_and_normalize(&image, &l, seed).unwrap();
        let twice = normalize_model(&once.normalized, &l).unwrap();
        prop_assert_eq!(&twice.normalized, &once.normalized);
        prop_assert_eq!(twice.residuals.len(), once.residuals.len());
    }

    #[test]
    fn multitype_is_invariant(which in 0usize..3, seed in 0u64..10_000) {
        let fixtures = [
            abs_sq(&z(2, 0).add(&z(2, 1))).pow(2).add(&abs_sq(&z(2, 1)).pow(3)),
            abs_sq(&z(2, 0).pow(2).sub(&z(2, 1).pow(3))),
            abs_sq(&z(2, 0)).add(&abs_sq(&z(2, 1)).pow(2)).add(&z(2, 1).pow(2).real_part()),
        ];
        let f = &fixtures[which];
        let base = compute_multitype(f, &EngineOptions::default()).unwrap();
        let d = base.bound;
        let m = random_superhomogeneous(&base.weight, 2, seed);
        let g = apply(&f.with_bound(d), &m, Direction::Inverse).unwrap();
        let r = compute_multitype(&g, &EngineOptions { trunc: Some(d), max_stages: None }).unwrap();
        prop_assert_eq!(r.multitype, base.multitype);
        prop_assert_eq!(r.weight, base.weight);
    }

    #[test]
    fn weight_validation_matches_search(entries in prop::collection::vec((0i64..7, 1i64..13), 1..4)) {
        let l: Vec<Rational> = entries.iter().map(|&(a, b)| q(a, b)).collect();
        prop_assert_eq!(validate_weight(&l).is_ok(), valid_by_search(&l));
    }

    #[test]
    fn print_then_parse_is_identity(n in 1usize..4, terms in prop::collection::vec(term(), 0..6)) {
        let f = random_real_jet(n, &terms);
        let text = f.to_string();
        let back = parse_expression(&text, n).unwrap();
        prop_assert_eq!(&back, &f);
        let doc = parse_document(&print_document(&f)).unwrap();
        prop_assert_eq!(doc.equation, f);
    }
}
