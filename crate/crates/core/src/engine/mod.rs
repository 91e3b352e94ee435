//! Stage-by-stage computation of the multitype.
//!
//! Stage one reads off the Bloom-Graham type. Every later stage takes the
//! leading polynomial for the current weight, removes as many trailing
//! variables as a homogeneous change of coordinates allows, fixes the entries
//! of the variables that remain, and lowers the weight of the removed ones to
//! the largest value the remaining terms permit.

pub mod elimination;
pub mod oracle;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly_core::gauss::fmt_rational;
use crate::poly_core::{GaussRational, Jet, MonomialKey, Rational, RealnessViolation};
use crate::transforms::{apply, check_truncation, Direction, HoloMap, TransformError};
use crate::weights::{generating_sequence, homogeneous_part, is_adapted, validate_weight, GeneratingSequence, Weight};

pub use elimination::{elimination_search, EliminationOutcome};
pub use oracle::{oracle_multitype, OracleError, OracleOptions};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MultitypeEntry {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for MultitypeEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultitypeEntry::Finite(r) => write!(f, "{}", fmt_rational(r)),
            MultitypeEntry::Infinite => write!(f, "inf"),
        }
    }
}

/// A key of the set used for the weight update, with its value
/// `W = (1 − fixed part)/(trailing count)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaEntry {
    pub key: MonomialKey,
    pub coeff: GaussRational,
    pub w: Rational,
}

#[derive(Clone, Debug)]
pub struct StageTrace {
    /// 1-based.
    pub stage: usize,
    pub weight: Weight,
    pub leading: Jet,
    /// Number of trailing variables removed from the leading polynomial.
    pub eliminated: usize,
    pub elimination_upper_bound: usize,
    pub elimination_complete: bool,
    /// Coordinate changes performed during this stage.
    pub steps: Vec<(HoloMap, Direction)>,
    /// 0-based indices whose entries were fixed at this stage.
    pub fixed: Vec<usize>,
    /// Keys feeding the next trailing weight (empty at the last stage).
    pub theta: Vec<ThetaEntry>,
    /// Maximum of `W` over `theta`.
    pub next_trailing: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct MultitypeResult {
    pub multitype: Vec<MultitypeEntry>,
    pub weight: Weight,
    pub generating_sequence: GeneratingSequence,
    /// Applied in order to the input, gives the multitype coordinates.
    pub chain: Vec<(HoloMap, Direction)>,
    /// The defining function in multitype coordinates.
    pub adapted: Jet,
    pub model: Jet,
    pub traces: Vec<StageTrace>,
    pub bound: u32,
    /// Whether some key above the bound was discarded (harmless for the
    /// result; the engine errors out when it would matter).
    pub truncated: bool,
    /// Whether every elimination count was proven maximal.
    pub elimination_complete: bool,
}

impl MultitypeResult {
    pub fn finite_multitype(&self) -> Vec<Rational> {
        self.multitype
            .iter()
            .map(|e| match e {
                MultitypeEntry::Finite(r) => r.clone(),
                MultitypeEntry::Infinite => panic!("infinite entry"),
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    /// Ordinary-degree bound; default twice the degree of the input.
    pub trunc: Option<u32>,
    /// Stage cap; default `n + 1`.
    pub max_stages: Option<usize>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self { trunc: None, max_stages: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("defining function is not real: {0}")]
    NotReal(RealnessViolation),
    #[error("defining function has a constant term")]
    ConstantTerm,
    #[error("graph is not tangent to v = 0: linear u term")]
    NotTangent,
    #[error("infinite type within bound {bound}: entries {}", fmt_entries(partial))]
    InfiniteType { partial: Vec<MultitypeEntry>, bound: u32 },
    #[error("truncation bound {bound} is too small; rerun with at least {required}")]
    TruncationInsufficient { bound: u32, required: u32 },
    #[error("weight failed to decrease after stage {stage}; best weight {best}")]
    SearchInconclusive { best: Weight, stage: usize },
    #[error(transparent)]
    Transform(#[from] TransformError),
}

fn fmt_entries(e: &[MultitypeEntry]) -> String {
    e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Removes all pluriharmonic terms by shifts `w ↦ w + g(z)`, re-graphing each
/// time since `u`-dependent terms feed new ones.
pub fn strip_all(f: &Jet, steps: &mut Vec<(HoloMap, Direction)>) -> Result<Jet, TransformError> {
    let mut cur = f.clone();
    for _ in 0..=f.bound() {
        let (g, _) = cur.strip_pluriharmonic();
        if g.is_zero() {
            break;
        }
        let m = HoloMap::w_shift(g);
        cur = apply(&cur, &m, Direction::Forward)?;
        steps.push((m, Direction::Forward));
    }
    Ok(cur)
}

fn check_input(f: &Jet) -> Result<(), EngineError> {
    f.assert_real().map_err(EngineError::NotReal)?;
    for (k, _) in f.iter() {
        match k.degree() {
            0 => return Err(EngineError::ConstantTerm),
            1 if k.l() == 1 => return Err(EngineError::NotTangent),
            _ => {}
        }
    }
    Ok(())
}

/// Default bound: twice the ordinary degree.
pub fn default_bound(f: &Jet) -> u32 {
    2 * f.max_degree().unwrap_or(1).max(1)
}

/// Strips pluriharmonic terms and reads off the lowest ordinary degree `m₁`
/// of a remaining `u`-free key. Returns `(m₁, Λ₁, stripped jet, steps)`.
pub fn bloom_graham_stage(f: &Jet) -> Result<(u32, Weight, Jet, Vec<(HoloMap, Direction)>), EngineError> {
    check_input(f)?;
    let mut steps = Vec::new();
    let cur = strip_all(f, &mut steps)?;
    let m1 = cur.iter().filter(|(k, _)| k.l() == 0).map(|(k, _)| k.degree()).min();
    let Some(m1) = m1 else {
        return Err(EngineError::InfiniteType { partial: vec![MultitypeEntry::Infinite; f.n()], bound: f.bound() });
    };
    let lambda = Rational::new(BigInt::one(), BigInt::from(m1));
    Ok((m1, Weight::constant(f.n(), lambda), cur, steps))
}

/// The set `Θ` for the variables `fixed.len()..n` and the new trailing entry
/// `max W`, or `None` when `Θ` is empty.
pub fn next_weight(f: &Jet, fixed: &[Rational]) -> (Vec<ThetaEntry>, Option<Rational>) {
    let k = fixed.len();
    let one = Rational::one();
    let mut theta = Vec::new();
    for (key, c) in f.iter() {
        if key.l() != 0 || key.is_pluriharmonic() {
            continue;
        }
        let mut fixed_part = Rational::zero();
        for i in 0..k {
            let e = key.alpha()[i] + key.alpha_hat()[i];
            if e > 0 {
                fixed_part += &fixed[i] * Rational::from_integer(BigInt::from(e));
            }
        }
        let trailing: u32 = (k..f.n()).map(|i| (key.alpha()[i] + key.alpha_hat()[i]) as u32).sum();
        if fixed_part >= one || trailing == 0 {
            continue;
        }
        let w = (&one - fixed_part) / Rational::from_integer(BigInt::from(trailing));
        theta.push(ThetaEntry { key, coeff: c.clone(), w });
    }
    let max = theta.iter().map(|t| t.w.clone()).max();
    (theta, max)
}

fn weight_of(fixed: &[Rational], lambda: &Rational, n: usize) -> Weight {
    let mut l = fixed.to_vec();
    l.resize(n, lambda.clone());
    Weight::new_unchecked(l)
}

pub fn compute_multitype(f: &Jet, options: &EngineOptions) -> Result<MultitypeResult, EngineError> {
    let n = f.n();
    let bound = options.trunc.unwrap_or_else(|| default_bound(f));
    let input = f.with_bound(bound).clear_truncated();
    let (_m1, w1, mut cur, mut chain) = bloom_graham_stage(&input)?;
    let max_stages = options.max_stages.unwrap_or(n + 1);

    let mut fixed: Vec<Rational> = Vec::new();
    let mut lambda = w1.get(0).clone();
    let mut traces: Vec<StageTrace> = Vec::new();
    let mut complete = true;

    for stage in 1..=max_stages {
        let k = fixed.len();
        let weight = weight_of(&fixed, &lambda, n);
        let leading = homogeneous_part(&cur, &weight, &Rational::one());
        debug_assert!(is_adapted(&cur, &weight).is_yes(), "stage {stage}: not adapted to {weight}");

        let elim = elimination_search(&leading, &weight, k)?;
        complete &= elim.complete;
        let mut steps: Vec<(HoloMap, Direction)> = Vec::new();
        for psi in &elim.steps {
            cur = apply(&cur, psi, Direction::Inverse)?;
            steps.push((psi.clone(), Direction::Inverse));
        }
        // kept trailing variables first, then the eliminated ones
        let mut perm: Vec<usize> = (0..k).collect();
        perm.extend((k..n).filter(|i| !elim.eliminated.contains(i)));
        let mut gone = elim.eliminated.clone();
        gone.sort_unstable();
        perm.extend(gone);
        if perm.iter().enumerate().any(|(i, &p)| i != p) {
            let m = HoloMap::permutation(&perm);
            cur = cur.permute(&perm);
            steps.push((m, Direction::Forward));
        }
        cur = strip_all(&cur, &mut steps)?;

        let d = elim.d();
        let newly_fixed: Vec<usize> = (k..n - d).collect();
        fixed.resize(n - d, lambda.clone());

        let mut trace = StageTrace {
            stage,
            weight: weight.clone(),
            leading,
            eliminated: d,
            elimination_upper_bound: elim.upper_bound,
            elimination_complete: elim.complete,
            steps: steps.clone(),
            fixed: newly_fixed,
            theta: Vec::new(),
            next_trailing: None,
        };
        chain.extend(steps);

        if fixed.len() == n {
            traces.push(trace);
            return finish(cur, chain, fixed, traces, bound, complete);
        }

        let (theta, max) = next_weight(&cur, &fixed);
        trace.theta = theta;
        trace.next_trailing = max.clone();
        traces.push(trace);
        let Some(next) = max else {
            let mut partial: Vec<MultitypeEntry> = fixed.iter().map(|m| MultitypeEntry::Finite(m.recip())).collect();
            partial.resize(n, MultitypeEntry::Infinite);
            return Err(EngineError::InfiniteType { partial, bound });
        };
        if next >= lambda {
            return Err(EngineError::SearchInconclusive { best: weight_of(&fixed, &lambda, n), stage });
        }
        lambda = next;
    }
    Err(EngineError::SearchInconclusive { best: weight_of(&fixed, &lambda, n), stage: max_stages })
}

fn finish(
    adapted: Jet,
    chain: Vec<(HoloMap, Direction)>,
    fixed: Vec<Rational>,
    traces: Vec<StageTrace>,
    bound: u32,
    complete: bool,
) -> Result<MultitypeResult, EngineError> {
    let weight = validate_weight(&fixed).expect("engine weights satisfy the weight axioms");
    check_truncation(&adapted, &weight).map_err(|e| match e {
        TransformError::TruncationInsufficient { bound, required } => EngineError::TruncationInsufficient { bound, required },
        other => EngineError::Transform(other),
    })?;
    let model = is_adapted(&adapted, &weight).leading().cloned().expect("final coordinates are adapted");
    Ok(MultitypeResult {
        multitype: fixed.iter().map(|m| MultitypeEntry::Finite(m.recip())).collect(),
        generating_sequence: generating_sequence(&weight).expect("finite entries"),
        truncated: adapted.truncated(),
        weight,
        chain,
        adapted,
        model,
        traces,
        bound,
        elimination_complete: complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;
    use crate::transforms::apply_chain;
    use crate::weights::Adaptedness;

    fn abs_sq(j: &Jet) -> Jet {
        j.mul(&j.conjugate())
    }

    fn z(n: usize, i: usize) -> Jet {
        Jet::z(n, 40, i)
    }

    fn mt(f: &Jet) -> Vec<Rational> {
        compute_multitype(f, &EngineOptions::default()).unwrap().finite_multitype()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn diagonal() {
        let f = abs_sq(&z(2, 0)).add(&abs_sq(&z(2, 1)).pow(2));
        assert_eq!(mt(&f), ints(&[2, 4]));
    }

    #[test]
    fn linear_mixing() {
        let f = abs_sq(&z(2, 0).add(&z(2, 1))).pow(2).add(&abs_sq(&z(2, 1)).pow(3));
        let r = compute_multitype(&f, &EngineOptions::default()).unwrap();
        assert_eq!(r.finite_multitype(), ints(&[4, 6]));
        assert_eq!(r.traces[0].eliminated, 1);
        let there = apply_chain(&f.with_bound(r.bound), &r.chain).unwrap();
        assert!(matches!(is_adapted(&there, &r.weight), Adaptedness::Yes(_)));
    }

    #[test]
    fn cross_term_staircase() {
        let s = z(2, 0).pow(2).sub(&z(2, 1).pow(3));
        let f = abs_sq(&s);
        let r = compute_multitype(&f, &EngineOptions::default()).unwrap();
        assert_eq!(r.weight, Weight::new_unchecked(vec![rat(1, 4), rat(1, 6)]));
        assert_eq!(r.traces[0].next_trailing, Some(rat(1, 6)));
        assert!(r.traces[0].theta.iter().all(|t| t.w == rat(1, 6)));
    }

    #[test]
    fn weighted_shear_stage() {
        // |z1 + z2²|⁴ + |z2|¹⁰: (1/4,1/4) → (1/4,1/8) → (1/4,1/10)
        let f = abs_sq(&z(2, 0).add(&z(2, 1).pow(2))).pow(2).add(&abs_sq(&z(2, 1)).pow(5));
        let r = compute_multitype(&f, &EngineOptions::default()).unwrap();
        assert_eq!(r.finite_multitype(), ints(&[4, 10]));
        assert_eq!(r.traces.len(), 3);
        assert_eq!(r.traces[1].weight, Weight::new_unchecked(vec![rat(1, 4), rat(1, 8)]));
        assert!(r.traces[1].fixed.is_empty());
    }

    #[test]
    fn pluriharmonic_terms_are_absorbed() {
        let f = z(1, 0).pow(3).real_part().add(&abs_sq(&z(1, 0)).pow(2));
        let (m1, _, _, steps) = bloom_graham_stage(&f).unwrap();
        assert_eq!(m1, 4);
        assert_eq!(steps.len(), 1);
        let g = z(2, 0).mul(&Jet::u(2, 40)).real_part();
        let f2 = abs_sq(&z(2, 0)).add(&abs_sq(&z(2, 1)).pow(2)).add(&z(2, 1).pow(2).real_part()).add(&g);
        assert_eq!(mt(&f2), ints(&[2, 4]));
    }

    #[test]
    fn infinite_and_invalid_inputs() {
        let f = abs_sq(&z(1, 0)).mul(&Jet::u(1, 40).pow(2));
        assert!(matches!(compute_multitype(&f, &EngineOptions::default()), Err(EngineError::InfiniteType { .. })));
        let g = abs_sq(&z(2, 0)).pow(2);
        match compute_multitype(&g, &EngineOptions::default()) {
            Err(EngineError::InfiniteType { partial, .. }) => {
                assert_eq!(partial, vec![MultitypeEntry::Finite(rat(4, 1)), MultitypeEntry::Infinite]);
            }
            other => panic!("{other:?}"),
        }
        let h = Jet::u(1, 8).add(&abs_sq(&z(1, 0)));
        assert_eq!(compute_multitype(&h, &EngineOptions::default()).unwrap_err(), EngineError::NotTangent);
    }

    #[test]
    fn theta_probe_term() {
        // z1 z̄1 z2 z̄2² + conj has W = (1 − 2/4)/3 = 1/6
        let n = 2;
        let mut f = abs_sq(&z(n, 0)).pow(2).add(&abs_sq(&z(n, 1)).pow(3));
        let probe = MonomialKey::new(&[1, 1], &[1, 2], 0);
        f.add_term(probe.clone(), GaussRational::one());
        f.add_term(probe.conjugate(), GaussRational::one());
        let r = compute_multitype(&f, &EngineOptions::default()).unwrap();
        let t = r.traces[0].theta.iter().find(|t| t.key == probe).unwrap();
        assert_eq!(t.w, rat(1, 6));
        assert_eq!(r.finite_multitype(), ints(&[4, 6]));
    }
}
