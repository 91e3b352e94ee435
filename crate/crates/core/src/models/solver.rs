//! Exact search for `φ` (Λ-homogeneous, `w`-free) and real `c` with
//! `P̃∘φ = c·P` modulo pluriharmonic terms.
//!
//! The coefficients of `φ` are unknowns `x_j`; expanding `P̃∘φ` symbolically
//! gives one polynomial equation in `x, x̄` per non-pluriharmonic key. The
//! search propagates equations that determine one unknown (linear, or a
//! binomial power equation with finitely many admissible roots). When none
//! does it tries, in order: a numerically proposed exact root, a joint exact
//! solution of the two-term equations, and a split on whether the most
//! frequent open unknown vanishes; it backtracks on contradiction.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg;
use super::numeric;
use super::toric::{solve_monomial_system, MonomialEquation};
use crate::poly_core::{GaussRational, HoloPoly, Jet, MonomialKey, Rational};
use crate::weights::{monomials_with_length, Weight};

const WIDE: u32 = 1 << 20;
/// Numerical proposals per search.
const NUMERIC_CALLS: u64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Role {
    /// Coefficient of `z_j` in `φ_i`, same weight block.
    Linear { i: usize, j: usize },
    /// Coefficient of a nonlinear monomial in `φ_i`.
    Shear { i: usize },
    /// The real factor `c`.
    Scale,
}

#[derive(Clone, Debug)]
struct Unknown {
    role: Role,
    /// Target component and monomial (unused for `Scale`).
    i: usize,
    alpha: Vec<u16>,
}

/// Polynomial in `x_0..x_{K−1}, x̄_0..x̄_{K−1}`.
pub(super) type UPoly = BTreeMap<Vec<u16>, GaussRational>;

fn add_term(p: &mut UPoly, e: Vec<u16>, c: GaussRational) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(e);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().clone() + c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

pub(super) fn substitute(p: &UPoly, j: usize, k: usize, v: &GaussRational) -> UPoly {
    let vb = v.conj();
    let mut out = UPoly::new();
    for (e, c) in p {
        let (a, b) = (e[j], e[k + j]);
        if a == 0 && b == 0 {
            add_term(&mut out, e.clone(), c.clone());
            continue;
        }
        let mut ne = e.clone();
        ne[j] = 0;
        ne[k + j] = 0;
        let f = &v.pow(a as u32) * &vb.pow(b as u32);
        add_term(&mut out, ne, c * &f);
    }
    out
}

/// Unknowns (by index) occurring in `p`.
fn occurring(p: &UPoly, k: usize) -> Vec<usize> {
    let mut seen = vec![false; k];
    for e in p.keys() {
        for j in 0..k {
            if e[j] > 0 || e[k + j] > 0 {
                seen[j] = true;
            }
        }
    }
    (0..k).filter(|&j| seen[j]).collect()
}

#[derive(Clone)]
struct State {
    eqs: Vec<UPoly>,
    values: Vec<Option<GaussRational>>,
    nonzero: Vec<bool>,
}

#[derive(Clone, Debug)]
enum Action {
    Set(usize, GaussRational),
    NonZero(usize),
}

enum Step {
    Contradiction,
    Done,
    /// Alternatives, each a list of actions, tried in order.
    Branch(Vec<Vec<Action>>),
}

pub(crate) struct Solver {
    n: usize,
    unknowns: Vec<Unknown>,
    nodes: usize,
    budget: usize,
    numeric_calls: std::cell::Cell<u64>,
}

/// Units `ζ ∈ Q(i)` with `ζ^p ζ̄^q = 1`.
fn unit_phases(p: u32, q: u32) -> Vec<GaussRational> {
    let i = GaussRational::i();
    [GaussRational::one(), -GaussRational::one(), i.clone(), -i]
        .into_iter()
        .filter(|z| (&z.pow(p) * &z.conj().pow(q)).is_one())
        .collect()
}

impl Solver {
    fn k(&self) -> usize {
        self.unknowns.len()
    }

    fn is_real(&self, j: usize) -> bool {
        self.unknowns[j].role == Role::Scale
    }

    fn scale_index(&self) -> usize {
        self.k() - 1
    }

    /// Applies the actions; `false` on an immediate contradiction.
    fn act(&self, st: &mut State, actions: &[Action]) -> bool {
        let k = self.k();
        for a in actions {
            match a {
                Action::Set(j, v) => {
                    if v.is_zero() && st.nonzero[*j] || self.is_real(*j) && !v.is_real() {
                        return false;
                    }
                    st.eqs = st.eqs.iter().map(|e| substitute(e, *j, k, v)).filter(|e| !e.is_empty()).collect();
                    st.values[*j] = Some(v.clone());
                }
                Action::NonZero(j) => st.nonzero[*j] = true,
            }
        }
        !self.singular_block(st)
    }

    /// Some row of the linear part is already forced to vanish.
    fn singular_block(&self, st: &State) -> bool {
        (0..self.n).any(|i| {
            let mut any = false;
            let mut all_zero = true;
            for (u, v) in self.unknowns.iter().zip(&st.values) {
                if let Role::Linear { i: a, .. } = u.role {
                    if a == i {
                        any = true;
                        if !v.as_ref().is_some_and(|v| v.is_zero()) {
                            all_zero = false;
                        }
                    }
                }
            }
            any && all_zero
        })
    }

    /// The value forced by an equation in the single unknown `j`, or the
    /// finite candidate set of a binomial one. `Err(())` flags a contradiction.
    fn solve_single(&self, eq: &UPoly, j: usize) -> Result<Option<Vec<GaussRational>>, ()> {
        let k = self.k();
        let mut constant = GaussRational::zero();
        let mut lin = GaussRational::zero();
        let mut lin_bar = GaussRational::zero();
        let mut others: Vec<(u32, u32, GaussRational)> = Vec::new();
        for (e, c) in eq {
            match (e[j], e[k + j]) {
                (0, 0) => constant = c.clone(),
                (1, 0) => lin = c.clone(),
                (0, 1) => lin_bar = c.clone(),
                (a, b) => others.push((a as u32, b as u32, c.clone())),
            }
        }
        let real = self.is_real(j);
        if others.is_empty() {
            let v = if lin_bar.is_zero() || real {
                let a = &lin + &lin_bar;
                if a.is_zero() {
                    return Ok(None);
                }
                -(&constant / &a)
            } else if lin.is_zero() {
                (-(&constant / &lin_bar)).conj()
            } else {
                let det = lin.norm_sqr() - lin_bar.norm_sqr();
                if det.is_zero() {
                    return Ok(None);
                }
                let num = &(&lin_bar * &constant.conj()) - &(&lin.conj() * &constant);
                num.scale(&(Rational::one() / det))
            };
            if real && !v.is_real() {
                return Err(());
            }
            return Ok(Some(vec![v]));
        }
        if others.len() == 1 && lin.is_zero() && lin_bar.is_zero() {
            let (p, q, a) = others.pop().expect("one term");
            if constant.is_zero() {
                return Ok(Some(vec![GaussRational::zero()]));
            }
            let y = -(&constant / &a);
            let single = MonomialEquation { exps: [(j, (p as i64, q as i64))].into_iter().collect(), target: y };
            let Some(sol) = solve_monomial_system(&[single], real.then_some(j)) else {
                return Err(());
            };
            let root = sol[&j].clone();
            let mut cands: Vec<GaussRational> = unit_phases(p, q).into_iter().map(|z| &z * &root).collect();
            if real {
                cands.retain(|c| c.is_real());
                if cands.is_empty() {
                    return Err(());
                }
            }
            return Ok(Some(cands));
        }
        Ok(None)
    }

    /// Two-term equations among nonzero-assumed unknowns, as monomial equations.
    fn binomials(&self, st: &State) -> Vec<MonomialEquation> {
        let k = self.k();
        let mut out = Vec::new();
        for eq in &st.eqs {
            if eq.len() != 2 {
                continue;
            }
            let mut it = eq.iter();
            let (e1, c1) = it.next().expect("two terms");
            let (e2, c2) = it.next().expect("two terms");
            let mut exps = BTreeMap::new();
            for j in 0..k {
                let (mut a, mut b) = (e1[j] as i64 - e2[j] as i64, e1[k + j] as i64 - e2[k + j] as i64);
                if self.is_real(j) {
                    a += b;
                    b = 0;
                }
                if a != 0 || b != 0 {
                    exps.insert(j, (a, b));
                }
            }
            if !exps.is_empty() {
                out.push(MonomialEquation { exps, target: -(c2 / c1) });
            }
        }
        out
    }

    fn propagate(&self, st: &mut State) -> Step {
        let k = self.k();
        loop {
            if st.eqs.iter().any(|e| e.len() == 1 && occurring(e, k).iter().all(|&j| st.nonzero[j])) {
                return Step::Contradiction;
            }
            if st.eqs.is_empty() {
                return Step::Done;
            }
            let mut forced = None;
            let mut branch: Option<(usize, Vec<GaussRational>)> = None;
            for eq in &st.eqs {
                let occ = occurring(eq, k);
                if occ.len() == 1 {
                    match self.solve_single(eq, occ[0]) {
                        Err(()) => return Step::Contradiction,
                        Ok(Some(c)) if c.len() == 1 => {
                            forced = Some((occ[0], c.into_iter().next().expect("one")));
                            break;
                        }
                        Ok(Some(c)) => {
                            if branch.as_ref().is_none_or(|b| c.len() < b.1.len()) {
                                branch = Some((occ[0], c));
                            }
                        }
                        Ok(None) => {}
                    }
                }
            }
            if let Some((j, v)) = forced {
                if !self.act(st, &[Action::Set(j, v)]) {
                    return Step::Contradiction;
                }
                continue;
            }
            if let Some((j, c)) = branch {
                return Step::Branch(c.into_iter().map(|v| vec![Action::Set(j, v)]).collect());
            }
            return Step::Branch(self.stalled(st));
        }
    }

    /// Alternatives when no equation determines a single unknown: a
    /// numerically proposed exact root, a joint solution of the two-term
    /// equations, then a zero/nonzero split.
    fn stalled(&self, st: &State) -> Vec<Vec<Action>> {
        let k = self.k();
        let mut alternatives = Vec::new();
        let calls = self.numeric_calls.get();
        if calls < NUMERIC_CALLS {
            self.numeric_calls.set(calls + 1);
            let open: Vec<usize> = (0..k).filter(|&j| st.values[j].is_none() && st.eqs.iter().any(|e| occurring(e, k).contains(&j))).collect();
            let scale = Some(self.scale_index()).filter(|j| open.contains(j));
            if let Some(found) = numeric::propose(&st.eqs, k, &open, scale, calls) {
                alternatives.push(found.into_iter().map(|(j, v)| Action::Set(j, v)).collect());
            }
        }
        let bin = self.binomials(st);
        if !bin.is_empty() {
            if let Some(sol) = solve_monomial_system(&bin, Some(self.scale_index())) {
                alternatives.push(sol.into_iter().map(|(j, v)| Action::Set(j, v)).collect());
            }
        }
        let mut freq = vec![0usize; k];
        for e in &st.eqs {
            for j in occurring(e, k) {
                freq[j] += 1;
            }
        }
        let open = (0..k).filter(|&j| freq[j] > 0 && !st.nonzero[j] && !self.is_real(j)).max_by_key(|&j| (freq[j], std::cmp::Reverse(j)));
        if let Some(j) = open {
            alternatives.push(vec![Action::Set(j, GaussRational::zero())]);
            alternatives.push(vec![Action::NonZero(j)]);
        }
        alternatives
    }

    fn search(&mut self, mut st: State) -> Option<Vec<GaussRational>> {
        if self.nodes >= self.budget {
            return None;
        }
        self.nodes += 1;
        match self.propagate(&mut st) {
            Step::Contradiction => None,
            Step::Done => self.complete(st),
            Step::Branch(alternatives) => {
                for actions in alternatives {
                    let mut next = st.clone();
                    if !self.act(&mut next, &actions) {
                        continue;
                    }
                    if let Some(sol) = self.search(next) {
                        return Some(sol);
                    }
                    if self.nodes >= self.budget {
                        return None;
                    }
                }
                None
            }
        }
    }

    /// Fills free unknowns with identity values; rejects singular solutions.
    fn complete(&self, st: State) -> Option<Vec<GaussRational>> {
        let vals: Vec<GaussRational> = st
            .values
            .iter()
            .zip(&self.unknowns)
            .map(|(v, u)| {
                v.clone().unwrap_or_else(|| match u.role {
                    Role::Scale => GaussRational::one(),
                    Role::Linear { i, j } if i == j => GaussRational::one(),
                    _ => GaussRational::zero(),
                })
            })
            .collect();
        let mut jac = linalg::zeros(self.n, self.n);
        for (u, v) in self.unknowns.iter().zip(&vals) {
            match u.role {
                Role::Linear { i, j } => jac[i][j] = v.clone(),
                Role::Scale if v.is_zero() => return None,
                _ => {}
            }
        }
        if linalg::determinant(&jac).is_zero() {
            return None;
        }
        Some(vals)
    }
}

/// Solution of `P̃∘φ ≡ c·P` modulo pluriharmonic terms.
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub phi: Vec<HoloPoly>,
    pub c: Rational,
    /// Search nodes used.
    pub nodes: usize,
}

/// Searches `P̃∘φ = c·P` (mod pluriharmonic terms) over Λ-homogeneous `φ`.
/// `Err(nodes)` when the budget is exhausted or the search space is empty.
pub fn solve_equivalence(p: &Jet, p_tilde: &Jet, weight: &Weight, budget: usize) -> Result<Equivalence, usize> {
    let n = p.n();
    let blocks = weight.blocks();
    let block_of = |i: usize| blocks.iter().position(|b| b.contains(&i)).expect("index in a block");
    let mut unknowns = Vec::new();
    for i in 0..n {
        for alpha in monomials_with_length(weight, weight.get(i)) {
            let deg: u32 = alpha.iter().map(|&a| a as u32).sum();
            let role = if deg == 1 {
                let j = alpha.iter().position(|&a| a == 1).expect("degree one");
                if block_of(j) != block_of(i) {
                    continue;
                }
                Role::Linear { i, j }
            } else {
                Role::Shear { i }
            };
            unknowns.push(Unknown { role, i, alpha });
        }
    }
    unknowns.push(Unknown { role: Role::Scale, i: 0, alpha: Vec::new() });
    let k = unknowns.len();
    let total = n + k;

    // φ_i as jets over (z, x)
    let term = |alpha: &[u16], x: usize| {
        let mut a = alpha.to_vec();
        a.resize(total, 0);
        a[n + x] += 1;
        MonomialKey::new(&a, &vec![0; total], 0)
    };
    let mut phis = vec![Jet::zero(total, WIDE); n];
    for (x, u) in unknowns.iter().enumerate() {
        if u.role != Role::Scale {
            phis[u.i].add_term(term(&u.alpha, x), GaussRational::one());
        }
    }
    let phibars: Vec<Jet> = phis.iter().map(|j| j.conjugate()).collect();
    let mut pow_cache: BTreeMap<(usize, bool, u16), Jet> = BTreeMap::new();
    let mut power = |i: usize, bar: bool, e: u16| -> Jet {
        pow_cache
            .entry((i, bar, e))
            .or_insert_with(|| if bar { phibars[i].pow(e as u32) } else { phis[i].pow(e as u32) })
            .clone()
    };
    let mut expanded = Jet::zero(total, WIDE);
    for (key, c) in p_tilde.iter() {
        let mut acc = Jet::constant(total, WIDE, c.clone());
        for i in 0..n {
            if key.alpha()[i] > 0 {
                acc = acc.mul(&power(i, false, key.alpha()[i]));
            }
            if key.alpha_hat()[i] > 0 {
                acc = acc.mul(&power(i, true, key.alpha_hat()[i]));
            }
        }
        expanded = expanded.add(&acc);
    }

    let mut eqs: BTreeMap<MonomialKey, UPoly> = BTreeMap::new();
    let keep = |key: &MonomialKey| !key.is_pluriharmonic() && (key.alpha(), key.alpha_hat()) <= (key.alpha_hat(), key.alpha());
    for (key, c) in expanded.iter() {
        let zkey = MonomialKey::new(&key.alpha()[..n], &key.alpha_hat()[..n], 0);
        if !keep(&zkey) {
            continue;
        }
        let mut e = key.alpha()[n..].to_vec();
        e.extend_from_slice(&key.alpha_hat()[n..]);
        add_term(eqs.entry(zkey).or_default(), e, c.clone());
    }
    for (key, c) in p.iter() {
        if !keep(&key) {
            continue;
        }
        let mut e = vec![0u16; 2 * k];
        e[k - 1] = 1;
        add_term(eqs.entry(key).or_default(), e, -c.clone());
    }
    let state = State { eqs: eqs.into_values().filter(|e| !e.is_empty()).collect(), values: vec![None; k], nonzero: vec![false; k] };
    let mut solver = Solver { n, unknowns, nodes: 0, budget, numeric_calls: 0.into() };
    let Some(vals) = solver.search(state) else {
        return Err(solver.nodes);
    };
    let mut phi = vec![HoloPoly::zero(n); n];
    let mut c = Rational::one();
    for (u, v) in solver.unknowns.iter().zip(vals) {
        match u.role {
            Role::Scale => c = v.re.clone(),
            _ => phi[u.i].add_term(&u.alpha, 0, v),
        }
    }
    Ok(Equivalence { phi, c, nodes: solver.nodes })
}
