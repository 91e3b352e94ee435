//! Numerical proposals for a stalled equivalence search.
//!
//! A floating-point root of the system is refined far past double precision
//! and projected to exact values through the monomial invariants of the
//! system's diagonal symmetries (phase rotations and real dilations of the
//! unknowns). Invariants are constant along a symmetry orbit, so they are
//! Gaussian rationals whenever the orbit has a rational point. Proposals are
//! hypotheses only; the caller checks them exactly.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::solver::{substitute, UPoly};
use super::toric::{solve_monomial_system, MonomialEquation};
use crate::linalg::integer_kernel;
use crate::poly_core::{GaussRational, Rational};

const STARTS: usize = 6;
const LM_ITERATIONS: usize = 400;
/// Fixed-point precision of the refined root, in bits.
const BITS: u64 = 768;
const REFINE_STEPS: usize = 24;
/// Residual accepted after refinement.
const REFINED: f64 = 1e-200;
/// Relative size below which a coordinate is snapped to zero.
const ZERO: f64 = 1e-7;
/// Relative singular value below which a direction counts as a kernel one.
const KERNEL_GAP: f64 = 1e-9;
/// Half-width of the reconstruction interval, relative.
const RECONSTRUCT_DIGITS: u32 = 110;
/// Largest accepted bit size of a reconstructed numerator or denominator;
/// well below half the precision, so that a hit is not a coincidence.
const MAX_HEIGHT_BITS: u64 = 160;

type GaussInt = (BigInt, BigInt);

fn gmul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// `n / (d · 2^shift)` as `f64`.
fn ratio_f64(n: &BigInt, shift: u64, d: &BigInt) -> f64 {
    if n.is_zero() {
        return 0.0;
    }
    let drop = n.bits().saturating_sub(60);
    let m = (n >> drop).to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(f64::INFINITY);
    let e = drop as i64 - shift as i64;
    let half = (e / 2) as i32;
    m * 2f64.powi(half) * 2f64.powi(e as i32 - half)
}

fn to_c64(x: &GaussRational) -> Complex64 {
    Complex64::new(x.re.to_f64().unwrap_or(f64::NAN), x.im.to_f64().unwrap_or(f64::NAN))
}

struct Term {
    coef: Complex64,
    exact: GaussInt,
    /// `(variable, a, b)` for `z^a z̄^b`.
    factors: Vec<(usize, u32, u32)>,
    degree: u32,
}

struct Equation {
    terms: Vec<Term>,
    /// Common denominator of the exact coefficients.
    denom: BigInt,
    degree: u32,
    /// Row normalization.
    scale: f64,
}

/// The open unknowns of a system, as variables `0..vars.len()`.
struct System {
    eqs: Vec<Equation>,
    /// Unknown index of each variable.
    vars: Vec<usize>,
    real: Vec<bool>,
    frozen: Vec<bool>,
    /// Integer bases of the phase and dilation weights.
    torus: Vec<Vec<i64>>,
    dilation: Vec<Vec<i64>>,
}

impl System {
    fn new(polys: &[UPoly], k: usize, open: &[usize], scale: Option<usize>) -> Option<Self> {
        let vars = open.to_vec();
        let real: Vec<bool> = vars.iter().map(|&j| Some(j) == scale).collect();
        let mut eqs = Vec::new();
        for p in polys {
            let mut denom = BigInt::one();
            for c in p.values() {
                denom = denom.lcm(c.re.denom()).lcm(c.im.denom());
            }
            let dr = Rational::from_integer(denom.clone());
            let mut terms = Vec::new();
            for (e, c) in p {
                let mut factors = Vec::new();
                for (q, &j) in vars.iter().enumerate() {
                    let (a, b) = (e[j] as u32, e[k + j] as u32);
                    let (a, b) = if real[q] { (a + b, 0) } else { (a, b) };
                    if a + b > 0 {
                        factors.push((q, a, b));
                    }
                }
                let degree = factors.iter().map(|f| f.1 + f.2).sum();
                let s = c.scale(&dr);
                terms.push(Term { coef: to_c64(c), exact: (s.re.to_integer(), s.im.to_integer()), factors, degree });
            }
            let scale = terms.iter().map(|t| t.coef.norm()).fold(0.0, f64::max);
            let degree = terms.iter().map(|t| t.degree).max().unwrap_or(0);
            if !(scale > 0.0 && scale.is_finite()) {
                return None;
            }
            eqs.push(Equation { terms, denom, degree, scale });
        }
        let cx: Vec<usize> = (0..vars.len()).filter(|&q| !real[q]).collect();
        let mut trows = Vec::new();
        let mut drows = Vec::new();
        for eq in &eqs {
            let profile = |t: &Term| {
                let mut phase = vec![0i64; cx.len()];
                let mut size = vec![0i64; vars.len()];
                for &(q, a, b) in &t.factors {
                    if let Some(pos) = cx.iter().position(|&x| x == q) {
                        phase[pos] = a as i64 - b as i64;
                    }
                    size[q] = (a + b) as i64;
                }
                (phase, size)
            };
            let (p0, s0) = profile(&eq.terms[0]);
            for t in &eq.terms[1..] {
                let (p, s) = profile(t);
                trows.push(p.iter().zip(&p0).map(|(x, y)| x - y).collect());
                drows.push(s.iter().zip(&s0).map(|(x, y)| x - y).collect());
            }
        }
        let torus_cx = integer_kernel(&trows, cx.len())?;
        let torus = torus_cx
            .into_iter()
            .map(|w| {
                let mut full = vec![0i64; vars.len()];
                for (pos, &q) in cx.iter().enumerate() {
                    full[q] = w[pos];
                }
                full
            })
            .collect();
        let dilation = integer_kernel(&drows, vars.len())?;
        let frozen = (0..vars.len()).map(|q| real[q] && dilation.iter().any(|v| v[q] != 0)).collect();
        Some(Self { eqs, vars, real, frozen, torus, dilation })
    }

    fn columns(&self) -> Vec<(usize, bool)> {
        let mut cols = Vec::new();
        for q in 0..self.vars.len() {
            if self.frozen[q] {
                continue;
            }
            cols.push((q, false));
            if !self.real[q] {
                cols.push((q, true));
            }
        }
        cols
    }

    fn residual(&self, z: &[Complex64]) -> DVector<f64> {
        let mut r = DVector::zeros(2 * self.eqs.len());
        for (ei, eq) in self.eqs.iter().enumerate() {
            let mut v = Complex64::zero();
            for t in &eq.terms {
                let mut m = t.coef;
                for &(q, a, b) in &t.factors {
                    m *= z[q].powu(a) * z[q].conj().powu(b);
                }
                v += m;
            }
            v /= eq.scale;
            r[2 * ei] = v.re;
            r[2 * ei + 1] = v.im;
        }
        r
    }

    fn jacobian(&self, z: &[Complex64]) -> DMatrix<f64> {
        let cols = self.columns();
        let mut pos = vec![(None, None); self.vars.len()];
        for (c, &(q, im)) in cols.iter().enumerate() {
            if im {
                pos[q].1 = Some(c);
            } else {
                pos[q].0 = Some(c);
            }
        }
        let mut jac = DMatrix::zeros(2 * self.eqs.len(), cols.len());
        for (ei, eq) in self.eqs.iter().enumerate() {
            for t in &eq.terms {
                let parts: Vec<Complex64> = t.factors.iter().map(|&(q, a, b)| z[q].powu(a) * z[q].conj().powu(b)).collect();
                for (fi, &(q, a, b)) in t.factors.iter().enumerate() {
                    if self.frozen[q] {
                        continue;
                    }
                    let mut rest = t.coef / eq.scale;
                    for (fj, p) in parts.iter().enumerate() {
                        if fj != fi {
                            rest *= p;
                        }
                    }
                    let zq = z[q];
                    let dz = if a > 0 { zq.powu(a - 1) * zq.conj().powu(b) * a as f64 } else { Complex64::zero() };
                    let dzb = if b > 0 { zq.powu(a) * zq.conj().powu(b - 1) * b as f64 } else { Complex64::zero() };
                    let (dz, dzb) = (rest * dz, rest * dzb);
                    if let Some(c) = pos[q].0 {
                        let d = dz + dzb;
                        jac[(2 * ei, c)] += d.re;
                        jac[(2 * ei + 1, c)] += d.im;
                    }
                    if let Some(c) = pos[q].1 {
                        let d = Complex64::i() * (dz - dzb);
                        jac[(2 * ei, c)] += d.re;
                        jac[(2 * ei + 1, c)] += d.im;
                    }
                }
            }
        }
        jac
    }

    /// Whether the diagonal symmetries span the solution set near `z`:
    /// otherwise the invariants vary along it and cannot be snapped.
    fn symmetries_span_kernel(&self, z: &[Complex64]) -> bool {
        let cols = self.columns();
        let jac = self.jacobian(z);
        let sv = jac.clone().singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        let kernel = cols.len() - sv.iter().filter(|&&s| s > top * KERNEL_GAP).count();
        let mut tangents = Vec::new();
        let generators = self.torus.iter().map(|w| (w, true)).chain(self.dilation.iter().map(|v| (v, false)));
        for (wt, rotation) in generators {
            if !rotation && self.vars.iter().enumerate().any(|(q, _)| self.frozen[q] && wt[q] != 0) {
                continue;
            }
            let t = DVector::from_iterator(
                cols.len(),
                cols.iter().map(|&(q, im)| {
                    let d = if rotation { Complex64::i() * z[q] * wt[q] as f64 } else { z[q] * wt[q] as f64 };
                    if im { d.im } else { d.re }
                }),
            );
            if t.norm() > 0.0 && (&jac * &t).norm() > t.norm() * top * 1e-8 {
                return false;
            }
            tangents.push(t);
        }
        let rank = if tangents.is_empty() {
            0
        } else {
            let m = DMatrix::from_columns(&tangents);
            let sv = m.singular_values();
            let top = sv.iter().cloned().fold(0.0, f64::max);
            sv.iter().filter(|&&s| s > top * 1e-8).count()
        };
        rank == kernel
    }

    fn apply_step(&self, z: &mut [Complex64], delta: &DVector<f64>) {
        for (c, &(q, im)) in self.columns().iter().enumerate() {
            if im {
                z[q].im += delta[c];
            } else {
                z[q].re += delta[c];
            }
        }
    }

    /// `−(JᵀJ + μ)⁻¹ Jᵀ r` through the singular value decomposition.
    fn step(jac: DMatrix<f64>, r: &DVector<f64>, mu: f64) -> Option<DVector<f64>> {
        let svd = jac.svd(true, true);
        let (u, vt) = (svd.u.as_ref()?, svd.v_t.as_ref()?);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let mut delta = DVector::zeros(vt.ncols());
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s <= smax * 1e-12 {
                continue;
            }
            let coef = -s / (s * s + mu) * u.column(i).dot(r);
            delta += vt.row(i).transpose() * coef;
        }
        Some(delta)
    }

    fn levenberg_marquardt(&self, mut z: Vec<Complex64>) -> Option<Vec<Complex64>> {
        let mut r = self.residual(&z);
        let mut mu = 1e-3;
        for _ in 0..LM_ITERATIONS {
            let norm = r.norm();
            if norm < 1e-13 {
                return Some(z);
            }
            let delta = Self::step(self.jacobian(&z), &r, mu)?;
            let mut next = z.clone();
            self.apply_step(&mut next, &delta);
            let rn = self.residual(&next);
            if rn.norm().is_finite() && rn.norm() < norm {
                z = next;
                r = rn;
                mu = (mu / 3.0).max(1e-15);
            } else {
                mu *= 4.0;
                if mu > 1e12 {
                    return None;
                }
            }
        }
        (r.norm() < 1e-13).then_some(z)
    }

    /// Exact residual at the fixed-point root `x / 2^BITS`, normalized.
    fn exact_residual(&self, x: &[GaussInt]) -> DVector<f64> {
        let top = self.eqs.iter().flat_map(|e| e.terms.iter()).flat_map(|t| t.factors.iter()).map(|f| f.1.max(f.2)).max().unwrap_or(0) as usize;
        let powers: Vec<(Vec<GaussInt>, Vec<GaussInt>)> = x
            .iter()
            .map(|v| {
                let vb: GaussInt = (v.0.clone(), -v.1.clone());
                let mut p = vec![(BigInt::one(), BigInt::zero())];
                let mut pb = p.clone();
                for e in 0..top {
                    p.push(gmul(&p[e], v));
                    pb.push(gmul(&pb[e], &vb));
                }
                (p, pb)
            })
            .collect();
        let mut r = DVector::zeros(2 * self.eqs.len());
        for (ei, eq) in self.eqs.iter().enumerate() {
            let mut acc: GaussInt = (BigInt::zero(), BigInt::zero());
            for t in &eq.terms {
                let mut m = t.exact.clone();
                for &(q, a, b) in &t.factors {
                    m = gmul(&m, &powers[q].0[a as usize]);
                    m = gmul(&m, &powers[q].1[b as usize]);
                }
                let shift = BITS * (eq.degree - t.degree) as u64;
                acc.0 += m.0 << shift;
                acc.1 += m.1 << shift;
            }
            let shift = BITS * eq.degree as u64;
            r[2 * ei] = ratio_f64(&acc.0, shift, &eq.denom) / eq.scale;
            r[2 * ei + 1] = ratio_f64(&acc.1, shift, &eq.denom) / eq.scale;
        }
        r
    }

    /// Newton refinement with exact residuals; `None` unless it converges.
    fn refine(&self, z: &[Complex64]) -> Option<Vec<GaussInt>> {
        let unit = 2f64.powi(BITS as i32);
        let fixed = |v: f64| BigInt::from_f64((v * unit).round());
        let mut x: Vec<GaussInt> = z.iter().map(|v| Some((fixed(v.re)?, fixed(v.im)?))).collect::<Option<_>>()?;
        let mut last = f64::INFINITY;
        for _ in 0..REFINE_STEPS {
            let r = self.exact_residual(&x);
            let norm = r.norm();
            if norm < REFINED {
                return Some(x);
            }
            if !(norm < last * 0.5) {
                return None;
            }
            last = norm;
            let zf: Vec<Complex64> = x.iter().map(|v| Complex64::new(ratio_f64(&v.0, BITS, &BigInt::one()), ratio_f64(&v.1, BITS, &BigInt::one()))).collect();
            let delta = Self::step(self.jacobian(&zf), &r, 0.0)?;
            for (c, &(q, im)) in self.columns().iter().enumerate() {
                let d = fixed(delta[c])?;
                if im {
                    x[q].1 += d;
                } else {
                    x[q].0 += d;
                }
            }
        }
        None
    }

    /// Integer exponent vectors `(a, b)` per variable of the invariant
    /// monomials `Π z^a z̄^b`; real variables carry `b = 0`.
    fn invariant_lattice(&self) -> Option<Vec<Vec<(i64, i64)>>> {
        let vn = self.vars.len();
        let mut cols = Vec::new();
        for q in 0..vn {
            cols.push((q, false));
            if !self.real[q] {
                cols.push((q, true));
            }
        }
        let mut rows = Vec::new();
        for w in &self.torus {
            rows.push(cols.iter().map(|&(q, bar)| if bar { -w[q] } else { w[q] }).collect());
        }
        for v in &self.dilation {
            rows.push(cols.iter().map(|&(q, _)| v[q]).collect());
        }
        let basis = integer_kernel(&rows, cols.len())?;
        Some(
            basis
                .into_iter()
                .map(|m| {
                    let mut e = vec![(0i64, 0i64); vn];
                    for (&(q, bar), &x) in cols.iter().zip(&m) {
                        if bar {
                            e[q].1 = x;
                        } else {
                            e[q].0 = x;
                        }
                    }
                    e
                })
                .collect(),
        )
    }

    /// Exact values with the same invariants as the refined root.
    fn snap(&self, x: &[GaussInt]) -> Option<Vec<(usize, GaussRational)>> {
        let unit = Rational::from_integer(BigInt::one() << BITS);
        let vals: Vec<GaussRational> = x
            .iter()
            .map(|v| GaussRational::new(Rational::from_integer(v.0.clone()) / &unit, Rational::from_integer(v.1.clone()) / &unit))
            .collect();
        let mut eqs = Vec::new();
        for m in self.invariant_lattice()? {
            let mut value = GaussRational::one();
            let mut exps = BTreeMap::new();
            for (q, &(a, b)) in m.iter().enumerate() {
                if a == 0 && b == 0 {
                    continue;
                }
                exps.insert(self.vars[q], (a, b));
                for (e, base) in [(a, vals[q].clone()), (b, vals[q].conj())] {
                    let base = if e < 0 { base.inv()? } else { base };
                    value = &value * &base.pow(e.unsigned_abs() as u32);
                }
            }
            if exps.is_empty() {
                continue;
            }
            eqs.push(MonomialEquation { exps, target: reconstruct(&value)? });
        }
        let real = (0..self.vars.len()).find(|&q| self.real[q]).map(|q| self.vars[q]);
        let sol = solve_monomial_system(&eqs, real)?;
        Some(
            self.vars
                .iter()
                .enumerate()
                .map(|(q, &j)| {
                    let v = sol.get(&j).cloned().unwrap_or_else(|| {
                        // unconstrained along the orbit: any representative
                        if self.real[q] && vals[q].re.is_negative() {
                            -GaussRational::one()
                        } else {
                            GaussRational::one()
                        }
                    });
                    (j, v)
                })
                .collect(),
        )
    }
}

/// The simplest rational in `[lo, hi]`.
fn simplest(lo: &Rational, hi: &Rational) -> Rational {
    if hi.is_negative() {
        return -simplest(&-hi.clone(), &-lo.clone());
    }
    if !lo.is_positive() {
        return Rational::zero();
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    let inner = simplest(&(Rational::one() / (hi - &fl)), &(Rational::one() / (lo - &fl)));
    fl + Rational::one() / inner
}

fn reconstruct_part(x: &Rational, radius: &Rational) -> Option<Rational> {
    let r = simplest(&(x - radius), &(x + radius));
    (r.numer().bits() <= MAX_HEIGHT_BITS && r.denom().bits() <= MAX_HEIGHT_BITS).then_some(r)
}

fn reconstruct(v: &GaussRational) -> Option<GaussRational> {
    let tol = Rational::new(BigInt::one(), BigInt::from(10).pow(RECONSTRUCT_DIGITS));
    let size = v.re.abs() + v.im.abs() + Rational::one();
    let radius = tol * size;
    let out = GaussRational::new(reconstruct_part(&v.re, &radius)?, reconstruct_part(&v.im, &radius)?);
    (!out.is_zero()).then_some(out)
}

/// Proposed exact values for the unknowns `open` of `polys`, one of which
/// may be the real unknown `scale`.
pub(super) fn propose(polys: &[UPoly], k: usize, open: &[usize], scale: Option<usize>, seed: u64) -> Option<Vec<(usize, GaussRational)>> {
    let system = System::new(polys, k, open, scale)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..STARTS {
        let start: Vec<Complex64> = (0..open.len())
            .map(|q| {
                if system.real[q] {
                    Complex64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0)
                } else {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }
            })
            .collect();
        if let Some(found) = attempt(&system, polys, k, open, scale, start) {
            return Some(found);
        }
    }
    None
}

fn attempt(system: &System, polys: &[UPoly], k: usize, open: &[usize], scale: Option<usize>, start: Vec<Complex64>) -> Option<Vec<(usize, GaussRational)>> {
    let z = system.levenberg_marquardt(start)?;
    let top = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let zeros: Vec<usize> = (0..open.len()).filter(|&q| !system.real[q] && z[q].norm() < ZERO * top).collect();
    let mut out: Vec<(usize, GaussRational)> = zeros.iter().map(|&q| (open[q], GaussRational::zero())).collect();
    let (reduced, z) = if zeros.is_empty() {
        (None, z)
    } else {
        let mut polys = polys.to_vec();
        for &q in &zeros {
            polys = polys.iter().map(|p| substitute(p, open[q], k, &GaussRational::zero())).filter(|p| !p.is_empty()).collect();
        }
        let keep: Vec<usize> = (0..open.len()).filter(|q| !zeros.contains(q)).collect();
        let open: Vec<usize> = keep.iter().map(|&q| open[q]).collect();
        let sub = System::new(&polys, k, &open, scale)?;
        let z = sub.levenberg_marquardt(keep.iter().map(|&q| z[q]).collect())?;
        (Some(sub), z)
    };
    let system = reduced.as_ref().unwrap_or(system);
    if !system.symmetries_span_kernel(&z) {
        return None;
    }
    let x = system.refine(&z)?;
    out.extend(system.snap(&x)?);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_core::rat;

    #[test]
    fn reconstruction() {
        let x = Rational::new(BigInt::from(-355), BigInt::from(113));
        let eps = Rational::new(BigInt::one(), BigInt::from(10).pow(40));
        assert_eq!(simplest(&(&x - &eps), &(&x + &eps)), x);
        assert_eq!(simplest(&rat(1, 3), &rat(1, 2)), rat(1, 2));
        assert_eq!(simplest(&rat(2, 7), &rat(3, 10)), rat(2, 7));
    }

    #[test]
    fn orbit_point_is_snapped() {
        // |x|² = 2 and c = 3 with x complex: the phase of x is free
        let k = 2;
        let mut p1 = UPoly::new();
        p1.insert(vec![1, 0, 1, 0], GaussRational::one());
        p1.insert(vec![0, 0, 0, 0], GaussRational::from_int(-2));
        let mut p2 = UPoly::new();
        p2.insert(vec![0, 1, 0, 0], GaussRational::one());
        p2.insert(vec![0, 0, 0, 0], GaussRational::from_int(-3));
        let sol = propose(&[p1, p2], k, &[0, 1], Some(1), 7).unwrap();
        let m: BTreeMap<usize, GaussRational> = sol.into_iter().collect();
        assert_eq!(m[&0].norm_sqr(), rat(2, 1));
        assert_eq!(m[&1], GaussRational::from_int(3));
    }
}
