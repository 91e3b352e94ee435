//! Dense exact linear algebra over `Q(i)`.

use num_traits::{One, Zero};

use crate::poly_core::GaussRational;

pub type Matrix = Vec<Vec<GaussRational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![GaussRational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = GaussRational::one();
    }
    m
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(mat: &mut Matrix, cols: usize) -> Vec<usize> {
    let rows = mat.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].inv().unwrap();
        for x in mat[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mat: &Matrix, cols: usize) -> usize {
    let mut m = mat.clone();
    rref(&mut m, cols).len()
}

/// Basis of `{x : A x = 0}`.
pub fn kernel(mat: &Matrix, cols: usize) -> Vec<Vec<GaussRational>> {
    let mut m = mat.clone();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GaussRational::zero(); cols];
            v[f] = GaussRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[r][f];
            }
            v
        })
        .collect()
}

pub fn inverse(mat: &Matrix) -> Option<Matrix> {
    let n = mat.len();
    let mut aug: Matrix = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { GaussRational::one() } else { GaussRational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = GaussRational::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn determinant(mat: &Matrix) -> GaussRational {
    let n = mat.len();
    let mut m = mat.clone();
    let mut det = GaussRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return GaussRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().unwrap();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let pr = m[c].clone();
            for (x, y) in m[i].iter_mut().zip(&pr) {
                *x -= &(&f * y);
            }
        }
    }
    det
}

struct Echelon {
    h: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    pivots: Vec<(usize, usize)>,
    /// Number of pivot columns; columns `rank..` of `u` span the kernel.
    rank: usize,
}

/// Unimodular column reduction `a·u = h` with `h` in column echelon form.
fn column_echelon(a: &[Vec<i64>], cols: usize) -> Option<Echelon> {
    let rows = a.len();
    let mut h: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivots = Vec::new();
    let mut p = 0;
    for r in 0..rows {
        if p == cols {
            break;
        }
        for j in p + 1..cols {
            if h[r][j] == 0 {
                continue;
            }
            let (x, y) = (h[r][p], h[r][j]);
            let (g, s, t) = ext_gcd(x, y);
            let (xg, yg) = (x / g, y / g);
            for m in h.iter_mut().chain(u.iter_mut()) {
                let (cp, cj) = (m[p], m[j]);
                m[p] = s.checked_mul(cp)?.checked_add(t.checked_mul(cj)?)?;
                m[j] = xg.checked_mul(cj)?.checked_sub(yg.checked_mul(cp)?)?;
            }
        }
        if h[r][p] != 0 {
            pivots.push((r, p));
            p += 1;
        }
    }
    Some(Echelon { h, u, pivots, rank: p })
}

/// Pairwise size reduction of a lattice basis.
fn reduce_basis(basis: &mut [Vec<i128>]) {
    for _ in 0..64 {
        let mut changed = false;
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                if a == b {
                    continue;
                }
                let bb: i128 = basis[b].iter().map(|v| v * v).sum();
                if bb == 0 {
                    continue;
                }
                let ab: i128 = basis[a].iter().zip(&basis[b]).map(|(x, y)| x * y).sum();
                let t = (2 * ab + bb).div_euclid(2 * bb);
                if t != 0 {
                    let vb = basis[b].clone();
                    for (x, y) in basis[a].iter_mut().zip(&vb) {
                        *x -= t * y;
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn kernel_columns(e: &Echelon, cols: usize) -> Vec<Vec<i128>> {
    let mut k: Vec<Vec<i128>> = (e.rank..cols).map(|j| (0..cols).map(|i| e.u[i][j]).collect()).collect();
    reduce_basis(&mut k);
    k
}

/// A basis of the integer solutions of `a·x = 0`, size-reduced.
pub fn integer_kernel(a: &[Vec<i64>], cols: usize) -> Option<Vec<Vec<i64>>> {
    let e = column_echelon(a, cols)?;
    kernel_columns(&e, cols).into_iter().map(|v| v.into_iter().map(|x| i64::try_from(x).ok()).collect()).collect()
}

/// An integer solution of `a·x = b`, size-reduced against the kernel.
/// `None` if there is none or an entry overflows.
pub fn solve_integer(a: &[Vec<i64>], b: &[i64], cols: usize) -> Option<Vec<i64>> {
    let rows = a.len();
    let e = column_echelon(a, cols)?;
    // forward substitution in the echelon coordinates
    let mut y = vec![0i128; cols];
    let mut next = e.pivots.iter().peekable();
    for r in 0..rows {
        let mut acc = b[r] as i128;
        for (j, yj) in y.iter().enumerate() {
            acc = acc.checked_sub(e.h[r][j].checked_mul(*yj)?)?;
        }
        if let Some(&&(pr, pc)) = next.peek() {
            if pr == r {
                next.next();
                if acc % e.h[r][pc] != 0 {
                    return None;
                }
                y[pc] = acc / e.h[r][pc];
                continue;
            }
        }
        if acc != 0 {
            return None;
        }
    }
    let mut x = vec![0i128; cols];
    for (i, xi) in x.iter_mut().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            *xi = xi.checked_add(e.u[i][j].checked_mul(*yj)?)?;
        }
    }
    let kernel = kernel_columns(&e, cols);
    for _ in 0..64 {
        let mut changed = false;
        for v in &kernel {
            let vv: i128 = v.iter().map(|a| a * a).sum();
            if vv == 0 {
                continue;
            }
            let xv: i128 = x.iter().zip(v).map(|(a, b)| a * b).sum();
            let t = (2 * xv + vv).div_euclid(2 * vv);
            if t != 0 {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi -= t * vi;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    x.into_iter().map(|v| i64::try_from(v).ok()).collect()
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}
