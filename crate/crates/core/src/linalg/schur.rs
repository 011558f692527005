use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{cr, ComplexMatrix, C64};
use super::LinalgError;

/// Complex Schur form `A = Z T Z^*` with `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur {
    pub t: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

/// Givens pair `(c, s)` with `[[c, s], [-conj(s), c]] (a, b)^T = (r, 0)^T`.
#[inline]
pub(crate) fn givens(a: C64, b: C64) -> (f64, C64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, cr(0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

#[inline]
fn rotate_rows(m: &mut ComplexMatrix, k: usize, c: f64, s: C64, from: usize) {
    for j in from..m.cols() {
        let x = m[(k, j)];
        let y = m[(k + 1, j)];
        m[(k, j)] = x * c + y * s;
        m[(k + 1, j)] = -(s.conj()) * x + y * c;
    }
}

/// Multiplies columns `k, k+1` by `[[c, -s], [conj(s), c]]` on the right, rows `0..rows`.
#[inline]
fn rotate_cols(m: &mut ComplexMatrix, k: usize, c: f64, s: C64, rows: usize) {
    for i in 0..rows {
        let x = m[(i, k)];
        let y = m[(i, k + 1)];
        m[(i, k)] = x * c + y * s.conj();
        m[(i, k + 1)] = -s * x + y * c;
    }
}

fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail: f64 = v[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let ph = if v[0].norm() > 0.0 { v[0] / v[0].norm() } else { cr(1.0) };
        v[0] += ph * alpha;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        // H <- P H, P = I - 2 v v^* / (v^* v)
        for j in 0..n {
            let mut dot = cr(0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + t, j)];
            }
            let f = dot * (2.0 / vn2);
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * f;
            }
        }
        // H <- H P, Q <- Q P
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let mut dot = cr(0.0);
                for (t, vi) in v.iter().enumerate() {
                    dot += mat[(i, k + 1 + t)] * vi;
                }
                let f = dot * (2.0 / vn2);
                for (t, vi) in v.iter().enumerate() {
                    mat[(i, k + 1 + t)] -= f * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = cr(0.0);
        }
    }
    (h, q)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Unitary triangularization by Hessenberg reduction and shifted QR.
pub fn schur(a: &ComplexMatrix) -> Result<Schur, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    let n = a.rows();
    let (mut h, mut z) = hessenberg(a);
    if n < 2 {
        return Ok(Schur { t: h, z });
    }
    let norm = a.max_abs().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(n);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            let s = if s == 0.0 { norm } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = cr(0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 200 * n {
            return Err(LinalgError::NoConvergence);
        }
        let mu = if iter % 11 == 10 {
            h[(hi, hi)] + cr(0.75 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        rots.clear();
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rotate_rows(&mut h, k, c, s, k);
            h[(k + 1, k)] = cr(0.0);
            rots.push((c, s));
        }
        for (t, &(c, s)) in rots.iter().enumerate() {
            let k = l + t;
            rotate_cols(&mut h, k, c, s, (k + 2).min(hi + 1));
            rotate_cols(&mut z, k, c, s, n);
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = cr(0.0);
        }
    }
    Ok(Schur { t: h, z })
}

/// Swaps the adjacent diagonal entries `k, k+1` of a Schur form in place.
fn swap_adjacent(s: &mut Schur, k: usize) {
    let n = s.t.rows();
    let a = s.t[(k, k)];
    let b = s.t[(k, k + 1)];
    let d = s.t[(k + 1, k + 1)];
    let (c, sn) = givens(b, d - a);
    rotate_rows(&mut s.t, k, c, sn, k);
    rotate_cols(&mut s.t, k, c, sn, k + 2);
    rotate_cols(&mut s.z, k, c, sn, n);
    s.t[(k + 1, k)] = cr(0.0);
    s.t[(k, k)] = d;
    s.t[(k + 1, k + 1)] = a;
}

/// Reorders the Schur diagonal so that it is sorted by `cmp`.
pub fn reorder(s: &mut Schur, mut cmp: impl FnMut(&C64, &C64) -> Ordering) {
    let n = s.t.rows();
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n.saturating_sub(1 + pass) {
            let a = s.t[(k, k)];
            let d = s.t[(k + 1, k + 1)];
            if a != d && cmp(&d, &a) == Ordering::Less {
                swap_adjacent(s, k);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

/// Ordering used for canonical forms: modulus descending, then argument ascending.
pub fn modulus_then_argument(a: &C64, b: &C64) -> Ordering {
    let (ma, mb) = (a.norm(), b.norm());
    let tol = 1e-9 * ma.max(mb).max(1.0);
    if (ma - mb).abs() > tol {
        return mb.partial_cmp(&ma).unwrap_or(Ordering::Equal);
    }
    let (pa, pb) = (a.arg(), b.arg());
    if (pa - pb).abs() <= 1e-9 {
        return Ordering::Equal;
    }
    pa.partial_cmp(&pb).unwrap_or(Ordering::Equal)
}

/// Schur form with the diagonal ordered by [`modulus_then_argument`].
pub fn schur_ordered(a: &ComplexMatrix) -> Result<Schur, LinalgError> {
    let mut s = schur(a)?;
    reorder(&mut s, modulus_then_argument);
    Ok(s)
}

/// Eigenvalues of a square matrix, in Schur order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>, LinalgError> {
    Ok(schur(a)?.eigenvalues())
}
