use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::hermitian::jacobi_rotation;
use super::matrix::{cr, ComplexMatrix, C64};

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `M = U diag(s) V^*`.
///
/// `s` has one entry per column of `M` (descending), `v` is square and unitary.
/// Columns of `u` belonging to zero singular values are zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub s: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Number of singular values above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.s.iter().filter(|&&x| x > tol).count()
    }

    /// Orthonormal basis (as columns) of the right null space.
    pub fn null_space(&self, tol: f64) -> Vec<Vec<C64>> {
        (0..self.s.len())
            .filter(|&j| self.s[j] <= tol)
            .map(|j| self.v.column(j))
            .collect()
    }

    /// Orthonormal basis of the row space complement of the null space.
    pub fn support(&self, tol: f64) -> Vec<Vec<C64>> {
        (0..self.s.len())
            .filter(|&j| self.s[j] > tol)
            .map(|j| self.v.column(j))
            .collect()
    }

    /// Orthonormal basis of the range.
    pub fn range(&self, tol: f64) -> Vec<Vec<C64>> {
        (0..self.s.len())
            .filter(|&j| self.s[j] > tol)
            .map(|j| self.u.column(j))
            .collect()
    }
}

/// One-sided (Hestenes) Jacobi SVD. Small singular values keep good relative accuracy,
/// which the kernel computations rely on.
pub fn svd(m: &ComplexMatrix) -> Svd {
    let rows = m.rows();
    let n = m.cols();
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = cr(0.0);
                for k in 0..rows {
                    let x = w[(k, p)];
                    let y = w[(k, q)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (cs, sv) = jacobi_rotation(alpha, beta, gamma);
                for k in 0..rows {
                    let x = w[(k, p)];
                    let y = w[(k, q)];
                    w[(k, p)] = x * cs - y * sv.conj();
                    w[(k, q)] = x * sv + y * cs;
                }
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * cs - y * sv.conj();
                    v[(k, q)] = x * sv + y * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..rows).map(|k| w[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let s: Vec<f64> = idx.iter().map(|&j| norms[j]).collect();
    let v = v.select_columns(&idx);
    let mut u = ComplexMatrix::zeros(rows, n);
    for (jj, &j) in idx.iter().enumerate() {
        if norms[j] > 0.0 {
            for k in 0..rows {
                u[(k, jj)] = w[(k, j)] / norms[j];
            }
        }
    }
    Svd { u, s, v }
}

pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    svd(m).s
}

/// Orthonormal basis of the null space of `m`, threshold relative to `max(1, ||m||)`.
pub fn null_space(m: &ComplexMatrix, rel_tol: f64) -> Vec<Vec<C64>> {
    let d = svd(m);
    let scale = d.s.first().copied().unwrap_or(0.0).max(1.0);
    d.null_space(rel_tol * scale)
}

/// Block staircase of the nilpotent part of a square matrix.
#[derive(Clone, Debug)]
pub struct Staircase {
    /// Unitary whose leading columns span the generalized null space,
    /// layered as `ker C`, then the next kernel of the compression, and so on.
    pub basis: ComplexMatrix,
    pub sizes: Vec<usize>,
}

impl Staircase {
    /// Dimension of the generalized null space.
    pub fn algebraic(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn geometric(&self) -> usize {
        self.sizes.first().copied().unwrap_or(0)
    }

    /// Algebraic minus geometric multiplicity of the eigenvalue zero.
    pub fn defect(&self) -> usize {
        self.algebraic() - self.geometric()
    }
}

/// Repeated kernel deflation: `basis^* C basis` is block upper triangular with zero
/// diagonal blocks of sizes `sizes`, followed by a nonsingular trailing block.
/// Singular values at or below `abs_tol` count as zero.
pub fn staircase(c: &ComplexMatrix, abs_tol: f64) -> Staircase {
    let n = c.rows();
    let mut basis = ComplexMatrix::identity(n);
    let mut sizes = Vec::new();
    let mut offset = 0;
    while offset < n {
        let q = basis.submatrix(0, offset, n, n - offset);
        let m = &(&q.adjoint() * c) * &q;
        let d = svd(&m);
        let dim = n - offset;
        let mut order: Vec<usize> = (0..dim).filter(|&j| d.s[j] <= abs_tol).collect();
        let k = order.len();
        if k == 0 {
            break;
        }
        order.extend((0..dim).filter(|&j| d.s[j] > abs_tol));
        let vv = d.v.select_columns(&order);
        let newq = &q * &vv;
        basis.set_block(0, offset, &newq);
        sizes.push(k);
        offset += k;
    }
    Staircase { basis, sizes }
}

/// Orthonormalizes the columns of `m` (modified Gram-Schmidt, two passes).
/// Returns `None` if the columns are numerically dependent.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let rows = m.rows();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut x = m.column(j);
        let n0 = super::matrix::vnorm(&x);
        for _ in 0..2 {
            for u in &cols {
                let p = super::matrix::inner(u, &x);
                for i in 0..rows {
                    x[i] -= p * u[i];
                }
            }
        }
        let nx = super::matrix::vnorm(&x);
        if nx <= 1e-12 * n0.max(1e-300) || nx == 0.0 {
            return None;
        }
        for z in x.iter_mut() {
            *z /= nx;
        }
        cols.push(x);
    }
    Some(ComplexMatrix::from_columns(rows, &cols))
}
