#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{cr, ComplexMatrix, C64};

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &ComplexMatrix) -> C64 {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let mut det = cr(1.0);
    for k in 0..n {
        let mut p = k;
        let mut best = a[(k, k)].norm();
        for i in (k + 1)..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return cr(0.0);
        }
        if p != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
            det = -det;
        }
        let piv = a[(k, k)];
        det *= piv;
        for i in (k + 1)..n {
            let f = a[(i, k)] / piv;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
        }
    }
    det
}

/// Hadamard bound `prod_i ||row_i||`, an upper bound for `|det m|`.
pub fn hadamard_bound(m: &ComplexMatrix) -> f64 {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product()
}

/// Upper Cholesky factor `R` with `G = R^* R` for a Hermitian positive definite `G`.
pub fn cholesky_upper(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.rows();
    let mut r = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = g[(j, j)].re;
        for k in 0..j {
            d -= r[(k, j)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let rjj = d.sqrt();
        r[(j, j)] = cr(rjj);
        for i in (j + 1)..n {
            let mut s = g[(j, i)];
            for k in 0..j {
                s -= r[(k, j)].conj() * r[(k, i)];
            }
            r[(j, i)] = s / rjj;
        }
    }
    Some(r)
}

/// Inverse of a nonsingular upper triangular matrix.
pub fn inv_upper(r: &ComplexMatrix) -> ComplexMatrix {
    let n = r.rows();
    let mut x = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        x[(j, j)] = r[(j, j)].inv();
        for i in (0..j).rev() {
            let mut s = cr(0.0);
            for k in (i + 1)..=j {
                s += r[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = -s / r[(i, i)];
        }
    }
    x
}
