use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{cr, ComplexMatrix, C64};
use super::LinalgError;

const MAX_SWEEPS: usize = 100;
const OFF_TOL: f64 = 1e-13;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are orthonormal eigenvectors matching `values`.
    pub vectors: ComplexMatrix,
}

/// Rotation `G = [[c, s e^{i phi}], [-s e^{-i phi}, c]]` in the `(p, q)` plane such that
/// `G^* H G` has a zero `(p, q)` entry, for `H = [[alpha, gamma], [conj(gamma), beta]]`.
#[inline]
pub(crate) fn jacobi_rotation(alpha: f64, beta: f64, gamma: C64) -> (f64, C64) {
    let g = gamma.norm();
    let phase = if g > 0.0 { gamma / g } else { cr(1.0) };
    let theta = (beta - alpha) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, phase * (t * c))
}

fn off_norm(h: &ComplexMatrix) -> f64 {
    let n = h.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += h[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn check_hermitian(h: &ComplexMatrix) -> Result<(), LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    if !h.is_finite() {
        return Err(LinalgError::NonFinite { row: 0, col: 0 });
    }
    let n = h.rows();
    let scale = h.max_abs().max(1.0);
    for i in 0..n {
        for j in i..n {
            if (h[(i, j)] - h[(j, i)].conj()).norm() > 1e-10 * scale {
                return Err(LinalgError::NotHermitian { row: i, col: j });
            }
        }
    }
    Ok(())
}

fn jacobi(h: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>), LinalgError> {
    check_hermitian(h)?;
    let n = h.rows();
    let mut a = h.clone();
    // symmetrize so tiny asymmetries do not leak into the rotations
    for i in 0..n {
        a[(i, i)] = cr(a[(i, i)].re);
        for j in (i + 1)..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(n))
    } else {
        None
    };
    let total = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off = off_norm(&a);
        if off <= OFF_TOL * total || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a[(p, q)];
                if gamma.norm() <= 1e-300 {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let (cs, sv) = jacobi_rotation(alpha, beta, gamma);
                // columns: A <- A G
                for k in 0..n {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    a[(k, p)] = x * cs - y * sv.conj();
                    a[(k, q)] = x * sv + y * cs;
                }
                // rows: A <- G^* A
                for k in 0..n {
                    let x = a[(p, k)];
                    let y = a[(q, k)];
                    a[(p, k)] = x * cs - y * sv;
                    a[(q, k)] = x * sv.conj() + y * cs;
                }
                a[(p, q)] = cr(0.0);
                a[(q, p)] = cr(0.0);
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let x = v[(k, p)];
                        let y = v[(k, q)];
                        v[(k, p)] = x * cs - y * sv.conj();
                        v[(k, q)] = x * sv + y * cs;
                    }
                }
            }
        }
    }
    if !converged && off_norm(&a) > OFF_TOL * total.max(1.0) {
        return Err(LinalgError::NoConvergence);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values = idx.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = v.map(|v| v.select_columns(&idx));
    Ok((values, vectors))
}

/// Cyclic complex Jacobi eigensolver.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    let (values, vectors) = jacobi(h, true)?;
    Ok(HermitianEigen {
        values,
        vectors: vectors.unwrap(),
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    Ok(jacobi(h, false)?.0)
}

/// Eigenvalues of `Re(e^{i theta} A)`, ascending.
pub fn rotated_real_part_eigenvalues(a: &ComplexMatrix, theta: f64) -> Vec<f64> {
    hermitian_eigenvalues(&a.hermitian_part(theta)).expect("Hermitian part is Hermitian")
}

/// Largest eigenvalue of `Re(e^{i theta} A)`.
pub fn lambda_max(a: &ComplexMatrix, theta: f64) -> f64 {
    *rotated_real_part_eigenvalues(a, theta).last().unwrap_or(&0.0)
}
