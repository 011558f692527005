//! Matrix polynomials: identically singular determinants, minimal polynomial kernel
//! vectors, and the kernel tests around `ker C ∩ ker C^*`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::hermitian::hermitian_eigen;
use crate::linalg::lu::{determinant, hadamard_bound};
use crate::linalg::matrix::vnorm;
use crate::linalg::svd::svd;
use crate::linalg::{cis, cr, ComplexMatrix, C64};
use crate::pisom::PartialIsometry;

/// Relative singular value threshold for null spaces.
pub const NULL_TOL: f64 = 1e-9;
/// Relative determinant threshold at the probe points.
pub const DET_TOL: f64 = 1e-8;
/// Largest `size * degree` accepted by the determinant test.
pub const MAX_DET_DEGREE: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum MatpolyError {
    Empty,
    NotSquare,
    SizeMismatch,
    TooLarge { degree_bound: usize },
    NotIdenticallySingular,
    /// No kernel vector of degree up to the bound was found.
    SearchExhausted { max_degree: usize },
    NotContraction { norm: f64 },
}

impl fmt::Display for MatpolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatpolyError::Empty => write!(f, "matrix polynomial has no coefficients"),
            MatpolyError::NotSquare => write!(f, "coefficients must be square"),
            MatpolyError::SizeMismatch => write!(f, "coefficients differ in size"),
            MatpolyError::TooLarge { degree_bound } => {
                write!(f, "determinant degree bound {} exceeds {}", degree_bound, MAX_DET_DEGREE)
            }
            MatpolyError::NotIdenticallySingular => write!(f, "determinant does not vanish identically"),
            MatpolyError::SearchExhausted { max_degree } => {
                write!(f, "no kernel polynomial of degree <= {}", max_degree)
            }
            MatpolyError::NotContraction { norm } => write!(f, "||C|| = {} exceeds 1", norm),
        }
    }
}

impl core::error::Error for MatpolyError {}

/// `P(z) = sum_i P_i z^i` with square coefficients of equal size.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<ComplexMatrix>,
}

impl MatrixPolynomial {
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self, MatpolyError> {
        let first = coeffs.first().ok_or(MatpolyError::Empty)?;
        if !first.is_square() {
            return Err(MatpolyError::NotSquare);
        }
        let n = first.rows();
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(MatpolyError::SizeMismatch);
        }
        Ok(Self { coeffs })
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].rows()
    }

    /// Formal degree (number of coefficients minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> ComplexMatrix {
        let mut acc = self.coeffs[self.degree()].clone();
        for p in self.coeffs.iter().rev().skip(1) {
            acc = &acc.scale(z) + p;
        }
        acc
    }

    /// `sum_m z^m sum_{i+j=m} P_i v_j`.
    pub fn apply(&self, v: &KernelPolynomial, z: C64) -> Vec<C64> {
        self.eval(z).mul_vec(&v.eval(z))
    }
}

/// `v(z) = sum_i v_i z^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelPolynomial {
    pub vectors: Vec<Vec<C64>>,
}

impl KernelPolynomial {
    pub fn degree(&self) -> usize {
        self.vectors.len() - 1
    }

    pub fn eval(&self, z: C64) -> Vec<C64> {
        let n = self.vectors[0].len();
        let mut acc = vec![cr(0.0); n];
        for v in self.vectors.iter().rev() {
            for (a, x) in acc.iter_mut().zip(v) {
                *a = *a * z + x;
            }
        }
        acc
    }

    /// `max_z |P(z) v(z)| / |v(z)|` over the given probes.
    pub fn residual(&self, p: &MatrixPolynomial, probes: &[C64]) -> f64 {
        probes
            .iter()
            .map(|&z| {
                let v = self.eval(z);
                vnorm(&p.apply(self, z)) / vnorm(&v).max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }
}

/// `count` points `1.1 e^{2 pi i k / count}`.
pub fn probe_points(count: usize) -> Vec<C64> {
    (0..count)
        .map(|k| cis(2.0 * core::f64::consts::PI * k as f64 / count as f64) * 1.1)
        .collect()
}

/// Determinants at the probe points, each divided by the Hadamard bound of `P(z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularityCheck {
    pub identically_singular: bool,
    pub max_abs_det: f64,
    pub max_rel_det: f64,
    pub probes: usize,
}

pub fn singularity_check(p: &MatrixPolynomial) -> Result<SingularityCheck, MatpolyError> {
    let bound = p.size() * p.degree();
    if bound > MAX_DET_DEGREE {
        return Err(MatpolyError::TooLarge { degree_bound: bound });
    }
    let probes = probe_points(bound + 1);
    let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
    for &z in &probes {
        let m = p.eval(z);
        let d = determinant(&m).norm();
        max_abs = max_abs.max(d);
        max_rel = max_rel.max(d / hadamard_bound(&m).max(1.0));
    }
    Ok(SingularityCheck {
        identically_singular: max_rel <= DET_TOL,
        max_abs_det: max_abs,
        max_rel_det: max_rel,
        probes: probes.len(),
    })
}

/// `det P(z)` has degree at most `n d`, so vanishing at `n d + 1` points is enough.
pub fn is_identically_singular(p: &MatrixPolynomial) -> Result<bool, MatpolyError> {
    Ok(singularity_check(p)?.identically_singular)
}

/// Block Toeplitz matrix of `v -> P v` restricted to kernel polynomials of degree `d`.
pub fn convolution_matrix(p: &MatrixPolynomial, d: usize) -> ComplexMatrix {
    let n = p.size();
    let k = p.degree();
    let mut m = ComplexMatrix::zeros((k + d + 1) * n, (d + 1) * n);
    for j in 0..=d {
        for (i, pi) in p.coeffs().iter().enumerate() {
            m.set_block((i + j) * n, j * n, pi);
        }
    }
    m
}

/// Dimension of the solution space of the degree-`d` convolution system.
pub fn kernel_dimension(p: &MatrixPolynomial, d: usize) -> usize {
    let s = svd(&convolution_matrix(p, d));
    let smax = s.s.first().copied().unwrap_or(0.0);
    s.s.iter().filter(|&&x| x <= NULL_TOL * smax).count()
}

/// Kernel polynomial of least degree, found by growing `d` from zero up to `n * deg P`.
/// The leading vector has unit norm.
pub fn minimal_kernel_polynomial(p: &MatrixPolynomial) -> Result<KernelPolynomial, MatpolyError> {
    if !is_identically_singular(p)? {
        return Err(MatpolyError::NotIdenticallySingular);
    }
    let n = p.size();
    let max_degree = n * p.degree();
    for d in 0..=max_degree {
        let s = svd(&convolution_matrix(p, d));
        let smax = s.s.first().copied().unwrap_or(0.0);
        let Some(j) = (0..s.s.len()).find(|&j| s.s[j] <= NULL_TOL * smax) else {
            continue;
        };
        let col = s.v.column(j);
        let mut vectors: Vec<Vec<C64>> = col.chunks(n).map(|c| c.to_vec()).collect();
        let lead = vnorm(&vectors[d]);
        for v in vectors.iter_mut() {
            for x in v.iter_mut() {
                *x /= lead;
            }
        }
        return Ok(KernelPolynomial { vectors });
    }
    Err(MatpolyError::SearchExhausted { max_degree })
}

/// Orthonormal basis of `ker C ∩ ker C^*`, as the null space of `[C; C^*]`.
pub fn kernel_intersection(c: &ComplexMatrix) -> Vec<Vec<C64>> {
    let stacked = c.vstack(&c.adjoint());
    let s = svd(&stacked);
    let scale = s.s.first().copied().unwrap_or(0.0).max(1.0);
    s.null_space(1e-8 * scale)
}

/// `z^2 C - z C^*C + C^*`.
pub fn half_circle_polynomial(c: &ComplexMatrix) -> MatrixPolynomial {
    let cs = c.adjoint();
    let csc = &cs * c;
    MatrixPolynomial::new(vec![cs, csc.scale_real(-1.0), c.clone()]).expect("square")
}

/// `z^2 C + z C^* - C^*C`.
pub fn flipped_polynomial(c: &ComplexMatrix) -> MatrixPolynomial {
    let cs = c.adjoint();
    let csc = &cs * c;
    MatrixPolynomial::new(vec![csc.scale_real(-1.0), cs, c.clone()]).expect("square")
}

fn kernel_dim(c: &ComplexMatrix) -> usize {
    let s = svd(c);
    let scale = s.s.first().copied().unwrap_or(0.0).max(1.0);
    s.null_space(1e-8 * scale).len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelIntersectionCheck {
    /// `dim ker C >= floor(k/2)`.
    pub hypothesis_holds: bool,
    /// `z^2 C - z C^*C + C^*` is identically singular.
    pub contains_c_half: bool,
    /// `ker C ∩ ker C^*` is nontrivial, so a `J_2` block splits off.
    pub reducible_j2: bool,
}

impl KernelIntersectionCheck {
    pub fn implication_holds(&self) -> bool {
        !(self.hypothesis_holds && self.contains_c_half) || self.reducible_j2
    }
}

pub fn check_kernel_intersection_c(c: &ComplexMatrix) -> Result<KernelIntersectionCheck, MatpolyError> {
    if !c.is_square() {
        return Err(MatpolyError::NotSquare);
    }
    let k = c.rows();
    Ok(KernelIntersectionCheck {
        hypothesis_holds: kernel_dim(c) >= k / 2,
        contains_c_half: is_identically_singular(&half_circle_polynomial(c))?,
        reducible_j2: !kernel_intersection(c).is_empty(),
    })
}

pub fn check_kernel_intersection(a: &PartialIsometry) -> Result<KernelIntersectionCheck, MatpolyError> {
    check_kernel_intersection_c(a.block_c())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlippedKernelCheck {
    pub flipped_singular: bool,
    pub intersection_nontrivial: bool,
}

impl FlippedKernelCheck {
    pub fn implication_holds(&self) -> bool {
        !self.flipped_singular || self.intersection_nontrivial
    }
}

pub fn check_flipped_kernel(c: &ComplexMatrix) -> Result<FlippedKernelCheck, MatpolyError> {
    if !c.is_square() {
        return Err(MatpolyError::NotSquare);
    }
    Ok(FlippedKernelCheck {
        flipped_singular: is_identically_singular(&flipped_polynomial(c))?,
        intersection_nontrivial: !kernel_intersection(c).is_empty(),
    })
}

/// Positive semidefinite square root of `I - C^*C`.
pub fn b_from_c(c: &ComplexMatrix) -> Result<ComplexMatrix, MatpolyError> {
    if !c.is_square() {
        return Err(MatpolyError::NotSquare);
    }
    let norm = c.norm2();
    if norm > 1.0 + 1e-12 {
        return Err(MatpolyError::NotContraction { norm });
    }
    let k = c.rows();
    let h = &ComplexMatrix::identity(k) - &(&c.adjoint() * c);
    let eig = hermitian_eigen(&h).map_err(|_| MatpolyError::NotSquare)?;
    let s = ComplexMatrix::diag(&eig.values.iter().map(|&l| cr(l.max(0.0).sqrt())).collect::<Vec<_>>());
    Ok(&(&eig.vectors * &s) * &eig.vectors.adjoint())
}

/// The `2k x 2k` partial isometry `[[0, B], [0, C]]` with `B = (I - C^*C)^{1/2}`.
pub fn assemble_from_c(c: &ComplexMatrix) -> Result<ComplexMatrix, MatpolyError> {
    let b = b_from_c(c)?;
    let k = c.rows();
    let mut a = ComplexMatrix::zeros(2 * k, 2 * k);
    a.set_block(0, k, &b);
    a.set_block(k, k, c);
    Ok(a)
}

/// Odd-size witness: `ker C` and `ker C^*` are distinct lines, yet the polynomial
/// `z^2 C - z C^*C + C^*` is singular.
pub fn odd_witness() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 1.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0],
    ])
}

/// Even-size witness of the same kind.
pub fn even_witness() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[1.0, 0.0, 0.0, 0.0],
    ])
}

/// `C (+) I_2^{(+)m} (+) J_2^{(+)l}`.
pub fn witness_family(base: &ComplexMatrix, m: usize, l: usize) -> ComplexMatrix {
    let i2 = ComplexMatrix::identity(2);
    let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let mut out = base.clone();
    for _ in 0..m {
        out = out.direct_sum(&i2);
    }
    for _ in 0..l {
        out = out.direct_sum(&j2);
    }
    out
}
