//! Partial isometries: validation, projection, compression and canonical forms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::lu::{cholesky_upper, inv_upper};
use crate::linalg::matrix::{complete_basis, inner, vnorm};
use crate::linalg::schur::schur_ordered;
use crate::linalg::svd::{staircase, svd};
use crate::linalg::{cr, ComplexMatrix, LinalgError, C64};
use crate::sample::haar_unitary;

/// Parameters below this magnitude are treated as structural zeros.
pub const STRUCTURAL_ZERO: f64 = 1e-9;

/// Default tolerance for singular values of a partial isometry.
pub const PI_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum PisomError {
    NotSquare { rows: usize, cols: usize },
    NotPartialIsometry { max_deviation: f64 },
    WrongShape { expected: &'static str },
    WrongDefect { defect: usize },
    /// The coupling `g` cannot be made real; no circle is possible in this case.
    ComplexCoupling { imag: f64 },
    InvalidParameters { reason: &'static str },
    ResidualTooLarge { residual: f64 },
    Linalg(LinalgError),
}

impl fmt::Display for PisomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PisomError::NotSquare { rows, cols } => write!(f, "matrix is {}x{}, expected square", rows, cols),
            PisomError::NotPartialIsometry { max_deviation } => write!(
                f,
                "not a partial isometry: singular values deviate from {{0,1}} by {:.3e}",
                max_deviation
            ),
            PisomError::WrongShape { expected } => write!(f, "expected {}", expected),
            PisomError::WrongDefect { defect } => write!(f, "defect {} is below 2", defect),
            PisomError::ComplexCoupling { imag } => {
                write!(f, "coupling entry g has imaginary part {:.3e} and cannot be made real", imag)
            }
            PisomError::InvalidParameters { reason } => write!(f, "invalid parameters: {}", reason),
            PisomError::ResidualTooLarge { residual } => {
                write!(f, "reduction residual {:.3e} exceeds tolerance", residual)
            }
            PisomError::Linalg(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for PisomError {}

impl From<LinalgError> for PisomError {
    fn from(e: LinalgError) -> Self {
        PisomError::Linalg(e)
    }
}

/// A validated partial isometry together with its block form
/// `W^* A W = [[0, B], [0, C]]`, where the first `kernel_dim` columns of `W` span `ker A`.
#[derive(Clone, Debug)]
pub struct PartialIsometry {
    matrix: ComplexMatrix,
    rank: usize,
    basis: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
    max_deviation: f64,
}

impl PartialIsometry {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.n() - self.rank
    }

    /// Unitary `W` of the block form.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn block_b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn block_c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn max_deviation(&self) -> f64 {
        self.max_deviation
    }

    /// `W^* A W`.
    pub fn block_form(&self) -> ComplexMatrix {
        let m = self.kernel_dim();
        let mut out = ComplexMatrix::zeros(self.n(), self.n());
        out.set_block(0, m, &self.b);
        out.set_block(m, m, &self.c);
        out
    }
}

fn check_square(m: &ComplexMatrix) -> Result<(), PisomError> {
    if !m.is_square() {
        return Err(PisomError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(PisomError::Linalg(LinalgError::NonFinite { row: 0, col: 0 }));
    }
    Ok(())
}

/// Accepts `m` if every singular value is within `tol` of 0 or 1.
pub fn validate(m: &ComplexMatrix, tol: f64) -> Result<PartialIsometry, PisomError> {
    check_square(m)?;
    let n = m.rows();
    let d = svd(m);
    let max_deviation = d.s.iter().map(|&s| s.min((s - 1.0).abs())).fold(0.0, f64::max);
    if max_deviation > tol {
        return Err(PisomError::NotPartialIsometry { max_deviation });
    }
    let kernel = d.null_space(0.5);
    let support = d.support(0.5);
    let rank = support.len();
    let mut cols = kernel.clone();
    cols.extend(support.iter().cloned());
    let basis = ComplexMatrix::from_columns(n, &cols);
    let a = &(&basis.adjoint() * m) * &basis;
    let k = n - rank;
    Ok(PartialIsometry {
        matrix: m.clone(),
        rank,
        b: a.submatrix(0, k, k, rank),
        c: a.submatrix(k, k, rank, rank),
        basis,
        max_deviation,
    })
}

/// Nearest-structure repair of an approximate partial isometry.
///
/// Singular values below 1/2 are set to zero. On the remaining support the columns are
/// orthonormalized by a Cholesky factor taken in a basis that puts the generalized null
/// space of the compression first, so an exactly nilpotent part survives exactly.
pub fn project_to_partial_isometry(m: &ComplexMatrix) -> Result<ComplexMatrix, PisomError> {
    check_square(m)?;
    let n = m.rows();
    let d = svd(m);
    let support = d.support(0.5);
    let r = support.len();
    if r == 0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let s = ComplexMatrix::from_columns(n, &support);
    let ms = m * &s;
    let comp = &s.adjoint() * &ms;
    let scale = m.max_abs().max(1.0);
    let st = staircase(&comp, 1e-9 * scale);
    let sq = &s * &st.basis;
    let msq = m * &sq;
    let gram = &msq.adjoint() * &msq;
    let chol = cholesky_upper(&gram).ok_or(PisomError::NotPartialIsometry { max_deviation: 1.0 })?;
    let cols = &msq * &inv_upper(&chol);
    Ok(&cols * &sq.adjoint())
}

/// Compression of `A` to `R(A) + R(A^*)`, with the orthonormal basis used.
pub fn compress_to_active_subspace(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), PisomError> {
    check_square(a)?;
    let n = a.rows();
    let d = svd(a);
    let tol = 1e-10 * d.s.first().copied().unwrap_or(0.0).max(1.0);
    let mut cols = d.range(tol);
    cols.extend(d.support(tol));
    if cols.is_empty() {
        return Ok((ComplexMatrix::zeros(0, 0), ComplexMatrix::zeros(n, 0)));
    }
    let stacked = ComplexMatrix::from_columns(n, &cols);
    let q = ComplexMatrix::from_columns(n, &svd(&stacked.adjoint()).support(1e-8));
    Ok((&(&q.adjoint() * a) * &q, q))
}

/// Zero-padded compression to a `6 x 6` matrix, for rank-three inputs of any size.
pub fn to_six_by_six(a: &ComplexMatrix) -> Result<ComplexMatrix, PisomError> {
    if a.rows() == 6 && a.cols() == 6 {
        return Ok(a.clone());
    }
    let (c, _) = compress_to_active_subspace(a)?;
    if c.rows() > 6 {
        return Err(PisomError::WrongShape {
            expected: "an active subspace of dimension at most 6",
        });
    }
    let pad = 6 - c.rows();
    Ok(ComplexMatrix::zeros(pad, pad).direct_sum(&c))
}

/// Seeded random `6 x 6` rank-three partial isometry: zero first three columns and
/// orthonormal last three columns drawn from the Haar measure.
pub fn random_rank3(seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar_unitary(6, &mut rng);
    let mut a = ComplexMatrix::zeros(6, 6);
    for j in 0..3 {
        for i in 0..6 {
            a[(i, 3 + j)] = u[(i, j)];
        }
    }
    a
}

/// Algebraic minus geometric multiplicity of the eigenvalue zero.
pub fn defect(a: &ComplexMatrix) -> Result<usize, PisomError> {
    check_square(a)?;
    let tol = 1e-9 * a.max_abs().max(1.0);
    Ok(staircase(a, tol).defect())
}

/// Dimension of `{X : XC = CX, XC^* = C^*X}`; one means `C` is unitarily irreducible.
pub fn commutant_dimension(c: &ComplexMatrix) -> usize {
    let n = c.rows();
    let n2 = n * n;
    let mut l = ComplexMatrix::zeros(2 * n2, n2);
    let cs = c.adjoint();
    for (blk, m) in [c, &cs].into_iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = blk * n2 + i * n + j;
                for k in 0..n {
                    // (X M)_{ij} picks X_{ik} M_{kj}; (M X)_{ij} picks M_{ik} X_{kj}
                    l[(row, i * n + k)] += m[(k, j)];
                    l[(row, k * n + j)] -= m[(i, k)];
                }
            }
        }
    }
    let d = svd(&l);
    let scale = d.s.first().copied().unwrap_or(0.0).max(1.0);
    d.s.iter().filter(|&&s| s <= 1e-9 * scale).count()
}

/// Irreducibility test for `[[0, B], [0, C]]`: `B` of full rank and `C` irreducible.
pub fn is_unitarily_irreducible_blockform(b: &ComplexMatrix, c: &ComplexMatrix) -> bool {
    let s = svd(b).s;
    let full = b.rows().min(b.cols());
    let b_full = s.iter().take(full).all(|&x| x > 1e-8);
    b_full && (c.rows() == 0 || commutant_dimension(c) == 1)
}

/// `A_{t,h}`, the four-by-four partial isometry with entries `1, t, sqrt(1-t^2-h^2), h`.
pub fn ath_matrix(t: f64, h: f64) -> Result<ComplexMatrix, PisomError> {
    if t < 0.0 || h < 0.0 || t * t + h * h > 1.0 + 1e-12 {
        return Err(PisomError::InvalidParameters {
            reason: "A_{t,h} needs t, h >= 0 and t^2 + h^2 <= 1",
        });
    }
    // rounding residue on the circle t^2 + h^2 = 1 would otherwise couple the blocks
    let rest = 1.0 - t * t - h * h;
    let s = if rest <= 1e-12 { 0.0 } else { rest.sqrt() };
    let mut a = ComplexMatrix::zeros(4, 4);
    a[(0, 2)] = cr(1.0);
    a[(1, 3)] = cr(t);
    a[(2, 3)] = cr(s);
    a[(3, 3)] = cr(h);
    Ok(a)
}

/// Canonical form of a rank-three `6 x 6` partial isometry with one eigenvalue `a >= 0`
/// on the compressed block and the rest upper triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm6 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub v: f64,
    pub d: C64,
    pub e: C64,
    pub f: C64,
    pub lambda2: C64,
    pub lambda3: C64,
}

impl CanonicalForm6 {
    pub fn matrix(&self) -> ComplexMatrix {
        let s = (1.0 - self.a * self.a).max(0.0).sqrt();
        let mut m = ComplexMatrix::zeros(6, 6);
        m[(0, 3)] = cr(s);
        m[(0, 4)] = cr(self.b * self.a);
        m[(0, 5)] = self.d * self.a;
        m[(1, 4)] = cr(self.v);
        m[(2, 4)] = cr(self.c);
        m[(2, 5)] = self.e;
        m[(3, 3)] = cr(self.a);
        m[(3, 4)] = cr(-self.b * s);
        m[(3, 5)] = -self.d * s;
        m[(4, 4)] = self.lambda2;
        m[(4, 5)] = self.f;
        m[(5, 5)] = self.lambda3;
        m
    }

    /// Residuals of the column orthonormality relations.
    pub fn orthogonality_residual(&self) -> f64 {
        let r1 = (cr(self.b) * self.d + self.e * self.c + self.f * self.lambda2.conj()).norm();
        let r2 = (self.b * self.b + self.c * self.c + self.v * self.v + self.lambda2.norm_sqr() - 1.0).abs();
        let r3 = (self.d.norm_sqr() + self.e.norm_sqr() + self.f.norm_sqr() + self.lambda3.norm_sqr() - 1.0).abs();
        r1.max(r2).max(r3)
    }
}

/// Result of a reduction: `phase * U * A * U^* = form.matrix()`.
#[derive(Clone, Debug)]
pub struct Reduction<F> {
    pub form: F,
    pub unitary: ComplexMatrix,
    pub phase: C64,
}

impl<F> Reduction<F> {
    pub fn apply(&self, a: &ComplexMatrix) -> ComplexMatrix {
        a.conjugate_by(&self.unitary).scale(self.phase)
    }
}

fn phase_of(z: C64) -> C64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        cr(1.0)
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < STRUCTURAL_ZERO {
        0.0
    } else {
        x
    }
}

fn snap_c(z: C64) -> C64 {
    C64::new(snap(z.re), snap(z.im))
}

fn orthogonalize(basis: &[Vec<C64>], mut x: Vec<C64>) -> Option<Vec<C64>> {
    for _ in 0..2 {
        for u in basis {
            let p = inner(u, &x);
            for (xi, ui) in x.iter_mut().zip(u) {
                *xi -= p * ui;
            }
        }
    }
    let nx = vnorm(&x);
    if nx > 1e-9 {
        Some(x.into_iter().map(|z| z / nx).collect())
    } else {
        None
    }
}

/// Orthonormal kernel basis `u1, u2, u3` adapted to the columns of `B`:
/// `u1` along the first column, `u3` along the part of the third column orthogonal
/// to `u1`, `u2` the rest. If the third column has no such part, `u2` is taken along
/// the second column instead, which puts a zero in the `(3,5)` position.
fn adapted_kernel_basis(b: &ComplexMatrix) -> Vec<Vec<C64>> {
    let m = b.rows();
    let u1 = orthogonalize(&[], b.column(0)).unwrap_or_else(|| complete_basis(m, &[])[0].clone());
    let mut basis = vec![u1];
    match orthogonalize(&basis, b.column(2)) {
        Some(u3) => {
            let mut tmp = basis.clone();
            tmp.push(u3.clone());
            let u2 = complete_basis(m, &tmp)[2].clone();
            basis.push(u2);
            basis.push(u3);
        }
        None => {
            if let Some(u2) = orthogonalize(&basis, b.column(1)) {
                basis.push(u2);
            }
        }
    }
    complete_basis(m, &basis)
}

/// Diagonal phases making the listed entries real and nonnegative, spanning-tree order.
/// Edges whose entry is below `STRUCTURAL_ZERO` are skipped.
fn tree_phases(a: &ComplexMatrix, edges: &[(usize, usize)]) -> Vec<C64> {
    let n = a.rows();
    let mut psi = vec![cr(1.0); n];
    let mut comp: Vec<usize> = (0..n).collect();
    for &(i, j) in edges {
        let val = psi[i].conj() * a[(i, j)] * psi[j];
        if val.norm() < STRUCTURAL_ZERO || comp[i] == comp[j] {
            continue;
        }
        let factor = phase_of(val).conj();
        let cj = comp[j];
        let ci = comp[i];
        for k in 0..n {
            if comp[k] == cj {
                psi[k] *= factor;
                comp[k] = ci;
            }
        }
    }
    psi
}

fn apply_phases(a: &ComplexMatrix, psi: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| psi[i].conj() * a[(i, j)] * psi[j])
}

fn require_rank3_six(a: &PartialIsometry) -> Result<(), PisomError> {
    if a.n() != 6 || a.rank() != 3 {
        return Err(PisomError::WrongShape {
            expected: "a 6x6 partial isometry of rank 3",
        });
    }
    Ok(())
}

/// Reduction of a rank-three `6 x 6` partial isometry to [`CanonicalForm6`].
/// The eigenvalue `a` is the one of largest modulus (ties by smallest argument).
pub fn canonicalize_rank3(pi: &PartialIsometry) -> Result<Reduction<CanonicalForm6>, PisomError> {
    require_rank3_six(pi)?;
    let sch = schur_ordered(pi.block_c())?;
    let lead = sch.t[(0, 0)];
    let phase = phase_of(lead).conj();
    let bq = (pi.block_b() * &sch.z).scale(phase);
    let ub = ComplexMatrix::from_columns(3, &adapted_kernel_basis(&bq));
    let w = pi.basis() * &ub.direct_sum(&sch.z);
    let a1 = &(&w.adjoint() * pi.matrix()) * &w;
    let a1 = a1.scale(phase);
    let sa = (1.0 - lead.norm_sqr()).max(0.0).sqrt();
    let an = lead.norm();
    // make (1,4), the b-combination, (2,5), (3,5) real nonnegative; then d
    let mut psi = vec![cr(1.0); 6];
    if a1[(0, 3)].norm() > STRUCTURAL_ZERO {
        psi[3] = phase_of(a1[(0, 3)]).conj();
    }
    // the column-4 orthogonality puts (1,j), (4,j) along (a, -sqrt(1-a^2))
    let bcomb = |m: &ComplexMatrix, col: usize, p: &[C64]| -> C64 {
        p[0].conj() * m[(0, col)] * an - p[3].conj() * m[(3, col)] * sa
    };
    let b5 = bcomb(&a1, 4, &psi);
    if b5.norm() > STRUCTURAL_ZERO {
        psi[4] = phase_of(b5).conj();
    }
    if (a1[(1, 4)] * psi[4]).norm() > STRUCTURAL_ZERO {
        psi[1] = phase_of(a1[(1, 4)] * psi[4]);
    }
    if (a1[(2, 4)] * psi[4]).norm() > STRUCTURAL_ZERO {
        psi[2] = phase_of(a1[(2, 4)] * psi[4]);
    }
    let d6 = bcomb(&a1, 5, &psi);
    if d6.norm() > STRUCTURAL_ZERO {
        psi[5] = phase_of(d6).conj();
    } else if (psi[2].conj() * a1[(2, 5)]).norm() > STRUCTURAL_ZERO {
        psi[5] = phase_of(psi[2].conj() * a1[(2, 5)]).conj();
    }
    let a2 = apply_phases(&a1, &psi);
    let form = CanonicalForm6 {
        a: snap(an),
        b: snap((a2[(0, 4)] * an - a2[(3, 4)] * sa).re),
        c: snap(a2[(2, 4)].re),
        v: snap(a2[(1, 4)].re),
        d: snap_c(a2[(0, 5)] * an - a2[(3, 5)] * sa),
        e: snap_c(a2[(2, 5)]),
        f: snap_c(a2[(4, 5)]),
        lambda2: snap_c(a2[(4, 4)]),
        lambda3: snap_c(a2[(5, 5)]),
    };
    let dmat = ComplexMatrix::diag(&psi);
    let unitary = (&w * &dmat).adjoint();
    let red = Reduction { form, unitary, phase };
    let resid = red.apply(pi.matrix()).dist(&red.form.matrix());
    if resid > 1e-7 {
        return Err(PisomError::ResidualTooLarge { residual: resid });
    }
    Ok(red)
}

/// Canonical parameters of a rank-three partial isometry with defect at least two:
/// columns four to six of the matrix are `(1,0,0,0,0,0)`, `(0,b,c,d,0,0)`, `(0,0,e,f,g,h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Defect2Form {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl Defect2Form {
    /// Checks norms, orthogonality and the sign conventions.
    pub fn new(b: f64, c: f64, d: f64, e: f64, f: f64, g: f64, h: f64) -> Result<Self, PisomError> {
        let form = Self { b, c, d, e, f, g, h };
        form.validate(1e-8)?;
        Ok(form)
    }

    pub fn validate(&self, tol: f64) -> Result<(), PisomError> {
        let Self { b, c, d, e, f, g, h } = *self;
        if [b, c, d, e, f, g, h].iter().any(|x| !x.is_finite()) {
            return Err(PisomError::InvalidParameters { reason: "non-finite parameter" });
        }
        if b < -tol || c < -tol || d < -tol || e < -tol || h < -tol {
            return Err(PisomError::InvalidParameters {
                reason: "b, c, d, e, h must be nonnegative",
            });
        }
        if (b * b + c * c + d * d - 1.0).abs() > tol {
            return Err(PisomError::InvalidParameters { reason: "b^2 + c^2 + d^2 != 1" });
        }
        if (e * e + f * f + g * g + h * h - 1.0).abs() > tol {
            return Err(PisomError::InvalidParameters {
                reason: "e^2 + f^2 + g^2 + h^2 != 1",
            });
        }
        if (c * e + d * f).abs() > tol {
            return Err(PisomError::InvalidParameters { reason: "ce + df != 0" });
        }
        if c * e > tol && f > tol {
            return Err(PisomError::InvalidParameters {
                reason: "f must be nonpositive when ce > 0",
            });
        }
        if c * e <= tol && f < -tol {
            return Err(PisomError::InvalidParameters {
                reason: "f must be nonnegative when ce = 0",
            });
        }
        if e.abs() <= tol && c.abs() > tol {
            return Err(PisomError::InvalidParameters {
                reason: "e = 0 requires c = 0",
            });
        }
        Ok(())
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(6, 6);
        m[(0, 3)] = cr(1.0);
        m[(1, 4)] = cr(self.b);
        m[(2, 4)] = cr(self.c);
        m[(3, 4)] = cr(self.d);
        m[(2, 5)] = cr(self.e);
        m[(3, 5)] = cr(self.f);
        m[(4, 5)] = cr(self.g);
        m[(5, 5)] = cr(self.h);
        m
    }

    pub fn is_nilpotent(&self) -> bool {
        self.h.abs() < STRUCTURAL_ZERO
    }
}

/// Reduction of a rank-three `6 x 6` partial isometry of defect at least two.
pub fn canonicalize_defect2(pi: &PartialIsometry) -> Result<Reduction<Defect2Form>, PisomError> {
    require_rank3_six(pi)?;
    let c = pi.block_c();
    let st = staircase(c, 1e-9);
    let alg = st.algebraic();
    if alg < 2 {
        return Err(PisomError::WrongDefect { defect: alg });
    }
    let q = st.basis;
    let cq = &(&q.adjoint() * c) * &q;
    let bq = pi.block_b() * &q;
    let ub = ComplexMatrix::from_columns(3, &adapted_kernel_basis(&bq));
    let w = pi.basis() * &ub.direct_sum(&q);
    let a0 = &(&w.adjoint() * pi.matrix()) * &w;
    // (1,4), d, b, c, e, f, g
    let edges = [(0, 3), (3, 4), (1, 4), (2, 4), (2, 5), (3, 5), (4, 5)];
    let phase = if alg == 2 {
        phase_of(cq[(2, 2)]).conj()
    } else {
        // nilpotent: h gives no phase, so spend the rotation on g
        let a2 = apply_phases(&a0, &tree_phases(&a0, &edges));
        phase_of(a2[(4, 5)]).conj()
    };
    let a1 = a0.scale(phase);
    let psi = tree_phases(&a1, &edges);
    let a2 = apply_phases(&a1, &psi);
    let gz = a2[(4, 5)];
    if gz.im.abs() > 1e-8 {
        return Err(PisomError::ComplexCoupling { imag: gz.im });
    }
    let form = Defect2Form {
        b: snap(a2[(1, 4)].re),
        c: snap(a2[(2, 4)].re),
        d: snap(a2[(3, 4)].re),
        e: snap(a2[(2, 5)].re),
        f: snap(a2[(3, 5)].re),
        g: snap(gz.re),
        h: snap(a2[(5, 5)].re),
    };
    form.validate(1e-7)?;
    let dmat = ComplexMatrix::diag(&psi);
    let unitary = (&w * &dmat).adjoint();
    let red = Reduction { form, unitary, phase };
    let resid = red.apply(pi.matrix()).dist(&red.form.matrix());
    if resid > 1e-7 {
        return Err(PisomError::ResidualTooLarge { residual: resid });
    }
    Ok(red)
}
