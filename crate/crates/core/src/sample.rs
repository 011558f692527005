//! Seeded random matrices and parameter samplers.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, ComplexMatrix, C64};
use crate::pisom::Defect2Form;

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: Gram-Schmidt of a complex Gaussian matrix. The implicit
/// triangular factor has a positive diagonal, which is what makes the law exactly Haar.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(n, n, rng);
        if let Some(q) = crate::linalg::svd::orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Random partial isometry `U diag(I_k, 0) V^*`.
pub fn random_partial_isometry<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let u = haar_unitary(n, rng);
    let v = haar_unitary(n, rng);
    let mut d = ComplexMatrix::zeros(n, n);
    for i in 0..rank.min(n) {
        d[(i, i)] = c(1.0, 0.0);
    }
    &(&u * &d) * &v.adjoint()
}

/// Random point on the unit sphere restricted to the given coordinates.
pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-6 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

/// Parameter families for [`sample_defect2_form`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormStratum {
    /// All parameters generic, `d > 0`.
    Generic,
    /// `d = 0`, which forces `c = 0` and `b = 1`.
    DZero,
    /// `h = 0`.
    Nilpotent,
    /// `h = 0` and `ceg = 0` (either `c = 0` or `g = 0`, chosen at random).
    NilpotentCegZero,
    /// `h = be = ceg = 0`.
    NilpotentBeZero,
    /// `c = d = 0`.
    HalfCaseI,
    /// `g = h = 0`.
    HalfCaseII,
    /// `c = f = g = 0`, `h > 0`, `0 < d < 1`.
    TwoCircles,
}

impl FormStratum {
    pub const ALL: [FormStratum; 8] = [
        FormStratum::Generic,
        FormStratum::DZero,
        FormStratum::Nilpotent,
        FormStratum::NilpotentCegZero,
        FormStratum::NilpotentBeZero,
        FormStratum::HalfCaseI,
        FormStratum::HalfCaseII,
        FormStratum::TwoCircles,
    ];
}

fn abs_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    unit_vector(n, rng).into_iter().map(f64::abs).collect()
}

/// Admissible [`Defect2Form`] from the given family. `(b, c, d)` is uniform on the
/// nonnegative octant of the sphere; `f = -ce/d` keeps the columns orthogonal before
/// `(e, f, g, h)` is rescaled. Samples with a nonzero parameter smaller than
/// [`FORM_MARGIN`] in magnitude are rejected, so every zero is structural.
pub fn sample_defect2_form<R: Rng + ?Sized>(stratum: FormStratum, rng: &mut R) -> Defect2Form {
    loop {
        let f = sample_defect2_form_raw(stratum, rng);
        let Defect2Form { b, c, d, e, f: ff, g, h } = f;
        if [b, c, d, e, ff, g, h].iter().all(|x| *x == 0.0 || x.abs() >= FORM_MARGIN) {
            return f;
        }
    }
}

/// Smallest magnitude of a nonzero parameter drawn by [`sample_defect2_form`].
pub const FORM_MARGIN: f64 = 0.05;

fn sample_defect2_form_raw<R: Rng + ?Sized>(stratum: FormStratum, rng: &mut R) -> Defect2Form {
    use FormStratum::*;
    let (mut b, mut c, mut d);
    match stratum {
        DZero | HalfCaseI => {
            b = 1.0;
            c = 0.0;
            d = 0.0;
        }
        TwoCircles => {
            d = rng.random_range(0.02..0.98);
            b = (1.0 - d * d).sqrt();
            c = 0.0;
        }
        NilpotentBeZero => {
            // be = 0 through b = 0
            let v = abs_unit(2, rng);
            b = 0.0;
            c = v[0];
            d = v[1];
        }
        _ => {
            let v = abs_unit(3, rng);
            b = v[0];
            c = v[1];
            d = v[2];
        }
    }
    let c_zero_ceg = stratum == NilpotentCegZero && rng.random_bool(0.5);
    if c_zero_ceg {
        let v = abs_unit(2, rng);
        b = v[0];
        c = 0.0;
        d = v[1];
    }
    let g_zero = matches!(stratum, HalfCaseII | TwoCircles | NilpotentBeZero) || (stratum == NilpotentCegZero && !c_zero_ceg);
    let h_zero = matches!(stratum, Nilpotent | NilpotentCegZero | NilpotentBeZero | HalfCaseII);
    let mut e: f64 = rng.sample::<f64, _>(StandardNormal).abs();
    let mut g: f64 = if g_zero { 0.0 } else { rng.sample(StandardNormal) };
    let mut h: f64 = if h_zero { 0.0 } else { rng.sample::<f64, _>(StandardNormal).abs() };
    let mut f: f64 = if d > 0.0 {
        -c * e / d
    } else {
        rng.sample::<f64, _>(StandardNormal).abs()
    };
    if stratum == TwoCircles {
        f = 0.0;
    }
    let nrm = (e * e + f * f + g * g + h * h).sqrt();
    e /= nrm;
    f /= nrm;
    g /= nrm;
    h /= nrm;
    Defect2Form { b, c, d, e, f, g, h }
}
