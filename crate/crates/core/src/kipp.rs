//! Kippenhahn polynomials and curves, numerical radius, and circle detection.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::hermitian::{hermitian_eigen, hermitian_eigenvalues, lambda_max};
use crate::linalg::svd::staircase;
use crate::linalg::{cr, eigenvalues, sample_angles, trig_interpolate, ComplexMatrix, LinalgError, TrigPolynomial, C64};

/// Relative residual below which a circle is accepted.
pub const CIRCLE_TOL: f64 = 1e-7;
/// `w(A - aI) - r` below which `W(A)` counts as the disk bounded by `C_{a,r}`.
pub const DISK_TOL: f64 = 1e-7;
/// Upper end of the gray zone in which the disk question is left undetermined.
pub const DISK_GRAY: f64 = 1e-5;
/// Eigenvalues this close are merged into one center candidate.
pub const CLUSTER_TOL: f64 = 1e-6;
/// Constant-term threshold for divisibility of the Kippenhahn polynomial by `lambda`.
pub const POINT_CIRCLE_TOL: f64 = 1e-9;

/// Generic angles at which the radius candidates are read off.
const PROBE_ANGLES: [f64; 2] = [0.371_923_5, 2.051_861_7];

/// `det(Re(e^{i theta} A) - lambda I)` as a polynomial in `lambda` with trigonometric
/// coefficients. The `lambda^a` coefficient keeps harmonics `|k| <= n - a`.
pub fn kippenhahn_polynomial(a: &ComplexMatrix) -> TrigPolynomial {
    let n = a.rows();
    let m = 2 * n + 1;
    let thetas = sample_angles(m);
    let mut samples = vec![vec![0.0; m]; n + 1];
    for (j, &t) in thetas.iter().enumerate() {
        let mu = hermitian_eigenvalues(&a.hermitian_part(t)).expect("Hermitian part is Hermitian");
        // prod (mu_i - lambda), ascending powers of lambda
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = 1.0;
        for (deg, &x) in mu.iter().enumerate() {
            for k in (0..=deg + 1).rev() {
                let prev = if k > 0 { coeffs[k - 1] } else { 0.0 };
                coeffs[k] = x * coeffs[k] - prev;
            }
        }
        for (row, c) in samples.iter_mut().zip(coeffs) {
            row[j] = c;
        }
    }
    let rows = samples
        .iter()
        .enumerate()
        .map(|(deg, s)| {
            let mut c = trig_interpolate(s, n);
            for (idx, z) in c.iter_mut().enumerate() {
                if idx.abs_diff(n) > n - deg {
                    *z = cr(0.0);
                }
            }
            c
        })
        .collect();
    TrigPolynomial::new(n, rows)
}

/// Typical eigenvalue size of `Re(e^{i theta} A)`, used as the residual scale.
fn reference_size(a: &ComplexMatrix) -> f64 {
    let n = a.rows().max(1) as f64;
    (a.frobenius_norm() / n.sqrt()).max(1e-300)
}

/// Relative size of the harmonics of `P(+-r, .)`. Zero means `lambda^2 - r^2`
/// (or `lambda` when `r = 0`) divides `P`.
pub fn circle_residual(p: &TrigPolynomial, r: f64, size: f64) -> f64 {
    let scale = p.abs_scale(r.abs().max(size)).max(1e-300);
    if r == 0.0 {
        let km = p.k_max() as i64;
        let m = (-km..=km).map(|k| p.coeff(0, k).norm()).fold(0.0, f64::max);
        return m / scale;
    }
    p.max_harmonic(r).max(p.max_harmonic(-r)) / scale
}

/// Residual of the circle `C_{center, r}` being a component of `C(A)`.
pub fn contains_circle(a: &ComplexMatrix, center: C64, r: f64) -> f64 {
    let x = a.shift(center);
    circle_residual(&kippenhahn_polynomial(&x), r, reference_size(&x))
}

/// True iff `lambda` divides the Kippenhahn polynomial, i.e. `{0}` lies on `C(A)`
/// for every direction.
pub fn contains_point_circle(a: &ComplexMatrix) -> bool {
    if a.rows() == 0 {
        return false;
    }
    let p = kippenhahn_polynomial(a);
    let km = p.k_max() as i64;
    let m = (-km..=km).map(|k| p.coeff(0, k).norm()).fold(0.0, f64::max);
    let scale = p.abs_scale(reference_size(a)).max(1.0);
    m <= POINT_CIRCLE_TOL * scale
}

/// One point of the envelope: branch `branch` (ascending order) at angle `theta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub theta: f64,
    pub branch: usize,
    pub lambda: f64,
    /// `<A u, u>` for the unit eigenvector `u` of `Re(e^{i theta} A)`; it lies on
    /// `e^{-i theta}(lambda + iR)`.
    pub point: C64,
}

/// Samples `C(A)` at `steps` equispaced angles; branch labels are per-angle sorted order.
pub fn trace_curve(a: &ComplexMatrix, steps: usize) -> Vec<CurveSample> {
    let n = a.rows();
    let mut out = Vec::with_capacity(steps * n);
    for t in sample_angles(steps) {
        let eig = hermitian_eigen(&a.hermitian_part(t)).expect("Hermitian part is Hermitian");
        for (j, &lambda) in eig.values.iter().enumerate() {
            let u = eig.vectors.column(j);
            let au = a.mul_vec(&u);
            let point: C64 = u.iter().zip(&au).map(|(x, y)| x.conj() * y).sum();
            out.push(CurveSample {
                theta: t,
                branch: j,
                lambda,
                point,
            });
        }
    }
    out
}

/// Numerical radius with the directions attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericalRadius {
    pub value: f64,
    pub argmax_thetas: Vec<f64>,
}

const NR_GRID: usize = 256;

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn wrap_angle(t: f64) -> f64 {
    let mut t = t % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// `w(A) = max_theta lambda_max(Re(e^{i theta} A))`: 256-point grid, then golden-section
/// refinement of every local maximum that could still beat the grid maximum.
/// A flat profile (disk centered at the origin) reports every grid angle.
pub fn numerical_radius(a: &ComplexMatrix) -> NumericalRadius {
    if a.rows() == 0 {
        return NumericalRadius {
            value: 0.0,
            argmax_thetas: Vec::new(),
        };
    }
    let th = sample_angles(NR_GRID);
    let vals: Vec<f64> = th.iter().map(|&t| lambda_max(a, t)).collect();
    let gmax = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let gmin = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let norm = a.frobenius_norm();
    if gmax - gmin <= 1e-12 * gmax.abs().max(1.0) {
        return NumericalRadius {
            value: gmax,
            argmax_thetas: th,
        };
    }
    let step = 2.0 * PI / NR_GRID as f64;
    // lambda_max has curvature bounded by ||A||, so a peak between grid points exceeds
    // the neighbouring samples by at most step^2 ||A||
    let slack = step * step * norm;
    let mut refined: Vec<(f64, f64)> = Vec::new();
    for i in 0..NR_GRID {
        let prev = vals[(i + NR_GRID - 1) % NR_GRID];
        let next = vals[(i + 1) % NR_GRID];
        if vals[i] >= prev && vals[i] >= next && vals[i] >= gmax - slack {
            let (t, v) = golden_max(|t| lambda_max(a, t), th[i] - step, th[i] + step, 1e-10);
            refined.push((wrap_angle(t), v.max(vals[i])));
        }
    }
    let value = refined.iter().map(|r| r.1).fold(gmax, f64::max);
    let mut argmax: Vec<f64> = refined
        .iter()
        .filter(|r| r.1 >= value - 1e-8)
        .map(|r| r.0)
        .collect();
    argmax.sort_by(|x, y| x.partial_cmp(y).unwrap());
    argmax.dedup_by(|x, y| (*x - *y).abs() < 1e-6);
    NumericalRadius {
        value,
        argmax_thetas: argmax,
    }
}

/// Where a reported circle comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleSource {
    ClosedForm,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskClassification {
    CircularDisk,
    NonDisk,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: C64,
    pub radius: f64,
    pub degenerate: bool,
    /// Power of `lambda^2 - r^2` (of `lambda` when degenerate) dividing the polynomial,
    /// estimated from eigenvalue counts at two generic angles.
    pub multiplicity: usize,
    pub residual: f64,
    pub source: CircleSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleReport {
    pub circles: Vec<Circle>,
    pub disk: DiskClassification,
    /// `w(A)`, computed only when a non-degenerate circle was found.
    pub numerical_radius: Option<f64>,
    /// Smallest `w(A - aI) - r` over the non-degenerate circles.
    pub disk_gap: Option<f64>,
}

impl CircleReport {
    pub fn radii(&self) -> Vec<f64> {
        self.circles.iter().map(|c| c.radius).collect()
    }

    pub fn nondegenerate(&self) -> impl Iterator<Item = &Circle> {
        self.circles.iter().filter(|c| !c.degenerate)
    }
}

/// Tolerances of [`detect_circles`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectOptions {
    pub residual_tol: f64,
    pub disk_tol: f64,
    pub gray_zone: f64,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            residual_tol: CIRCLE_TOL,
            disk_tol: DISK_TOL,
            gray_zone: DISK_GRAY,
        }
    }
}

impl DetectOptions {
    /// Tolerances for matrices whose entries were rounded to four digits: such data
    /// meet the circle conditions only to about `1e-6`.
    pub fn rounded_input() -> Self {
        Self {
            residual_tol: 1e-5,
            disk_tol: 1e-5,
            gray_zone: 1e-4,
        }
    }
}

fn cluster_means(eigs: &[C64], tol: f64) -> Vec<C64> {
    let n = eigs.len();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (eigs[i] - eigs[j]).norm() <= tol {
                let (li, lj) = (label[i], label[j]);
                for l in label.iter_mut() {
                    if *l == li {
                        *l = lj;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[label[i]] {
            continue;
        }
        seen[label[i]] = true;
        let members: Vec<C64> = (0..n).filter(|&j| label[j] == label[i]).map(|j| eigs[j]).collect();
        out.push(members.iter().sum::<C64>() / members.len() as f64);
    }
    out
}

/// Defective eigenvalues of `A`: cluster means at growing tolerances, kept when the
/// staircase of `A - mu I` shows a Jordan chain. A defective mean at a coarser tolerance
/// replaces the finer candidates of its cluster, since a perturbed Jordan block splits
/// into several eigenvalues whose mean is the accurate center.
pub fn defective_eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>, LinalgError> {
    let eigs = eigenvalues(a)?;
    let s = a.max_abs().max(1.0);
    let mut out: Vec<C64> = Vec::new();
    for tier in [CLUSTER_TOL, 1e-5, 1e-4, 1e-3] {
        for mu in cluster_means(&eigs, tier * s) {
            let known = out.iter().any(|z| (z - mu).norm() <= CLUSTER_TOL * s * 1e-3);
            if known || staircase(&a.shift(mu), 1e-8 * s).defect() > 0 {
                out.retain(|z| (z - mu).norm() > tier * s);
                out.push(mu);
            }
        }
    }
    out.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    Ok(out)
}

fn count_near(values: &[f64], r: f64, eta: f64) -> usize {
    values.iter().filter(|&&v| (v - r).abs() <= eta).count()
}

/// Circles of `C(A)` centered at one point.
pub fn circles_at(a: &ComplexMatrix, center: C64, opts: &DetectOptions) -> Vec<Circle> {
    let x = a.shift(center);
    let p = kippenhahn_polynomial(&x);
    let size = reference_size(&x);
    let probes: Vec<Vec<f64>> = PROBE_ANGLES
        .iter()
        .map(|&t| hermitian_eigenvalues(&x.hermitian_part(t)).expect("Hermitian part is Hermitian"))
        .collect();
    let eta = (10.0 * opts.residual_tol).max(1e-6) * size.max(1e-3);
    let zero = 1e-9 * size;
    let mut cands: Vec<f64> = probes[0].iter().map(|v| v.abs()).filter(|&r| r > zero).collect();
    cands.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cands.dedup_by(|x, y| (*x - *y).abs() <= eta);
    let mut out = Vec::new();
    let res0 = circle_residual(&p, 0.0, size);
    if res0 <= opts.residual_tol {
        let mult = probes.iter().map(|v| count_near(v, 0.0, eta)).min().unwrap_or(0).max(1);
        out.push(Circle {
            center,
            radius: 0.0,
            degenerate: true,
            multiplicity: mult,
            residual: res0,
            source: CircleSource::Oracle,
        });
    }
    for r in cands {
        let res = circle_residual(&p, r, size);
        if res > opts.residual_tol {
            continue;
        }
        let mult = probes
            .iter()
            .map(|v| count_near(v, r, eta).min(count_near(v, -r, eta)))
            .min()
            .unwrap_or(0)
            .max(1);
        out.push(Circle {
            center,
            radius: r,
            degenerate: false,
            multiplicity: mult,
            residual: res,
            source: CircleSource::Oracle,
        });
    }
    out
}

/// Oracle detection of all circular components of `C(A)`: centers are the defective
/// eigenvalues, radii are accepted when `lambda^2 - r^2` divides `P_{A - aI}`.
pub fn detect_circles_with(a: &ComplexMatrix, opts: &DetectOptions) -> Result<CircleReport, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let mut circles = Vec::new();
    for mu in defective_eigenvalues(a)? {
        circles.extend(circles_at(a, mu, opts));
    }
    let w = if circles.iter().any(|c| !c.degenerate) {
        Some(numerical_radius(a).value)
    } else {
        None
    };
    let mut disk = DiskClassification::NonDisk;
    let mut gap: Option<f64> = None;
    for c in circles.iter().filter(|c| !c.degenerate) {
        let wc = if let (Some(w), true) = (w, c.center.norm() == 0.0) {
            w
        } else {
            numerical_radius(&a.shift(c.center)).value
        };
        let d = wc - c.radius;
        gap = Some(gap.map_or(d, |g: f64| g.min(d)));
        if d.abs() <= opts.disk_tol {
            disk = DiskClassification::CircularDisk;
        } else if d < opts.gray_zone && disk != DiskClassification::CircularDisk {
            disk = DiskClassification::Undetermined;
        }
    }
    Ok(CircleReport {
        circles,
        disk,
        numerical_radius: w,
        disk_gap: gap,
    })
}

/// [`detect_circles_with`] at the default tolerances.
pub fn detect_circles(a: &ComplexMatrix) -> Result<CircleReport, LinalgError> {
    detect_circles_with(a, &DetectOptions::default())
}
