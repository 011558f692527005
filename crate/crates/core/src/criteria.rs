//! Closed-form circle and disk criteria for rank-three partial isometries of defect two.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::geom::Ellipse;
use crate::kipp::DiskClassification;
use crate::linalg::hermitian::hermitian_eigenvalues;
use crate::linalg::{cr, poly_real_roots, ComplexMatrix, RealPolynomial, C64};
use crate::pisom::{canonicalize_defect2, defect, Defect2Form, PartialIsometry, PisomError, STRUCTURAL_ZERO};

/// Default tolerance for the polynomial equations in the parameters.
pub const EQUATION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum CriteriaError {
    /// The operation needs `h != 0`.
    NilpotentForm,
    /// Neither `c = d = 0` nor `g = h = 0`.
    NoHalfCircle,
    Pisom(PisomError),
}

impl fmt::Display for CriteriaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CriteriaError::NilpotentForm => write!(f, "the form is nilpotent (h = 0)"),
            CriteriaError::NoHalfCircle => write!(f, "neither c = d = 0 nor g = h = 0"),
            CriteriaError::Pisom(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for CriteriaError {}

impl From<PisomError> for CriteriaError {
    fn from(e: PisomError) -> Self {
        CriteriaError::Pisom(e)
    }
}

#[inline]
fn is_zero(x: f64) -> bool {
    x.abs() < STRUCTURAL_ZERO
}

/// `P(lambda, theta) = -lambda p(lambda^2) cos(theta) + q(lambda^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PqPair {
    pub p: RealPolynomial,
    pub q: RealPolynomial,
}

impl PqPair {
    pub fn eval(&self, lambda: f64, theta: f64) -> f64 {
        let rho = lambda * lambda;
        -lambda * self.p.eval(rho) * theta.cos() + self.q.eval(rho)
    }
}

pub fn pq_from_form(form: &Defect2Form) -> PqPair {
    let Defect2Form { b, c, d: _, e, f: _, g, h } = *form;
    let p = RealPolynomial::new(vec![((b * b + c * c) * h - c * e * g) / 16.0, -h / 2.0, h]);
    let q = RealPolynomial::new(vec![
        -b * b * e * e / 64.0,
        (c * c + b * b + e * e + 1.0 - h * h) / 16.0,
        -(3.0 - h * h) / 4.0,
        1.0,
    ]);
    PqPair { p, q }
}

/// The cubic whose roots are the squared radii in the nilpotent case.
pub fn nilpotent_cubic(b: f64, c: f64, e: f64) -> RealPolynomial {
    RealPolynomial::new(vec![-b * b * e * e / 64.0, (b * b + c * c + e * e + 1.0) / 16.0, -0.75, 1.0])
}

/// A circle predicted by the closed forms, centered at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictedCircle {
    pub radius: f64,
    pub multiplicity: usize,
}

fn order(p: &RealPolynomial, x: f64) -> usize {
    if p.coeffs().iter().all(|c| is_zero(*c)) {
        usize::MAX
    } else {
        p.order_at(x, 1e-9)
    }
}

/// Circles of `C(A)` for a defect-two form: common roots of `p` and `q` in `[0, 1)`,
/// plus `{0}` when `be = 0`.
pub fn circles_defect2(form: &Defect2Form) -> Vec<PredictedCircle> {
    circles_defect2_with(form, EQUATION_TOL)
}

/// [`circles_defect2`] with `tol` on the plus- and minus-equations, as in
/// [`disk_classification_with`].
pub fn circles_defect2_with(form: &Defect2Form, tol: f64) -> Vec<PredictedCircle> {
    let pq = pq_from_form(form);
    let p_zero = is_zero(form.h) && is_zero(form.c * form.e * form.g);
    let mut rhos: Vec<f64> = Vec::new();
    if p_zero {
        if let Ok(roots) = poly_real_roots(&pq.q, 0.0, 1.0) {
            rhos.extend(roots.iter().map(|r| r.value).filter(|&r| r > 1e-12 && r < 1.0));
        }
    } else if !is_zero(form.h) {
        if let Ok(cc) = crith_conditions(form, tol) {
            if let XValue::Defined(x) = cc.x {
                for (rho, holds) in [((1.0 - x) / 4.0, cc.minus_holds), ((1.0 + x) / 4.0, cc.plus_holds)] {
                    if holds && rho > 1e-12 && rho < 1.0 {
                        rhos.push(rho);
                    }
                }
            }
        }
    }
    rhos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rhos.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let mut out = Vec::new();
    if is_zero(form.b * form.e) {
        // lambda divides q(lambda^2) twice per factor of rho, and lambda p once
        let mult = (2 * order(&pq.q, 0.0)).min(1 + 2 * order(&pq.p, 0.0).min(usize::MAX / 4));
        out.push(PredictedCircle {
            radius: 0.0,
            multiplicity: mult.max(1),
        });
    }
    for rho in rhos {
        let mult = order(&pq.q, rho).min(order(&pq.p, rho)).max(1);
        out.push(PredictedCircle {
            radius: rho.sqrt(),
            multiplicity: mult,
        });
    }
    out
}

/// `C_{1/2}` lies on `C(A)` exactly when `c = d = 0` or `g = h = 0`.
pub fn has_circle_half(form: &Defect2Form) -> bool {
    (is_zero(form.c) && is_zero(form.d)) || (is_zero(form.g) && is_zero(form.h))
}

/// `J_2 + A_{t,h}` splitting of a form with `C_{1/2}` on its curve.
#[derive(Clone, Debug)]
pub struct J2Reduction {
    pub t: f64,
    pub h: f64,
    /// `U^* A U = J_2 (+) A_{t,h}`.
    pub unitary: ComplexMatrix,
}

/// Splits off the `J_2` block. With `c = d = 0` a rotation in the `(1,2)` and `(4,5)`
/// coordinate pairs clears `f`; with `g = h = 0` the explicit unitary built from
/// `b, c, d, e, f` is used.
pub fn reduce_j2(form: &Defect2Form) -> Result<J2Reduction, CriteriaError> {
    let Defect2Form { b, c, d, e, f, g, h } = *form;
    if is_zero(c) && is_zero(d) {
        let s = (f * f + g * g).sqrt();
        let (cs, sn) = if s > 0.0 { (g / s, -f / s) } else { (1.0, 0.0) };
        let mut e0 = vec![cr(0.0); 6];
        let mut e1 = vec![cr(0.0); 6];
        let mut e3 = vec![cr(0.0); 6];
        let mut e4 = vec![cr(0.0); 6];
        e0[0] = cr(cs);
        e0[1] = cr(sn);
        e1[0] = cr(-sn);
        e1[1] = cr(cs);
        e3[3] = cr(cs);
        e3[4] = cr(sn);
        e4[3] = cr(-sn);
        e4[4] = cr(cs);
        let mut e2 = vec![cr(0.0); 6];
        e2[2] = cr(1.0);
        let mut e5 = vec![cr(0.0); 6];
        e5[5] = cr(1.0);
        let unitary = ComplexMatrix::from_columns(6, &[e0, e3, e1, e2, e4, e5]);
        return Ok(J2Reduction { t: b * e, h, unitary });
    }
    if is_zero(g) && is_zero(h) {
        let s = (d * d + f * f).sqrt();
        let rows: [[f64; 6]; 6] = [
            [0.0, 0.0, s, 0.0, 0.0, 0.0],
            [b * f, 0.0, 0.0, d * e - c * f, 0.0, 0.0],
            [c * f - d * e, 0.0, 0.0, b * f, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, s, 0.0],
            [0.0, f, 0.0, 0.0, 0.0, d],
            [0.0, -d, 0.0, 0.0, 0.0, f],
        ];
        let unitary = ComplexMatrix::from_fn(6, 6, |i, j| cr(rows[i][j] / s));
        return Ok(J2Reduction {
            t: b * e,
            h: 0.0,
            unitary,
        });
    }
    Err(CriteriaError::NoHalfCircle)
}

/// `x = sqrt(d^2 + ceg/h)`, when the radicand is nonnegative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum XValue {
    Defined(f64),
    Undefined,
}

impl XValue {
    pub fn value(self) -> Option<f64> {
        match self {
            XValue::Defined(x) => Some(x),
            XValue::Undefined => None,
        }
    }
}

fn x_value_unchecked(form: &Defect2Form) -> XValue {
    let r = form.d * form.d + form.c * form.e * form.g / form.h;
    if r >= 0.0 {
        XValue::Defined(r.sqrt())
    } else if r > -1e-12 {
        XValue::Defined(0.0)
    } else {
        XValue::Undefined
    }
}

pub fn x_value(form: &Defect2Form) -> Result<XValue, CriteriaError> {
    if is_zero(form.h) {
        return Err(CriteriaError::NilpotentForm);
    }
    Ok(x_value_unchecked(form))
}

/// The two candidate circle equations for `h != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrithConditions {
    pub x: XValue,
    /// `cegh - d^2 g^2 + (e^2 + h^2 + ceg/h - 1) x`.
    pub plus_lhs: f64,
    pub minus_lhs: f64,
    pub plus_holds: bool,
    pub minus_holds: bool,
    pub r_plus: Option<f64>,
    pub r_minus: Option<f64>,
}

/// Evaluates both circle equations; `tol` bounds the absolute residual.
pub fn crith_conditions(form: &Defect2Form, tol: f64) -> Result<CrithConditions, CriteriaError> {
    let xv = x_value(form)?;
    let Defect2Form { c, d, e, g, h, .. } = *form;
    let Some(x) = xv.value() else {
        return Ok(CrithConditions {
            x: xv,
            plus_lhs: f64::NAN,
            minus_lhs: f64::NAN,
            plus_holds: false,
            minus_holds: false,
            r_plus: None,
            r_minus: None,
        });
    };
    let base = c * e * g * h - d * d * g * g;
    let k = e * e + h * h + c * e * g / h - 1.0;
    let plus_lhs = base + k * x;
    let minus_lhs = base - k * x;
    let plus_holds = plus_lhs.abs() <= tol && x <= 3.0;
    let minus_holds = minus_lhs.abs() <= tol && x <= 1.0;
    Ok(CrithConditions {
        x: xv,
        plus_lhs,
        minus_lhs,
        plus_holds,
        minus_holds,
        r_plus: plus_holds.then(|| (1.0 + x).sqrt() / 2.0),
        r_minus: minus_holds.then(|| (1.0 - x).max(0.0).sqrt() / 2.0),
    })
}

/// Two non-degenerate circles other than `C_{1/2}` occur exactly when
/// `c = f = g = 0` and `d` is neither 0 nor 1.
pub fn two_circles_classification(form: &Defect2Form) -> bool {
    !is_zero(form.h)
        && is_zero(form.c)
        && is_zero(form.f)
        && is_zero(form.g)
        && !is_zero(form.d)
        && !is_zero(form.d - 1.0)
}

/// The ellipse with foci `0, h` and major axis of length one.
pub fn focal_ellipse(h: f64) -> Ellipse {
    Ellipse {
        center: C64::new(h / 2.0, 0.0),
        semi_major: 0.5,
        semi_minor: (1.0 - h * h).max(0.0).sqrt() / 2.0,
        foci: (C64::new(0.0, 0.0), C64::new(h, 0.0)),
    }
}

/// Which closed-form rule decided a disk question.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskReason {
    /// Nilpotent with `ceg = 0`: the disk bounded by the largest of three circles.
    NilpotentThreeCircles,
    /// Nilpotent with `ceg != 0`: no circle at all.
    NilpotentNoCircle,
    /// `C_{1/2}` case: disk iff nilpotent.
    HalfCircle,
    /// `c = g = 0`: disk iff `d >= 2h + h^2`.
    TwoCirclesThreshold,
    /// `cdefgh != 0`: plus-equation together with the derivative inequality.
    SingleCircle,
    /// Remaining `cg = 0` cases: no circle besides `C_{1/2}`.
    NoCircle,
    /// Zero is at most a simple Jordan chain.
    LowDefect,
    /// The coupling could not be made real, which rules out circles.
    ComplexCoupling,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskVerdict {
    pub classification: DiskClassification,
    pub reason: DiskReason,
    /// Radius of the bounding circle when the range is a disk.
    pub radius: Option<f64>,
    /// `lhs - rhs` of the derivative inequality, in the `cdefgh != 0` case.
    pub margin: Option<f64>,
}

impl DiskVerdict {
    pub fn is_disk(&self) -> bool {
        self.classification == DiskClassification::CircularDisk
    }

    fn new(disk: bool, reason: DiskReason, radius: Option<f64>) -> Self {
        Self {
            classification: if disk {
                DiskClassification::CircularDisk
            } else {
                DiskClassification::NonDisk
            },
            reason,
            radius: if disk { radius } else { None },
            margin: None,
        }
    }
}

/// `3x^2 + 2h^2 x + h^2 + e^2 - d^2 - 1 - 4hx sqrt(1+x)`.
pub fn derivative_margin(form: &Defect2Form, x: f64) -> f64 {
    let Defect2Form { d, e, h, .. } = *form;
    3.0 * x * x + 2.0 * h * h * x + h * h + e * e - d * d - 1.0 - 4.0 * h * x * (1.0 + x).sqrt()
}

/// Closed-form disk classification with an explicit equation tolerance.
pub fn disk_classification_with(form: &Defect2Form, tol: f64) -> DiskVerdict {
    let Defect2Form { c, d, e, f, g, h, .. } = *form;
    if is_zero(h) {
        if is_zero(c * e * g) {
            let r3 = circles_defect2(form).iter().map(|c| c.radius).fold(0.0, f64::max);
            return DiskVerdict::new(true, DiskReason::NilpotentThreeCircles, Some(r3));
        }
        return DiskVerdict::new(false, DiskReason::NilpotentNoCircle, None);
    }
    if has_circle_half(form) {
        return DiskVerdict::new(false, DiskReason::HalfCircle, None);
    }
    if is_zero(c) && is_zero(g) {
        let disk = d >= 2.0 * h + h * h;
        return DiskVerdict::new(disk, DiskReason::TwoCirclesThreshold, Some((1.0 + d).sqrt() / 2.0));
    }
    if [c, d, e, f, g].iter().all(|v| !is_zero(*v)) {
        let Ok(cc) = crith_conditions(form, tol) else {
            return DiskVerdict::new(false, DiskReason::SingleCircle, None);
        };
        if !cc.plus_holds {
            return DiskVerdict::new(false, DiskReason::SingleCircle, None);
        }
        let x = cc.x.value().unwrap_or(0.0);
        let margin = derivative_margin(form, x);
        let mut v = DiskVerdict::new(margin > 0.0, DiskReason::SingleCircle, cc.r_plus);
        v.margin = Some(margin);
        return v;
    }
    DiskVerdict::new(false, DiskReason::NoCircle, None)
}

pub fn disk_classification(form: &Defect2Form) -> DiskVerdict {
    disk_classification_with(form, EQUATION_TOL)
}

/// Classification of an arbitrary rank-three `6 x 6` partial isometry.
#[derive(Clone, Debug)]
pub struct Rank3Classification {
    pub defect: usize,
    pub form: Option<Defect2Form>,
    pub circles: Vec<PredictedCircle>,
    pub verdict: DiskVerdict,
}

/// Defect 0: no circles. Defect 1: at most `C_{1/2}`, never a disk. Defect 2 or more:
/// reduce to [`Defect2Form`] and apply the closed forms.
pub fn classify_rank3(pi: &PartialIsometry, tol: f64) -> Result<Rank3Classification, CriteriaError> {
    let def = defect(pi.matrix())?;
    if def < 2 {
        return Ok(Rank3Classification {
            defect: def,
            form: None,
            circles: Vec::new(),
            verdict: DiskVerdict::new(false, DiskReason::LowDefect, None),
        });
    }
    match canonicalize_defect2(pi) {
        Ok(red) => Ok(Rank3Classification {
            defect: def,
            form: Some(red.form),
            circles: circles_defect2_with(&red.form, tol),
            verdict: disk_classification_with(&red.form, tol),
        }),
        Err(PisomError::ComplexCoupling { .. }) => Ok(Rank3Classification {
            defect: def,
            form: None,
            circles: Vec::new(),
            verdict: DiskVerdict::new(false, DiskReason::ComplexCoupling, None),
        }),
        Err(e) => Err(e.into()),
    }
}

/// Shape of `W(A)` when `C_{1/2}` is on the curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HalfShape {
    /// `h = 0`: disk of radius `sqrt(1 + sqrt(1 - b^2 e^2)) / 2`.
    Disk { radius: f64 },
    /// `h = 1`: convex hull of `C_{1/2}` and the point 1.
    ConeOne,
    /// `e^2 + h^2 = 1`: convex hull of `C_{1/2}` and the focal ellipse.
    ConeEllipse,
    /// `e = 0`: the range of the three-by-three block with entries `1, sqrt(1-h^2), h`.
    OvularCarrier,
    /// `e, h != 0`, `e^2 + h^2 != 1`: the range of `A_{e,h}`.
    AehCarrier,
}

pub fn nrc_half_shape(form: &Defect2Form) -> Result<HalfShape, CriteriaError> {
    if !has_circle_half(form) {
        return Err(CriteriaError::NoHalfCircle);
    }
    let Defect2Form { b, e, h, .. } = *form;
    if is_zero(h) {
        let t = b * e;
        return Ok(HalfShape::Disk {
            radius: (1.0 + (1.0 - t * t).max(0.0).sqrt()).sqrt() / 2.0,
        });
    }
    if is_zero(h - 1.0) {
        return Ok(HalfShape::ConeOne);
    }
    if is_zero(e * e + h * h - 1.0) {
        return Ok(HalfShape::ConeEllipse);
    }
    if is_zero(e) {
        return Ok(HalfShape::OvularCarrier);
    }
    Ok(HalfShape::AehCarrier)
}

/// Radii `sqrt(1 -+ sqrt(1 - t^2)) / 2` of the two circles of `C(A_{t,0})`.
pub fn ath_radii(t: f64) -> (f64, f64) {
    let k = (1.0 - t * t).max(0.0).sqrt();
    ((1.0 - k).max(0.0).sqrt() / 2.0, (1.0 + k).sqrt() / 2.0)
}

/// Nilpotent case with `be = 0`: radii `0` and `sqrt((3 -+ sqrt(5 - 4(b^2+e^2+c^2)))/2) / 2`.
pub fn nilpotent_be0_radii(b: f64, c: f64, e: f64) -> [f64; 3] {
    let s = (5.0 - 4.0 * (b * b + e * e + c * c)).max(0.0).sqrt();
    [0.0, ((3.0 - s) / 2.0).sqrt() / 2.0, ((3.0 + s) / 2.0).sqrt() / 2.0]
}

/// Residuals of the two identities of nilpotent forms:
/// `b^2+c^2+e^2+d^2g^2 = 1+b^2e^2` and, when `g = 0`, `b^2e^2+d^2+f^2 = 1`.
pub fn nilpotent_identities(form: &Defect2Form) -> (f64, Option<f64>) {
    let Defect2Form { b, c, d, e, f, g, .. } = *form;
    let r1 = b * b + c * c + e * e + d * d * g * g - 1.0 - b * b * e * e;
    let r2 = is_zero(g).then_some(b * b * e * e + d * d + f * f - 1.0);
    (r1, r2)
}

/// Eigenvalues of the leading five-by-five block of `A + A^T - I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interlacing {
    /// `-1, -1 -+ sqrt(1+d), -1 -+ sqrt(1-d)`, ascending.
    pub closed_form: [f64; 5],
    pub computed: [f64; 5],
    pub positive: usize,
    pub negative: usize,
    pub max_error: f64,
}

pub fn m5_matrix(form: &Defect2Form) -> ComplexMatrix {
    let a = form.matrix();
    let m = &(&a + &a.transpose()) - &ComplexMatrix::identity(6);
    m.submatrix(0, 0, 5, 5)
}

pub fn interlacing_bound_check(form: &Defect2Form) -> Interlacing {
    let d = form.d;
    let sp = (1.0 + d).sqrt();
    let sm = (1.0 - d).max(0.0).sqrt();
    let mut cf = [-1.0, -1.0 - sp, -1.0 + sp, -1.0 - sm, -1.0 + sm];
    cf.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ev = hermitian_eigenvalues(&m5_matrix(form)).expect("symmetric");
    let mut computed = [0.0; 5];
    computed.copy_from_slice(&ev);
    let max_error = cf.iter().zip(&computed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Interlacing {
        closed_form: cf,
        computed,
        positive: cf.iter().filter(|&&v| v > 1e-12).count(),
        negative: cf.iter().filter(|&&v| v < -1e-12).count(),
        max_error,
    }
}

fn form_from_direction(b: f64, c: f64, d: f64, gp: f64, hp: f64) -> Defect2Form {
    // (e, f, g, h) proportional to (1, -c/d, gp, hp)
    let f0 = -c / d;
    let n = (1.0 + f0 * f0 + gp * gp + hp * hp).sqrt();
    Defect2Form {
        b,
        c,
        d,
        e: 1.0 / n,
        f: f0 / n,
        g: gp / n,
        h: hp / n,
    }
}

fn plus_lhs(form: &Defect2Form) -> Option<f64> {
    let cc = crith_conditions(form, 0.0).ok()?;
    let x = cc.x.value()?;
    (x <= 3.0).then_some(cc.plus_lhs)
}

/// Forms with the given `b, c, d` (all positive, `b^2 + c^2 + d^2 = 1`) on which the
/// plus-equation holds exactly. `(e, f, g, h)` is taken proportional to
/// `(1, -c/d, g', h')`; the roots in `g'` are bracketed on a grid of `steps` points in
/// `[-g_max, g_max]` and refined by bisection.
pub fn solve_crith_plus(b: f64, c: f64, d: f64, hp: f64, g_max: f64, steps: usize) -> Vec<Defect2Form> {
    let eval = |gp: f64| plus_lhs(&form_from_direction(b, c, d, gp, hp));
    let mut out = Vec::new();
    let grid: Vec<f64> = (0..=steps).map(|i| -g_max + 2.0 * g_max * i as f64 / steps as f64).collect();
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (Some(mut flo), Some(fhi)) = (eval(lo), eval(hi)) else {
            continue;
        };
        if flo == 0.0 {
            out.push(form_from_direction(b, c, d, lo, hp));
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        let mut ok = true;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let Some(fm) = eval(mid) else {
                ok = false;
                break;
            };
            if fm == 0.0 || hi - lo < 1e-16 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        if ok {
            out.push(form_from_direction(b, c, d, 0.5 * (lo + hi), hp));
        }
    }
    out
}
