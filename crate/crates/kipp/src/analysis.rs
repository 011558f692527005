//! One-shot analysis of a matrix: partial-isometry structure, circles, disk question.

use kipp_core::criteria::{classify_rank3, EQUATION_TOL};
use kipp_core::kipp::{detect_circles_with, numerical_radius, DetectOptions, DiskClassification};
use kipp_core::linalg::{ComplexMatrix, LinalgError};
use kipp_core::pisom::{
    canonicalize_defect2, canonicalize_rank3, defect, project_to_partial_isometry, to_six_by_six, validate, PisomError,
};
use serde::Serialize;
use thiserror::Error;

/// Tolerance for accepting a matrix as a partial isometry without projection.
pub const VALIDATE_TOL: f64 = 1e-8;
/// Closed-form equations on projected four-digit data hold only to about this.
pub const PROJECTED_EQUATION_TOL: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("projection failed: {0}")]
    Projection(PisomError),
    #[error("numerical failure: {0:?}")]
    Linalg(LinalgError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleOut {
    pub center: [f64; 2],
    pub radius: f64,
    pub multiplicity: usize,
    pub degenerate: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormOut {
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

/// What the closed forms predict for a rank-three input.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedFormOut {
    pub defect: usize,
    pub form: Option<FormOut>,
    pub radii: Vec<f64>,
    pub disk: bool,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Analysis {
    pub label: Option<String>,
    pub n: usize,
    pub projected: bool,
    pub partial_isometry: bool,
    pub max_deviation: Option<f64>,
    pub rank: Option<usize>,
    pub defect: usize,
    pub closed_form: Option<ClosedFormOut>,
    pub circles: Vec<CircleOut>,
    pub disk: String,
    pub numerical_radius: f64,
}

fn disk_name(d: DiskClassification) -> &'static str {
    match d {
        DiskClassification::CircularDisk => "circular-disk",
        DiskClassification::NonDisk => "non-disk",
        DiskClassification::Undetermined => "undetermined",
    }
}

/// Analyzes `m`; with `project`, rounding is first repaired by projecting onto the
/// partial isometries and the looser tolerances for rounded data are used.
pub fn analyze(m: &ComplexMatrix, project: bool, label: Option<String>) -> Result<Analysis, AnalysisError> {
    let a = if project {
        project_to_partial_isometry(m).map_err(AnalysisError::Projection)?
    } else {
        m.clone()
    };
    let opts = if project {
        DetectOptions::rounded_input()
    } else {
        DetectOptions::default()
    };
    let pi = validate(&a, VALIDATE_TOL).ok();
    let closed_form = match &pi {
        Some(p) if p.rank() == 3 => rank3_closed_form(&a, project),
        _ => None,
    };
    let report = detect_circles_with(&a, &opts).map_err(AnalysisError::Linalg)?;
    let circles = report
        .circles
        .iter()
        .map(|c| CircleOut {
            center: [c.center.re, c.center.im],
            radius: c.radius,
            multiplicity: c.multiplicity,
            degenerate: c.degenerate,
            residual: c.residual,
        })
        .collect();
    Ok(Analysis {
        label,
        n: a.rows(),
        projected: project,
        partial_isometry: pi.is_some(),
        max_deviation: pi.as_ref().map(|p| p.max_deviation()),
        rank: pi.as_ref().map(|p| p.rank()),
        defect: defect(&a).unwrap_or(0),
        closed_form,
        circles,
        disk: disk_name(report.disk).to_string(),
        numerical_radius: report.numerical_radius.unwrap_or_else(|| numerical_radius(&a).value),
    })
}

fn rank3_closed_form(a: &ComplexMatrix, project: bool) -> Option<ClosedFormOut> {
    let six = to_six_by_six(a).ok()?;
    let pi = validate(&six, VALIDATE_TOL).ok()?;
    let tol = if project { PROJECTED_EQUATION_TOL } else { EQUATION_TOL };
    let c = classify_rank3(&pi, tol).ok()?;
    Some(ClosedFormOut {
        defect: c.defect,
        form: c.form.map(|f| FormOut {
            b: f.b,
            c: f.c,
            d: f.d,
            e: f.e,
            f: f.f,
            g: f.g,
            h: f.h,
        }),
        radii: c.circles.iter().map(|p| p.radius).collect(),
        disk: c.verdict.is_disk(),
        reason: format!("{:?}", c.verdict.reason),
    })
}

/// Fixed-point rendering with trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    let s = format!("{:.6}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn fmt_center(c: [f64; 2]) -> String {
    if c[1].abs() < 5e-7 {
        fmt_num(c[0])
    } else {
        format!("{}{}{}i", fmt_num(c[0]), if c[1] < 0.0 { "-" } else { "+" }, fmt_num(c[1].abs()))
    }
}

pub fn render_text(r: &Analysis) -> String {
    let mut out = String::new();
    if let Some(l) = &r.label {
        out += &format!("label: {}\n", l);
    }
    out += &format!("size {}{}\n", r.n, if r.projected { " (projected)" } else { "" });
    match (r.rank, r.max_deviation) {
        (Some(k), Some(dev)) => {
            out += &format!("partial isometry: rank {}, defect {}, deviation {:.1e}\n", k, r.defect, dev)
        }
        _ => out += &format!("not a partial isometry; defect {}\n", r.defect),
    }
    if let Some(cf) = &r.closed_form {
        if let Some(f) = &cf.form {
            out += &format!(
                "canonical form: b={} c={} d={} e={} f={} g={} h={}\n",
                fmt_num(f.b),
                fmt_num(f.c),
                fmt_num(f.d),
                fmt_num(f.e),
                fmt_num(f.f),
                fmt_num(f.g),
                fmt_num(f.h)
            );
        }
        let radii: Vec<String> = cf.radii.iter().map(|&x| fmt_num(x)).collect();
        out += &format!(
            "closed form: radii [{}]; {} ({})\n",
            radii.join(", "),
            if cf.disk { "disk" } else { "not a disk" },
            cf.reason
        );
    }
    if r.circles.is_empty() {
        out += "no circles\n";
    }
    for c in &r.circles {
        out += &format!(
            "circle center {} radius {}{}\n",
            fmt_center(c.center),
            fmt_num(c.radius),
            if c.multiplicity > 1 {
                format!(" (multiplicity {})", c.multiplicity)
            } else {
                String::new()
            }
        );
    }
    out += match r.disk.as_str() {
        "circular-disk" => "W(A) is a circular disk\n",
        "non-disk" => "W(A) is not a circular disk\n",
        _ => "W(A): disk question undetermined\n",
    };
    out += &format!("numerical radius {}\n", fmt_num(r.numerical_radius));
    out
}

/// Canonical parameters of a rank-three partial isometry.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Canonical {
    /// Defect at least two.
    Defect2 { defect: usize, form: FormOut },
    /// Defect at most one; complex entries as `[re, im]`.
    Rank3 {
        defect: usize,
        a: f64,
        b: f64,
        c: f64,
        v: f64,
        d: [f64; 2],
        e: [f64; 2],
        f: [f64; 2],
        lambda2: [f64; 2],
        lambda3: [f64; 2],
    },
}

#[derive(Debug, Error)]
pub enum CanonError {
    #[error("projection failed: {0}")]
    Projection(PisomError),
    #[error("not a partial isometry within {VALIDATE_TOL:e}: {0}")]
    NotPartialIsometry(PisomError),
    #[error("canonical forms need rank 3, got rank {0}")]
    Rank(usize),
    #[error("reduction failed: {0}")]
    Reduction(PisomError),
}

fn pair(z: kipp_core::linalg::C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn canonical(m: &ComplexMatrix, project: bool) -> Result<Canonical, CanonError> {
    let a = if project {
        project_to_partial_isometry(m).map_err(CanonError::Projection)?
    } else {
        m.clone()
    };
    let rank = validate(&a, VALIDATE_TOL).map_err(CanonError::NotPartialIsometry)?.rank();
    if rank != 3 {
        return Err(CanonError::Rank(rank));
    }
    let six = to_six_by_six(&a).map_err(CanonError::Reduction)?;
    let pi = validate(&six, VALIDATE_TOL).map_err(CanonError::NotPartialIsometry)?;
    let defect = defect(&six).map_err(CanonError::Reduction)?;
    if defect >= 2 {
        let f = canonicalize_defect2(&pi).map_err(CanonError::Reduction)?.form;
        return Ok(Canonical::Defect2 {
            defect,
            form: FormOut {
                b: f.b,
                c: f.c,
                d: f.d,
                e: f.e,
                f: f.f,
                g: f.g,
                h: f.h,
            },
        });
    }
    let f = canonicalize_rank3(&pi).map_err(CanonError::Reduction)?.form;
    Ok(Canonical::Rank3 {
        defect,
        a: f.a,
        b: f.b,
        c: f.c,
        v: f.v,
        d: pair(f.d),
        e: pair(f.e),
        f: pair(f.f),
        lambda2: pair(f.lambda2),
        lambda3: pair(f.lambda3),
    })
}

fn fmt_pair(z: [f64; 2]) -> String {
    fmt_center(z)
}

pub fn render_canonical(c: &Canonical) -> String {
    match c {
        Canonical::Defect2 { defect, form: f } => format!(
            "defect {}\nb={} c={} d={} e={} f={} g={} h={}\n",
            defect,
            fmt_num(f.b),
            fmt_num(f.c),
            fmt_num(f.d),
            fmt_num(f.e),
            fmt_num(f.f),
            fmt_num(f.g),
            fmt_num(f.h)
        ),
        Canonical::Rank3 {
            defect,
            a,
            b,
            c,
            v,
            d,
            e,
            f,
            lambda2,
            lambda3,
        } => format!(
            "defect {}\na={} b={} c={} v={}\nd={} e={} f={}\nlambda2={} lambda3={}\n",
            defect,
            fmt_num(*a),
            fmt_num(*b),
            fmt_num(*c),
            fmt_num(*v),
            fmt_pair(*d),
            fmt_pair(*e),
            fmt_pair(*f),
            fmt_pair(*lambda2),
            fmt_pair(*lambda3)
        ),
    }
}
