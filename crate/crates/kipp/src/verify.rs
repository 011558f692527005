//! Seeded checks of the closed-form statements against the numerical curve oracle.
//!
//! Every check draws inputs from its hypothesis class, evaluates the closed form and the
//! oracle, and records a residual. A check owns its own ChaCha stream, so reports do not
//! depend on which other checks run.

use std::collections::BTreeMap;

use kipp_core::criteria::*;
use kipp_core::kipp::{
    contains_circle, contains_point_circle, detect_circles, numerical_radius, CircleReport, DiskClassification,
};
use kipp_core::linalg::{cis, cr, ComplexMatrix, C64};
use kipp_core::matpoly::{
    assemble_from_c, check_flipped_kernel, check_kernel_intersection_c, even_witness, kernel_intersection, odd_witness, witness_family,
};
use kipp_core::pisom::{ath_matrix, commutant_dimension, defect, random_rank3, Defect2Form};
use kipp_core::sample::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::format::MatrixDocument;
use crate::golden::{decompose, foci_error};

pub const DEFAULT_TRIALS: usize = 100;
pub const MAX_WITNESSES: usize = 5;
/// Rejection sampling gives up after this many draws per requested trial.
pub const MAX_DRAWS_PER_TRIAL: usize = 200;

/// Agreement tolerance for radii and centers.
pub const RADIUS_TOL: f64 = 1e-6;
/// Residual below which a circle counts as contained in the curve.
pub const CONTAINS_TOL: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub residual: f64,
    pub note: String,
    pub matrix: MatrixDocument,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoremReport {
    pub theorem_id: String,
    pub description: String,
    /// Exploratory checks concern open questions and never fail the suite.
    pub exploratory: bool,
    pub trials: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub witnesses: Vec<Witness>,
    pub counters: BTreeMap<String, u64>,
    pub acceptance_rate: f64,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.exploratory || self.failures == 0
    }
}

/// Per-check state: random stream, trial bookkeeping and the report being filled.
struct Ctx {
    rng: ChaCha8Rng,
    target: usize,
    drawn: usize,
    report: TheoremReport,
}

impl Ctx {
    fn more(&self) -> bool {
        self.report.trials < self.target && self.drawn < self.target * MAX_DRAWS_PER_TRIAL
    }

    fn draw(&mut self) {
        self.drawn += 1;
    }

    fn count(&mut self, key: &str) {
        *self.report.counters.entry(key.to_string()).or_insert(0) += 1;
    }

    /// Records one accepted trial.
    fn record(&mut self, residual: f64, ok: bool, a: &ComplexMatrix, note: impl FnOnce() -> String) {
        let trial = self.report.trials;
        self.report.trials += 1;
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        if residual > self.report.worst_residual {
            self.report.worst_residual = residual;
        }
        if !ok {
            self.report.failures += 1;
            if self.report.witnesses.len() < MAX_WITNESSES {
                self.report.witnesses.push(Witness {
                    trial,
                    residual,
                    note: note(),
                    matrix: MatrixDocument::from_matrix(a),
                });
            }
        }
    }

    fn form(&mut self, strata: &[FormStratum]) -> Defect2Form {
        let st = strata[self.rng.random_range(0..strata.len())];
        sample_defect2_form(st, &mut self.rng)
    }
}

struct Check {
    id: &'static str,
    description: &'static str,
    exploratory: bool,
    run: fn(&mut Ctx),
}

const CHECKS: [Check; 22] = [
    Check {
        id: "gww-rank3",
        description: "circles on the curve of a rank-three partial isometry are centered at the origin",
        exploratory: false,
        run: gww_rank3,
    },
    Check {
        id: "defect1-half-circle",
        description: "defect one: the only possible circle is C_{1/2}, present iff ker C meets ker C^*, never a disk",
        exploratory: false,
        run: defect1_half_circle,
    },
    Check {
        id: "point-circle",
        description: "the degenerate circle {0} lies on the curve iff be = 0",
        exploratory: false,
        run: point_circle,
    },
    Check {
        id: "nilpotent-circles",
        description: "nilpotent forms: circles iff ceg = 0, at the square roots of the cubic's roots",
        exploratory: false,
        run: nilpotent_circles,
    },
    Check {
        id: "nilpotent-radii",
        description: "nilpotent forms with ceg = 0: r1 <= 1/2 <= r3",
        exploratory: false,
        run: nilpotent_radii,
    },
    Check {
        id: "nilpotent-be0-radii",
        description: "nilpotent forms with be = 0: radii 0 and sqrt((3 -+ sqrt(5 - 4(b^2+c^2+e^2)))/2)/2",
        exploratory: false,
        run: nilpotent_be0_radii_check,
    },
    Check {
        id: "lemma-identities",
        description: "nilpotent forms satisfy the two norm identities",
        exploratory: false,
        run: lemma_identities,
    },
    Check {
        id: "half-circle-criterion",
        description: "C_{1/2} lies on the curve iff c = d = 0 or g = h = 0",
        exploratory: false,
        run: half_circle_criterion,
    },
    Check {
        id: "j2-reduction",
        description: "with C_{1/2} on the curve, A is unitarily similar to J_2 + A_{be,h}",
        exploratory: false,
        run: j2_reduction,
    },
    Check {
        id: "ath-irreducibility",
        description: "A_{t,h} is unitarily irreducible iff t is not 0 or 1 and t^2 + h^2 != 1",
        exploratory: false,
        run: ath_irreducibility,
    },
    Check {
        id: "ath-radii",
        description: "the curve of A_{t,0} is two circles of radii sqrt(1 -+ sqrt(1 - t^2))/2",
        exploratory: false,
        run: ath_radii_check,
    },
    Check {
        id: "half-circle-shape",
        description: "shape of W(A) when C_{1/2} is on the curve",
        exploratory: false,
        run: half_circle_shape,
    },
    Check {
        id: "half-circle-disk",
        description: "with C_{1/2} on the curve, W(A) is a disk iff A is nilpotent",
        exploratory: false,
        run: half_circle_disk,
    },
    Check {
        id: "crith-radii",
        description: "h != 0: the circles are exactly those given by the plus and minus equations",
        exploratory: false,
        run: crith_radii,
    },
    Check {
        id: "two-circles-ellipse",
        description: "c = 0: two circles sqrt(1 -+ d)/2 and the focal ellipse if g = 0, no circle otherwise",
        exploratory: false,
        run: two_circles_ellipse,
    },
    Check {
        id: "ellipse-disk-threshold",
        description: "c = f = g = 0: W(A) is a disk iff d >= 2h + h^2",
        exploratory: false,
        run: ellipse_disk_threshold,
    },
    Check {
        id: "two-circles-criterion",
        description: "two circles besides C_{1/2} iff c = f = g = 0 and d is not 0 or 1",
        exploratory: false,
        run: two_circles_criterion,
    },
    Check {
        id: "disk-criterion",
        description: "cdefgh != 0: W(A) is a disk iff the plus-equation and the derivative inequality hold",
        exploratory: false,
        run: disk_criterion,
    },
    Check {
        id: "kernel-intersection",
        description: "dim ker C >= k/2 and C_{1/2} on the curve force ker C and ker C^* to meet",
        exploratory: false,
        run: kernel_intersection_check,
    },
    Check {
        id: "flipped-kernel",
        description: "a singular flipped polynomial forces ker C and ker C^* to meet",
        exploratory: false,
        run: flipped_kernel,
    },
    Check {
        id: "half-radius-j2-sum",
        description: "w(A) = 1/2 iff A is unitarily similar to a sum of J_2 blocks and zero",
        exploratory: false,
        run: half_radius_j2_sum,
    },
    Check {
        id: "rank4-circle-centers",
        description: "exploratory: centers of circles for rank-four 6 x 6 partial isometries",
        exploratory: true,
        run: rank4_circle_centers,
    },
];

pub fn theorem_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

fn stream_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

fn run_check(index: usize, seed: u64, trials: usize) -> TheoremReport {
    let c = &CHECKS[index];
    let mut ctx = Ctx {
        rng: stream_rng(seed, index),
        target: trials.max(1),
        drawn: 0,
        report: TheoremReport {
            theorem_id: c.id.to_string(),
            description: c.description.to_string(),
            exploratory: c.exploratory,
            trials: 0,
            failures: 0,
            worst_residual: 0.0,
            witnesses: Vec::new(),
            counters: BTreeMap::new(),
            acceptance_rate: 0.0,
        },
    };
    (c.run)(&mut ctx);
    if ctx.report.trials < ctx.target {
        // rejection sampling ran dry: the shortfall counts as failures
        ctx.count("sampling-exhausted");
        ctx.report.failures += ctx.target - ctx.report.trials;
    }
    ctx.report.acceptance_rate = if ctx.drawn == 0 {
        1.0
    } else {
        ctx.report.trials as f64 / ctx.drawn as f64
    };
    ctx.report
}

/// Runs one check by id, or `None` for an unknown id.
pub fn run_theorem(id: &str, seed: u64, trials: usize) -> Option<TheoremReport> {
    CHECKS.iter().position(|c| c.id == id).map(|i| run_check(i, seed, trials))
}

pub fn run_suite(seed: u64, trials: usize) -> Vec<TheoremReport> {
    (0..CHECKS.len()).map(|i| run_check(i, seed, trials)).collect()
}

/// True when no non-exploratory check failed.
pub fn suite_passed(reports: &[TheoremReport]) -> bool {
    reports.iter().all(TheoremReport::passed)
}

pub fn suite_json(reports: &[TheoremReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn suite_table(reports: &[TheoremReport]) -> String {
    let mut s = format!(
        "{:<24} {:>7} {:>8} {:>12} {:>10}  {}\n",
        "check", "trials", "failures", "worst", "accept", "status"
    );
    for r in reports {
        let status = if r.exploratory {
            "exploratory"
        } else if r.failures == 0 {
            "ok"
        } else {
            "FAIL"
        };
        s += &format!(
            "{:<24} {:>7} {:>8} {:>12.3e} {:>10.3}  {}\n",
            r.theorem_id, r.trials, r.failures, r.worst_residual, r.acceptance_rate, status
        );
    }
    s
}

// ---------------------------------------------------------------------------
// sampling helpers

fn haar(ctx: &mut Ctx, n: usize) -> ComplexMatrix {
    haar_unitary(n, &mut ctx.rng)
}

/// `e^{i phi} U A U^*` with random `phi` and Haar `U`.
fn scramble(ctx: &mut Ctx, a: &ComplexMatrix) -> ComplexMatrix {
    let u = haar(ctx, a.rows());
    let phi = ctx.rng.random_range(0.0..core::f64::consts::TAU);
    a.conjugate_by(&u).scale(cis(phi))
}

fn detect(a: &ComplexMatrix) -> Option<CircleReport> {
    detect_circles(a).ok()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|x, y| x.total_cmp(y));
    v
}

/// Largest distance between two radius lists, infinite if their lengths differ.
fn radii_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (a, b) = (sorted(a.to_vec()), sorted(b.to_vec()));
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn predicted_radii(f: &Defect2Form) -> Vec<f64> {
    circles_defect2(f).iter().map(|c| c.radius).collect()
}

fn contraction(ctx: &mut Ctx, k: usize) -> ComplexMatrix {
    let g = gaussian_matrix(k, k, &mut ctx.rng);
    let s: f64 = ctx.rng.random_range(0.3..0.95);
    g.scale_real(s / g.norm2())
}

fn j2() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
}

/// A random form satisfying the plus-equation with `cdefgh != 0`, if the solver finds one.
fn crith_plus_form(ctx: &mut Ctx) -> Option<Defect2Form> {
    let v = unit_vector(3, &mut ctx.rng);
    let (b, c, d) = (v[0].abs(), v[1].abs(), v[2].abs());
    if b.min(c).min(d) < FORM_MARGIN {
        return None;
    }
    let hp = ctx.rng.random_range(0.1..3.0);
    let sols = solve_crith_plus(b, c, d, hp, 6.0, 240);
    if sols.is_empty() {
        return None;
    }
    let f = sols[ctx.rng.random_range(0..sols.len())];
    let nonzero = [f.c, f.d, f.e, f.f, f.g, f.h].iter().all(|x| x.abs() >= 1e-3);
    nonzero.then_some(f)
}

// ---------------------------------------------------------------------------
// checks

fn gww_rank3(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let a = match ctx.report.trials % 3 {
            0 => random_rank3(ctx.rng.next_u64()),
            1 => {
                // a contraction with a double eigenvalue mu carrying a Jordan chain
                let mu = complex_gaussian(&mut ctx.rng) * 0.4;
                let nu = complex_gaussian(&mut ctx.rng) * 0.4;
                let mut t = ComplexMatrix::diag(&[mu, mu, nu]);
                t[(0, 1)] = cr(ctx.rng.random_range(0.2..1.0));
                t[(0, 2)] = complex_gaussian(&mut ctx.rng) * 0.3;
                t[(1, 2)] = complex_gaussian(&mut ctx.rng) * 0.3;
                let norm = t.norm2();
                if norm >= 1.0 {
                    t = t.scale_real(0.95 / norm);
                }
                let u = haar(ctx, 3);
                let Ok(a) = assemble_from_c(&t.conjugate_by(&u)) else {
                    continue;
                };
                a
            }
            _ => {
                let f = ctx.form(&FormStratum::ALL);
                let a = f.matrix();
                scramble(ctx, &a)
            }
        };
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let worst = r.circles.iter().map(|c| c.center.norm()).fold(0.0, f64::max);
        if !r.circles.is_empty() {
            ctx.count("with-circles");
        }
        ctx.record(worst, worst <= RADIUS_TOL, &a, || format!("off-center circle at distance {:e}", worst));
    }
}

fn defect1_half_circle(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let split = ctx.rng.random_bool(0.5);
        let pick = |rng: &mut ChaCha8Rng| {
            let z = complex_gaussian(rng);
            if z.norm() < 0.1 {
                z + 0.2
            } else {
                z
            }
        };
        let mut t = ComplexMatrix::zeros(3, 3);
        t[(1, 1)] = pick(&mut ctx.rng);
        t[(2, 2)] = pick(&mut ctx.rng);
        t[(1, 2)] = pick(&mut ctx.rng);
        if !split {
            t[(0, 1)] = pick(&mut ctx.rng);
            t[(0, 2)] = pick(&mut ctx.rng);
        }
        let t = t.scale_real(ctx.rng.random_range(0.5..0.95) / t.norm2());
        let u = haar(ctx, 3);
        let c = t.conjugate_by(&u);
        let Ok(a) = assemble_from_c(&c) else { continue };
        if defect(&a).ok() != Some(1) {
            continue;
        }
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let off_half = r.nondegenerate().map(|c| (c.radius - 0.5).abs()).fold(0.0, f64::max);
        let has_half = r.nondegenerate().any(|c| (c.radius - 0.5).abs() <= RADIUS_TOL);
        let meets = !kernel_intersection(&c).is_empty();
        if has_half {
            ctx.count("with-half-circle");
        }
        let ok = off_half <= RADIUS_TOL && has_half == meets && r.disk != DiskClassification::CircularDisk;
        ctx.record(off_half, ok, &a, || {
            format!("half circle {} / kernels meet {} / disk {:?}", has_half, meets, r.disk)
        });
    }
}

fn point_circle(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&FormStratum::ALL);
        let a = f.matrix();
        let a = scramble(ctx, &a);
        let closed = f.b * f.e == 0.0;
        let oracle = contains_point_circle(&a);
        if closed {
            ctx.count("be-zero");
        }
        ctx.record(f64::from(u8::from(closed != oracle)), closed == oracle, &a, || {
            format!("be = 0: {}, oracle: {}, form {:?}", closed, oracle, f)
        });
    }
}

fn nilpotent_circles(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&[Nilpotent, NilpotentCegZero, NilpotentBeZero]);
        let a = f.matrix();
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let predicted = predicted_radii(&f);
        let oracle = r.radii();
        let dist = radii_distance(&predicted, &oracle);
        let ceg_zero = f.c * f.e * f.g == 0.0;
        let has_circle = r.nondegenerate().next().is_some();
        let mult: usize = circles_defect2(&f).iter().filter(|c| c.radius > 0.0).map(|c| c.multiplicity).sum();
        // three circles counting multiplicity, the degenerate one included
        let zero_mult = if f.b * f.e == 0.0 { 1 } else { 0 };
        let three = !ceg_zero || mult + zero_mult == 3;
        if ceg_zero {
            ctx.count("ceg-zero");
        }
        let ok = dist <= RADIUS_TOL && has_circle == ceg_zero && three;
        ctx.record(dist, ok, &a, || format!("predicted {:?} oracle {:?}", predicted, oracle));
    }
}

fn nilpotent_radii(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&[NilpotentCegZero, NilpotentBeZero]);
        let a = f.matrix();
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let radii = sorted(r.radii());
        let (lo, hi) = (radii.first().copied().unwrap_or(1.0), radii.last().copied().unwrap_or(0.0));
        let excess = (lo - 0.5).max(0.5 - hi).max(0.0);
        ctx.record(excess, excess <= 1e-9, &a, || format!("radii {:?}", radii));
    }
}

fn nilpotent_be0_radii_check(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&[FormStratum::NilpotentBeZero]);
        let a = f.matrix();
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let want = nilpotent_be0_radii(f.b, f.c, f.e).to_vec();
        let dist = radii_distance(&want, &r.radii());
        ctx.record(dist, dist <= RADIUS_TOL, &a, || format!("closed form {:?} oracle {:?}", want, r.radii()));
    }
}

fn lemma_identities(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&[Nilpotent, NilpotentCegZero, NilpotentBeZero, HalfCaseII]);
        let (r1, r2) = nilpotent_identities(&f);
        let res = r1.abs().max(r2.map_or(0.0, f64::abs));
        ctx.record(res, res <= 1e-12, &f.matrix(), || format!("residuals {:e} {:?}", r1, r2));
    }
}

fn half_circle_criterion(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&FormStratum::ALL);
        let a = f.matrix();
        let a = scramble(ctx, &a);
        let closed = has_circle_half(&f);
        let res = contains_circle(&a, cr(0.0), 0.5);
        let oracle = res <= CONTAINS_TOL;
        if closed {
            ctx.count("with-half-circle");
        }
        ctx.record(if closed { res } else { 0.0 }, closed == oracle, &a, || {
            format!("closed form {}, residual {:e}, form {:?}", closed, res, f)
        });
    }
}

fn j2_reduction(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&[HalfCaseI, HalfCaseII]);
        let a = f.matrix();
        let Ok(red) = reduce_j2(&f) else {
            ctx.record(f64::INFINITY, false, &a, || "no reduction".into());
            continue;
        };
        let Ok(ath) = ath_matrix(red.t, red.h) else {
            ctx.record(f64::INFINITY, false, &a, || "invalid A_{t,h}".into());
            continue;
        };
        let target = j2().direct_sum(&ath);
        let u = &red.unitary;
        let res = (&(&u.adjoint() * &a) * u).dist(&target).max(u.unitarity_defect());
        ctx.record(res, res <= 1e-10, &a, || format!("distance {:e}", res));
    }
}

fn ath_irreducibility(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let (t, h) = match ctx.report.trials % 4 {
            0 => (0.0, ctx.rng.random_range(0.05..1.0)),
            1 => (1.0, 0.0),
            2 => {
                let phi: f64 = ctx.rng.random_range(0.05..1.5);
                (phi.cos(), phi.sin())
            }
            _ => {
                let t: f64 = ctx.rng.random_range(0.05..0.95);
                let hmax = (1.0 - t * t).sqrt();
                (t, ctx.rng.random_range(0.0..0.95) * hmax)
            }
        };
        let Ok(a) = ath_matrix(t, h) else { continue };
        let closed = t != 0.0 && t != 1.0 && (t * t + h * h - 1.0).abs() > 1e-12;
        let oracle = commutant_dimension(&a) == 1;
        if closed {
            ctx.count("irreducible");
        }
        ctx.record(f64::from(u8::from(closed != oracle)), closed == oracle, &a, || {
            format!("t = {}, h = {}: closed form {}, commutant {}", t, h, closed, oracle)
        });
    }
}

fn ath_radii_check(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let t = ctx.rng.random_range(0.05..0.999);
        let Ok(a) = ath_matrix(t, 0.0) else { continue };
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let (r1, r3) = ath_radii(t);
        let dist = radii_distance(&[r1, r3], &r.radii());
        ctx.record(dist, dist <= RADIUS_TOL, &a, || format!("t = {}: oracle {:?}", t, r.radii()));
    }
}

fn half_circle_shape(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = match ctx.report.trials % 5 {
            // the boundary cases h = 1, e^2 + h^2 = 1 and e = 0 of the c = d = 0 family
            0 => Defect2Form::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0).expect("admissible"),
            1 => {
                let h: f64 = ctx.rng.random_range(0.1..0.95);
                Defect2Form::new(1.0, 0.0, 0.0, (1.0 - h * h).sqrt(), 0.0, 0.0, h).expect("admissible")
            }
            2 => {
                let v = unit_vector(3, &mut ctx.rng);
                let (ff, g, h) = (v[0].abs(), v[1].abs(), v[2].abs());
                if ff.min(g).min(h) < FORM_MARGIN {
                    continue;
                }
                Defect2Form::new(1.0, 0.0, 0.0, 0.0, ff, g, h).expect("admissible")
            }
            _ => ctx.form(&[HalfCaseI, HalfCaseII]),
        };
        let a = f.matrix();
        let Ok(shape) = nrc_half_shape(&f) else {
            ctx.record(f64::INFINITY, false, &a, || "no shape".into());
            continue;
        };
        let w = numerical_radius(&a).value;
        ctx.count(match shape {
            HalfShape::Disk { .. } => "disk",
            HalfShape::ConeOne => "cone-one",
            HalfShape::ConeEllipse => "cone-ellipse",
            HalfShape::OvularCarrier => "ovular",
            HalfShape::AehCarrier => "aeh",
        });
        let (res, ok) = match shape {
            HalfShape::Disk { radius } => ((w - radius).abs(), (w - radius).abs() <= 1e-8),
            HalfShape::ConeOne => ((w - 1.0).abs(), (w - 1.0).abs() <= 1e-8),
            HalfShape::ConeEllipse => {
                // the ellipse with foci 0, h reaches (1 + h)/2 on the real axis
                let want = ((1.0 + f.h) / 2.0).max(0.5);
                ((w - want).abs(), (w - want).abs() <= 1e-8)
            }
            HalfShape::OvularCarrier | HalfShape::AehCarrier => {
                // the carrier block contains J_2, so the range strictly exceeds C_{1/2}
                let gap = w - 0.5;
                (0.0, gap > 1e-6)
            }
        };
        ctx.record(res, ok, &a, || format!("shape {:?}, w = {}", shape, w));
    }
}

fn half_circle_disk(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&[HalfCaseI, HalfCaseII]);
        let a = f.matrix();
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let closed = f.h == 0.0;
        let oracle = r.disk == DiskClassification::CircularDisk;
        if closed {
            ctx.count("nilpotent");
        }
        ctx.record(r.disk_gap.unwrap_or(0.0).abs(), closed == oracle, &a, || {
            format!("nilpotent {}, oracle {:?}", closed, r.disk)
        });
    }
}

/// Residual below which a failed plus- or minus-equation is too close to call: the curve then
/// carries a near-circle the oracle cannot tell from a circle.
pub const CRITH_GRAY: f64 = 1e-3;

fn crith_gray(cc: &CrithConditions) -> bool {
    (!cc.plus_holds && cc.plus_lhs.abs() < CRITH_GRAY) || (!cc.minus_holds && cc.minus_lhs.abs() < CRITH_GRAY)
}

/// Nondegenerate circles other than `C_{1/2}`.
fn other_circles(r: &CircleReport) -> Vec<f64> {
    r.nondegenerate()
        .map(|c| c.radius)
        .filter(|x| (x - 0.5).abs() > RADIUS_TOL)
        .collect()
}

fn crith_radii(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = if ctx.report.trials.is_multiple_of(2) {
            match crith_plus_form(ctx) {
                Some(f) => f,
                None => continue,
            }
        } else {
            ctx.form(&[Generic, DZero, TwoCircles])
        };
        if f.h == 0.0 || has_circle_half(&f) {
            continue;
        }
        let a = f.matrix();
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let Ok(cc) = crith_conditions(&f, 1e-9) else { continue };
        if crith_gray(&cc) {
            ctx.count("gray-zone");
            continue;
        }
        let mut closed = Vec::new();
        if let Some(rp) = cc.r_plus {
            closed.push(rp);
        }
        if let (Some(rm), Some(x)) = (cc.r_minus, cc.x.value()) {
            if x < 1.0 {
                closed.push(rm);
            }
        }
        if !closed.is_empty() {
            ctx.count("with-circles");
        }
        let oracle = other_circles(&r);
        let dist = radii_distance(&closed, &oracle);
        ctx.record(if dist.is_finite() { dist } else { 1.0 }, dist <= RADIUS_TOL, &a, || {
            format!("closed form {:?}, oracle {:?}", closed, oracle)
        });
    }
}

fn two_circles_ellipse(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let with_g = ctx.report.trials % 2 == 1;
        let f = if with_g {
            // c = f = 0 with g != 0
            let d: f64 = ctx.rng.random_range(0.05..0.95);
            let v = unit_vector(3, &mut ctx.rng);
            let (e, g, h) = (v[0].abs(), v[1].abs(), v[2].abs());
            if e.min(g).min(h) < FORM_MARGIN {
                continue;
            }
            Defect2Form {
                b: (1.0 - d * d).sqrt(),
                c: 0.0,
                d,
                e,
                f: 0.0,
                g,
                h,
            }
        } else {
            ctx.form(&[FormStratum::TwoCircles])
        };
        let a = f.matrix();
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        let oracle: Vec<f64> = r.nondegenerate().map(|c| c.radius).collect();
        if with_g {
            ctx.count("g-nonzero");
            let ok = oracle.is_empty();
            ctx.record(0.0, ok, &a, || format!("unexpected circles {:?}", oracle));
            continue;
        }
        let want = [(1.0 - f.d).sqrt() / 2.0, (1.0 + f.d).sqrt() / 2.0];
        let dist = radii_distance(&want, &oracle);
        let dec = decompose(&a, &want, 720);
        let foci = dec
            .ellipse
            .map(|e| foci_error(e.foci, (C64::new(0.0, 0.0), C64::new(f.h, 0.0))))
            .unwrap_or(f64::INFINITY);
        let res = dist.max(foci);
        ctx.record(res, dist <= RADIUS_TOL && foci <= 1e-6, &a, || {
            format!("radii distance {:e}, foci error {:e}", dist, foci)
        });
    }
}

fn ellipse_disk_threshold(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let f = ctx.form(&[FormStratum::TwoCircles]);
        let lhs = f.d - 2.0 * f.h - f.h * f.h;
        if lhs.abs() < 1e-6 {
            ctx.count("gray-zone");
            continue;
        }
        let a = f.matrix();
        let closed = lhs >= 0.0;
        let w = numerical_radius(&a).value;
        let r = (1.0 + f.d).sqrt() / 2.0;
        let oracle = w - r <= 1e-9;
        if closed {
            ctx.count("disk");
        }
        ctx.record((w - r).abs(), closed == oracle, &a, || {
            format!("threshold {}, w - r = {:e}", closed, w - r)
        });
    }
}

fn two_circles_criterion(ctx: &mut Ctx) {
    use FormStratum::*;
    while ctx.more() {
        ctx.draw();
        let f = if ctx.report.trials.is_multiple_of(3) {
            match crith_plus_form(ctx) {
                Some(f) => f,
                None => continue,
            }
        } else {
            ctx.form(&[Generic, DZero, TwoCircles])
        };
        if f.h == 0.0 || has_circle_half(&f) {
            continue;
        }
        let a = f.matrix();
        let Some(r) = detect(&a) else {
            ctx.record(f64::INFINITY, false, &a, || "detection failed".into());
            continue;
        };
        if crith_conditions(&f, 1e-9).map_or(true, |cc| crith_gray(&cc)) {
            ctx.count("gray-zone");
            continue;
        }
        let closed = two_circles_classification(&f);
        let oracle = other_circles(&r).len() == 2;
        if closed {
            ctx.count("two-circles");
        }
        ctx.record(f64::from(u8::from(closed != oracle)), closed == oracle, &a, || {
            format!("closed form {}, oracle radii {:?}", closed, r.radii())
        });
    }
}

fn disk_criterion(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let Some(f) = crith_plus_form(ctx) else { continue };
        let Some(x) = x_value(&f).ok().and_then(|x| x.value()) else { continue };
        let margin = derivative_margin(&f, x);
        if margin.abs() < 1e-6 {
            ctx.count("gray-zone");
            continue;
        }
        let a = f.matrix();
        let verdict = disk_classification(&f);
        let r_plus = (1.0 + x).sqrt() / 2.0;
        let w = numerical_radius(&a).value;
        let oracle = w - r_plus <= 1e-9;
        ctx.count("crith-plus");
        if margin > 0.0 {
            ctx.count("dercond-holds");
        }
        if verdict.is_disk() == oracle {
            ctx.count("agree");
        }
        ctx.record((w - r_plus).abs(), verdict.is_disk() == oracle, &a, || {
            format!("closed form {:?}, w - r+ = {:e}, margin {:e}", verdict.reason, w - r_plus, margin)
        });
    }
}

fn kernel_intersection_check(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let c = match ctx.report.trials % 4 {
            0 => {
                let k = ctx.rng.random_range(1..4);
                let inner = contraction(ctx, k);
                let u = haar(ctx, k + 1);
                ComplexMatrix::zeros(1, 1).direct_sum(&inner).conjugate_by(&u)
            }
            1 => {
                let base = if ctx.rng.random_bool(0.5) { odd_witness() } else { even_witness() };
                let (m, l) = (ctx.rng.random_range(0..2), ctx.rng.random_range(0..2));
                let c = witness_family(&base, m, l);
                let u = haar(ctx, c.rows());
                c.conjugate_by(&u)
            }
            _ => {
                let k = ctx.rng.random_range(2..5);
                contraction(ctx, k)
            }
        };
        let Ok(t) = check_kernel_intersection_c(&c) else { continue };
        let Ok(a) = assemble_from_c(&c) else { continue };
        let res = contains_circle(&a, cr(0.0), 0.5);
        let geometric = res <= CONTAINS_TOL;
        if t.contains_c_half {
            ctx.count("with-half-circle");
        }
        if t.hypothesis_holds {
            ctx.count("hypothesis");
        }
        let ok = t.implication_holds() && t.contains_c_half == geometric;
        ctx.record(if geometric { res } else { 0.0 }, ok, &a, || format!("{:?}, residual {:e}", t, res));
    }
}

fn flipped_kernel(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let k = ctx.rng.random_range(1..6);
        let mut c = contraction(ctx, k);
        match ctx.report.trials % 3 {
            0 => {
                let v = unit_vector(k, &mut ctx.rng);
                let p = &ComplexMatrix::identity(k) - &ComplexMatrix::from_fn(k, k, |a, b| cr(v[a] * v[b]));
                c = &c * &p;
            }
            1 => {
                let u = haar(ctx, k + 1);
                c = ComplexMatrix::zeros(1, 1).direct_sum(&c).conjugate_by(&u);
            }
            _ => {}
        }
        let Ok(p) = check_flipped_kernel(&c) else { continue };
        if p.flipped_singular {
            ctx.count("flipped-singular");
        }
        ctx.record(0.0, p.implication_holds(), &c, || format!("{:?}", p));
    }
}

fn half_radius_j2_sum(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let n = ctx.rng.random_range(2..7);
        let a = if ctx.report.trials.is_multiple_of(2) {
            let m = ctx.rng.random_range(1..=n / 2);
            let mut a = ComplexMatrix::zeros(n - 2 * m, n - 2 * m);
            for _ in 0..m {
                a = a.direct_sum(&j2());
            }
            let u = haar(ctx, n);
            a.conjugate_by(&u)
        } else {
            let rank = ctx.rng.random_range(1..=n);
            random_partial_isometry(n, rank, &mut ctx.rng)
        };
        let w = numerical_radius(&a).value;
        let half = (w - 0.5).abs() <= 1e-9;
        // a partial isometry is such a sum exactly when A^2 = 0
        let square_zero = (&a * &a).max_abs() <= 1e-9;
        if square_zero {
            ctx.count("j2-sum");
        }
        ctx.record(if square_zero { (w - 0.5).abs() } else { 0.0 }, half == square_zero, &a, || {
            format!("w = {}, A^2 = 0: {}", w, square_zero)
        });
    }
}

fn rank4_circle_centers(ctx: &mut Ctx) {
    while ctx.more() {
        ctx.draw();
        let a = random_partial_isometry(6, 4, &mut ctx.rng);
        let Some(r) = detect(&a) else {
            ctx.count("detection-failed");
            ctx.record(0.0, true, &a, String::new);
            continue;
        };
        let worst = r.circles.iter().map(|c| c.center.norm()).fold(0.0, f64::max);
        if !r.circles.is_empty() {
            ctx.count("with-circles");
        }
        ctx.record(worst, worst <= RADIUS_TOL, &a, || format!("circle center at distance {:e}", worst));
    }
}
