//! Planar helpers: convex hulls, support polygons, Hausdorff distance, conic fits.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::hermitian::lambda_max;
use crate::linalg::svd::svd;
use crate::linalg::{cr, sample_angles, ComplexMatrix, C64};

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull (monotone chain), collinear points dropped.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    pts.dedup_by(|a, b| (*a - *b).norm() == 0.0);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / l2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from `p` to a convex polygon given counter-clockwise; zero inside.
pub fn distance_to_convex_polygon(p: C64, poly: &[C64]) -> f64 {
    let n = poly.len();
    if n == 0 {
        return f64::INFINITY;
    }
    if n == 1 {
        return (p - poly[0]).norm();
    }
    let inside = n >= 3 && (0..n).all(|i| cross(poly[i], poly[(i + 1) % n], p) >= 0.0);
    if inside {
        return 0.0;
    }
    (0..n)
        .map(|i| segment_distance(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance by vertex-to-polygon distances, `O(nm)`.
pub fn hausdorff_convex_brute(p: &[C64], q: &[C64]) -> f64 {
    let a = p.iter().map(|&x| distance_to_convex_polygon(x, q)).fold(0.0, f64::max);
    let b = q.iter().map(|&x| distance_to_convex_polygon(x, p)).fold(0.0, f64::max);
    a.max(b)
}

fn dot(z: C64, u: C64) -> f64 {
    z.re * u.re + z.im * u.im
}

fn wrap_angle(a: f64) -> f64 {
    let tau = 2.0 * core::f64::consts::PI;
    let x = a % tau;
    if x < 0.0 {
        x + tau
    } else {
        x
    }
}

/// Outward edge normal angles of a counter-clockwise polygon, unwrapped to increase from
/// the first one; a turn made negative by rounding counts as zero.
fn normal_angles(p: &[C64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(p.len());
    let mut prev = 0.0;
    for i in 0..p.len() {
        let d = p[(i + 1) % p.len()] - p[i];
        let a = (-d.re).atan2(d.im);
        match out.last() {
            None => out.push(a),
            Some(&last) => {
                let turn = wrap_angle(a - prev);
                out.push(if turn > core::f64::consts::PI { last } else { last + turn });
            }
        }
        prev = a;
    }
    out
}

/// Index of the vertex maximizing `<z, e^{it}>`: the end of the last edge whose normal
/// angle does not exceed `t`.
fn support_index(normals: &[f64], t: f64) -> usize {
    let t = normals[0] + wrap_angle(t - normals[0]);
    normals.partition_point(|&a| a <= t) % normals.len()
}

/// Hausdorff distance between two convex polygons (counter-clockwise vertex lists), as
/// the largest gap between their support functions. Between consecutive edge normals of
/// either polygon both support vertices are fixed, so each arc is settled in closed form.
pub fn hausdorff_convex(p: &[C64], q: &[C64]) -> f64 {
    if p.len() < 3 || q.len() < 3 {
        return hausdorff_convex_brute(p, q);
    }
    let tau = 2.0 * core::f64::consts::PI;
    let (np, nq) = (normal_angles(p), normal_angles(q));
    let mut angles: Vec<f64> = np.iter().chain(&nq).map(|&a| wrap_angle(a)).collect();
    angles.sort_by(f64::total_cmp);
    let m = angles.len();
    let dir = |t: f64| C64::new(t.cos(), t.sin());
    let mut worst = 0.0f64;
    for k in 0..m {
        let a0 = angles[k];
        let a1 = if k + 1 < m { angles[k + 1] } else { angles[0] + tau };
        let mid = 0.5 * (a0 + a1);
        let w = p[support_index(&np, mid)] - q[support_index(&nq, mid)];
        worst = worst.max(dot(w, dir(a0)).abs()).max(dot(w, dir(a1)).abs());
        // |<w, u>| peaks at u = +-w / |w|
        let phi = w.im.atan2(w.re);
        for c in [phi, phi + core::f64::consts::PI] {
            if wrap_angle(c - a0) <= a1 - a0 {
                worst = worst.max(w.norm());
            }
        }
    }
    worst
}

/// Outer polygon of `W(A)` cut out by the supporting lines `Re(e^{i theta} z) = lambda_max(theta)`
/// at `steps` equispaced directions.
pub fn support_polygon(a: &ComplexMatrix, steps: usize) -> Vec<C64> {
    let th = sample_angles(steps);
    let h: Vec<f64> = th.iter().map(|&t| lambda_max(a, t)).collect();
    let mut out = Vec::with_capacity(steps);
    for k in 0..steps {
        let k1 = (k + 1) % steps;
        let (t0, t1) = (th[k], th[k1]);
        // x cos t - y sin t = h
        let (a11, a12, a21, a22) = (t0.cos(), -t0.sin(), t1.cos(), -t1.sin());
        let det = a11 * a22 - a12 * a21;
        if det.abs() < 1e-300 {
            continue;
        }
        let x = (h[k] * a22 - a12 * h[k1]) / det;
        let y = (a11 * h[k1] - h[k] * a21) / det;
        out.push(C64::new(x, y));
    }
    convex_hull(&out)
}

/// Coefficients `(A, B, C, D, E, F)` of the least-squares conic
/// `A x^2 + B xy + C y^2 + D x + E y + F = 0` through the points (unit coefficient norm).
pub fn fit_conic(points: &[C64]) -> [f64; 6] {
    let m = ComplexMatrix::from_fn(points.len().max(6), 6, |i, j| {
        if i >= points.len() {
            return cr(0.0);
        }
        let (x, y) = (points[i].re, points[i].im);
        cr([x * x, x * y, y * y, x, y, 1.0][j])
    });
    let d = svd(&m);
    let v = d.v.column(5);
    [v[0].re, v[1].re, v[2].re, v[3].re, v[4].re, v[5].re]
}

/// Geometry of an ellipse recovered from conic coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipse {
    pub center: C64,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub foci: (C64, C64),
}

/// Ellipse parameters of a conic, or `None` if the conic is not a real ellipse.
pub fn conic_to_ellipse(k: [f64; 6]) -> Option<Ellipse> {
    let [a, b, c, d, e, f] = k;
    if b * b - 4.0 * a * c >= 0.0 {
        return None;
    }
    let det = 4.0 * a * c - b * b;
    let x0 = (b * e - 2.0 * c * d) / det;
    let y0 = (b * d - 2.0 * a * e) / det;
    let f0 = f + (d * x0 + e * y0) / 2.0;
    // eigen-decomposition of [[a, b/2], [b/2, c]]
    let tr = a + c;
    let disc = ((a - c) * (a - c) + b * b).sqrt();
    let l1 = (tr - disc) / 2.0;
    let l2 = (tr + disc) / 2.0;
    let (s1, s2) = (-f0 / l1, -f0 / l2);
    if s1 <= 0.0 || s2 <= 0.0 {
        return None;
    }
    let (r1, r2) = (s1.sqrt(), s2.sqrt());
    // eigenvector for l1 (the direction of the larger semi-axis when |l1| < |l2|)
    let (major, minor, lam) = if r1 >= r2 { (r1, r2, l1) } else { (r2, r1, l2) };
    // two expressions for the eigenvector; the longer one is well-conditioned
    let v1 = C64::new(b / 2.0, lam - a);
    let v2 = C64::new(lam - c, b / 2.0);
    let mut dir = if v1.norm() >= v2.norm() { v1 } else { v2 };
    if dir.norm() == 0.0 {
        dir = C64::new(1.0, 0.0);
    }
    dir /= dir.norm();
    let cf = (major * major - minor * minor).max(0.0).sqrt();
    let center = C64::new(x0, y0);
    Some(Ellipse {
        center,
        semi_major: major,
        semi_minor: minor,
        foci: (center - dir * cf, center + dir * cf),
    })
}
