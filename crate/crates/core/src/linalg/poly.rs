use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::matrix::{cr, ComplexMatrix, C64};
use super::schur::eigenvalues;
use super::LinalgError;

/// Real polynomial, coefficients in ascending order. Trailing zeros are trimmed,
/// so the leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(cr(0.0), |acc, &c| acc * z + c)
    }

    /// `sum |c_i| |x|^i`, the natural scale for residuals at `x`.
    pub fn abs_scale(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x.abs() + c.abs())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    /// Coefficients below `tol * max|c|` set to zero.
    pub fn chop(&self, tol: f64) -> Self {
        let m = self.max_abs_coeff();
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.abs() <= tol * m { 0.0 } else { c })
                .collect(),
        )
    }

    pub fn mul(&self, other: &RealPolynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Multiplicity of `x` as a root, testing successive derivatives against `tol`.
    pub fn order_at(&self, x: f64, tol: f64) -> usize {
        let mut p = self.clone();
        let mut k = 0;
        let mut fact = 1.0;
        while !p.is_zero() && p.eval(x).abs() / fact <= tol * p.abs_scale(x).max(f64::MIN_POSITIVE) / fact {
            p = p.derivative();
            k += 1;
            fact *= k as f64;
        }
        k
    }
}

impl fmt::Debug for RealPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealPolynomial{:?}", self.coeffs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexRoot {
    pub value: C64,
    pub multiplicity: usize,
}

/// Radius within which `m` computed roots are treated as one `m`-fold root.
/// A perturbed `m`-fold root spreads by roughly `eps^(1/m)`.
fn merge_radius(m: usize) -> f64 {
    let spread = 2.0 * (1e-15f64).powf(1.0 / m as f64);
    spread.max(1e-7)
}

/// All complex roots with multiplicities. The zero polynomial has no finite root set
/// and yields [`LinalgError::EverywhereZero`].
pub fn poly_complex_roots(p: &RealPolynomial) -> Result<Vec<ComplexRoot>, LinalgError> {
    if p.is_zero() {
        return Err(LinalgError::EverywhereZero);
    }
    let d = p.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    let c = p.coeffs();
    let lead = c[d];
    let mut comp = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        if i + 1 < d {
            comp[(i + 1, i)] = cr(1.0);
        }
        comp[(i, d - 1)] = cr(-c[i] / lead);
    }
    let raw = eigenvalues(&comp)?;
    // for each unassigned seed take the largest group of nearest roots that fits
    // inside the spread expected of a perturbed multiple root
    let n = raw.len();
    let mut assigned = vec![false; n];
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut near: Vec<usize> = (0..n).filter(|&j| j != i && !assigned[j]).collect();
        near.sort_by(|&a, &b| {
            (raw[a] - raw[i]).norm().partial_cmp(&(raw[b] - raw[i]).norm()).unwrap()
        });
        let mut chosen = vec![i];
        for m in (2..=near.len() + 1).rev() {
            let group: Vec<usize> = core::iter::once(i).chain(near[..m - 1].iter().copied()).collect();
            let mean = group.iter().map(|&g| raw[g]).sum::<C64>() / m as f64;
            let spread = group.iter().map(|&g| (raw[g] - mean).norm()).fold(0.0, f64::max);
            if spread <= merge_radius(m) * mean.norm().max(1.0) {
                chosen = group;
                break;
            }
        }
        let mean = chosen.iter().map(|&g| raw[g]).sum::<C64>() / chosen.len() as f64;
        for &g in &chosen {
            assigned[g] = true;
        }
        clusters.push((mean, chosen.len()));
    }
    let dp = p.derivative();
    let mut out = Vec::with_capacity(clusters.len());
    for (mut z, m) in clusters {
        if m == 1 {
            for _ in 0..3 {
                let f = p.eval_complex(z);
                let g = dp.eval_complex(z);
                if g.norm() == 0.0 {
                    break;
                }
                let zn = z - f / g;
                if p.eval_complex(zn).norm() < f.norm() {
                    z = zn;
                } else {
                    break;
                }
            }
        }
        out.push(ComplexRoot { value: z, multiplicity: m });
    }
    Ok(out)
}

/// Real roots in `[lo, hi]` with multiplicities, ascending.
pub fn poly_real_roots(p: &RealPolynomial, lo: f64, hi: f64) -> Result<Vec<RealRoot>, LinalgError> {
    let roots = poly_complex_roots(p)?;
    let mut out: Vec<RealRoot> = Vec::new();
    for r in roots {
        let x = r.value.re;
        let imag_tol = 1e-7 * x.abs().max(1.0) * r.multiplicity as f64;
        if r.value.im.abs() > imag_tol {
            continue;
        }
        if x < lo - 1e-9 || x > hi + 1e-9 {
            continue;
        }
        let x = x.clamp(lo, hi);
        if p.eval(x).abs() > 1e-9 * p.abs_scale(x).max(p.max_abs_coeff()) {
            continue;
        }
        out.push(RealRoot {
            value: x,
            multiplicity: r.multiplicity,
        });
    }
    out.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    Ok(out)
}
