use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use super::matrix::{cis, cr, C64};

/// Polynomial in `lambda` whose coefficients are trigonometric polynomials in `theta`:
/// `P(lambda, theta) = sum_a lambda^a sum_k c[a][k] e^{i k theta}`, `|k| <= k_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    k_max: usize,
    coeffs: Vec<Vec<C64>>,
}

impl TrigPolynomial {
    pub fn new(k_max: usize, coeffs: Vec<Vec<C64>>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.len() == 2 * k_max + 1));
        Self { k_max, coeffs }
    }

    /// Degree in `lambda`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Fourier coefficient of `lambda^a e^{i k theta}`.
    pub fn coeff(&self, a: usize, k: i64) -> C64 {
        if a >= self.coeffs.len() || k.unsigned_abs() as usize > self.k_max {
            return cr(0.0);
        }
        self.coeffs[a][(k + self.k_max as i64) as usize]
    }

    pub fn eval(&self, lambda: f64, theta: f64) -> f64 {
        let mut acc = cr(0.0);
        let mut lp = 1.0;
        for row in &self.coeffs {
            let mut s = cr(0.0);
            for (idx, c) in row.iter().enumerate() {
                let k = idx as f64 - self.k_max as f64;
                s += c * cis(k * theta);
            }
            acc += s * lp;
            lp *= lambda;
        }
        acc.re
    }

    /// Harmonic `k` of `P(lambda, .)` as a function of `lambda`.
    pub fn harmonic(&self, k: i64, lambda: f64) -> C64 {
        let mut acc = cr(0.0);
        let mut lp = 1.0;
        for a in 0..self.coeffs.len() {
            acc += self.coeff(a, k) * lp;
            lp *= lambda;
        }
        acc
    }

    /// `sum |c_{a,k}| |lambda|^a`, used to scale residuals.
    pub fn abs_scale(&self, lambda: f64) -> f64 {
        let mut acc = 0.0;
        let mut lp = 1.0;
        for row in &self.coeffs {
            acc += row.iter().map(|c| c.norm()).sum::<f64>() * lp;
            lp *= lambda.abs();
        }
        acc
    }

    /// Largest harmonic modulus of `P(lambda, .)`.
    pub fn max_harmonic(&self, lambda: f64) -> f64 {
        let km = self.k_max as i64;
        (-km..=km).map(|k| self.harmonic(k, lambda).norm()).fold(0.0, f64::max)
    }

    /// Coefficient rows as stored (index `k + k_max`).
    pub fn rows(&self) -> &[Vec<C64>] {
        &self.coeffs
    }
}

/// Sample angles `-pi + 2 pi (j+1)/n`, `j = 0..n`, covering `(-pi, pi]`.
pub fn sample_angles(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * (j + 1) as f64 / n as f64).collect()
}

/// Fourier coefficients `|k| <= k_max` of a real trigonometric polynomial of degree
/// at most `k_max`, sampled at [`sample_angles`]`(2 k_max + 1)`.
pub fn trig_interpolate(samples: &[f64], k_max: usize) -> Vec<C64> {
    let n = samples.len();
    assert!(n > 2 * k_max, "not enough samples for the requested degree");
    let th = sample_angles(n);
    let mut out = vec![cr(0.0); 2 * k_max + 1];
    for (idx, o) in out.iter_mut().enumerate() {
        let k = idx as f64 - k_max as f64;
        let mut s = cr(0.0);
        for (f, t) in samples.iter().zip(&th) {
            s += cis(-k * t) * *f;
        }
        *o = s / n as f64;
    }
    out
}
