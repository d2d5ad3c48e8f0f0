//! One-dimensional weighted Neumann cross-check.
//!
//! A long warped-product annulus whose first eigenvalue sits below the
//! rotational threshold has a rotation-invariant first eigenfunction, so the
//! eigenvalue problem collapses to -(sigma u')' = lambda sigma u on [0, R]
//! with Neumann ends. This module builds sigma by smoothing a distance
//! density, solves the 1-D problem to second order in the grid step and
//! exposes the quotient bridge that ties the continuum Rayleigh quotients
//! back to the weighted ones.

use crate::error::{Error, Result};
use crate::profile::{self, PiecewiseLinearFn, StepFunction, GOOD_JUMP};
use crate::spectral;

/// A positive weight sampled on a uniform grid over [0, R].
///
/// Invariants: sigma = 1 exactly on [0,1] and [R-1, R], sigma >= 1
/// everywhere, and `c_band` dominates both the pointwise ratio against the
/// source density and the largest discrete second difference.
#[derive(Debug, Clone)]
pub struct SigmaProfile {
    h: f64,
    samples: Vec<f64>,
    r: f64,
    c_band: f64,
}

impl SigmaProfile {
    /// The constant profile sigma = 1 on [0, r], for closed-form checks.
    /// The step is shrunk so the grid lands on r exactly.
    pub fn uniform(r: f64, h: f64) -> Result<SigmaProfile> {
        if !h.is_finite() || h <= 0.0 || h > 0.25 {
            return Err(Error::BadGridStep(h));
        }
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::SigmaInvariant(format!("bad interval length {r}")));
        }
        let n = (r / h).ceil() as usize;
        Ok(SigmaProfile {
            h: r / n as f64,
            samples: vec![1.0; n + 1],
            r,
            c_band: 1.0,
        })
    }

    /// Actual grid step; at most the step requested from `smooth_sigma`.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn c_band(&self) -> f64 {
        self.c_band
    }

    pub fn max_sigma(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Cubic ramp with zero slope at both ends; C1 seams keep the second
/// differences of the blended profile bounded independently of the grid.
fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * (3.0 - 2.0 * x)
}

/// Triangle-kernel mollification of the density at `t`, window width 1/2.
/// Exact: the density is constant on each piece and the kernel is linear.
fn mollify(rho: &StepFunction, t: f64) -> f64 {
    let (lo, hi) = (t - 0.25, t + 0.25);
    let mut acc = 0.0;
    for (a2, b2, v) in rho.pieces() {
        let (a, b) = (a2 as f64 / 2.0, b2 as f64 / 2.0);
        if b <= lo || a >= hi {
            continue;
        }
        // Rising half of the kernel, weight s - (t - 1/4).
        let (x1, x2) = (a.max(lo), b.min(t));
        if x2 > x1 {
            acc += v as f64 * 0.5 * ((x2 - lo).powi(2) - (x1 - lo).powi(2));
        }
        // Falling half, weight (t + 1/4) - s.
        let (x1, x2) = (a.max(t), b.min(hi));
        if x2 > x1 {
            acc += v as f64 * 0.5 * ((hi - x1).powi(2) - (hi - x2).powi(2));
        }
    }
    16.0 * acc
}

/// The smoothed weight at `t`: mollified density blended to 1 on the end
/// units. A pure function of the density, so refining the grid samples the
/// same underlying profile.
fn sigma_at(rho: &StepFunction, r: f64, t: f64) -> f64 {
    let ramp = smoothstep((t - 1.0).min(r - 1.0 - t));
    if ramp == 0.0 {
        1.0
    } else {
        1.0 + ramp * (mollify(rho, t) - 1.0)
    }
}

/// Value of the density on the piece containing `t` (right-continuous at
/// breakpoints), for the band check.
fn density_at(rho: &StepFunction, t: f64) -> f64 {
    rho.value_right_of((2.0 * t).floor() as i64) as f64
}

/// Smooths a good distance density into a weight profile on [0, R] with
/// R = floor(diam_p).
///
/// The density is mollified with a fixed triangle kernel of width 1/2 (the
/// good-jump scale, so the curvature of the result is bounded by a constant)
/// and blended to 1 on the end units through a cubic ramp over [1,2] and
/// [R-2, R-1]. `c_band` reports the worst pointwise ratio against the
/// density together with the worst discrete second difference.
pub fn smooth_sigma(rho: &StepFunction, h: f64) -> Result<SigmaProfile> {
    if !(h > 0.0 && h <= 0.25) || !h.is_finite() {
        return Err(Error::BadGridStep(h));
    }
    for cv in profile::critical_values(rho) {
        if !cv.good {
            return Err(Error::DensityNotGood {
                jump: cv.jump,
                t: cv.t(),
                good: GOOD_JUMP,
            });
        }
    }
    let r_int = rho.support_end_doubled() / 2;
    if r_int < 2 {
        return Err(Error::ProfileTooShort(r_int as usize));
    }
    let r = r_int as f64;
    let n = (r / h).ceil() as usize;
    let h = r / n as f64;

    let samples: Vec<f64> = (0..=n).map(|i| sigma_at(rho, r, i as f64 * h)).collect();

    let mut c_band = 1.0f64;
    for (i, &s) in samples.iter().enumerate() {
        if !s.is_finite() || s < 1.0 - 1e-9 {
            return Err(Error::SigmaInvariant(format!(
                "sigma = {s} at t = {}",
                i as f64 * h
            )));
        }
        let t = i as f64 * h;
        if (t <= 1.0 + 1e-12 || t >= r - 1.0 - 1e-12) && s != 1.0 {
            return Err(Error::SigmaInvariant(format!(
                "sigma = {s} on an end unit at t = {t}"
            )));
        }
        let rho_t = density_at(rho, t);
        if rho_t > 0.0 {
            c_band = c_band.max(s / rho_t).max(rho_t / s);
        }
        if i >= 1 && i + 1 < samples.len() {
            let second = (samples[i - 1] - 2.0 * s + samples[i + 1]).abs() / (h * h);
            c_band = c_band.max(second);
        }
    }

    Ok(SigmaProfile { h, samples, r, c_band })
}

/// Stiffness and mass coefficients of the grid pencil A u = lambda B u for
/// -(sigma u')' = lambda sigma u with Neumann ends: midpoint weights on the
/// fluxes, trapezoid weights on the mass. Shared by the solver and the
/// quotient bridge so the variational bound between them is exact.
fn grid_forms(sigma: &SigmaProfile) -> (Vec<f64>, Vec<f64>) {
    let s = sigma.samples();
    let h = sigma.h();
    let n = s.len();
    let flux: Vec<f64> = (0..n - 1).map(|i| 0.5 * (s[i] + s[i + 1]) / h).collect();
    let mass: Vec<f64> = (0..n)
        .map(|i| {
            let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
            s[i] * h * w
        })
        .collect();
    (flux, mass)
}

/// Smallest positive eigenvalue of the weighted Neumann problem on the
/// profile's grid, second-order accurate in the step.
///
/// The generalized pencil is symmetrized by u -> B^(1/2) u and the second
/// smallest eigenvalue of the resulting tridiagonal matrix is isolated by
/// Sturm-count bisection; the smallest is the exact 0 of the constants.
pub fn neumann_lambda1(sigma: &SigmaProfile) -> Result<f64> {
    let (flux, mass) = grid_forms(sigma);
    let n = mass.len();
    let mut diag = vec![0.0; n];
    for i in 0..n - 1 {
        diag[i] += flux[i];
        diag[i + 1] += flux[i];
    }
    for i in 0..n {
        diag[i] /= mass[i];
    }
    let off: Vec<f64> = (0..n - 1)
        .map(|i| -flux[i] / (mass[i] * mass[i + 1]).sqrt())
        .collect();
    let lambda = spectral::tridiag_kth_smallest_eigenvalue(&diag, &off, 2);
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::NoConvergence { residual: lambda, iterations: 200 });
    }
    Ok(lambda)
}

/// True iff the eigenvalue sits below the rotational threshold
/// 4 pi^2 / max(sigma)^2, the hypothesis under which the 1-D reduction
/// captures the full annulus eigenvalue.
pub fn invariance_threshold_check(sigma: &SigmaProfile, lambda1: f64) -> bool {
    let m = sigma.max_sigma();
    lambda1 < 4.0 * std::f64::consts::PI.powi(2) / (m * m)
}

/// Rayleigh quotient of `f` sampled on the profile's grid, with the same
/// stiffness and mass forms as `neumann_lambda1`. Within `c_band`^2 of
/// `weighted_rayleigh` against the source density, up to quadrature error.
/// `f` should be supported in [0, R]; it evaluates to 0 outside its nodes.
pub fn weighted_quotient_bridge(sigma: &SigmaProfile, f: &PiecewiseLinearFn) -> Result<f64> {
    let (flux, mass) = grid_forms(sigma);
    let h = sigma.h();
    let u: Vec<f64> = (0..mass.len()).map(|i| f.eval(i as f64 * h)).collect();
    let mut num = 0.0;
    for i in 0..flux.len() {
        let d = u[i + 1] - u[i];
        num += flux[i] * d * d;
    }
    let den: f64 = (0..mass.len()).map(|i| mass[i] * u[i] * u[i]).sum();
    if den <= 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num / den)
}
