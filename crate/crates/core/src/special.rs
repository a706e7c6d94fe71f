//! The plasma dispersion integral
//!
//! ```text
//! t0(w) = (1/sqrt(pi)) * int_{-inf}^{inf} exp(-u^2)/(u - w) du,    Im w > 0.
//! ```
//!
//! Every downstream use has `w = i*z0*t` with `t > 0` and `Re z0 = 1`, so the
//! pole stays strictly above the integration axis and no analytic
//! continuation is ever needed. Limiting values: `t0 -> i*sqrt(pi)` as
//! `w -> 0` and `t0 ~ -1/w` as `|w| -> inf` (so `t0(i t) ~ i/t`).
//!
//! [`t0`] is the production evaluator. [`t0_oracle`] integrates the defining
//! integral with adaptive quadrature and exists purely as an independent
//! cross-check; it shares no code path with the fast evaluator beyond the
//! generic panel engine.

use core::f64::consts::PI;
use core::fmt;

use crate::quadrature::{integrate_interval, QuadratureConfig, QuadratureResult};
use crate::Complex64;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Domain and convergence failures of the dispersion-integral evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialError {
    /// `Im w <= 0`: the defining integral crosses its pole.
    PoleOnAxis,
    /// Oracle tolerance not positive.
    InvalidTolerance,
    /// Oracle quadrature did not reach the requested tolerance.
    OracleDidNotConverge,
}

impl fmt::Display for SpecialError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PoleOnAxis => write!(f, "t0 requires Im w > 0"),
            Self::InvalidTolerance => write!(f, "oracle tolerance must be positive"),
            Self::OracleDidNotConverge => write!(f, "oracle quadrature did not converge"),
        }
    }
}

// Midpoint-rule step. The trapezoidal error scales like exp(-pi^2/h^2),
// which at h = 1/2 is ~7e-18, below double precision.
const STEP: f64 = 0.5;

// exp(-u_n^2) at the midpoint nodes u_n = (2n+1)/4, n = 0..18. Nodes beyond
// |u| = 9.25 contribute below 1e-37 and are dropped.
#[allow(clippy::excessive_precision)]
const NODE_WEIGHTS: [f64; 19] = [
    0.939_413_062_813_475_79,
    0.569_782_824_730_923_01,
    0.209_611_387_151_097_82,
    0.046_770_622_383_958_984,
    0.006_329_715_427_485_746_6,
    5.195_746_821_548_384_8e-4,
    2.586_810_022_265_412_1e-5,
    7.811_489_408_304_490_8e-7,
    1.430_724_191_856_768_8e-8,
    1.589_391_009_451_636_7e-10,
    1.070_923_238_250_807_6e-12,
    4.376_618_502_870_849_9e-15,
    1.084_855_264_042_937_8e-17,
    1.631_013_922_670_185_7e-20,
    1.487_292_181_651_270_6e-23,
    8.225_980_595_143_903_0e-27,
    2.759_509_067_522_042_0e-30,
    5.614_728_092_387_934_6e-34,
    6.929_124_938_815_710_0e-38,
];

// Crossover between the midpoint rule and the large-argument series.
const ASYMPTOTIC_RADIUS_SQ: f64 = 64.0;

/// Evaluates the plasma dispersion integral for `Im w > 0`.
///
/// Relative accuracy is a few units of 1e-13 or better over the arguments the
/// dispersion kernel produces (verified against [`t0_oracle`] in the tests).
pub fn t0(w: Complex64) -> Result<Complex64, SpecialError> {
    if w.im <= 0.0 || !w.is_finite() {
        return Err(SpecialError::PoleOnAxis);
    }
    if w.norm_sqr() >= ASYMPTOTIC_RADIUS_SQ {
        Ok(t0_asymptotic(w))
    } else {
        Ok(t0_midpoint(w))
    }
}

/// Large-argument expansion `-1/w * (1 + 1/(2w^2) + 3/(4w^4) + ...)`.
///
/// For `Im w > 0` the exponentially small remainder is below the optimal
/// truncation error, so the series alone is sufficient beyond the crossover.
fn t0_asymptotic(w: Complex64) -> Complex64 {
    let half_inv_w2 = (w * w * 2.0).inv();
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..40u32 {
        term *= half_inv_w2 * (2 * k + 1) as f64;
        sum += term;
        if term.norm_sqr() < 1e-34 * sum.norm_sqr() {
            break;
        }
    }
    -sum / w
}

/// `exp(re + i*im) - 1`, accurate when both parts are small.
fn complex_exp_m1(re: f64, im: f64) -> Complex64 {
    let half = libm::sin(0.5 * im);
    Complex64::new(
        libm::expm1(re) * libm::cos(im) - 2.0 * half * half,
        libm::exp(re) * libm::sin(im),
    )
}

/// Midpoint rule over the offset grid `u_n = (n + 1/2) h` plus the pole
/// correction `2i*sqrt(pi)*e^{-w^2} q/(1+q)` with `q = e^{2 pi i w/h}`.
///
/// The correction's phase is reduced modulo 2*pi analytically, and `1 + q`
/// goes through `expm1` near `q = -1`, so accuracy survives arguments close
/// to a grid node.
fn t0_midpoint(w: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for (n, weight) in NODE_WEIGHTS.iter().enumerate() {
        let u = (2 * n + 1) as f64 / 4.0;
        // Paired nodes +-u_n; the factored denominator keeps the
        // near-node subtraction exact.
        sum += (w * 2.0 * *weight) / ((u - w) * (u + w));
    }
    sum *= STEP / SQRT_PI;

    let (x, y) = (w.re, w.im);
    let cycles = x / STEP;
    let frac = cycles - libm::round(cycles);
    let theta = 2.0 * PI * frac;
    let decay = 2.0 * PI * y / STEP;

    let one_plus_q = if libm::cos(theta) < 0.0 {
        let phi = if theta > 0.0 { theta - PI } else { theta + PI };
        -complex_exp_m1(-decay, phi)
    } else {
        Complex64::new(1.0, 0.0) + Complex64::from_polar(libm::exp(-decay), theta)
    };

    let numerator = Complex64::from_polar(libm::exp(y * y - x * x - decay), theta - 2.0 * x * y);
    sum + Complex64::new(0.0, 2.0 * SQRT_PI) * numerator / one_plus_q
}

/// Integrates the defining integral directly with adaptive quadrature.
///
/// `tol` is a relative error target. The integration window
/// `|u| <= max(9, |Re w| + 9)` covers both the Gaussian mass and the pole
/// projection; the discarded tails are below `exp(-81)`.
pub fn t0_oracle(w: Complex64, tol: f64) -> Result<QuadratureResult, SpecialError> {
    if w.im <= 0.0 || !w.is_finite() {
        return Err(SpecialError::PoleOnAxis);
    }
    if tol <= 0.0 || tol.is_nan() {
        return Err(SpecialError::InvalidTolerance);
    }

    let reach = 9.0_f64;
    let limit = reach.max(w.re.abs() + reach);
    let cfg = QuadratureConfig {
        rel_tol: 0.5 * tol,
        abs_tol: (0.5 * tol * 1e-3).max(1e-300),
        max_depth: 48,
        max_evals: 4_000_000,
    };
    let breaks = [-6.5, 0.0, w.re, 6.5];
    let integrand = |u: f64| libm::exp(-u * u) / (Complex64::new(u, 0.0) - w);
    let mut result = integrate_interval(integrand, -limit, limit, &cfg, &breaks);
    result = QuadratureResult {
        value: result.value / SQRT_PI,
        err_estimate: result.err_estimate / SQRT_PI,
        ..result
    };
    if result.converged {
        Ok(result)
    } else {
        Err(SpecialError::OracleDidNotConverge)
    }
}
