//! Spatial profiles of the electric field and the electron distribution
//! perturbation.
//!
//! Both profiles are inverse Fourier transforms of spectral densities built
//! from the dispersion kernel:
//!
//! ```text
//! E(k)       = -2 e_s' / (k^2 lambda(k))
//! Phi(k, mu) = E(k) / (i k mu + z0)
//! ```
//!
//! Evenness of `lambda` reduces `e(x)` to a cosine transform, and `h(x, mu)`
//! to a cosine plus a sine transform after splitting the spectral density
//! into its even and odd parts in `k`:
//!
//! ```text
//! e(x)     = -(2 e_s'/pi) int_0^inf cos(kx) / (k^2 lambda(k)) dk
//! h(x, mu) = -(2 e_s'/pi) int_0^inf [z0 cos(kx) + mu k sin(kx)]
//!                                   / ((z0^2 + mu^2 k^2) k^2 lambda(k)) dk
//! ```
//!
//! At the wall these reduce to the decrement, `e(0) = -e_s' Lambda`, which
//! the tests use as a cross-module consistency anchor. All outputs are
//! linear in the wall gradient `e_s'` (1 by default).

use alloc::vec::Vec;
use core::fmt;

use crate::dispersion::{DispersionError, DispersionKernel};
use crate::quadrature::{
    integrate_oscillatory_cosine, integrate_oscillatory_sine, QuadratureConfig, QuadratureResult,
};
use crate::Complex64;

/// Domain errors of the profile evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldsError {
    /// Spectral densities are singular at `k = 0`.
    ZeroWavenumber,
    /// Depths must be finite and non-negative.
    InvalidDepth,
}

impl fmt::Display for FieldsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroWavenumber => write!(f, "spectral density is singular at k = 0"),
            Self::InvalidDepth => write!(f, "depths must be finite and non-negative"),
        }
    }
}

impl From<DispersionError> for FieldsError {
    fn from(_: DispersionError) -> Self {
        Self::ZeroWavenumber
    }
}

/// Electric-field profile over a set of depths (mean-free-path units).
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub xs: Vec<f64>,
    pub e_vals: Vec<Complex64>,
    /// Per-depth quadrature diagnostics.
    pub meta: Vec<QuadratureResult>,
}

/// Distribution perturbation at one depth over a set of velocity cosines.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionProfile {
    pub x: f64,
    pub mus: Vec<f64>,
    pub h_vals: Vec<Complex64>,
    /// Per-`mu` quadrature diagnostics (cosine and sine parts combined).
    pub meta: Vec<QuadratureResult>,
}

/// Profile evaluator bound to one kernel and wall gradient.
#[derive(Debug, Clone, Copy)]
pub struct FieldSolver {
    kernel: DispersionKernel,
    e_s_prime: f64,
}

impl FieldSolver {
    /// Solver with the default wall gradient `e_s' = 1`.
    pub fn new(kernel: DispersionKernel) -> Self {
        Self {
            kernel,
            e_s_prime: 1.0,
        }
    }

    /// Overrides the wall gradient; all outputs scale linearly with it.
    pub fn with_gradient(mut self, e_s_prime: f64) -> Self {
        self.e_s_prime = e_s_prime;
        self
    }

    pub fn kernel(&self) -> &DispersionKernel {
        &self.kernel
    }

    /// Spectral density of the field, `E(k) = -2 e_s'/(k^2 lambda(k))`.
    pub fn spectral_field(&self, k: f64) -> Result<Complex64, FieldsError> {
        Ok(-self.kernel.k_sq_lambda(k)?.inv() * (2.0 * self.e_s_prime))
    }

    /// Spectral density of the distribution, `Phi(k, mu) = E(k)/(i k mu + z0)`.
    pub fn spectral_distribution(&self, k: f64, mu: f64) -> Result<Complex64, FieldsError> {
        let denominator = self.kernel.z0() + Complex64::new(0.0, k * mu);
        Ok(self.spectral_field(k)? / denominator)
    }

    /// Field profile on the given depths.
    pub fn field_profile(
        &self,
        xs: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<FieldProfile, FieldsError> {
        validate_depths(xs)?;
        let mut e_vals = Vec::with_capacity(xs.len());
        let mut meta = Vec::with_capacity(xs.len());
        for &x in xs {
            let transform =
                integrate_oscillatory_cosine(|k| self.kernel.k_sq_lambda_raw(k).inv(), x, cfg);
            e_vals.push(transform.value * (-2.0 * self.e_s_prime / core::f64::consts::PI));
            meta.push(transform);
        }
        Ok(FieldProfile {
            xs: xs.to_vec(),
            e_vals,
            meta,
        })
    }

    /// Distribution perturbation at depth `x` for each velocity cosine.
    pub fn distribution_profile(
        &self,
        x: f64,
        mus: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<DistributionProfile, FieldsError> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(FieldsError::InvalidDepth);
        }
        let z0 = self.kernel.z0();
        let z0_sq = z0 * z0;
        let mut h_vals = Vec::with_capacity(mus.len());
        let mut meta = Vec::with_capacity(mus.len());
        for &mu in mus {
            let even = |k: f64| {
                z0 / (self.kernel.k_sq_lambda_raw(k)
                    * (z0_sq + Complex64::new(mu * mu * k * k, 0.0)))
            };
            let odd = |k: f64| {
                (self.kernel.k_sq_lambda_raw(k) * (z0_sq + Complex64::new(mu * mu * k * k, 0.0)))
                    .inv()
                    * (mu * k)
            };
            let cosine = integrate_oscillatory_cosine(even, x, cfg);
            let sine = integrate_oscillatory_sine(odd, x, cfg);
            let scale = -2.0 * self.e_s_prime / core::f64::consts::PI;
            h_vals.push((cosine.value + sine.value) * scale);
            meta.push(QuadratureResult {
                value: (cosine.value + sine.value) * scale,
                err_estimate: (cosine.err_estimate + sine.err_estimate) * scale.abs(),
                n_evals: cosine.n_evals + sine.n_evals,
                converged: cosine.converged && sine.converged,
                worst_panel: if cosine.err_estimate >= sine.err_estimate {
                    cosine.worst_panel
                } else {
                    sine.worst_panel
                },
            });
        }
        Ok(DistributionProfile {
            x,
            mus: mus.to_vec(),
            h_vals,
            meta,
        })
    }
}

fn validate_depths(xs: &[f64]) -> Result<(), FieldsError> {
    if xs.iter().all(|x| x.is_finite() && *x >= 0.0) {
        Ok(())
    } else {
        Err(FieldsError::InvalidDepth)
    }
}

/// Default depth grid: 64 points, logarithmic over `[1e-2, 1e2]` mean free
/// paths, spanning both the local and nonlocal decay scales.
pub fn default_depth_grid() -> Vec<f64> {
    let n = 64;
    (0..n)
        .map(|i| libm::pow(10.0, -2.0 + 4.0 * i as f64 / (n - 1) as f64))
        .collect()
}
