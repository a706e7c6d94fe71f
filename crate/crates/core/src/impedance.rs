//! Field decrement and surface impedance.
//!
//! The wall-field decrement is the half-line integral
//!
//! ```text
//! Lambda(alpha, Omega) = (2/pi) * int_0^inf dt / lambda(1/t),
//! ```
//!
//! and the dimensionless impedance follows by one multiplication,
//! `Z0 = -i sqrt(alpha) * Lambda`. The physical impedance is `Z = R * Z0`
//! with the scale `R` from [`crate::params::PhysicalInputs`].
//!
//! Two closed-form regimes serve as cross-checks: the local (normal) limit
//! `Z0 = (1 - i)/sqrt(2)` for `alpha << 1`, and the nonlocal (anomalous)
//! low-frequency form `Z0 = (2 alpha^{1/6}/(3 sqrt(3))) (1 - i sqrt(3))`
//! for `alpha >> 1`.

use core::fmt;

use crate::dispersion::DispersionKernel;
use crate::params::{DerivedParams, ParamsError, PhysicalInputs, ScenarioParams};
use crate::quadrature::{integrate_half_line, QuadratureConfig, QuadratureResult};
use crate::Complex64;

const FRAC_2_PI: f64 = core::f64::consts::FRAC_2_PI;

/// Failures while computing the decrement or impedance.
#[derive(Debug, Clone, PartialEq)]
pub enum ImpedanceError {
    /// The decrement quadrature did not converge; carries the best estimate
    /// and the location of the worst panel (in `t`).
    NonConvergence {
        value: Complex64,
        err_estimate: f64,
        n_evals: u64,
        worst_panel: (f64, f64),
    },
    /// Invalid parameters on the physical route.
    Params(ParamsError),
}

impl fmt::Display for ImpedanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonConvergence {
                err_estimate,
                n_evals,
                worst_panel,
                ..
            } => write!(
                f,
                "decrement quadrature did not converge (err ~ {err_estimate:.3e} after {n_evals} \
                 evaluations, worst panel t in [{:.6e}, {:.6e}])",
                worst_panel.0, worst_panel.1
            ),
            Self::Params(e) => write!(f, "invalid physical inputs: {e}"),
        }
    }
}

impl From<ParamsError> for ImpedanceError {
    fn from(e: ParamsError) -> Self {
        Self::Params(e)
    }
}

/// One impedance evaluation with its quadrature metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedanceResult {
    /// Decrement `Lambda`.
    pub lambda: Complex64,
    /// Dimensionless impedance `Z0 = -i sqrt(alpha) Lambda`.
    pub z0: Complex64,
    /// `|Z0|`.
    pub abs_z0: f64,
    /// Principal argument of `Z0`, in `(-pi, pi]`.
    pub arg_z0: f64,
    /// Quadrature diagnostics of the decrement integral.
    pub quadrature: QuadratureResult,
}

/// Local-regime closed form `(1 - i)/sqrt(2)`.
pub fn normal_limit() -> Complex64 {
    Complex64::new(
        core::f64::consts::FRAC_1_SQRT_2,
        -core::f64::consts::FRAC_1_SQRT_2,
    )
}

/// Nonlocal low-frequency closed form `(2 alpha^{1/6}/(3 sqrt(3))) (1 - i sqrt(3))`.
pub fn anomalous_limit(alpha: f64) -> Complex64 {
    assert!(alpha > 0.0 && alpha.is_finite(), "alpha must be positive");
    let magnitude = 2.0 * libm::pow(alpha, 1.0 / 6.0) / (3.0 * libm::sqrt(3.0));
    Complex64::new(magnitude, -magnitude * libm::sqrt(3.0))
}

// Near-zero scan used ahead of the decrement integral.
const SCAN_RANGE: (f64, f64) = (1e-6, 1e6);
const SCAN_SAMPLES: usize = 8192;
const SCAN_THRESHOLD: f64 = 1e-2;

/// Computes the decrement `Lambda` for one kernel.
///
/// Dips of `|lambda(1/t)|` below 0.01 are located first and passed to the
/// quadrature as forced panel boundaries; without them the near-poles just
/// above plasma resonance can hide between panel nodes.
pub fn decrement(
    kernel: &DispersionKernel,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, QuadratureResult), ImpedanceError> {
    let brackets = kernel.scan_near_zeros(SCAN_RANGE, SCAN_SAMPLES, SCAN_THRESHOLD);
    let raw = integrate_half_line(|t| kernel.lambda_inv_t_raw(t).inv(), cfg, &brackets);
    let result = QuadratureResult {
        value: raw.value * FRAC_2_PI,
        err_estimate: raw.err_estimate * FRAC_2_PI,
        ..raw
    };
    if !result.converged {
        return Err(ImpedanceError::NonConvergence {
            value: result.value,
            err_estimate: result.err_estimate,
            n_evals: result.n_evals,
            worst_panel: result.worst_panel,
        });
    }
    Ok((result.value, result))
}

/// Applies `Z0 = -i sqrt(alpha) Lambda` to a computed decrement.
pub fn impedance_from_decrement(alpha: f64, lambda: Complex64) -> Complex64 {
    Complex64::new(0.0, -libm::sqrt(alpha)) * lambda
}

/// Impedance for a solver-facing parameter set.
pub fn impedance_from_derived(
    params: &DerivedParams,
    cfg: &QuadratureConfig,
) -> Result<ImpedanceResult, ImpedanceError> {
    let kernel = DispersionKernel::new(*params);
    let (lambda, quadrature) = decrement(&kernel, cfg)?;
    let z0 = impedance_from_decrement(params.alpha, lambda);
    Ok(ImpedanceResult {
        lambda,
        z0,
        abs_z0: z0.norm(),
        arg_z0: z0.arg(),
        quadrature,
    })
}

/// Impedance for a resonance-region scenario.
pub fn impedance_from_scenario(
    scenario: &ScenarioParams,
    include_displacement: bool,
    cfg: &QuadratureConfig,
) -> Result<ImpedanceResult, ImpedanceError> {
    impedance_from_derived(
        &DerivedParams::from_scenario(scenario, include_displacement),
        cfg,
    )
}

/// Physical impedance `Z = R * Z0` in Gaussian units.
pub fn impedance_physical(
    inputs: &PhysicalInputs,
    cfg: &QuadratureConfig,
) -> Result<Complex64, ImpedanceError> {
    let scenario = inputs.scenario()?;
    let result = impedance_from_scenario(&scenario, true, cfg)?;
    Ok(result.z0 * inputs.impedance_scale())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_half_line;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn derived(alpha: f64, omega_tau: f64, q: f64) -> DerivedParams {
        DerivedParams::from_raw(alpha, omega_tau, q).unwrap()
    }

    #[test]
    fn closed_forms() {
        let n = normal_limit();
        assert!((n - Complex64::new(1.0, -1.0) / libm::sqrt(2.0)).norm() < 1e-15);

        let a1 = anomalous_limit(1.0);
        assert!((a1.re - 0.384_900_179_459_750_5).abs() < 1e-14);
        assert!((a1.im + 0.384_900_179_459_750_5 * libm::sqrt(3.0)).abs() < 1e-13);
        assert!((a1.im + 0.666_666_666_666_666_6).abs() < 2e-3);

        // |anomalous_limit| scales like alpha^{1/6}.
        for alpha in [1e2, 1e5, 1e9] {
            let ratio = anomalous_limit(64.0 * alpha).norm() / anomalous_limit(alpha).norm();
            assert!((ratio - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normal_regime_decrement() {
        let cfg = QuadratureConfig::default();
        let kernel = DispersionKernel::new(derived(1e-6, 1e-3, 0.0));
        let (lambda, quad) = decrement(&kernel, &cfg).unwrap();
        assert!(quad.converged);
        // Inverting Z0 = (1-i)/sqrt(2) through Z0 = -i sqrt(alpha) Lambda
        // gives Lambda = (1+i)/(sqrt(2) sqrt(alpha)) = 707.11 (1+i).
        let expect = Complex64::new(707.106_781_186_547_5, 707.106_781_186_547_5);
        assert!(rel(lambda, expect) < 0.01, "{lambda}");
    }

    #[test]
    fn decrement_agrees_with_wavenumber_route() {
        // Same integral in the k variable: (2/pi) int_0^inf dk/(k^2 lambda(k)).
        let cfg = QuadratureConfig::default();
        for params in [derived(1.0, 1.0, 0.0), derived(1e3, 1e3, 1.0)] {
            let kernel = DispersionKernel::new(params);
            let (lambda_t, _) = decrement(&kernel, &cfg).unwrap();
            let via_k = integrate_half_line(|k| kernel.k_sq_lambda_raw(k).inv(), &cfg, &[]);
            assert!(via_k.converged);
            let lambda_k = via_k.value * FRAC_2_PI;
            assert!(rel(lambda_t, lambda_k) < 1e-6, "{lambda_t} vs {lambda_k}");
        }
    }

    #[test]
    fn impedance_identity_is_exact() {
        let cfg = QuadratureConfig::default();
        for params in [
            derived(1e-6, 1e-3, 0.0),
            derived(1.0, 1.0, 0.0),
            derived(1e3, 1e3, 1.0),
        ] {
            let r = impedance_from_derived(&params, &cfg).unwrap();
            let residue = r.z0 + Complex64::new(0.0, libm::sqrt(params.alpha)) * r.lambda;
            assert_eq!(residue, Complex64::new(0.0, 0.0));
            assert!((r.abs_z0 - r.z0.norm()).abs() == 0.0);
            assert!(r.arg_z0 > -core::f64::consts::PI && r.arg_z0 <= core::f64::consts::PI);
        }
    }

    #[test]
    fn normal_limit_convergence_is_monotone() {
        let cfg = QuadratureConfig::default().with_rel_tol(1e-9);
        let mut deviations = [0.0; 3];
        for (i, alpha) in [1e-2, 1e-4, 1e-6].iter().enumerate() {
            let r = impedance_from_derived(&derived(*alpha, 1e-3, 0.0), &cfg).unwrap();
            deviations[i] = (r.z0 - normal_limit()).norm() / normal_limit().norm();
        }
        assert!(deviations[0] > deviations[1] && deviations[1] > deviations[2]);
        assert!(deviations[2] < 0.01, "residual deviation {}", deviations[2]);
    }

    #[test]
    fn anomalous_regime_matches_reference_values() {
        // Frozen from an independent high-precision evaluation of the same
        // integral (30-digit arithmetic, erfc-based kernel).
        let cases = [
            (1e4, Complex64::new(1.553_139_311, -2.600_102_349)),
            (1e6, Complex64::new(3.215_148_530, -5.528_572_482)),
            (1e8, Complex64::new(6.868_037_451, -11.877_367_42)),
        ];
        let cfg = QuadratureConfig::default().with_rel_tol(1e-9);
        for (alpha, expect) in cases {
            let r = impedance_from_derived(&derived(alpha, 1e-3, 0.0), &cfg).unwrap();
            assert!(
                rel(r.z0, expect) < 1e-6,
                "alpha={alpha}: {} vs {expect}",
                r.z0
            );
        }
    }

    #[test]
    fn computed_impedance_follows_sixth_root_scaling() {
        let cfg = QuadratureConfig::default();
        let a = impedance_from_derived(&derived(1e6, 1e-3, 0.0), &cfg).unwrap();
        let b = impedance_from_derived(&derived(1e8, 1e-3, 0.0), &cfg).unwrap();
        let ratio = b.abs_z0 / a.abs_z0;
        let sixth_root = libm::pow(100.0, 1.0 / 6.0);
        assert!((ratio / sixth_root - 1.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn tolerance_tightening_stays_within_estimate() {
        let cfg = QuadratureConfig::default();
        let tight = cfg.with_rel_tol(0.5 * cfg.rel_tol);
        let kernel = DispersionKernel::new(derived(1e3, 1e3, 1.0));
        let (coarse, quad) = decrement(&kernel, &cfg).unwrap();
        let (fine, _) = decrement(&kernel, &tight).unwrap();
        assert!((coarse - fine).norm() <= quad.err_estimate.max(1e-14));
    }

    #[test]
    fn physical_route_is_consistent() {
        let cfg = QuadratureConfig::default();
        let p = PhysicalInputs::new(1e12, 3000.0, 5.6e7, 5.0e10).unwrap();

        let z = impedance_physical(&p, &cfg).unwrap();
        assert!(z.re.is_finite() && z.im.is_finite());

        // Z = R Z0 must equal -i (4 pi omega l / c^2) Lambda.
        let scenario = p.scenario().unwrap();
        let r = impedance_from_scenario(&scenario, true, &cfg).unwrap();
        let direct = Complex64::new(0.0, -1.0)
            * (4.0 * core::f64::consts::PI * p.omega * p.mean_free_path()
                / (crate::params::SPEED_OF_LIGHT * crate::params::SPEED_OF_LIGHT))
            * r.lambda;
        let via_scale = r.z0 * p.impedance_scale();
        assert!(rel(via_scale, direct) < 1e-10, "{via_scale} vs {direct}");
    }

    #[test]
    fn physical_impedance_scales_like_sqrt_omega_at_low_frequency() {
        let cfg = QuadratureConfig::default();
        let nu = 5.6e7;
        let base = PhysicalInputs::new(1e12, 3000.0, nu, 1e4).unwrap();
        let quarter = PhysicalInputs::new(1e12, 3000.0, nu, 2.5e3).unwrap();
        let z1 = impedance_physical(&base, &cfg).unwrap();
        let z2 = impedance_physical(&quarter, &cfg).unwrap();
        assert!((z2.norm() / z1.norm() - 0.5).abs() < 1e-3);
    }
}
