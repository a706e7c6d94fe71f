//! Validation suite: every check this solver is required to pass, with its
//! tolerance pinned in code.
//!
//! The checks cover the closed-form impedance limits, the quadrature and
//! dispersion-function reference values, the resonance phenomenology of the
//! default sweep (peak location, peak scaling with collision rate, argument
//! step), and the field/distribution consistency identities. The CLI
//! `validate` subcommand and the `acceptance` test target both run these.

use std::time::Instant;

use plasmaskin_core::impedance::{
    anomalous_limit, decrement, impedance_from_derived, normal_limit,
};
use plasmaskin_core::params::derive_dimensionless;
use plasmaskin_core::quadrature::integrate_half_line;
use plasmaskin_core::special::{t0, t0_oracle};
use plasmaskin_core::{Complex64, DerivedParams, DispersionKernel, FieldSolver, QuadratureConfig};

use crate::record::{ImpedanceRecord, SweepSpec};
use crate::sweep::{find_peak, run_sweep, run_sweep_with_workers, unwrapped_args};

/// Outcome of one check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Pinned tolerances and runtime budgets.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub normal_rel: f64,
    pub normal_seconds: f64,
    pub anomalous_rel: f64,
    pub anomalous_seconds: f64,
    pub reference_integral_abs: f64,
    pub reference_integral_seconds: f64,
    pub dispersion_fn_rel: f64,
    pub dispersion_derivative_rel: f64,
    pub peak_gamma_tol: f64,
    pub peak_seconds: f64,
    pub ratio_target: f64,
    pub ratio_rel_tol: f64,
    pub ratio_seconds: f64,
    pub arg_step_min: f64,
    pub wall_field_rel: f64,
    pub kinetic_residual_rel: f64,
    pub specular_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            normal_rel: 0.01,
            normal_seconds: 1.0,
            anomalous_rel: 0.05,
            anomalous_seconds: 5.0,
            reference_integral_abs: 1e-8,
            reference_integral_seconds: 1.0,
            dispersion_fn_rel: 1e-9,
            dispersion_derivative_rel: 1e-5,
            peak_gamma_tol: 0.01,
            peak_seconds: 60.0,
            ratio_target: 95.0,
            ratio_rel_tol: 0.15,
            ratio_seconds: 300.0,
            arg_step_min: std::f64::consts::FRAC_PI_4,
            wall_field_rel: 1e-6,
            kinetic_residual_rel: 1e-4,
            specular_rel: 1e-8,
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn outcome(
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    started: Instant,
) -> CheckOutcome {
    CheckOutcome {
        id,
        name,
        passed,
        detail,
        seconds: started.elapsed().as_secs_f64(),
    }
}

/// 1: local-regime limit `Z0(alpha=1e-6, Omega=1e-3, Q=0) = (1-i)/sqrt(2)`.
pub fn check_normal_limit(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let cfg = QuadratureConfig::default();
    let params = DerivedParams::from_raw(1e-6, 1e-3, 0.0).unwrap();
    let (passed, detail) = match impedance_from_derived(&params, &cfg) {
        Ok(r) => {
            let deviation = rel(r.z0, normal_limit());
            let in_budget = started.elapsed().as_secs_f64() < tol.normal_seconds;
            (
                deviation <= tol.normal_rel && in_budget,
                format!(
                    "Z0 = {:.6}{:+.6}i, deviation {:.3e} (tol {:.0e}), {:.2}s",
                    r.z0.re,
                    r.z0.im,
                    deviation,
                    tol.normal_rel,
                    started.elapsed().as_secs_f64()
                ),
            )
        }
        Err(e) => (false, format!("decrement failed: {e}")),
    };
    outcome(1, "normal-skin limit", passed, detail, started)
}

/// 2: nonlocal-regime limit at `alpha = 1e8` within 5% of the closed form,
/// with monotonically shrinking deviation over `alpha in {1e4, 1e6, 1e8}`.
pub fn check_anomalous_limit(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut deviations = Vec::new();
    for alpha in [1e4, 1e6, 1e8] {
        let params = DerivedParams::from_raw(alpha, 1e-3, 0.0).unwrap();
        match impedance_from_derived(&params, &cfg) {
            Ok(r) => deviations.push(rel(r.z0, anomalous_limit(alpha))),
            Err(e) => {
                return outcome(
                    2,
                    "anomalous-skin limit",
                    false,
                    format!("decrement failed at alpha={alpha:e}: {e}"),
                    started,
                )
            }
        }
    }
    let monotone = deviations[0] > deviations[1] && deviations[1] > deviations[2];
    let within = deviations[2] <= tol.anomalous_rel;
    let in_budget = started.elapsed().as_secs_f64() < tol.anomalous_seconds;
    let detail = format!(
        "deviation from closed form at alpha=1e4,1e6,1e8: {:.4}, {:.4}, {:.4} \
         (tol {:.2} at 1e8, monotone decrease required), {:.2}s",
        deviations[0],
        deviations[1],
        deviations[2],
        tol.anomalous_rel,
        started.elapsed().as_secs_f64()
    );
    outcome(
        2,
        "anomalous-skin limit",
        within && monotone && in_budget,
        detail,
        started,
    )
}

/// 3: reference integrals `J1 = pi/3` and `J2 = pi/(3 sqrt(3))`.
pub fn check_reference_integrals(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let cfg = QuadratureConfig::default();
    let j1 = integrate_half_line(
        |t| Complex64::new(t.powi(4) / (t.powi(6) + 1.0), 0.0),
        &cfg,
        &[],
    );
    let j2 = integrate_half_line(|t| Complex64::new(t / (t.powi(6) + 1.0), 0.0), &cfg, &[]);
    let e1 = (j1.value.re - std::f64::consts::PI / 3.0).abs();
    let e2 = (j2.value.re - std::f64::consts::PI / (3.0 * 3f64.sqrt())).abs();
    let in_budget = started.elapsed().as_secs_f64() < tol.reference_integral_seconds;
    let passed = j1.converged
        && j2.converged
        && e1 <= tol.reference_integral_abs
        && e2 <= tol.reference_integral_abs
        && in_budget;
    let detail = format!(
        "J1 err {:.2e}, J2 err {:.2e} (tol {:.0e}), {:.2}s",
        e1,
        e2,
        tol.reference_integral_abs,
        started.elapsed().as_secs_f64()
    );
    outcome(3, "quadrature reference integrals", passed, detail, started)
}

/// 4: fast dispersion function against its quadrature oracle, plus the
/// derivative identity `dt0/dw = -2 (1 + w t0)`.
pub fn check_dispersion_function(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let mut worst_rel = 0.0_f64;
    for omega_tau in [0.0, 1.0, 1e3] {
        for i in 0..100 {
            let t = 10f64.powf(-3.0 + 6.0 * i as f64 / 99.0);
            let w = Complex64::new(omega_tau * t, t);
            let fast = t0(w).unwrap();
            let oracle = match t0_oracle(w, 1e-12) {
                Ok(r) => r.value,
                Err(e) => {
                    return outcome(
                        4,
                        "dispersion function vs oracle",
                        false,
                        format!("oracle failed at w={w}: {e}"),
                        started,
                    )
                }
            };
            worst_rel = worst_rel.max(rel(fast, oracle));
        }
    }

    let mut worst_derivative = 0.0_f64;
    let mut state = 0x7357u64;
    let mut unit = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..20 {
        let w = Complex64::new(-6.0 + 12.0 * unit(), 0.1 + 9.9 * unit());
        let h = 1e-6 * w.norm().max(0.1);
        let numeric = (t0(w + Complex64::new(h, 0.0)).unwrap()
            - t0(w - Complex64::new(h, 0.0)).unwrap())
            / (2.0 * h);
        let analytic = (Complex64::new(1.0, 0.0) + w * t0(w).unwrap()) * -2.0;
        worst_derivative = worst_derivative.max(rel(numeric, analytic));
    }

    let passed =
        worst_rel <= tol.dispersion_fn_rel && worst_derivative <= tol.dispersion_derivative_rel;
    let detail = format!(
        "fast-vs-oracle worst rel {:.2e} (tol {:.0e}); derivative identity worst rel {:.2e} \
         (tol {:.0e})",
        worst_rel, tol.dispersion_fn_rel, worst_derivative, tol.dispersion_derivative_rel
    );
    outcome(4, "dispersion function vs oracle", passed, detail, started)
}

/// The 141-point default sweep at a given collision ratio.
pub fn resonance_sweep(epsilon: f64, workers: Option<usize>) -> Vec<ImpedanceRecord> {
    let spec = SweepSpec::new((0.5, 1.2), 141, epsilon, 1e-3).expect("valid spec");
    match workers {
        Some(n) => run_sweep_with_workers(&spec, n),
        None => run_sweep(&spec),
    }
}

/// 5: `argmax |Z0|` of the default sweep sits at `gamma = 1.00 +- 0.01`,
/// single-threaded within budget.
pub fn check_peak_location(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let records = resonance_sweep(1e-3, Some(1));
    let elapsed = started.elapsed().as_secs_f64();
    let (passed, detail) = match find_peak(&records) {
        Ok(peak) => {
            let near_one = (peak.gamma_star - 1.0).abs() <= tol.peak_gamma_tol;
            let in_budget = elapsed < tol.peak_seconds;
            (
                near_one && in_budget,
                format!(
                    "gamma* = {:.4} (target 1.00 +- {:.2}), peak |Z0| = {:.4e}, {:.1}s \
                     single-threaded (budget {:.0}s)",
                    peak.gamma_star, tol.peak_gamma_tol, peak.peak_value, elapsed, tol.peak_seconds
                ),
            )
        }
        Err(e) => (false, format!("peak detection failed: {e}")),
    };
    outcome(5, "resonance peak location", passed, detail, started)
}

/// 6: peak `|Z0|` ratio between `epsilon = 1e-4` and `1e-2`.
pub fn check_epsilon_scaling(
    tol: &Tolerances,
    sweep_fine: &[ImpedanceRecord],
    sweep_coarse: &[ImpedanceRecord],
    elapsed_seconds: f64,
) -> CheckOutcome {
    let started = Instant::now();
    let fine_peak = sweep_fine.iter().map(|r| r.abs_z0).fold(0.0, f64::max);
    let coarse_peak = sweep_coarse.iter().map(|r| r.abs_z0).fold(0.0, f64::max);
    let ratio = fine_peak / coarse_peak;
    let within = (ratio - tol.ratio_target).abs() <= tol.ratio_rel_tol * tol.ratio_target;
    let stragglers_fine = sweep_fine.iter().filter(|r| !r.converged).count();
    let stragglers_coarse = sweep_coarse.iter().filter(|r| !r.converged).count();
    let in_budget = elapsed_seconds < tol.ratio_seconds;
    let passed = within && in_budget && stragglers_fine == 0 && stragglers_coarse == 0;
    let detail = format!(
        "peak(eps=1e-4)/peak(eps=1e-2) = {:.2} (target {} +- {:.0}%), non-converged points \
         {}/{}, sweeps took {:.1}s (budget {:.0}s)",
        ratio,
        tol.ratio_target,
        100.0 * tol.ratio_rel_tol,
        stragglers_fine,
        stragglers_coarse,
        elapsed_seconds,
        tol.ratio_seconds
    );
    outcome(6, "collision-rate peak scaling", passed, detail, started)
}

/// 7: the unwrapped argument changes by at least `pi/4` within
/// `|gamma - 1| < 0.05` on the `epsilon = 1e-4` sweep.
pub fn check_argument_step(tol: &Tolerances, sweep_fine: &[ImpedanceRecord]) -> CheckOutcome {
    let started = Instant::now();
    let args = unwrapped_args(sweep_fine);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (r, a) in sweep_fine.iter().zip(&args) {
        if (r.gamma - 1.0).abs() < 0.05 {
            lo = lo.min(*a);
            hi = hi.max(*a);
        }
    }
    let step = hi - lo;
    let passed = step.is_finite() && step >= tol.arg_step_min;
    let detail = format!(
        "unwrapped arg range within |gamma-1|<0.05 is {:.4} rad (>= {:.4} required)",
        step, tol.arg_step_min
    );
    outcome(7, "argument step at resonance", passed, detail, started)
}

/// 8: wall field equals minus the decrement on both anchor parameter sets.
pub fn check_wall_field_consistency(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut worst = 0.0_f64;
    let mut detail_parts = Vec::new();
    let cases = [
        (
            "alpha=1,Omega=1,Q=0",
            DerivedParams::from_raw(1.0, 1.0, 0.0).unwrap(),
        ),
        (
            "gamma=1,eps=1e-3,v_c=1e-3",
            derive_dimensionless(1.0, 1e-3, 1e-3, true).unwrap(),
        ),
    ];
    for (label, params) in cases {
        let kernel = DispersionKernel::new(params);
        let lambda = match decrement(&kernel, &cfg) {
            Ok((v, _)) => v,
            Err(e) => {
                return outcome(
                    8,
                    "wall field vs decrement",
                    false,
                    format!("{label}: decrement failed: {e}"),
                    started,
                )
            }
        };
        let profile = FieldSolver::new(kernel)
            .field_profile(&[0.0], &cfg)
            .expect("depth 0 is valid");
        let deviation = rel(profile.e_vals[0], -lambda);
        worst = worst.max(deviation);
        detail_parts.push(format!("{label}: rel {:.2e}", deviation));
    }
    let passed = worst <= tol.wall_field_rel;
    let detail = format!(
        "{} (tol {:.0e})",
        detail_parts.join("; "),
        tol.wall_field_rel
    );
    outcome(8, "wall field vs decrement", passed, detail, started)
}

/// 9: kinetic residual `mu dh/dx + z0 h - e = 0` at four interior points.
pub fn check_kinetic_residual(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let cfg = QuadratureConfig::default().with_rel_tol(1e-9);
    let params = DerivedParams::from_raw(1.0, 1.0, 0.0).unwrap();
    let solver = FieldSolver::new(DispersionKernel::new(params));
    let z0 = solver.kernel().z0();
    let delta = 5e-3;
    let mut worst = 0.0_f64;
    for &x in &[0.5, 1.0] {
        for &mu in &[0.3, 1.0] {
            let h = solver.distribution_profile(x, &[mu], &cfg).unwrap().h_vals[0];
            let h_plus = solver
                .distribution_profile(x + delta, &[mu], &cfg)
                .unwrap()
                .h_vals[0];
            let h_minus = solver
                .distribution_profile(x - delta, &[mu], &cfg)
                .unwrap()
                .h_vals[0];
            let e = solver.field_profile(&[x], &cfg).unwrap().e_vals[0];
            let residual = ((h_plus - h_minus) / (2.0 * delta)) * mu + z0 * h - e;
            worst = worst.max(residual.norm() / e.norm());
        }
    }
    let passed = worst <= tol.kinetic_residual_rel;
    let detail = format!(
        "worst relative residual {:.2e} over (x, mu) in {{0.5, 1}} x {{0.3, 1}} (tol {:.0e})",
        worst, tol.kinetic_residual_rel
    );
    outcome(9, "kinetic equation residual", passed, detail, started)
}

/// 10: specular reflection symmetry `h(0, mu) = h(0, -mu)`.
pub fn check_specular_symmetry(tol: &Tolerances) -> CheckOutcome {
    let started = Instant::now();
    let cfg = QuadratureConfig::default();
    let params = DerivedParams::from_raw(1.0, 1.0, 0.0).unwrap();
    let solver = FieldSolver::new(DispersionKernel::new(params));
    let mut worst = 0.0_f64;
    for mu in [0.1, 0.5, 1.0, 2.0] {
        let profile = solver.distribution_profile(0.0, &[mu, -mu], &cfg).unwrap();
        worst = worst.max(rel(profile.h_vals[0], profile.h_vals[1]));
    }
    let passed = worst <= tol.specular_rel;
    let detail = format!(
        "worst relative asymmetry {:.2e} over mu in {{0.1, 0.5, 1, 2}} (tol {:.0e})",
        worst, tol.specular_rel
    );
    outcome(10, "specular wall symmetry", passed, detail, started)
}

/// Runs all checks in order, sharing the expensive sweeps.
pub fn run_all(tol: &Tolerances) -> Vec<CheckOutcome> {
    let mut out = Vec::with_capacity(10);
    out.push(check_normal_limit(tol));
    out.push(check_anomalous_limit(tol));
    out.push(check_reference_integrals(tol));
    out.push(check_dispersion_function(tol));
    out.push(check_peak_location(tol));

    let sweeps_started = Instant::now();
    let fine = resonance_sweep(1e-4, None);
    let coarse = resonance_sweep(1e-2, None);
    let sweep_seconds = sweeps_started.elapsed().as_secs_f64();
    out.push(check_epsilon_scaling(tol, &fine, &coarse, sweep_seconds));
    out.push(check_argument_step(tol, &fine));

    out.push(check_wall_field_consistency(tol));
    out.push(check_kinetic_residual(tol));
    out.push(check_specular_symmetry(tol));
    out
}

/// Formats the outcomes as the table `validate` prints.
pub fn render_table(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&format!(
            "{:>2}  {:<32} {}  [{:7.2}s]  {}\n",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.seconds,
            o.detail
        ));
    }
    let failures = outcomes.iter().filter(|o| !o.passed).count();
    s.push_str(&format!(
        "{} of {} checks passed\n",
        outcomes.len() - failures,
        outcomes.len()
    ));
    s
}
