//! Sweep specifications and per-point records.

use std::fmt;

use plasmaskin_core::{Complex64, DerivedParams, QuadratureConfig};

/// One evaluated sweep point.
///
/// `gamma`, `epsilon` and `v_c` are NaN when the point was specified through
/// the raw `(alpha, Omega, Q)` route rather than the resonance triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpedanceRecord {
    pub gamma: f64,
    pub epsilon: f64,
    pub v_c: f64,
    pub alpha: f64,
    pub omega_tau: f64,
    pub q: f64,
    pub re_z0: f64,
    pub im_z0: f64,
    pub abs_z0: f64,
    pub arg_z0: f64,
    pub converged: bool,
    pub n_evals: u64,
}

impl ImpedanceRecord {
    pub fn new(
        scenario: (f64, f64, f64),
        params: &DerivedParams,
        z0: Complex64,
        converged: bool,
        n_evals: u64,
    ) -> Self {
        Self {
            gamma: scenario.0,
            epsilon: scenario.1,
            v_c: scenario.2,
            alpha: params.alpha,
            omega_tau: params.omega_tau,
            q: params.q,
            re_z0: z0.re,
            im_z0: z0.im,
            abs_z0: z0.norm(),
            arg_z0: z0.arg(),
            converged,
            n_evals,
        }
    }
}

/// Invalid sweep specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSpecError {
    BadGammaRange,
    TooFewPoints,
    BadScenario,
}

impl fmt::Display for SweepSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BadGammaRange => {
                write!(f, "gamma range must satisfy 0.05 <= lo < hi, both finite")
            }
            Self::TooFewPoints => write!(f, "a sweep needs at least 2 points"),
            Self::BadScenario => write!(f, "epsilon must be positive and v_c in (0, 1)"),
        }
    }
}

impl std::error::Error for SweepSpecError {}

/// A uniform sweep of `gamma` at fixed `epsilon`, `v_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub gamma_lo: f64,
    pub gamma_hi: f64,
    pub n_points: usize,
    pub epsilon: f64,
    pub v_c: f64,
    pub include_displacement: bool,
    pub cfg: QuadratureConfig,
}

impl SweepSpec {
    pub fn new(
        gamma_range: (f64, f64),
        n_points: usize,
        epsilon: f64,
        v_c: f64,
    ) -> Result<Self, SweepSpecError> {
        let (lo, hi) = gamma_range;
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.05 && lo < hi) {
            return Err(SweepSpecError::BadGammaRange);
        }
        if n_points < 2 {
            return Err(SweepSpecError::TooFewPoints);
        }
        if !(epsilon > 0.0 && epsilon.is_finite() && v_c > 0.0 && v_c < 1.0) {
            return Err(SweepSpecError::BadScenario);
        }
        Ok(Self {
            gamma_lo: lo,
            gamma_hi: hi,
            n_points,
            epsilon,
            v_c,
            include_displacement: true,
            cfg: QuadratureConfig::default(),
        })
    }

    pub fn with_displacement(mut self, on: bool) -> Self {
        self.include_displacement = on;
        self
    }

    pub fn with_config(mut self, cfg: QuadratureConfig) -> Self {
        self.cfg = cfg;
        self
    }

    /// The `i`-th grid value of `gamma`.
    pub fn gamma_at(&self, i: usize) -> f64 {
        let frac = i as f64 / (self.n_points - 1) as f64;
        self.gamma_lo + (self.gamma_hi - self.gamma_lo) * frac
    }
}

impl Default for SweepSpec {
    /// The default resonance scan: 141 points over `gamma in [0.5, 1.2]`
    /// (step 0.005) at `epsilon = v_c = 1e-3`, displacement current on.
    fn default() -> Self {
        SweepSpec::new((0.5, 1.2), 141, 1e-3, 1e-3).expect("default spec is valid")
    }
}

/// Location and sharpness of the `|Z0|` maximum of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakReport {
    /// Interpolated `gamma` of the maximum.
    pub gamma_star: f64,
    /// Interpolated `|Z0|` at the maximum.
    pub peak_value: f64,
    /// Largest adjacent-sample change of the unwrapped argument within
    /// `|gamma - gamma_star| < 0.05`.
    pub arg_jump: f64,
}
