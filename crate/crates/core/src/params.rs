//! Parameter sets and the dimensionless mapping.
//!
//! The solver-facing parameters are the anomaly parameter `alpha`, the
//! collision number `Omega = omega*tau`, the retardation number
//! `Q = omega*l/c` and the complex collision factor `z0 = 1 - i*Omega`.
//! Near plasma resonance it is more convenient to specify
//! `gamma = omega/omega_p`, `epsilon = nu/omega_p` and `v_c = v_T/c`; the
//! mapping is
//!
//! ```text
//! alpha = gamma*v_c^2/epsilon^3,   Omega = gamma/epsilon,   Q = gamma*v_c/epsilon.
//! ```
//!
//! A thin physical layer converts Gaussian-unit inputs `(n, T, nu, omega)`
//! into the scenario triple together with the impedance scale
//! `R = sqrt(4*pi*omega/(c^2*sigma_0))`.

use core::fmt;

use crate::Complex64;

/// Elementary charge (statC).
pub const ELEMENTARY_CHARGE: f64 = 4.803_204_713e-10;

/// Electron mass (g).
pub const ELECTRON_MASS: f64 = 9.109_383_702e-28;

/// Boltzmann constant (erg/K).
pub const BOLTZMANN: f64 = 1.380_649e-16;

/// Speed of light (cm/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;

/// Invalid parameter input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamsError {
    /// A quantity that must be strictly positive (and finite) was not.
    NonPositive(&'static str),
    /// A quantity that must be non-negative (and finite) was not.
    Negative(&'static str),
    /// Thermal velocity at or above the speed of light.
    SuperluminalThermalVelocity,
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositive(name) => write!(f, "{name} must be positive and finite"),
            Self::Negative(name) => write!(f, "{name} must be non-negative and finite"),
            Self::SuperluminalThermalVelocity => write!(f, "v_c must satisfy 0 < v_c < 1"),
        }
    }
}

fn require_positive(value: f64, name: &'static str) -> Result<f64, ParamsError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ParamsError::NonPositive(name))
    }
}

fn require_non_negative(value: f64, name: &'static str) -> Result<f64, ParamsError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ParamsError::Negative(name))
    }
}

/// Resonance-region inputs: frequency, collision rate and thermal velocity,
/// all relative to the plasma frequency resp. the speed of light.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    /// omega/omega_p.
    pub gamma: f64,
    /// nu/omega_p.
    pub epsilon: f64,
    /// v_T/c.
    pub v_c: f64,
}

impl ScenarioParams {
    pub fn new(gamma: f64, epsilon: f64, v_c: f64) -> Result<Self, ParamsError> {
        require_positive(gamma, "gamma")?;
        require_positive(epsilon, "epsilon")?;
        require_positive(v_c, "v_c")?;
        if v_c >= 1.0 {
            return Err(ParamsError::SuperluminalThermalVelocity);
        }
        Ok(Self {
            gamma,
            epsilon,
            v_c,
        })
    }
}

/// Solver-facing dimensionless parameter set.
///
/// `q` is forced to zero when `include_displacement` is false, so downstream
/// kernels never need to consult the flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// Anomaly parameter `2*l^2/delta^2`.
    pub alpha: f64,
    /// Collision number `omega*tau`.
    pub omega_tau: f64,
    /// Retardation number `omega*l/c`; zero when displacement current is off.
    pub q: f64,
    /// Complex collision factor `1 - i*omega_tau`.
    pub z0: Complex64,
    /// Whether the displacement-current term is kept.
    pub include_displacement: bool,
}

impl DerivedParams {
    /// Maps the resonance parameterization onto `(alpha, Omega, Q, z0)`.
    pub fn from_scenario(s: &ScenarioParams, include_displacement: bool) -> Self {
        let alpha = s.gamma * s.v_c * s.v_c / (s.epsilon * s.epsilon * s.epsilon);
        let omega_tau = s.gamma / s.epsilon;
        let q = if include_displacement {
            s.gamma * s.v_c / s.epsilon
        } else {
            0.0
        };
        Self {
            alpha,
            omega_tau,
            q,
            z0: Complex64::new(1.0, -omega_tau),
            include_displacement,
        }
    }

    /// Builds the parameter set directly from `(alpha, Omega, Q)`.
    ///
    /// `alpha = 0` is accepted here (it switches the kinetic term off
    /// entirely, which is useful for limiting cases), while the scenario
    /// route always produces `alpha > 0`.
    pub fn from_raw(alpha: f64, omega_tau: f64, q: f64) -> Result<Self, ParamsError> {
        require_non_negative(alpha, "alpha")?;
        require_non_negative(omega_tau, "omega_tau")?;
        require_non_negative(q, "q")?;
        Ok(Self {
            alpha,
            omega_tau,
            q,
            z0: Complex64::new(1.0, -omega_tau),
            include_displacement: q > 0.0,
        })
    }
}

/// Validated form of the dimensionless mapping, for raw numeric inputs.
pub fn derive_dimensionless(
    gamma: f64,
    epsilon: f64,
    v_c: f64,
    include_displacement: bool,
) -> Result<DerivedParams, ParamsError> {
    let s = ScenarioParams::new(gamma, epsilon, v_c)?;
    Ok(DerivedParams::from_scenario(&s, include_displacement))
}

/// Dimensional plasma description in Gaussian-CGS units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalInputs {
    /// Electron number density (cm^-3).
    pub n: f64,
    /// Temperature (K).
    pub temperature: f64,
    /// Collision frequency (s^-1).
    pub nu: f64,
    /// Field angular frequency (s^-1).
    pub omega: f64,
}

impl PhysicalInputs {
    pub fn new(n: f64, temperature: f64, nu: f64, omega: f64) -> Result<Self, ParamsError> {
        require_positive(n, "n")?;
        require_positive(temperature, "temperature")?;
        require_positive(nu, "nu")?;
        require_positive(omega, "omega")?;
        Ok(Self {
            n,
            temperature,
            nu,
            omega,
        })
    }

    /// Static conductivity `sigma_0 = e^2 n/(m nu)` (s^-1).
    pub fn conductivity(&self) -> f64 {
        ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * self.n / (ELECTRON_MASS * self.nu)
    }

    /// Plasma frequency `omega_p = sqrt(4 pi e^2 n/m)` (s^-1).
    pub fn plasma_frequency(&self) -> f64 {
        libm::sqrt(
            4.0 * core::f64::consts::PI * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE * self.n
                / ELECTRON_MASS,
        )
    }

    /// Thermal velocity `v_T = sqrt(2 k_B T/m)` (cm/s).
    pub fn thermal_velocity(&self) -> f64 {
        libm::sqrt(2.0 * BOLTZMANN * self.temperature / ELECTRON_MASS)
    }

    /// Mean free path `l = v_T/nu` (cm).
    pub fn mean_free_path(&self) -> f64 {
        self.thermal_velocity() / self.nu
    }

    /// Impedance scale `R = sqrt(4 pi omega/(c^2 sigma_0))`.
    pub fn impedance_scale(&self) -> f64 {
        libm::sqrt(
            4.0 * core::f64::consts::PI * self.omega
                / (SPEED_OF_LIGHT * SPEED_OF_LIGHT * self.conductivity()),
        )
    }

    /// The scenario triple `(gamma, epsilon, v_c)` for these inputs.
    pub fn scenario(&self) -> Result<ScenarioParams, ParamsError> {
        let omega_p = self.plasma_frequency();
        ScenarioParams::new(
            self.omega / omega_p,
            self.nu / omega_p,
            self.thermal_velocity() / SPEED_OF_LIGHT,
        )
    }
}

/// Converts physical inputs to the scenario triple plus the impedance scale.
pub fn from_physical(p: &PhysicalInputs) -> Result<(ScenarioParams, f64), ParamsError> {
    Ok((p.scenario()?, p.impedance_scale()))
}
