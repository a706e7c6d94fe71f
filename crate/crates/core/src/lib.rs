//! Kinetic skin-effect solver for a collisional Maxwell plasma half-space.
//!
//! A transverse AC field drives a semi-infinite electron plasma with a constant
//! collision frequency and specular electron reflection at the wall. The crate
//! computes, in dimensionless form, everything that problem asks for:
//!
//! - the plasma dispersion integral `t0` ([`special`]),
//! - the transverse dispersion kernel `lambda` with displacement current
//!   ([`dispersion`]),
//! - adaptive complex quadrature over half-lines and oscillatory
//!   cosine/sine transforms ([`quadrature`]),
//! - the field decrement and the surface impedance `Z0` ([`impedance`]),
//! - spatial profiles of the electric field and of the electron distribution
//!   perturbation ([`fields`]),
//! - parameter handling, including the resonance-region parameterization
//!   `(gamma, epsilon, v_c)` and the Gaussian-unit physical layer ([`params`]).
//!
//! The crate is `no_std` (with `alloc`); anything involving files, threads or
//! a CLI lives in the companion `plasmaskin` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod dispersion;
pub mod fields;
pub mod impedance;
pub mod params;
pub mod quadrature;
pub mod special;

/// Double-precision complex scalar used throughout.
pub type Complex64 = num_complex::Complex<f64>;

pub use dispersion::{DispersionKernel, ZeroBracket};
pub use fields::{DistributionProfile, FieldProfile, FieldSolver};
pub use impedance::{anomalous_limit, decrement, normal_limit, ImpedanceResult};
pub use params::{DerivedParams, PhysicalInputs, ScenarioParams};
pub use quadrature::{QuadratureConfig, QuadratureResult};
