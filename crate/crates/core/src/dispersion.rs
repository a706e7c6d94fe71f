//! Transverse dispersion kernel of the half-space problem.
//!
//! In the Fourier variable `k` the kernel reads
//!
//! ```text
//! lambda(k) = 1 - Q^2/k^2 - (alpha/(k^2 sqrt(pi))) * i * integral,
//! ```
//!
//! and after the substitution `k = 1/t` it becomes
//!
//! ```text
//! lambda(1/t) = 1 - Q^2 t^2 - alpha t^3 t0(i z0 t),
//! ```
//!
//! which is the form everything here evaluates (the `k` form delegates, so
//! the `1/k^2` pieces never cancel catastrophically at large `k`). Near
//! plasma resonance with `gamma` slightly above 1 the kernel passes very
//! close to zero at a real `t`, which turns the impedance integrand into a
//! near-pole; [`DispersionKernel::scan_near_zeros`] locates such dips so the
//! quadrature can place panel boundaries around them.

use alloc::vec::Vec;
use core::fmt;

use crate::params::DerivedParams;
use crate::special::t0;
use crate::Complex64;

/// Domain errors of the kernel evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionError {
    /// `lambda(1/t)` needs `t > 0`.
    NonPositiveT,
    /// `lambda(k)` is singular at `k = 0`.
    ZeroWavenumber,
}

impl fmt::Display for DispersionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonPositiveT => write!(f, "lambda(1/t) requires t > 0"),
            Self::ZeroWavenumber => write!(f, "lambda(k) is singular at k = 0"),
        }
    }
}

/// A bracketed dip of `|lambda(1/t)|` found by scanning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroBracket {
    /// Lower end of the bracket (in `t`).
    pub t_lo: f64,
    /// Upper end of the bracket (in `t`).
    pub t_hi: f64,
    /// Smallest `|lambda(1/t)|` observed inside.
    pub min_abs_lambda: f64,
}

/// Immutable kernel bound to one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionKernel {
    params: DerivedParams,
}

impl DispersionKernel {
    pub fn new(params: DerivedParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &DerivedParams {
        &self.params
    }

    /// Complex collision factor `z0 = 1 - i*Omega`.
    pub fn z0(&self) -> Complex64 {
        self.params.z0
    }

    /// `lambda(1/t)` for `t > 0`.
    pub fn lambda_inv_t(&self, t: f64) -> Result<Complex64, DispersionError> {
        if t <= 0.0 || !t.is_finite() {
            return Err(DispersionError::NonPositiveT);
        }
        Ok(self.lambda_inv_t_raw(t))
    }

    /// Unvalidated form of [`Self::lambda_inv_t`] for hot loops; `t > 0`.
    #[inline]
    pub(crate) fn lambda_inv_t_raw(&self, t: f64) -> Complex64 {
        let p = &self.params;
        let mut lambda = Complex64::new(1.0 - p.q * p.q * t * t, 0.0);
        if p.alpha > 0.0 {
            let w = Complex64::new(0.0, t) * p.z0;
            let kinetic = t0(w).expect("Re z0 = 1 keeps Im w = t > 0");
            lambda -= kinetic * (p.alpha * t * t * t);
        }
        lambda
    }

    /// `lambda(k)`, even in `k`, through the `t = 1/|k|` substitution.
    pub fn lambda_k(&self, k: f64) -> Result<Complex64, DispersionError> {
        if k == 0.0 || !k.is_finite() {
            return Err(DispersionError::ZeroWavenumber);
        }
        Ok(self.lambda_inv_t_raw(1.0 / k.abs()))
    }

    /// `k^2 * lambda(k)` in a form that stays finite as `k -> 0`.
    ///
    /// The field-profile integrands divide by this combination; evaluating
    /// `k^2 * lambda(k)` as a product would overflow the intermediate
    /// `Q^2/k^2` terms at small `k` even though the product is finite.
    pub fn k_sq_lambda(&self, k: f64) -> Result<Complex64, DispersionError> {
        if k == 0.0 || !k.is_finite() {
            return Err(DispersionError::ZeroWavenumber);
        }
        Ok(self.k_sq_lambda_raw(k))
    }

    #[inline]
    pub(crate) fn k_sq_lambda_raw(&self, k: f64) -> Complex64 {
        let p = &self.params;
        let k = k.abs();
        let mut value = Complex64::new(k * k - p.q * p.q, 0.0);
        if p.alpha > 0.0 {
            let t = 1.0 / k;
            let w = Complex64::new(0.0, t) * p.z0;
            let kinetic = t0(w).expect("Re z0 = 1 keeps Im w = t > 0");
            value -= kinetic * (p.alpha * t);
        }
        value
    }

    /// Scans `|lambda(1/t)|` on a logarithmic grid and returns refined
    /// brackets around local minima that fall below `threshold`.
    ///
    /// The returned brackets are widened until `|lambda|` exceeds the
    /// threshold again on both sides, so they cover the whole dip.
    pub fn scan_near_zeros(
        &self,
        t_range: (f64, f64),
        n_samples: usize,
        threshold: f64,
    ) -> Vec<ZeroBracket> {
        assert!(
            t_range.0 > 0.0 && t_range.1 > t_range.0 && t_range.1.is_finite(),
            "scan range must satisfy 0 < t_lo < t_hi < inf"
        );
        assert!(n_samples >= 16, "need at least 16 samples");

        if threshold <= 0.0 {
            return Vec::new();
        }

        let log_lo = libm::log(t_range.0);
        let log_hi = libm::log(t_range.1);
        let step = (log_hi - log_lo) / (n_samples - 1) as f64;
        let abs_at = |log_t: f64| self.lambda_inv_t_raw(libm::exp(log_t)).norm();

        let mut samples = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            samples.push(abs_at(log_lo + i as f64 * step));
        }

        let mut brackets: Vec<ZeroBracket> = Vec::new();
        for i in 1..n_samples - 1 {
            if samples[i] >= threshold {
                continue;
            }
            if !(samples[i] <= samples[i - 1] && samples[i] < samples[i + 1]) {
                continue;
            }
            let (log_min, min_abs) = golden_minimize(
                &abs_at,
                log_lo + (i - 1) as f64 * step,
                log_lo + (i + 1) as f64 * step,
            );

            // Widen until |lambda| clears the threshold on both sides.
            let mut lo = log_min;
            let mut hi = log_min;
            let widen = step.max(1e-4);
            for _ in 0..400 {
                if abs_at(lo) >= threshold && lo < log_min {
                    break;
                }
                lo -= widen;
            }
            for _ in 0..400 {
                if abs_at(hi) >= threshold && hi > log_min {
                    break;
                }
                hi += widen;
            }

            let bracket = ZeroBracket {
                t_lo: libm::exp(lo.max(log_lo)),
                t_hi: libm::exp(hi.min(log_hi)),
                min_abs_lambda: min_abs,
            };
            match brackets.last_mut() {
                Some(last) if last.t_hi >= bracket.t_lo => {
                    last.t_hi = bracket.t_hi;
                    last.min_abs_lambda = last.min_abs_lambda.min(bracket.min_abs_lambda);
                }
                _ => brackets.push(bracket),
            }
        }
        brackets
    }
}

/// Golden-section minimum of `f` on `[a, b]`; returns `(argmin, min)`.
fn golden_minimize<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-13 * (a.abs() + b.abs()).max(1e-6) {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_dimensionless, DerivedParams};

    fn kernel(alpha: f64, omega_tau: f64, q: f64) -> DispersionKernel {
        DispersionKernel::new(DerivedParams::from_raw(alpha, omega_tau, q).unwrap())
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn trivial_limits() {
        let free = kernel(0.0, 0.0, 0.0);
        for t in [1e-6, 0.1, 1.0, 42.0] {
            assert_eq!(free.lambda_inv_t(t).unwrap(), Complex64::new(1.0, 0.0));
        }

        let displacement_only = kernel(0.0, 0.0, 1.0);
        assert_eq!(
            displacement_only.lambda_inv_t(2.0).unwrap(),
            Complex64::new(-3.0, 0.0)
        );
        assert!(
            rel(
                displacement_only.lambda_k(2.0).unwrap(),
                Complex64::new(0.75, 0.0)
            ) < 1e-15
        );
    }

    #[test]
    fn kinetic_point_matches_oracle_value() {
        // alpha = 1, Q = 0, Omega = 0, t = 1: lambda = 1 - t0(i).
        let k = kernel(1.0, 0.0, 0.0);
        let expect = Complex64::new(1.0, -0.757_872_156_141_312_1);
        assert!(rel(k.lambda_inv_t(1.0).unwrap(), expect) < 1e-12);
        assert!(rel(k.lambda_k(1.0).unwrap(), expect) < 1e-12);
    }

    #[test]
    fn rejects_domain_violations() {
        let k = kernel(1.0, 0.0, 0.0);
        assert_eq!(k.lambda_inv_t(0.0), Err(DispersionError::NonPositiveT));
        assert_eq!(k.lambda_inv_t(-1.0), Err(DispersionError::NonPositiveT));
        assert_eq!(k.lambda_k(0.0), Err(DispersionError::ZeroWavenumber));
        assert_eq!(k.k_sq_lambda(0.0), Err(DispersionError::ZeroWavenumber));
    }

    #[test]
    fn evenness_in_k() {
        let mut state = 0xabcdefu64;
        let mut unit = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let k = kernel(
                10f64.powf(-3.0 + 6.0 * unit()),
                10f64.powf(-2.0 + 5.0 * unit()),
                2.0 * unit(),
            );
            let x = 10f64.powf(-3.0 + 6.0 * unit());
            assert_eq!(k.lambda_k(x).unwrap(), k.lambda_k(-x).unwrap());
        }
    }

    #[test]
    fn k_and_t_forms_are_consistent() {
        let k = kernel(1e3, 1e3, 1.0);
        for i in 0..60 {
            let t = 10f64.powf(-3.0 + 6.0 * i as f64 / 59.0);
            let via_t = k.lambda_inv_t(t).unwrap();
            let via_k = k.lambda_k(1.0 / t).unwrap();
            assert!(rel(via_t, via_k) < 1e-12, "t={t}");
        }
    }

    #[test]
    fn k_sq_lambda_is_stable_at_small_k() {
        let kern = kernel(1e3, 1e3, 1.0);
        // k^2 lambda(k) -> k^2 - (Q^2 + i alpha/z0) as k -> 0.
        let cold = -(Complex64::new(kern.params().q * kern.params().q, 0.0)
            + Complex64::new(0.0, kern.params().alpha) / kern.z0());
        for k in [1e-5, 1e-7, 1e-9] {
            let v = kern.k_sq_lambda(k).unwrap();
            let expect = cold + Complex64::new(k * k, 0.0);
            assert!(rel(v, expect) < 1e-8, "k={k}: {v} vs {expect}");
        }
        // And it agrees with the direct product where that product is safe.
        for k in [0.3, 1.0, 7.0] {
            let product = kern.lambda_k(k).unwrap() * (k * k);
            assert!(rel(kern.k_sq_lambda(k).unwrap(), product) < 1e-11);
        }
    }

    #[test]
    fn approaches_unity_at_small_t() {
        let d = derive_dimensionless(1.0, 1e-3, 1e-3, true).unwrap();
        let k = DispersionKernel::new(d);
        let v = k.lambda_inv_t(1e-8).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn large_t_tail_matches_cold_reduction() {
        // lambda(1/t) -> 1 - Q^2 t^2 - i alpha t^2/z0 with corrections that
        // vanish relative to alpha t^2.
        let kern = kernel(2.0, 0.5, 0.7);
        let t = 1e3;
        let p = kern.params();
        let cold = Complex64::new(1.0 - p.q * p.q * t * t, 0.0)
            - Complex64::new(0.0, p.alpha * t * t) / p.z0;
        let full = kern.lambda_inv_t(t).unwrap();
        assert!((full - cold).norm() / (p.alpha * t * t) < 1e-5);
    }

    #[test]
    fn collisionless_damping_sign() {
        // Omega = 0, Q = 0, alpha > 0: Im lambda < 0 for all t > 0.
        let k = kernel(0.7, 0.0, 0.0);
        for i in 0..200 {
            let t = 10f64.powf(-4.0 + 8.0 * i as f64 / 199.0);
            let v = k.lambda_inv_t(t).unwrap();
            assert!(v.im < 0.0, "t={t}: Im lambda = {}", v.im);
        }
    }

    #[test]
    fn scan_finds_nothing_for_flat_kernel() {
        let k = kernel(0.0, 0.0, 0.0);
        assert!(k.scan_near_zeros((1e-3, 1e3), 64, 0.999).is_empty());
    }

    #[test]
    fn scan_threshold_zero_yields_nothing() {
        let d = derive_dimensionless(1.05, 1e-4, 1e-3, true).unwrap();
        let k = DispersionKernel::new(d);
        assert!(k.scan_near_zeros((1e-3, 1e3), 256, 0.0).is_empty());
    }

    #[test]
    fn scan_brackets_resonant_dip() {
        // Slightly above plasma resonance the kernel dips close to zero on
        // the real axis. A dense reference scan puts the dip of this
        // parameter set near t = 0.312 with |lambda| of order 1e-4.
        let d = derive_dimensionless(1.05, 1e-4, 1e-3, true).unwrap();
        let k = DispersionKernel::new(d);
        let brackets = k.scan_near_zeros((1e-6, 1e6), 4096, 0.1);
        assert!(!brackets.is_empty());
        let hit = brackets
            .iter()
            .find(|b| b.t_lo <= 0.312 && 0.312 <= b.t_hi)
            .expect("dip near t = 0.312 must be bracketed");
        assert!(hit.min_abs_lambda < 1e-3, "min = {}", hit.min_abs_lambda);
        for b in &brackets {
            assert!(b.t_lo < b.t_hi);
            assert!(b.min_abs_lambda >= 0.0);
        }
    }

    #[test]
    fn scan_reports_shallow_kernel_at_resonance_as_empty() {
        // Exactly at gamma = 1 the kernel stays order one on the real axis;
        // a dense scan confirms no sub-threshold dip exists there.
        let d = derive_dimensionless(1.0, 1e-4, 1e-3, true).unwrap();
        let k = DispersionKernel::new(d);
        assert!(k.scan_near_zeros((1e-6, 1e6), 4096, 0.1).is_empty());
    }
}
