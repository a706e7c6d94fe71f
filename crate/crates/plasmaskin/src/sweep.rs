//! Parallel resonance sweeps and peak detection.
//!
//! Sweep points are independent, so they are farmed out to a small worker
//! pool; each point's arithmetic is self-contained and the output ordering
//! is fixed by the grid index, which makes the result bitwise independent of
//! the worker count. `PLASMASKIN_THREADS` caps the pool (default: available
//! cores).

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use plasmaskin_core::impedance::{impedance_from_derived, ImpedanceError};
use plasmaskin_core::{DerivedParams, ScenarioParams};

use crate::record::{ImpedanceRecord, PeakReport, SweepSpec};

/// Worker count from `PLASMASKIN_THREADS`, clamped to at least 1.
pub fn worker_count() -> usize {
    if let Ok(raw) = std::env::var("PLASMASKIN_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Runs the sweep with the default worker count.
pub fn run_sweep(spec: &SweepSpec) -> Vec<ImpedanceRecord> {
    run_sweep_with_workers(spec, worker_count())
}

/// Runs the sweep on exactly `workers` threads.
///
/// Non-converged points are flagged in their record (carrying the best
/// available estimate) and the sweep continues.
pub fn run_sweep_with_workers(spec: &SweepSpec, workers: usize) -> Vec<ImpedanceRecord> {
    let n = spec.n_points;
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<ImpedanceRecord>>> = Mutex::new(vec![None; n]);

    std::thread::scope(|scope| {
        for _ in 0..workers.max(1).min(n) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let record = evaluate_point(spec, i);
                slots.lock().expect("sweep worker panicked")[i] = Some(record);
            });
        }
    });

    slots
        .into_inner()
        .expect("sweep worker panicked")
        .into_iter()
        .map(|slot| slot.expect("every index visited"))
        .collect()
}

fn evaluate_point(spec: &SweepSpec, i: usize) -> ImpedanceRecord {
    let gamma = spec.gamma_at(i);
    let scenario = ScenarioParams::new(gamma, spec.epsilon, spec.v_c)
        .expect("spec validation guarantees a valid scenario");
    let params = DerivedParams::from_scenario(&scenario, spec.include_displacement);
    match impedance_from_derived(&params, &spec.cfg) {
        Ok(result) => ImpedanceRecord::new(
            (gamma, spec.epsilon, spec.v_c),
            &params,
            result.z0,
            result.quadrature.converged,
            result.quadrature.n_evals,
        ),
        Err(ImpedanceError::NonConvergence { value, n_evals, .. }) => {
            let z0 = plasmaskin_core::impedance::impedance_from_decrement(params.alpha, value);
            ImpedanceRecord::new((gamma, spec.epsilon, spec.v_c), &params, z0, false, n_evals)
        }
        Err(ImpedanceError::Params(e)) => unreachable!("validated scenario rejected: {e}"),
    }
}

/// Failures of [`find_peak`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakError {
    /// Fewer than 3 records.
    TooFewRecords,
    /// The maximum sits on the sweep boundary, so no bracket exists.
    BoundaryMaximum,
    /// A record adjacent to the maximum did not converge.
    NotConvergedNearPeak,
}

impl fmt::Display for PeakError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooFewRecords => write!(f, "peak detection needs at least 3 records"),
            Self::BoundaryMaximum => write!(f, "|Z0| maximum lies on the sweep boundary"),
            Self::NotConvergedNearPeak => {
                write!(f, "records bracketing the maximum did not converge")
            }
        }
    }
}

impl std::error::Error for PeakError {}

/// Unwraps the principal-value arguments of a sweep into a continuous branch
/// by adding multiples of 2 pi.
pub fn unwrapped_args(records: &[ImpedanceRecord]) -> Vec<f64> {
    let mut out = Vec::with_capacity(records.len());
    let mut offset = 0.0;
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            let prev: f64 = out[i - 1];
            let raw = r.arg_z0 + offset;
            let wraps = ((prev - raw) / std::f64::consts::TAU).round();
            offset += wraps * std::f64::consts::TAU;
        }
        out.push(r.arg_z0 + offset);
    }
    out
}

/// Quadratic interpolation of the `|Z0|` maximum plus the argument step
/// observed near it.
pub fn find_peak(records: &[ImpedanceRecord]) -> Result<PeakReport, PeakError> {
    if records.len() < 3 {
        return Err(PeakError::TooFewRecords);
    }
    let mut idx = 0;
    for (i, r) in records.iter().enumerate() {
        if r.abs_z0 > records[idx].abs_z0 {
            idx = i;
        }
    }
    if idx == 0 || idx + 1 == records.len() {
        return Err(PeakError::BoundaryMaximum);
    }
    let window = &records[idx - 1..=idx + 1];
    if window.iter().any(|r| !r.converged) {
        return Err(PeakError::NotConvergedNearPeak);
    }

    let (x0, y0) = (window[0].gamma, window[0].abs_z0);
    let (x1, y1) = (window[1].gamma, window[1].abs_z0);
    let (x2, y2) = (window[2].gamma, window[2].abs_z0);
    let d1 = (y1 - y0) / (x1 - x0);
    let second = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0);
    let (gamma_star, peak_value) = if second < 0.0 {
        let vertex = 0.5 * (x0 + x1) - d1 / (2.0 * second);
        let value = y0 + d1 * (vertex - x0) + second * (vertex - x0) * (vertex - x1);
        (vertex, value)
    } else {
        // Degenerate (flat or convex) bracket; fall back to the grid point.
        (x1, y1)
    };

    let args = unwrapped_args(records);
    let mut arg_jump = 0.0_f64;
    for i in 0..records.len() - 1 {
        let near = (records[i].gamma - gamma_star).abs() < 0.05
            && (records[i + 1].gamma - gamma_star).abs() < 0.05;
        if near {
            arg_jump = arg_jump.max((args[i + 1] - args[i]).abs());
        }
    }

    Ok(PeakReport {
        gamma_star,
        peak_value,
        arg_jump,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(gamma: f64, abs: f64, arg: f64) -> ImpedanceRecord {
        ImpedanceRecord {
            gamma,
            epsilon: 1e-3,
            v_c: 1e-3,
            alpha: 1.0,
            omega_tau: 1.0,
            q: 0.0,
            re_z0: abs * arg.cos(),
            im_z0: abs * arg.sin(),
            abs_z0: abs,
            arg_z0: arg,
            converged: true,
            n_evals: 1,
        }
    }

    #[test]
    fn parabola_vertex_is_recovered_exactly() {
        let vertex = 0.93;
        let records: Vec<ImpedanceRecord> = (0..11)
            .map(|i| {
                let g = 0.8 + 0.03 * i as f64;
                synthetic(g, 5.0 - 40.0 * (g - vertex) * (g - vertex), -0.3)
            })
            .collect();
        let peak = find_peak(&records).unwrap();
        assert!((peak.gamma_star - vertex).abs() < 1e-12);
        assert!((peak.peak_value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_records_report_boundary() {
        let records: Vec<ImpedanceRecord> = (0..8)
            .map(|i| synthetic(0.5 + 0.1 * i as f64, i as f64, 0.0))
            .collect();
        assert_eq!(find_peak(&records), Err(PeakError::BoundaryMaximum));
        assert_eq!(find_peak(&records[..2]), Err(PeakError::TooFewRecords));
    }

    #[test]
    fn non_converged_bracket_is_rejected() {
        let mut records: Vec<ImpedanceRecord> = (0..7)
            .map(|i| {
                let g = 0.8 + 0.05 * i as f64;
                synthetic(g, 5.0 - 30.0 * (g - 0.95) * (g - 0.95), 0.0)
            })
            .collect();
        let peak_idx = records
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs_z0.total_cmp(&b.1.abs_z0))
            .unwrap()
            .0;
        records[peak_idx + 1].converged = false;
        assert_eq!(find_peak(&records), Err(PeakError::NotConvergedNearPeak));
    }

    #[test]
    fn unwrapping_restores_continuity() {
        // A sequence that crosses the branch cut at pi.
        let args = [3.0, 3.1, -3.1, -3.0, -2.9];
        let records: Vec<ImpedanceRecord> = args
            .iter()
            .enumerate()
            .map(|(i, &a)| synthetic(0.5 + 0.01 * i as f64, 1.0, a))
            .collect();
        let unwrapped = unwrapped_args(&records);
        for pair in unwrapped.windows(2) {
            assert!((pair[1] - pair[0]).abs() < 1.0, "{unwrapped:?}");
        }
        assert!((unwrapped[2] - (2.0 * std::f64::consts::PI - 3.1)).abs() < 1e-12);
    }
}
