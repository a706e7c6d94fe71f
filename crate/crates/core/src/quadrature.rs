//! Adaptive complex-valued quadrature.
//!
//! Three entry points:
//!
//! - [`integrate_interval`]: globally adaptive Gauss-Kronrod 7/15 on a finite
//!   interval, with caller-supplied break points,
//! - [`integrate_half_line`]: integrals over `t in (0, inf)` through the
//!   rational map `t = u/(1-u)`, suited to integrands with algebraic `1/t^2`
//!   tails, with forced panel boundaries around near-zeros of the
//!   denominator,
//! - [`integrate_oscillatory_cosine`] / [`integrate_oscillatory_sine`]:
//!   Fourier transforms over `k in (0, inf)` summed over half-period blocks
//!   with epsilon-algorithm acceleration of the alternating tail.
//!
//! Non-convergence is reported through [`QuadratureResult::converged`], never
//! silently.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::dispersion::ZeroBracket;
use crate::Complex64;

/// Tolerances and budgets for one integration call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Maximum panel bisection depth.
    pub max_depth: u32,
    /// Budget of integrand evaluations.
    pub max_evals: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_depth: 40,
            max_evals: 10_000_000,
        }
    }
}

impl QuadratureConfig {
    /// Same budgets, different relative tolerance.
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    fn validate(&self) {
        assert!(self.rel_tol > 0.0, "rel_tol must be positive");
        assert!(self.abs_tol > 0.0, "abs_tol must be positive");
        assert!(self.max_depth >= 4, "max_depth must be at least 4");
    }

    fn tolerance_for(&self, magnitude: f64) -> f64 {
        (self.rel_tol * magnitude).max(self.abs_tol)
    }
}

/// Outcome of one integration call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// Estimated integral value.
    pub value: Complex64,
    /// Error estimate (absolute).
    pub err_estimate: f64,
    /// Number of integrand evaluations used.
    pub n_evals: u64,
    /// Whether the error estimate met `max(abs_tol, rel_tol*|value|)`.
    pub converged: bool,
    /// Interval carrying the largest error estimate, in the caller's variable.
    pub worst_panel: (f64, f64),
}

impl QuadratureResult {
    fn exact_zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            err_estimate: 0.0,
            n_evals: 0,
            converged: true,
            worst_panel: (0.0, 0.0),
        }
    }
}

// 15-point Kronrod extension of 7-point Gauss-Legendre (QUADPACK dqk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828_0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

fn compensated_complex_sum(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    for v in values {
        re.add(v.re);
        im.add(v.im);
    }
    Complex64::new(re.total(), im.total())
}

struct PanelEstimate {
    value: Complex64,
    err: f64,
}

/// One Gauss-Kronrod 7/15 pass over `[a, b]`.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> PanelEstimate {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);

    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut resabs = f_center.norm() * WGK[7];

    let mut samples = [Complex64::new(0.0, 0.0); 15];
    samples[14] = f_center;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f_lo = f(center - dx);
        let f_hi = f(center + dx);
        samples[2 * j] = f_lo;
        samples[2 * j + 1] = f_hi;
        let pair = f_lo + f_hi;
        kronrod += pair * WGK[j];
        resabs += (f_lo.norm() + f_hi.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }

    // Scaled deviation of |f| from its mean, for the QUADPACK error rescale.
    let mean = kronrod * 0.5;
    let mut resasc = (f_center - mean).norm() * WGK[7];
    for j in 0..7 {
        resasc += ((samples[2 * j] - mean).norm() + (samples[2 * j + 1] - mean).norm()) * WGK[j];
    }

    let value = kronrod * half;
    let raw_err = ((kronrod - gauss) * half).norm();
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();

    let mut err = raw_err;
    if resasc != 0.0 && raw_err != 0.0 {
        let scale = libm::pow(200.0 * raw_err / resasc, 1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }

    PanelEstimate { value, err }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive integration of a complex integrand over `[a, b]`.
///
/// `breaks` become boundaries of the initial panel set; values outside
/// `(a, b)` are ignored. The worst-error panel is split until the summed
/// error estimate meets the tolerance or a budget runs out.
pub fn integrate_interval<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    breaks: &[f64],
) -> QuadratureResult {
    cfg.validate();
    assert!(a.is_finite() && b.is_finite() && a < b, "invalid interval");

    let mut edges: Vec<f64> = [a, b]
        .iter()
        .chain(breaks.iter())
        .copied()
        .filter(|x| (a..=b).contains(x))
        .collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut n_evals: u64 = 0;
    let mut heap = BinaryHeap::new();
    let mut nonfinite = false;
    for pair in edges.windows(2) {
        let est = gk15(&f, pair[0], pair[1]);
        n_evals += 15;
        nonfinite |= !est.value.is_finite();
        heap.push(Panel {
            a: pair[0],
            b: pair[1],
            value: est.value,
            err: est.err,
            depth: 0,
        });
    }

    let mut running_value: Complex64 = heap.iter().map(|p| p.value).sum();
    let mut running_err: f64 = heap.iter().map(|p| p.err).sum();

    // Split the worst panel until the summed estimate meets the tolerance or
    // the depth cap, the evaluation budget, or representable width runs out.
    while !nonfinite && running_err > cfg.tolerance_for(running_value.norm()) {
        let worst = match heap.peek() {
            Some(p) if p.depth < cfg.max_depth => heap.pop().unwrap(),
            _ => break,
        };
        if n_evals + 30 > cfg.max_evals {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = gk15(&f, worst.a, mid);
        let right = gk15(&f, mid, worst.b);
        n_evals += 30;
        nonfinite |= !left.value.is_finite() || !right.value.is_finite();
        running_value += left.value + right.value - worst.value;
        running_err += left.err + right.err - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: left.value,
            err: left.err,
            depth: worst.depth + 1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: right.value,
            err: right.err,
            depth: worst.depth + 1,
        });
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = compensated_complex_sum(panels.iter().map(|p| p.value));
    let mut err = Compensated::default();
    for p in &panels {
        err.add(p.err);
    }
    let err_estimate = err.total();
    let worst = panels
        .iter()
        .max_by(|p, q| p.err.total_cmp(&q.err))
        .map(|p| (p.a, p.b))
        .unwrap_or((a, b));

    let converged = !nonfinite && err_estimate <= cfg.tolerance_for(value.norm());
    QuadratureResult {
        value,
        err_estimate,
        n_evals,
        converged,
        worst_panel: worst,
    }
}

fn map_t(u: f64) -> f64 {
    u / (1.0 - u)
}

fn map_u(t: f64) -> f64 {
    t / (1.0 + t)
}

/// Integrates `f` over `t in (0, inf)` through the map `t = u/(1-u)`.
///
/// The integrand must decay at least like `1/t^2`, so that the mapped
/// integrand stays bounded at `u -> 1`. Endpoints of every `hot_bracket`
/// become forced panel boundaries, which keeps sharp denominator dips from
/// hiding inside a wide panel.
pub fn integrate_half_line<F: Fn(f64) -> Complex64>(
    f: F,
    cfg: &QuadratureConfig,
    hot_brackets: &[ZeroBracket],
) -> QuadratureResult {
    let mut breaks: Vec<f64> = Vec::with_capacity(2 * hot_brackets.len());
    for br in hot_brackets {
        breaks.push(map_u(br.t_lo));
        breaks.push(map_u(br.t_hi));
    }
    let mapped = |u: f64| {
        if u <= 0.0 || u >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        let jac = 1.0 - u;
        f(map_t(u)) / (jac * jac)
    };
    let mut result = integrate_interval(mapped, 0.0, 1.0, cfg, &breaks);
    result.worst_panel = (map_t(result.worst_panel.0), map_t(result.worst_panel.1));
    result
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Trig {
    Cosine,
    Sine,
}

/// Computes `int_0^inf g(k) cos(k x) dk`.
///
/// Panels never exceed the half period `pi/x`, and the alternating sequence
/// of half-period block integrals is accelerated with Wynn's epsilon
/// algorithm, so algebraically decaying `g` converges without an enormous
/// truncation point. `x = 0` reduces to the plain half-line integral.
pub fn integrate_oscillatory_cosine<F: Fn(f64) -> Complex64>(
    g: F,
    x: f64,
    cfg: &QuadratureConfig,
) -> QuadratureResult {
    integrate_oscillatory(g, x, cfg, Trig::Cosine)
}

/// Computes `int_0^inf g(k) sin(k x) dk`; zero for `x = 0`.
pub fn integrate_oscillatory_sine<F: Fn(f64) -> Complex64>(
    g: F,
    x: f64,
    cfg: &QuadratureConfig,
) -> QuadratureResult {
    integrate_oscillatory(g, x, cfg, Trig::Sine)
}

fn integrate_oscillatory<F: Fn(f64) -> Complex64>(
    g: F,
    x: f64,
    cfg: &QuadratureConfig,
    weight: Trig,
) -> QuadratureResult {
    cfg.validate();
    assert!(x.is_finite() && x >= 0.0, "depth x must be non-negative");

    if x == 0.0 {
        return match weight {
            Trig::Cosine => integrate_half_line(g, cfg, &[]),
            Trig::Sine => QuadratureResult::exact_zero(),
        };
    }

    let weighted = |k: f64| match weight {
        Trig::Cosine => g(k) * libm::cos(k * x),
        Trig::Sine => g(k) * libm::sin(k * x),
    };

    let period = PI / x;
    let block_cfg = QuadratureConfig {
        rel_tol: cfg.rel_tol * 0.25,
        abs_tol: cfg.abs_tol * 0.0625,
        max_depth: cfg.max_depth,
        max_evals: cfg.max_evals,
    };

    // Geometric ladder of initial breaks inside the first block, so structure
    // far below the half-period scale still lands on a panel boundary.
    let mut ladder: Vec<f64> = Vec::new();
    let mut step = period * 0.5;
    while step > period * 1e-12 {
        ladder.push(step);
        step *= 0.25;
    }

    let mut partial_sums: Vec<Complex64> = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut block_err_sum = 0.0;
    let mut n_evals: u64 = 0;
    let mut worst_panel = (0.0, period);
    let mut worst_err = 0.0;
    let mut all_blocks_converged = true;

    let mut best = Complex64::new(0.0, 0.0);
    let mut best_err = f64::INFINITY;
    let mut stable_count = 0u32;
    let mut dead_tail = 0u32;
    let mut converged = false;

    let max_blocks = 200_000u64;
    for j in 0..max_blocks {
        let a = j as f64 * period;
        let b = (j + 1) as f64 * period;
        let mut cfg_j = block_cfg;
        cfg_j.max_evals = cfg.max_evals.saturating_sub(n_evals);
        if cfg_j.max_evals < 45 {
            all_blocks_converged = false;
            break;
        }
        let block = if j == 0 {
            integrate_interval(weighted, a, b, &cfg_j, &ladder)
        } else {
            integrate_interval(weighted, a, b, &cfg_j, &[])
        };
        n_evals += block.n_evals;
        all_blocks_converged &= block.converged;
        block_err_sum += block.err_estimate;
        if block.err_estimate > worst_err {
            worst_err = block.err_estimate;
            worst_panel = block.worst_panel;
        }
        total += block.value;
        partial_sums.push(total);

        let tol = cfg.tolerance_for(best.norm().max(total.norm()));

        if block.value.norm() < 0.01 * tol {
            dead_tail += 1;
            if dead_tail >= 3 {
                best = total;
                best_err = block.value.norm();
                converged = true;
                break;
            }
        } else {
            dead_tail = 0;
        }

        if partial_sums.len() >= 6 {
            let window = &partial_sums[partial_sums.len().saturating_sub(36)..];
            let (accel, delta) = wynn_epsilon(window);
            let change = (accel - best).norm();
            best = accel;
            best_err = delta;
            if delta.max(change) <= 0.5 * tol {
                stable_count += 1;
                if stable_count >= 2 {
                    converged = true;
                    break;
                }
            } else {
                stable_count = 0;
            }
        } else {
            best = total;
        }
    }

    let err_estimate = if best_err.is_finite() {
        best_err + block_err_sum
    } else {
        f64::INFINITY
    };
    let converged =
        converged && all_blocks_converged && err_estimate <= cfg.tolerance_for(best.norm());
    QuadratureResult {
        value: best,
        err_estimate,
        n_evals,
        converged,
        worst_panel,
    }
}

/// Wynn epsilon acceleration of a sequence of partial sums.
///
/// Returns the deepest even-column estimate and the spread of the last two
/// estimates as an error measure.
fn wynn_epsilon(sums: &[Complex64]) -> (Complex64, f64) {
    let n = sums.len();
    let mut prev_prev: Vec<Complex64> = alloc::vec![Complex64::new(0.0, 0.0); n + 1];
    let mut prev: Vec<Complex64> = sums.to_vec();
    let mut best = *sums.last().unwrap();
    let mut prev_best = best;

    for k in 1..n {
        let len = n - k;
        let mut current: Vec<Complex64> = Vec::with_capacity(len);
        for i in 0..len {
            let diff = prev[i + 1] - prev[i];
            if diff.norm() < 1e-305 {
                // Sequence already collapsed; the previous column is exact.
                return (prev[i + 1], (prev[i + 1] - prev_best).norm());
            }
            current.push(prev_prev[i + 1] + diff.inv());
        }
        if k % 2 == 0 {
            prev_best = best;
            best = *current.last().unwrap();
        }
        prev_prev = prev;
        prev = current;
        if prev.len() < 2 {
            break;
        }
    }
    (best, (best - prev_best).norm())
}
