//! Command-line interface.
//!
//! Exit codes: 0 success, 1 flag/usage errors, 2 numerical non-convergence,
//! 3 validation failure.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use plasmaskin_core::impedance::{impedance_from_derived, ImpedanceError, ImpedanceResult};
use plasmaskin_core::params::derive_dimensionless;
use plasmaskin_core::{fields, DerivedParams, DispersionKernel, FieldSolver, QuadratureConfig};

use crate::io::{self, format_float};
use crate::record::{ImpedanceRecord, SweepSpec};
use crate::svg::{render_svg, Quantity};
use crate::sweep::{find_peak, run_sweep};
use crate::validate::{render_table, run_all, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_VALIDATION_FAILED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "plasmaskin",
    version,
    about = "Surface impedance and field profiles of the collisional plasma half-space skin effect"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScenarioFlags {
    /// Frequency ratio omega/omega_p
    #[arg(long)]
    gamma: Option<f64>,
    /// Collision ratio nu/omega_p
    #[arg(long)]
    epsilon: Option<f64>,
    /// Thermal velocity ratio v_T/c
    #[arg(long)]
    vc: Option<f64>,
    /// Drop the displacement-current term (forces Q = 0)
    #[arg(long)]
    no_displacement: bool,
    /// Relative quadrature tolerance
    #[arg(long)]
    rel_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one impedance point; prints the record as JSON
    Impedance {
        #[command(flatten)]
        scenario: ScenarioFlags,
        /// Anomaly parameter (raw route)
        #[arg(long)]
        alpha: Option<f64>,
        /// Collision number omega*tau (raw route)
        #[arg(long)]
        omega_tau: Option<f64>,
        /// Retardation number omega*l/c (raw route)
        #[arg(long)]
        q: Option<f64>,
    },
    /// Sweep gamma over a range and write records to CSV or JSON
    Sweep {
        /// Range as lo:hi
        #[arg(long, default_value = "0.5:1.2")]
        gamma_range: String,
        /// Number of grid points
        #[arg(long, default_value_t = 141)]
        points: usize,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        #[arg(long, default_value_t = 1e-3)]
        vc: f64,
        /// Output path; format from extension (.csv or .json)
        #[arg(long)]
        out: PathBuf,
        /// Also render the sweep as an SVG chart
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Quantity for the SVG: abs, re_neg or arg
        #[arg(long, default_value = "abs")]
        quantity: String,
        /// Logarithmic vertical axis for the SVG
        #[arg(long)]
        log_y: bool,
        #[arg(long)]
        no_displacement: bool,
        #[arg(long)]
        rel_tol: Option<f64>,
    },
    /// Electric-field profile e(x); writes CSV columns x,re_e,im_e
    Field {
        #[command(flatten)]
        scenario: ScenarioFlags,
        /// Depths: comma list, or lo:hi:n[:log|:lin]; default 1e-2:1e2:64:log
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Distribution perturbation h(x, mu); writes CSV columns x,mu,re_h,im_h
    Distribution {
        #[command(flatten)]
        scenario: ScenarioFlags,
        /// Depth (mean-free-path units)
        #[arg(long)]
        x: f64,
        /// Comma-separated velocity cosines
        #[arg(long)]
        mu_list: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the validation suite and print a pass/fail table
    Validate,
    /// Render an SVG chart from a sweep CSV
    Plot {
        /// Input CSV produced by the sweep command
        #[arg(long)]
        input: PathBuf,
        /// Output SVG path
        #[arg(long)]
        svg: PathBuf,
        /// Quantity: abs, re_neg or arg
        #[arg(long, default_value = "abs")]
        quantity: String,
        #[arg(long)]
        log_y: bool,
    },
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn config_from(rel_tol: Option<f64>) -> Result<QuadratureConfig, String> {
    let mut cfg = QuadratureConfig::default();
    if let Some(tol) = rel_tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err("--rel-tol must be positive".into());
        }
        cfg.rel_tol = tol;
        // Keep the absolute floor subordinate to the requested accuracy.
        cfg.abs_tol = cfg.abs_tol.min(tol * 1e-4);
    }
    Ok(cfg)
}

/// Parses the command line and runs it, returning the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };

    match cli.command {
        Command::Impedance {
            scenario,
            alpha,
            omega_tau,
            q,
        } => cmd_impedance(scenario, alpha, omega_tau, q),
        Command::Sweep {
            gamma_range,
            points,
            epsilon,
            vc,
            out,
            svg,
            quantity,
            log_y,
            no_displacement,
            rel_tol,
        } => cmd_sweep(
            &gamma_range,
            points,
            epsilon,
            vc,
            &out,
            svg.as_deref(),
            &quantity,
            log_y,
            no_displacement,
            rel_tol,
        ),
        Command::Field {
            scenario,
            x_grid,
            out,
        } => cmd_field(scenario, x_grid.as_deref(), &out),
        Command::Distribution {
            scenario,
            x,
            mu_list,
            out,
        } => cmd_distribution(scenario, x, &mu_list, &out),
        Command::Validate => cmd_validate(),
        Command::Plot {
            input,
            svg,
            quantity,
            log_y,
        } => cmd_plot(&input, &svg, &quantity, log_y),
    }
}

fn scenario_params(flags: &ScenarioFlags) -> Result<(DerivedParams, (f64, f64, f64)), String> {
    match (flags.gamma, flags.epsilon, flags.vc) {
        (Some(gamma), Some(epsilon), Some(vc)) => {
            let params = derive_dimensionless(gamma, epsilon, vc, !flags.no_displacement)
                .map_err(|e| e.to_string())?;
            Ok((params, (gamma, epsilon, vc)))
        }
        (None, None, None) => Err("missing --gamma, --epsilon and --vc".into()),
        _ => Err("--gamma, --epsilon and --vc must be given together".into()),
    }
}

fn cmd_impedance(
    flags: ScenarioFlags,
    alpha: Option<f64>,
    omega_tau: Option<f64>,
    q: Option<f64>,
) -> i32 {
    let scenario_given = flags.gamma.is_some() || flags.epsilon.is_some() || flags.vc.is_some();
    let raw_given = alpha.is_some() || omega_tau.is_some() || q.is_some();

    let (params, triple) = match (scenario_given, raw_given) {
        (true, true) => {
            return usage_error(
                "give either --gamma/--epsilon/--vc or --alpha/--omega-tau/--q, not both",
            )
        }
        (false, false) => {
            return usage_error("give either --gamma/--epsilon/--vc or --alpha/--omega-tau/--q")
        }
        (true, false) => match scenario_params(&flags) {
            Ok(pair) => pair,
            Err(e) => return usage_error(&e),
        },
        (false, true) => match (alpha, omega_tau, q) {
            (Some(alpha), Some(omega_tau), Some(q)) => {
                let q = if flags.no_displacement { 0.0 } else { q };
                match DerivedParams::from_raw(alpha, omega_tau, q) {
                    Ok(p) => (p, (f64::NAN, f64::NAN, f64::NAN)),
                    Err(e) => return usage_error(&e.to_string()),
                }
            }
            _ => return usage_error("--alpha, --omega-tau and --q must be given together"),
        },
    };

    let cfg = match config_from(flags.rel_tol) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(&e),
    };

    let (record, converged) = match impedance_from_derived(&params, &cfg) {
        Ok(ImpedanceResult { z0, quadrature, .. }) => (
            ImpedanceRecord::new(triple, &params, z0, true, quadrature.n_evals),
            true,
        ),
        Err(ImpedanceError::NonConvergence { value, n_evals, .. }) => {
            let z0 = plasmaskin_core::impedance::impedance_from_decrement(params.alpha, value);
            (
                ImpedanceRecord::new(triple, &params, z0, false, n_evals),
                false,
            )
        }
        Err(ImpedanceError::Params(e)) => return usage_error(&e.to_string()),
    };

    println!("{}", io::record_to_json(&record));
    if converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    gamma_range: &str,
    points: usize,
    epsilon: f64,
    vc: f64,
    out: &std::path::Path,
    svg: Option<&std::path::Path>,
    quantity: &str,
    log_y: bool,
    no_displacement: bool,
    rel_tol: Option<f64>,
) -> i32 {
    let range = match parse_range(gamma_range) {
        Ok(r) => r,
        Err(e) => return usage_error(&e),
    };
    let cfg = match config_from(rel_tol) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(&e),
    };
    let quantity: Quantity = match quantity.parse() {
        Ok(q) => q,
        Err(e) => return usage_error(&e),
    };
    let spec = match SweepSpec::new(range, points, epsilon, vc) {
        Ok(s) => s.with_displacement(!no_displacement).with_config(cfg),
        Err(e) => return usage_error(&e.to_string()),
    };

    let records = run_sweep(&spec);

    let write_result = match out.extension().and_then(|e| e.to_str()) {
        Some("csv") => io::write_csv(&records, out),
        Some("json") => io::write_json(&records, out),
        _ => return usage_error("--out must end in .csv or .json"),
    };
    if let Err(e) = write_result {
        return usage_error(&e.to_string());
    }

    if let Some(svg_path) = svg {
        if let Err(e) = render_svg(&records, quantity, log_y, svg_path) {
            return usage_error(&e.to_string());
        }
    }

    match find_peak(&records) {
        Ok(peak) => println!(
            "{{\"gamma_star\":{},\"peak_value\":{},\"arg_jump\":{}}}",
            format_float(peak.gamma_star),
            format_float(peak.peak_value),
            format_float(peak.arg_jump)
        ),
        Err(e) => eprintln!("peak summary unavailable: {e}"),
    }

    if records.iter().all(|r| r.converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn cmd_field(flags: ScenarioFlags, x_grid: Option<&str>, out: &std::path::Path) -> i32 {
    let (params, _) = match scenario_params(&flags) {
        Ok(pair) => pair,
        Err(e) => return usage_error(&e),
    };
    let cfg = match config_from(flags.rel_tol) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(&e),
    };
    let xs = match x_grid {
        Some(text) => match parse_grid(text) {
            Ok(xs) => xs,
            Err(e) => return usage_error(&e),
        },
        None => fields::default_depth_grid(),
    };

    let solver = FieldSolver::new(DispersionKernel::new(params));
    let profile = match solver.field_profile(&xs, &cfg) {
        Ok(p) => p,
        Err(e) => return usage_error(&e.to_string()),
    };

    let mut text = String::from("x,re_e,im_e\n");
    for (x, e) in profile.xs.iter().zip(&profile.e_vals) {
        text.push_str(&format!(
            "{},{},{}\n",
            format_float(*x),
            format_float(e.re),
            format_float(e.im)
        ));
    }
    if let Err(e) = std::fs::write(out, text) {
        return usage_error(&format!("{}: {e}", out.display()));
    }

    if profile.meta.iter().all(|m| m.converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn cmd_distribution(flags: ScenarioFlags, x: f64, mu_list: &str, out: &std::path::Path) -> i32 {
    let (params, _) = match scenario_params(&flags) {
        Ok(pair) => pair,
        Err(e) => return usage_error(&e),
    };
    let cfg = match config_from(flags.rel_tol) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(&e),
    };
    let mus = match parse_list(mu_list) {
        Ok(m) => m,
        Err(e) => return usage_error(&e),
    };

    let solver = FieldSolver::new(DispersionKernel::new(params));
    let profile = match solver.distribution_profile(x, &mus, &cfg) {
        Ok(p) => p,
        Err(e) => return usage_error(&e.to_string()),
    };

    let mut text = String::from("x,mu,re_h,im_h\n");
    for (mu, h) in profile.mus.iter().zip(&profile.h_vals) {
        text.push_str(&format!(
            "{},{},{},{}\n",
            format_float(x),
            format_float(*mu),
            format_float(h.re),
            format_float(h.im)
        ));
    }
    if let Err(e) = std::fs::write(out, text) {
        return usage_error(&format!("{}: {e}", out.display()));
    }

    if profile.meta.iter().all(|m| m.converged) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    }
}

fn cmd_validate() -> i32 {
    let outcomes = run_all(&Tolerances::default());
    print!("{}", render_table(&outcomes));
    if outcomes.iter().all(|o| o.passed) {
        EXIT_OK
    } else {
        EXIT_VALIDATION_FAILED
    }
}

fn cmd_plot(input: &std::path::Path, svg: &std::path::Path, quantity: &str, log_y: bool) -> i32 {
    let quantity: Quantity = match quantity.parse() {
        Ok(q) => q,
        Err(e) => return usage_error(&e),
    };
    let records = match io::read_csv(input) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    match render_svg(&records, quantity, log_y, svg) {
        Ok(()) => EXIT_OK,
        Err(e) => usage_error(&e.to_string()),
    }
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("--gamma-range must be lo:hi, got {text:?}"));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|e| format!("--gamma-range lower bound: {e}"))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|e| format!("--gamma-range upper bound: {e}"))?;
    Ok((lo, hi))
}

fn parse_list(text: &str) -> Result<Vec<f64>, String> {
    let values: Result<Vec<f64>, _> = text
        .split(',')
        .map(|part| part.trim().parse::<f64>())
        .collect();
    let values = values.map_err(|e| format!("--mu-list: {e}"))?;
    if values.is_empty() {
        return Err("--mu-list must not be empty".into());
    }
    Ok(values)
}

/// Depth grids: either an explicit comma list or `lo:hi:n[:log|:lin]`.
fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    if !text.contains(':') {
        return parse_list(text).map_err(|e| e.replace("--mu-list", "--x-grid"));
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 && parts.len() != 4 {
        return Err(format!("--x-grid must be lo:hi:n[:log|:lin], got {text:?}"));
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("--x-grid lo: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("--x-grid hi: {e}"))?;
    let n: usize = parts[2].parse().map_err(|e| format!("--x-grid n: {e}"))?;
    let log = match parts.get(3) {
        None => false,
        Some(&"log") => true,
        Some(&"lin") => false,
        Some(other) => return Err(format!("--x-grid scale must be log or lin, got {other:?}")),
    };
    if !(lo.is_finite() && hi.is_finite() && lo < hi && n >= 2) {
        return Err("--x-grid needs lo < hi and n >= 2".into());
    }
    if log && lo <= 0.0 {
        return Err("--x-grid log scale needs lo > 0".into());
    }
    Ok((0..n)
        .map(|i| {
            let frac = i as f64 / (n - 1) as f64;
            if log {
                10f64.powf(lo.log10() + (hi.log10() - lo.log10()) * frac)
            } else {
                lo + (hi - lo) * frac
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0.5:1.2").unwrap(), (0.5, 1.2));
        assert!(parse_range("0.5").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn grid_parsing() {
        let explicit = parse_grid("0,0.5,1").unwrap();
        assert_eq!(explicit, vec![0.0, 0.5, 1.0]);

        let linear = parse_grid("0:2:5:lin").unwrap();
        assert_eq!(linear, vec![0.0, 0.5, 1.0, 1.5, 2.0]);

        let log = parse_grid("1e-2:1e2:5:log").unwrap();
        assert!((log[0] - 1e-2).abs() < 1e-15);
        assert!((log[2] - 1.0).abs() < 1e-12);
        assert!((log[4] - 1e2).abs() < 1e-10);

        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1:5:bogus").is_err());
        assert!(parse_grid("-1:1:5:log").is_err());
    }
}
