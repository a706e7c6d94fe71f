//! CSV and JSON serialization of sweep records.
//!
//! Floats are written with 17 significant digits, which round-trips every
//! finite `f64` bit-exactly. The CSV header is fixed; the JSON form is an
//! array of flat objects with the same keys.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::record::ImpedanceRecord;

/// Column order of both serializations.
pub const CSV_HEADER: &str =
    "gamma,epsilon,v_c,alpha,Omega,Q,re_Z0,im_Z0,abs_Z0,arg_Z0,converged,n_evals";

/// Serialization failures.
#[derive(Debug)]
pub enum IoError {
    /// Writing an empty record list is a contract violation.
    EmptyRecords,
    /// Underlying filesystem failure, with the offending path.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Malformed input while reading.
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::EmptyRecords => write!(f, "refusing to serialize an empty record list"),
            Self::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Self::Parse {
                path,
                line,
                message,
            } => {
                write!(f, "{}:{line}: {message}", path.display())
            }
        }
    }
}

impl std::error::Error for IoError {}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// 17-significant-digit float form used by both writers.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_row(r: &ImpedanceRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        format_float(r.gamma),
        format_float(r.epsilon),
        format_float(r.v_c),
        format_float(r.alpha),
        format_float(r.omega_tau),
        format_float(r.q),
        format_float(r.re_z0),
        format_float(r.im_z0),
        format_float(r.abs_z0),
        format_float(r.arg_z0),
        r.converged,
        r.n_evals
    )
}

/// Writes records as CSV with the fixed header.
pub fn write_csv(records: &[ImpedanceRecord], path: &Path) -> Result<(), IoError> {
    if records.is_empty() {
        return Err(IoError::EmptyRecords);
    }
    let mut text = String::with_capacity(records.len() * 220 + CSV_HEADER.len() + 1);
    text.push_str(CSV_HEADER);
    text.push('\n');
    for r in records {
        text.push_str(&csv_row(r));
        text.push('\n');
    }
    fs::write(path, text).map_err(io_err(path))
}

/// Reads records back from [`write_csv`] output.
pub fn read_csv(path: &Path) -> Result<Vec<ImpedanceRecord>, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: format!("unexpected header {header:?}"),
            })
        }
        None => {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                line: 1,
                message: "empty file".into(),
            })
        }
    }

    let mut records = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(IoError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("expected 12 fields, got {}", fields.len()),
            });
        }
        let parse = |text: &str, what: &str| -> Result<f64, IoError> {
            text.parse::<f64>().map_err(|e| IoError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("{what}: {e}"),
            })
        };
        records.push(ImpedanceRecord {
            gamma: parse(fields[0], "gamma")?,
            epsilon: parse(fields[1], "epsilon")?,
            v_c: parse(fields[2], "v_c")?,
            alpha: parse(fields[3], "alpha")?,
            omega_tau: parse(fields[4], "Omega")?,
            q: parse(fields[5], "Q")?,
            re_z0: parse(fields[6], "re_Z0")?,
            im_z0: parse(fields[7], "im_Z0")?,
            abs_z0: parse(fields[8], "abs_Z0")?,
            arg_z0: parse(fields[9], "arg_Z0")?,
            converged: fields[10].parse::<bool>().map_err(|e| IoError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("converged: {e}"),
            })?,
            n_evals: fields[11].parse::<u64>().map_err(|e| IoError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("n_evals: {e}"),
            })?,
        });
    }
    Ok(records)
}

/// JSON number; non-finite values become `null`.
pub fn json_number(x: f64) -> String {
    if x.is_finite() {
        format_float(x)
    } else {
        "null".to_string()
    }
}

/// One record as a flat JSON object with the CSV column names as keys.
pub fn record_to_json(r: &ImpedanceRecord) -> String {
    let mut s = String::with_capacity(320);
    s.push('{');
    let mut field = |name: &str, value: String| {
        if s.len() > 1 {
            s.push(',');
        }
        let _ = write!(s, "\"{name}\":{value}");
    };
    field("gamma", json_number(r.gamma));
    field("epsilon", json_number(r.epsilon));
    field("v_c", json_number(r.v_c));
    field("alpha", json_number(r.alpha));
    field("Omega", json_number(r.omega_tau));
    field("Q", json_number(r.q));
    field("re_Z0", json_number(r.re_z0));
    field("im_Z0", json_number(r.im_z0));
    field("abs_Z0", json_number(r.abs_z0));
    field("arg_Z0", json_number(r.arg_z0));
    field("converged", r.converged.to_string());
    field("n_evals", r.n_evals.to_string());
    s.push('}');
    s
}

/// Records as a JSON array of flat objects.
pub fn records_to_json(records: &[ImpedanceRecord]) -> String {
    let mut s = String::with_capacity(records.len() * 330 + 4);
    s.push_str("[\n");
    for (i, r) in records.iter().enumerate() {
        s.push_str("  ");
        s.push_str(&record_to_json(r));
        if i + 1 < records.len() {
            s.push(',');
        }
        s.push('\n');
    }
    s.push_str("]\n");
    s
}

/// Writes records as a JSON array.
pub fn write_json(records: &[ImpedanceRecord], path: &Path) -> Result<(), IoError> {
    if records.is_empty() {
        return Err(IoError::EmptyRecords);
    }
    fs::write(path, records_to_json(records)).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips_exactly() {
        for x in [
            1.0,
            -std::f64::consts::FRAC_1_SQRT_2,
            1e-300,
            3.17e300,
            0.1 + 0.2,
            f64::MIN_POSITIVE,
        ] {
            let parsed: f64 = format_float(x).parse().unwrap();
            assert_eq!(parsed.to_bits(), x.to_bits(), "{x:e}");
        }
    }

    #[test]
    fn empty_lists_are_rejected() {
        let dir = std::env::temp_dir();
        assert!(matches!(
            write_csv(&[], &dir.join("never.csv")),
            Err(IoError::EmptyRecords)
        ));
        assert!(matches!(
            write_json(&[], &dir.join("never.json")),
            Err(IoError::EmptyRecords)
        ));
    }

    #[test]
    fn io_errors_carry_the_path() {
        let rec = ImpedanceRecord {
            gamma: 1.0,
            epsilon: 1e-3,
            v_c: 1e-3,
            alpha: 1e3,
            omega_tau: 1e3,
            q: 1.0,
            re_z0: 0.5,
            im_z0: -0.5,
            abs_z0: 0.707,
            arg_z0: -0.785,
            converged: true,
            n_evals: 99,
        };
        let bad = Path::new("/nonexistent-dir-zzz/records.csv");
        let err = write_csv(&[rec], bad).unwrap_err();
        assert!(err.to_string().contains("nonexistent-dir-zzz"));
    }
}
