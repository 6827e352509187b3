//! CSV output consumed by plotting tools.
//!
//! Every file starts with `#` comment lines: the first names the crate version
//! and the hash of the run configuration, an optional second one carries a
//! timestamp. Everything after the timestamp line is a deterministic function
//! of the configuration. Numbers use 17 significant digits in scientific
//! notation so that they round-trip exactly.

use std::io::Write;

use num_complex::Complex64 as C64;

use crate::analysis::{ErrorReport, ProfileRow};
use crate::error::{Error, Result};

/// Header metadata of an output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvMeta {
    pub version: String,
    pub config_hash: String,
    pub timestamp: Option<String>,
}

impl CsvMeta {
    pub fn new(config_hash: impl Into<String>) -> Self {
        CsvMeta { version: env!("CARGO_PKG_VERSION").to_string(), config_hash: config_hash.into(), timestamp: None }
    }

    pub fn with_timestamp(mut self, ts: impl Into<String>) -> Self {
        self.timestamp = Some(ts.into());
        self
    }
}

/// `x` with 17 significant digits.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn io(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Parse(format!("{other:?}")),
    }
}

/// Write the comment header, the column names and the rows.
pub fn write_table<W: Write>(out: &mut W, meta: &CsvMeta, columns: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    writeln!(out, "# viscoacoustic {} config-sha256={}", meta.version, meta.config_hash)?;
    if let Some(ts) = &meta.timestamp {
        writeln!(out, "# generated {ts}")?;
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(columns).map_err(io)?;
    for row in rows {
        if row.len() != columns.len() {
            return Err(Error::Parse(format!("row with {} fields for {} columns", row.len(), columns.len())));
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub const ERROR_COLUMNS: [&str; 10] =
    ["eta", "sqrt_eta", "omega", "order", "err_p_H1", "err_v_Hdiv", "err_total", "status", "abs_p_H1", "abs_v_Hdiv"];

/// `errors.csv`: one row per sample and order.
pub fn write_errors<W: Write>(out: &mut W, meta: &CsvMeta, report: &ErrorReport) -> Result<()> {
    let rows = report.records.iter().map(|r| {
        let e = r.errors;
        let get = |f: fn(&crate::analysis::ErrorRecord) -> f64| format_number(e.as_ref().map_or(f64::NAN, f));
        vec![
            format_number(r.eta),
            format_number(r.eta.sqrt()),
            format_number(r.omega),
            r.order.to_string(),
            get(|e| e.err_p_h1),
            get(|e| e.err_v_hdiv),
            get(|e| e.err_total),
            r.status.label(),
            get(|e| e.abs_p_h1),
            get(|e| e.abs_v_hdiv),
        ]
    });
    write_table(out, meta, &ERROR_COLUMNS, rows)
}

pub const SLOPE_COLUMNS: [&str; 7] = ["order", "slope", "window_start", "window_end", "sqrt_eta_min", "sqrt_eta_max", "residual"];

/// `slopes.csv`: one row per order; fields are empty when no window exists.
pub fn write_slopes<W: Write>(out: &mut W, meta: &CsvMeta, report: &ErrorReport) -> Result<()> {
    let opt = |x: Option<f64>| x.map(format_number).unwrap_or_default();
    let rows = report.slopes.iter().map(|s| {
        vec![
            s.order.to_string(),
            opt(s.slope),
            s.window.as_ref().map(|w| w.start.to_string()).unwrap_or_default(),
            s.window.as_ref().map(|w| (w.end - 1).to_string()).unwrap_or_default(),
            opt(s.window_sqrt_eta.map(|w| w.0)),
            opt(s.window_sqrt_eta.map(|w| w.1)),
            opt(s.residual),
        ]
    });
    write_table(out, meta, &SLOPE_COLUMNS, rows)
}

pub const PROFILE_COLUMNS: [&str; 10] =
    ["y", "s", "exact_re", "exact_im", "far_re", "far_im", "near_re", "near_im", "sum_re", "sum_im"];

/// `profile.csv`: side view of the tangential velocity.
pub fn write_profile<W: Write>(out: &mut W, meta: &CsvMeta, rows: &[ProfileRow]) -> Result<()> {
    let rows = rows.iter().map(|r| {
        let mut v = vec![format_number(r.y), format_number(r.s)];
        for z in [r.exact, r.far, r.near, r.sum()] {
            v.push(format_number(z.re));
            v.push(format_number(z.im));
        }
        v
    });
    write_table(out, meta, &PROFILE_COLUMNS, rows)
}

/// A complex field sampled on a tensor grid of tangential and wall-normal
/// positions, as columns `x, y, <name>_re, <name>_im, ...`.
pub fn write_field_grid<W: Write>(
    out: &mut W,
    meta: &CsvMeta,
    names: &[&str],
    points: &[(f64, f64)],
    values: &[Vec<C64>],
) -> Result<()> {
    if values.len() != names.len() || values.iter().any(|v| v.len() != points.len()) {
        return Err(Error::Parse("field grid: value table does not match names and points".into()));
    }
    let mut columns = vec!["x".to_string(), "y".to_string()];
    for n in names {
        columns.push(format!("{n}_re"));
        columns.push(format!("{n}_im"));
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let rows = points.iter().enumerate().map(|(i, &(x, y))| {
        let mut row = vec![format_number(x), format_number(y)];
        for v in values {
            row.push(format_number(v[i].re));
            row.push(format_number(v[i].im));
        }
        row
    });
    write_table(out, meta, &cols, rows)
}

/// Drop the timestamp comment so that two outputs can be compared byte by
/// byte.
pub fn strip_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with("# generated ")).map(|l| format!("{l}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{SampleRecord, SampleStatus, SweepAxis};
    use crate::params::ModelOrder;

    #[test]
    fn number_format_round_trips() {
        for x in [1.0, -0.1, 1e-300, std::f64::consts::PI, 6.02214076e23] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        assert_eq!(format_number(f64::NAN), "NaN");
    }

    #[test]
    fn errors_csv_layout() {
        let report = ErrorReport {
            axis: SweepAxis::Eta,
            records: vec![SampleRecord { eta: 1e-4, omega: 15.0, order: ModelOrder::One, errors: None, status: SampleStatus::Failed("x".into()) }],
            slopes: vec![],
        };
        let mut buf = Vec::new();
        write_errors(&mut buf, &CsvMeta::new("abc").with_timestamp("now"), &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# viscoacoustic {} config-sha256=abc", env!("CARGO_PKG_VERSION")));
        assert_eq!(lines[1], "# generated now");
        assert_eq!(lines[2], ERROR_COLUMNS.join(","));
        assert!(lines[3].starts_with("1.0000000000000000e-4,1.0000000000000000e-2,1.5000000000000000e1,1,NaN"));
        assert!(lines[3].contains("failed: x"));
        assert!(!strip_timestamp(&text).contains("now"));
    }

    #[test]
    fn grid_shape_checked() {
        let mut buf = Vec::new();
        let r = write_field_grid(&mut buf, &CsvMeta::new("h"), &["p"], &[(0.0, 0.0)], &[vec![]]);
        assert!(r.is_err());
    }
}
