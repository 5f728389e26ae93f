use std::io::Write;
use std::str::FromStr;

use super::ResultRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Tsv,
}

impl OutputFormat {
    fn separator(self) -> char {
        match self {
            OutputFormat::Csv => ',',
            OutputFormat::Tsv => '\t',
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "tsv" => Ok(OutputFormat::Tsv),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

const HEADER: [&str; 9] = [
    "experiment",
    "window",
    "N",
    "lambda",
    "param",
    "samples_used",
    "max_error",
    "bound",
    "pass",
];

/// Shortest decimal that parses back to the same `f64`; exponent notation
/// outside `[1e-4, 1e16)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write_table<W: Write>(rows: &[ResultRow], format: OutputFormat, mut out: W) -> Result<()> {
    let sep = format.separator().to_string();
    writeln!(out, "{}", HEADER.join(&sep))?;
    for r in rows {
        let fields = [
            r.experiment.as_str().to_string(),
            r.window.clone(),
            r.n.to_string(),
            format_float(r.lambda),
            r.param.to_string(),
            r.samples_used.to_string(),
            format_float(r.max_error),
            r.bound.map(format_float).unwrap_or_default(),
            r.pass.to_string(),
        ];
        writeln!(out, "{}", fields.join(&sep))?;
    }
    out.flush()?;
    Ok(())
}
