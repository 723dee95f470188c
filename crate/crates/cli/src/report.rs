//! Report rows and their CSV/JSON encodings.
//!
//! Numbers carry 12 significant digits. Non-finite values are written as
//! `inf`, `-inf` and `nan` in both formats; an empty `error` cell means the
//! row has no error estimate.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Format;
use crate::CliError;

pub const HEADER: &str = "section,name,value,error,units,elapsed_ms";
const SIGNIFICANT: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub section: String,
    pub name: String,
    #[serde(with = "number")]
    pub value: f64,
    #[serde(with = "optional_number")]
    pub error: Option<f64>,
    pub units: String,
    pub elapsed_ms: u64,
}

impl Row {
    /// A row whose numbers are already rounded to the printed precision, so
    /// that both encodings parse back to the same row.
    pub fn new(section: &str, name: impl Into<String>, value: f64, error: Option<f64>, units: &str) -> Self {
        Self {
            section: section.to_string(),
            name: name.into(),
            value: round_sig(value),
            error: error.map(round_sig),
            units: units.to_string(),
            elapsed_ms: 0,
        }
    }

    pub fn with_elapsed(mut self, ms: u64) -> Self {
        self.elapsed_ms = ms;
        self
    }
}

fn round_sig(x: f64) -> f64 {
    format_number(x).parse().unwrap_or(x)
}

/// `%.12g`: fixed notation for decimal exponents in `[-4, 12)`, scientific
/// otherwise, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn parse_number(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => s.parse().ok(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_field(&r.section),
            csv_field(&r.name),
            format_number(r.value),
            r.error.map(format_number).unwrap_or_default(),
            csv_field(&r.units),
            r.elapsed_ms
        );
    }
    out
}

pub fn to_json(rows: &[Row]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Vec<Row>, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn render(rows: &[Row], format: Format) -> String {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    }
}

/// Writes the report to `path`, or stdout when `None`.
pub fn emit_report(rows: &[Row], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::Run("report has no rows".into()));
    }
    let text = render(rows, format);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("--out {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// JSON numbers, with non-finite values as strings.
mod number {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&format_number(*x))
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => parse_number(&s).ok_or_else(|| serde::de::Error::custom(format!("bad number {s:?}"))),
        }
    }
}

mod optional_number {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => number::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "number")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
