use std::io;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::oracles::McEstimate;

/// One compared quantity. `z_score` is `|closed_form - mc_mean| / mc_stderr`; records
/// comparing two deterministic evaluations carry `reference` and `abs_err` instead.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub quantity: String,
    pub closed_form: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_mean: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_err: Option<f64>,
}

impl Record {
    /// A sampled comparison. An estimate without spread (a degenerate ensemble) is
    /// compared exactly instead of through a z-score.
    pub fn with_mc(quantity: String, closed: Complex64, est: Option<&McEstimate>) -> Record {
        let spread = est.is_some_and(|e| e.stderr > 0.0);
        Record {
            quantity,
            closed_form: Some(closed),
            mc_mean: est.map(|e| e.mean),
            mc_stderr: est.map(|e| e.stderr),
            z_score: est.filter(|_| spread).map(|e| e.z_score(closed)),
            reference: None,
            abs_err: est.filter(|_| !spread).map(|e| (closed - e.mean).norm()),
        }
    }

    pub fn exact(quantity: String, closed: Complex64, reference: Complex64) -> Record {
        Record {
            quantity,
            closed_form: Some(closed),
            mc_mean: None,
            mc_stderr: None,
            z_score: None,
            reference: Some(reference),
            abs_err: Some((closed - reference).norm()),
        }
    }

    pub fn agrees(&self, z_threshold: f64, tol: f64) -> bool {
        self.z_score.map_or(true, |z| z <= z_threshold) && self.abs_err.map_or(true, |e| e <= tol)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    /// Every flag of the run, enough to repeat it.
    pub config: serde_json::Value,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_seconds: Option<f64>,
}

impl Report {
    pub fn new<C: Serialize>(command: &str, config: &C) -> Report {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
            records: Vec::new(),
            table: None,
            passed: None,
            timing_seconds: None,
        }
    }
}

/// Pretty JSON with every float printed to 17 significant digits.
struct Precise(PrettyFormatter<'static>);

impl Formatter for Precise {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}
