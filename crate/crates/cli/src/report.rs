//! Report assembly and serialization.

use serde::Serialize;
use serde_json::Value;

use campanato_core::SelfMapCertificate;

use crate::config::{Format, RunConfig};
use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct CertificateSummary {
    pub symbol: String,
    #[serde(flatten)]
    pub certificate: SelfMapCertificate,
    pub value_at_zero: [f64; 2],
}

impl CertificateSummary {
    pub fn new(cert: &SelfMapCertificate) -> Self {
        let c = cert.value_at_zero();
        Self {
            symbol: cert.map.to_string(),
            certificate: cert.clone(),
            value_at_zero: [c.re, c.im],
        }
    }
}

/// One computed quantity with the grid that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub quantity: String,
    pub value: Value,
    pub grid: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl Entry {
    pub fn new(quantity: impl Into<String>, value: impl Serialize, grid: Value) -> Self {
        Self {
            quantity: quantity.into(),
            value: to_value(value),
            grid,
            verdict: None,
            curve: None,
            pass: None,
            details: None,
        }
    }

    pub fn verdict(mut self, v: impl Serialize) -> Self {
        self.verdict = Some(to_value(v));
        self
    }

    pub fn curve(mut self, v: impl Serialize) -> Self {
        self.curve = Some(to_value(v));
        self
    }

    pub fn pass(mut self, ok: bool) -> Self {
        self.pass = Some(ok);
        self
    }

    pub fn details(mut self, v: impl Serialize) -> Self {
        self.details = Some(to_value(v));
        self
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

/// Flat table for CSV output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: RunConfig,
    pub certificate: Option<CertificateSummary>,
    pub results: Vec<Entry>,
    pub timings: Option<Timings>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Report {
    /// Failed `pass` flags, by quantity name.
    pub fn failures(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|e| e.pass == Some(false))
            .map(|e| e.quantity.as_str())
            .collect()
    }

    pub fn render(&self) -> Result<Vec<u8>, CliError> {
        match self.config.options.format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                match &self.table {
                    Some(t) => {
                        w.write_record(&t.header)?;
                        for r in &t.rows {
                            w.write_record(r)?;
                        }
                    }
                    None => {
                        w.write_record(["quantity", "value"])?;
                        for e in &self.results {
                            w.write_record([e.quantity.as_str(), &e.value.to_string()])?;
                        }
                    }
                }
                w.into_inner().map_err(|e| CliError::Io(e.into_error()))
            }
        }
    }
}
