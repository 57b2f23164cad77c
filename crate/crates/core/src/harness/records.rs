//! Per-trial records and their CSV/JSON serializations.
//!
//! CSV columns, in order:
//! `trial, n, m, alpha, seed, max_modulus, dbl_estimate, dbl_stderr,
//! w1_estimate, eig_re, eig_im, counts_outside, bounds`.
//! `eig_re`/`eig_im` are `;`-separated lists, `counts_outside` is a
//! `;`-separated list of `radius:count`, and `bounds` is a `;`-separated list
//! of `name=value`. Missing estimates are empty fields.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::OutputFormat;
use super::HarnessError;

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 13] = [
    "trial",
    "n",
    "m",
    "alpha",
    "seed",
    "max_modulus",
    "dbl_estimate",
    "dbl_stderr",
    "w1_estimate",
    "eig_re",
    "eig_im",
    "counts_outside",
    "bounds",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusCount {
    pub radius: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub trial: usize,
    /// Base seed; the trial's streams are derived from `(seed, trial)`.
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub eig_re: Vec<f64>,
    pub eig_im: Vec<f64>,
    pub max_modulus: f64,
    pub counts_outside: Vec<RadiusCount>,
    pub dbl_estimate: Option<f64>,
    pub dbl_stderr: Option<f64>,
    pub w1_estimate: Option<f64>,
    pub bounds: BTreeMap<String, f64>,
}

impl ExperimentRecord {
    pub fn new(trial: usize, seed: u64, n: usize, m: usize, eigenvalues: &[Complex64]) -> Self {
        Self {
            trial,
            seed,
            n,
            m,
            alpha: m as f64 / n as f64,
            eig_re: eigenvalues.iter().map(|z| z.re).collect(),
            eig_im: eigenvalues.iter().map(|z| z.im).collect(),
            max_modulus: eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max),
            counts_outside: Vec::new(),
            dbl_estimate: None,
            dbl_stderr: None,
            w1_estimate: None,
            bounds: BTreeMap::new(),
        }
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.eig_re.iter().zip(&self.eig_im).map(|(&re, &im)| Complex64::new(re, im)).collect()
    }

    fn csv_row(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
        vec![
            self.trial.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.alpha.to_string(),
            self.seed.to_string(),
            self.max_modulus.to_string(),
            opt(self.dbl_estimate),
            opt(self.dbl_stderr),
            opt(self.w1_estimate),
            join(&self.eig_re),
            join(&self.eig_im),
            self.counts_outside
                .iter()
                .map(|c| format!("{}:{}", c.radius, c.count))
                .collect::<Vec<_>>()
                .join(";"),
            self.bounds
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";"),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordFile {
    pub schema: u32,
    pub records: Vec<ExperimentRecord>,
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn records_to_json(records: &[ExperimentRecord]) -> Result<String, HarnessError> {
    Ok(serde_json::to_string_pretty(&RecordFile {
        schema: SCHEMA_VERSION,
        records: records.to_vec(),
    })?)
}

pub fn records_from_json(text: &str) -> Result<Vec<ExperimentRecord>, HarnessError> {
    let file: RecordFile = serde_json::from_str(text)?;
    if file.schema != SCHEMA_VERSION {
        return Err(HarnessError::Config(format!("unsupported record schema {}", file.schema)));
    }
    Ok(file.records)
}

/// Writes `records` to `path` in `format`.
pub fn emit_records(records: &[ExperimentRecord], format: OutputFormat, path: &Path) -> Result<(), HarnessError> {
    let text = match format {
        OutputFormat::Csv => records_to_csv(records)?,
        OutputFormat::Json => records_to_json(records)?,
    };
    std::fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}
