//! Seeded, trial-parallel Monte Carlo campaigns with persisted records,
//! summaries, and figures.
//!
//! Each trial draws from RNG streams keyed by `(seed, trial)`, trials run on
//! a rayon pool of `workers` threads, and results are reduced in trial
//! order, so summaries do not depend on the worker count.

pub mod config;
mod experiments;
pub mod records;
pub mod svg;

use std::path::{Path, PathBuf};

use serde::Serialize;

pub use config::{ConfigOverrides, ExperimentConfig, ExperimentKind, OutputFormat};
pub use experiments::{
    exact_radial_chi_square, limit_radial_chi_square, run_bounds_experiment, run_distance_experiment,
    run_edge_experiment, run_spectrum_experiment, reproduce_figure, BoundsSummary, ConcentrationRow,
    DistanceQuantiles, DistanceSummary, EdgeRow, EdgeSummary, FigurePanel, FigureSummary, GofReport, RadiusMean,
    SpectrumSummary,
};
pub use records::{emit_records, records_from_json, ExperimentRecord, RadiusCount, SCHEMA_VERSION};

use crate::bounds::BoundError;
use crate::coulomb::CoulombError;
use crate::dpp::DppError;
use crate::ensemble::EnsembleError;
use crate::stats::StatsError;
use crate::transport::TransportError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error(transparent)]
    Dpp(#[from] DppError),
    #[error(transparent)]
    Bounds(#[from] BoundError),
    #[error(transparent)]
    Coulomb(#[from] CoulombError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// A checked claim. Hard assertions fail the run; soft ones are reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub hard: bool,
    pub detail: String,
}

impl Assertion {
    pub(crate) fn hard(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            hard: true,
            detail: detail.into(),
        }
    }

    pub(crate) fn soft(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            hard: false,
            ..Self::hard(name, passed, detail)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Summary {
    Spectrum(SpectrumSummary),
    Distance(DistanceSummary),
    Edge(EdgeSummary),
    Bounds(BoundsSummary),
    Figure(FigureSummary),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub assertions: Vec<Assertion>,
    pub warnings: Vec<String>,
    /// Trials excluded because the eigensolver did not converge.
    pub flagged: Vec<usize>,
    pub records: Vec<ExperimentRecord>,
    /// Extra named artifacts (SVG figures).
    pub files: Vec<(String, String)>,
}

impl Outcome {
    pub fn hard_failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| a.hard && !a.passed)
    }

    pub fn passed(&self) -> bool {
        self.hard_failures().next().is_none()
    }

    /// The content of `summary.json`.
    pub fn summary_json(&self) -> Result<String, HarnessError> {
        #[derive(Serialize)]
        struct File<'a> {
            schema: u32,
            config: &'a ExperimentConfig,
            flagged: &'a [usize],
            summary: &'a Summary,
            assertions: &'a [Assertion],
            warnings: &'a [String],
        }
        Ok(serde_json::to_string_pretty(&File {
            schema: SCHEMA_VERSION,
            config: &self.config,
            flagged: &self.flagged,
            summary: &self.summary,
            assertions: &self.assertions,
            warnings: &self.warnings,
        })?)
    }

    /// Writes `summary.json`, the records file and any figures into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let mut written = Vec::new();
        let summary = dir.join("summary.json");
        std::fs::write(&summary, self.summary_json()?).map_err(|e| HarnessError::io(&summary, e))?;
        written.push(summary);
        if !self.records.is_empty() {
            let ext = match self.config.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            let path = dir.join(format!("records.{ext}"));
            emit_records(&self.records, self.config.format, &path)?;
            written.push(path);
        }
        for (name, body) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| HarnessError::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Runs the experiment selected by `config.kind`.
pub fn run(config: &ExperimentConfig) -> Result<Outcome, HarnessError> {
    config.validate()?;
    match config.kind {
        ExperimentKind::Spectrum => run_spectrum_experiment(config),
        ExperimentKind::Distance => run_distance_experiment(config),
        ExperimentKind::Edge => run_edge_experiment(config),
        ExperimentKind::Bounds => run_bounds_experiment(config),
        ExperimentKind::Figure => reproduce_figure(config),
    }
}
