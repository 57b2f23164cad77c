use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::ensemble::TruncationEnsemble;
use crate::transport::Metric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Spectrum,
    Distance,
    Edge,
    Bounds,
    Figure,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::Distance => "distance",
            ExperimentKind::Edge => "edge",
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::Figure => "figure",
        })
    }
}

impl FromStr for ExperimentKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "spectrum" => Ok(ExperimentKind::Spectrum),
            "distance" => Ok(ExperimentKind::Distance),
            "edge" => Ok(ExperimentKind::Edge),
            "bounds" => Ok(ExperimentKind::Bounds),
            "figure" => Ok(ExperimentKind::Figure),
            other => Err(HarnessError::Config(format!("unknown experiment `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(HarnessError::Config(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// Everything an experiment run depends on. The worker count and output
/// directory are not serialized: they must not influence results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip)]
    pub workers: usize,
    pub metric: Metric,
    /// Reference sample size for distances; `None` means `10 m`.
    pub metric_samples: Option<usize>,
    /// Radii for the edge experiment and the spectrum counts.
    pub radius_grid: Vec<f64>,
    /// Distances `r` at which concentration bounds are evaluated.
    pub distance_grid: Vec<f64>,
    /// Largest admissible LP size (cost-matrix entries).
    pub lp_cap: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Spectrum,
            n: 100,
            m: 50,
            trials: 100,
            seed: 0,
            workers: 1,
            metric: Metric::BoundedLipschitz,
            metric_samples: None,
            radius_grid: vec![1.05, 1.1, 1.2],
            distance_grid: vec![0.05, 0.1, 0.2, 0.5, 1.0, 2.0],
            lp_cap: 10_000_000,
            out: PathBuf::from("out"),
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, n: usize, m: usize) -> Self {
        Self {
            kind,
            n,
            m,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        TruncationEnsemble::new(self.n, self.m).map_err(|e| HarnessError::Config(e.to_string()))?;
        if let Some(r) = self.radius_grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(HarnessError::Config(format!("radius grid entry {r} is not positive")));
        }
        if let Some(r) = self.distance_grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return Err(HarnessError::Config(format!("distance grid entry {r} is not positive")));
        }
        Ok(())
    }

    pub fn ensemble(&self) -> Result<TruncationEnsemble, HarnessError> {
        TruncationEnsemble::new(self.n, self.m).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn metric_samples_or_default(&self) -> usize {
        self.metric_samples.unwrap_or(10 * self.m)
    }

    /// Applies every field set in `o`.
    pub fn apply(&mut self, o: &ConfigOverrides) -> Result<(), HarnessError> {
        if let Some(k) = &o.kind {
            self.kind = k.parse()?;
        }
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = &o.$f { self.$f = v.clone(); } )* };
        }
        set!(n, m, trials, seed, workers, radius_grid, distance_grid, lp_cap, out);
        if let Some(v) = o.metric_samples {
            self.metric_samples = Some(v);
        }
        if let Some(v) = &o.metric {
            self.metric = v.parse().map_err(HarnessError::Config)?;
        }
        if let Some(v) = &o.format {
            self.format = v.parse()?;
        }
        Ok(())
    }
}

/// Flat, all-optional mirror of the CLI flags, as read from a config file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigOverrides {
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub metric: Option<String>,
    pub metric_samples: Option<usize>,
    pub radius_grid: Option<Vec<f64>>,
    pub distance_grid: Option<Vec<f64>>,
    pub lp_cap: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl ConfigOverrides {
    /// JSON object, or `key = value` lines (`#` comments, lists comma
    /// separated). Underscores in keys are accepted for dashes.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("config JSON: {e}")));
        }
        let mut o = ConfigOverrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let bad = |what: &str| HarnessError::Config(format!("line {}: invalid {what} `{value}`", lineno + 1));
            match key.as_str() {
                "kind" => o.kind = Some(value.to_string()),
                "n" => o.n = Some(value.parse().map_err(|_| bad("n"))?),
                "m" => o.m = Some(value.parse().map_err(|_| bad("m"))?),
                "trials" => o.trials = Some(value.parse().map_err(|_| bad("trials"))?),
                "seed" => o.seed = Some(value.parse().map_err(|_| bad("seed"))?),
                "workers" => o.workers = Some(value.parse().map_err(|_| bad("workers"))?),
                "metric" => o.metric = Some(value.to_string()),
                "metric-samples" => o.metric_samples = Some(value.parse().map_err(|_| bad("metric-samples"))?),
                "radius-grid" => o.radius_grid = Some(parse_list(value).map_err(|_| bad("radius-grid"))?),
                "distance-grid" => o.distance_grid = Some(parse_list(value).map_err(|_| bad("distance-grid"))?),
                "lp-cap" => o.lp_cap = Some(value.parse().map_err(|_| bad("lp-cap"))?),
                "out" => o.out = Some(PathBuf::from(value)),
                "format" => o.format = Some(value.to_string()),
                other => return Err(HarnessError::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(o)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }
}

/// Comma-separated list of floats.
pub fn parse_list(s: &str) -> Result<Vec<f64>, std::num::ParseFloatError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse()).collect()
}
