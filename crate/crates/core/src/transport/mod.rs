//! Exact transport distances between discrete measures, and sampled
//! estimates of the distance to the limiting measure.
//!
//! W1 is the optimal transportation cost with Euclidean ground cost. The
//! bounded-Lipschitz distance is computed as the transportation cost with the
//! truncated ground cost `min(|x - y|, 2)`: on a finite set, functions with
//! `|f| <= 1` and Lipschitz constant 1 are, up to an additive constant that
//! does not change `integral f d(mu - nu)`, exactly the functions that are
//! 1-Lipschitz for the truncated metric, and Kantorovich duality applies to
//! that metric.

mod simplex;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble::{EmpiricalMeasure, EnsembleError};
use crate::limit::LimitMeasure;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TransportError {
    #[error("transport problem has {size} cost entries, above the cap of {cap}; subsample the measures")]
    TooLarge { size: usize, cap: usize },
    #[error("need at least {required} reference samples, got {samples}")]
    TooFewSamples { samples: usize, required: usize },
    #[error("network simplex did not terminate after {pivots} pivots")]
    NoConvergence { pivots: usize },
    #[error("transportation problem is unbounded")]
    Unbounded,
    #[error("no feasible coupling (artificial flow {residual:e})")]
    Infeasible { residual: f64 },
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "w1")]
    W1,
    #[serde(rename = "dbl")]
    BoundedLipschitz,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::W1 => "w1",
            Metric::BoundedLipschitz => "dbl",
        })
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "w1" => Ok(Metric::W1),
            "dbl" | "bl" => Ok(Metric::BoundedLipschitz),
            other => Err(format!("unknown metric `{other}` (expected w1 or dbl)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactLp,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub value: f64,
    /// Zero for exact discrete results.
    pub standard_error: f64,
    pub method: Method,
    /// Reference sample size for sampled estimates, zero otherwise.
    pub samples: usize,
}

impl DistanceEstimate {
    fn exact(value: f64) -> Self {
        Self {
            value: value.max(0.0),
            standard_error: 0.0,
            method: Method::ExactLp,
            samples: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportOptions {
    /// Largest admissible number of cost-matrix entries.
    pub lp_cap: usize,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self { lp_cap: 10_000_000 }
    }
}

/// Optimal transportation cost for an arbitrary row-major cost matrix
/// (`supply.len() x demand.len()`).
pub fn transport_cost(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<f64, TransportError> {
    assert_eq!(cost.len(), supply.len() * demand.len(), "cost matrix shape");
    let sol = simplex::solve(supply, demand, cost)?;
    log::debug!("transport {}x{}: {} pivots", supply.len(), demand.len(), sol.pivots);
    Ok(sol.cost)
}

fn ground_cost(metric: Metric, a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    match metric {
        Metric::W1 => d,
        Metric::BoundedLipschitz => d.min(2.0),
    }
}

fn positive_part(mu: &EmpiricalMeasure) -> (Vec<Complex64>, Vec<f64>) {
    mu.points()
        .iter()
        .zip(mu.weights())
        .filter(|(_, w)| **w > 0.0)
        .map(|(z, w)| (*z, *w))
        .unzip()
}

/// Exact distance between two discrete measures.
pub fn discrete_distance(
    mu: &EmpiricalMeasure,
    nu: &EmpiricalMeasure,
    metric: Metric,
    opts: TransportOptions,
) -> Result<DistanceEstimate, TransportError> {
    let (xs, a) = positive_part(mu);
    let (ys, b) = positive_part(nu);
    let size = xs.len() * ys.len();
    if size > opts.lp_cap {
        return Err(TransportError::TooLarge { size, cap: opts.lp_cap });
    }
    let mut cost = Vec::with_capacity(size);
    for x in &xs {
        for y in &ys {
            cost.push(ground_cost(metric, *x, *y));
        }
    }
    Ok(DistanceEstimate::exact(transport_cost(&a, &b, &cost)?))
}

pub fn w1_discrete(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<DistanceEstimate, TransportError> {
    discrete_distance(mu, nu, Metric::W1, TransportOptions::default())
}

pub fn dbl_discrete(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> Result<DistanceEstimate, TransportError> {
    discrete_distance(mu, nu, Metric::BoundedLipschitz, TransportOptions::default())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDistanceOptions {
    /// Reference sample size `N`; must be at least ten times the support of
    /// the empirical measure.
    pub samples: usize,
    /// Batches for the standard error; fewer than 2 disables it.
    pub batches: usize,
    pub metric: Metric,
    pub transport: TransportOptions,
}

impl LimitDistanceOptions {
    pub fn new(metric: Metric, samples: usize) -> Self {
        Self {
            samples,
            batches: 5,
            metric,
            transport: TransportOptions::default(),
        }
    }
}

/// Distance from `mu` to `limit`, estimated by the exact distance to an
/// i.i.d. sample of size `N` from `limit`.
///
/// The standard error is the spread of the distances to `batches` disjoint
/// sub-samples, divided by `sqrt(batches)`. For W1 the estimate is biased
/// upwards in expectation (the sample is a noisy stand-in for the limit) and
/// the bias vanishes as `N` grows.
pub fn distance_to_limit<R: Rng + ?Sized>(
    mu: &EmpiricalMeasure,
    limit: &LimitMeasure,
    opts: &LimitDistanceOptions,
    rng: &mut R,
) -> Result<DistanceEstimate, TransportError> {
    let required = 10 * mu.len();
    if opts.samples < required {
        return Err(TransportError::TooFewSamples {
            samples: opts.samples,
            required,
        });
    }
    let size = mu.len() * opts.samples;
    if size > opts.transport.lp_cap {
        return Err(TransportError::TooLarge {
            size,
            cap: opts.transport.lp_cap,
        });
    }
    let sample = limit.sample_n(opts.samples, rng);
    let full = discrete_distance(mu, &EmpiricalMeasure::uniform(sample.clone())?, opts.metric, opts.transport)?;
    let mut standard_error = 0.0;
    if opts.batches >= 2 {
        let per = opts.samples / opts.batches;
        let mut values = Vec::with_capacity(opts.batches);
        for chunk in sample.chunks_exact(per).take(opts.batches) {
            let nu = EmpiricalMeasure::uniform(chunk.to_vec())?;
            values.push(discrete_distance(mu, &nu, opts.metric, opts.transport)?.value);
        }
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
        standard_error = (var / k).sqrt();
    }
    Ok(DistanceEstimate {
        value: full.value,
        standard_error,
        method: Method::Sampled,
        samples: opts.samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identical_measures_are_at_distance_zero() {
        let mu = EmpiricalMeasure::new(vec![c(0.0, 0.0), c(1.0, 2.0), c(-3.0, 0.5)], vec![0.2, 0.5, 0.3]).unwrap();
        assert!(w1_discrete(&mu, &mu).unwrap().value.abs() < 1e-12);
        assert!(dbl_discrete(&mu, &mu).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn point_masses() {
        let a = EmpiricalMeasure::uniform(vec![c(0.0, 0.0)]).unwrap();
        let b = EmpiricalMeasure::uniform(vec![c(3.0, 4.0)]).unwrap();
        assert!((w1_discrete(&a, &b).unwrap().value - 5.0).abs() < 1e-12);
        assert!((dbl_discrete(&a, &b).unwrap().value - 2.0).abs() < 1e-12);
        let near = EmpiricalMeasure::uniform(vec![c(0.3, 0.4)]).unwrap();
        assert!((dbl_discrete(&a, &near).unwrap().value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_point_example() {
        let mu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let nu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let d = w1_discrete(&mu, &nu).unwrap();
        assert!((d.value - 0.5).abs() < 1e-12);
        assert_eq!(d.method, Method::ExactLp);
        assert_eq!(d.standard_error, 0.0);
    }

    #[test]
    fn one_dimensional_matches_sorted_coupling() {
        // On a line W1 between uniform measures of equal size pairs sorted points.
        let xs = [0.3, -1.2, 2.5, 0.0, 0.9, -0.4, 1.7];
        let ys = [1.1, 0.2, -2.0, 0.6, 3.3, -0.7, 0.05];
        let mut sx = xs.to_vec();
        let mut sy = ys.to_vec();
        sx.sort_by(f64::total_cmp);
        sy.sort_by(f64::total_cmp);
        let expected: f64 = sx.iter().zip(&sy).map(|(a, b)| (a - b).abs()).sum::<f64>() / 7.0;
        let mu = EmpiricalMeasure::uniform(xs.iter().map(|&x| c(x, 0.0)).collect()).unwrap();
        let nu = EmpiricalMeasure::uniform(ys.iter().map(|&y| c(y, 0.0)).collect()).unwrap();
        assert!((w1_discrete(&mu, &nu).unwrap().value - expected).abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let mu = EmpiricalMeasure::uniform(vec![c(0.0, 0.0); 4]).unwrap();
        let opts = TransportOptions { lp_cap: 15 };
        assert!(matches!(
            discrete_distance(&mu, &mu, Metric::W1, opts),
            Err(TransportError::TooLarge { size: 16, cap: 15 })
        ));
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("w1".parse::<Metric>().unwrap(), Metric::W1);
        assert_eq!("DBL".parse::<Metric>().unwrap(), Metric::BoundedLipschitz);
        assert!("w2".parse::<Metric>().is_err());
        assert_eq!(Metric::BoundedLipschitz.to_string(), "dbl");
    }
}
