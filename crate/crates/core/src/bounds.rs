//! Explicit probability bounds and constants for the truncated ensemble:
//! the concentration bound for `d_BL`, the `delta_m` schedule, the edge
//! bound and its simplified tail, the radius threshold, and the mollifier
//! radius used in the concentration argument.
//!
//! Every bound is assembled as a logarithm and exponentiated last.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::ensemble::TruncationEnsemble;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundError {
    #[error("{name} must be positive and finite, got {value}")]
    InvalidInput { name: &'static str, value: f64 },
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("the m >= n/e branch of delta_m needs m >= 2, got m = {0}")]
    DeltaNeedsTwo(usize),
    #[error("mollifier term {index} is not positive ({value})")]
    NonPositiveTerm { index: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub n: usize,
    pub m: usize,
    /// The distance `r` or excess radius `eps`, when the bound takes one.
    pub parameter: Option<f64>,
    pub value: f64,
    /// `log(value)`; `-inf` for an exact zero.
    pub log_value: f64,
    pub vacuous: bool,
    /// `value` overflowed to `+inf`.
    pub overflow: bool,
    pub components: BTreeMap<String, f64>,
}

impl BoundReport {
    fn from_log(name: &str, ens: TruncationEnsemble, parameter: Option<f64>, log_value: f64) -> Self {
        let value = log_value.exp();
        Self {
            name: name.to_string(),
            n: ens.n(),
            m: ens.m(),
            parameter,
            value,
            log_value,
            vacuous: value >= 1.0,
            overflow: value.is_infinite(),
            components: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, v: f64) -> Self {
        self.components.insert(key.to_string(), v);
        self
    }
}

fn check_alpha(alpha: f64) -> Result<(), BoundError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(BoundError::InvalidAlpha(alpha))
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), BoundError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(BoundError::InvalidInput { name, value })
    }
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + ((a - hi).exp() + (b - hi).exp()).ln()
}

/// `1 + eta_alpha = sqrt(3 + log(1/alpha))`; returns `eta_alpha`.
pub fn eta_alpha(alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    Ok((3.0 - alpha.ln()).sqrt() - 1.0)
}

/// Which pair `(C_alpha, C'_alpha)` feeds the concentration bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConcentrationConstants {
    /// `C = 1/(128 pi (1 + sqrt(3 + log(1/alpha)))^2)`, `C' = 6 + 3 log(1/alpha)`.
    General,
    /// `C = 1/(1152 pi)`, `C' = 9`; meant for `m >= n/e`.
    LargeRatio,
    /// `C = 1/(128 pi (1 + sqrt(3 log(1/alpha)))^2)`, `C' = 9 log(1/alpha)`;
    /// meant for `m < n/e`.
    SmallRatio,
}

impl ConcentrationConstants {
    pub fn name(&self) -> &'static str {
        match self {
            ConcentrationConstants::General => "concentration",
            ConcentrationConstants::LargeRatio => "concentration-large-ratio",
            ConcentrationConstants::SmallRatio => "concentration-small-ratio",
        }
    }

    /// `(C_alpha, C'_alpha)`.
    pub fn values(&self, alpha: f64) -> Result<(f64, f64), BoundError> {
        check_alpha(alpha)?;
        let l = -alpha.ln();
        Ok(match self {
            ConcentrationConstants::General => (c_alpha(alpha)?, 6.0 + 3.0 * l),
            ConcentrationConstants::LargeRatio => (1.0 / (1152.0 * PI), 9.0),
            ConcentrationConstants::SmallRatio => {
                let s = 1.0 + (3.0 * l).sqrt();
                (1.0 / (128.0 * PI * s * s), 9.0 * l)
            }
        })
    }
}

/// `C_alpha = 1/(128 pi (1 + sqrt(3 + log(1/alpha)))^2)`.
pub fn c_alpha(alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    let s = 1.0 + (3.0 - alpha.ln()).sqrt();
    Ok(1.0 / (128.0 * PI * s * s))
}

/// `C'_alpha = 6 + 3 log(1/alpha)`.
pub fn c_prime_alpha(alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    Ok(6.0 - 3.0 * alpha.ln())
}

/// `P[d_BL(mu_m, mu_alpha) >= r]
///   <= e^2 exp(-C m^2 r^2 + 2 m log m + C' m) + (e/2pi) sqrt(m/(1-alpha)) e^{-m}`.
pub fn concentration_bound(ensemble: TruncationEnsemble, r: f64) -> Result<BoundReport, BoundError> {
    concentration_bound_with(ensemble, r, ConcentrationConstants::General)
}

pub fn concentration_bound_with(
    ensemble: TruncationEnsemble,
    r: f64,
    constants: ConcentrationConstants,
) -> Result<BoundReport, BoundError> {
    check_positive("r", r)?;
    let a = ensemble.alpha();
    let (c, cp) = constants.values(a)?;
    let m = ensemble.m() as f64;
    let main = 2.0 - c * m * m * r * r + 2.0 * m * m.ln() + cp * m;
    let tail = log_simplified_tail(ensemble);
    Ok(
        BoundReport::from_log(constants.name(), ensemble, Some(r), log_add_exp(main, tail))
            .with("C_alpha", c)
            .with("C_prime_alpha", cp)
            .with("eta_alpha", eta_alpha(a)?)
            .with("log_main_term", main)
            .with("log_tail_term", tail),
    )
}

fn log_simplified_tail(ensemble: TruncationEnsemble) -> f64 {
    let m = ensemble.m() as f64;
    1.0 - (2.0 * PI).ln() + 0.5 * (m.ln() - (-ensemble.alpha()).ln_1p()) - m
}

/// `(e/2pi) sqrt(m/(1-alpha)) e^{-m}`.
pub fn simplified_tail_bound(ensemble: TruncationEnsemble) -> BoundReport {
    BoundReport::from_log("simplified-tail", ensemble, None, log_simplified_tail(ensemble))
}

/// Bound on `P[max_j |z_j| > 1 + eps]`:
/// `e (1 - q^m) / (2 pi sqrt(n alpha (1-alpha)) (1 - q))
///   * [(1-q)^{1-alpha} / ((1-alpha)^{1-alpha} alpha^alpha)]^n`
/// with `q = alpha (1+eps)^2`, and exactly 0 once `eps >= 1/sqrt(alpha) - 1`.
pub fn edge_bound(ensemble: TruncationEnsemble, eps: f64) -> Result<BoundReport, BoundError> {
    check_positive("eps", eps)?;
    let a = ensemble.alpha();
    let (n, m) = (ensemble.n() as f64, ensemble.m() as f64);
    let edge = 1.0 / a.sqrt() - 1.0;
    let one_minus_q = 1.0 - a * (1.0 + eps).powi(2);
    if eps >= edge || one_minus_q <= 0.0 {
        return Ok(BoundReport::from_log("edge", ensemble, Some(eps), f64::NEG_INFINITY).with("q", 1.0));
    }
    let q = 1.0 - one_minus_q;
    let log_q = q.ln();
    let log_ratio_num = (-(m * log_q).exp_m1()).ln();
    let log_prefactor = 1.0 + log_ratio_num - (2.0 * PI).ln() - 0.5 * (n * a * (1.0 - a)).ln() - one_minus_q.ln();
    let log_bracket = (1.0 - a) * one_minus_q.ln() - (1.0 - a) * (1.0 - a).ln() - a * a.ln();
    Ok(
        BoundReport::from_log("edge", ensemble, Some(eps), log_prefactor + n * log_bracket)
            .with("q", q)
            .with("log_prefactor", log_prefactor)
            .with("log_bracket", log_bracket),
    )
}

/// `eps*` with `(1+eps*)^2 = (1/alpha) [1 - (1-alpha) (alpha/e)^{alpha/(1-alpha)}]`:
/// for `eps > eps*` the bracket in [`edge_bound`] is at most `e^{-alpha}`.
pub fn epsilon_threshold(alpha: f64) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    // 1 - (1-alpha) exp(x) = -expm1(log(1-alpha) + x)
    let x = alpha / (1.0 - alpha) * (alpha.ln() - 1.0);
    let inner = -((-alpha).ln_1p() + x).exp_m1();
    Ok((inner / alpha).sqrt() - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaBranch {
    /// `m >= n/e`.
    LargeRatio,
    /// `m < n/e`.
    SmallRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaM {
    pub value: f64,
    pub branch: DeltaBranch,
    /// `48 sqrt(2 pi log m / m)`; absent for `m = 1`.
    pub large_ratio: Option<f64>,
    /// `165 sqrt(log(n/m) log n) / sqrt(m)`.
    pub small_ratio: f64,
}

/// The `delta_m` radius schedule, with both branch values reported.
pub fn delta_m(n: usize, m: usize) -> Result<DeltaM, BoundError> {
    let ens = TruncationEnsemble::new(n, m).map_err(|_| BoundError::InvalidInput {
        name: "m",
        value: m as f64,
    })?;
    let (nf, mf) = (ens.n() as f64, ens.m() as f64);
    let large_ratio = (m >= 2).then(|| 48.0 * (2.0 * PI * mf.ln() / mf).sqrt());
    let small_ratio = 165.0 * ((nf / mf).ln() * nf.ln()).sqrt() / mf.sqrt();
    let branch = if mf * E >= nf {
        DeltaBranch::LargeRatio
    } else {
        DeltaBranch::SmallRatio
    };
    let value = match branch {
        DeltaBranch::LargeRatio => large_ratio.ok_or(BoundError::DeltaNeedsTwo(m))?,
        DeltaBranch::SmallRatio => small_ratio,
    };
    Ok(DeltaM {
        value,
        branch,
        large_ratio,
        small_ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MollifierChoice {
    pub epsilon: f64,
    /// `[(alpha/(2(2+sqrt alpha)))^2, (1/sqrt alpha - (1+eta))^2,
    ///   8 sqrt(pi) (1+eta)/m, 1+eta, 2 alpha/((1-alpha) m^2)]`.
    pub terms: [f64; 5],
    /// Index of the smallest term.
    pub binding: usize,
    /// Whether `1 + eta_alpha < 1/sqrt(alpha)`, which the second term
    /// presupposes. Fails for `alpha` above roughly 0.22.
    pub eta_inside_support: bool,
}

/// `eps = min` of the five terms in [`MollifierChoice::terms`].
pub fn mollifier_epsilon_choice(ensemble: TruncationEnsemble) -> Result<MollifierChoice, BoundError> {
    let a = ensemble.alpha();
    let m = ensemble.m() as f64;
    let one_eta = 1.0 + eta_alpha(a)?;
    let sa = a.sqrt();
    let terms = [
        (a / (2.0 * (2.0 + sa))).powi(2),
        (1.0 / sa - one_eta).powi(2),
        8.0 * PI.sqrt() * one_eta / m,
        one_eta,
        2.0 * a / ((1.0 - a) * m * m),
    ];
    if let Some((index, &value)) = terms.iter().enumerate().find(|(_, t)| !(**t > 0.0)) {
        return Err(BoundError::NonPositiveTerm { index, value });
    }
    let (binding, &epsilon) = terms
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("five terms");
    Ok(MollifierChoice {
        epsilon,
        terms,
        binding,
        eta_inside_support: one_eta < 1.0 / sa,
    })
}
