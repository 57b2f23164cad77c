//! The limiting measure `mu_alpha` on the unit disc, with density
//! `f_alpha(z) = (1 - alpha) / (pi (1 - alpha |z|^2)^2)` for `|z| < 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::ensemble::{EmpiricalMeasure, EnsembleError};
use crate::quadrature::{self, Integral, QuadOptions, QuadratureError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LimitError {
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitMeasure {
    alpha: f64,
}

impl LimitMeasure {
    pub fn new(alpha: f64) -> Result<Self, LimitError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(LimitError::InvalidAlpha(alpha));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn density(&self, z: Complex64) -> f64 {
        let r2 = z.norm_sqr();
        if r2 >= 1.0 {
            return 0.0;
        }
        let d = 1.0 - self.alpha * r2;
        (1.0 - self.alpha) / (PI * d * d)
    }

    /// Density of `|z|`: `2 pi r f_alpha(r)`.
    pub fn radial_pdf(&self, r: f64) -> f64 {
        if !(0.0..1.0).contains(&r) {
            return 0.0;
        }
        2.0 * PI * r * self.density(Complex64::new(r, 0.0))
    }

    /// `P(|z| <= r) = (1 - alpha) r^2 / (1 - alpha r^2)` on `[0, 1]`.
    pub fn radial_cdf(&self, r: f64) -> Result<f64, LimitError> {
        if r < 0.0 || r.is_nan() {
            return Err(LimitError::NegativeRadius(r));
        }
        Ok(self.cdf_unchecked(r))
    }

    pub(crate) fn cdf_unchecked(&self, r: f64) -> f64 {
        if r >= 1.0 {
            return 1.0;
        }
        let r2 = r * r;
        (1.0 - self.alpha) * r2 / (1.0 - self.alpha * r2)
    }

    /// Inverse of [`radial_cdf`](Self::radial_cdf): `sqrt(u / (1 - alpha + alpha u))`.
    pub fn inverse_cdf(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        (u / (1.0 - self.alpha + self.alpha * u)).sqrt()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let u: f64 = rng.random();
        let theta: f64 = rng.random::<f64>() * 2.0 * PI;
        Complex64::from_polar(self.inverse_cdf(u), theta)
    }

    pub fn sample_n<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Complex64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    /// Uniform empirical measure on `n` independent draws.
    pub fn sample_measure<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<EmpiricalMeasure, EnsembleError> {
        EmpiricalMeasure::uniform(self.sample_n(n, rng))
    }

    /// `E g(|z|)`, integrated in `u = alpha r^2`, where the radial weight is
    /// `(1 - alpha) / (alpha (1 - u)^2)` on `[0, alpha]`. `breaks` are radii
    /// in `(0, 1)` where `g` is not smooth.
    pub fn radial_expectation<G: FnMut(f64) -> f64>(
        &self,
        mut g: G,
        breaks: &[f64],
        opts: QuadOptions,
    ) -> Result<Integral, LimitError> {
        let a = self.alpha;
        let mut pts = vec![0.0];
        let mut inner: Vec<f64> = breaks
            .iter()
            .filter(|r| **r > 0.0 && **r < 1.0)
            .map(|r| a * r * r)
            .collect();
        inner.sort_by(f64::total_cmp);
        pts.extend(inner);
        pts.push(a);
        let w = (1.0 - a) / a;
        Ok(quadrature::integrate_with_breaks(
            |u| {
                let d = 1.0 - u;
                g((u / a).sqrt()) * w / (d * d)
            },
            &pts,
            opts,
        )?)
    }

    /// `integral g d mu_alpha` for a general integrand: adaptive in `u`
    /// outside, adaptive in the angle inside. The reported error adds the
    /// outer estimate and the inner tolerance.
    pub fn quadrature_expectation<G: Fn(Complex64) -> f64>(
        &self,
        g: G,
        breaks: &[f64],
        opts: QuadOptions,
    ) -> Result<Integral, LimitError> {
        let inner_opts = QuadOptions {
            abs_tol: opts.abs_tol * 0.1,
            rel_tol: opts.rel_tol * 0.1,
            max_subdivisions: opts.max_subdivisions,
        };
        let mut failure = None;
        let mut inner_evals = 0;
        let outer = self.radial_expectation(
            |r| {
                let res = quadrature::integrate(|t| g(Complex64::from_polar(r, t)), 0.0, 2.0 * PI, inner_opts);
                match res {
                    Ok(v) => {
                        inner_evals += v.evaluations;
                        v.value / (2.0 * PI)
                    }
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            breaks,
            opts,
        )?;
        if let Some(e) = failure {
            return Err(e.into());
        }
        Ok(Integral {
            value: outer.value,
            error: outer.error + inner_opts.abs_tol,
            evaluations: outer.evaluations + inner_evals,
        })
    }

    /// `E|z|^k` by radial quadrature.
    pub fn radial_moment(&self, k: i32) -> Result<f64, LimitError> {
        Ok(self.radial_expectation(|r| r.powi(k), &[], QuadOptions::default())?.value)
    }
}
