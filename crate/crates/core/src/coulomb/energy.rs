//! Coulomb energies of discrete and radially symmetric measures.
//!
//! For radial measures the logarithmic kernel averages over angles to
//! `-log max(r, s)`, so
//! `E(mu) = -2 integral log(r) F_mu(r) d mu(r)` and the mutual energy is
//! `-integral log(r) F_nu(r) d mu(r) - integral log(s) F_mu(s) d nu(s)`.

use super::{CoulombError, ExtendedReal, PotentialSpec};
use crate::ensemble::{EmpiricalMeasure, TruncationEnsemble};
use crate::limit::LimitMeasure;
use crate::quadrature::{self, QuadOptions};

/// A rotation-invariant probability measure on the plane, described by its
/// radial law.
pub trait RadialMeasure {
    /// Smallest `R` with `F(R) = 1`.
    fn support_radius(&self) -> f64;

    /// `P(|z| <= r)`.
    fn radial_cdf(&self, r: f64) -> f64;

    /// Radii where the radial law has kinks or jumps in its density.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `E[g(|z|)]`, with extra integrand breakpoints `breaks`.
    fn radial_expectation(
        &self,
        g: &mut dyn FnMut(f64) -> f64,
        breaks: &[f64],
        opts: QuadOptions,
    ) -> Result<f64, CoulombError>;
}

impl RadialMeasure for LimitMeasure {
    fn support_radius(&self) -> f64 {
        1.0
    }

    fn radial_cdf(&self, r: f64) -> f64 {
        self.cdf_unchecked(r)
    }

    fn radial_expectation(
        &self,
        g: &mut dyn FnMut(f64) -> f64,
        breaks: &[f64],
        opts: QuadOptions,
    ) -> Result<f64, CoulombError> {
        Ok(LimitMeasure::radial_expectation(self, g, breaks, opts)?.value)
    }
}

/// Normalized area measure `lambda_eps` on the disc of radius `eps` about 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformDisc {
    radius: f64,
}

impl UniformDisc {
    pub fn new(radius: f64) -> Result<Self, CoulombError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CoulombError::InvalidRadius(radius));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl RadialMeasure for UniformDisc {
    fn support_radius(&self) -> f64 {
        self.radius
    }

    fn radial_cdf(&self, r: f64) -> f64 {
        (r.max(0.0) / self.radius).min(1.0).powi(2)
    }

    fn radial_expectation(
        &self,
        g: &mut dyn FnMut(f64) -> f64,
        breaks: &[f64],
        opts: QuadOptions,
    ) -> Result<f64, CoulombError> {
        let rho = self.radius;
        let pts = break_list(0.0, rho, breaks);
        let w = 2.0 / (rho * rho);
        Ok(quadrature::integrate_with_breaks(|r| g(r) * w * r, &pts, opts)?.value)
    }
}

/// `(1 - t) first + t second`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mixture<A, B> {
    pub first: A,
    pub second: B,
    pub weight: f64,
}

impl<A: RadialMeasure, B: RadialMeasure> Mixture<A, B> {
    pub fn new(first: A, second: B, weight: f64) -> Result<Self, CoulombError> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(CoulombError::Unsupported(format!("mixture weight {weight} outside [0, 1]")));
        }
        Ok(Self { first, second, weight })
    }
}

impl<A: RadialMeasure, B: RadialMeasure> RadialMeasure for Mixture<A, B> {
    fn support_radius(&self) -> f64 {
        match self.weight {
            w if w == 0.0 => self.first.support_radius(),
            w if w == 1.0 => self.second.support_radius(),
            _ => self.first.support_radius().max(self.second.support_radius()),
        }
    }

    fn radial_cdf(&self, r: f64) -> f64 {
        (1.0 - self.weight) * self.first.radial_cdf(r) + self.weight * self.second.radial_cdf(r)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.first.breakpoints();
        b.extend(self.second.breakpoints());
        b.push(self.first.support_radius());
        b.push(self.second.support_radius());
        b
    }

    fn radial_expectation(
        &self,
        g: &mut dyn FnMut(f64) -> f64,
        breaks: &[f64],
        opts: QuadOptions,
    ) -> Result<f64, CoulombError> {
        let mut acc = 0.0;
        if self.weight < 1.0 {
            acc += (1.0 - self.weight) * self.first.radial_expectation(g, breaks, opts)?;
        }
        if self.weight > 0.0 {
            acc += self.weight * self.second.radial_expectation(g, breaks, opts)?;
        }
        Ok(acc)
    }
}

/// Push-forward of `inner` under `z -> factor * z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dilation<M> {
    pub inner: M,
    pub factor: f64,
}

impl<M: RadialMeasure> Dilation<M> {
    pub fn new(inner: M, factor: f64) -> Result<Self, CoulombError> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(CoulombError::InvalidRadius(factor));
        }
        Ok(Self { inner, factor })
    }
}

impl<M: RadialMeasure> RadialMeasure for Dilation<M> {
    fn support_radius(&self) -> f64 {
        self.factor * self.inner.support_radius()
    }

    fn radial_cdf(&self, r: f64) -> f64 {
        self.inner.radial_cdf(r / self.factor)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.inner.breakpoints().into_iter().map(|b| b * self.factor).collect()
    }

    fn radial_expectation(
        &self,
        g: &mut dyn FnMut(f64) -> f64,
        breaks: &[f64],
        opts: QuadOptions,
    ) -> Result<f64, CoulombError> {
        let c = self.factor;
        let inner_breaks: Vec<f64> = breaks.iter().map(|b| b / c).collect();
        self.inner.radial_expectation(&mut |r| g(c * r), &inner_breaks, opts)
    }
}

fn break_list(a: f64, b: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![a];
    let mut inner: Vec<f64> = extra.iter().copied().filter(|x| *x > a && *x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(b);
    pts
}

fn energy_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_subdivisions: 4000,
    }
}

/// `E(mu) = integral integral log(1/|z - w|) d mu d mu` for a radial measure.
pub fn coulomb_energy_radial<M: RadialMeasure + ?Sized>(mu: &M) -> Result<f64, CoulombError> {
    let mut breaks = mu.breakpoints();
    breaks.push(mu.support_radius());
    let v = mu.radial_expectation(&mut |r| if r > 0.0 { r.ln() * mu.radial_cdf(r) } else { 0.0 }, &breaks, energy_opts())?;
    Ok(-2.0 * v)
}

/// Mutual energy `integral integral log(1/|z - w|) d mu(z) d nu(w)` of two
/// radial measures.
pub fn mutual_energy_radial<A: RadialMeasure + ?Sized, B: RadialMeasure + ?Sized>(
    mu: &A,
    nu: &B,
) -> Result<f64, CoulombError> {
    let mut breaks = mu.breakpoints();
    breaks.extend(nu.breakpoints());
    breaks.push(mu.support_radius());
    breaks.push(nu.support_radius());
    let opts = energy_opts();
    let a = mu.radial_expectation(&mut |r| if r > 0.0 { r.ln() * nu.radial_cdf(r) } else { 0.0 }, &breaks, opts)?;
    let b = nu.radial_expectation(&mut |r| if r > 0.0 { r.ln() * mu.radial_cdf(r) } else { 0.0 }, &breaks, opts)?;
    Ok(-a - b)
}

/// `integral V d mu`; infinite when the support of `mu` reaches the edge of
/// the domain of `V`.
pub fn potential_integral_radial<M: RadialMeasure + ?Sized>(
    mu: &M,
    spec: &PotentialSpec,
) -> Result<ExtendedReal, CoulombError> {
    if mu.support_radius() >= spec.support_radius() {
        return Ok(ExtendedReal::PosInfinity);
    }
    let mut breaks = mu.breakpoints();
    breaks.push(mu.support_radius());
    let v = mu.radial_expectation(&mut |r| spec.radial(r).to_f64(), &breaks, energy_opts())?;
    Ok(ExtendedReal::Finite(v))
}

/// `E_V(mu) = E(mu) + integral V d mu`.
pub fn modified_energy_radial<M: RadialMeasure + ?Sized>(
    mu: &M,
    spec: &PotentialSpec,
) -> Result<ExtendedReal, CoulombError> {
    let v = potential_integral_radial(mu, spec)?;
    if !v.is_finite() {
        return Ok(v);
    }
    Ok(ExtendedReal::Finite(coulomb_energy_radial(mu)?) + v)
}

/// Coulomb energy of a discrete measure. With `offdiagonal` the diagonal
/// `j = k` is excluded; otherwise any atom makes the energy infinite.
pub fn coulomb_energy_discrete(mu: &EmpiricalMeasure, offdiagonal: bool) -> ExtendedReal {
    let pts = mu.points();
    let w = mu.weights();
    if !offdiagonal && w.iter().any(|x| *x > 0.0) {
        return ExtendedReal::PosInfinity;
    }
    let mut acc = 0.0;
    for j in 0..pts.len() {
        if w[j] == 0.0 {
            continue;
        }
        for k in j + 1..pts.len() {
            if w[k] == 0.0 {
                continue;
            }
            let d = (pts[j] - pts[k]).norm();
            if d == 0.0 {
                return ExtendedReal::PosInfinity;
            }
            acc -= 2.0 * w[j] * w[k] * d.ln();
        }
    }
    ExtendedReal::Finite(acc)
}

/// Off-diagonal energy plus `integral V d mu` for a discrete measure.
pub fn modified_energy_discrete(mu: &EmpiricalMeasure, spec: &PotentialSpec) -> ExtendedReal {
    let mut total = coulomb_energy_discrete(mu, true);
    for (z, w) in mu.points().iter().zip(mu.weights()) {
        if *w > 0.0 {
            total = total + *w * spec.value(*z);
        }
    }
    total
}

/// `E(lambda_eps) = 1/4 - log eps`.
pub fn uniform_disc_energy(eps: f64) -> Result<f64, CoulombError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(CoulombError::InvalidEpsilon(eps));
    }
    Ok(0.25 - eps.ln())
}

/// `E(mu_alpha)` by quadrature.
pub fn limit_energy(alpha: f64) -> Result<f64, CoulombError> {
    coulomb_energy_radial(&LimitMeasure::new(alpha)?)
}

/// Closed form `((1-alpha)/(2 alpha)) (1 + (1-alpha) log(1-alpha) / alpha)`
/// for `E(mu_alpha)`; compare with [`limit_energy`].
pub fn limit_energy_candidate(alpha: f64) -> Result<f64, CoulombError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoulombError::InvalidAlpha(alpha));
    }
    let b = 1.0 - alpha;
    Ok(b / (2.0 * alpha) * (1.0 + b * (-alpha).ln_1p() / alpha))
}

/// `integral V_{n,m} d mu_alpha` by quadrature, `alpha = m/n`.
pub fn limit_potential_integral(ensemble: TruncationEnsemble) -> Result<f64, CoulombError> {
    let mu = LimitMeasure::new(ensemble.alpha())?;
    let v = potential_integral_radial(&mu, &PotentialSpec::finite(ensemble))?;
    Ok(v.to_f64())
}

/// Closed form `-((n-m-1)/m) (1 + log(1-alpha)/alpha)` for
/// `integral V_{n,m} d mu_alpha`.
pub fn potential_integral_candidate(ensemble: TruncationEnsemble) -> f64 {
    let a = ensemble.alpha();
    let kappa = (ensemble.n() - ensemble.m() - 1) as f64 / ensemble.m() as f64;
    -kappa * (1.0 + (-a).ln_1p() / a)
}
