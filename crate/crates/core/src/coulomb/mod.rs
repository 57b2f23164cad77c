//! Two-dimensional Coulomb gas quantities: external potentials, the
//! Hamiltonian whose Gibbs measure is the eigenvalue law, Coulomb and
//! modified energies, mollified empirical measures, and the normalizing
//! constant.

mod energy;
mod mollify;

pub use energy::{
    coulomb_energy_discrete, coulomb_energy_radial, limit_energy, limit_energy_candidate, limit_potential_integral,
    modified_energy_discrete, modified_energy_radial, mutual_energy_radial, potential_integral_candidate,
    potential_integral_radial, uniform_disc_energy, Dilation, Mixture, RadialMeasure, UniformDisc,
};
pub use mollify::{
    disc_pair_energy, disc_potential, lemma_reg_check, mollify, LemmaRegCheck, MollifiedMeasure, MollifierSpec,
};

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::ensemble::TruncationEnsemble;
use crate::limit::{LimitError, LimitMeasure};
use crate::quadrature::{self, QuadOptions, QuadratureError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoulombError {
    #[error("expected {expected} points, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("point {0} lies outside the support of the potential")]
    OutsideSupport(Complex64),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("mollifier radius must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("alpha must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Limit(#[from] LimitError),
}

/// A real number or `+infinity`. Energies and potentials use this instead of
/// overflowing floats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub fn from_f64(x: f64) -> Self {
        debug_assert!(!x.is_nan(), "NaN is not an extended real");
        if x == f64::INFINITY {
            ExtendedReal::PosInfinity
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PosInfinity => None,
        }
    }

    /// `f64::INFINITY` for the infinite value.
    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtendedReal::PosInfinity => f.write_str("+inf"),
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::PosInfinity,
        }
    }
}

/// Scaling by a nonnegative factor (`0 * inf` is taken as `inf`).
impl Mul<ExtendedReal> for f64 {
    type Output = ExtendedReal;

    fn mul(self, rhs: ExtendedReal) -> ExtendedReal {
        debug_assert!(self >= 0.0);
        match rhs {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(self * x),
            ExtendedReal::PosInfinity => ExtendedReal::PosInfinity,
        }
    }
}

/// `V(z) = -kappa log(1 - a |z|^2)` on `|z| < 1/sqrt(a)`, `+inf` beyond.
///
/// The finite-`n` potential has `a = m/n`, `kappa = (n - m - 1)/m`; the
/// limiting one has `a = alpha`, `kappa = 1/alpha - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    FiniteN(TruncationEnsemble),
    Limiting { alpha: f64 },
}

impl PotentialSpec {
    pub fn finite(ensemble: TruncationEnsemble) -> Self {
        PotentialSpec::FiniteN(ensemble)
    }

    pub fn limiting(alpha: f64) -> Result<Self, CoulombError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CoulombError::InvalidAlpha(alpha));
        }
        Ok(PotentialSpec::Limiting { alpha })
    }

    pub fn alpha(&self) -> f64 {
        match self {
            PotentialSpec::FiniteN(e) => e.alpha(),
            PotentialSpec::Limiting { alpha } => *alpha,
        }
    }

    pub fn coefficient(&self) -> f64 {
        match self {
            PotentialSpec::FiniteN(e) => (e.n() - e.m() - 1) as f64 / e.m() as f64,
            PotentialSpec::Limiting { alpha } => 1.0 / alpha - 1.0,
        }
    }

    /// Radius of the open disc where the potential is finite.
    pub fn support_radius(&self) -> f64 {
        match self {
            PotentialSpec::FiniteN(e) => e.scale(),
            PotentialSpec::Limiting { alpha } => 1.0 / alpha.sqrt(),
        }
    }

    pub fn value(&self, z: Complex64) -> ExtendedReal {
        self.radial(z.norm())
    }

    pub(crate) fn radial(&self, r: f64) -> ExtendedReal {
        if r >= self.support_radius() {
            return ExtendedReal::PosInfinity;
        }
        let x = self.alpha() * r * r;
        if x >= 1.0 {
            return ExtendedReal::PosInfinity;
        }
        ExtendedReal::Finite(-self.coefficient() * (-x).ln_1p())
    }

    /// `(V * lambda_eps)(c)`: the average of `V` over the disc of radius
    /// `eps` about `c`.
    ///
    /// The angular average has the closed form
    /// `(1/2pi) integral log(A - B cos phi) dphi = log((A + sqrt(A^2 - B^2)) / 2)`,
    /// leaving a one-dimensional radial integral.
    pub fn disc_average(&self, c: Complex64, eps: f64) -> Result<ExtendedReal, CoulombError> {
        let a = self.alpha();
        let rc = c.norm();
        if rc + eps >= self.support_radius() || a * (rc + eps).powi(2) >= 1.0 {
            return Ok(ExtendedReal::PosInfinity);
        }
        let kappa = self.coefficient();
        let ring = |t: f64| {
            let big_a = 1.0 - a * (rc * rc + t * t);
            let big_b = 2.0 * a * rc * t;
            let s = ((big_a - big_b) * (big_a + big_b)).max(0.0).sqrt();
            -kappa * (0.5 * (big_a + s)).ln()
        };
        let res = quadrature::integrate(
            |t| ring(t) * 2.0 * t / (eps * eps),
            0.0,
            eps,
            QuadOptions {
                abs_tol: 1e-14,
                rel_tol: 1e-13,
                max_subdivisions: 200,
            },
        )?;
        Ok(ExtendedReal::Finite(res.value))
    }
}

pub fn potential(spec: &PotentialSpec, z: Complex64) -> ExtendedReal {
    spec.value(z)
}

/// `Delta V_{n,m}(y) = 4 (1 - alpha - 1/n) / (1 - alpha |y|^2)^2`.
pub fn laplacian_potential(ensemble: TruncationEnsemble, y: Complex64) -> Result<f64, CoulombError> {
    let a = ensemble.alpha();
    let d = 1.0 - a * y.norm_sqr();
    if y.norm() >= ensemble.scale() || d <= 0.0 {
        return Err(CoulombError::OutsideSupport(y));
    }
    Ok(4.0 * (1.0 - a - 1.0 / ensemble.n() as f64) / (d * d))
}

fn check_len(ensemble: TruncationEnsemble, z: &[Complex64]) -> Result<(), CoulombError> {
    if z.len() != ensemble.m() {
        return Err(CoulombError::LengthMismatch {
            expected: ensemble.m(),
            actual: z.len(),
        });
    }
    Ok(())
}

/// `H_{n,m}(z) = sum_{j != k} log(1/|z_j - z_k|) + m sum_j V_{n,m}(z_j)`.
pub fn hamiltonian(ensemble: TruncationEnsemble, z: &[Complex64]) -> Result<ExtendedReal, CoulombError> {
    check_len(ensemble, z)?;
    let spec = PotentialSpec::finite(ensemble);
    let m = ensemble.m() as f64;
    let mut total = ExtendedReal::Finite(0.0);
    for (j, &zj) in z.iter().enumerate() {
        total = total + m * spec.value(zj);
        for &zk in &z[j + 1..] {
            let d = (zj - zk).norm();
            if d == 0.0 {
                return Ok(ExtendedReal::PosInfinity);
            }
            total = total + ExtendedReal::Finite(-2.0 * d.ln());
        }
    }
    Ok(total)
}

/// Logarithm of the unnormalized joint eigenvalue density
/// `prod_{j<k} |z_j - z_k|^2 prod_j (1 - alpha |z_j|^2)^{n-m-1}` on the
/// support; `-inf` outside it.
pub fn log_density_unnormalized(ensemble: TruncationEnsemble, z: &[Complex64]) -> Result<f64, CoulombError> {
    check_len(ensemble, z)?;
    let a = ensemble.alpha();
    let power = (ensemble.n() - ensemble.m() - 1) as f64;
    let mut acc = 0.0;
    for (j, zj) in z.iter().enumerate() {
        let w = 1.0 - a * zj.norm_sqr();
        if w <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if power > 0.0 {
            acc += power * w.ln();
        }
        for zk in &z[j + 1..] {
            acc += (zj - zk).norm_sqr().ln();
        }
    }
    Ok(acc)
}

/// `log c_{n,m}` with
/// `c_{n,m} = pi^m m! (n/m)^{m(m+1)/2} prod_{j=0}^{m-1} C(n-m+j-1, j)^{-1} / (n-m+j)`,
/// the total mass of the unnormalized density (the partition function `Z_{n,m}`).
pub fn log_normalizing_constant(ensemble: TruncationEnsemble) -> f64 {
    let (n, m) = (ensemble.n() as f64, ensemble.m() as f64);
    let mut acc = m * PI.ln() + ln_gamma(m + 1.0) + 0.5 * m * (m + 1.0) * (n / m).ln();
    for j in 0..ensemble.m() {
        let j = j as f64;
        let top = n - m + j - 1.0;
        let log_binom = ln_gamma(top + 1.0) - ln_gamma(j + 1.0) - ln_gamma(top - j + 1.0);
        acc -= log_binom + (n - m + j).ln();
    }
    acc
}

/// `vol(B_{4R}) = 16 pi R^2`.
pub fn transport_constant(radius: f64) -> Result<f64, CoulombError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CoulombError::InvalidRadius(radius));
    }
    Ok(16.0 * PI * radius * radius)
}

/// Jensen lower bound on `log Z_{n,m}` and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZLowerBound {
    pub value: f64,
    /// `E(mu_alpha)` by quadrature.
    pub limit_energy: f64,
    /// `integral -log(1 - alpha |z|^2) d mu_alpha(z)` by quadrature.
    pub log_weight_integral: f64,
}

/// `log Z_{n,m} >= m log(pi / (1 - alpha)) - m(m-1) E(mu_alpha) - m(n-m+1) L`
/// with `L = integral -log(1 - alpha |z|^2) d mu_alpha`.
///
/// Obtained by restricting the partition integral to the unit polydisc,
/// writing Lebesgue measure as `pi (1 - alpha|z|^2)^2 / (1 - alpha)` times
/// `mu_alpha`, and applying Jensen. Valid for every `1 <= m < n`.
pub fn z_lower_bound(ensemble: TruncationEnsemble) -> Result<ZLowerBound, CoulombError> {
    let (n, m) = (ensemble.n() as f64, ensemble.m() as f64);
    let a = ensemble.alpha();
    let energy = limit_energy(a)?;
    let l = limit_log_weight_integral(a)?;
    Ok(ZLowerBound {
        value: m * (PI / (1.0 - a)).ln() - m * (m - 1.0) * energy - m * (n - m + 1.0) * l,
        limit_energy: energy,
        log_weight_integral: l,
    })
}

/// The bound in the form
/// `-m log(2(1-alpha)) - m(m-1) E(mu_alpha) + ((n-m+1)/(n-m-1)) m^2 integral V_{n,m} d mu_alpha`,
/// which needs `m < n - 1`. Kept for comparison with [`z_lower_bound`]; it
/// is not a valid lower bound in general.
pub fn z_lower_bound_potential_form(ensemble: TruncationEnsemble) -> Result<f64, CoulombError> {
    let (n, m) = (ensemble.n(), ensemble.m());
    if m + 1 >= n {
        return Err(CoulombError::Unsupported(format!(
            "m = n - 1 = {m} makes the exponent n - m - 1 vanish"
        )));
    }
    let (nf, mf) = (n as f64, m as f64);
    let a = ensemble.alpha();
    let energy = limit_energy(a)?;
    let v = limit_potential_integral(ensemble)?;
    Ok(-mf * (2.0 * (1.0 - a)).ln() - mf * (mf - 1.0) * energy + (nf - mf + 1.0) / (nf - mf - 1.0) * mf * mf * v)
}

/// `integral -log(1 - alpha |z|^2) d mu_alpha`.
pub(crate) fn limit_log_weight_integral(alpha: f64) -> Result<f64, CoulombError> {
    let mu = LimitMeasure::new(alpha)?;
    Ok(mu
        .radial_expectation(|r| -(-alpha * r * r).ln_1p(), &[], QuadOptions::default())?
        .value)
}
