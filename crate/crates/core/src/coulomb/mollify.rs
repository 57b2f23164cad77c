//! Mollified empirical measures `mu^eps = mu * lambda_eps` and the
//! regularization inequality relating `H_{n,m}` to the modified energy of
//! the mollified spectral measure.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::{hamiltonian, uniform_disc_energy, CoulombError, ExtendedReal, PotentialSpec};
use crate::ensemble::{EmpiricalMeasure, TruncationEnsemble};
use crate::quadrature::{self, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierSpec {
    epsilon: f64,
}

impl MollifierSpec {
    pub fn new(epsilon: f64) -> Result<Self, CoulombError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(CoulombError::InvalidEpsilon(epsilon));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// A discrete measure convolved with the uniform law on the disc of radius
/// `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifiedMeasure {
    base: EmpiricalMeasure,
    epsilon: f64,
}

pub fn mollify(mu: &EmpiricalMeasure, spec: MollifierSpec) -> MollifiedMeasure {
    MollifiedMeasure {
        base: mu.clone(),
        epsilon: spec.epsilon,
    }
}

impl MollifiedMeasure {
    pub fn base(&self) -> &EmpiricalMeasure {
        &self.base
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn total_mass(&self) -> f64 {
        self.base.total_mass()
    }

    pub fn density(&self, z: Complex64) -> f64 {
        let area = PI * self.epsilon * self.epsilon;
        self.base
            .points()
            .iter()
            .zip(self.base.weights())
            .filter(|(c, _)| (z - **c).norm() < self.epsilon)
            .map(|(_, w)| w / area)
            .sum()
    }

    /// `E(mu^eps)` as a sum of pairwise disc energies.
    pub fn coulomb_energy(&self) -> Result<f64, CoulombError> {
        let pts = self.base.points();
        let w = self.base.weights();
        let mut acc = 0.0;
        for j in 0..pts.len() {
            acc += w[j] * w[j] * disc_pair_energy(0.0, self.epsilon)?;
            for k in j + 1..pts.len() {
                acc += 2.0 * w[j] * w[k] * disc_pair_energy((pts[j] - pts[k]).norm(), self.epsilon)?;
            }
        }
        Ok(acc)
    }

    pub fn potential_integral(&self, spec: &PotentialSpec) -> Result<ExtendedReal, CoulombError> {
        let mut total = ExtendedReal::Finite(0.0);
        for (c, w) in self.base.points().iter().zip(self.base.weights()) {
            if *w > 0.0 {
                total = total + *w * spec.disc_average(*c, self.epsilon)?;
            }
        }
        Ok(total)
    }

    pub fn modified_energy(&self, spec: &PotentialSpec) -> Result<ExtendedReal, CoulombError> {
        let v = self.potential_integral(spec)?;
        if !v.is_finite() {
            return Ok(v);
        }
        Ok(ExtendedReal::Finite(self.coulomb_energy()?) + v)
    }

    /// `count` independent draws from `mu^eps`.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<Vec<Complex64>, CoulombError> {
        let index = WeightedIndex::new(self.base.weights())
            .map_err(|e| CoulombError::Unsupported(format!("cannot sample atoms: {e}")))?;
        let pts = self.base.points();
        Ok((0..count)
            .map(|_| {
                let c = pts[index.sample(rng)];
                let r = self.epsilon * rng.random::<f64>().sqrt();
                let t = 2.0 * PI * rng.random::<f64>();
                c + Complex64::from_polar(r, t)
            })
            .collect())
    }
}

/// Logarithmic potential `integral log(1/|x - y|) d lambda_eps(y)` of the
/// uniform disc, at distance `rho` from its centre.
pub fn disc_potential(rho: f64, eps: f64) -> f64 {
    if rho >= eps {
        -rho.ln()
    } else {
        -eps.ln() + 0.5 * (1.0 - (rho / eps).powi(2))
    }
}

/// Mutual energy of two uniform discs of radius `eps` whose centres are `d`
/// apart. Equal to `log(1/d)` once the discs are disjoint.
pub fn disc_pair_energy(d: f64, eps: f64) -> Result<f64, CoulombError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(CoulombError::InvalidEpsilon(eps));
    }
    if d >= 2.0 * eps {
        return Ok(-d.ln());
    }
    if d == 0.0 {
        return uniform_disc_energy(eps);
    }
    Ok(-eps.ln() + unit_pair_energy(d / eps)?)
}

/// Overlapping case at unit radius, `0 < s < 2`: integrate the potential of
/// one disc over the other along circles about the first centre.
fn unit_pair_energy(s: f64) -> Result<f64, CoulombError> {
    let half_angle = |rho: f64| -> f64 {
        if rho <= 1.0 - s {
            PI
        } else if rho <= s - 1.0 {
            0.0
        } else {
            ((rho * rho + s * s - 1.0) / (2.0 * rho * s)).clamp(-1.0, 1.0).acos()
        }
    };
    let mut pts = vec![0.0];
    let mut inner = vec![(1.0 - s).abs(), 1.0];
    inner.retain(|x| *x > 0.0 && *x < 1.0 + s);
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(1.0 + s);
    let res = quadrature::integrate_with_breaks(
        |rho| disc_potential(rho, 1.0) * 2.0 * rho * half_angle(rho) / PI,
        &pts,
        QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_subdivisions: 500,
        },
    )?;
    Ok(res.value)
}

/// Both sides of `H_{n,m}(z) >= m^2 E_V(mu^eps) - m E(lambda_eps) - m^2 (1-alpha) eps / (2 alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaRegCheck {
    pub lhs: ExtendedReal,
    pub rhs: f64,
    /// `E_{V_{n,m}}` of the mollified spectral measure.
    pub modified_energy: f64,
    /// `E(lambda_eps)`.
    pub disc_energy: f64,
    /// `m^2 (1-alpha) eps / (2 alpha)`.
    pub correction: f64,
}

impl LemmaRegCheck {
    pub fn holds(&self) -> bool {
        match self.lhs {
            ExtendedReal::PosInfinity => true,
            ExtendedReal::Finite(l) => l >= self.rhs,
        }
    }

    pub fn gap(&self) -> f64 {
        self.lhs.to_f64() - self.rhs
    }
}

/// Evaluates both sides of the regularization inequality for the spectral
/// measure of `z`. Requires `eps < (alpha / (4 + 2 sqrt(alpha)))^2` and
/// every `|z_j| < 1/sqrt(alpha) - sqrt(eps)`.
pub fn lemma_reg_check(ensemble: TruncationEnsemble, z: &[Complex64], eps: f64) -> Result<LemmaRegCheck, CoulombError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(CoulombError::InvalidEpsilon(eps));
    }
    let a = ensemble.alpha();
    let eps_max = (a / (4.0 + 2.0 * a.sqrt())).powi(2);
    if eps >= eps_max {
        return Err(CoulombError::Hypothesis(format!("eps = {eps} is not below {eps_max}")));
    }
    let reach = 1.0 / a.sqrt() - eps.sqrt();
    if let Some(p) = z.iter().find(|p| p.norm() >= reach) {
        return Err(CoulombError::Hypothesis(format!("|{p}| is not below {reach}")));
    }
    let lhs = hamiltonian(ensemble, z)?;
    let mu = EmpiricalMeasure::uniform(z.to_vec()).map_err(|e| CoulombError::Unsupported(e.to_string()))?;
    let spec = PotentialSpec::finite(ensemble);
    let energy = mollify(&mu, MollifierSpec::new(eps)?).modified_energy(&spec)?;
    let modified_energy = energy.finite().ok_or(CoulombError::OutsideSupport(Complex64::new(reach, 0.0)))?;
    let m = ensemble.m() as f64;
    let disc_energy = uniform_disc_energy(eps)?;
    let correction = m * m * (1.0 - a) * eps / (2.0 * a);
    Ok(LemmaRegCheck {
        lhs,
        rhs: m * m * modified_energy - m * disc_energy - correction,
        modified_energy,
        disc_energy,
        correction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coulomb::{coulomb_energy_radial, UniformDisc};
    use crate::rng::{stream, Purpose};

    #[test]
    fn pair_energy_is_continuous() {
        let eps = 0.1;
        let below = disc_pair_energy(2.0 * eps * (1.0 - 1e-9), eps).unwrap();
        assert!((below - (-(2.0 * eps).ln())).abs() < 1e-8);
        let near_zero = disc_pair_energy(1e-7, eps).unwrap();
        assert!((near_zero - uniform_disc_energy(eps).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn self_pair_energy_matches_radial_quadrature() {
        let eps = 0.37;
        let radial = coulomb_energy_radial(&UniformDisc::new(eps).unwrap()).unwrap();
        let pair = -eps.ln() + unit_pair_energy(1e-12).unwrap();
        assert!((radial - pair).abs() < 1e-9);
    }

    #[test]
    fn pair_energy_bounded_by_coulomb_kernel() {
        // Superharmonicity: averaging the kernel never exceeds the point value.
        for i in 1..40 {
            let d = 0.05 * i as f64;
            let e = disc_pair_energy(d, 1.0).unwrap();
            assert!(e <= -d.ln() + 1e-12, "d {d}");
        }
    }

    #[test]
    fn single_point_at_origin() {
        let e = TruncationEnsemble::new(8, 1).unwrap();
        let eps = 1e-4;
        let chk = lemma_reg_check(e, &[Complex64::new(0.0, 0.0)], eps).unwrap();
        assert_eq!(chk.lhs, ExtendedReal::Finite(0.0));
        assert!(chk.holds());
    }

    #[test]
    fn hypotheses_are_enforced() {
        let e = TruncationEnsemble::new(8, 2).unwrap();
        let z = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
        assert!(matches!(lemma_reg_check(e, &z, 0.5), Err(CoulombError::Hypothesis(_))));
        let far = [Complex64::new(0.0, 0.0), Complex64::new(1.99, 0.0)];
        assert!(matches!(lemma_reg_check(e, &far, 1e-4), Err(CoulombError::Hypothesis(_))));
    }

    #[test]
    fn samples_stay_within_mollifier_reach() {
        let mu = EmpiricalMeasure::uniform(vec![Complex64::new(0.2, 0.0), Complex64::new(-0.4, 0.1)]).unwrap();
        let m = mollify(&mu, MollifierSpec::new(0.05).unwrap());
        let mut rng = stream(3, Purpose::Other(7), 0);
        for p in m.sample(500, &mut rng).unwrap() {
            assert!(m.density(p) > 0.0);
        }
    }
}
