//! Determinantal structure of the scaled truncation spectrum: the kernel
//! `K_{n,m}`, its normalizers `N_j`, expected counts outside a disc, and the
//! combinatorial facts behind the edge estimate.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use statrs::function::beta::beta_reg;

use crate::ensemble::TruncationEnsemble;
use crate::quadrature::{self, QuadOptions, QuadratureError};

/// Largest `n` accepted by the exact rational paths.
pub const EXACT_MAX_N: usize = 60;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DppError {
    #[error("index j = {j} outside 1..={m}")]
    IndexOutOfRange { j: usize, m: usize },
    #[error("radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error("exact arithmetic is limited to n <= {max}, got n = {n}")]
    ExactTooLarge { n: usize, max: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    ensemble: TruncationEnsemble,
    /// `log N_j` for `j = 1..=m` (index `j - 1`).
    log_normalizers: Vec<f64>,
}

impl KernelSpec {
    pub fn new(ensemble: TruncationEnsemble) -> Self {
        // log N_1 = log(pi / (n - m)), then N_{j+1} / N_j = j / (n - m + j).
        // The running sum is more accurate than differences of log-gamma
        // values, which cancel badly when n - m is large.
        let k = (ensemble.n() - ensemble.m()) as f64;
        let mut acc = PI.ln() - k.ln();
        let mut log_normalizers = Vec::with_capacity(ensemble.m());
        for j in 1..=ensemble.m() {
            log_normalizers.push(acc);
            let j = j as f64;
            acc += j.ln() - (k + j).ln();
        }
        Self {
            ensemble,
            log_normalizers,
        }
    }

    pub fn ensemble(&self) -> TruncationEnsemble {
        self.ensemble
    }

    fn check_index(&self, j: usize) -> Result<(), DppError> {
        if j == 0 || j > self.ensemble.m() {
            return Err(DppError::IndexOutOfRange {
                j,
                m: self.ensemble.m(),
            });
        }
        Ok(())
    }

    pub fn log_normalizer(&self, j: usize) -> Result<f64, DppError> {
        self.check_index(j)?;
        Ok(self.log_normalizers[j - 1])
    }

    /// `N_j = pi (j-1)! (n-m-1)! / (n-m+j-1)!`
    pub fn normalizer(&self, j: usize) -> Result<f64, DppError> {
        Ok(self.log_normalizer(j)?.exp())
    }

    /// `N_j / pi` as an exact rational.
    pub fn normalizer_exact_over_pi(&self, j: usize) -> Result<BigRational, DppError> {
        self.check_index(j)?;
        let n = self.ensemble.n();
        if n > EXACT_MAX_N {
            return Err(DppError::ExactTooLarge { n, max: EXACT_MAX_N });
        }
        let k = n - self.ensemble.m();
        let num = factorial(j - 1) * factorial(k - 1);
        let den = factorial(k + j - 1);
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `K_{n,m}(z1, z2)`, zero unless both points lie in the open disc of
    /// radius `sqrt(n/m)`.
    ///
    /// The sum over `j` is evaluated term by term in log-magnitude form and
    /// rescaled by its largest term, so neither the large `1/N_j` nor the
    /// small powers overflow.
    pub fn kernel(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let a = self.ensemble.alpha();
        let (s1, s2) = (1.0 - a * z1.norm_sqr(), 1.0 - a * z2.norm_sqr());
        if s1 <= 0.0 || s2 <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let half = 0.5 * (self.ensemble.n() - self.ensemble.m() - 1) as f64;
        let prefactor = a.ln() + half * (s1.ln() + s2.ln());
        let w = z1 * z2.conj() * a;
        let (log_w, arg_w) = (w.norm().ln(), w.arg());
        let terms: Vec<(f64, f64)> = self
            .log_normalizers
            .iter()
            .enumerate()
            .map(|(i, ln_n)| {
                let p = i as f64;
                let mag = if i == 0 { -ln_n } else { -ln_n + p * log_w };
                (mag, p * arg_w)
            })
            .collect();
        let top = terms
            .iter()
            .map(|t| t.0)
            .filter(|x| x.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: Complex64 = terms
            .iter()
            .filter(|t| t.0.is_finite())
            .map(|&(mag, ph)| Complex64::from_polar((mag - top).exp(), ph))
            .sum();
        sum * (prefactor + top).exp()
    }

    /// `K(z, z)`, the one-point density of the eigenvalues.
    pub fn density(&self, z: Complex64) -> f64 {
        self.radial_density(z.norm())
    }

    fn radial_density(&self, s: f64) -> f64 {
        let a = self.ensemble.alpha();
        let x = a * s * s;
        if x >= 1.0 {
            return 0.0;
        }
        let k = (self.ensemble.n() - self.ensemble.m() - 1) as f64;
        let base = a.ln() + k * (-x).ln_1p();
        let log_x = x.ln();
        let logs: Vec<f64> = self
            .log_normalizers
            .iter()
            .enumerate()
            .map(|(i, ln_n)| if i == 0 { -ln_n } else { -ln_n + i as f64 * log_x })
            .filter(|v| v.is_finite())
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = logs.iter().map(|v| (v - top).exp()).sum();
        (base + top).exp() * sum
    }

    /// `E #{j : |z_j| > r}` by the incomplete-beta reduction
    /// `sum_{j=1}^m I_{1 - alpha r^2}(n - m, j)`.
    ///
    /// Substituting `u = alpha s^2` in `2 pi integral_r K(s, s) s ds` turns the
    /// `j`-th term into `(pi / N_j) integral_{alpha r^2}^1 u^{j-1} (1-u)^{n-m-1} du`,
    /// and `pi / N_j = 1 / B(j, n - m)`.
    pub fn expected_count_outside(&self, r: f64) -> Result<f64, DppError> {
        if r < 0.0 || r.is_nan() {
            return Err(DppError::NegativeRadius(r));
        }
        let m = self.ensemble.m();
        if r == 0.0 {
            return Ok(m as f64);
        }
        let x = 1.0 - self.ensemble.alpha() * r * r;
        if r >= self.ensemble.scale() || x <= 0.0 {
            return Ok(0.0);
        }
        let b = (self.ensemble.n() - m) as f64;
        Ok((1..=m).map(|j| beta_reg(b, j as f64, x)).sum())
    }

    /// The same count by direct quadrature of `2 pi integral_r^{sqrt(n/m)} K(s, s) s ds`.
    pub fn expected_count_outside_quadrature(&self, r: f64, opts: QuadOptions) -> Result<f64, DppError> {
        if r < 0.0 || r.is_nan() {
            return Err(DppError::NegativeRadius(r));
        }
        let edge = self.ensemble.scale();
        if r >= edge {
            return Ok(0.0);
        }
        // The density is peaked near the unit circle; split there.
        let mut pts = vec![r];
        for b in [0.5, 0.9, 1.0, 1.1, 1.5] {
            if b > r && b < edge {
                pts.push(b);
            }
        }
        pts.push(edge);
        let res = quadrature::integrate_with_breaks(|s| 2.0 * PI * s * self.radial_density(s), &pts, opts)?;
        Ok(res.value)
    }
}

fn factorial(k: usize) -> BigUint {
    (1..=k as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// Exact binomial coefficient.
pub fn binomial_exact(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Both sides of the normalizer summation, with `pi` scaled out.
#[derive(Debug, Clone, PartialEq)]
pub struct HockeyStick {
    /// `pi * sum_{j=1}^m 1 / (2 j N_j)`, summed from the exact normalizers.
    pub lhs: BigRational,
    /// `(C(n, n-m) - 1) / 2`.
    pub rhs: BigRational,
}

impl HockeyStick {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn hockey_stick_sum(ensemble: TruncationEnsemble) -> Result<HockeyStick, DppError> {
    let spec = KernelSpec {
        ensemble,
        log_normalizers: Vec::new(),
    };
    let mut lhs = BigRational::zero();
    for j in 1..=ensemble.m() {
        let n_over_pi = spec.normalizer_exact_over_pi(j)?;
        lhs += (n_over_pi * BigRational::from_integer(BigInt::from(2 * j))).recip();
    }
    let c = BigInt::from(binomial_exact(ensemble.n(), ensemble.n() - ensemble.m()));
    let rhs = BigRational::new(c - BigInt::one(), BigInt::from(2));
    Ok(HockeyStick { lhs, rhs })
}

/// `sqrt(2 pi) k^{k+1/2} e^{-k} <= k! <= e k^{k+1/2} e^{-k}`, as logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingBounds {
    pub log_lower: f64,
    pub log_upper: f64,
}

impl StirlingBounds {
    /// May overflow to infinity for large `k`.
    pub fn lower(&self) -> f64 {
        self.log_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.log_upper.exp()
    }
}

pub fn stirling_bounds(k: u64) -> StirlingBounds {
    assert!(k >= 1, "Stirling bounds need k >= 1");
    let kf = k as f64;
    let core = (kf + 0.5) * kf.ln() - kf;
    StirlingBounds {
        log_lower: 0.5 * (2.0 * PI).ln() + core,
        log_upper: 1.0 + core,
    }
}

/// `log` of `e / (2 pi sqrt(n alpha (1 - alpha))) [(1-alpha)^{-(1-alpha)} alpha^{-alpha}]^n`,
/// an upper bound for `log C(n, m)`.
pub fn log_binomial_upper_bound(ensemble: TruncationEnsemble) -> f64 {
    let n = ensemble.n() as f64;
    let a = ensemble.alpha();
    1.0 - (2.0 * PI).ln() - 0.5 * (n * a * (1.0 - a)).ln() - n * ((1.0 - a) * (1.0 - a).ln() + a * a.ln())
}

pub fn binomial_upper_bound(ensemble: TruncationEnsemble) -> f64 {
    log_binomial_upper_bound(ensemble).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ens(n: usize, m: usize) -> TruncationEnsemble {
        TruncationEnsemble::new(n, m).unwrap()
    }

    #[test]
    fn first_normalizer_telescopes() {
        for (n, m) in [(5, 2), (10, 5), (40, 39)] {
            let spec = KernelSpec::new(ens(n, m));
            let v = spec.normalizer(1).unwrap();
            assert!((v - PI / (n - m) as f64).abs() < 1e-13 * v);
            let exact = spec.normalizer_exact_over_pi(1).unwrap();
            assert_eq!(exact, BigRational::new(BigInt::one(), BigInt::from(n - m)));
        }
    }

    #[test]
    fn second_normalizer_example() {
        // pi 1! 4! / 6! = pi / 30
        let spec = KernelSpec::new(ens(10, 5));
        assert!((spec.normalizer(2).unwrap() - PI / 30.0).abs() < 1e-14);
        assert_eq!(
            spec.normalizer_exact_over_pi(2).unwrap(),
            BigRational::new(BigInt::one(), BigInt::from(30))
        );
    }

    #[test]
    fn normalizer_index_checks() {
        let spec = KernelSpec::new(ens(10, 5));
        assert!(spec.normalizer(0).is_err());
        assert!(spec.normalizer(6).is_err());
        assert!(matches!(
            KernelSpec::new(ens(61, 3)).normalizer_exact_over_pi(1),
            Err(DppError::ExactTooLarge { .. })
        ));
    }

    #[test]
    fn kernel_vanishes_outside_support() {
        let spec = KernelSpec::new(ens(10, 3));
        let edge = spec.ensemble().scale();
        assert_eq!(spec.kernel(Complex64::new(edge, 0.0), Complex64::new(0.1, 0.0)), Complex64::new(0.0, 0.0));
        assert_eq!(spec.density(Complex64::new(0.0, edge + 0.1)), 0.0);
    }

    #[test]
    fn kernel_diagonal_agrees_with_density() {
        let spec = KernelSpec::new(ens(20, 7));
        for z in [Complex64::new(0.3, -0.4), Complex64::new(0.0, 0.0), Complex64::new(1.1, 0.2)] {
            let k = spec.kernel(z, z);
            assert!(k.im.abs() < 1e-14);
            assert!((k.re - spec.density(z)).abs() < 1e-12 * k.re.max(1e-300));
        }
    }

    #[test]
    fn smallest_case_is_uniform() {
        let spec = KernelSpec::new(ens(2, 1));
        assert!((spec.density(Complex64::new(0.7, 0.2)) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((spec.expected_count_outside(1.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn counts_at_extremes() {
        let spec = KernelSpec::new(ens(30, 10));
        assert_eq!(spec.expected_count_outside(0.0).unwrap(), 10.0);
        assert_eq!(spec.expected_count_outside(spec.ensemble().scale()).unwrap(), 0.0);
        assert!(spec.expected_count_outside(-1.0).is_err());
    }

    #[test]
    fn hockey_stick_examples() {
        let h = hockey_stick_sum(ens(6, 3)).unwrap();
        assert!(h.holds());
        assert_eq!(h.rhs, BigRational::new(BigInt::from(19), BigInt::from(2)));
        let h = hockey_stick_sum(ens(9, 1)).unwrap();
        assert_eq!(h.lhs, BigRational::new(BigInt::from(8), BigInt::from(2)));
    }

    #[test]
    fn stirling_at_one() {
        let b = stirling_bounds(1);
        assert_eq!(b.log_upper, 0.0);
        assert!((b.lower() - (2.0 * PI).sqrt() / std::f64::consts::E).abs() < 1e-15);
        let b = stirling_bounds(5);
        assert!(b.lower() < 120.0 && 120.0 < b.upper());
    }

    #[test]
    fn binomial_bound_small() {
        assert!(binomial_upper_bound(ens(10, 5)) >= 252.0);
        assert_eq!(binomial_exact(10, 5), BigUint::from(252u32));
    }
}
