//! Haar unitaries, their scaled truncations and empirical spectral measures.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, ComplexMatrix, LinalgError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnsembleError {
    #[error("invalid ensemble n={n}, m={m}: need 1 <= m < n")]
    InvalidEnsemble { n: usize, m: usize },
    #[error("matrix is {rows}x{cols} but the ensemble expects {n}x{n}")]
    DimensionMismatch { rows: usize, cols: usize, n: usize },
    #[error("QR of the Gaussian sample produced a degenerate diagonal entry twice")]
    DegenerateSample,
    #[error("empirical measure needs at least one point")]
    EmptyMeasure,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Matrix size `n` and truncation size `m`, with `1 <= m < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationEnsemble {
    n: usize,
    m: usize,
}

impl TruncationEnsemble {
    pub fn new(n: usize, m: usize) -> Result<Self, EnsembleError> {
        if m == 0 || m >= n {
            return Err(EnsembleError::InvalidEnsemble { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `m / n`
    pub fn alpha(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// `sqrt(n / m)`, the factor applied to the truncated block. It is also
    /// the radius of the disc carrying the scaled eigenvalues.
    pub fn scale(&self) -> f64 {
        (self.n as f64 / self.m as f64).sqrt()
    }
}

/// Finite weighted point set in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Weighted measure; weights must be nonnegative, finite and sum to one
    /// within `1e-12`.
    pub fn new(points: Vec<Complex64>, weights: Vec<f64>) -> Result<Self, EnsembleError> {
        if points.is_empty() {
            return Err(EnsembleError::EmptyMeasure);
        }
        if points.len() != weights.len() {
            return Err(EnsembleError::InvalidWeights(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(EnsembleError::InvalidWeights(format!("weight {w} is not a finite nonnegative number")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(EnsembleError::InvalidWeights(format!("weights sum to {total}")));
        }
        if points.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(EnsembleError::InvalidWeights("non-finite support point".into()));
        }
        Ok(Self { points, weights })
    }

    /// Equal weights `1/k` on the given points.
    pub fn uniform(points: Vec<Complex64>) -> Result<Self, EnsembleError> {
        if points.is_empty() {
            return Err(EnsembleError::EmptyMeasure);
        }
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        Self::new(points, weights)
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `integral of g` against the measure.
    pub fn integrate(&self, g: impl Fn(Complex64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&z, &w)| w * g(z)).sum()
    }

    /// Push-forward under `z -> c z`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            points: self.points.iter().map(|z| z * c).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Empirical spectral measure: mass `1/m` at each of the `m` points.
pub fn spectral_measure(z: &[Complex64]) -> Result<EmpiricalMeasure, EnsembleError> {
    EmpiricalMeasure::uniform(z.to_vec())
}

/// Standard complex Gaussian: real and imaginary parts independent with
/// variance `1/2` each, so `E|g|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `n x n` matrix of i.i.d. standard complex Gaussians.
///
/// Entries are drawn column by column, so the first `k` columns coincide with
/// [`sample_ginibre_columns`]`(n, k, ..)` from the same stream.
pub fn sample_ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    sample_ginibre_columns(n, n, rng)
}

pub fn sample_ginibre_columns<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let mut data = vec![Complex64::new(0.0, 0.0); rows * cols];
    for j in 0..cols {
        for i in 0..rows {
            data[i * cols + j] = complex_gaussian(rng);
        }
    }
    ComplexMatrix::from_row_major(rows, cols, data).expect("Gaussian samples are finite")
}

const DEGENERATE_DIAGONAL: f64 = 1e-300;

/// Haar-distributed `n x n` unitary.
///
/// QR of a Ginibre matrix followed by the phase correction
/// `Q <- Q diag(R_jj / |R_jj|)`, which picks the unique factorization with a
/// positive diagonal in `R`; without it the law of `Q` depends on the QR
/// convention and is not Haar.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix, EnsembleError> {
    sample_haar_isometry(n, n, rng)
}

/// First `k` columns of a Haar unitary, from a thin QR of an `n x k`
/// Ginibre block. Same law (and, for the same stream, the same numbers up to
/// rounding) as the leading columns of [`sample_haar_unitary`].
pub fn sample_haar_isometry<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<ComplexMatrix, EnsembleError> {
    for _attempt in 0..2 {
        let g = sample_ginibre_columns(n, k, rng);
        let (mut q, r) = linalg::thin_qr(&g)?;
        if (0..k).any(|j| r[(j, j)].norm() < DEGENERATE_DIAGONAL) {
            continue;
        }
        for j in 0..k {
            let d = r[(j, j)];
            q.scale_column(j, d / d.norm());
        }
        return Ok(q);
    }
    Err(EnsembleError::DegenerateSample)
}

/// `sqrt(n/m)` times the upper-left `m x m` block of `u`.
pub fn truncate_and_scale(
    u: &ComplexMatrix,
    ensemble: TruncationEnsemble,
) -> Result<ComplexMatrix, EnsembleError> {
    if u.rows() != ensemble.n() || u.cols() != ensemble.n() {
        return Err(EnsembleError::DimensionMismatch {
            rows: u.rows(),
            cols: u.cols(),
            n: ensemble.n(),
        });
    }
    Ok(u.top_left(ensemble.m(), ensemble.m())?.scale(ensemble.scale()))
}

/// Scaled truncation drawn through the thin isometry, which costs
/// `O(n m^2)` instead of the `O(n^3)` of a full unitary.
pub fn sample_truncation<R: Rng + ?Sized>(
    ensemble: TruncationEnsemble,
    rng: &mut R,
) -> Result<ComplexMatrix, EnsembleError> {
    let q = sample_haar_isometry(ensemble.n(), ensemble.m(), rng)?;
    Ok(q.top_left(ensemble.m(), ensemble.m())?.scale(ensemble.scale()))
}

/// Eigenvalues `z_1..z_m` of one random scaled truncation.
pub fn simulate_spectrum<R: Rng + ?Sized>(
    ensemble: TruncationEnsemble,
    rng: &mut R,
) -> Result<Vec<Complex64>, EnsembleError> {
    let a = sample_truncation(ensemble, rng)?;
    Ok(linalg::eigenvalues(&a)?)
}
