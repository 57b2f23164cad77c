use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, ONE, ZERO};

/// Householder QR of a square matrix: `A = Q R` with `Q` unitary and `R`
/// upper triangular with a real nonnegative diagonal.
///
/// With that diagonal normalization the factorization is unique for
/// nonsingular `A`.
pub fn qr_decompose(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), LinalgError> {
    a.require_square()?;
    thin_qr(a)
}

/// Householder QR of an `m x k` matrix with `m >= k`, returning the thin
/// factor `Q` (`m x k`, orthonormal columns) and `R` (`k x k`).
///
/// Column `j` of `Q` depends only on the first `j + 1` columns of `A`. The
/// diagonal of `R` is real and nonnegative.
pub fn thin_qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), LinalgError> {
    let (m, k) = (a.rows(), a.cols());
    if m < k {
        return Err(LinalgError::TooFewRows { rows: m, cols: k });
    }
    a.check_finite()?;

    // Column-major working copy so reflectors act on contiguous slices.
    let mut cols: Vec<Vec<Complex64>> = (0..k).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut reflectors: Vec<Option<(Vec<Complex64>, f64)>> = Vec::with_capacity(k);

    for j in 0..k {
        let x = &cols[j][j..];
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            reflectors.push(None);
            continue;
        }
        let phase = if x[0] == ZERO { ONE } else { x[0] / x[0].norm() };
        let alpha = -phase * norm;
        let mut v = x.to_vec();
        v[0] -= alpha;
        let v_norm_sqr = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if v_norm_sqr == 0.0 {
            reflectors.push(None);
            continue;
        }
        let beta = 2.0 / v_norm_sqr;
        for col in cols.iter_mut().skip(j) {
            apply_reflector(&v, beta, &mut col[j..]);
        }
        // Clean the annihilated part exactly.
        cols[j][j] = alpha;
        for z in cols[j][j + 1..].iter_mut() {
            *z = ZERO;
        }
        reflectors.push(Some((v, beta)));
    }

    // Reflectors leave R_jj = -e^{i arg a_jj}|a_j|; move that phase into Q.
    let phases: Vec<Complex64> = (0..k)
        .map(|j| {
            let d = cols[j][j];
            if d == ZERO { ONE } else { d / d.norm() }
        })
        .collect();
    let r = ComplexMatrix::from_fn(k, k, |i, j| {
        if i < j {
            phases[i].conj() * cols[j][i]
        } else if i == j {
            Complex64::new(cols[j][j].norm(), 0.0)
        } else {
            ZERO
        }
    });

    // Q = H_0 H_1 ... H_{k-1} applied to the first k unit vectors.
    let mut q_cols: Vec<Vec<Complex64>> = (0..k)
        .map(|j| {
            let mut e = vec![ZERO; m];
            e[j] = ONE;
            e
        })
        .collect();
    for (j, refl) in reflectors.iter().enumerate().rev() {
        if let Some((v, beta)) = refl {
            for col in q_cols.iter_mut() {
                apply_reflector(v, *beta, &mut col[j..]);
            }
        }
    }
    let q = ComplexMatrix::from_fn(m, k, |i, j| q_cols[j][i] * phases[j]);
    Ok((q, r))
}

/// `x <- (I - beta v v^*) x`
#[inline]
fn apply_reflector(v: &[Complex64], beta: f64, x: &mut [Complex64]) {
    let s: Complex64 = v.iter().zip(x.iter()).map(|(vi, xi)| vi.conj() * xi).sum();
    if s == ZERO {
        return;
    }
    let s = s * beta;
    for (xi, vi) in x.iter_mut().zip(v) {
        *xi -= vi * s;
    }
}
