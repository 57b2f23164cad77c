use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, ZERO};

/// Tuning knobs for the QR iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Total iteration budget is `iterations_per_dim * dim`.
    pub iterations_per_dim: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            iterations_per_dim: 30,
        }
    }
}

/// All eigenvalues of a square complex matrix, with algebraic multiplicity.
///
/// The order of the returned values is unspecified.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
    eigenvalues_with(a, EigenOptions::default())
}

pub fn eigenvalues_with(
    a: &ComplexMatrix,
    options: EigenOptions,
) -> Result<Vec<Complex64>, LinalgError> {
    let n = a.require_square()?;
    a.check_finite()?;
    let mut h = Hessenberg::reduce(a);
    h.qr_iterate(options.iterations_per_dim.saturating_mul(n).max(1))
}

struct Hessenberg {
    n: usize,
    h: Vec<Complex64>,
}

impl Hessenberg {
    fn reduce(a: &ComplexMatrix) -> Self {
        let n = a.rows();
        let mut h = a.as_slice().to_vec();
        let mut w = vec![ZERO; n];
        for k in 0..n.saturating_sub(2) {
            let norm = (k + 1..n).map(|i| h[i * n + k].norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let x0 = h[(k + 1) * n + k];
            let phase = if x0 == ZERO { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[i * n + k]).collect();
            v[0] -= alpha;
            let v_norm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if v_norm_sqr == 0.0 {
                continue;
            }
            let beta = 2.0 / v_norm_sqr;

            // Left: rows k+1.., columns k..
            w[k..].iter_mut().for_each(|z| *z = ZERO);
            for (vi, i) in v.iter().zip(k + 1..n) {
                let vc = vi.conj();
                for c in k..n {
                    w[c] += vc * h[i * n + c];
                }
            }
            for (vi, i) in v.iter().zip(k + 1..n) {
                let f = vi * beta;
                for c in k..n {
                    h[i * n + c] -= f * w[c];
                }
            }
            // Right: all rows, columns k+1..
            for r in 0..n {
                let row = &mut h[r * n + k + 1..(r + 1) * n];
                let s: Complex64 = row.iter().zip(&v).map(|(x, vi)| x * vi).sum();
                if s == ZERO {
                    continue;
                }
                let s = s * beta;
                for (x, vi) in row.iter_mut().zip(&v) {
                    *x -= s * vi.conj();
                }
            }
            h[(k + 1) * n + k] = alpha;
            for i in k + 2..n {
                h[i * n + k] = ZERO;
            }
        }
        Self { n, h }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.h[i * self.n + j]
    }

    /// Shifted QR on the active window; only the window is updated since
    /// eigenvectors are not needed.
    fn qr_iterate(&mut self, budget: usize) -> Result<Vec<Complex64>, LinalgError> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        if n == 0 {
            return Ok(out);
        }
        let scale = self.h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tiny = f64::MIN_POSITIVE.max(scale * f64::EPSILON * 1e-3);
        let mut hi = n - 1;
        let mut total = 0usize;
        let mut since_deflation = 0usize;
        loop {
            // Find the start of the trailing unreduced block.
            let mut lo = hi;
            while lo > 0 {
                let sub = self.at(lo, lo - 1).norm();
                let neighbours = self.at(lo, lo).norm() + self.at(lo - 1, lo - 1).norm();
                if sub <= f64::EPSILON * neighbours || sub <= tiny {
                    self.h[lo * n + lo - 1] = ZERO;
                    break;
                }
                lo -= 1;
            }

            if lo == hi {
                out.push(self.at(hi, hi));
                since_deflation = 0;
                if hi == 0 {
                    break;
                }
                hi -= 1;
                continue;
            }
            if lo + 1 == hi {
                let (l1, l2) = eig2x2(
                    self.at(lo, lo),
                    self.at(lo, hi),
                    self.at(hi, lo),
                    self.at(hi, hi),
                );
                out.push(l1);
                out.push(l2);
                since_deflation = 0;
                if lo == 0 {
                    break;
                }
                hi = lo - 1;
                continue;
            }

            if total >= budget {
                return Err(LinalgError::NoConvergence {
                    iterations: total,
                    remaining: hi + 1,
                });
            }
            total += 1;
            since_deflation += 1;

            let shift = if since_deflation % 11 == 10 {
                // Exceptional shift to break stagnation cycles.
                let sub = self.at(hi, hi - 1).norm() + self.at(hi - 1, hi - 2).norm();
                self.at(hi, hi) + Complex64::new(0.75 * sub, 0.25 * sub)
            } else {
                wilkinson_shift(
                    self.at(hi - 1, hi - 1),
                    self.at(hi - 1, hi),
                    self.at(hi, hi - 1),
                    self.at(hi, hi),
                )
            };
            self.qr_step(lo, hi, shift);
        }
        Ok(out)
    }

    /// One explicit single-shift QR step `H - s I = Q R`, `H <- R Q + s I`
    /// restricted to rows/columns `lo..=hi`.
    fn qr_step(&mut self, lo: usize, hi: usize, shift: Complex64) {
        let n = self.n;
        for i in lo..=hi {
            self.h[i * n + i] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(self.at(k, k), self.at(k + 1, k));
            let (top, bottom) = self.h.split_at_mut((k + 1) * n);
            let row_k = &mut top[k * n + k..k * n + hi + 1];
            let row_k1 = &mut bottom[k..hi + 1];
            for (x, y) in row_k.iter_mut().zip(row_k1.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a * c + s * b;
                *y = -s.conj() * a + b * c;
            }
            self.h[(k + 1) * n + k] = ZERO;
            rotations.push((c, s));
        }
        for (k, &(c, s)) in (lo..hi).zip(&rotations) {
            for r in lo..=(k + 2).min(hi) {
                let a = self.h[r * n + k];
                let b = self.h[r * n + k + 1];
                self.h[r * n + k] = a * c + s.conj() * b;
                self.h[r * n + k + 1] = -s * a + b * c;
            }
        }
        for i in lo..=hi {
            self.h[i * n + i] += shift;
        }
    }
}

/// Rotation `[c s; -conj(s) c]` with real `c` that maps `(a, b)` to `(r, 0)`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let abs_a = a.norm();
    let nrm = abs_a.hypot(b.norm());
    (abs_a / nrm, (a / abs_a) * b.conj() / nrm)
}

fn eig2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mean = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * c).sqrt();
    let (p, q) = (mean + disc, mean - disc);
    let (big, _small) = if p.norm() >= q.norm() { (p, q) } else { (q, p) };
    if big == ZERO {
        return (ZERO, ZERO);
    }
    // Product of eigenvalues is the determinant; avoids cancellation in the
    // smaller root.
    (big, (a * d - b * c) / big)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (l1, l2) = eig2x2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}
