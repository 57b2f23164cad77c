//! Test-only oracles shared by the integration targets.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use truncation_lab::ensemble::EmpiricalMeasure;

/// Minimum transport cost over every basic feasible coupling.
///
/// A basis of the `a x b` transportation polytope is a spanning tree of the
/// bipartite graph on rows and columns; the flow on a tree is forced, found
/// by peeling leaves. Every subset of `a + b - 1` cells is tried.
pub fn w1_by_enumeration(x: &[Complex64], p: &[f64], y: &[Complex64], q: &[f64]) -> f64 {
    let (a, b) = (x.len(), y.len());
    let cells = a * b;
    let k = a + b - 1;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << cells) {
        if mask.count_ones() as usize != k {
            continue;
        }
        if let Some(flow) = tree_flow(mask, a, b, p, q) {
            let cost: f64 = (0..cells).map(|c| flow[c] * (x[c / b] - y[c % b]).norm()).sum();
            best = best.min(cost);
        }
    }
    best
}

fn tree_flow(mask: u32, a: usize, b: usize, p: &[f64], q: &[f64]) -> Option<Vec<f64>> {
    let mut open: Vec<usize> = (0..a * b).filter(|c| mask & (1 << c) != 0).collect();
    let mut row = p.to_vec();
    let mut col = q.to_vec();
    let mut flow = vec![0.0; a * b];
    while !open.is_empty() {
        let leaf = (0..a)
            .map(|i| (true, i))
            .chain((0..b).map(|j| (false, j)))
            .find_map(|(is_row, idx)| {
                let hits: Vec<usize> = open
                    .iter()
                    .copied()
                    .filter(|&c| if is_row { c / b == idx } else { c % b == idx })
                    .collect();
                (hits.len() == 1).then(|| (is_row, hits[0]))
            })?;
        let (is_row, c) = leaf;
        let (i, j) = (c / b, c % b);
        let v = if is_row { row[i] } else { col[j] };
        if v < -1e-12 {
            return None;
        }
        flow[c] = v;
        row[i] -= v;
        col[j] -= v;
        open.retain(|&o| o != c);
    }
    let resid = row.iter().chain(&col).fold(0.0f64, |acc, r| acc.max(r.abs()));
    (resid < 1e-12).then_some(flow)
}

/// `sup sum f_i c_i` over `|f_i| <= 1`, `f_i - f_j <= d_ij`, by a dense
/// tableau simplex with Bland's rule on `g = f + 1 >= 0`.
pub fn dbl_by_dense_lp(points: &[Complex64], charge: &[f64]) -> f64 {
    let k = points.len();
    // Rows: g_i <= 2, then g_i - g_j <= d_ij for i != j.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in 0..k {
        let mut r = vec![0.0; k];
        r[i] = 1.0;
        rows.push((r, 2.0));
    }
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let mut r = vec![0.0; k];
                r[i] = 1.0;
                r[j] = -1.0;
                rows.push((r, (points[i] - points[j]).norm()));
            }
        }
    }
    let nr = rows.len();
    let nv = k + nr;
    // Tableau rows: [coefficients | slack identity | rhs].
    let mut t: Vec<Vec<f64>> = rows
        .iter()
        .enumerate()
        .map(|(ri, (r, rhs))| {
            let mut line = r.clone();
            line.extend((0..nr).map(|s| if s == ri { 1.0 } else { 0.0 }));
            line.push(*rhs);
            line
        })
        .collect();
    let mut basis: Vec<usize> = (k..nv).collect();
    // Reduced costs for maximization: z - sum c g.
    let mut obj: Vec<f64> = charge.iter().map(|c| -c).collect();
    obj.extend(vec![0.0; nr + 1]);
    for _ in 0..10_000 {
        let Some(enter) = (0..nv).find(|&v| obj[v] < -1e-12) else {
            break;
        };
        let mut leave = None;
        let mut best = f64::INFINITY;
        for (ri, line) in t.iter().enumerate() {
            if line[enter] > 1e-12 {
                let ratio = line[nv] / line[enter];
                let better = ratio < best - 1e-12
                    || (ratio <= best + 1e-12 && leave.is_some_and(|l: usize| basis[ri] < basis[l]));
                if better {
                    best = ratio;
                    leave = Some(ri);
                }
            }
        }
        let l = leave.expect("bounded program");
        let piv = t[l][enter];
        for v in t[l].iter_mut() {
            *v /= piv;
        }
        for ri in 0..nr {
            if ri != l {
                let f = t[ri][enter];
                if f != 0.0 {
                    for c in 0..=nv {
                        t[ri][c] -= f * t[l][c];
                    }
                }
            }
        }
        let f = obj[enter];
        for c in 0..=nv {
            obj[c] -= f * t[l][c];
        }
        basis[l] = enter;
    }
    // Objective in g; subtract sum c_i (the shift f = g - 1).
    obj[nv] - charge.iter().sum::<f64>()
}

/// Pooled support and signed mass `mu - nu`.
pub fn pooled(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> (Vec<Complex64>, Vec<f64>) {
    let mut pts: Vec<Complex64> = Vec::new();
    let mut charge: Vec<f64> = Vec::new();
    for (s, m) in [(1.0, mu), (-1.0, nu)] {
        for (z, w) in m.points().iter().zip(m.weights()) {
            if let Some(i) = pts.iter().position(|p| p == z) {
                charge[i] += s * w;
            } else {
                pts.push(*z);
                charge.push(s * w);
            }
        }
    }
    (pts, charge)
}

pub fn random_measure<R: Rng>(k: usize, scale: f64, rng: &mut R) -> EmpiricalMeasure {
    let pts: Vec<Complex64> = (0..k)
        .map(|_| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
        .collect();
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    EmpiricalMeasure::new(pts, raw.iter().map(|w| w / total).collect()).unwrap()
}
