//! Primal network simplex for the uncapacitated transportation problem.
//!
//! Sources `0..ns`, sinks `ns..ns+nt` and an artificial root. The starting
//! basis is the strongly feasible star of artificial arcs through the root
//! (cost 0 towards the root, a Big-M cost away from it). Entering arcs are
//! chosen by block search; leaving arcs by the strongly feasible rule (first
//! blocking arc on the source side, last one on the sink side), which rules
//! out cycling on degenerate pivots.
//!
//! The spanning tree keeps explicit adjacency lists. After a pivot the
//! detached subtree is re-hung from the entering arc by a depth-first walk
//! that refreshes parents, depths and node potentials.

use super::TransportError;

const NONE: usize = usize::MAX;
const LOWER: u8 = 1;
const TREE: u8 = 0;

pub(crate) struct Solution {
    pub cost: f64,
    pub pivots: usize,
}

struct Simplex<'a> {
    ns: usize,
    nt: usize,
    real: usize,
    nodes: usize,
    cost: &'a [f64],
    art_src: Vec<usize>,
    art_tgt: Vec<usize>,
    art_c: Vec<f64>,
    flow: Vec<f64>,
    state: Vec<u8>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    pred_up: Vec<bool>,
    depth: Vec<usize>,
    pi: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>,
    next_arc: usize,
    block: usize,
    eps: f64,
}

impl<'a> Simplex<'a> {
    fn new(supply: &[f64], demand: &[f64], cost: &'a [f64]) -> Self {
        let (ns, nt) = (supply.len(), demand.len());
        let real = ns * nt;
        let nodes = ns + nt;
        let root = nodes;
        let max_cost = cost.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let art_cost = (max_cost + 1.0) * (nodes as f64 + 1.0);
        let total = real + nodes;

        let mut s = Self {
            ns,
            nt,
            real,
            nodes,
            cost,
            art_src: vec![0; nodes],
            art_tgt: vec![0; nodes],
            art_c: vec![0.0; nodes],
            flow: vec![0.0; total],
            state: vec![LOWER; total],
            parent: vec![NONE; nodes + 1],
            pred: vec![NONE; nodes + 1],
            pred_up: vec![false; nodes + 1],
            depth: vec![0; nodes + 1],
            pi: vec![0.0; nodes + 1],
            adj: vec![Vec::new(); nodes + 1],
            next_arc: 0,
            block: ((total as f64).sqrt() as usize).max(10),
            eps: 1e-14 * art_cost,
        };
        for u in 0..nodes {
            let e = real + u;
            let b = if u < ns { supply[u] } else { -demand[u - ns] };
            s.parent[u] = root;
            s.pred[u] = e;
            s.depth[u] = 1;
            s.state[e] = TREE;
            if b >= 0.0 {
                s.art_src[u] = u;
                s.art_tgt[u] = root;
                s.art_c[u] = 0.0;
                s.flow[e] = b;
                s.pred_up[u] = true;
                s.pi[u] = 0.0;
            } else {
                s.art_src[u] = root;
                s.art_tgt[u] = u;
                s.art_c[u] = art_cost;
                s.flow[e] = -b;
                s.pred_up[u] = false;
                s.pi[u] = art_cost;
            }
            s.adj[u].push((root, e));
            s.adj[root].push((u, e));
        }
        s
    }

    #[inline]
    fn src(&self, e: usize) -> usize {
        if e < self.real {
            e / self.nt
        } else {
            self.art_src[e - self.real]
        }
    }

    #[inline]
    fn tgt(&self, e: usize) -> usize {
        if e < self.real {
            self.ns + e % self.nt
        } else {
            self.art_tgt[e - self.real]
        }
    }

    #[inline]
    fn c(&self, e: usize) -> f64 {
        if e < self.real {
            self.cost[e]
        } else {
            self.art_c[e - self.real]
        }
    }

    fn find_entering(&mut self) -> Option<usize> {
        let total = self.real + self.nodes;
        let mut best = None;
        let mut min = -self.eps;
        let mut count = self.block;
        let mut e = self.next_arc;
        for _ in 0..total {
            if self.state[e] == LOWER {
                let rc = self.c(e) + self.pi[self.src(e)] - self.pi[self.tgt(e)];
                if rc < min {
                    min = rc;
                    best = Some(e);
                }
            }
            e += 1;
            if e == total {
                e = 0;
            }
            count -= 1;
            if count == 0 {
                if best.is_some() {
                    self.next_arc = e;
                    return best;
                }
                count = self.block;
            }
        }
        self.next_arc = e;
        best
    }

    fn join(&self, mut u: usize, mut v: usize) -> usize {
        while u != v {
            if self.depth[u] >= self.depth[v] {
                u = self.parent[u];
            } else {
                v = self.parent[v];
            }
        }
        u
    }

    fn pivot(&mut self, e_in: usize) -> Result<(), TransportError> {
        let first = self.src(e_in);
        let second = self.tgt(e_in);
        let join = self.join(first, second);

        let mut delta = f64::INFINITY;
        let mut u_out = NONE;
        let mut side = 0;
        let mut u = first;
        while u != join {
            let d = if self.pred_up[u] { self.flow[self.pred[u]] } else { f64::INFINITY };
            if d < delta {
                delta = d;
                u_out = u;
                side = 1;
            }
            u = self.parent[u];
        }
        let mut u = second;
        while u != join {
            let d = if self.pred_up[u] { f64::INFINITY } else { self.flow[self.pred[u]] };
            if d <= delta {
                delta = d;
                u_out = u;
                side = 2;
            }
            u = self.parent[u];
        }
        if side == 0 {
            return Err(TransportError::Unbounded);
        }

        if delta > 0.0 {
            self.flow[e_in] += delta;
            let mut u = first;
            while u != join {
                let e = self.pred[u];
                self.flow[e] -= if self.pred_up[u] { delta } else { -delta };
                u = self.parent[u];
            }
            let mut u = second;
            while u != join {
                let e = self.pred[u];
                self.flow[e] += if self.pred_up[u] { delta } else { -delta };
                u = self.parent[u];
            }
        }

        let e_out = self.pred[u_out];
        self.flow[e_out] = 0.0;
        self.state[e_out] = LOWER;
        self.state[e_in] = TREE;

        let p = self.parent[u_out];
        self.adj[u_out].retain(|&(_, a)| a != e_out);
        self.adj[p].retain(|&(_, a)| a != e_out);
        let (u_in, v_in) = if side == 1 { (first, second) } else { (second, first) };
        self.adj[u_in].push((v_in, e_in));
        self.adj[v_in].push((u_in, e_in));

        let mut stack = vec![(u_in, v_in, e_in)];
        while let Some((x, par, arc)) = stack.pop() {
            self.parent[x] = par;
            self.pred[x] = arc;
            let up = self.src(arc) == x;
            self.pred_up[x] = up;
            self.depth[x] = self.depth[par] + 1;
            self.pi[x] = if up { self.pi[par] - self.c(arc) } else { self.pi[par] + self.c(arc) };
            for &(y, a) in &self.adj[x] {
                if y != par {
                    stack.push((y, x, a));
                }
            }
        }
        Ok(())
    }
}

/// Minimum of `sum c_ij x_ij` over couplings of `supply` and `demand`, with
/// `cost` stored row-major (`supply.len() x demand.len()`). Totals must agree
/// to rounding; any residual is absorbed by the artificial arcs and does not
/// contribute to the returned cost.
pub(crate) fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<Solution, TransportError> {
    debug_assert_eq!(cost.len(), supply.len() * demand.len());
    if supply.is_empty() || demand.is_empty() {
        return Ok(Solution { cost: 0.0, pivots: 0 });
    }
    let mut s = Simplex::new(supply, demand, cost);
    let total_arcs = s.real + s.nodes;
    let max_pivots = 50 * total_arcs + 10_000;
    let mut pivots = 0;
    while let Some(e) = s.find_entering() {
        s.pivot(e)?;
        pivots += 1;
        if pivots > max_pivots {
            return Err(TransportError::NoConvergence { pivots });
        }
    }
    // The root absorbs any imbalance between the totals; artificial flow
    // beyond that means the real arcs could not carry the coupling.
    let residual: f64 = (s.real..total_arcs).map(|e| s.flow[e]).sum();
    let imbalance = (supply.iter().sum::<f64>() - demand.iter().sum::<f64>()).abs();
    if residual > imbalance + 1e-9 {
        return Err(TransportError::Infeasible { residual });
    }
    let value = (0..s.real)
        .filter(|&e| s.flow[e] > 0.0)
        .map(|e| s.flow[e] * cost[e])
        .sum();
    Ok(Solution { cost: value, pivots })
}
