//! Exact baseline algorithms: free-space reachability, the Frechet decision
//! procedure, an exact value via bisection, and the discrete Frechet
//! distance. Everything here is O(mn) and serves as ground truth for the
//! approximate pipeline.

use crate::curves::{free_on_edge, linf, merge_intervals, Curve, Interval};
use crate::error::{Error, Result};

/// Direction of propagation for a [`ReachabilityMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Reachable from the start corner (0, 0) (or a shifted start (0, y0)).
    Forward,
    /// Co-reachable to the end corner (1, 1).
    Backward,
}

/// Exact per-cell-boundary reachable intervals of the delta-free space of a
/// curve pair. Boundary intervals are stored as fractions of the respective
/// edge; accessors convert to global parameters.
#[derive(Debug, Clone)]
pub struct ReachabilityMap {
    m: usize,
    n: usize,
    /// vert[i * (n-1) + j]: reachable part of {x_i} x [y_j, y_{j+1}]
    vert: Vec<Option<(f64, f64)>>,
    /// horiz[i * n + j]: reachable part of [x_i, x_{i+1}] x {y_j}
    horiz: Vec<Option<(f64, f64)>>,
    direction: Direction,
}

fn propagate(p: &Curve, q: &Curve, delta: f64, y0: f64) -> ReachabilityMap {
    let m = p.len();
    let n = q.len();
    let pe = m - 1;
    let qe = n - 1;
    let mut vert: Vec<Option<(f64, f64)>> = vec![None; m * qe];
    let mut horiz: Vec<Option<(f64, f64)>> = vec![None; pe * n];

    let free_vert = |i: usize, j: usize| free_on_edge(p.vertex(i), q.vertex(j), q.vertex(j + 1), delta);
    let free_horiz = |i: usize, j: usize| free_on_edge(q.vertex(j), p.vertex(i), p.vertex(i + 1), delta);

    // Left column: climb upward from (0, y0).
    let scaled = y0.clamp(0.0, 1.0) * qe as f64;
    let j0 = (scaled.floor() as usize).min(qe - 1);
    let f0 = scaled - j0 as f64;
    if let Some((lo, hi)) = free_vert(0, j0) {
        if lo <= f0 && f0 <= hi {
            vert[j0] = Some((f0, hi));
        }
    }
    for j in j0 + 1..qe {
        let reached_top = matches!(vert[j - 1], Some((_, hi)) if hi == 1.0);
        if reached_top {
            if let Some((lo, hi)) = free_vert(0, j) {
                if lo == 0.0 {
                    vert[j] = Some((0.0, hi));
                    continue;
                }
            }
        }
        vert[j] = None;
    }

    // Bottom row: only usable when the start sits at y = 0.
    if y0 == 0.0 {
        if let Some((lo, hi)) = free_horiz(0, 0) {
            if lo == 0.0 {
                horiz[0] = Some((0.0, hi));
            }
        }
        for i in 1..pe {
            let reached_right = matches!(horiz[(i - 1) * n], Some((_, hi)) if hi == 1.0);
            if reached_right {
                if let Some((lo, hi)) = free_horiz(i, 0) {
                    if lo == 0.0 {
                        horiz[i * n] = Some((0.0, hi));
                        continue;
                    }
                }
            }
            horiz[i * n] = None;
        }
    }

    for j in 0..qe {
        for i in 0..pe {
            let left = vert[i * qe + j];
            let bottom = horiz[i * n + j];
            // right boundary -> vert[(i+1), j]
            let right = if bottom.is_some() {
                free_vert(i + 1, j)
            } else if let Some((a, _)) = left {
                free_vert(i + 1, j).and_then(|(lo, hi)| {
                    let lo2 = lo.max(a);
                    if lo2 <= hi {
                        Some((lo2, hi))
                    } else {
                        None
                    }
                })
            } else {
                None
            };
            vert[(i + 1) * qe + j] = right;
            // top boundary -> horiz[i, j+1]
            let top = if left.is_some() {
                free_horiz(i, j + 1)
            } else if let Some((a, _)) = bottom {
                free_horiz(i, j + 1).and_then(|(lo, hi)| {
                    let lo2 = lo.max(a);
                    if lo2 <= hi {
                        Some((lo2, hi))
                    } else {
                        None
                    }
                })
            } else {
                None
            };
            horiz[i * n + (j + 1)] = top;
        }
    }

    ReachabilityMap { m, n, vert, horiz, direction: Direction::Forward }
}

impl ReachabilityMap {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// True iff the corner (1, 1) is reachable (forward) or (0, 0) is
    /// co-reachable (backward).
    pub fn reaches_end(&self) -> bool {
        let qe = self.n - 1;
        let corner_v = matches!(self.vert[(self.m - 1) * qe + (qe - 1)], Some((_, hi)) if hi == 1.0);
        let corner_h =
            matches!(self.horiz[(self.m - 2) * self.n + (self.n - 1)], Some((_, hi)) if hi == 1.0);
        corner_v || corner_h
    }

    /// Reachable intervals (global Q-parameters) on the column of P-vertex
    /// `i`. For a backward map this is the set co-reachable to (1, 1);
    /// boundaries are already stored in original-curve orientation.
    pub fn column_intervals(&self, i: usize) -> Vec<Interval> {
        let qe = self.n - 1;
        let raw: Vec<Interval> = (0..qe)
            .filter_map(|j| {
                self.vert[i * qe + j].map(|(lo, hi)| Interval {
                    lo: (j as f64 + lo) / qe as f64,
                    hi: (j as f64 + hi) / qe as f64,
                })
            })
            .collect();
        merge_intervals(raw)
    }

    /// Reachable intervals on the exit column x = 1.
    pub fn exit_intervals(&self) -> Vec<Interval> {
        match self.direction {
            Direction::Forward => self.column_intervals(self.m - 1),
            Direction::Backward => self.column_intervals(0),
        }
    }

    /// Vertex counts (m, n) of the underlying pair.
    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// Reachable fraction interval on the vertical boundary {x_i} x Q-edge j.
    pub fn vertical_reachable(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        self.vert[i * (self.n - 1) + j]
    }

    /// Reachable fraction interval on the horizontal boundary P-edge i x {y_j}.
    pub fn horizontal_reachable(&self, i: usize, j: usize) -> Option<(f64, f64)> {
        self.horiz[i * self.n + j]
    }
}

/// Forward reachability of the delta-free space from (0, 0).
pub fn free_space_reachable(p: &Curve, q: &Curve, delta: f64) -> ReachabilityMap {
    propagate(p, q, delta, 0.0)
}

/// Forward reachability from a shifted start (0, y0).
pub fn free_space_reachable_from(p: &Curve, q: &Curve, delta: f64, y0: f64) -> ReachabilityMap {
    propagate(p, q, delta, y0)
}

fn reversed(c: &Curve) -> Curve {
    let verts: Vec<f64> =
        (0..c.len()).rev().flat_map(|i| c.vertex(i).iter().copied().collect::<Vec<_>>()).collect();
    Curve::new(c.dim(), verts).unwrap()
}

/// Backward reachability: which points are connected to (1, 1) by a
/// bimonotone path in the delta-free space.
pub fn free_space_coreachable(p: &Curve, q: &Curve, delta: f64) -> ReachabilityMap {
    let mut map = propagate(&reversed(p), &reversed(q), delta, 0.0);
    map.direction = Direction::Backward;
    // Flip boundary indexing so that column_intervals(i) refers to the
    // original curve's vertex i.
    let qe = map.n - 1;
    let mut vert = vec![None; map.m * qe];
    for i in 0..map.m {
        for j in 0..qe {
            if let Some((lo, hi)) = map.vert[i * qe + j] {
                vert[(map.m - 1 - i) * qe + (qe - 1 - j)] = Some((1.0 - hi, 1.0 - lo));
            }
        }
    }
    map.vert = vert;
    // horiz is not exposed per-column; flip for consistency anyway.
    let n = map.n;
    let pe = map.m - 1;
    let mut horiz = vec![None; pe * n];
    for i in 0..pe {
        for j in 0..n {
            if let Some((lo, hi)) = map.horiz[i * n + j] {
                horiz[(pe - 1 - i) * n + (n - 1 - j)] = Some((1.0 - hi, 1.0 - lo));
            }
        }
    }
    map.horiz = horiz;
    map
}

/// Decision procedure: is the continuous Frechet distance at most delta?
pub fn decide_frechet_exact(p: &Curve, q: &Curve, delta: f64) -> bool {
    if linf(p.first(), q.first()) > delta || linf(p.last(), q.last()) > delta {
        return false;
    }
    free_space_reachable(p, q, delta).reaches_end()
}

/// Exact union of delta-reachable intervals on the exit column x = 1,
/// starting from (0, y0).
pub fn reachable_exit_intervals(p: &Curve, q: &Curve, delta: f64, y0: f64) -> Vec<Interval> {
    free_space_reachable_from(p, q, delta, y0).exit_intervals()
}

/// Oracle-grade Frechet value via geometric bisection over the decision
/// procedure: returns v with d_F in [v / (1 + rel_tol), v].
pub fn exact_frechet(p: &Curve, q: &Curve, rel_tol: f64) -> Result<f64> {
    if rel_tol <= 0.0 {
        return Err(Error::InvalidArgument("rel_tol must be positive".into()));
    }
    if crate::curves::curves_equal(p, q) {
        return Ok(0.0);
    }
    let lo0 = linf(p.first(), q.first()).max(linf(p.last(), q.last()));
    let mut hi = 0.0f64;
    for u in p.vertices() {
        for v in q.vertices() {
            let d = linf(u, v);
            if d > hi {
                hi = d;
            }
        }
    }
    if lo0 > 0.0 && decide_frechet_exact(p, q, lo0) {
        return Ok(lo0);
    }
    let mut lo = if lo0 > 0.0 { lo0 } else { hi * 1e-300 };
    for _ in 0..400 {
        if hi <= lo * (1.0 + rel_tol) {
            break;
        }
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        if decide_frechet_exact(p, q, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Discrete Frechet distance (coupling DP over vertex sequences, L-infinity).
pub fn discrete_frechet(p: &Curve, q: &Curve) -> f64 {
    let m = p.len();
    let n = q.len();
    let mut prev = vec![0.0f64; n];
    let mut cur = vec![0.0f64; n];
    prev[0] = linf(p.vertex(0), q.vertex(0));
    for j in 1..n {
        prev[j] = prev[j - 1].max(linf(p.vertex(0), q.vertex(j)));
    }
    for i in 1..m {
        cur[0] = prev[0].max(linf(p.vertex(i), q.vertex(0)));
        for j in 1..n {
            let best = prev[j].min(cur[j - 1]).min(prev[j - 1]);
            cur[j] = best.max(linf(p.vertex(i), q.vertex(j)));
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[n - 1]
}
