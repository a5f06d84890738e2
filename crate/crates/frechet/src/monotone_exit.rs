//! Exit sets for quasi-piecewise monotone curves: a greedy walk through the
//! implicit free space, touching each vertex a bounded number of times, that
//! computes a single-interval exit set with certified multiplier 3.

use crate::curves::{free_on_edge, linf, Curve, CurveParam, Interval};
use crate::error::{Error, Result};

/// Decomposition of a curve into coordinate-wise monotone pieces, each piece
/// but the last with L-infinity displacement above 4 delta.
#[derive(Debug, Clone)]
pub struct MonotonePieces {
    /// Piece boundaries 0 = x_0 < ... < x_k = 1 (vertex parameters).
    pub boundaries: Vec<CurveParam>,
    /// Per piece, per axis direction sign (0 = flat).
    pub dirs: Vec<Vec<i8>>,
    pub last_piece_long: bool,
}

/// Exit set on the column x = 1: empty, or one interval of Q-parameters.
/// Every delta-reachable exit point lies inside; every delta-close point
/// inside is reachable at `multiplier * delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitSet {
    pub interval: Option<Interval>,
    pub multiplier: f64,
}

impl ExitSet {
    pub fn empty() -> Self {
        ExitSet { interval: None, multiplier: 1.0 }
    }
}

/// Instrumentation counters for the amortized-time argument.
#[derive(Debug, Clone, Copy, Default)]
pub struct WalkStats {
    pub q_steps: usize,
    pub p_steps: usize,
}

impl WalkStats {
    pub fn total(&self) -> usize {
        self.q_steps + self.p_steps
    }
}

/// Greedy maximal decomposition into monotone pieces; fails if a non-final
/// piece has L-infinity displacement <= 4 delta.
pub fn monotone_pieces(p: &Curve, delta: f64) -> Result<MonotonePieces> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let m = p.len();
    let d = p.dim();
    let mut boundaries = vec![0usize];
    let mut dirs: Vec<Vec<i8>> = Vec::new();
    let mut cur = vec![0i8; d];
    for i in 1..m {
        let prev = p.vertex(i - 1);
        let here = p.vertex(i);
        let mut breaks = false;
        let mut next = cur.clone();
        for c in 0..d {
            let s = if here[c] > prev[c] {
                1
            } else if here[c] < prev[c] {
                -1
            } else {
                0
            };
            if s != 0 {
                if next[c] == 0 {
                    next[c] = s;
                } else if next[c] != s {
                    breaks = true;
                }
            }
        }
        if breaks {
            boundaries.push(i - 1);
            dirs.push(cur.clone());
            cur = vec![0i8; d];
            for c in 0..d {
                let s = if here[c] > prev[c] {
                    1
                } else if here[c] < prev[c] {
                    -1
                } else {
                    0
                };
                cur[c] = s;
            }
        } else {
            cur = next;
        }
    }
    boundaries.push(m - 1);
    dirs.push(cur);
    let k = boundaries.len() - 1;
    let mut last_piece_long = false;
    for i in 0..k {
        let a = p.vertex(boundaries[i]);
        let b = p.vertex(boundaries[i + 1]);
        let disp = linf(a, b);
        if i + 1 < k {
            if disp <= 4.0 * delta {
                return Err(Error::NotQuasiMonotone {
                    piece: i,
                    displacement: disp,
                    threshold: 4.0 * delta,
                });
            }
        } else {
            last_piece_long = disp > 4.0 * delta;
        }
    }
    Ok(MonotonePieces {
        boundaries: boundaries.into_iter().map(|i| CurveParam::vertex(i, m)).collect(),
        dirs,
        last_piece_long,
    })
}

/// A position on Q kept as (edge, fraction) so that free-interval endpoints
/// are never distorted by global-parameter round trips.
#[derive(Debug, Clone, Copy, PartialEq)]
struct QPos {
    qe: usize,
    frac: f64,
}

impl QPos {
    fn key(&self) -> f64 {
        self.qe as f64 + self.frac
    }
}

enum WalkEnd {
    ReachedColumn { y: QPos },
    Capped,
    Stalled { y: QPos },
}

struct Walker<'a> {
    p: &'a Curve,
    q: &'a Curve,
    delta: f64,
    /// Absolute slack added to every free-space test. The star construction
    /// synthesizes vertices at distance exactly delta; a slack a few orders
    /// below any tested tolerance keeps 1-ulp rounding from severing them.
    tol: f64,
    stats: WalkStats,
}

fn coordinate_scale(p: &Curve, q: &Curve) -> f64 {
    let mut s = 0.0f64;
    for v in p.vertices().chain(q.vertices()) {
        for c in v {
            s = s.max(c.abs());
        }
    }
    s
}

impl<'a> Walker<'a> {
    fn n_edges(&self) -> usize {
        self.q.len() - 1
    }

    fn global(&self, pos: QPos) -> f64 {
        pos.key() / self.n_edges() as f64
    }

    fn vert_free(&self, pv: usize, qe: usize, delta: f64) -> Option<(f64, f64)> {
        free_on_edge(self.p.vertex(pv), self.q.vertex(qe), self.q.vertex(qe + 1), delta + self.tol)
    }

    fn horiz_free(&self, pe: usize, qv: usize) -> Option<(f64, f64)> {
        free_on_edge(self.q.vertex(qv), self.p.vertex(pe), self.p.vertex(pe + 1), self.delta + self.tol)
    }

    /// Smallest position >= from on the column of P-vertex `pv` that is
    /// `delta`-close.
    fn first_close_at_or_after(&mut self, pv: usize, from: QPos, delta: f64) -> Option<QPos> {
        let mut qe = from.qe;
        let mut frac = from.frac;
        loop {
            self.stats.q_steps += 1;
            if let Some((lo, hi)) = self.vert_free(pv, qe, delta) {
                if hi >= frac {
                    return Some(QPos { qe, frac: lo.max(frac) });
                }
            }
            qe += 1;
            frac = 0.0;
            if qe >= self.n_edges() {
                return None;
            }
        }
    }

    /// End of the contiguous run of `delta`-close points starting at `from`.
    fn contiguous_close_end(&mut self, pv: usize, from: QPos, delta: f64) -> QPos {
        let mut qe = from.qe;
        let mut cur = from.frac;
        loop {
            self.stats.q_steps += 1;
            match self.vert_free(pv, qe, delta) {
                Some((lo, hi)) if lo <= cur && cur <= hi => {
                    if hi < 1.0 || qe + 1 >= self.n_edges() {
                        return QPos { qe, frac: hi };
                    }
                    qe += 1;
                    cur = 0.0;
                }
                _ => return QPos { qe, frac: cur },
            }
        }
    }

    /// Largest delta-close position <= top (and >= floor) on the column.
    fn last_close_at_or_below(&mut self, pv: usize, top: QPos, floor: QPos) -> Option<QPos> {
        let mut qe = top.qe;
        let mut frac = top.frac;
        loop {
            self.stats.q_steps += 1;
            if let Some((lo, hi)) = self.vert_free(pv, qe, self.delta) {
                if lo <= frac {
                    let pos = QPos { qe, frac: hi.min(frac) };
                    return if pos.key() >= floor.key() { Some(pos) } else { None };
                }
            }
            if qe == 0 {
                return None;
            }
            qe -= 1;
            frac = 1.0;
            if ((qe + 1) as f64) < floor.key() {
                return None;
            }
        }
    }

    /// Greedy up-first walk through the free space of one monotone piece,
    /// from (column of pv_lo, y_start), capped at height `cap`.
    fn walk(&mut self, pv_lo: usize, pv_hi: usize, y_start: QPos, cap: QPos) -> WalkEnd {
        let mut pe = pv_lo;
        let mut xf = 0.0f64;
        let mut qe = y_start.qe;
        let mut yf = y_start.frac;
        let n_edges = self.n_edges();
        loop {
            let here = QPos { qe, frac: yf };
            if here.key() >= cap.key() {
                return WalkEnd::Capped;
            }
            let at_top_row = qe + 1 == n_edges && yf == 1.0;
            let top_is_above_cap = !at_top_row && (qe as f64 + 1.0) > cap.key();
            let mut moved = false;
            if top_is_above_cap {
                // try to ascend to the cap line inside this cell
                let cap_pt = self.cap_point(cap);
                if let Some((_, hi)) =
                    free_on_edge(&cap_pt, self.p.vertex(pe), self.p.vertex(pe + 1), self.delta + self.tol)
                {
                    if hi >= xf {
                        return WalkEnd::Capped;
                    }
                }
            } else if !at_top_row {
                // try the top boundary of the cell
                if let Some((lo, hi)) = self.horiz_free(pe, qe + 1) {
                    if hi >= xf {
                        xf = lo.max(xf);
                        if qe + 1 < n_edges {
                            qe += 1;
                            yf = 0.0;
                        } else {
                            yf = 1.0;
                        }
                        self.stats.q_steps += 1;
                        moved = true;
                    }
                }
            }
            if moved {
                continue;
            }
            // step right through the right boundary
            if let Some((lo, hi)) = self.vert_free(pe + 1, qe, self.delta) {
                if hi >= yf {
                    yf = lo.max(yf);
                    pe += 1;
                    self.stats.p_steps += 1;
                    if pe == pv_hi {
                        return WalkEnd::ReachedColumn { y: QPos { qe, frac: yf } };
                    }
                    xf = 0.0;
                    continue;
                }
            }
            return WalkEnd::Stalled { y: QPos { qe, frac: yf } };
        }
    }

    fn cap_point(&self, cap: QPos) -> Vec<f64> {
        let a = self.q.vertex(cap.qe);
        let b = self.q.vertex(cap.qe + 1);
        if cap.frac == 0.0 {
            a.to_vec()
        } else if cap.frac == 1.0 {
            b.to_vec()
        } else {
            a.iter().zip(b.iter()).map(|(x, y)| x + cap.frac * (y - x)).collect()
        }
    }

    /// Climb the column of P-vertex `pv` from `y` through contiguous free
    /// space, capped at `cap`.
    fn climb_column(&mut self, pv: usize, y: QPos, cap: QPos) -> QPos {
        let mut qe = y.qe;
        let mut cur = y.frac;
        loop {
            self.stats.q_steps += 1;
            match self.vert_free(pv, qe, self.delta) {
                Some((lo, hi)) if lo <= cur && cur <= hi => {
                    let top = QPos { qe, frac: hi };
                    if top.key() >= cap.key() {
                        return cap;
                    }
                    if hi < 1.0 || qe + 1 >= self.n_edges() {
                        return top;
                    }
                    qe += 1;
                    cur = 0.0;
                }
                _ => return QPos { qe, frac: cur },
            }
        }
    }
}

/// Exit set of (0,0) with respect to a quasi-piecewise (>4 delta)-monotone P
/// and an arbitrary Q, plus instrumentation counters.
pub fn exit_set_monotone_instrumented(p: &Curve, q: &Curve, delta: f64) -> Result<(ExitSet, WalkStats)> {
    let pieces = monotone_pieces(p, delta)?;
    let tol = (delta + coordinate_scale(p, q)) * 1e-12;
    let mut w = Walker { p, q, delta, tol, stats: WalkStats::default() };
    if linf(p.first(), q.first()) > delta {
        return Ok((ExitSet::empty(), w.stats));
    }
    let bounds: Vec<usize> = pieces.boundaries.iter().map(|b| b.as_vertex().unwrap()).collect();
    let k = bounds.len() - 1;

    // y_0: longest prefix of Q inside the delta-ball of P(0)
    let origin = QPos { qe: 0, frac: 0.0 };
    let mut y_prev = w.contiguous_close_end(0, origin, delta);
    let mut yhat_minus_prev = origin;
    let mut y_before_last = y_prev;
    let mut bottom_before_last = origin;

    let mut result: Option<ExitSet> = None;
    for i in 0..k {
        if i + 1 == k {
            y_before_last = y_prev;
            bottom_before_last = yhat_minus_prev;
        }
        let fail_exit = |w: &Walker| -> ExitSet {
            if i + 1 == k && !pieces.last_piece_long {
                ExitSet {
                    interval: Some(Interval {
                        lo: w.global(bottom_before_last),
                        hi: w.global(y_before_last),
                    }),
                    multiplier: 3.0,
                }
            } else {
                ExitSet::empty()
            }
        };
        let pv_lo = bounds[i];
        let pv_hi = bounds[i + 1];
        let yhat_minus = match w.first_close_at_or_after(pv_hi, y_prev, delta) {
            Some(y) => y,
            None => {
                result = Some(fail_exit(&w));
                break;
            }
        };
        let yhat_plus = w.contiguous_close_end(pv_hi, yhat_minus, 3.0 * delta);
        let end = w.walk(pv_lo, pv_hi, y_prev, yhat_plus);
        let y_i = match end {
            WalkEnd::ReachedColumn { y } => Some(w.climb_column(pv_hi, y, yhat_plus)),
            WalkEnd::Capped => w.last_close_at_or_below(pv_hi, yhat_plus, yhat_minus),
            WalkEnd::Stalled { y } => {
                if y.key() < yhat_minus.key() {
                    None
                } else {
                    let top = if y.key() < yhat_plus.key() { y } else { yhat_plus };
                    w.last_close_at_or_below(pv_hi, top, yhat_minus)
                }
            }
        };
        let Some(y_i) = y_i else {
            result = Some(fail_exit(&w));
            break;
        };
        if i + 1 == k {
            let exit = if pieces.last_piece_long {
                ExitSet {
                    interval: Some(Interval { lo: w.global(yhat_minus), hi: w.global(y_i) }),
                    multiplier: 3.0,
                }
            } else {
                let y_plus = if y_i.key() > y_before_last.key() { y_i } else { y_before_last };
                ExitSet {
                    interval: Some(Interval {
                        lo: w.global(bottom_before_last),
                        hi: w.global(y_plus),
                    }),
                    multiplier: 3.0,
                }
            };
            result = Some(exit);
        }
        yhat_minus_prev = yhat_minus;
        y_prev = y_i;
    }
    Ok((result.unwrap_or_else(ExitSet::empty), w.stats))
}

/// Exit set of (0,0) for a quasi-piecewise (>4 delta)-monotone P.
pub fn exit_set_monotone(p: &Curve, q: &Curve, delta: f64) -> Result<ExitSet> {
    exit_set_monotone_instrumented(p, q, delta).map(|(e, _)| e)
}
