//! Per-axis transformation of a curve pair into a star pair (P*, Q*) where
//! P* is quasi-piecewise monotone: decomposition into compact and bridge
//! subcurves driven by a signature, pointwise straightenings that monotonize
//! values within an interval, and the resulting general exit-set computation.

use crate::curves::{Curve, Interval};
use crate::error::{Error, Result};
use crate::monotone_exit::{exit_set_monotone, ExitSet};
use crate::signatures::Signature;

/// A 1-dimensional polyline with explicit breakpoint parameters. Parameters
/// are non-decreasing; a repeated parameter encodes a jump introduced by a
/// straightening discontinuity.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline1 {
    pub params: Vec<f64>,
    pub values: Vec<f64>,
}

impl Polyline1 {
    pub fn new(params: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(params.len(), values.len());
        debug_assert!(params.windows(2).all(|w| w[0] <= w[1]));
        Polyline1 { params, values }
    }

    /// Uniform-parameter polyline from one coordinate of a curve.
    pub fn from_curve_axis(c: &Curve, axis: usize) -> Result<Self> {
        if axis >= c.dim() {
            return Err(Error::ParamOutOfRange(format!("axis {axis}")));
        }
        let m = c.len();
        let e = (m - 1) as f64;
        let params = (0..m).map(|i| i as f64 / e).collect();
        let values = (0..m).map(|i| c.vertex(i)[axis]).collect();
        Ok(Polyline1 { params, values })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.params.len();
        if t <= self.params[0] {
            return self.values[0];
        }
        if t >= self.params[n - 1] {
            return self.values[n - 1];
        }
        let i = self.params.partition_point(|p| *p <= t);
        let (p0, p1) = (self.params[i - 1], self.params[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        if p1 == p0 {
            return v1;
        }
        v0 + (t - p0) / (p1 - p0) * (v1 - v0)
    }

    /// Min and max value over the parameter range [a, b].
    pub fn image(&self, a: f64, b: f64) -> Interval {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut fold = |v: f64| {
            lo = lo.min(v);
            hi = hi.max(v);
        };
        fold(self.eval(a));
        fold(self.eval(b));
        for i in 0..self.params.len() {
            let p = self.params[i];
            if p > a && p < b {
                fold(self.values[i]);
            }
        }
        Interval { lo, hi }
    }

    /// Sub-polyline over [a, b] with interpolated endpoints.
    pub fn slice(&self, a: f64, b: f64) -> Polyline1 {
        let mut params = vec![a];
        let mut values = vec![self.eval(a)];
        for i in 0..self.params.len() {
            let p = self.params[i];
            if p > a && p < b {
                params.push(p);
                values.push(self.values[i]);
            }
        }
        if b > a {
            params.push(b);
            values.push(self.eval(b));
        }
        Polyline1 { params, values }
    }

    fn push_point(&mut self, p: f64, v: f64) {
        if let (Some(&lp), Some(&lv)) = (self.params.last(), self.values.last()) {
            if lp == p && lv == v {
                return;
            }
        }
        self.params.push(p);
        self.values.push(v);
    }

    /// Append another polyline (seam point deduplicated when identical).
    pub fn extend(&mut self, other: &Polyline1) {
        for (p, v) in other.params.iter().zip(other.values.iter()) {
            self.push_point(*p, *v);
        }
    }
}

/// Interval and direction of a straightening.
#[derive(Debug, Clone, Copy)]
pub struct StraighteningSpec {
    pub interval: Interval,
    pub positive: bool,
}

fn straighten_positive(c: &Polyline1, a: f64, b: f64) -> Polyline1 {
    let mut out = Polyline1 { params: Vec::new(), values: Vec::new() };
    if c.params.is_empty() {
        return out;
    }
    let mut run = c.values[0];
    // emit one parameter with the formula value; at the closed boundary `a`
    // the formula can be discontinuous, so emit the raw value too, ordered by
    // the local slope
    let emit = |out: &mut Polyline1, p: f64, v: f64, run: f64, slope: f64| {
        let inside = a <= v && v <= b;
        let tv = if inside { run.min(b) } else { v };
        if inside && v == a && tv != v {
            if slope > 0.0 {
                out.push_point(p, v);
                out.push_point(p, tv);
            } else {
                out.push_point(p, tv);
                out.push_point(p, v);
            }
        } else {
            out.push_point(p, tv);
        }
    };
    emit(&mut out, c.params[0], c.values[0], run, 0.0);
    for i in 1..c.params.len() {
        let (p0, v0) = (c.params[i - 1], c.values[i - 1]);
        let (p1, v1) = (c.params[i], c.values[i]);
        // subdivision points: crossings carry their exact level value
        let mut ts: Vec<(f64, f64)> = Vec::new();
        for level in [a, b, run] {
            if (v0 < level && v1 > level) || (v0 > level && v1 < level) {
                ts.push(((level - v0) / (v1 - v0), level));
            }
        }
        ts.sort_by(|x, y| x.0.total_cmp(&y.0));
        ts.push((1.0, v1));
        for (t, v) in ts {
            let p = p0 + t * (p1 - p0);
            run = run.max(v);
            emit(&mut out, p, v, run, v1 - v0);
        }
    }
    out
}

/// Pointwise straightening: inside the interval, values are replaced by the
/// running extremum clamped to the interval's far end; outside they are kept.
pub fn straighten(c: &Polyline1, spec: &StraighteningSpec) -> Polyline1 {
    if spec.positive {
        straighten_positive(c, spec.interval.lo, spec.interval.hi)
    } else {
        let neg = Polyline1 {
            params: c.params.clone(),
            values: c.values.iter().map(|v| -v).collect(),
        };
        let res = straighten_positive(&neg, -spec.interval.hi, -spec.interval.lo);
        Polyline1 { params: res.params, values: res.values.iter().map(|v| -v).collect() }
    }
}

/// One compact block and its optional trailing bridge (parameter ranges).
#[derive(Debug, Clone)]
pub struct Block {
    pub cp: (f64, f64),
    pub bp: Option<(f64, f64)>,
}

/// Alternating compact/bridge decomposition of a 1-dimensional pair.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub p_blocks: Vec<Block>,
    pub q_blocks: Vec<Block>,
    /// Direction of bridge i (sign of CP_{i+1}(0) - CP_i(1)).
    pub dirs: Vec<i8>,
}

/// First parameter in [from, to] at which the polyline leaves [lo, hi]
/// (crossing point, interpolated); `to` if it never leaves.
fn first_exit(c: &Polyline1, from: f64, to: f64, lo: f64, hi: f64) -> f64 {
    if from >= to {
        return to;
    }
    let mut p_prev = from;
    let mut v_prev = c.eval(from);
    let start = c.params.partition_point(|p| *p <= from);
    let mut idx = start;
    loop {
        let (p, v) = if idx < c.params.len() && c.params[idx] < to {
            (c.params[idx], c.values[idx])
        } else {
            (to, c.eval(to))
        };
        if v < lo || v > hi {
            let level = if v > hi { hi } else { lo };
            let t = if v == v_prev { 0.0 } else { (level - v_prev) / (v - v_prev) };
            return p_prev + t * (p - p_prev);
        }
        if p >= to {
            return to;
        }
        p_prev = p;
        v_prev = v;
        idx += 1;
    }
}

/// First parameter in [from, 1] with |value - target| <= delta; None if the
/// polyline never comes close again.
fn first_close(c: &Polyline1, from: f64, target: f64, delta: f64) -> Option<f64> {
    let end = *c.params.last().unwrap();
    let mut p_prev = from;
    let mut v_prev = c.eval(from);
    if (v_prev - target).abs() <= delta {
        return Some(from);
    }
    let start = c.params.partition_point(|p| *p <= from);
    let mut idx = start;
    loop {
        let (p, v) = if idx < c.params.len() { (c.params[idx], c.values[idx]) } else { (end, c.eval(end)) };
        if (v - target).abs() <= delta {
            // crossing into the band
            let level = if v_prev > target + delta { target + delta } else { target - delta };
            let t = if v == v_prev { 1.0 } else { (level - v_prev) / (v - v_prev) };
            return Some(p_prev + t.clamp(0.0, 1.0) * (p - p_prev));
        }
        if idx >= c.params.len() {
            return None;
        }
        p_prev = p;
        v_prev = v;
        idx += 1;
    }
}

/// Decompose a 1-dimensional pair into compact and bridge subcurves, driven
/// by a signature of the P side.
pub fn decompose(
    p1: &Polyline1,
    q1: &Polyline1,
    sig_params: &[f64],
    sig_values: &[f64],
    delta: f64,
) -> Decomposition {
    let kp = sig_params.len();
    let mut p_blocks: Vec<Block> = Vec::new();
    let mut dirs: Vec<i8> = Vec::new();
    let mut x_cur = 0.0f64;
    let mut j = 1usize;
    while j < kp {
        // image of P[x_cur, s_{j-1}]
        let im = p1.image(x_cur, sig_params[j - 1]);
        let x_exit = first_exit(p1, sig_params[j - 1].max(x_cur), sig_params[j], im.lo, im.hi);
        let bridge = (sig_values[j] - p1.eval(x_exit)).abs();
        if bridge > 8.0 * delta {
            let x_prime = first_exit(p1, x_exit, sig_params[j], im.lo - 4.0 * delta, im.hi + 4.0 * delta);
            p_blocks.push(Block { cp: (x_cur, x_prime), bp: Some((x_prime, sig_params[j])) });
            dirs.push(if sig_values[j] > p1.eval(x_prime) { 1 } else { -1 });
            x_cur = sig_params[j];
        }
        j += 1;
    }
    p_blocks.push(Block { cp: (x_cur, *p1.params.last().unwrap()), bp: None });

    // split Q against the compact blocks
    let mut q_blocks: Vec<Block> = Vec::new();
    let mut y_cur = 0.0f64;
    let q_end = *q1.params.last().unwrap();
    let kb = p_blocks.len();
    for i in 0..kb - 1 {
        if y_cur >= q_end {
            q_blocks.push(Block { cp: (q_end, q_end), bp: Some((q_end, q_end)) });
            continue;
        }
        let cp_im = p1.image(p_blocks[i].cp.0, p_blocks[i].cp.1);
        let y = first_exit(q1, y_cur, q_end, cp_im.lo - delta, cp_im.hi + delta);
        let next_start = p1.eval(p_blocks[i + 1].cp.0);
        let y_prime = first_close(q1, y, next_start, delta).unwrap_or(q_end);
        q_blocks.push(Block { cp: (y_cur, y), bp: Some((y, y_prime)) });
        y_cur = y_prime;
    }
    q_blocks.push(Block { cp: (y_cur, q_end), bp: None });
    Decomposition { p_blocks, q_blocks, dirs }
}

/// Is the polyline chunk direction-preserving at `budget` in direction `dir`
/// (backtracks from the running extremum bounded by `budget`)?
fn direction_preserving(c: &Polyline1, a: f64, b: f64, dir: i8, budget: f64) -> bool {
    if a >= b {
        return true;
    }
    let chunk = c.slice(a, b);
    let mut ext = chunk.values[0];
    for &v in &chunk.values {
        let back = if dir > 0 { ext - v } else { v - ext };
        if back > budget {
            return false;
        }
        if (dir > 0 && v > ext) || (dir < 0 && v < ext) {
            ext = v;
        }
    }
    true
}

/// The assembled star pair, with the original parameter of every vertex.
#[derive(Debug, Clone)]
pub struct StarPair {
    pub p_star: Curve,
    pub p_params: Vec<f64>,
    pub q_star: Curve,
    pub q_params: Vec<f64>,
}

impl StarPair {
    /// Translate a uniform parameter of the star Q curve back to an original
    /// Q parameter (exact piecewise-linear reparameterization).
    pub fn map_q_param(&self, u: f64) -> f64 {
        let n = self.q_star.len();
        let pos = u.clamp(0.0, 1.0) * (n - 1) as f64;
        let mut i = pos.floor() as usize;
        if i >= n - 1 {
            i = n - 2;
        }
        let f = pos - i as f64;
        self.q_params[i] + f * (self.q_params[i + 1] - self.q_params[i])
    }

    /// Inverse translation: an original Q parameter to a uniform parameter
    /// of the star Q curve.
    pub fn q_param_to_star(&self, y: f64) -> f64 {
        let n = self.q_star.len();
        if y <= self.q_params[0] {
            return 0.0;
        }
        if y >= self.q_params[n - 1] {
            return 1.0;
        }
        let i = self.q_params.partition_point(|p| *p <= y) - 1;
        let (a, b) = (self.q_params[i], self.q_params[i + 1]);
        let f = if b > a { (y - a) / (b - a) } else { 0.0 };
        (i as f64 + f) / (n - 1) as f64
    }
}

/// Outcome of the star construction: either the transformed pair, or the
/// certificate that no prefix of Q matches P at this scale.
pub enum StarOutcome {
    Pair(StarPair),
    EmptyExit,
}

fn straighten_blocks(
    curve: &Polyline1,
    blocks: &[Block],
    p1: &Polyline1,
    p_blocks: &[Block],
    dirs: &[i8],
    delta: f64,
) -> Polyline1 {
    let mut out = Polyline1 { params: Vec::new(), values: Vec::new() };
    let kb = blocks.len();
    for i in 0..kb {
        let b = &blocks[i];
        let end = b.bp.map(|bp| bp.1).unwrap_or(b.cp.1);
        let chunk = curve.slice(b.cp.0, end);
        let transformed = if i < kb - 1 {
            let im = p1.image(p_blocks[i].cp.0, p_blocks[i].cp.1);
            let next_start = p1.eval(p_blocks[i + 1].cp.0);
            let dir = dirs[i];
            let spec = if dir > 0 {
                StraighteningSpec {
                    interval: Interval { lo: im.lo - delta, hi: next_start - 4.0 * delta },
                    positive: true,
                }
            } else {
                StraighteningSpec {
                    interval: Interval { lo: next_start + 4.0 * delta, hi: im.hi + delta },
                    positive: false,
                }
            };
            let first = straighten(&chunk, &spec);
            // the approach window just before the next compact block
            let spec2 = if dir > 0 {
                StraighteningSpec {
                    interval: Interval { lo: next_start - 4.0 * delta, hi: next_start },
                    positive: true,
                }
            } else {
                StraighteningSpec {
                    interval: Interval { lo: next_start, hi: next_start + 4.0 * delta },
                    positive: false,
                }
            };
            let bp_start = b.bp.map(|bp| bp.0).unwrap_or(b.cp.1);
            let head = first.slice(*first.params.first().unwrap(), bp_start.max(*first.params.first().unwrap()));
            let tail = first.slice(bp_start.max(*first.params.first().unwrap()), *first.params.last().unwrap());
            let tail2 = straighten(&tail, &spec2);
            let mut joined = head;
            joined.extend(&tail2);
            joined
        } else {
            // final block: window and direction come from the P side
            let pb = &p_blocks[kb - 1];
            let im = p1.image(pb.cp.0, pb.cp.1);
            let (pa, pb_end) = (p1.eval(pb.cp.0), p1.eval(pb.cp.1));
            let dir = if pb_end > pa {
                1
            } else if pb_end < pa {
                -1
            } else if let Some(&d) = dirs.last() {
                d
            } else {
                1
            };
            let spec = StraighteningSpec {
                interval: Interval { lo: im.lo - delta, hi: im.hi + delta },
                positive: dir > 0,
            };
            straighten(&chunk, &spec)
        };
        out.extend(&transformed);
    }
    out
}

/// Merge per-axis transformed polylines into one d-dimensional curve over
/// the union of their breakpoints (repeated parameters encode jumps).
fn assemble(axes: &[Polyline1]) -> (Curve, Vec<f64>) {
    let d = axes.len();
    // union of parameters with per-parameter multiplicity = max across axes
    let mut events: Vec<f64> = Vec::new();
    {
        let mut cursors = vec![0usize; d];
        loop {
            let mut next: Option<f64> = None;
            for (c, ax) in cursors.iter().zip(axes.iter()) {
                if *c < ax.params.len() {
                    let p = ax.params[*c];
                    next = Some(match next {
                        None => p,
                        Some(q) => q.min(p),
                    });
                }
            }
            let Some(t) = next else { break };
            let mut mult = 1usize;
            for (c, ax) in cursors.iter().zip(axes.iter()) {
                let mut cnt = 0usize;
                let mut k = *c;
                while k < ax.params.len() && ax.params[k] == t {
                    cnt += 1;
                    k += 1;
                }
                mult = mult.max(cnt);
            }
            for _ in 0..mult {
                events.push(t);
            }
            for (c, ax) in cursors.iter_mut().zip(axes.iter()) {
                while *c < ax.params.len() && ax.params[*c] == t {
                    *c += 1;
                }
            }
        }
    }
    let mut coords: Vec<f64> = Vec::with_capacity(events.len() * d);
    let mut cursors = vec![0usize; d];
    let mut i = 0usize;
    while i < events.len() {
        let t = events[i];
        let mut run = 1usize;
        while i + run < events.len() && events[i + run] == t {
            run += 1;
        }
        // per axis: values at this parameter, spread across `run` slots
        for slot in 0..run {
            for (a, ax) in axes.iter().enumerate() {
                let c = cursors[a];
                let mut own: Vec<f64> = Vec::new();
                let mut k = c;
                while k < ax.params.len() && ax.params[k] == t {
                    own.push(ax.values[k]);
                    k += 1;
                }
                let v = if own.is_empty() {
                    ax.eval(t)
                } else {
                    own[slot.min(own.len() - 1)]
                };
                let _ = a;
                coords.push(v);
            }
        }
        for (_a, ax) in axes.iter().enumerate() {
            let c = &mut cursors[_a];
            while *c < ax.params.len() && ax.params[*c] == t {
                *c += 1;
            }
        }
        i += run;
    }
    if events.len() < 2 {
        // degenerate: duplicate
        let v: Vec<f64> = coords.clone();
        coords.extend_from_slice(&v);
        events.push(events[0]);
    }
    (Curve::new(d, coords).expect("assembled star curve"), events)
}

/// Build the star pair for a curve pair at scale delta, given per-axis
/// signatures of P. Returns `EmptyExit` when some Q bridge is not
/// 4 delta-direction-preserving (then no prefix of Q matches P within delta).
pub fn build_star_curves(p: &Curve, q: &Curve, sigs: &[Signature], delta: f64) -> Result<StarOutcome> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    if sigs.len() != p.dim() {
        return Err(Error::InvalidArgument(format!(
            "need one signature per axis ({} != {})",
            sigs.len(),
            p.dim()
        )));
    }
    let d = p.dim();
    let m = p.len();
    let mut p_axes: Vec<Polyline1> = Vec::with_capacity(d);
    let mut q_axes: Vec<Polyline1> = Vec::with_capacity(d);
    for axis in 0..d {
        let p1 = Polyline1::from_curve_axis(p, axis)?;
        let q1 = Polyline1::from_curve_axis(q, axis)?;
        let sig = &sigs[axis];
        let sig_params: Vec<f64> = sig.params.iter().map(|t| t.global(m)).collect();
        let sig_values: Vec<f64> = sig.params.iter().map(|t| p1.eval(t.global(m))).collect();
        let dec = decompose(&p1, &q1, &sig_params, &sig_values, delta);
        for (i, qb) in dec.q_blocks.iter().enumerate() {
            if let Some((a, b)) = qb.bp {
                if b > a && !direction_preserving(&q1, a, b, dec.dirs[i], 4.0 * delta) {
                    return Ok(StarOutcome::EmptyExit);
                }
            }
        }
        p_axes.push(straighten_blocks(&p1, &dec.p_blocks, &p1, &dec.p_blocks, &dec.dirs, delta));
        q_axes.push(straighten_blocks(&q1, &dec.q_blocks, &p1, &dec.p_blocks, &dec.dirs, delta));
    }
    let (p_star, p_params) = assemble(&p_axes);
    let (q_star, q_params) = assemble(&q_axes);
    Ok(StarOutcome::Pair(StarPair { p_star, p_params, q_star, q_params }))
}

/// Certified multiplier of the general exit set, as a function of the
/// footprint bound and scale: the walk's factor 3 composed with the
/// pointwise transform displacements of both curves.
pub fn c_exit(l_bound: f64, delta: f64) -> f64 {
    (8.0 * l_bound / delta + 1.0).max(3.0)
}

/// Exit set for an arbitrary pair, via the star transformation and the
/// monotone walk. Fails with `NotQuasiMonotone` if the assembled star curve
/// violates the piece-length invariant (surfaced, not approximated).
pub fn exit_set_general(
    p: &Curve,
    q: &Curve,
    sigs: &[Signature],
    delta: f64,
    l_bound: f64,
) -> Result<ExitSet> {
    match build_star_curves(p, q, sigs, delta)? {
        StarOutcome::EmptyExit => Ok(ExitSet::empty()),
        StarOutcome::Pair(star) => {
            let exit = exit_set_monotone(&star.p_star, &star.q_star, delta)?;
            Ok(match exit.interval {
                None => ExitSet::empty(),
                Some(iv) => ExitSet {
                    interval: Some(Interval {
                        lo: star.map_q_param(iv.lo),
                        hi: star.map_q_param(iv.hi),
                    }),
                    multiplier: c_exit(l_bound, delta),
                },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pl(values: &[f64]) -> Polyline1 {
        let n = values.len();
        let params = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        Polyline1 { params, values: values.to_vec() }
    }

    /// The defining formula, evaluated by brute force.
    fn formula(c: &Polyline1, spec: &StraighteningSpec, t: f64) -> f64 {
        let v = c.eval(t);
        let (a, b) = (spec.interval.lo, spec.interval.hi);
        if v < a || v > b {
            return v;
        }
        let mut ext = c.values[0];
        let consider = |x: f64, ext: &mut f64| {
            if spec.positive {
                *ext = ext.max(x);
            } else {
                *ext = ext.min(x);
            }
        };
        for i in 0..c.params.len() {
            if c.params[i] <= t {
                consider(c.values[i], &mut ext);
            }
        }
        consider(v, &mut ext);
        if spec.positive {
            ext.min(b)
        } else {
            ext.max(a)
        }
    }

    /// The formula applied at the input vertex parameters.
    fn at_vertices(c: &Polyline1, s: &Polyline1) -> Vec<f64> {
        c.params.iter().map(|&t| s.eval(t)).collect()
    }

    /// Displacements of the maximal monotone runs of a value sequence.
    fn monotone_run_lengths(vals: &[f64]) -> Vec<f64> {
        let mut runs: Vec<f64> = Vec::new();
        let mut start = vals[0];
        let mut dir = 0i8;
        for w in vals.windows(2) {
            let s = if w[1] > w[0] {
                1
            } else if w[1] < w[0] {
                -1
            } else {
                0
            };
            if s != 0 && dir != 0 && s != dir {
                runs.push((w[0] - start).abs());
                start = w[0];
                dir = s;
            } else if s != 0 && dir == 0 {
                dir = s;
            }
        }
        runs.push((vals[vals.len() - 1] - start).abs());
        runs
    }

    #[test]
    fn straighten_examples() {
        let c = pl(&[0.0, 3.0, 1.0, 4.0]);
        let s = straighten(
            &c,
            &StraighteningSpec { interval: Interval { lo: 0.0, hi: 4.0 }, positive: true },
        );
        assert_eq!(at_vertices(&c, &s), vec![0.0, 3.0, 3.0, 4.0]);
        // plateau at 3 over the dip
        assert_eq!(s.eval(0.5), 3.0);

        let s = straighten(
            &c,
            &StraighteningSpec { interval: Interval { lo: 0.0, hi: 2.0 }, positive: true },
        );
        assert_eq!(at_vertices(&c, &s), vec![0.0, 3.0, 2.0, 4.0]);
        // plateau at 2 between the two crossings of the interval boundary
        assert_eq!(s.eval(0.6), 2.0);

        let c = pl(&[4.0, 1.0, 3.0, 0.0]);
        let s = straighten(
            &c,
            &StraighteningSpec { interval: Interval { lo: 0.0, hi: 4.0 }, positive: false },
        );
        assert_eq!(at_vertices(&c, &s), vec![4.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn straighten_formula_equivalence_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..2000 {
            let n = rng.gen_range(2..20);
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let c = pl(&vals);
            let lo = rng.gen_range(-6.0..5.0);
            let hi = lo + rng.gen_range(0.0..8.0);
            let spec = StraighteningSpec {
                interval: Interval { lo, hi },
                positive: rng.gen_bool(0.5),
            };
            let s = straighten(&c, &spec);
            for _ in 0..40 {
                let t = rng.gen_range(0.0..1.0);
                let want = formula(&c, &spec, t);
                let got = s.eval(t);
                assert!(
                    (want - got).abs() < 1e-9,
                    "formula mismatch at t={t}: want {want}, got {got}\nvals={vals:?} spec={spec:?}"
                );
            }
        }
    }

    #[test]
    fn decompose_monotone_segment() {
        // first bridge found immediately after the 8 delta budget
        let p = pl(&[0.0, 100.0]);
        let sig_params = vec![0.0, 1.0];
        let sig_values = vec![0.0, 100.0];
        let dec = decompose(&p, &p, &sig_params, &sig_values, 1.0);
        assert_eq!(dec.p_blocks.len(), 2);
        let cp = dec.p_blocks[0].cp;
        let im = p.image(cp.0, cp.1);
        assert!(im.hi - im.lo <= 4.0 * 2.0 - 2.0 + 1e-9, "CP_1 diameter too large");
        // bridges are direction-preserving with diameter > 4 delta
        let bp = dec.p_blocks[0].bp.unwrap();
        let bim = p.image(bp.0, bp.1);
        assert!(bim.hi - bim.lo > 4.0);
    }

    #[test]
    fn decompose_small_oscillation_single_block() {
        // oscillation within amplitude 3 delta: no bridge of size > 8 delta
        let p = pl(&[0.0, 3.0, 0.5, 2.5, 0.0, 3.0]);
        let sig_params = vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
        let sig_values = vec![0.0, 3.0, 0.5, 2.5, 0.0, 3.0];
        let dec = decompose(&p, &p, &sig_params, &sig_values, 1.0);
        assert_eq!(dec.p_blocks.len(), 1);
        assert!(dec.p_blocks[0].bp.is_none());
    }

    #[test]
    fn decompose_far_q_degenerates() {
        let p = pl(&[0.0, 100.0]);
        let q = pl(&[1000.0, 1010.0]);
        let sig_params = vec![0.0, 1.0];
        let sig_values = vec![0.0, 100.0];
        let dec = decompose(&p, &q, &sig_params, &sig_values, 1.0);
        assert_eq!(dec.q_blocks.len(), dec.p_blocks.len());
        // CQ_1 degenerates and BQ_1 spans to 1
        let b = &dec.q_blocks[0];
        assert!(b.cp.1 - b.cp.0 < 1e-12);
        assert_eq!(b.bp.unwrap().1, 1.0);
    }

    #[test]
    fn star_identical_segments() {
        use crate::signatures::ell_delta_signature;
        let p = Curve::from_values(&[0.0, 10.0]).unwrap();
        let sig = ell_delta_signature(&p, 0, 1.0).unwrap();
        match build_star_curves(&p, &p, &[sig], 1.0).unwrap() {
            StarOutcome::Pair(star) => {
                crate::monotone_exit::monotone_pieces(&star.p_star, 1.0).unwrap();
                // all non-final monotone runs of the projection longer than 4 delta
                let proj = star.p_star.project(0).unwrap();
                let vals: Vec<f64> = (0..proj.len()).map(|i| proj.vertex(i)[0]).collect();
                let runs = monotone_run_lengths(&vals);
                for &l in &runs[..runs.len().saturating_sub(1)] {
                    assert!(l > 4.0, "non-final run of length {l}");
                }
            }
            StarOutcome::EmptyExit => panic!("unexpected empty"),
        }
    }

    #[test]
    fn star_backward_jump_gives_empty() {
        use crate::signatures::ell_delta_signature;
        let delta = 1.0;
        let p = Curve::from_values(&[0.0, 100.0]).unwrap();
        // Q rises but has a backward jump of 5 delta inside the bridge region
        let q = Curve::from_values(&[0.0, 40.0, 35.0, 100.0]).unwrap();
        let sig = ell_delta_signature(&p, 0, delta).unwrap();
        match build_star_curves(&p, &q, &[sig], delta).unwrap() {
            StarOutcome::EmptyExit => {}
            StarOutcome::Pair(_) => panic!("expected EmptyExit for a 5 delta backward jump"),
        }
    }

    #[test]
    fn general_exit_identical_straight() {
        use crate::signatures::ell_delta_signature;
        let p = Curve::from_values(&[0.0, 10.0]).unwrap();
        let sig = ell_delta_signature(&p, 0, 1.0).unwrap();
        let fp = crate::signatures::footprint(&sig, &p).unwrap();
        let exit = exit_set_general(&p, &p, &[sig], 1.0, fp.size).unwrap();
        let iv = exit.interval.expect("nonempty exit");
        assert!(iv.contains(1.0));
        // oracle containment of the true reachable exits
        for o in crate::oracle::reachable_exit_intervals(&p, &p, 1.0, 0.0) {
            assert!(iv.lo <= o.lo + 1e-9 && o.hi <= iv.hi + 1e-9);
        }
    }

    #[test]
    fn general_exit_reversed_empty() {
        use crate::signatures::ell_delta_signature;
        let p = Curve::from_values(&[0.0, 10.0]).unwrap();
        let q = Curve::from_values(&[10.0, 0.0]).unwrap();
        let sig = ell_delta_signature(&p, 0, 1.0).unwrap();
        let exit = exit_set_general(&p, &q, &[sig], 1.0, 4.0).unwrap();
        assert_eq!(exit.interval, None);
    }
}
