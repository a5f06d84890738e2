//! The decision pipeline and the value search: split P at sparse signature
//! vertices, push a frontier of certified-reachable points column by column
//! using simplification-backed exit sets, and wrap the decider in a
//! geometric search to produce a value with a two-sided certificate.

use crate::curves::{free_on_edge, linf, merge_intervals, Curve, Interval};
use crate::error::{Error, Result};
use crate::monotone_exit::{exit_set_monotone, ExitSet};
use crate::oracle::free_space_reachable;
use crate::signatures::{coarsen_signature, Signature, COARSEN_FACTOR};
use crate::simplification::{SimplAnswer, SimplTree, SIMPL_ERROR_FACTOR};
use crate::sparsity::{build_passage_index, split_at_sparse_vertices, PassageIndex};
use crate::straighten::{build_star_curves, c_exit, StarOutcome};

/// Parameters of one approximate decision, with the certified multiplier.
#[derive(Debug, Clone, Copy)]
pub struct DecisionConfig {
    pub delta: f64,
    pub alpha: f64,
    /// Sparsity threshold ceil(n / alpha).
    pub threshold: usize,
    /// YES implies d_F <= c_total * delta.
    pub c_total: f64,
}

impl DecisionConfig {
    pub fn new(delta: f64, alpha: f64, n: usize) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(Error::InvalidArgument("delta must be >= 0".into()));
        }
        if !(1.0 <= alpha && alpha <= n as f64) {
            return Err(Error::InvalidArgument(format!("alpha {alpha} outside [1, {n}]")));
        }
        Ok(DecisionConfig {
            delta,
            alpha,
            threshold: (n as f64 / alpha).ceil() as usize,
            c_total: c_total(alpha),
        })
    }
}

/// Certified multiplier of the whole decision pipeline: the general exit
/// multiplier at the coarsened scale, composed with the simplification
/// transfer and the slack of re-rooting inside a simplification edge.
pub fn c_total(alpha: f64) -> f64 {
    let l_over_delta = 4.0 * alpha + 4.0;
    COARSEN_FACTOR * c_exit(l_over_delta, 1.0) + 2.0 * SIMPL_ERROR_FACTOR + 2.0
}

/// Counters reported by the instrumented decider.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecideStats {
    /// Largest number of frontier elements (per-passage groups) seen.
    pub max_frontier: usize,
    /// Number of exit computations that used the exact local fallback.
    pub fallbacks: usize,
    /// Total number of single-point exit computations.
    pub exit_calls: usize,
}

/// Translate an interval of simplification parameters into original Q
/// parameters, widened outward to the provenance of the surrounding
/// simplification vertices.
fn widen_to_q(simpl: &SimplAnswer, iv: Interval) -> Interval {
    let k = simpl.curve.len();
    let e = (k - 1) as f64;
    let lo_pos = (iv.lo.clamp(0.0, 1.0) * e).floor() as usize;
    let hi_pos = (iv.hi.clamp(0.0, 1.0) * e).ceil() as usize;
    Interval { lo: simpl.params[lo_pos.min(k - 1)], hi: simpl.params[hi_pos.min(k - 1)] }
}

/// Exit intervals (original Q-parameters) reachable from the point
/// (start of `piece`, y_root), computed through the prefix simplification
/// and the star transformation at scale 12 delta. Falls back to exact local
/// reachability when the star assembly violates the piece-length invariant,
/// so the result is always sound on both sides.
fn fast_exit_intervals(
    piece: &Curve,
    y_root: f64,
    tree: &SimplTree,
    delta: f64,
    sigs12: &[Signature],
    stats: &mut DecideStats,
) -> Result<Vec<Interval>> {
    stats.exit_calls += 1;
    let k = piece.len();
    let (simpl, _y_star) = tree.prefix_simplification(y_root, delta, k.max(2))?;
    let d12 = COARSEN_FACTOR * delta;
    match build_star_curves(piece, &simpl.curve, sigs12, d12)? {
        StarOutcome::EmptyExit => Ok(Vec::new()),
        StarOutcome::Pair(star) => match exit_set_monotone(&star.p_star, &star.q_star, d12) {
            Ok(ExitSet { interval: None, .. }) => Ok(Vec::new()),
            Ok(ExitSet { interval: Some(iv), .. }) => {
                let simpl_iv =
                    Interval { lo: star.map_q_param(iv.lo), hi: star.map_q_param(iv.hi) };
                Ok(vec![widen_to_q(&simpl, simpl_iv)])
            }
            Err(Error::NotQuasiMonotone { .. }) => {
                // exact local reachability on the simplified pair
                stats.fallbacks += 1;
                let map = free_space_reachable(piece, &simpl.curve, d12);
                Ok(map.exit_intervals().into_iter().map(|iv| widen_to_q(&simpl, iv)).collect())
            }
            Err(e) => Err(e),
        },
    }
}

/// Public single-point fast exit set. The multiplier is certified from the
/// footprint bound of the coarsened signatures. Surfaces the star-assembly
/// invariant violation as a hard error.
pub fn exit_set_fast(
    piece: &Curve,
    q: &Curve,
    y_root: f64,
    tree: &SimplTree,
    delta: f64,
    sigs12: &[Signature],
    l12_bound: f64,
) -> Result<ExitSet> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let root_pt = q.eval_coords(crate::curves::CurveParam::from_global(y_root, q.len()));
    if linf(piece.first(), &root_pt) > delta * (1.0 + 1e-9) {
        return Err(Error::InvalidArgument("start point is not delta-close".into()));
    }
    let k = piece.len();
    let (simpl, _y_star) = tree.prefix_simplification(y_root, delta, k.max(2))?;
    let d12 = COARSEN_FACTOR * delta;
    let mult = COARSEN_FACTOR * c_exit(l12_bound, d12) + 2.0 * SIMPL_ERROR_FACTOR + 2.0;
    match build_star_curves(piece, &simpl.curve, sigs12, d12)? {
        StarOutcome::EmptyExit => Ok(ExitSet::empty()),
        StarOutcome::Pair(star) => {
            let exit = exit_set_monotone(&star.p_star, &star.q_star, d12)?;
            Ok(match exit.interval {
                None => ExitSet::empty(),
                Some(iv) => {
                    let simpl_iv =
                        Interval { lo: star.map_q_param(iv.lo), hi: star.map_q_param(iv.hi) };
                    ExitSet { interval: Some(widen_to_q(&simpl, simpl_iv)), multiplier: mult }
                }
            })
        }
    }
}

/// Maximal delta-close runs of the column of `point` on Q, clipped to a
/// window, as (run, lowest delta-close value in window) candidates.
fn close_runs_in(
    q: &Curve,
    point: &[f64],
    window: Interval,
    delta: f64,
) -> Vec<Interval> {
    let n = q.len();
    let e = (n - 1) as f64;
    let first_edge = ((window.lo * e).floor() as usize).min(n - 2);
    let last_edge = ((window.hi * e).ceil() as usize).min(n - 1).saturating_sub(1);
    let mut runs: Vec<Interval> = Vec::new();
    for qe in first_edge..=last_edge {
        if let Some((lo, hi)) = free_on_edge(point, q.vertex(qe), q.vertex(qe + 1), delta) {
            let iv = Interval { lo: (qe as f64 + lo) / e, hi: (qe as f64 + hi) / e };
            match runs.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => runs.push(iv),
            }
        }
    }
    runs.into_iter().filter_map(|r| r.intersect(&window)).collect()
}

/// Intersect a sorted disjoint interval union with another interval set.
fn intersect_unions(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if let Some(iv) = a[i].intersect(&b[j]) {
            out.push(iv);
        }
        if a[i].hi <= b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// The O(alpha)-approximate decision: YES means d_F <= c_total * delta,
/// NO means d_F > delta.
pub fn approx_decide(
    p: &Curve,
    q: &Curve,
    cfg: &DecisionConfig,
    idx: &PassageIndex,
    tree: &SimplTree,
) -> Result<bool> {
    approx_decide_instrumented(p, q, cfg, idx, tree).map(|(ans, _)| ans)
}

pub fn approx_decide_instrumented(
    p: &Curve,
    q: &Curve,
    cfg: &DecisionConfig,
    idx: &PassageIndex,
    tree: &SimplTree,
) -> Result<(bool, DecideStats)> {
    let mut stats = DecideStats::default();
    if cfg.delta == 0.0 {
        return Ok((crate::curves::curves_equal(p, q), stats));
    }
    let delta = cfg.delta;
    if linf(p.first(), q.first()) > delta {
        return Ok((false, stats));
    }
    let split = split_at_sparse_vertices(p, q, idx, delta, cfg.alpha)?;
    let piece_count = split.pieces.len();
    let mut sigs12: Vec<Vec<Signature>> = Vec::with_capacity(piece_count);
    for (piece, sigs) in split.pieces.iter().zip(split.piece_sigs.iter()) {
        let coarse: Vec<Signature> =
            sigs.iter().map(|s| coarsen_signature(s, piece)).collect::<Result<_>>()?;
        sigs12.push(coarse);
    }

    let mut roots: Vec<f64> = vec![0.0];
    for (i, piece) in split.pieces.iter().enumerate() {
        let mut exits: Vec<Interval> = Vec::new();
        for &root in &roots {
            exits.extend(fast_exit_intervals(piece, root, tree, delta, &sigs12[i], &mut stats)?);
        }
        let exits = merge_intervals(exits);
        if exits.is_empty() {
            return Ok((false, stats));
        }
        if i + 1 == piece_count {
            let yes = exits.iter().any(|iv| iv.contains(1.0));
            return Ok((yes, stats));
        }
        // restrict to the candidate passages of the next sparse column
        let info = &split.split_info[i];
        let mut allowed = exits;
        for &(axis, sigma) in &info.axes {
            let passages: Vec<Interval> =
                idx.candidate_passages(sigma, axis, delta).into_iter().map(|p| p.interval).collect();
            allowed = intersect_unions(&allowed, &passages);
            if allowed.is_empty() {
                return Ok((false, stats));
            }
        }
        // new frontier: bottom of every delta-close run inside the allowed set
        let col_vertex = split.params[i + 1].as_vertex().expect("split params sit on vertices");
        let col_point = p.vertex(col_vertex).to_vec();
        let mut elements = 0usize;
        let mut next_roots: Vec<f64> = Vec::new();
        for window in &allowed {
            let runs = close_runs_in(q, &col_point, *window, delta);
            if !runs.is_empty() {
                elements += 1;
            }
            for r in runs {
                next_roots.push(r.lo);
            }
        }
        stats.max_frontier = stats.max_frontier.max(elements);
        if next_roots.is_empty() {
            return Ok((false, stats));
        }
        next_roots.sort_by(f64::total_cmp);
        next_roots.dedup();
        roots = next_roots;
    }
    unreachable!("loop returns at the last piece")
}

/// Result of the value search.
#[derive(Debug, Clone, Copy)]
pub struct ApproxResult {
    pub value: f64,
    pub cert_lo: f64,
    pub cert_hi: f64,
    pub c_total: f64,
    pub decider_calls: usize,
}

/// Cost of the uniform-parameterization matching (a valid upper bound for
/// the Frechet distance).
fn uniform_matching_cost(p: &Curve, q: &Curve) -> f64 {
    let mut params: Vec<f64> = Vec::new();
    let pm = (p.len() - 1) as f64;
    let qm = (q.len() - 1) as f64;
    for i in 0..p.len() {
        params.push(i as f64 / pm);
    }
    for j in 0..q.len() {
        params.push(j as f64 / qm);
    }
    params.sort_by(f64::total_cmp);
    params.dedup();
    let mut worst = 0.0f64;
    for t in params {
        let a = p.eval_coords(crate::curves::CurveParam::from_global(t, p.len()));
        let b = q.eval_coords(crate::curves::CurveParam::from_global(t, q.len()));
        worst = worst.max(linf(&a, &b));
    }
    worst
}

/// O(alpha)-approximation of the Frechet distance with a certificate
/// [cert_lo, cert_hi] containing the exact value; value = cert_hi.
pub fn approx_frechet(p: &Curve, q: &Curve, alpha: f64, eps: f64) -> Result<ApproxResult> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let ct = c_total(alpha);
    if crate::curves::curves_equal(p, q) {
        return Ok(ApproxResult { value: 0.0, cert_lo: 0.0, cert_hi: 0.0, c_total: ct, decider_calls: 0 });
    }
    let n = q.len();
    if !(1.0 <= alpha && alpha <= n as f64) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [1, {n}]")));
    }
    let idx = build_passage_index(q);
    let tree = crate::simplification::build_subcurve_tree(q);
    let mut calls = 0usize;
    let mut decide = |d: f64| -> Result<bool> {
        calls += 1;
        let cfg = DecisionConfig::new(d, alpha, n)?;
        approx_decide(p, q, &cfg, &idx, &tree)
    };
    let lo0 = linf(p.first(), q.first()).max(linf(p.last(), q.last()));
    let hi0 = uniform_matching_cost(p, q);
    let mut hi = hi0;
    let mut lo = lo0;
    if lo == 0.0 {
        // endpoints coincide: descend by halving until a NO appears
        let mut t = hi;
        for _ in 0..120 {
            t /= 2.0;
            if t <= 0.0 {
                break;
            }
            if !decide(t)? {
                lo = t;
                break;
            }
            hi = t;
        }
        if lo == 0.0 {
            lo = t.max(f64::MIN_POSITIVE);
        }
    }
    for _ in 0..300 {
        if hi <= lo * (1.0 + eps) {
            break;
        }
        let mid = (lo * hi).sqrt();
        if !(mid > lo && mid < hi) {
            break;
        }
        if decide(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ApproxResult { value: ct * hi, cert_lo: lo, cert_hi: ct * hi, c_total: ct, decider_calls: calls })
}
