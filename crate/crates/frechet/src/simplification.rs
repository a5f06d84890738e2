//! Subcurve-simplification tree over Q: balanced tree over the edges, each
//! node holding greedy vertex-subset simplifications at power-of-two error
//! scales. Queries stitch O(log n) node simplifications into a simplification
//! of an arbitrary subcurve with a certified error, and the prefix query
//! searches for the longest prefix admitting a small certified error.

use crate::curves::{free_on_edge, Curve};
use crate::error::{Error, Result};

/// Certified approximation factor of the tree: the error reported for a
/// query is at most `SIMPL_ERROR_FACTOR` times the smallest Frechet error
/// achievable by any curve with the same vertex budget.
pub const SIMPL_ERROR_FACTOR: f64 = 8.0;

/// Exact decision: is d_F(segment(q_i -> q_j), Q[i..j]) <= mu? Single-row
/// free-space propagation, O(j - i) time.
fn seg_ok(q: &Curve, i: usize, j: usize, mu: f64) -> bool {
    let a = q.vertex(i);
    let b = q.vertex(j);
    let mut lo_reach = 0.0f64;
    for t in i + 1..=j {
        match free_on_edge(q.vertex(t), a, b, mu) {
            None => return false,
            Some((flo, fhi)) => {
                if flo > lo_reach {
                    lo_reach = flo;
                }
                if lo_reach > fhi {
                    return false;
                }
            }
        }
    }
    true
}

/// Largest reachable j for a jump from vertex i at error mu, found by
/// doubling plus in-octave bisection.
fn greedy_jump(q: &Curve, i: usize, last: usize, mu: f64) -> usize {
    if i + 1 >= last {
        return last;
    }
    let mut good = i + 1;
    let mut step = 1usize;
    loop {
        let cand = (i + step * 2).min(last);
        if cand <= good {
            return good;
        }
        if seg_ok(q, i, cand, mu) {
            good = cand;
            if cand == last {
                return last;
            }
            step *= 2;
        } else {
            let mut lo = good;
            let mut hi = cand;
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if seg_ok(q, i, mid, mu) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return lo;
        }
    }
}

/// Greedy vertex-subset simplification of Q[first..last] at error mu.
fn greedy_simplify(q: &Curve, first: usize, last: usize, mu: f64) -> Vec<u32> {
    let mut marked = vec![first as u32];
    let mut cur = first;
    while cur < last {
        cur = greedy_jump(q, cur, last, mu);
        marked.push(cur as u32);
    }
    marked
}

struct Node {
    e_lo: usize,
    e_hi: usize,
    left: usize,
    right: usize,
    /// (mu, marked vertex indices), mu strictly decreasing.
    ladder: Vec<(f64, Vec<u32>)>,
}

/// Simplified-subcurve tree over a curve Q.
pub struct SimplTree {
    q: Curve,
    nodes: Vec<Node>,
    root: usize,
}

/// A stitched subcurve simplification: the curve, the original Q-parameter
/// of each vertex, and the certified error bound tau.
#[derive(Debug, Clone)]
pub struct SimplAnswer {
    pub curve: Curve,
    pub params: Vec<f64>,
    pub tau: f64,
}

const IDENTITY_CUTOFF: usize = 4;
const MAX_LADDER: usize = 64;

fn build_node(q: &Curve, nodes: &mut Vec<Node>, e_lo: usize, e_hi: usize) -> usize {
    let id = nodes.len();
    nodes.push(Node { e_lo, e_hi, left: usize::MAX, right: usize::MAX, ladder: Vec::new() });
    if e_lo < e_hi {
        let mid = (e_lo + e_hi) / 2;
        let l = build_node(q, nodes, e_lo, mid);
        let r = build_node(q, nodes, mid + 1, e_hi);
        nodes[id].left = l;
        nodes[id].right = r;
    }
    let first = e_lo;
    let last = e_hi + 1;
    let len = last - first + 1;
    if len > IDENTITY_CUTOFF {
        // node diameter
        let dim = q.dim();
        let mut diam = 0.0f64;
        for c in 0..dim {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in first..=last {
                let x = q.vertex(i)[c];
                lo = lo.min(x);
                hi = hi.max(x);
            }
            diam = diam.max(hi - lo);
        }
        let mut ladder: Vec<(f64, Vec<u32>)> = Vec::new();
        if diam == 0.0 {
            ladder.push((0.0, vec![first as u32, last as u32]));
        } else {
            let mut j = diam.log2().ceil() as i32;
            let mut stored = 0usize;
            for _ in 0..MAX_LADDER {
                let mu = (2.0f64).powi(j);
                let marked = greedy_simplify(q, first, last, mu);
                let count = marked.len();
                let full = count == len;
                match ladder.last_mut() {
                    Some(prev) if prev.1.len() == count => {
                        // same count at a finer scale: keep the finer version
                        *prev = (mu, marked);
                    }
                    _ => {
                        stored += count;
                        ladder.push((mu, marked));
                    }
                }
                if full || stored > 6 * len {
                    break;
                }
                j -= 1;
            }
        }
        nodes[id].ladder = ladder;
    }
    id
}

/// Build the tree in near-linear time.
pub fn build_subcurve_tree(q: &Curve) -> SimplTree {
    let mut nodes = Vec::with_capacity(2 * q.len());
    let root = build_node(q, &mut nodes, 0, q.len() - 2);
    SimplTree { q: q.clone(), nodes, root }
}

impl SimplTree {
    pub fn source(&self) -> &Curve {
        &self.q
    }

    fn canonical(&self, node: usize, e_lo: usize, e_hi: usize, out: &mut Vec<usize>) {
        let n = &self.nodes[node];
        if n.e_lo > e_hi || n.e_hi < e_lo {
            return;
        }
        if e_lo <= n.e_lo && n.e_hi <= e_hi {
            out.push(node);
            return;
        }
        self.canonical(n.left, e_lo, e_hi, out);
        self.canonical(n.right, e_lo, e_hi, out);
    }

    /// Pick the finest stored scale whose vertex count fits the budget.
    /// Returns (mu, marked). Budget >= 2 always succeeds.
    fn pick_scale<'a>(&'a self, node: usize, budget: usize) -> (f64, &'a [u32]) {
        let n = &self.nodes[node];
        let len = n.e_hi + 2 - n.e_lo;
        debug_assert!(len > IDENTITY_CUTOFF, "identity nodes are handled by the caller");
        let mut best: Option<&(f64, Vec<u32>)> = None;
        for entry in &n.ladder {
            if entry.1.len() <= budget {
                match best {
                    Some(b) if b.0 <= entry.0 => {}
                    _ => best = Some(entry),
                }
            }
        }
        let e = best.expect("ladder always contains a 2-vertex scale");
        (e.0, &e.1)
    }

    /// Simplification of the subcurve Q[y_lo, y_hi] with a per-node vertex
    /// budget of k + 2 and certified error tau.
    pub fn simplify_subcurve(&self, y_lo: f64, y_hi: f64, k: usize) -> Result<SimplAnswer> {
        if k < 2 {
            return Err(Error::InvalidArgument("vertex budget k must be >= 2".into()));
        }
        if !(0.0 <= y_lo && y_lo <= y_hi && y_hi <= 1.0) {
            return Err(Error::ParamOutOfRange(format!("bad range [{y_lo}, {y_hi}]")));
        }
        let budget = k + 2;
        let n = self.q.len();
        let e = (n - 1) as f64;
        let s = y_lo * e;
        let t = y_hi * e;
        let v_from = s.ceil() as usize;
        let v_to = (t.floor() as usize).min(n - 1);

        let mut params: Vec<f64> = Vec::new();
        let mut coords: Vec<f64> = Vec::new();
        let dim = self.q.dim();
        let mut tau = 0.0f64;
        let push = |param: f64, v: &[f64], params: &mut Vec<f64>, coords: &mut Vec<f64>| {
            if params.last() == Some(&param) {
                return;
            }
            params.push(param);
            coords.extend_from_slice(v);
        };

        if v_from > v_to || v_from as f64 > t {
            // the whole range lies within one edge
            let a = self.q.eval_coords(crate::curves::CurveParam::from_global(y_lo, n));
            let b = self.q.eval_coords(crate::curves::CurveParam::from_global(y_hi, n));
            let mut coords = a.clone();
            coords.extend_from_slice(&b);
            return Ok(SimplAnswer {
                curve: Curve::new(dim, coords)?,
                params: vec![y_lo, y_hi],
                tau: 0.0,
            });
        }

        if (v_from as f64) > s {
            let a = self.q.eval_coords(crate::curves::CurveParam::from_global(y_lo, n));
            push(y_lo, &a, &mut params, &mut coords);
        }
        if v_to > v_from {
            let mut ids = Vec::new();
            self.canonical(self.root, v_from, v_to - 1, &mut ids);
            ids.sort_by_key(|&id| self.nodes[id].e_lo);
            for id in ids {
                let node = &self.nodes[id];
                let len = node.e_hi + 2 - node.e_lo;
                if len <= IDENTITY_CUTOFF || len <= budget {
                    for v in node.e_lo..=node.e_hi + 1 {
                        push(v as f64 / e, self.q.vertex(v), &mut params, &mut coords);
                    }
                } else {
                    let (mu, marked) = self.pick_scale(id, budget);
                    tau = tau.max(mu);
                    for &v in marked {
                        push(v as f64 / e, self.q.vertex(v as usize), &mut params, &mut coords);
                    }
                }
            }
        } else {
            // single vertex inside the range
            push(v_from as f64 / e, self.q.vertex(v_from), &mut params, &mut coords);
        }
        if (v_to as f64) < t {
            let b = self.q.eval_coords(crate::curves::CurveParam::from_global(y_hi, n));
            push(y_hi, &b, &mut params, &mut coords);
        }
        if params.len() == 1 {
            // degenerate point range: duplicate the single vertex
            params.push(params[0]);
            let v = coords.clone();
            coords.extend_from_slice(&v);
        }
        Ok(SimplAnswer { curve: Curve::new(dim, coords)?, params, tau })
    }

    /// Longest-prefix simplification: returns a simplification of
    /// Q[y0, y_star] with certified error at most `SIMPL_ERROR_FACTOR * delta`
    /// and y_star at least as large as the longest prefix whose optimal
    /// k-vertex simplification error is at most delta.
    pub fn prefix_simplification(&self, y0: f64, delta: f64, k: usize) -> Result<(SimplAnswer, f64)> {
        if !(delta > 0.0) {
            return Err(Error::InvalidArgument("delta must be positive".into()));
        }
        if k < 2 {
            return Err(Error::InvalidArgument("vertex budget k must be >= 2".into()));
        }
        let threshold = SIMPL_ERROR_FACTOR * delta;
        let n = self.q.len();
        let e = (n - 1) as f64;
        let last = n - 1;
        let green = |v: usize| -> Result<bool> {
            let ans = self.simplify_subcurve(y0, v as f64 / e, k)?;
            Ok(ans.tau <= threshold)
        };
        if green(last)? {
            let ans = self.simplify_subcurve(y0, 1.0, k)?;
            return Ok((ans, 1.0));
        }
        let v0 = (y0 * e).ceil() as usize;
        // tau of a within-edge fragment is zero, so v0 is always green
        let mut lo = v0.min(last);
        let mut hi = last;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if green(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let y_star = hi as f64 / e;
        let mut ans = self.simplify_subcurve(y0, lo as f64 / e, k)?;
        // append the final edge fragment up to (and including) y_star
        let b = self.q.eval_coords(crate::curves::CurveParam::vertex(hi, n));
        if ans.params.last() != Some(&y_star) {
            ans.params.push(y_star);
            let mut coords: Vec<f64> = Vec::new();
            for i in 0..ans.curve.len() {
                coords.extend_from_slice(ans.curve.vertex(i));
            }
            coords.extend_from_slice(&b);
            ans.curve = Curve::new(self.q.dim(), coords)?;
        }
        Ok((ans, y_star))
    }
}
