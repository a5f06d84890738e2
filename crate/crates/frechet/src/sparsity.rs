//! Range-tree index over the vertices of Q answering sparsity and
//! candidate-passage queries per coordinate axis, and the splitting of P at
//! sparse signature vertices.

use crate::curves::{Curve, CurveParam, Interval};
use crate::error::{Error, Result};
use crate::signatures::{ell_delta_signature, footprint, restrict_signature, Signature};

/// Static merge-sort tree over points sorted by x, answering
/// "x strictly below/above a bound, y in a closed range" count and report
/// queries in O(log^2 n).
struct MergeSortTree {
    size: usize,
    xs: Vec<f64>,
    /// nodes[node] = (y, payload) sorted by y; implicit binary tree, node 1 is the root
    nodes: Vec<Vec<(f64, u32)>>,
}

impl MergeSortTree {
    fn build(mut pts: Vec<(f64, f64, u32)>) -> Self {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let size = pts.len();
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let mut nodes: Vec<Vec<(f64, u32)>> = vec![Vec::new(); 4 * size.max(1)];
        fn fill(nodes: &mut Vec<Vec<(f64, u32)>>, node: usize, l: usize, r: usize, pts: &[(f64, f64, u32)]) {
            if r - l == 1 {
                nodes[node] = vec![(pts[l].1, pts[l].2)];
                return;
            }
            let mid = (l + r) / 2;
            fill(nodes, 2 * node, l, mid, pts);
            fill(nodes, 2 * node + 1, mid, r, pts);
            let mut merged = Vec::with_capacity(r - l);
            let (a, b) = (nodes[2 * node].clone(), nodes[2 * node + 1].clone());
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let take_a = j >= b.len() || (i < a.len() && a[i].0 <= b[j].0);
                if take_a {
                    merged.push(a[i]);
                    i += 1;
                } else {
                    merged.push(b[j]);
                    j += 1;
                }
            }
            nodes[node] = merged;
        }
        if size > 0 {
            fill(&mut nodes, 1, 0, size, &pts);
        }
        MergeSortTree { size, xs, nodes }
    }

    fn count_in(ys: &[(f64, u32)], lo: f64, hi: f64) -> usize {
        let a = ys.partition_point(|p| p.0 < lo);
        let b = ys.partition_point(|p| p.0 <= hi);
        b - a
    }

    /// Count points with position index in [from, to) and y in [lo, hi].
    fn count_range(&self, from: usize, to: usize, lo: f64, hi: f64) -> usize {
        if self.size == 0 || from >= to {
            return 0;
        }
        let mut acc = 0usize;
        let mut stack = vec![(1usize, 0usize, self.size)];
        while let Some((node, l, r)) = stack.pop() {
            if to <= l || r <= from {
                continue;
            }
            if from <= l && r <= to {
                acc += Self::count_in(&self.nodes[node], lo, hi);
                continue;
            }
            let mid = (l + r) / 2;
            stack.push((2 * node, l, mid));
            stack.push((2 * node + 1, mid, r));
        }
        acc
    }

    fn report_range(&self, from: usize, to: usize, lo: f64, hi: f64, out: &mut Vec<u32>) {
        if self.size == 0 || from >= to {
            return;
        }
        let mut stack = vec![(1usize, 0usize, self.size)];
        while let Some((node, l, r)) = stack.pop() {
            if to <= l || r <= from {
                continue;
            }
            if from <= l && r <= to {
                let ys = &self.nodes[node];
                let a = ys.partition_point(|p| p.0 < lo);
                let b = ys.partition_point(|p| p.0 <= hi);
                out.extend(ys[a..b].iter().map(|p| p.1));
                continue;
            }
            let mid = (l + r) / 2;
            stack.push((2 * node, l, mid));
            stack.push((2 * node + 1, mid, r));
        }
    }

    /// Number of leading positions with x strictly below `bound`.
    fn prefix_below(&self, bound: f64) -> usize {
        self.xs.partition_point(|x| *x < bound)
    }

    /// First position with x strictly above `bound`.
    fn suffix_above(&self, bound: f64) -> usize {
        self.xs.partition_point(|x| *x <= bound)
    }
}

/// A candidate passage: a maximal subcurve of Q whose projection stays in
/// the closed slab around a signature vertex value, containing at least one
/// vertex of Q.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePassage {
    pub interval: Interval,
    pub first_vertex: usize,
    pub last_vertex: usize,
}

/// Per-axis range trees over consecutive-vertex coordinate pairs of Q.
pub struct PassageIndex {
    q: Curve,
    /// per axis: tree over (prev coordinate, current coordinate), sentinel (-inf, q_1)
    first_trees: Vec<MergeSortTree>,
    /// per axis: tree over (next coordinate, current coordinate), sentinel (+inf, q_n)
    last_trees: Vec<MergeSortTree>,
}

/// Build the index in O(n log n) time per axis.
pub fn build_passage_index(q: &Curve) -> PassageIndex {
    let n = q.len();
    let mut first_trees = Vec::with_capacity(q.dim());
    let mut last_trees = Vec::with_capacity(q.dim());
    for axis in 0..q.dim() {
        let val = |i: usize| q.vertex(i)[axis];
        let mut firsts = Vec::with_capacity(n);
        let mut lasts = Vec::with_capacity(n);
        firsts.push((f64::NEG_INFINITY, val(0), 0u32));
        for i in 1..n {
            firsts.push((val(i - 1), val(i), i as u32));
        }
        for i in 0..n - 1 {
            lasts.push((val(i + 1), val(i), i as u32));
        }
        lasts.push((f64::INFINITY, val(n - 1), (n - 1) as u32));
        first_trees.push(MergeSortTree::build(firsts));
        last_trees.push(MergeSortTree::build(lasts));
    }
    PassageIndex { q: q.clone(), first_trees, last_trees }
}

impl PassageIndex {
    pub fn n(&self) -> usize {
        self.q.len()
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    /// Number of candidate passages in the column of a signature vertex with
    /// projected value `sigma`.
    pub fn sparsity(&self, sigma: f64, axis: usize, delta: f64) -> usize {
        let tree = &self.first_trees[axis];
        let (lo, hi) = (sigma - delta, sigma + delta);
        let below = tree.count_range(0, tree.prefix_below(lo), lo, hi);
        let above = tree.count_range(tree.suffix_above(hi), tree.size, lo, hi);
        below + above
    }

    /// All candidate passages in the column of `sigma`, sorted along Q.
    pub fn candidate_passages(&self, sigma: f64, axis: usize, delta: f64) -> Vec<CandidatePassage> {
        let (lo, hi) = (sigma - delta, sigma + delta);
        let collect = |tree: &MergeSortTree| -> Vec<u32> {
            let mut out = Vec::new();
            tree.report_range(0, tree.prefix_below(lo), lo, hi, &mut out);
            tree.report_range(tree.suffix_above(hi), tree.size, lo, hi, &mut out);
            out.sort_unstable();
            out
        };
        let firsts = collect(&self.first_trees[axis]);
        let lasts = collect(&self.last_trees[axis]);
        debug_assert_eq!(firsts.len(), lasts.len());
        let n = self.q.len();
        let e = (n - 1) as f64;
        let val = |i: usize| self.q.vertex(i)[axis];
        firsts
            .into_iter()
            .zip(lasts)
            .map(|(f, l)| {
                let (f, l) = (f as usize, l as usize);
                let y1 = if f == 0 {
                    0.0
                } else {
                    let a = val(f - 1);
                    let b = val(f);
                    let bound = if a < lo { lo } else { hi };
                    ((f - 1) as f64 + (bound - a) / (b - a)) / e
                };
                let y2 = if l == n - 1 {
                    1.0
                } else {
                    let a = val(l);
                    let b = val(l + 1);
                    let bound = if b < lo { lo } else { hi };
                    (l as f64 + (bound - a) / (b - a)) / e
                };
                CandidatePassage { interval: Interval { lo: y1, hi: y2 }, first_vertex: f, last_vertex: l }
            })
            .collect()
    }
}

/// One interior split vertex: its parameter on P and, per axis on which it
/// is a sparse signature vertex, the projected value defining its column.
#[derive(Debug, Clone)]
pub struct SplitInfo {
    pub param: CurveParam,
    pub axes: Vec<(usize, f64)>,
}

/// P split at sparse signature vertices, with per-piece restricted
/// signatures for every axis.
pub struct SplitResult {
    /// All boundaries 0 = s_1 < ... < s_{k+1} = 1.
    pub params: Vec<CurveParam>,
    pub pieces: Vec<Curve>,
    /// piece_sigs[piece][axis]
    pub piece_sigs: Vec<Vec<Signature>>,
    /// Interior boundaries, aligned with params[1..params.len()-1].
    pub split_info: Vec<SplitInfo>,
    /// The full-curve signatures per axis.
    pub full_sigs: Vec<Signature>,
}

/// Split P at every signature vertex (any axis) with at most ceil(n/alpha)
/// candidate passages, and restrict the signatures to the pieces. Asserts
/// the footprint bound 4*alpha*delta + 4*delta on every restricted
/// signature.
pub fn split_at_sparse_vertices(
    p: &Curve,
    q: &Curve,
    idx: &PassageIndex,
    delta: f64,
    alpha: f64,
) -> Result<SplitResult> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let n = q.len();
    if !(1.0 <= alpha && alpha <= n as f64) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [1, n={n}]")));
    }
    let thresh = (n as f64 / alpha).ceil() as usize;
    let m = p.len();
    let full_sigs: Vec<Signature> =
        (0..p.dim()).map(|axis| ell_delta_signature(p, axis, delta)).collect::<Result<_>>()?;

    let mut by_vertex: std::collections::BTreeMap<usize, Vec<(usize, f64)>> = Default::default();
    for sig in &full_sigs {
        let proj_vals = sig.values(&p.project(sig.axis)?);
        let idxs = sig.vertex_indices();
        for (pos, (&vi, &sv)) in idxs.iter().zip(proj_vals.iter()).enumerate() {
            if pos == 0 || pos + 1 == idxs.len() {
                continue;
            }
            if idx.sparsity(sv, sig.axis, delta) <= thresh {
                by_vertex.entry(vi).or_default().push((sig.axis, sv));
            }
        }
    }

    let mut params = vec![CurveParam::vertex(0, m)];
    let mut split_info = Vec::new();
    for (vi, axes) in by_vertex {
        let param = CurveParam::vertex(vi, m);
        params.push(param);
        split_info.push(SplitInfo { param, axes });
    }
    params.push(CurveParam::vertex(m - 1, m));

    let mut pieces = Vec::with_capacity(params.len() - 1);
    let mut piece_sigs = Vec::with_capacity(params.len() - 1);
    let bound = 4.0 * alpha * delta + 4.0 * delta;
    for w in params.windows(2) {
        let piece = p.subcurve(w[0], w[1])?;
        let piece_len = piece.len();
        let mut sigs = Vec::with_capacity(p.dim());
        for sig in &full_sigs {
            let restricted = restrict_signature(sig, w[0], w[1], piece_len);
            let fp = footprint(&restricted, &piece)?;
            if fp.size > bound * (1.0 + 1e-9) {
                return Err(Error::StarAssembly(format!(
                    "restricted signature footprint {} exceeds bound {bound}",
                    fp.size
                )));
            }
            sigs.push(restricted);
        }
        pieces.push(piece);
        piece_sigs.push(sigs);
    }
    Ok(SplitResult { params, pieces, piece_sigs, split_info, full_sigs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1(vals: &[f64]) -> Curve {
        Curve::from_values(vals).unwrap()
    }

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    /// Brute-force passage enumeration used as the test oracle.
    pub(super) fn brute_passages(q: &Curve, sigma: f64, axis: usize, delta: f64) -> Vec<(usize, usize)> {
        let n = q.len();
        let inside = |i: usize| (q.vertex(i)[axis] - sigma).abs() <= delta;
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            if inside(i) && (i == 0 || !inside(i - 1)) {
                let mut j = i;
                while j + 1 < n && inside(j + 1) {
                    j += 1;
                }
                out.push((i, j));
                i = j + 1;
            } else {
                i += 1;
            }
        }
        out
    }

    #[test]
    fn build_counts() {
        let q = c1(&[0.0, 10.0]);
        let idx = build_passage_index(&q);
        assert_eq!(idx.first_trees[0].size, 2);
        assert_eq!(idx.last_trees[0].size, 2);
        let q = c1(&[0.0, 10.0, 0.0]);
        let idx = build_passage_index(&q);
        assert_eq!(idx.first_trees[0].size, 3);
    }

    #[test]
    fn sparsity_examples() {
        let q = c1(&[0.0, 10.0, 0.0]);
        let idx = build_passage_index(&q);
        assert_eq!(idx.sparsity(0.0, 0, 1.0), 2);
        assert_eq!(idx.sparsity(10.0, 0, 1.0), 1);
        assert_eq!(idx.sparsity(5.0, 0, 1.0), 0);
    }

    #[test]
    fn passage_examples() {
        let q = c1(&[0.0, 10.0, 0.0]);
        let idx = build_passage_index(&q);
        let ps = idx.candidate_passages(0.0, 0, 1.0);
        assert_eq!(ps.len(), 2);
        assert!(approx(ps[0].interval.lo, 0.0) && approx(ps[0].interval.hi, 0.05));
        assert!(approx(ps[1].interval.lo, 0.95) && approx(ps[1].interval.hi, 1.0));

        let ps = idx.candidate_passages(10.0, 0, 1.0);
        assert_eq!(ps.len(), 1);
        assert!(approx(ps[0].interval.lo, 0.45) && approx(ps[0].interval.hi, 0.55));

        let q = c1(&[0.0, 10.0]);
        let idx = build_passage_index(&q);
        let ps = idx.candidate_passages(0.0, 0, 1.0);
        assert_eq!(ps.len(), 1);
        assert!(approx(ps[0].interval.lo, 0.0) && approx(ps[0].interval.hi, 0.1));
    }

    #[test]
    fn sparsity_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.gen_range(2..60);
            let vals: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let q = c1(&vals);
            let idx = build_passage_index(&q);
            let sigma = rng.gen_range(-5.0..5.0);
            let delta = rng.gen_range(0.05..3.0);
            let brute = brute_passages(&q, sigma, 0, delta);
            assert_eq!(idx.sparsity(sigma, 0, delta), brute.len());
            let ps = idx.candidate_passages(sigma, 0, delta);
            let spans: Vec<(usize, usize)> = ps.iter().map(|p| (p.first_vertex, p.last_vertex)).collect();
            assert_eq!(spans, brute);
        }
    }

    #[test]
    fn split_far_q_splits_everywhere() {
        // Q far from every signature vertex: sparsity 0 <= threshold, every
        // interior signature vertex splits.
        let p = c1(&[0.0, 10.0, 0.0, 10.0, 0.0]);
        let q = c1(&[100.0, 101.0]);
        let idx = build_passage_index(&q);
        let res = split_at_sparse_vertices(&p, &q, &idx, 1.0, 1.0).unwrap();
        assert_eq!(res.params.len(), 5); // 3 interior signature vertices
        assert_eq!(res.pieces.len(), 4);
    }

    #[test]
    fn split_dense_q_single_piece() {
        // every signature vertex has more passages than the threshold
        let p = c1(&[0.0, 10.0, 0.0]);
        // Q oscillates so that both values 0 and 10 have many passages
        let mut vals = Vec::new();
        for _ in 0..8 {
            vals.extend_from_slice(&[0.0, 10.0]);
        }
        let q = c1(&vals);
        let idx = build_passage_index(&q);
        let n = q.len() as f64;
        let res = split_at_sparse_vertices(&p, &q, &idx, 1.0, n).unwrap();
        assert_eq!(res.pieces.len(), 1);
        assert_eq!(res.pieces[0], p);
    }

    #[test]
    fn split_segment_single_piece() {
        let p = c1(&[0.0, 10.0]);
        let q = c1(&[0.0, 10.0]);
        let idx = build_passage_index(&q);
        let res = split_at_sparse_vertices(&p, &q, &idx, 1.0, 1.0).unwrap();
        assert_eq!(res.pieces.len(), 1);
    }

    #[test]
    fn pieces_concatenate_to_p() {
        let p = c1(&[0.0, 10.0, -3.0, 8.0, 0.0]);
        let q = c1(&[0.0, 9.0, -2.0, 7.0, 1.0]);
        let idx = build_passage_index(&q);
        let res = split_at_sparse_vertices(&p, &q, &idx, 0.5, 2.0).unwrap();
        let mut rebuilt: Vec<f64> = Vec::new();
        for (i, piece) in res.pieces.iter().enumerate() {
            let start = if i == 0 { 0 } else { 1 };
            for v in (start..piece.len()).map(|j| piece.vertex(j)[0]) {
                rebuilt.push(v);
            }
        }
        let orig: Vec<f64> = (0..p.len()).map(|i| p.vertex(i)[0]).collect();
        assert_eq!(rebuilt, orig);
    }
}
