//! Signatures of 1-dimensional curves: a sparse subsequence of vertices that
//! preserves the curve's large-scale oscillation structure at a given scale,
//! plus footprints and the one coarsening step (delta -> 12 delta) used by
//! the decision pipeline.

use crate::curves::{Curve, CurveParam, Interval};
use crate::error::{Error, Result};

/// Scale factor applied by [`coarsen_signature`].
pub const COARSEN_FACTOR: f64 = 12.0;

/// Ordered vertex parameters s_1 < ... < s_k (s_1 = 0, s_k = 1) of a
/// 1-dimensional projection, together with the scale and axis they were
/// built for.
#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    pub params: Vec<CurveParam>,
    pub scale: f64,
    pub axis: usize,
}

impl Signature {
    /// Values of the signature vertices on the projected curve.
    pub fn values(&self, projected: &Curve) -> Vec<f64> {
        self.params.iter().map(|t| projected.eval_coords(*t)[0]).collect()
    }

    /// Vertex indices of the signature parameters.
    pub fn vertex_indices(&self) -> Vec<usize> {
        self.params.iter().map(|t| t.as_vertex().expect("signature params sit on vertices")).collect()
    }
}

/// Union of the 2-delta intervals around the signature vertex values.
#[derive(Debug, Clone, PartialEq)]
pub struct Footprint {
    pub intervals: Vec<Interval>,
    pub size: f64,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Linear-scan signature construction for a 1-dimensional curve.
///
/// The scan keeps the running extremum of the current run and emits it as a
/// signature vertex once the curve reverses by more than 2 delta. The first
/// run commits its direction only after escaping the delta-ball around the
/// start value, and the final candidate is emitted only if the curve ends
/// more than delta away from it; both rules implement the relaxed edge and
/// range clauses at the endpoints.
pub fn delta_signature_1d(c: &Curve, delta: f64) -> Result<Signature> {
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch(c.dim(), 1));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let m = c.len();
    let v: Vec<f64> = (0..m).map(|i| c.vertex(i)[0]).collect();
    let mut sig: Vec<usize> = vec![0];
    let mut dir: i8 = 0;
    let mut cand: usize = 0;
    for j in 1..m {
        if dir == 0 {
            if (v[j] - v[0]).abs() > delta {
                dir = sign(v[j] - v[0]);
                cand = j;
            }
        } else if (dir > 0 && v[j] > v[cand]) || (dir < 0 && v[j] < v[cand]) {
            cand = j;
        } else if (dir > 0 && v[cand] - v[j] > 2.0 * delta)
            || (dir < 0 && v[j] - v[cand] > 2.0 * delta)
        {
            sig.push(cand);
            dir = -dir;
            cand = j;
        }
    }
    let last = m - 1;
    if dir != 0 && cand != last {
        let gap = if dir > 0 { v[cand] - v[last] } else { v[last] - v[cand] };
        if gap > delta {
            sig.push(cand);
        }
    }
    if *sig.last().unwrap() != last {
        sig.push(last);
    }
    let params = sig.into_iter().map(|i| CurveParam::vertex(i, m)).collect();
    Ok(Signature { params, scale: delta, axis: 0 })
}

/// Signature of the projection of a d-dimensional curve onto one axis.
pub fn ell_delta_signature(p: &Curve, axis: usize, delta: f64) -> Result<Signature> {
    let projected = p.project(axis)?;
    let mut sig = delta_signature_1d(&projected, delta)?;
    sig.axis = axis;
    Ok(sig)
}

/// Footprint of a signature: merged union of [value - delta, value + delta]
/// over the signature vertices, with its total length.
pub fn footprint(sig: &Signature, source: &Curve) -> Result<Footprint> {
    let projected = if source.dim() == 1 { source.clone() } else { source.project(sig.axis)? };
    let delta = sig.scale;
    let mut ivs: Vec<Interval> = sig
        .values(&projected)
        .into_iter()
        .map(|v| Interval { lo: v - delta, hi: v + delta })
        .collect();
    ivs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let merged = crate::curves::merge_intervals(ivs);
    let size = merged.iter().map(Interval::len).sum();
    Ok(Footprint { intervals: merged, size })
}

/// Coarsen a signature by rerunning the 1-dimensional scan at 12x the scale,
/// restricted to the vertex sequence of the input signature. The output
/// parameters are a subset of the input parameters.
pub fn coarsen_signature(sig: &Signature, source: &Curve) -> Result<Signature> {
    let projected = if source.dim() == 1 { source.clone() } else { source.project(sig.axis)? };
    let values = sig.values(&projected);
    if values.len() == 2 {
        return Ok(Signature {
            params: sig.params.clone(),
            scale: sig.scale * COARSEN_FACTOR,
            axis: sig.axis,
        });
    }
    let seq = Curve::from_values(&values)?;
    let coarse = delta_signature_1d(&seq, sig.scale * COARSEN_FACTOR)?;
    let params = coarse
        .params
        .iter()
        .map(|t| sig.params[t.as_vertex().expect("scan picks vertices")])
        .collect();
    Ok(Signature { params, scale: sig.scale * COARSEN_FACTOR, axis: sig.axis })
}

/// Restriction of a full-curve signature to a piece [a, b] of the source:
/// the parameters strictly inside plus the piece endpoints, rebased to the
/// piece's own parameterization. Both cut parameters must sit on vertices.
pub(crate) fn restrict_signature(sig: &Signature, a: CurveParam, b: CurveParam, piece_len: usize) -> Signature {
    let va = a.as_vertex().expect("split params sit on vertices");
    let vb = b.as_vertex().expect("split params sit on vertices");
    let mut idx: Vec<usize> = vec![va];
    for t in &sig.params {
        let v = t.as_vertex().expect("signature params sit on vertices");
        if v > va && v < vb {
            idx.push(v);
        }
    }
    idx.push(vb);
    let params = idx.into_iter().map(|v| CurveParam::vertex(v - va, piece_len)).collect();
    Signature { params, scale: sig.scale, axis: sig.axis }
}

/// One violated clause of the signature definition.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureViolation(pub String);

/// Independent checker for the four signature properties (non-degeneracy,
/// approximately direction-preserving, minimum edge length, range), with the
/// relaxed clauses at the endpoints and the dedicated k = 2 variant. This
/// checks the definition clause by clause and shares no code with the scan.
pub fn check_signature(projected: &Curve, sig: &Signature, delta: f64) -> std::result::Result<(), SignatureViolation> {
    let fail = |msg: String| Err(SignatureViolation(msg));
    if projected.dim() != 1 {
        return fail("checker needs a 1-dimensional curve".into());
    }
    let m = projected.len();
    let k = sig.params.len();
    if k < 2 {
        return fail(format!("signature needs >= 2 vertices, got {k}"));
    }
    for w in sig.params.windows(2) {
        if !(w[0].key() < w[1].key()) {
            return fail("signature parameters not strictly increasing".into());
        }
    }
    if sig.params[0].key() != 0.0 {
        return fail("first signature parameter must be 0".into());
    }
    if sig.params[k - 1].as_vertex() != Some(m - 1) {
        return fail("last signature parameter must be 1".into());
    }
    let s: Vec<f64> = sig.values(projected);
    let vals: Vec<f64> = (0..m).map(|i| projected.vertex(i)[0]).collect();
    let vtx: Vec<usize> = sig.vertex_indices();

    let in_seg = |x: f64, a: f64, b: f64| x >= a.min(b) && x <= a.max(b);

    if k == 2 {
        // property 2 (direction-preserving at 2 delta)
        if s[0] != s[1] {
            let d = sign(s[1] - s[0]);
            let mut ext = vals[0];
            for &x in &vals {
                let back = if d > 0 { ext - x } else { x - ext };
                if back > 2.0 * delta {
                    return fail(format!("k=2 direction-preserving violated (backtrack {back})"));
                }
                if (d > 0 && x > ext) || (d < 0 && x < ext) {
                    ext = x;
                }
            }
        }
        // k = 2 range clause
        for &x in &vals {
            let ok = in_seg(x, s[0], s[1])
                || (x - s[0]).abs() <= delta
                || (x - s[1]).abs() <= delta;
            if !ok {
                return fail(format!("k=2 range violated at value {x}"));
            }
        }
        return Ok(());
    }

    // property 1: non-degeneracy of interior vertices
    for i in 1..k - 1 {
        if in_seg(s[i], s[i - 1], s[i + 1]) {
            return fail(format!("non-degeneracy violated at vertex {i}"));
        }
    }
    // property 3: minimum edge length
    for i in 0..k - 1 {
        let e = (s[i + 1] - s[i]).abs();
        let (thr, label) = if i == 0 || i == k - 2 { (delta, "delta") } else { (2.0 * delta, "2 delta") };
        if !(e > thr) {
            return fail(format!("edge {i} has length {e}, needs > {label}"));
        }
    }
    // properties 2 and 4 per piece
    for i in 0..k - 1 {
        let d = sign(s[i + 1] - s[i]);
        let mut ext = s[i];
        for j in vtx[i]..=vtx[i + 1] {
            let x = vals[j];
            let back = if d > 0 { ext - x } else { x - ext };
            if back > 2.0 * delta {
                return fail(format!("direction-preserving violated on piece {i} (backtrack {back})"));
            }
            if (d > 0 && x > ext) || (d < 0 && x < ext) {
                ext = x;
            }
            let ok = if i == 0 {
                in_seg(x, s[0], s[1]) || (x - s[0]).abs() <= delta
            } else if i == k - 2 {
                in_seg(x, s[k - 2], s[k - 1]) || (x - s[k - 1]).abs() <= delta
            } else {
                in_seg(x, s[i], s[i + 1])
            };
            if !ok {
                return fail(format!("range violated on piece {i} at value {x}"));
            }
        }
    }
    Ok(())
}
