//! Polygonal curves over a uniform parameterization of [0,1], with the
//! L-infinity geometry used everywhere else in this crate.

use crate::error::{Error, Result};

/// A point in d-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("point needs dimension >= 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("point coordinates must be finite".into()));
        }
        Ok(Point { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// L-infinity distance between two coordinate slices of equal length.
pub(crate) fn linf(a: &[f64], b: &[f64]) -> f64 {
    let mut m = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = (x - y).abs();
        if d > m {
            m = d;
        }
    }
    m
}

/// L-infinity distance between two points of equal dimension.
pub fn linf_dist(p: &Point, q: &Point) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    Ok(linf(p.coords(), q.coords()))
}

/// A location on a curve, kept as (edge index, fraction along that edge) so
/// that vertex positions stay exact under subcurve and split operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParam {
    pub edge: usize,
    pub frac: f64,
}

impl CurveParam {
    pub fn new(edge: usize, frac: f64) -> Self {
        CurveParam { edge, frac }
    }

    /// Parameter of vertex `i` on a curve with `m` vertices.
    pub fn vertex(i: usize, m: usize) -> Self {
        if i + 1 == m {
            CurveParam { edge: m - 2, frac: 1.0 }
        } else {
            CurveParam { edge: i, frac: 0.0 }
        }
    }

    /// Sort key; ordering of keys agrees with ordering of global parameters.
    pub fn key(&self) -> f64 {
        self.edge as f64 + self.frac
    }

    pub fn global(&self, m: usize) -> f64 {
        self.key() / (m - 1) as f64
    }

    pub fn from_global(t: f64, m: usize) -> Self {
        let e = m - 1;
        let scaled = t.clamp(0.0, 1.0) * e as f64;
        let mut edge = scaled.floor() as usize;
        if edge >= e {
            edge = e - 1;
        }
        CurveParam { edge, frac: scaled - edge as f64 }
    }

    /// Exact vertex index if this parameter sits on a vertex.
    pub fn as_vertex(&self) -> Option<usize> {
        if self.frac == 0.0 {
            Some(self.edge)
        } else if self.frac == 1.0 {
            Some(self.edge + 1)
        } else {
            None
        }
    }
}

impl PartialOrd for CurveParam {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.key().partial_cmp(&other.key())
    }
}

/// A closed interval on the real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidArgument(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }
}

/// Merge possibly-overlapping intervals into a disjoint sorted union.
pub fn merge_intervals(mut v: Vec<Interval>) -> Vec<Interval> {
    v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::with_capacity(v.len());
    for iv in v {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => {
                if iv.hi > last.hi {
                    last.hi = iv.hi;
                }
            }
            _ => out.push(iv),
        }
    }
    out
}

/// A polygonal curve: at least two vertices of equal dimension, vertex `i`
/// sitting at global parameter `i/(m-1)`. Consecutive duplicate vertices are
/// allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    dim: usize,
    coords: Vec<f64>,
}

impl Curve {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidCurve("dimension must be >= 1".into()));
        }
        if coords.len() % dim != 0 || coords.len() / dim < 2 {
            return Err(Error::InvalidCurve(format!(
                "need at least 2 vertices of dimension {dim}, got {} coordinates",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCurve("coordinates must be finite".into()));
        }
        Ok(Curve { dim, coords })
    }

    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidCurve("need at least 2 vertices".into()));
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(dim, p.dim()));
            }
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            coords.extend_from_slice(p.coords());
        }
        Curve::new(dim, coords)
    }

    /// 1-dimensional curve from a value list.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        Curve::new(1, values.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn first(&self) -> &[f64] {
        self.vertex(0)
    }

    pub fn last(&self) -> &[f64] {
        self.vertex(self.len() - 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks(self.dim)
    }

    fn check_param(&self, t: CurveParam) -> Result<()> {
        if t.edge + 1 >= self.len() {
            return Err(Error::ParamOutOfRange(format!(
                "edge {} out of range for curve with {} vertices",
                t.edge,
                self.len()
            )));
        }
        if !(0.0..=1.0).contains(&t.frac) {
            return Err(Error::ParamOutOfRange(format!("fraction {} outside [0,1]", t.frac)));
        }
        Ok(())
    }

    /// Evaluate the curve at a parameter. Exact at vertices.
    pub fn eval(&self, t: CurveParam) -> Result<Point> {
        self.check_param(t)?;
        Ok(Point { coords: self.eval_coords(t) })
    }

    pub(crate) fn eval_coords(&self, t: CurveParam) -> Vec<f64> {
        let a = self.vertex(t.edge);
        if t.frac == 0.0 {
            return a.to_vec();
        }
        let b = self.vertex(t.edge + 1);
        if t.frac == 1.0 {
            return b.to_vec();
        }
        a.iter().zip(b.iter()).map(|(x, y)| x + t.frac * (y - x)).collect()
    }

    /// Subcurve over [a, b]; `a == b` yields a degenerate two-vertex curve.
    pub fn subcurve(&self, a: CurveParam, b: CurveParam) -> Result<Curve> {
        self.check_param(a)?;
        self.check_param(b)?;
        if a.key() > b.key() {
            return Err(Error::ParamOutOfRange("subcurve requires a <= b".into()));
        }
        let mut coords = Vec::new();
        coords.extend_from_slice(&self.eval_coords(a));
        let ka = a.key();
        let kb = b.key();
        for i in 0..self.len() {
            let k = i as f64;
            if k > ka && k < kb {
                coords.extend_from_slice(self.vertex(i));
            }
        }
        coords.extend_from_slice(&self.eval_coords(b));
        Curve::new(self.dim, coords)
    }

    /// Coordinate projection onto one axis (0-based), as a 1-dimensional curve.
    pub fn project(&self, axis: usize) -> Result<Curve> {
        if axis >= self.dim {
            return Err(Error::ParamOutOfRange(format!(
                "axis {axis} out of range for dimension {}",
                self.dim
            )));
        }
        let vals: Vec<f64> = self.vertices().map(|v| v[axis]).collect();
        Curve::new(1, vals)
    }

    /// Largest L-infinity distance between any two vertices.
    pub fn diameter(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in self.vertices() {
            for (c, x) in v.iter().enumerate() {
                lo[c] = lo[c].min(*x);
                hi[c] = hi[c].max(*x);
            }
        }
        lo.iter().zip(hi.iter()).map(|(a, b)| b - a).fold(0.0, f64::max)
    }
}

/// Canonical vertex sequence: drop consecutive duplicates, then merge any
/// vertex that lies on the segment between its neighbors with preserved
/// per-coordinate direction. Two curves trace the same path (Frechet
/// distance zero) iff their canonical sequences are identical.
fn canonical_vertices(c: &Curve) -> Vec<Vec<f64>> {
    let mut verts: Vec<Vec<f64>> = Vec::new();
    for v in c.vertices() {
        if verts.last().map(|l| l.as_slice() == v) != Some(true) {
            verts.push(v.to_vec());
        }
    }
    if verts.len() == 1 {
        verts.push(verts[0].clone());
        return verts;
    }
    let on_segment = |a: &[f64], b: &[f64], c: &[f64]| -> bool {
        // b on the closed segment a..c, exactly.
        let mut t: Option<f64> = None;
        let mut span = 0.0f64;
        for i in 0..a.len() {
            let d = (c[i] - a[i]).abs();
            if d > span {
                span = d;
                t = Some((b[i] - a[i]) / (c[i] - a[i]));
            }
        }
        let Some(t) = t else {
            return b == a; // a == c
        };
        if !(0.0..=1.0).contains(&t) {
            return false;
        }
        (0..a.len()).all(|i| a[i] + t * (c[i] - a[i]) == b[i])
    };
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in verts {
        out.push(v);
        while out.len() >= 3 {
            let n = out.len();
            if on_segment(&out[n - 3], &out[n - 2], &out[n - 1]) {
                out.remove(n - 2);
            } else {
                break;
            }
        }
    }
    out
}

/// True iff the continuous Frechet distance between the curves is exactly
/// zero, i.e. they are reparameterizations of the same path.
pub fn curves_equal(p: &Curve, q: &Curve) -> bool {
    if p.dim() != q.dim() {
        return false;
    }
    canonical_vertices(p) == canonical_vertices(q)
}

/// Free sub-interval of an edge `a..b` relative to a fixed point `p`:
/// the set of fractions s with ||p - (a + s (b - a))||_inf <= delta.
/// Convexity makes this a single interval (or empty).
pub(crate) fn free_on_edge(p: &[f64], a: &[f64], b: &[f64], delta: f64) -> Option<(f64, f64)> {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for c in 0..p.len() {
        let start = a[c] - p[c];
        let slope = b[c] - a[c];
        // |start + s*slope| <= delta
        if slope == 0.0 {
            if start.abs() > delta {
                return None;
            }
        } else {
            let mut l = (-delta - start) / slope;
            let mut h = (delta - start) / slope;
            if l > h {
                std::mem::swap(&mut l, &mut h);
            }
            lo = lo.max(l);
            hi = hi.min(h);
            if lo > hi {
                return None;
            }
        }
    }
    Some((lo, hi))
}
