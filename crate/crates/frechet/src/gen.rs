//! Seeded synthetic curve families for benchmarks and tests.

use crate::curves::Curve;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Segment,
    Zigzag,
    Walk,
    Spiral,
    Cpacked,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "segment" => Ok(Family::Segment),
            "zigzag" => Ok(Family::Zigzag),
            "walk" => Ok(Family::Walk),
            "spiral" => Ok(Family::Spiral),
            "cpacked" => Ok(Family::Cpacked),
            _ => Err(Error::InvalidArgument(format!(
                "unknown family {s:?} (segment|zigzag|walk|spiral|cpacked)"
            ))),
        }
    }
}

pub const FAMILIES: [Family; 5] =
    [Family::Segment, Family::Zigzag, Family::Walk, Family::Spiral, Family::Cpacked];

/// Deterministic curve of a given family: same (family, n, dim, seed) gives
/// byte-identical output.
pub fn generate(family: Family, n: usize, dim: usize, seed: u64) -> Result<Curve> {
    if n < 2 {
        return Err(Error::InvalidArgument("curves need at least 2 vertices".into()));
    }
    if dim < 1 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (family as u64) << 56 ^ (dim as u64) << 48);
    let mut coords: Vec<f64> = Vec::with_capacity(n * dim);
    match family {
        Family::Segment => {
            let a: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let b: Vec<f64> = (0..dim).map(|_| rng.gen_range(-10.0..10.0)).collect();
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                for c in 0..dim {
                    coords.push(a[c] + t * (b[c] - a[c]));
                }
            }
        }
        Family::Zigzag => {
            let amp: Vec<f64> = (0..dim).map(|_| rng.gen_range(1.0..6.0)).collect();
            let drift: Vec<f64> = (0..dim).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let phase: Vec<usize> = (0..dim).map(|_| rng.gen_range(0..2)).collect();
            for i in 0..n {
                for c in 0..dim {
                    let z = if (i + phase[c]) % 2 == 0 { amp[c] } else { -amp[c] };
                    coords.push(z + drift[c] * i as f64);
                }
            }
        }
        Family::Walk => {
            let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect();
            for _ in 0..n {
                coords.extend_from_slice(&x);
                for c in x.iter_mut() {
                    *c += rng.gen_range(-1.0..1.0);
                }
            }
        }
        Family::Spiral => {
            let turns = rng.gen_range(2.0..6.0);
            let growth = rng.gen_range(0.2..1.0);
            for i in 0..n {
                let t = i as f64 / (n - 1) as f64;
                let angle = turns * std::f64::consts::TAU * t;
                let r = growth * (1.0 + 9.0 * t);
                match dim {
                    1 => coords.push(r * angle.sin()),
                    2 => {
                        coords.push(r * angle.cos());
                        coords.push(r * angle.sin());
                    }
                    _ => {
                        coords.push(r * angle.cos());
                        coords.push(r * angle.sin());
                        coords.push(10.0 * t);
                        for _ in 3..dim {
                            coords.push(0.0);
                        }
                    }
                }
            }
        }
        Family::Cpacked => {
            // tour between a few hubs with short local excursions: total
            // length inside any ball stays proportional to its radius
            let hubs: Vec<Vec<f64>> = (0..rng.gen_range(2..5))
                .map(|_| (0..dim).map(|_| rng.gen_range(-20.0..20.0)).collect())
                .collect();
            let mut hub = 0usize;
            let mut x = hubs[0].clone();
            for i in 0..n {
                coords.extend_from_slice(&x);
                if i % 8 == 7 {
                    hub = (hub + 1) % hubs.len();
                    x = hubs[hub].clone();
                } else {
                    for (c, xc) in x.iter_mut().enumerate() {
                        *xc = hubs[hub][c] + rng.gen_range(-1.5..1.5);
                    }
                }
            }
        }
    }
    Curve::new(dim, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        for family in FAMILIES {
            let a = generate(family, 33, 2, 42).unwrap();
            let b = generate(family, 33, 2, 42).unwrap();
            assert_eq!(a, b);
            let c = generate(family, 33, 2, 43).unwrap();
            assert!(a != c || family == Family::Segment && false);
        }
    }

    #[test]
    fn sizes_and_dims() {
        for family in FAMILIES {
            for dim in 1..=3 {
                let c = generate(family, 17, dim, 7).unwrap();
                assert_eq!(c.len(), 17);
                assert_eq!(c.dim(), dim);
            }
        }
        assert!(generate(Family::Walk, 1, 2, 7).is_err());
    }
}
