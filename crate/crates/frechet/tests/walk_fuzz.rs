//! Oracle cross-check of the monotone exit-set walk on random
//! quasi-piecewise monotone instances.

use frechet::curves::{linf_dist, Curve, CurveParam, Point};
use frechet::monotone_exit::{exit_set_monotone_instrumented, monotone_pieces};
use frechet::oracle::reachable_exit_intervals;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random quasi-piecewise (>4 delta)-monotone curve: a few monotone runs
/// with per-axis directions, non-final runs displaced well beyond 4 delta.
fn random_quasi_monotone(rng: &mut ChaCha8Rng, dim: usize, delta: f64) -> Curve {
    let pieces = rng.gen_range(1..5);
    let mut pts: Vec<Vec<f64>> = vec![(0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect()];
    for piece in 0..pieces {
        let dirs: Vec<f64> = (0..dim).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
        let steps = rng.gen_range(1..6);
        let last_piece = piece + 1 == pieces;
        for _ in 0..steps {
            let prev = pts.last().unwrap().clone();
            let next: Vec<f64> =
                (0..dim).map(|c| prev[c] + dirs[c] * rng.gen_range(0.0..2.0)).collect();
            pts.push(next);
        }
        if !last_piece {
            // force the displacement of this run above 4 delta on one axis
            let start = pts[pts.len() - 1 - steps].clone();
            let end = pts.last_mut().unwrap();
            let axis = rng.gen_range(0..dim);
            let need = 4.0 * delta + rng.gen_range(0.2..2.0);
            if (end[axis] - start[axis]).abs() <= need {
                end[axis] = start[axis] + dirs[axis] * need;
            }
        }
    }
    let points: Vec<Point> = pts.into_iter().map(|c| Point::new(c).unwrap()).collect();
    Curve::from_points(points).unwrap()
}

fn random_curve(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> Curve {
    let m = rng.gen_range(2..=max_len);
    let mut pts: Vec<Point> = Vec::with_capacity(m);
    let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    for _ in 0..m {
        pts.push(Point::new(x.clone()).unwrap());
        for c in x.iter_mut() {
            *c += rng.gen_range(-1.5..1.5);
        }
    }
    Curve::from_points(pts).unwrap()
}

#[test]
fn walk_dual_containment_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nonempty = 0usize;
    for iter in 0..3000 {
        let dim = rng.gen_range(1..=3);
        let delta = rng.gen_range(0.2..1.5);
        let p = random_quasi_monotone(&mut rng, dim, delta);
        if monotone_pieces(&p, delta).is_err() {
            continue; // greedy merge across seams can shorten a run; skip
        }
        let q = if rng.gen_bool(0.5) {
            // near copy of p
            let pts: Vec<Point> = (0..p.len())
                .map(|i| {
                    let mut v = p.vertex(i).to_vec();
                    for c in v.iter_mut() {
                        *c += rng.gen_range(-delta..delta);
                    }
                    Point::new(v).unwrap()
                })
                .collect();
            Curve::from_points(pts).unwrap()
        } else {
            random_curve(&mut rng, dim, 20)
        };
        let (exit, stats) = exit_set_monotone_instrumented(&p, &q, delta).unwrap();
        assert!(
            stats.total() <= 3 * (p.len() + q.len()),
            "iter {iter}: walk touched {} vertices, bound {}",
            stats.total(),
            3 * (p.len() + q.len())
        );
        let oracle_1 = reachable_exit_intervals(&p, &q, delta, 0.0);
        match exit.interval {
            None => {
                assert!(
                    oracle_1.is_empty(),
                    "iter {iter}: walk says empty but oracle has reachable exits {oracle_1:?}"
                );
            }
            Some(iv) => {
                nonempty += 1;
                for o in &oracle_1 {
                    assert!(
                        iv.lo <= o.lo + 1e-9 && o.hi <= iv.hi + 1e-9,
                        "iter {iter}: oracle exit {o:?} not inside walk interval {iv:?}"
                    );
                }
                let oracle_3 = reachable_exit_intervals(&p, &q, 3.0 * delta, 0.0);
                let pn = Point::new(p.last().to_vec()).unwrap();
                for t in 0..=40 {
                    let y = iv.lo + (iv.hi - iv.lo) * t as f64 / 40.0;
                    let qy = q.eval(CurveParam::from_global(y, q.len())).unwrap();
                    if linf_dist(&pn, &qy).unwrap() <= delta {
                        assert!(
                            oracle_3.iter().any(|o| o.lo - 1e-9 <= y && y <= o.hi + 1e-9),
                            "iter {iter}: close point y={y} inside interval not 3delta-reachable"
                        );
                    }
                }
            }
        }
    }
    assert!(nonempty > 200, "too few nonempty instances ({nonempty}) for a meaningful fuzz");
}
