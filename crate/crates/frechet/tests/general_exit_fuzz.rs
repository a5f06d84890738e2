//! Oracle cross-checks of the star transformation: exit-set dual
//! containment and the distance-preservation properties.

use frechet::curves::{linf_dist, Curve, CurveParam, Point};
use frechet::error::Error;
use frechet::oracle::{decide_frechet_exact, reachable_exit_intervals};
use frechet::signatures::{ell_delta_signature, footprint, Signature};
use frechet::straighten::{build_star_curves, c_exit, exit_set_general, StarOutcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_pair(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> (Curve, Curve) {
    let m = rng.gen_range(2..=max_len);
    let mut pts: Vec<Point> = Vec::new();
    let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let step = rng.gen_range(0.3..2.0);
    for _ in 0..m {
        pts.push(Point::new(x.clone()).unwrap());
        for c in x.iter_mut() {
            *c += rng.gen_range(-step..step);
        }
    }
    let p = Curve::from_points(pts).unwrap();
    let q = if rng.gen_bool(0.6) {
        // noisy copy, possibly resampled
        let n = rng.gen_range(2..=max_len);
        let mut pts: Vec<Point> = Vec::new();
        let noise: f64 = rng.gen_range(1e-6..1.0);
        for i in 0..n {
            let t = i as f64 / (n - 1) as f64;
            let mut v = p.eval(CurveParam::from_global(t, p.len())).unwrap().coords().to_vec();
            for c in v.iter_mut() {
                *c += rng.gen_range(-noise..noise);
            }
            pts.push(Point::new(v).unwrap());
        }
        Curve::from_points(pts).unwrap()
    } else {
        let n = rng.gen_range(2..=max_len);
        let mut pts: Vec<Point> = Vec::new();
        let mut y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        for _ in 0..n {
            pts.push(Point::new(y.clone()).unwrap());
            for c in y.iter_mut() {
                *c += rng.gen_range(-step..step);
            }
        }
        Curve::from_points(pts).unwrap()
    };
    (p, q)
}

fn sigs_for(p: &Curve, delta: f64) -> (Vec<Signature>, f64) {
    let mut sigs = Vec::new();
    let mut l = 2.0 * delta;
    for axis in 0..p.dim() {
        let s = ell_delta_signature(p, axis, delta).unwrap();
        l = l.max(footprint(&s, p).unwrap().size);
        sigs.push(s);
    }
    (sigs, l)
}

#[test]
fn general_exit_dual_containment_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut nonempty = 0usize;
    let mut iter = 0usize;
    while checked < 2500 {
        iter += 1;
        let dim = *[1usize, 1, 2, 3].get(rng.gen_range(0..4)).unwrap();
        let (p, q) = random_pair(&mut rng, dim, 16);
        let delta = rng.gen_range(0.1..2.5);
        let (sigs, l) = sigs_for(&p, delta);
        let exit = match exit_set_general(&p, &q, &sigs, delta, l) {
            Ok(e) => e,
            Err(Error::NotQuasiMonotone { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => panic!("iter {iter}: unexpected error {e}"),
        };
        checked += 1;
        let oracle_1 = reachable_exit_intervals(&p, &q, delta, 0.0);
        match exit.interval {
            None => assert!(
                oracle_1.is_empty(),
                "iter {iter}: empty exit but oracle reachable {oracle_1:?}\np={p:?}\nq={q:?}\ndelta={delta}"
            ),
            Some(iv) => {
                nonempty += 1;
                for o in &oracle_1 {
                    assert!(
                        iv.lo <= o.lo + 1e-9 && o.hi <= iv.hi + 1e-9,
                        "iter {iter}: oracle exit {o:?} outside [{}, {}]\np={p:?}\nq={q:?}\ndelta={delta}",
                        iv.lo,
                        iv.hi
                    );
                }
                let mult = c_exit(l, delta);
                assert!((mult - exit.multiplier).abs() < 1e-12);
                let oracle_c = reachable_exit_intervals(&p, &q, mult * delta, 0.0);
                let pn = Point::new(p.last().to_vec()).unwrap();
                for t in 0..=30 {
                    let y = iv.lo + (iv.hi - iv.lo) * t as f64 / 30.0;
                    let qy = q.eval(CurveParam::from_global(y, q.len())).unwrap();
                    if linf_dist(&pn, &qy).unwrap() <= delta {
                        assert!(
                            oracle_c.iter().any(|o| o.lo - 1e-9 <= y && y <= o.hi + 1e-9),
                            "iter {iter}: close exit y={y} not {mult}delta-reachable\np={p:?}\nq={q:?}\ndelta={delta}"
                        );
                    }
                }
            }
        }
    }
    assert!(nonempty > 150, "only {nonempty} nonempty instances");
    eprintln!("checked {checked}, skipped {skipped} (assembly), nonempty {nonempty}");
}

#[test]
fn distance_preservation_lemmas_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut fwd_checked = 0usize;
    let mut iter = 0usize;
    while fwd_checked < 400 && iter < 30000 {
        iter += 1;
        let (p, q) = random_pair(&mut rng, 1, 12);
        let delta = rng.gen_range(0.2..2.0);
        let (sigs, l) = sigs_for(&p, delta);
        let star = match build_star_curves(&p, &q, &sigs, delta) {
            Ok(StarOutcome::Pair(s)) => s,
            Ok(StarOutcome::EmptyExit) => continue,
            Err(e) => panic!("iter {iter}: {e}"),
        };
        // pick y with d_F(P, Q[0,y]) <= delta when one exists
        let exits = reachable_exit_intervals(&p, &q, delta, 0.0);
        // try a few prefix lengths
        for t in 1..=6 {
            let y = t as f64 / 6.0;
            let qy = q
                .subcurve(CurveParam::vertex(0, q.len()), CurveParam::from_global(y, q.len()))
                .unwrap();
            let du = decide_frechet_exact(&p, &qy, delta);
            if du {
                fwd_checked += 1;
                // forward: the star pair stays within delta
                let u = star.q_param_to_star(y);
                let qsy = star
                    .q_star
                    .subcurve(
                        CurveParam::vertex(0, star.q_star.len()),
                        CurveParam::from_global(u, star.q_star.len()),
                    )
                    .unwrap();
                assert!(
                    decide_frechet_exact(&star.p_star, &qsy, delta + 1e-9),
                    "iter {iter}: d_F(P,Q[0,{y}])<=delta but star pair exceeds delta\np={p:?}\nq={q:?}\ndelta={delta}"
                );
            }
            // backward: star within delta implies original within 4L
            let u = star.q_param_to_star(y);
            let qsy = star
                .q_star
                .subcurve(
                    CurveParam::vertex(0, star.q_star.len()),
                    CurveParam::from_global(u, star.q_star.len()),
                )
                .unwrap();
            if decide_frechet_exact(&star.p_star, &qsy, delta) {
                assert!(
                    decide_frechet_exact(&p, &qy, 4.0 * l + 1e-9),
                    "iter {iter}: star within delta but original exceeds 4L\np={p:?}\nq={q:?}\ndelta={delta} L={l}"
                );
            }
        }
        let _ = exits;
    }
    assert!(fwd_checked >= 400, "only {fwd_checked} forward cases found");
}
