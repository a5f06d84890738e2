//! Soundness fuzz for the approximate decider against the exact oracle.

use frechet::approx::{approx_decide_instrumented, DecisionConfig};
use frechet::curves::{Curve, CurveParam, Point};
use frechet::oracle::decide_frechet_exact;
use frechet::simplification::build_subcurve_tree;
use frechet::sparsity::build_passage_index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_curve(rng: &mut ChaCha8Rng, dim: usize, max_len: usize) -> Curve {
    let m = rng.gen_range(2..=max_len);
    let family = rng.gen_range(0..4);
    let mut pts: Vec<Point> = Vec::new();
    let mut x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
    for i in 0..m {
        pts.push(Point::new(x.clone()).unwrap());
        match family {
            0 => {
                for c in x.iter_mut() {
                    *c += rng.gen_range(-1.0..1.0);
                }
            }
            1 => {
                // zigzag
                let amp = 2.0;
                for (a, c) in x.iter_mut().enumerate() {
                    *c += if (i + a) % 2 == 0 { amp } else { -amp };
                }
            }
            2 => {
                // drifting walk
                for (a, c) in x.iter_mut().enumerate() {
                    *c += 0.5 + 0.1 * a as f64 + rng.gen_range(-0.4..0.4);
                }
            }
            _ => {
                for c in x.iter_mut() {
                    if rng.gen_bool(0.2) {
                        *c += rng.gen_range(-3.0..3.0);
                    }
                }
            }
        }
    }
    Curve::from_points(pts).unwrap()
}

fn perturbed(rng: &mut ChaCha8Rng, p: &Curve, noise: f64, max_len: usize) -> Curve {
    let n = rng.gen_range(2..=max_len);
    let mut pts: Vec<Point> = Vec::new();
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let mut v = p.eval(CurveParam::from_global(t, p.len())).unwrap().coords().to_vec();
        for c in v.iter_mut() {
            *c += rng.gen_range(-noise..noise.max(1e-12));
        }
        pts.push(Point::new(v).unwrap());
    }
    Curve::from_points(pts).unwrap()
}

#[test]
fn decision_soundness_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut yes_count = 0usize;
    let mut no_count = 0usize;
    let mut forced_yes = 0usize;
    for iter in 0..1200 {
        let dim = rng.gen_range(1..=3);
        let p = random_curve(&mut rng, dim, 24);
        let q = if rng.gen_bool(0.7) {
            let noise = rng.gen_range(0.0..2.0);
            perturbed(&mut rng, &p, noise, 24)
        } else {
            random_curve(&mut rng, dim, 24)
        };
        let n = q.len();
        let delta = rng.gen_range(0.05..3.0);
        let alpha_choices = [1.0, 2.0, (n as f64).sqrt(), n as f64];
        let alpha = alpha_choices[rng.gen_range(0..4)].clamp(1.0, n as f64);
        let cfg = DecisionConfig::new(delta, alpha, n).unwrap();
        let idx = build_passage_index(&q);
        let tree = build_subcurve_tree(&q);
        let (ans, stats) =
            approx_decide_instrumented(&p, &q, &cfg, &idx, &tree).unwrap_or_else(|e| {
                panic!("iter {iter}: decider error {e}\np={p:?}\nq={q:?}\ndelta={delta} alpha={alpha}")
            });
        assert!(
            stats.max_frontier <= cfg.threshold + 1,
            "iter {iter}: frontier {} exceeds {}",
            stats.max_frontier,
            cfg.threshold + 1
        );
        let oracle_le_delta = decide_frechet_exact(&p, &q, delta);
        if ans {
            yes_count += 1;
            assert!(
                decide_frechet_exact(&p, &q, cfg.c_total * delta),
                "iter {iter}: YES but d_F > c_total*delta\np={p:?}\nq={q:?}\ndelta={delta} alpha={alpha} c_total={}",
                cfg.c_total
            );
        } else {
            no_count += 1;
            assert!(
                !oracle_le_delta,
                "iter {iter}: NO but d_F <= delta\np={p:?}\nq={q:?}\ndelta={delta} alpha={alpha}"
            );
        }
        if oracle_le_delta {
            forced_yes += 1;
            assert!(ans, "iter {iter}: d_F <= delta must force YES");
        }
    }
    eprintln!("yes={yes_count} no={no_count} forced={forced_yes}");
    assert!(yes_count > 100 && no_count > 100 && forced_yes > 50, "fuzz mix too skewed");
}
