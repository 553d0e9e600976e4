//! Fast invariant suite behind the `selftest` subcommand.
//!
//! A pared-down version of the test-suite oracles, small enough to run in a
//! couple of seconds on any install. Every check prints one `ok` / `FAIL`
//! line; the command exits non-zero if any check fails.

use netdecomp_core::{
    build_meganodes, bruteforce_mincut, compute_beta, cut, edge_weights, laplacian,
    lift_partition, mway_partition, rate_lower_bound_value, rc_netdecomp, rng_from,
    smallest_eigenvectors, sumcut, sumcut_budget, user_centric, GainMatrix, Mat, WeightMatrix,
};
use rand::Rng;

fn random_weights(rng: &mut impl Rng, users: usize, beams: usize) -> (WeightMatrix, GainMatrix) {
    let rows: Vec<Vec<f64>> = (0..users)
        .map(|_| (0..beams).map(|_| rng.random_range(1e-3..1.0)).collect())
        .collect();
    let gains = GainMatrix {
        values: Mat::from_rows(&rows),
        beam_owner: (0..beams).collect(),
    };
    let weights = edge_weights(&gains).unwrap();
    (weights, gains)
}

fn check_cut_equivalence() -> bool {
    let mut rng = rng_from(1);
    for _ in 0..20 {
        let users = rng.random_range(1..=10);
        let beams = rng.random_range(1..=7);
        let (w, _) = random_weights(&mut rng, users, beams);
        let mg = build_meganodes(&w);
        let n = mg.len();
        let m = rng.random_range(1..=n);
        let assignment: Vec<usize> = (0..n).map(|i| i % m).collect();
        let p = lift_partition(&mg, &assignment, m).unwrap();
        for label in 0..m {
            let on_g = cut(&p, label, &w).unwrap();
            let on_mg = mg.cut_of(&assignment, label);
            if (on_g - on_mg).abs() > 1e-12 * on_g.max(1.0) {
                return false;
            }
        }
    }
    true
}

fn check_sumcut_identity() -> bool {
    let mut rng = rng_from(2);
    for _ in 0..20 {
        let (w, _) = random_weights(&mut rng, 6, 5);
        let mg = build_meganodes(&w);
        let assignment: Vec<usize> = (0..5).map(|i| i % 2).collect();
        let p = lift_partition(&mg, &assignment, 2).unwrap();
        let by_parts: f64 = (0..2).map(|m| cut(&p, m, &w).unwrap()).sum();
        let closed = sumcut(&p, &w);
        if (by_parts - closed).abs() > 1e-12 * closed.max(1.0) {
            return false;
        }
    }
    true
}

fn check_mincut_monotonicity() -> bool {
    let mut rng = rng_from(3);
    for _ in 0..10 {
        let (w, _) = random_weights(&mut rng, 5, 6);
        let mg = build_meganodes(&w);
        let mut last = -1.0;
        for m in 1..=6 {
            let p = bruteforce_mincut(&mg, m).unwrap();
            let sc = sumcut(&p, &w);
            if sc < last - 1e-12 {
                return false;
            }
            last = sc;
        }
    }
    true
}

fn check_budget_bound_inverse() -> bool {
    let mut rng = rng_from(4);
    for _ in 0..10 {
        let k = rng.random_range(1..100usize);
        let r_th = rng.random_range(0.1..8.0);
        let beta = rng.random_range(0.0..2.0);
        let budget = sumcut_budget(k, r_th, beta);
        if budget < 0.0 {
            continue;
        }
        let bound = rate_lower_bound_value(k, beta, budget);
        if (bound - r_th).abs() > 1e-9 * r_th.max(1.0) {
            return false;
        }
    }
    true
}

fn check_decomposition_determinism() -> bool {
    let mut rng = rng_from(5);
    let (w, g) = random_weights(&mut rng, 8, 6);
    let a = rc_netdecomp(&w, &g, 1.0, 1.0, 1.0, 9).unwrap();
    let b = rc_netdecomp(&w, &g, 1.0, 1.0, 1.0, 9).unwrap();
    a == b
}

fn check_eigen_residuals() -> bool {
    let mut rng = rng_from(6);
    let (w, _) = random_weights(&mut rng, 8, 7);
    let l = laplacian(&build_meganodes(&w));
    let emb = smallest_eigenvectors(&l, 7).unwrap();
    let scale = l.frobenius_norm().max(1.0);
    for (c, &lambda) in emb.eigenvalues.iter().enumerate() {
        let v: Vec<f64> = (0..7).map(|r| emb.y[(r, c)]).collect();
        let lv = l.mul_vec(&v);
        let residual: f64 = lv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual > 1e-8 * scale {
            return false;
        }
    }
    true
}

fn check_spectral_not_below_oracle() -> bool {
    let mut rng = rng_from(7);
    for _ in 0..10 {
        let (w, _) = random_weights(&mut rng, 6, 6);
        let mg = build_meganodes(&w);
        let m = rng.random_range(1..=6);
        let exact = sumcut(&bruteforce_mincut(&mg, m).unwrap(), &w);
        let approx = sumcut(&mway_partition(&mg, m, rng.random()).unwrap(), &w);
        if exact > approx + 1e-12 {
            return false;
        }
    }
    true
}

fn check_user_centric_anchor() -> bool {
    let mut rng = rng_from(8);
    for _ in 0..10 {
        let (w, g) = random_weights(&mut rng, 7, 5);
        let uc = user_centric(&w, 1).unwrap();
        let rc = rc_netdecomp(&w, &g, 0.0, 1.0, 1.0, rng.random()).unwrap();
        if uc != rc.partition {
            return false;
        }
    }
    true
}

fn check_beta_linearity() -> bool {
    let mut rng = rng_from(9);
    let (_, g) = random_weights(&mut rng, 6, 4);
    let b1 = compute_beta(&g, 1.0, 1.0).unwrap();
    let b2 = compute_beta(&g, 2.0, 1.0).unwrap();
    (b1 / 2.0 - b2).abs() <= 1e-12 * b1.max(1.0)
}

type Check = (&'static str, fn() -> bool);

/// Run every check; returns true when all pass.
pub fn run() -> bool {
    let checks: [Check; 9] = [
        ("cut equivalence between bipartite and meganode graphs", check_cut_equivalence),
        ("sumcut identity", check_sumcut_identity),
        ("mincut monotone in subnetwork count", check_mincut_monotonicity),
        ("budget/bound algebraic inverse", check_budget_bound_inverse),
        ("decomposition determinism", check_decomposition_determinism),
        ("eigensolver residuals", check_eigen_residuals),
        ("spectral sumcut not below brute-force optimum", check_spectral_not_below_oracle),
        ("user-centric S=1 equals zero-rate decomposition", check_user_centric_anchor),
        ("beta linear in transmit power", check_beta_linearity),
    ];
    let mut all = true;
    for (name, check) in checks {
        let passed = check();
        all &= passed;
        println!("{} {name}", if passed { "ok  " } else { "FAIL" });
    }
    all
}
