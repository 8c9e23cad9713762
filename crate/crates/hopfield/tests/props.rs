//! Property tests for the core invariants.

use proptest::prelude::*;

use hopfield::capacity::{
    capacity_base_c, capacity_base_c_lower, lambert_w, CapacityParams, LambertBranch,
};
use hopfield::headmode::{min_count_k, AttentionRow};
use hopfield::layers::{gaussian_head_attention, gaussian_head_init, GaussianInit};
use hopfield::linalg::{dot, norm, spectral_norm_sym, sym_eigenvalues};
use hopfield::{
    energy, gaussian_mixture_form, iterate, lse, lse_duality_gap, separation, softmax,
    softmax_jacobian, update, update_jacobian, InverseTemperature, IterationConfig,
    PatternMatrix, StateVector,
};

fn beta_strategy() -> impl Strategy<Value = f64> {
    0.25..2.0_f64
}

fn patterns_strategy(
    max_d: usize,
    max_n: usize,
) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| {
        proptest::collection::vec(proptest::collection::vec(-2.0..2.0_f64, d), n)
    })
}

fn hull_weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01..1.0_f64, n).prop_map(|mut w| {
        let s: f64 = w.iter().sum();
        for v in &mut w {
            *v /= s;
        }
        w
    })
}

proptest! {
    // energy is nonnegative for any finite inputs
    #[test]
    fn energy_nonnegative(cols in patterns_strategy(6, 8), b in beta_strategy(),
                          q in proptest::collection::vec(-3.0..3.0_f64, 1..=6)) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let xi = StateVector::new(q[..x.dim().min(q.len())].to_vec());
        prop_assume!(xi.is_ok());
        let xi = xi.unwrap();
        prop_assume!(xi.dim() == x.dim());
        let bt = InverseTemperature::new(b).unwrap();
        let e = energy(&x, &xi, bt).unwrap();
        prop_assert!(e >= -1e-12, "E = {e}");
    }

    // inside the pattern simplex the energy obeys both upper bounds
    #[test]
    fn energy_simplex_bounds(cols in patterns_strategy(6, 8), b in beta_strategy(), seed in 0u64..1000) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let n = x.len();
        let mut w: Vec<f64> = (0..n)
            .map(|i| {
                let s = seed.wrapping_add(i as u64).wrapping_mul(2654435761);
                (s % 1000) as f64 / 1000.0 + 0.001
            })
            .collect();
        let total: f64 = w.iter().sum();
        for v in &mut w {
            *v /= total;
        }
        let xi = StateVector::new(x.combine(&w)).unwrap();
        let bt = InverseTemperature::new(b).unwrap();
        let e = energy(&x, &xi, bt).unwrap();
        let m = x.max_norm();
        prop_assert!(e <= 2.0 * m * m + 1e-9);
        prop_assert!(e <= (n as f64).ln() / b + 0.5 * m * m + 1e-9);
    }

    // the energy never increases along the iteration
    #[test]
    fn cccp_descent(cols in patterns_strategy(6, 8), b in beta_strategy(),
                    w in hull_weights(8)) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let xi = StateVector::new(x.combine(&w[..x.len()].iter().map(|v| v / w[..x.len()].iter().sum::<f64>()).collect::<Vec<_>>())).unwrap();
        let bt = InverseTemperature::new(b).unwrap();
        let cfg = IterationConfig { max_updates: 30, tol: 0.0, record_energy: true };
        let res = iterate(&x, &xi, bt, &cfg).unwrap();
        let trace = res.energy_trace.unwrap();
        for pair in trace.windows(2) {
            prop_assert!(pair[1] <= pair[0] + 1e-12, "{} -> {}", pair[0], pair[1]);
        }
    }

    // the update lands in the hull, hence within the largest pattern norm
    #[test]
    fn hull_confinement(cols in patterns_strategy(6, 8), b in beta_strategy(),
                        q in proptest::collection::vec(-5.0..5.0_f64, 6)) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let xi = StateVector::new(q[..x.dim()].to_vec()).unwrap();
        let bt = InverseTemperature::new(b).unwrap();
        let next = update(&x, &xi, bt).unwrap();
        prop_assert!(norm(next.values()) <= x.max_norm() + 1e-12);
    }

    // lse is squeezed between the max and the max plus the entropy cap
    #[test]
    fn lse_bounds(xs in proptest::collection::vec(-50.0..50.0_f64, 1..=12),
                  b in beta_strategy()) {
        let bt = InverseTemperature::new(b).unwrap();
        let v = lse(bt, &xs).unwrap();
        let mx = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(v >= mx - 1e-12);
        prop_assert!(v <= mx + (xs.len() as f64).ln() / b + 1e-12);
    }

    // softmax is the gradient of lse
    #[test]
    fn softmax_is_lse_gradient(xs in proptest::collection::vec(-1.0..1.0_f64, 1..=6),
                               b in 0.25..1.5_f64) {
        let bt = InverseTemperature::new(b).unwrap();
        let p = softmax(bt, &xs).unwrap();
        let h = 1e-5;
        for i in 0..xs.len() {
            let mut plus = xs.clone();
            let mut minus = xs.clone();
            plus[i] += h;
            minus[i] -= h;
            let fd = (lse(bt, &plus).unwrap() - lse(bt, &minus).unwrap()) / (2.0 * h);
            let rel = (p[i] - fd).abs() / p[i].abs().max(1e-12);
            prop_assert!(rel <= 1e-6, "p[{i}]={} fd={}", p[i], fd);
        }
    }

    // softmax Jacobian: symmetric, PSD, annihilates ones, norm <= beta/2
    #[test]
    fn softmax_jacobian_properties(xs in proptest::collection::vec(-3.0..3.0_f64, 2..=8),
                                   b in beta_strategy()) {
        let bt = InverseTemperature::new(b).unwrap();
        let p = softmax(bt, &xs).unwrap();
        let j = softmax_jacobian(&p, bt).unwrap();
        let n = p.len();
        for i in 0..n {
            for k in 0..n {
                prop_assert!((j[(i, k)] - j[(k, i)]).abs() <= 1e-15);
            }
        }
        let ones = vec![1.0; n];
        let j_ones = j.matvec(&ones);
        for v in j_ones {
            prop_assert!(v.abs() <= 1e-12);
        }
        let eig = sym_eigenvalues(&j);
        prop_assert!(eig[0] >= -1e-10, "min eig {}", eig[0]);
        prop_assert!(spectral_norm_sym(&j) <= b / 2.0 + 1e-10);
    }

    // spectral norm of the update Jacobian is at most beta * m_max^2
    #[test]
    fn update_jacobian_bound(cols in patterns_strategy(6, 10), b in beta_strategy(),
                             q in proptest::collection::vec(-3.0..3.0_f64, 6)) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let xi = StateVector::new(q[..x.dim()].to_vec()).unwrap();
        let bt = InverseTemperature::new(b).unwrap();
        let j = update_jacobian(&x, &xi, bt).unwrap();
        let m_max = x.max_dist_to_mean();
        prop_assert!(spectral_norm_sym(&j) <= b * m_max * m_max + 1e-9);
    }

    // separation agrees with the O(N^2) brute force
    #[test]
    fn separation_brute_force(cols in patterns_strategy(5, 12)) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let rep = separation(&x);
        let n = cols.len();
        for i in 0..n {
            let mut best = f64::NEG_INFINITY;
            for j in 0..n {
                if i != j {
                    best = best.max(dot(&cols[i], &cols[j]));
                }
            }
            let expect = if best == f64::NEG_INFINITY {
                f64::INFINITY
            } else {
                dot(&cols[i], &cols[i]) - best
            };
            prop_assert_eq!(rep.delta[i], expect);
        }
    }

    // exp(-E) is proportional to the Gaussian mixture to the power 1/beta
    #[test]
    fn mixture_proportionality(cols in patterns_strategy(5, 8), b in beta_strategy(),
                               seed in 0u64..100) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let bt = InverseTemperature::new(b).unwrap();
        let mut reference: Option<f64> = None;
        let mut s = seed.wrapping_add(17);
        for _ in 0..20 {
            let q: Vec<f64> = (0..x.dim())
                .map(|_| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((s >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0
                })
                .collect();
            let xi = StateVector::new(q).unwrap();
            let e = energy(&x, &xi, bt).unwrap();
            let mix = gaussian_mixture_form(&x, &xi, bt).unwrap();
            let ratio = (-e).exp() / mix.powf(1.0 / b);
            match reference {
                None => reference = Some(ratio),
                Some(r) => prop_assert!((ratio - r).abs() <= 1e-8 * r.abs(),
                                        "ratio {ratio} vs {r}"),
            }
        }
    }

    // identical inputs produce bit-identical outputs
    #[test]
    fn update_is_deterministic(cols in patterns_strategy(6, 8), b in beta_strategy(),
                               q in proptest::collection::vec(-3.0..3.0_f64, 6)) {
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let xi = StateVector::new(q[..x.dim()].to_vec()).unwrap();
        let bt = InverseTemperature::new(b).unwrap();
        let a = update(&x, &xi, bt).unwrap();
        let c = update(&x, &xi, bt).unwrap();
        prop_assert_eq!(a.values(), c.values());
        let e1 = energy(&x, &xi, bt).unwrap();
        let e2 = energy(&x, &xi, bt).unwrap();
        prop_assert!(e1.to_bits() == e2.to_bits());
    }

    // duality gap is nonnegative for any simplex point
    #[test]
    fn duality_gap_nonnegative(xs in proptest::collection::vec(-2.0..2.0_f64, 2..=6),
                               b in beta_strategy(),
                               raw in proptest::collection::vec(0.01..1.0_f64, 6)) {
        let bt = InverseTemperature::new(b).unwrap();
        let mut z = raw[..xs.len()].to_vec();
        let s: f64 = z.iter().sum();
        for v in &mut z {
            *v /= s;
        }
        let gap = lse_duality_gap(bt, &xs, &z).unwrap();
        prop_assert!(gap >= -1e-12, "gap = {gap}");
    }

    // Lambert W inverts y e^y on both branches
    #[test]
    fn lambert_inverse_property(u in -8.0..8.0_f64) {
        let x = 10.0_f64.powf(u);
        let w = lambert_w(LambertBranch::Upper, x).unwrap();
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.max(1.0));
        let xn = -(1.0 / std::f64::consts::E) * 10.0_f64.powf(-(u + 8.0) / 2.0);
        let w = lambert_w(LambertBranch::Lower, xn).unwrap();
        prop_assert!((w * w.exp() - xn).abs() <= 1e-12);
    }

    // the closed-form capacity lower bound never beats the exact value
    #[test]
    fn capacity_lower_below_exact(b in 0.2..4.0_f64, k in 0.3..5.0_f64,
                                  d in 3u32..120, p in 0.0005..1.0_f64) {
        let params = CapacityParams::new(b, k, d, p).unwrap();
        let exact = capacity_base_c(&params).unwrap().c_hat;
        let lower = capacity_base_c_lower(&params).unwrap();
        prop_assert!(lower <= exact + 1e-9, "lower {lower} > exact {exact}");
    }

    // minimal count is monotone in the mass threshold
    #[test]
    fn min_count_monotone(raw in proptest::collection::vec(0.001..1.0_f64, 2..=32)) {
        let s: f64 = raw.iter().sum();
        let row = AttentionRow::new(raw.iter().map(|v| v / s).collect()).unwrap();
        let mut last = 0;
        for m in [0.05, 0.25, 0.5, 0.75, 0.9, 1.0] {
            let k = min_count_k(&row, m).unwrap();
            prop_assert!(k >= last);
            last = k;
        }
        // k == 1 exactly when the max entry reaches the mass
        let max = row.weights().iter().cloned().fold(0.0_f64, f64::max);
        let k9 = min_count_k(&row, 0.9).unwrap();
        prop_assert_eq!(k9 == 1, max >= 0.9 - 1e-12);
    }

    // Gaussian head rows live on the simplex for any valid parameters
    #[test]
    fn gaussian_head_rows_stochastic(n in 2usize..64, seed in 0u64..500) {
        let params = gaussian_head_init(n, GaussianInit::Random { seed }).unwrap();
        let a = gaussian_head_attention(&params, n).unwrap();
        for i in 0..n {
            let sum: f64 = a.row(i).iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
            prop_assert!(a.row(i).iter().all(|&v| v > 0.0));
        }
    }
}

// Non-proptest spot checks that complement the properties above.

#[test]
fn energy_bound_brute_force_sweep() {
    // deterministic sweep of random instances in the simplex
    let mut seed = 2024_u64;
    let mut unit = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..1000 {
        let d = 8;
        let n = 16;
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| unit() * 2.0 - 1.0).collect())
            .collect();
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let mut w: Vec<f64> = (0..n).map(|_| unit() + 1e-3).collect();
        let s: f64 = w.iter().sum();
        for v in &mut w {
            *v /= s;
        }
        let xi = StateVector::new(x.combine(&w)).unwrap();
        let bt = InverseTemperature::new(1.0).unwrap();
        let e = energy(&x, &xi, bt).unwrap();
        let m = x.max_norm();
        assert!((0.0..=2.0 * m * m + 1e-9).contains(&e), "E = {e}");
    }
}

#[test]
fn update_jacobian_matches_m_max_bound_10_patterns() {
    let mut seed = 7_u64;
    let mut unit = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..50 {
        let cols: Vec<Vec<f64>> = (0..10)
            .map(|_| (0..6).map(|_| unit() * 2.0 - 1.0).collect())
            .collect();
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let xi = StateVector::new((0..6).map(|_| unit() * 2.0 - 1.0).collect()).unwrap();
        let bt = InverseTemperature::new(1.0).unwrap();
        let j = update_jacobian(&x, &xi, bt).unwrap();
        let m_max = x.max_dist_to_mean();
        assert!(spectral_norm_sym(&j) <= m_max * m_max + 1e-9);
    }
}

#[test]
fn one_update_retrieval_error_within_bound() {
    // well separated sphere patterns; empirical error vs analytic bound
    let d = 20;
    let n = 50;
    let m = 3.0 * ((d - 1) as f64).sqrt();
    let mut seed = 99_u64;
    let mut unit = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut gauss = move || {
        // Box-Muller from the raw stream
        let u1: f64 = unit().max(1e-12);
        let u2: f64 = unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    for _ in 0..100 {
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let v: Vec<f64> = (0..d).map(|_| gauss()).collect();
                let nv = norm(&v);
                v.into_iter().map(|e| e / nv * m).collect()
            })
            .collect();
        let x = PatternMatrix::from_columns(&cols).unwrap();
        let bt = InverseTemperature::new(1.0).unwrap();
        let i = 0;
        // query within 1/(beta N M) of the pattern
        let radius = 1.0 / (n as f64 * m);
        let dir: Vec<f64> = (0..d).map(|_| gauss()).collect();
        let dn = norm(&dir);
        let q: Vec<f64> = cols[i]
            .iter()
            .zip(&dir)
            .map(|(c, u)| c + u / dn * radius * 0.9)
            .collect();
        let xi = StateVector::new(q).unwrap();
        let err = hopfield::dynamics::one_update_error(&x, &xi, bt, &cols[i]).unwrap();
        let bound = hopfield::retrieval_error_bound(&x, i, bt).unwrap();
        assert!(err <= bound.max(1e-12), "err {err} vs bound {bound}");
        assert!(err <= 1e-6);
    }
}

#[test]
fn one_update_contraction_within_jacobian_bound() {
    // measured contraction toward the fixed point vs the bound at the
    // caller-supplied radius
    let d = 16;
    let n = 8;
    let m = 3.0 * ((d - 1) as f64).sqrt();
    let mut seed = 5_u64;
    let mut unit = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut gauss = move || {
        let u1: f64 = unit().max(1e-12);
        let u2: f64 = unit();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    let bt = InverseTemperature::new(1.0).unwrap();
    for _ in 0..20 {
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let v: Vec<f64> = (0..d).map(|_| gauss()).collect();
                let nv = norm(&v);
                v.into_iter().map(|e| e / nv * m).collect()
            })
            .collect();
        let x = PatternMatrix::from_columns(&cols).unwrap();
        // locate the fixed point near pattern 0 to high precision
        let cfg = IterationConfig { max_updates: 200, tol: 1e-14, record_energy: false };
        let star = iterate(&x, &StateVector::new(cols[0].clone()).unwrap(), bt, &cfg)
            .unwrap()
            .fixed_point;
        let radius = 1.0 / (n as f64 * m);
        let dir: Vec<f64> = (0..d).map(|_| gauss()).collect();
        let dn = norm(&dir);
        let q: Vec<f64> = cols[0]
            .iter()
            .zip(&dir)
            .map(|(c, u)| c + u / dn * radius)
            .collect();
        let xi = StateVector::new(q.clone()).unwrap();
        let dist_q: f64 = norm(
            &q.iter()
                .zip(star.values())
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        if dist_q < 1e-13 {
            continue; // query started numerically at the fixed point
        }
        let next = update(&x, &xi, bt).unwrap();
        let dist_next: f64 = norm(
            &next
                .values()
                .iter()
                .zip(star.values())
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        let star_dist: f64 = norm(
            &star
                .values()
                .iter()
                .zip(&cols[0])
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        let r = radius.max(star_dist);
        let bound = hopfield::one_update_jacobian_bound(&x, 0, r, bt).unwrap();
        assert!(
            dist_next <= bound * dist_q + 1e-15,
            "contraction {dist_next} vs bound {} * {dist_q}",
            bound
        );
    }
}

#[test]
fn lambert_identity_dense_grid() {
    // W0(x ln x) = ln x for x >= 1/e
    for i in 0..2000 {
        let x = (1.0 / std::f64::consts::E) * (1.0 + i as f64 * 0.05);
        let w = lambert_w(LambertBranch::Upper, x * x.ln()).unwrap();
        let expect = x.ln();
        assert!(
            (w - expect).abs() <= 1e-10 * expect.abs().max(1.0),
            "x = {x}, w = {w}, ln x = {expect}"
        );
    }
}

#[test]
fn classification_permutation_invariance_exhaustive() {
    // permuting row entries cannot change k
    let base = vec![0.55, 0.25, 0.15, 0.05];
    let perms = [
        [0usize, 1, 2, 3],
        [3, 2, 1, 0],
        [1, 3, 0, 2],
        [2, 0, 3, 1],
    ];
    let k0 = min_count_k(&AttentionRow::new(base.clone()).unwrap(), 0.9).unwrap();
    for perm in perms {
        let permuted: Vec<f64> = perm.iter().map(|&i| base[i]).collect();
        let k = min_count_k(&AttentionRow::new(permuted).unwrap(), 0.9).unwrap();
        assert_eq!(k, k0);
    }
}

#[test]
fn iterate_respects_max_updates_and_reports() {
    // two far-apart clusters make a slow crawl with beta small
    let cols = vec![vec![1.0, 0.0], vec![-1.0, 0.001]];
    let x = PatternMatrix::from_columns(&cols).unwrap();
    let bt = InverseTemperature::new(0.1).unwrap();
    let cfg = IterationConfig { max_updates: 1, tol: 0.0, record_energy: false };
    let res = iterate(&x, &StateVector::new(vec![0.9, 0.0]).unwrap(), bt, &cfg).unwrap();
    assert_eq!(res.updates_used, 1);
    assert!(!res.converged);
    let s: f64 = res.final_softmax.iter().sum();
    assert!((s - 1.0).abs() <= 1e-12);
}
