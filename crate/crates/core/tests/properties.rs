//! Property suites for the spec-level invariants: root identities on wide
//! parameter ranges, partition exactness, transform round trips, fit
//! recovery. Deterministic sweeps cover the pinned grids; proptest covers the
//! in-between.

use proptest::prelude::*;
use sigmaevo::*;

fn ms(m: f64) -> ModeStrength {
    ModeStrength::new(m).unwrap()
}

#[test]
fn vieta_residuals_over_twelve_decades() {
    // 10^4 log-spaced M in [1e-6, 1e6]
    let grid = oracle::log_grid(1e-6, 1e6, 10_000);
    for &m in &grid {
        let r = char_roots(ms(m)).unwrap();
        let sum = r.lambda1 + r.lambda2;
        let prod = r.lambda1 * r.lambda2;
        assert!(
            (sum.re + m).abs().max(sum.im.abs()) <= 1e-12 * (1.0 + m),
            "sum residual at M={m}"
        );
        assert!(
            ((prod.re / m - 1.0).abs()).max((prod.im / m).abs()) <= 1e-12,
            "product residual at M={m}"
        );
        assert!(r.lambda1.re <= 0.0 && r.lambda2.re <= 0.0);
    }
}

#[test]
fn small_frequency_asymptotics() {
    // For M = rho^(2 sigma) <= 0.04: Re lambda1 = -M/2 exactly and
    // Im lambda1 / rho^sigma within 1% of 1.
    for sigma in [1.25, 1.5, 2.0, 3.0] {
        for i in 1..=400 {
            let rho_max = 0.04_f64.powf(1.0 / (2.0 * sigma));
            let rho = rho_max * i as f64 / 400.0;
            let m = rho.powf(2.0 * sigma);
            let r = char_roots(ms(m)).unwrap();
            assert_eq!(r.lambda1.re, -m / 2.0);
            let ratio = r.lambda1.im / rho.powf(sigma);
            assert!((ratio - 1.0).abs() <= 0.01, "sigma={sigma}, rho={rho}: ratio {ratio}");
        }
    }
}

#[test]
fn large_frequency_asymptotics() {
    let grid = oracle::log_grid(100.0, 1e12, 500);
    for &m in &grid {
        let r = char_roots(ms(m)).unwrap();
        assert!((r.lambda1.re + 1.0).abs() <= 2.0 / m, "M={m}");
        assert!((r.lambda2.re / m + 1.0).abs() <= 2.0 / m, "M={m}");
    }
}

#[test]
fn partition_of_unity_dense() {
    for sigma in [1.25, 1.5, 2.0, 3.0] {
        for i in 0..10_000 {
            let rho = 6.0 * i as f64 / 9_999.0;
            let sum = chi(1, rho, sigma).unwrap()
                + chi(2, rho, sigma).unwrap()
                + chi(3, rho, sigma).unwrap();
            assert!((sum - 1.0).abs() <= 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_dt_relations_hold(
        log_m in -6.0_f64..6.0,
        t in 0.0_f64..20.0,
    ) {
        let m = 10f64.powf(log_m);
        let kv = kernel_values(ms(m), t).unwrap();
        let tol = 1e-10 * (-m.min(2.0) * t / 4.0).exp();
        prop_assert!((kv.dt_k0 + m * kv.k1).abs() <= tol);
        prop_assert!((kv.dt_k1 - (kv.k0 - m * kv.k1)).abs() <= tol);
    }

    #[test]
    fn split_symbols_recombine(
        m in 4.0001_f64..1e4,
        t in 0.0_f64..10.0,
    ) {
        let s = split_symbols(ms(m), t).unwrap();
        let kv = kernel_values(ms(m), t).unwrap();
        prop_assert!((s.s2_0 - s.s1_0 - kv.k0).abs() <= 1e-10 * (1.0 + kv.k0.abs()));
        prop_assert!((s.s1_1 - s.s2_1 - kv.k1).abs() <= 1e-10 * (1.0 + kv.k1.abs()));
    }

    #[test]
    fn transition_monotone_in_range(a in -0.5_f64..1.5, b in -0.5_f64..1.5) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (ta, tb) = (transition(lo), transition(hi));
        prop_assert!((0.0..=1.0).contains(&ta));
        prop_assert!(tb <= ta + 1e-15);
    }

    #[test]
    fn chi_bounded_everywhere(rho in 0.0_f64..10.0, sigma in 1.01_f64..5.0) {
        for k in 1..=3 {
            let v = chi(k, rho, sigma).unwrap();
            prop_assert!((-1e-15..=1.0 + 1e-15).contains(&v));
        }
    }

    #[test]
    fn theorem_rate_structure(n in 1usize..=3, a in 0.0_f64..8.0, sigma in 1.01_f64..4.0) {
        let r = theorem_rates(n, a, sigma).unwrap();
        prop_assert!((r.alpha_u1 - r.alpha_u0 - 0.5).abs() < 1e-14);
        prop_assert!((r.beta_u1 - r.beta_u0 - 0.5).abs() < 1e-14);
        let delta = 0.25;
        let shifted = theorem_rates(n, a + delta, sigma).unwrap();
        prop_assert!((shifted.alpha_u0 - (r.alpha_u0 - delta / (2.0 * sigma))).abs() < 1e-13);
    }

    #[test]
    fn power_fit_recovers_exponent(exp in -2.0_f64..3.0) {
        let times = oracle::log_grid(1.0, 50.0, 24);
        let values: Vec<f64> = times.iter().map(|t| 3.0 * (1.0 + t).powf(exp)).collect();
        let fit = fit_power_law(&times, &values, 0.5).unwrap();
        prop_assert!((fit.exponent - exp).abs() <= 1e-9);
    }

    #[test]
    fn exponential_fit_recovers_rate(c in 0.01_f64..2.0) {
        let times = oracle::log_grid(0.5, 20.0, 24);
        let values: Vec<f64> = times.iter().map(|t| 0.7 * (-c * t).exp()).collect();
        let fit = fit_exponential(&times, &values, 0.5).unwrap();
        prop_assert!((fit.exponent - c).abs() <= 1e-9);
    }
}

proptest! {
    // transform round trips are heavier; fewer cases
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn round_trip_on_random_bumps(
        c1 in -5.0_f64..5.0,
        c2 in -5.0_f64..5.0,
        w in 0.5_f64..2.0,
        amp in -3.0_f64..3.0,
    ) {
        let spec = GridSpec::new(1, 256, 25.0).unwrap();
        let f = RealField::from_fn(spec, |x| {
            (-(x[0] - c1).powi(2) / (2.0 * w * w)).exp()
                + amp * (-(x[0] - c2).powi(2)).exp()
        });
        let back = inverse(&forward(&f));
        let worst = f
            .samples
            .iter()
            .zip(&back.samples)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prop_assert!(worst <= 1e-10);
    }

    #[test]
    fn evolve_is_linear_in_data(alpha in -2.0_f64..2.0, t in 0.0_f64..10.0) {
        let spec = GridSpec::new(1, 128, 20.0).unwrap();
        let p = SigmaParams::new(1.7, 1, 0.0).unwrap();
        let u = RealField::from_fn(spec, |x| (-x[0] * x[0] / 2.0).exp());
        let scaled = RealField::new(
            spec,
            u.samples.iter().map(|v| alpha * v).collect(),
        )
        .unwrap();
        let base = evolve(&p, &u, &u, t, Band::All).unwrap();
        let big = evolve(&p, &scaled, &scaled, t, Band::All).unwrap();
        let scale = base.u.samples.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for i in 0..u.samples.len() {
            prop_assert!((big.u.samples[i] - alpha * base.u.samples[i]).abs()
                <= 1e-10 * scale.max(1.0) * (1.0 + alpha.abs()));
        }
    }
}
