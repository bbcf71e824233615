use infoblotto_core::blotto2::{self, BlottoParams};
use infoblotto_core::lotto3::{self, LottoParams};
use infoblotto_core::oracle;
use infoblotto_core::payoff::{battlefield_payoff, ex_ante_payoff_informed, expected_budget, interim_payoff_informed};
use infoblotto_core::{Budgets, GameParams, PiecewiseCdf, Prior, StrategyProfile, ValuationMatrix};
use proptest::prelude::*;

/// Random marginal: up to three atoms and up to two disjoint segments.
fn marginal() -> impl Strategy<Value = PiecewiseCdf> {
    (
        prop::collection::vec((0.0f64..10.0, 0.1f64..1.0), 0..=3),
        prop::collection::vec((0.1f64..2.0, 0.1f64..1.0), 0..=2),
        0.0f64..5.0,
    )
        .prop_filter_map("needs some mass", |(atoms, segs, start)| {
            let total: f64 = atoms.iter().map(|a| a.1).sum::<f64>() + segs.iter().map(|s| s.1).sum::<f64>();
            if total <= 0.0 {
                return None;
            }
            let mut left = start;
            let mut segments = Vec::new();
            for (width, mass) in segs {
                let w = mass / total;
                segments.push((left, left + width, w / width));
                left += width + 0.5;
            }
            // atoms placed away from segment interiors
            let atoms: Vec<(f64, f64)> = atoms
                .into_iter()
                .map(|(x, m)| {
                    let inside = segments.iter().any(|s| x > s.0 && x < s.1);
                    (if inside { left + x } else { x }, m / total)
                })
                .collect();
            PiecewiseCdf::from_parts(&atoms, &segments).ok()
        })
}

proptest! {
    #[test]
    fn payoff_is_antisymmetric(a in marginal(), b in marginal()) {
        let ab = battlefield_payoff(&a, &b);
        let ba = battlefield_payoff(&b, &a);
        prop_assert!((ab + ba).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&ab));
    }

    #[test]
    fn payoff_against_itself_is_zero(a in marginal()) {
        prop_assert!(battlefield_payoff(&a, &a).abs() < 1e-12);
    }

    #[test]
    fn expected_budget_is_additive(a in marginal(), b in marginal(), c in marginal()) {
        let whole = expected_budget(&[a.clone(), b.clone(), c.clone()]);
        let parts = expected_budget(&[a]) + expected_budget(&[b, c]);
        prop_assert!((whole - parts).abs() < 1e-12 * (1.0 + whole.abs()));
    }

    #[test]
    fn expected_budget_scales(a in marginal(), b in marginal(), s in 0.01f64..100.0) {
        let base = expected_budget(&[a.clone(), b.clone()]);
        let scaled = expected_budget(&[a.scale(s).unwrap(), b.scale(s).unwrap()]);
        prop_assert!((scaled - s * base).abs() < 1e-10 * (1.0 + s * base));
    }

    #[test]
    fn payoff_invariant_under_common_scaling(a in marginal(), b in marginal(), s in 0.01f64..100.0) {
        let base = battlefield_payoff(&a, &b);
        let scaled = battlefield_payoff(&a.scale(s).unwrap(), &b.scale(s).unwrap());
        prop_assert!((scaled - base).abs() < 1e-9);
    }

    #[test]
    fn identical_strategies_give_zero(a in marginal(), b in marginal(), alpha in 0.05f64..0.95) {
        let beta = alpha * 0.5;
        let game = GameParams::new(
            ValuationMatrix::cyclic(alpha, beta).unwrap(),
            Prior::uniform(3),
            Budgets::new(1.0, 1.0).unwrap(),
        ).unwrap();
        let row = vec![a.clone(), b.clone(), a];
        let profile = StrategyProfile::new(vec![row.clone(); 3], row).unwrap();
        prop_assert!(ex_ante_payoff_informed(&profile, &game).unwrap().abs() < 1e-12);
    }

    #[test]
    fn quantile_inverts_cdf(a in marginal(), u in 0.0f64..1.0) {
        let x = a.quantile(u);
        prop_assert!(a.cdf(x) >= u - 1e-9);
        prop_assert!(a.cdf_below(x) <= u + 1e-9);
    }

    #[test]
    fn blotto_value_does_not_depend_on_offset(low in 0.05f64..0.95, t in 0.01f64..0.99, gamma in 0.67f64..0.74) {
        let params = BlottoParams::from_ratio(1.0, low, gamma, 1.0).unwrap();
        let index = params.index();
        prop_assume!(index.is_odd());
        let e = index.remainder + t * (index.shortfall - index.remainder);
        let a = blotto2::build_equilibrium(&params, Some(e)).unwrap();
        let b = blotto2::build_equilibrium(&params, None).unwrap();
        let game = params.game();
        let va = ex_ante_payoff_informed(&a.profile, &game).unwrap();
        let vb = ex_ante_payoff_informed(&b.profile, &game).unwrap();
        prop_assert!((va - vb).abs() < 1e-12);
        prop_assert!((a.value_from_uninformed_norm() - a.value_from_informed_norm()).abs() < 1e-12);
        prop_assert!((a.value_from_uninformed_norm() - a.value()).abs() < 1e-12);
    }

    #[test]
    fn lotto_types_are_interchangeable(alpha in 0.05f64..0.95, r in 0.05f64..1.0, gamma in 0.02f64..1.0) {
        let beta = alpha * r;
        let params = LottoParams::new(alpha, beta, gamma, 1.0).unwrap();
        let s = lotto3::build_equilibrium(&params).unwrap();
        let profile = s.profile();
        let game = params.game();
        let first = interim_payoff_informed(&profile, &game, 0).unwrap();
        for ty in 1..3 {
            prop_assert!((interim_payoff_informed(&profile, &game, ty).unwrap() - first).abs() < 1e-9);
        }
        prop_assert!((first - s.value()).abs() < 1e-9);
    }
}

#[test]
fn monte_carlo_matches_exact_for_uniforms() {
    let game = GameParams::new(
        ValuationMatrix::new(&[vec![1.0]]).unwrap(),
        Prior::uniform(1),
        Budgets::new(2.0, 2.0).unwrap(),
    )
    .unwrap();
    let profile = StrategyProfile::new(
        vec![vec![PiecewiseCdf::uniform(0.0, 2.0).unwrap()]],
        vec![PiecewiseCdf::uniform(0.0, 1.0).unwrap()],
    )
    .unwrap();
    let exact = ex_ante_payoff_informed(&profile, &game).unwrap();
    assert!((exact - 0.5).abs() < 1e-15);
    let mc = oracle::monte_carlo_value(&profile, &game, 1_000_000, 11).unwrap();
    assert!((mc.mean - exact).abs() <= 4.0 * mc.std_error, "{mc:?}");
}

#[test]
fn monte_carlo_is_deterministic_and_seed_sensitive() {
    let params = LottoParams::new(0.5, 0.5, 0.2, 1.0).unwrap();
    let s = lotto3::build_equilibrium(&params).unwrap();
    let profile = s.profile();
    let game = params.game();
    let a = oracle::monte_carlo_value(&profile, &game, 100_000, 3).unwrap();
    let b = oracle::monte_carlo_value(&profile, &game, 100_000, 3).unwrap();
    let c = oracle::monte_carlo_value(&profile, &game, 100_000, 4).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.mean, c.mean);
}

#[test]
fn lotto_certificates_pass_on_a_grid_per_regime() {
    let options = oracle::CertifyOptions {
        grid_points: 2_000,
        samples: 20_000,
        ..Default::default()
    };
    for (lo, hi) in [(0.0, 1.0 / 3.0), (1.0 / 3.0, 2.0 / 3.0), (2.0 / 3.0, 1.0)] {
        for i in 1..=10 {
            for k in 1..=10 {
                let alpha = i as f64 / 11.0;
                let gamma = lo + (hi - lo) * k as f64 / 10.0;
                let params = LottoParams::new(alpha, alpha * 0.6, gamma, 1.0).unwrap();
                let s = lotto3::build_equilibrium(&params).unwrap();
                let cert = oracle::certify(&s.profile(), &oracle::Instance::Lotto(params), &options).unwrap();
                assert!(cert.max_gap() <= 1e-6 && cert.max_budget_residual() <= 1e-9, "{cert:?}");
                assert!((cert.exact_value - cert.claimed_value).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn blotto_certificates_pass_on_a_grid() {
    let options = oracle::CertifyOptions {
        samples: 20_000,
        ..Default::default()
    };
    let mut certified = 0;
    for i in 1..=10 {
        for k in 1..=10 {
            let low = i as f64 / 11.0;
            let gamma = 0.51 + 0.48 * k as f64 / 10.0;
            let params = BlottoParams::from_ratio(1.0, low, gamma, 1.0).unwrap();
            let Ok(eq) = blotto2::build_equilibrium(&params, None) else {
                continue;
            };
            let cert = oracle::certify(&eq.profile, &oracle::Instance::Blotto(params), &options).unwrap();
            assert!(cert.max_gap() <= 1e-6 && cert.max_budget_residual() <= 1e-9, "{cert:?}");
            assert!(cert.max_gap() >= -1e-12);
            assert!((cert.exact_value - cert.claimed_value).abs() <= 1e-9);
            certified += 1;
        }
    }
    assert!(certified > 20);
}
