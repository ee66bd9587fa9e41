use mcmc_confidence_core::dist::TailProbability;
use mcmc_confidence_core::mcse::{
    batch_layout, ci_quantiles, mcse, quantile_type1, subsample_quantile_se, BatchPolicy, Method, Outcome,
};
use mcmc_confidence_core::rng::Rng;
use mcmc_confidence_core::samplers::{ar1_run, Ar1Params};
use mcmc_confidence_core::stopping::{fixed_width_mean, Ar1Source, StoppingConfig};
use proptest::prelude::*;

fn se(values: &[f64], method: Method, policy: BatchPolicy) -> f64 {
    mcse(values, method, policy, |x| x).unwrap().into_value().unwrap().se
}

fn policy() -> impl Strategy<Value = BatchPolicy> {
    prop_oneof![
        Just(BatchPolicy::SquareRoot),
        Just(BatchPolicy::CubeRoot),
        (2usize..5).prop_map(BatchPolicy::Fixed),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_equivariance(
        xs in proptest::collection::vec(-50.0f64..50.0, 12..300),
        c in prop_oneof![-20.0f64..-0.05, 0.05f64..20.0],
        d in -100.0f64..100.0,
        policy in policy(),
    ) {
        let ys: Vec<f64> = xs.iter().map(|x| c * x + d).collect();
        for method in [Method::Bm, Method::Obm] {
            let base = se(&xs, method, policy);
            let moved = se(&ys, method, policy);
            let scale = c.abs() * base;
            prop_assert!((moved - scale).abs() <= 1e-9 * scale + 1e-12 * c.abs());
        }
    }

    #[test]
    fn layout_invariants(n in 10usize..100_000, policy in policy()) {
        let l = batch_layout(n, policy).unwrap();
        prop_assert!(l.b * l.a <= n);
        prop_assert!(l.b * (l.a + 1) > n);
        let vals: Vec<f64> = (0..n.min(3000)).map(|i| (i as f64 * 0.37).sin()).collect();
        let est = mcse(&vals, Method::Obm, policy, |x| x).unwrap().into_value().unwrap();
        prop_assert_eq!(est.a, est.n - est.b + 1);
        prop_assert!((est.se - (est.sigma2_hat / est.n as f64).sqrt()).abs() <= 1e-15 * est.se.max(1.0));
    }

    #[test]
    fn short_chains_are_always_absent(xs in proptest::collection::vec(-10.0f64..10.0, 1..10)) {
        prop_assert!(mcse(&xs, Method::Bm, BatchPolicy::SquareRoot, |x| x).unwrap().is_absent());
        prop_assert!(mcse(&xs, Method::Obm, BatchPolicy::SquareRoot, |x| x).unwrap().is_absent());
        prop_assert!(subsample_quantile_se(&xs, &[0.5]).unwrap().is_absent());
    }

    #[test]
    fn type1_quantile_is_a_sample_member_and_monotone(
        xs in proptest::collection::vec(-1e3f64..1e3, 1..200),
        mut ps in proptest::collection::vec(0.001f64..1.0, 1..20),
    ) {
        ps.sort_by(f64::total_cmp);
        let qs: Vec<f64> = ps.iter().map(|&p| quantile_type1(&xs, p).unwrap()).collect();
        for q in &qs {
            prop_assert!(xs.contains(q));
        }
        prop_assert!(qs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn quantile_point_estimates_follow_probability_order(
        xs in proptest::collection::vec(-1e3f64..1e3, 10..200),
    ) {
        let set = subsample_quantile_se(&xs, &[0.1, 0.5, 0.9]).unwrap().into_value().unwrap();
        prop_assert_eq!(set.ses.len(), 3);
        prop_assert!(set.point_estimates.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(set.ses.iter().all(|s| *s >= 0.0));
    }

    #[test]
    fn bonferroni_intervals_contain_plain_ones(seed in 0u64..1000) {
        let mut rng = Rng::new(seed);
        let chain = ar1_run(0.0, 500, Ar1Params::new(0.5, 1.0).unwrap(), &mut rng).unwrap();
        let level = TailProbability::new(0.9).unwrap();
        let plain = ci_quantiles(chain.values(), &[0.25, 0.75], level, false).unwrap();
        let wide = ci_quantiles(chain.values(), &[0.25, 0.75], level, true).unwrap();
        let (Outcome::Value(plain), Outcome::Value(wide)) = (plain, wide) else {
            panic!("long enough");
        };
        for (p, w) in plain.iter().zip(&wide) {
            prop_assert!(w.lower <= p.lower && p.upper <= w.upper);
        }
    }

    #[test]
    fn stopping_trace_and_termination(seed in 0u64..1000, eps in 0.15f64..0.6) {
        let config = StoppingConfig::new(eps, 0.9, 500, 100, 20_000).unwrap();
        let params = Ar1Params::new(0.8, 1.0).unwrap();
        let result = fixed_width_mean(&mut Ar1Source::new(1.0, params, Rng::new(seed)), &config).unwrap();
        prop_assert_eq!(result.trace[0].n, 100);
        prop_assert!(result.trace.windows(2).all(|w| w[1].n == w[0].n + 500));
        prop_assert_eq!(result.trace.last().unwrap().n, result.terminal_n);
        if result.converged {
            prop_assert!(result.half() + 1.0 / result.terminal_n as f64 <= eps);
            prop_assert!(result.terminal_n as f64 >= (1.0 / eps).ceil());
        }
        let again = fixed_width_mean(&mut Ar1Source::new(1.0, params, Rng::new(seed)), &config).unwrap();
        prop_assert_eq!(result, again);
    }
}
