use std::sync::OnceLock;

use proptest::prelude::*;
use shotnoise::laws::{AnalyticLaw, EvaluationGrid, LawOptions, LawSpec};
use shotnoise::simulator::{
    chain_rng, iterate_chain, stationary_samples, ChainConfig, EmpiricalDistribution,
};
use shotnoise::special::{lower_incomplete_gamma_regularized, volterra_nu};
use shotnoise::transforms::{exponential_sum_tail, AmplitudeLaw, ExponentLaw};

fn laws() -> &'static [AnalyticLaw] {
    static LAWS: OnceLock<Vec<AnalyticLaw>> = OnceLock::new();
    LAWS.get_or_init(|| {
        use AmplitudeLaw::*;
        use ExponentLaw::*;
        let mixed = GammaMixed { alpha: 1.0 };
        [
            (Fixed { a: 1.0 }, DeterministicOne),
            (Fixed { a: 2.5 }, DeterministicOne),
            (mixed, DeterministicOne),
            (mixed, Gamma { beta: 0.5 }),
            (mixed, Gamma { beta: 1.0 }),
            (mixed, Gamma { beta: 2.0 }),
            (Fixed { a: 1.5 }, Gamma { beta: 2.0 }),
            (mixed, SymmetricLaplace { beta: 1.0 }),
            (Fixed { a: 2.0 }, SymmetricLaplace { beta: 2.0 }),
        ]
        .into_iter()
        .map(|(e, a)| AnalyticLaw::new(LawSpec::new(e, a).unwrap(), LawOptions::default()).unwrap())
        .collect()
    })
}

fn small_spec() -> impl Strategy<Value = LawSpec> {
    prop_oneof![
        (0.2f64..4.0).prop_map(|a| LawSpec::new(
            ExponentLaw::Fixed { a },
            AmplitudeLaw::DeterministicOne
        )
        .unwrap()),
        (0.5f64..3.0).prop_map(|alpha| LawSpec::new(
            ExponentLaw::GammaMixed { alpha },
            AmplitudeLaw::DeterministicOne
        )
        .unwrap()),
        Just(
            LawSpec::new(
                ExponentLaw::GammaMixed { alpha: 1.0 },
                AmplitudeLaw::SymmetricLaplace { beta: 0.5 }
            )
            .unwrap()
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cdf_is_monotone_and_bounded(idx in 0usize..9, u1 in 0.0f64..8.0, du in 0.0f64..3.0) {
        let law = &laws()[idx];
        let lo = law.cdf(u1).unwrap().value;
        let hi = law.cdf(u1 + du).unwrap().value;
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&lo), "{} F({u1}) = {lo}", law.spec().describe());
        prop_assert!((-1e-9..=1.0 + 1e-9).contains(&hi));
        prop_assert!(lo <= hi + 1e-7, "{}: F({u1}) = {lo} > F({}) = {hi}", law.spec().describe(), u1 + du);
    }

    #[test]
    fn density_is_nonnegative(idx in 0usize..9, u in 1e-6f64..8.0) {
        let law = &laws()[idx];
        let f = law.density(u).unwrap().value;
        prop_assert!(f >= -1e-10 && f.is_finite(), "{} f({u}) = {f}", law.spec().describe());
    }

    #[test]
    fn cdf_vanishes_left_of_origin(idx in 0usize..9, u in -10.0f64..=0.0) {
        prop_assert_eq!(laws()[idx].cdf(u).unwrap().value, 0.0);
    }

    #[test]
    fn samples_are_seed_deterministic(spec in small_spec(), seed in any::<u64>(), index in 0u64..1000) {
        let a = iterate_chain(&spec, 60, &mut chain_rng(seed, index)).unwrap();
        let b = iterate_chain(&spec, 60, &mut chain_rng(seed, index)).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
        if !spec.amplitude.is_symmetric() {
            prop_assert!(a >= 0.0);
        }
    }

    #[test]
    fn worker_split_is_invisible(spec in small_spec(), seed in any::<u64>(), workers in 2usize..5) {
        let one = stationary_samples(&spec, &ChainConfig::new(30, 37, seed, 1).unwrap()).unwrap();
        let many = stationary_samples(&spec, &ChainConfig::new(30, 37, seed, workers).unwrap()).unwrap();
        prop_assert_eq!(one, many);
    }

    #[test]
    fn ecdf_is_a_distribution_function(
        xs in prop::collection::vec(-50.0f64..50.0, 1..200),
        a in -60.0f64..60.0,
        b in -60.0f64..60.0,
    ) {
        let d = EmpiricalDistribution::new(xs.clone()).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (fl, fh) = (d.ecdf(lo), d.ecdf(hi));
        prop_assert!((0.0..=1.0).contains(&fl) && (0.0..=1.0).contains(&fh));
        prop_assert!(fl <= fh);
        prop_assert!(d.ecdf_left(lo) <= fl);
        let below = xs.iter().filter(|&&x| x <= lo).count() as f64 / xs.len() as f64;
        prop_assert_eq!(fl, below);
        prop_assert_eq!(d.ecdf(60.0), 1.0);
        prop_assert_eq!(d.ecdf(-60.0), 0.0);
    }

    #[test]
    fn self_two_sample_ks_is_zero(xs in prop::collection::vec(0.0f64..10.0, 1..100)) {
        let d = EmpiricalDistribution::new(xs).unwrap();
        prop_assert_eq!(d.ks_two_sample(&d), 0.0);
    }

    #[test]
    fn linspace_grids_are_strictly_increasing(lo in -5.0f64..5.0, width in 1e-3f64..10.0, n in 2usize..500) {
        let g = EvaluationGrid::linspace(lo, lo + width, n).unwrap();
        prop_assert_eq!(g.len(), n);
        prop_assert!(g.points().windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(g.points()[0], lo);
    }

    #[test]
    fn unsorted_grids_are_rejected(mut pts in prop::collection::vec(-5.0f64..5.0, 2..30)) {
        pts.sort_by(f64::total_cmp);
        pts.reverse();
        prop_assume!(pts[0] > pts[pts.len() - 1]);
        prop_assert!(EvaluationGrid::new(pts).is_err());
    }

    #[test]
    fn incomplete_gamma_is_monotone(alpha in 0.1f64..10.0, s in 0.0f64..30.0, ds in 0.0f64..5.0) {
        let p1 = lower_incomplete_gamma_regularized(alpha, s).unwrap();
        let p2 = lower_incomplete_gamma_regularized(alpha, s + ds).unwrap();
        prop_assert!((0.0..=1.0).contains(&p1));
        prop_assert!(p1 <= p2 + 1e-14);
    }

    #[test]
    fn nu_is_positive_and_increasing(z in 1e-3f64..20.0, dz in 1e-3f64..2.0) {
        let a = volterra_nu(z).unwrap();
        let b = volterra_nu(z + dz).unwrap();
        prop_assert!(a > 0.0 && a < b);
    }
}

#[test]
fn exponential_sums_are_conjugate_closed() {
    for n in 2..=8 {
        let Ok(sum) = exponential_sum_tail(n, 1.0) else {
            continue;
        };
        assert_eq!(sum.rates.len(), n);
        // Real coefficients: the imaginary parts cancel across conjugate pairs.
        let im: num_complex::Complex64 = sum.weights.iter().sum();
        assert!(im.im.abs() < 1e-9, "order {n}: {im}");
        for r in &sum.rates {
            assert!(r.re > 0.0, "order {n}: rate {r} does not decay");
        }
        assert!((sum.cdf(0.0) - (1.0 - sum.total_mass())).abs() < 1e-12);
        assert!((sum.cdf(200.0) - 1.0).abs() < 1e-12);
    }
    assert!(exponential_sum_tail(3, 2.0).is_err());
}
