use rvq::inference::{
    i_tilde_closed_form, i_tilde_empirical, i_tilde_from_entropy, mutual_info_binary_exact, mutual_info_multinomial_mc,
    InnerProposal, ItildeEstimator, NestedMcConfig, QuadratureConfig, DEFAULT_SCHEDULE,
};
use rvq::measures::{k_opt, AlphaPrior, OrthantUniform};
use rvq::RngSeed;

fn quadrature() -> ItildeEstimator {
    ItildeEstimator::Quadrature(QuadratureConfig::default())
}

#[test]
fn uniform_prior_schedule() {
    // Independent quadrature: -0.24129, -0.25790, -0.26609.
    let r = i_tilde_empirical(&AlphaPrior::uniform(), &DEFAULT_SCHEDULE, &quadrature(), RngSeed::default()).unwrap();
    for (p, reference) in r.points.iter().zip([-0.24129, -0.25790, -0.26609]) {
        assert!((p.shifted - reference).abs() < 5e-5, "{}: {}", p.n, p.shifted);
    }
    assert!(r.approaches_monotonically(-0.27421));
    assert!((r.value - i_tilde_closed_form(&AlphaPrior::uniform()).unwrap()).abs() < 0.02);
    assert!(r.converged);
}

#[test]
fn uniform_prior_is_optimal_in_battery() {
    let uniform = i_tilde_empirical(&AlphaPrior::uniform(), &DEFAULT_SCHEDULE, &quadrature(), RngSeed::default()).unwrap();
    let battery = [AlphaPrior::Bloch, AlphaPrior::bump(std::f64::consts::FRAC_PI_4, 0.3).unwrap(), AlphaPrior::ramp(0.6).unwrap()];
    for prior in &battery {
        let other = i_tilde_empirical(prior, &DEFAULT_SCHEDULE, &quadrature(), RngSeed::default()).unwrap();
        assert!(uniform.value >= other.value - 0.02, "{:?}: {} vs {}", prior, other.value, uniform.value);
    }
    let bloch = i_tilde_empirical(&AlphaPrior::Bloch, &DEFAULT_SCHEDULE, &quadrature(), RngSeed::default()).unwrap();
    assert!((uniform.value - bloch.value - 0.145).abs() < 0.02);
}

#[test]
fn mutual_information_grows_with_trials() {
    let prior = AlphaPrior::ramp(-0.4).unwrap();
    let mut last = 0.0;
    for n in [1u64, 4, 16, 64, 256] {
        let est = mutual_info_binary_exact(&prior, n, &QuadratureConfig::default()).unwrap();
        assert!(est.value >= last - 3.0 * est.stderr, "N={n}");
        assert!(est.value >= -3.0 * est.stderr);
        last = est.value;
    }
}

#[test]
fn nested_mc_agrees_with_quadrature() {
    let prior = AlphaPrior::uniform();
    let exact = mutual_info_binary_exact(&prior, 1024, &QuadratureConfig::default()).unwrap();
    let config = NestedMcConfig { outer: 10_000, inner: 10_000, proposal: InnerProposal::Prior };
    let mc = mutual_info_multinomial_mc(&prior, 1024, &config, RngSeed::new(40, 0)).unwrap();
    let combined = (mc.stderr.powi(2) + exact.stderr.powi(2)).sqrt();
    assert!((mc.value - exact.value).abs() < 3.0 * combined, "{} ± {} vs {}", mc.value, mc.stderr, exact.value);
}

#[test]
fn narrow_prior_carries_no_information() {
    let prior = AlphaPrior::bump(0.7, 1e-5).unwrap();
    let config = NestedMcConfig { outer: 2000, inner: 2000, proposal: InnerProposal::Prior };
    let mc = mutual_info_multinomial_mc(&prior, 100, &config, RngSeed::new(41, 0)).unwrap();
    assert!(mc.value.abs() < 3.0 * mc.stderr + 1e-3, "{} ± {}", mc.value, mc.stderr);
}

#[test]
fn four_outcome_orthant_limit() {
    let prior = OrthantUniform::new(4).unwrap();
    let config = NestedMcConfig { outer: 40_000, inner: 2_000, proposal: InnerProposal::Defensive { prior_weight: 0.1 } };
    let mc = mutual_info_multinomial_mc(&prior, 4096, &config, RngSeed::new(42, 0)).unwrap();
    let shifted = mc.value - 1.5 * 4096f64.ln();
    let target = i_tilde_from_entropy(-k_opt::<f64>(4).ln(), 4);
    assert!((shifted - target).abs() < 0.05, "{shifted} ± {} (bias {:?}) vs {target}", mc.stderr, mc.bias);
}
