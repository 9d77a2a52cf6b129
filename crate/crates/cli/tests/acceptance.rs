//! Acceptance criteria 1–10, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::process::Command;

use num_complex::Complex;
use rand::Rng;

use rvq::dynamics::{evolve, random_generator, reflection_via_ancilla, rotation_only_check};
use rvq::inference::{
    gaussian_log_pmf, i_tilde_closed_form, i_tilde_empirical, multinomial_log_pmf, pulled_back_radii,
    region_of_uncertainty, Coordinates, ItildeEstimator, QuadratureConfig, TrialCounts, DEFAULT_SCHEDULE,
};
use rvq::linalg::RealMat;
use rvq::measures::{differential_entropy, differential_entropy_mc, sykora_test, AlphaPrior};
use rvq::rng::par_samples;
use rvq::scenarios::{
    footnote_inequality, footnote_sweep, sic_frame, sic_inaccessibility_report, sic_probs, sic_reconstruct,
    su2_optimality_check, su3_product_bound, LocalSearchConfig, PRODUCT_BOUND,
};
use rvq::statespace::{sample_haar_state, sample_real_sphere, GammaVector};
use rvq::{Gamma, Probabilities, RngSeed};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn criterion_1() -> Outcome {
    let seed = RngSeed::new(1, 0);
    let uniform = AlphaPrior::uniform();
    let bloch = AlphaPrior::Bloch;
    let cf_u = differential_entropy(&uniform, 1000, seed).unwrap().value;
    let cf_b = differential_entropy(&bloch, 1000, seed).unwrap().value;
    let mc_u = differential_entropy_mc(&uniform, 1_000_000, seed.derive(0)).unwrap();
    let mc_b = differential_entropy_mc(&bloch, 1_000_000, seed.derive(1)).unwrap();
    let pass = (cf_u - 0.4516).abs() < 0.005
        && (cf_b - 0.3069).abs() < 0.005
        && (mc_u.value - 0.4516).abs() < 0.01
        && (mc_b.value - 0.3069).abs() < 0.01;
    outcome(
        pass,
        format!(
            "closed form uniform {cf_u:.6}, bloch {cf_b:.6}; MC(1e6) uniform {:.6} ± {:.1e}, bloch {:.6} ± {:.1e}",
            mc_u.value, mc_u.stderr, mc_b.value, mc_b.stderr
        ),
    )
}

fn quadrature() -> ItildeEstimator {
    ItildeEstimator::Quadrature(QuadratureConfig::default())
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (prior, target) in [(AlphaPrior::uniform(), -0.2742), (AlphaPrior::Bloch, -0.4189)] {
        let r = i_tilde_empirical(&prior, &DEFAULT_SCHEDULE, &quadrature(), RngSeed::default()).unwrap();
        let shifted: Vec<String> = r.points.iter().map(|p| format!("{:.5}", p.shifted)).collect();
        // The estimate is the largest-N point; the sequence must approach the target.
        let ok = (r.value - target).abs() < 0.02 && r.approaches_monotonically(target);
        pass &= ok;
        let worst = r.points.iter().map(|p| (p.shifted - target).abs()).fold(0.0, f64::max);
        parts.push(format!("{} [{}] target {target} (max pointwise gap {worst:.4})", prior_label(&prior), shifted.join(", ")));
    }
    outcome(pass, parts.join("; "))
}

fn prior_label(p: &AlphaPrior) -> &'static str {
    match p {
        AlphaPrior::Interval { .. } => "uniform",
        AlphaPrior::Bloch => "bloch",
        AlphaPrior::Bump { .. } => "bump",
        AlphaPrior::Ramp { .. } => "ramp",
    }
}

fn criterion_3() -> Outcome {
    let schedule = [1024, 2048, 4096];
    let at_4096 = |p: &AlphaPrior| i_tilde_empirical(p, &schedule, &quadrature(), RngSeed::default()).unwrap().value;
    let uniform = at_4096(&AlphaPrior::uniform());
    let battery = [AlphaPrior::Bloch, AlphaPrior::bump(FRAC_PI_4, 0.3).unwrap(), AlphaPrior::ramp(0.6).unwrap()];
    let others: Vec<f64> = battery.iter().map(at_4096).collect();
    let gap = uniform - others[0];
    let pass = others.iter().all(|&o| uniform > o) && (gap - 0.145).abs() <= 0.02;
    outcome(
        pass,
        format!(
            "uniform {uniform:.5}; bloch {:.5}, bump {:.5}, ramp {:.5}; uniform−bloch gap {gap:.5} (closed-form gap {:.5})",
            others[0],
            others[1],
            others[2],
            i_tilde_closed_form(&AlphaPrior::uniform()).unwrap() - i_tilde_closed_form(&AlphaPrior::Bloch).unwrap()
        ),
    )
}

fn gamma_of(p: &[f64]) -> Gamma {
    GammaVector::new(p.iter().map(|x| x.sqrt()).collect()).unwrap()
}

fn criterion_4() -> Outcome {
    let n = 10_000u64;
    let mut worst_tv = 0.0f64;
    for k in 0..=16 {
        let p1 = 0.1 + 0.05 * k as f64;
        let gamma = gamma_of(&[p1, 1.0 - p1]);
        let probs = Probabilities::new(vec![p1, 1.0 - p1]).unwrap();
        let mut tv = 0.0;
        for n1 in 0..=n {
            let counts = TrialCounts::new(vec![n1, n - n1]).unwrap();
            let b = multinomial_log_pmf::<f64>(&counts, &probs).unwrap().exp();
            let g = if n1 == 0 || n1 == n { 0.0 } else { gaussian_log_pmf::<f64>(&counts, &gamma).unwrap().exp() };
            tv += 0.5 * (b - g).abs();
        }
        worst_tv = worst_tv.max(tv);
    }

    let mut rng = RngSeed::new(4, 0).rng();
    let target = 1.0 / (2.0 * n as f64).sqrt();
    let (mut radius_err, mut pullback_err) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let g = sample_real_sphere::<f64, _>(3, &mut rng).unwrap();
        let p = Probabilities::new(g.components().iter().map(|x| x * x).collect()).unwrap();
        let region = region_of_uncertainty(&p, n, Coordinates::Spherical).unwrap();
        let pulled = pulled_back_radii(&p, n).unwrap();
        for (r, q) in region.radii.iter().zip(&pulled) {
            radius_err = radius_err.max((r - target).abs());
            pullback_err = pullback_err.max((q - r).abs());
        }
    }
    let pass = worst_tv < 1e-2 && radius_err == 0.0 && pullback_err < 1e-10;
    outcome(
        pass,
        format!("max TV {worst_tv:.3e}; spherical radius error {radius_err:.1e}; pulled-back vs spherical {pullback_err:.1e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [2, 3] {
        let r = sykora_test(d, 100_000, 64, RngSeed::new(5, d as u64)).unwrap();
        let ok = r.complex.flat.pass && !r.complex.orthant.pass && r.real.orthant.pass && !r.real.flat.pass;
        pass &= ok;
        parts.push(format!(
            "d={d}: complex flat χ²={:.1} orthant χ²={:.1}; real flat χ²={:.1} orthant χ²={:.1} (crit {:.2})",
            r.complex.flat.statistic, r.complex.orthant.statistic, r.real.flat.statistic, r.real.orthant.statistic, r.complex.flat.critical_99
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let r = su2_optimality_check(10_000, RngSeed::new(6, 0)).unwrap();
    let pass = r.max_closed_form_error <= 1e-12 && r.orthant_chi_square.pass;
    outcome(
        pass,
        format!(
            "max |direct − closed form − v_U²| {:.2e}; orthant χ²={:.1} (crit {:.2}, p={:.3})",
            r.max_closed_form_error, r.orthant_chi_square.statistic, r.orthant_chi_square.critical_99, r.orthant_chi_square.p_value
        ),
    )
}

fn criterion_7() -> Outcome {
    let r = su3_product_bound(1_000_000, &LocalSearchConfig::default(), RngSeed::new(7, 0)).unwrap();
    let sweep = footnote_sweep(21, 72, 1e-3);
    let (at_one, _) = footnote_inequality(Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)).unwrap();
    let pass = r.max_product <= PRODUCT_BOUND + 1e-12
        && r.attained >= PRODUCT_BOUND - 1e-6
        && sweep.max <= 4.0 + 1e-12
        && (at_one - 4.0).abs() < 1e-9;
    outcome(
        pass,
        format!(
            "max p₂p₃ {:.13} vs 16/81 = {PRODUCT_BOUND:.13}; attained {:.13}; footnote max {:.12} over {} points, value at a=b=1 {at_one:.12}",
            r.max_product, r.attained, sweep.max, sweep.points
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [2usize, 3] {
        let frame = sic_frame::<f64>(d).unwrap();
        let equi = frame.equiangularity_defect();
        let report = sic_inaccessibility_report(d, 1e-12, 100_000, RngSeed::new(8, d as u64)).unwrap();
        let errors = par_samples(RngSeed::new(80, d as u64), 1000, |rng, _| {
            let s = sample_haar_state::<f64, _>(d, rng).unwrap();
            sic_reconstruct(&sic_probs(&s, &frame).unwrap(), &frame).unwrap().max_abs_diff(&s.projector())
        });
        let recon = errors.iter().copied().fold(0.0, f64::max);
        let ok = equi < 1e-10 && report.max_prob <= 1.0 / d as f64 + 1e-12 && recon < 1e-10;
        pass &= ok;
        parts.push(format!(
            "d={d}: equiangularity {equi:.1e}, max p {:.6} (1/d {:.6}), reconstruction {recon:.1e}",
            report.max_prob,
            1.0 / d as f64
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_9() -> Outcome {
    let mut rng = RngSeed::new(9, 0).rng();
    let (mut orth, mut group) = (0.0f64, 0.0f64);
    for trial in 0..200 {
        let d = 2 + trial % 5;
        let g = random_generator(d, &mut rng);
        let (s, t) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let q = evolve(&g, s + t);
        let m = q.matrix();
        let gram: RealMat<f64> = &m.transpose() * m;
        orth = orth.max(gram.max_abs_diff(&RealMat::identity(d)));
        group = group.max((evolve(&g, s).matrix() * evolve(&g, t).matrix()).max_abs_diff(m));
    }
    let ancilla = reflection_via_ancilla::<f64>();
    let mut map_err = 0.0f64;
    for _ in 0..100 {
        let u: f64 = rng.random_range(0.0..2.0 * PI);
        let v: f64 = rng.random_range(0.0..2.0 * PI);
        let (s, a) = ([u.cos(), u.sin()], [v.cos(), v.sin()]);
        let out = ancilla.apply(&s, &a);
        let want = [s[0] * a[0], s[0] * a[1], -s[1] * a[0], -s[1] * a[1]];
        map_err = out.iter().zip(&want).map(|(x, y)| (x - y).abs()).fold(map_err, f64::max);
    }
    let rot = rotation_only_check(1000, RngSeed::new(9, 1)).unwrap();
    let pass = orth < 1e-10 && group < 1e-10 && map_err <= 1e-12 && ancilla.path_defect <= 1e-12 && rot.all_rotations;
    outcome(
        pass,
        format!(
            "orthogonality {orth:.1e}, group law {group:.1e}; ancilla map {map_err:.1e}, e^(π S_c) vs composite {:.1e}; det +1 in {} trials: {} (min distance to reflection {:.3})",
            ancilla.path_defect, rot.samples, rot.all_rotations, rot.min_distance_to_reflection
        ),
    )
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_rvq")).args(args).output().expect("run rvq");
    assert!(out.status.success(), "rvq {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_10() -> Outcome {
    let invocations: [&[&str]; 6] = [
        &["entropy", "--samples", "100000", "--format", "csv"],
        &["entropy", "--samples", "100000", "--format", "json"],
        &["sweep", "--d", "3", "--schedule", "64,128,256", "--samples", "2000", "--format", "csv"],
        &["sweep", "--format", "json"],
        &["su2", "--samples", "20000", "--format", "json"],
        &["sykora", "--d", "2", "--samples", "20000", "--format", "csv"],
    ];
    let mut identical = 0;
    for args in &invocations {
        if run_cli(args) == run_cli(args) {
            identical += 1;
        }
    }
    outcome(identical == invocations.len(), format!("{identical}/{} invocations byte-identical across two runs", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("entropy values", criterion_1),
        ("Ĩ convergence", criterion_2),
        ("optimality of the uniform prior", criterion_3),
        ("Gaussian asymptotics and spherical regions", criterion_4),
        ("flat vs orthant uniformity", criterion_5),
        ("SU(2) Bell probabilities", criterion_6),
        ("SU(3) product bound", criterion_7),
        ("SIC frames", criterion_8),
        ("orthogonal dynamics and the ancilla reflection", criterion_9),
        ("reproducibility", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {} [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
