//! One function per subcommand: resolve the configuration, run the library
//! computation, and emit the artifact.

use std::f64::consts::{FRAC_PI_2, LN_2, PI, TAU};
use std::path::PathBuf;

use num_complex::Complex;
use serde::Serialize;
use serde_json::json;

use rvq::dynamics::{evolve, random_generator, reflection_via_ancilla, rotation_only_check};
use rvq::inference::{
    delta_frequency, i_tilde_closed_form, i_tilde_empirical, region_of_uncertainty, slope_compensation,
    validate_schedule, Coordinates, ItildeEstimator, NestedMcConfig, QuadratureConfig,
};
use rvq::linalg::{ComplexMat, RealMat};
use rvq::measures::{
    default_bins, differential_entropy_mc, induced_alpha_density, induced_alpha_density_from, k_opt,
    sykora_test, uniform_bloch_preparation, AlphaPrior, OrthantUniform, PriorDensity,
};
use rvq::rng::par_samples;
use rvq::scenarios::{
    footnote_inequality, footnote_sweep, sic_frame, sic_inaccessibility_report, sic_probs, sic_reconstruct,
    su2_optimality_check, su3_product_bound, LocalSearchConfig, PRODUCT_BOUND,
};
use rvq::statespace::{alpha_of, polarization_rule, sample_haar_state, PreparationAngle};
use rvq::Probabilities;

use crate::config::{CommonArgs, Defaults, Format, RunConfig};
use crate::output::{provenance_line, render, write_output, Artifact, Cell, Table};
use crate::svg::{Plot, Series, Style};
use crate::CliError;

/// Footnote grid: radii and angles per disk.
const FOOTNOTE_RADII: usize = 21;
const FOOTNOTE_ANGLES: usize = 72;
/// Margin above `1/d` for the SIC accessibility count.
const SIC_EPSILON: f64 = 1e-12;
/// Trial count for the uncertainty-region figures.
const FIGURE_TRIALS: u64 = 200;

fn defaults(d: usize, samples: usize) -> Defaults {
    Defaults { d, samples, format: Format::Csv }
}

fn emit(config: &RunConfig, artifact: &Artifact) -> Result<(), CliError> {
    let text = render(config, artifact)?;
    write_output(config.out.as_deref(), &text)
}

/// Binary priors by name.
fn alpha_prior(name: &str) -> Result<AlphaPrior, CliError> {
    Ok(match name {
        "uniform" => AlphaPrior::uniform(),
        "bloch" => AlphaPrior::Bloch,
        "bump" => AlphaPrior::bump(FRAC_PI_2 / 2.0, 0.3)?,
        "ramp" => AlphaPrior::ramp(0.6)?,
        other => {
            return Err(CliError::usage(format!(
                "unknown prior '{other}' for d = 2 (expected uniform, bloch, bump or ramp)"
            )))
        }
    })
}

fn prior_for(name: &str, d: usize) -> Result<Box<dyn PriorDensity>, CliError> {
    match (d, name) {
        (_, "orthant-uniform") => Ok(Box::new(OrthantUniform::new(d)?)),
        (2, _) => Ok(Box::new(alpha_prior(name)?)),
        (_, "uniform") => Ok(Box::new(OrthantUniform::new(d)?)),
        _ => Err(CliError::usage(format!("unknown prior '{name}' for d = {d} (expected orthant-uniform)"))),
    }
}

#[derive(Serialize)]
struct EntropyRow {
    prior: String,
    d: usize,
    entropy: f64,
    stderr: f64,
    closed_form: Option<f64>,
    samples: usize,
}

pub fn entropy(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("entropy", args, defaults(2, 1_000_000))?;
    let names: Vec<String> = match (&config.prior, config.d) {
        (Some(p), _) => vec![p.clone()],
        (None, 2) => ["uniform", "bloch", "bump", "ramp"].map(String::from).to_vec(),
        (None, _) => vec!["orthant-uniform".into()],
    };
    let mut rows = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let prior = prior_for(name, config.d)?;
        let estimate = differential_entropy_mc(prior.as_ref(), config.samples, config.seed().derive(i as u64))?;
        let closed_form = prior.exact_entropy().or_else(|| (config.d != 2).then(|| -k_opt::<f64>(config.d).ln()));
        rows.push(EntropyRow {
            prior: name.clone(),
            d: config.d,
            entropy: estimate.value,
            stderr: estimate.stderr,
            closed_form,
            samples: estimate.samples,
        });
    }
    let mut table = Table::new(&["prior", "d", "entropy", "stderr", "closed_form", "samples"]);
    for r in &rows {
        table.push(vec![
            r.prior.clone().into(),
            r.d.into(),
            Cell::Nats(r.entropy),
            Cell::Nats(r.stderr),
            r.closed_form.map(Cell::Nats).unwrap_or(Cell::Empty),
            r.samples.into(),
        ]);
    }
    emit(&config, &Artifact::new(&json!({ "rows": rows }), table))
}

pub fn sweep(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("sweep", args, defaults(2, NestedMcConfig::default().outer))?;
    validate_schedule(&config.schedule)?;
    let name = config.prior.clone().unwrap_or_else(|| "uniform".into());
    let prior = prior_for(&name, config.d)?;
    let estimator = if config.d == 2 {
        ItildeEstimator::Quadrature(QuadratureConfig::default())
    } else {
        ItildeEstimator::NestedMc(NestedMcConfig { outer: config.samples, ..NestedMcConfig::default() })
    };
    let result = i_tilde_empirical(prior.as_ref(), &config.schedule, &estimator, config.seed())?;
    let closed_form = i_tilde_closed_form(prior.as_ref()).ok();

    let mut table = Table::new(&["n", "mutual_info", "shifted", "stderr", "bias"]);
    for p in &result.points {
        table.push(vec![
            p.n.into(),
            Cell::Nats(p.mutual_info),
            Cell::Nats(p.shifted),
            Cell::Nats(p.stderr),
            p.bias.map(Cell::Nats).unwrap_or(Cell::Empty),
        ]);
    }
    let unit = if config.bits { LN_2 } else { 1.0 };
    let points: Vec<(f64, f64)> = result.points.iter().map(|p| ((p.n as f64).ln(), p.shifted / unit)).collect();
    let mut series = vec![Series::new(format!("{name} prior"), points.clone(), Style::Line)];
    series.push(Series::new(format!("{name} (points)"), points.clone(), Style::Markers));
    if let Some(c) = closed_form {
        let (x0, x1) = (points.first().unwrap().0, points.last().unwrap().0);
        series.push(Series::new("closed form", vec![(x0, c / unit), (x1, c / unit)], Style::Dashed));
    }
    let svg = Plot {
        title: format!("I − ((d−1)/2) ln N, d = {}", config.d),
        x_label: "ln N".into(),
        y_label: if config.bits { "bits" } else { "nats" }.into(),
        series,
        square: false,
    }
    .render(&provenance_line(&config));
    let value = json!({ "prior": name, "closed_form": closed_form, "sweep": result });
    emit(&config, &Artifact::new(&value, table).with_svg(svg))
}

pub fn induced(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("induced", args, defaults(2, 1_000_000))?;
    if config.d != 2 {
        return Err(CliError::usage("induced is defined for d = 2 only"));
    }
    let bins = config.bins.unwrap_or_else(|| default_bins(config.samples));
    let m = config.multiplier;
    // Both rules induce a known α-law: any multiplier gives the uniform law.
    let (estimate, expected) = match config.rule.as_str() {
        "polarization" => (
            induced_alpha_density(
                |theta| polarization_rule(PreparationAngle::new(theta, m)),
                config.samples,
                bins,
                config.seed(),
            )?,
            AlphaPrior::uniform(),
        ),
        "bloch" => (
            induced_alpha_density_from(uniform_bloch_preparation, config.samples, bins, config.seed())?,
            AlphaPrior::Bloch,
        ),
        other => return Err(CliError::usage(format!("unknown rule '{other}' (expected polarization or bloch)"))),
    };
    let cdf = |a: f64| expected.cdf(a);
    let max_z = estimate.max_z_score(cdf);

    let mut table = Table::new(&["bin_low", "bin_high", "count", "mass", "density", "expected"]);
    let mut expected_density = Vec::with_capacity(estimate.bins.len());
    for (b, &c) in estimate.bins.iter().zip(&estimate.counts) {
        let e = (cdf(b.bin_high) - cdf(b.bin_low)) / (b.bin_high - b.bin_low);
        expected_density.push(e);
        table.push(vec![b.bin_low.into(), b.bin_high.into(), c.into(), b.mass.into(), b.density.into(), e.into()]);
    }
    let steps: Vec<(f64, f64)> = estimate.bins.iter().map(|b| (0.5 * (b.bin_low + b.bin_high), b.density)).collect();
    let curve: Vec<(f64, f64)> = (0..=200).map(|i| FRAC_PI_2 * i as f64 / 200.0).map(|a| (a, expected.density(a))).collect();
    let svg = Plot {
        title: format!("Induced density of α ({} rule)", config.rule),
        x_label: "α".into(),
        y_label: "density".into(),
        series: vec![Series::new("histogram", steps, Style::Steps), Series::new("expected", curve, Style::Dashed)],
        square: false,
    }
    .render(&provenance_line(&config));
    let value = json!({
        "rule": config.rule,
        "multiplier": m,
        "expected_prior": expected.name(),
        "expected_entropy": expected.exact_entropy(),
        "max_z_score": max_z,
        "estimate": estimate,
        "expected_density": expected_density,
    });
    emit(&config, &Artifact::new(&value, table).with_svg(svg))
}

/// Reports are flattened to `field,value` rows for CSV.
fn emit_report<R: Serialize>(config: &RunConfig, report: &R) -> Result<(), CliError> {
    let value = serde_json::to_value(report).expect("report serialises");
    let table = Table::from_json(&value);
    emit(config, &Artifact::new(&value, table))
}

pub fn sykora(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("sykora", args, defaults(3, 100_000))?;
    let report = sykora_test(config.d, config.samples, config.bins.unwrap_or(64), config.seed())?;
    emit_report(&config, &report)
}

pub fn su2(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("su2", args, defaults(4, 100_000))?;
    if config.d != 4 {
        return Err(CliError::usage("su2 has d = 4 outcomes"));
    }
    emit_report(&config, &su2_optimality_check(config.samples, config.seed())?)
}

pub fn su3(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("su3", args, defaults(9, 1_000_000))?;
    if config.d != 9 {
        return Err(CliError::usage("su3 has d = 9 outcomes"));
    }
    let report = su3_product_bound(config.samples, &LocalSearchConfig::default(), config.seed())?;
    let sweep = footnote_sweep(FOOTNOTE_RADII, FOOTNOTE_ANGLES, 1e-3);
    let (at_one, _) = footnote_inequality(Complex::new(1.0, 0.0), Complex::new(1.0, 0.0))?;
    let value = json!({
        "report": report,
        "product_bound": PRODUCT_BOUND,
        "footnote": { "sweep": sweep, "at_one": at_one },
    });
    emit_report(&config, &value)
}

pub fn sic(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("sic", args, defaults(2, 100_000))?;
    let frame = sic_frame::<f64>(config.d)?;
    let report = sic_inaccessibility_report(config.d, SIC_EPSILON, config.samples, config.seed())?;
    let round_trips = config.samples.min(1000);
    let d = config.d;
    let errors = par_samples(config.seed().derive(2), round_trips, |rng, _| {
        let s = sample_haar_state::<f64, _>(d, rng).expect("d ≥ 2");
        let rho: ComplexMat<f64> = sic_reconstruct(&sic_probs(&s, &frame).expect("dimension"), &frame).expect("dimension");
        rho.max_abs_diff(&s.projector())
    });
    let value = json!({
        "report": report,
        "equiangularity_defect": frame.equiangularity_defect(),
        "frame_operator_defect": frame.frame_operator_defect(),
        "round_trips": round_trips,
        "max_reconstruction_error": errors.iter().copied().fold(0.0, f64::max),
    });
    emit_report(&config, &value)
}

pub fn dynamics(args: &CommonArgs) -> Result<(), CliError> {
    let config = RunConfig::resolve("dynamics", args, defaults(6, 1000))?;
    let rotation = rotation_only_check(config.samples, config.seed())?;
    let ancilla = reflection_via_ancilla::<f64>();
    let s = [0.6, 0.8];
    let a = [0.28, 0.96];
    let mapped = ancilla.apply(&s, &a);
    let target = [s[0] * a[0], s[0] * a[1], -s[1] * a[0], -s[1] * a[1]];
    let ancilla_error = mapped.iter().zip(&target).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    let d = config.d;
    let defects = par_samples(config.seed().derive(1), 100, |rng, _| {
        let g = random_generator(d, rng);
        let q = evolve(&g, 1.0);
        let m = q.matrix();
        let gram: RealMat<f64> = &m.transpose() * m;
        let orth = gram.max_abs_diff(&RealMat::identity(d));
        let (early, late) = (evolve(&g, 0.3), evolve(&g, 0.7));
        let group = (early.matrix() * late.matrix()).max_abs_diff(m);
        (orth, group)
    });
    let value = json!({
        "rotation_only": rotation,
        "ancilla": {
            "system": s,
            "ancilla": a,
            "output": mapped,
            "max_error": ancilla_error,
            "generator_path_defect": ancilla.path_defect,
        },
        "evolution": {
            "d": d,
            "trials": defects.len(),
            "max_orthogonality_defect": defects.iter().map(|x| x.0).fold(0.0, f64::max),
            "max_group_law_defect": defects.iter().map(|x| x.1).fold(0.0, f64::max),
        },
    });
    emit_report(&config, &value)
}

/// Triangle coordinates of a point on the simplex (or positive octant) in `R³`.
fn project(v: &[f64]) -> (f64, f64) {
    ((v[1] - v[0]) / 2f64.sqrt(), (2.0 * v[2] - v[0] - v[1]) / 6f64.sqrt())
}

struct FigureFile {
    name: String,
    table: Table,
    plot: Plot,
}

fn alpha_mapping_figure() -> FigureFile {
    let mut table = Table::new(&["theta", "p1", "alpha"]);
    let mut curve = Vec::new();
    for i in 0..=400 {
        let theta = TAU * i as f64 / 400.0;
        let p = polarization_rule(PreparationAngle::new(theta, 1));
        let alpha = alpha_of(&p);
        table.push(vec![theta.into(), p.entries()[0].into(), alpha.into()]);
        curve.push((theta, alpha));
    }
    FigureFile {
        name: "alpha_mapping".into(),
        table,
        plot: Plot {
            title: "α = arccos √p₁ along the preparation angle".into(),
            x_label: "θ".into(),
            y_label: "α".into(),
            series: vec![Series::new("α(θ)", curve, Style::Line)],
            square: false,
        },
    }
}

fn slope_figure() -> Result<FigureFile, CliError> {
    let mut table = Table::new(&["theta", "p1", "slope", "compensation", "delta_frequency"]);
    let (mut slope, mut comp) = (Vec::new(), Vec::new());
    for i in 1..400 {
        let theta = PI * i as f64 / 400.0;
        let p = polarization_rule(PreparationAngle::new(theta, 1));
        let (s, c) = slope_compensation(theta);
        let df = delta_frequency(&p, FIGURE_TRIALS)?;
        table.push(vec![theta.into(), p.entries()[0].into(), s.into(), c.into(), df.into()]);
        slope.push((theta, s));
        comp.push((theta, c));
    }
    Ok(FigureFile {
        name: "slope_compensation".into(),
        table,
        plot: Plot {
            title: "Slope |dp/dθ| and frequency spread 2√(p(1−p))".into(),
            x_label: "θ".into(),
            y_label: "value".into(),
            series: vec![Series::new("slope", slope, Style::Line), Series::new("compensation", comp, Style::Dashed)],
            square: false,
        },
    })
}

fn region_figure(coordinates: Coordinates) -> Result<FigureFile, CliError> {
    let centers: [[f64; 3]; 7] = [
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        [0.7, 0.15, 0.15],
        [0.15, 0.7, 0.15],
        [0.15, 0.15, 0.7],
        [0.45, 0.45, 0.1],
        [0.1, 0.45, 0.45],
        [0.45, 0.1, 0.45],
    ];
    let label = match coordinates {
        Coordinates::Flat => "flat",
        Coordinates::Spherical => "spherical",
    };
    let mut table = Table::new(&["region", "x", "y", "c1", "c2", "c3"]);
    let mut series = Vec::new();
    for (k, c) in centers.iter().enumerate() {
        let p = Probabilities::new(c.to_vec())?;
        let region = region_of_uncertainty(&p, FIGURE_TRIALS, coordinates)?;
        let boundary = region.boundary_2d(120)?;
        let mut points = Vec::with_capacity(boundary.len() + 1);
        for v in &boundary {
            let (x, y) = project(v);
            table.push(vec![k.into(), x.into(), y.into(), v[0].into(), v[1].into(), v[2].into()]);
            points.push((x, y));
        }
        points.push(points[0]);
        series.push(Series::new(format!("region {k}"), points, Style::Line));
    }
    // Outline of the simplex (flat) or of the octant's boundary arcs (spherical).
    let outline: Vec<(f64, f64)> = match coordinates {
        Coordinates::Flat => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
            .iter()
            .map(|v| project(v))
            .collect(),
        Coordinates::Spherical => (0..3)
            .flat_map(|edge| {
                (0..=60).map(move |i| {
                    let t = FRAC_PI_2 * i as f64 / 60.0;
                    let mut v = [0.0; 3];
                    v[edge] = t.cos();
                    v[(edge + 1) % 3] = t.sin();
                    project(&v)
                })
            })
            .collect(),
    };
    series.push(Series::new("boundary", outline, Style::Dashed));
    Ok(FigureFile {
        name: format!("{label}_regions"),
        table,
        plot: Plot {
            title: format!("Regions of uncertainty, {label} coordinates, N = {FIGURE_TRIALS}"),
            x_label: "x".into(),
            y_label: "y".into(),
            series,
            square: true,
        },
    })
}

pub fn figures(args: &CommonArgs) -> Result<(), CliError> {
    let mut config = RunConfig::resolve("figures", args, Defaults { d: 3, samples: 1, format: Format::Json })?;
    let dir = config.out.take().unwrap_or_else(|| PathBuf::from("figures"));
    std::fs::create_dir_all(&dir).map_err(CliError::io)?;
    let files = [
        alpha_mapping_figure(),
        slope_figure()?,
        region_figure(Coordinates::Flat)?,
        region_figure(Coordinates::Spherical)?,
    ];
    let provenance = provenance_line(&config);
    let mut manifest = Table::new(&["figure", "csv", "svg", "rows"]);
    let mut entries = Vec::new();
    for f in &files {
        let csv_path = dir.join(format!("{}.csv", f.name));
        let svg_path = dir.join(format!("{}.svg", f.name));
        let csv_config = RunConfig { format: Format::Csv, ..config.clone() };
        write_output(Some(&csv_path), &render(&csv_config, &Artifact { result: json!(null), table: f.table.clone(), svg: None })?)?;
        write_output(Some(&svg_path), &f.plot.render(&provenance))?;
        let (csv_s, svg_s) = (csv_path.display().to_string(), svg_path.display().to_string());
        manifest.push(vec![f.name.clone().into(), csv_s.clone().into(), svg_s.clone().into(), f.table.rows.len().into()]);
        entries.push(json!({ "figure": f.name, "csv": csv_s, "svg": svg_s, "rows": f.table.rows.len() }));
    }
    emit(&config, &Artifact::new(&json!({ "trials": FIGURE_TRIALS, "files": entries }), manifest))
}
