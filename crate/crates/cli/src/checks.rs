use std::fs;
use std::path::Path;

use overfit_forge::verify::max_reachable_distance;
use overfit_forge::{
    check_global_optimum, dead_zone_check, image_accuracy_analytic, image_accuracy_estimate, image_classifier,
    image_training_set, support_bound_for, support_measure, ActivationKind, CostVariant, ImageGridSpec, LossKind,
    Mlp, Recipe, SupportMethod, SupportReport, Tolerances, TrainingSet,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{DataArgs, DeadZoneArgs, ImageArgs, Loss, SamplingArgs, SupportArgs, VerifyArgs, Check};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

/// Threshold used for networks whose outputs never vanish exactly.
const SMOOTH_THRESHOLD: f64 = 1e-3;

fn is_smooth(net: &Mlp) -> bool {
    net.layers().iter().any(|l| l.activation == ActivationKind::Sigmoid)
}

fn recipe(net: &Mlp) -> Option<&Recipe> {
    net.metadata().and_then(|m| m.recipe.as_ref())
}

fn load_data(net: &Mlp, data: &DataArgs) -> CliResult<TrainingSet> {
    match (&data.data, recipe(net)) {
        (Some(path), _) => Ok(TrainingSet::load_csv(path)?),
        (None, Some(r)) => Ok(r.training_set(overfit_forge::DEFAULT_ENUMERATION_BUDGET)?),
        (None, None) => Err(CliError::usage("the network records no recipe; pass --data <csv>")),
    }
}

fn write_report<T: Serialize>(report: &T, out: Option<&Path>, name: &str, argv: &[String], seed: u64) -> CliResult<()> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    if let Some(path) = out {
        fs::write(path, text)?;
        Manifest::new(name, argv, serde_json::to_value(report)?).seed(seed).write(&[path])?;
    }
    Ok(())
}

fn support_report(net: &Mlp, s: &SamplingArgs) -> CliResult<SupportReport> {
    let method = match s.resolution {
        Some(resolution) => SupportMethod::Grid { resolution },
        None => SupportMethod::MonteCarlo { samples: s.samples, seed: s.seed },
    };
    let threshold = s.threshold.unwrap_or(if is_smooth(net) { SMOOTH_THRESHOLD } else { 0.0 });
    let report = support_measure(net, method, threshold, s.budget)?;
    Ok(match net.metadata().and_then(support_bound_for) {
        Some(bound) if threshold == 0.0 => report.with_bound(bound),
        _ => report,
    })
}

fn support_line(r: &SupportReport) -> String {
    let se = r.standard_error.map(|s| format!(" +- {s:.1e}")).unwrap_or_default();
    match (r.analytic_bound, r.margin()) {
        (Some(b), Some(m)) => format!("measure {:.5}{se} (|f| > {}); bound {b:.5}, margin {m:.5}", r.measure, r.threshold),
        _ => format!("measure {:.5}{se} (|f| > {}); no analytic bound", r.measure, r.threshold),
    }
}

/// Dead-zone outcome; `None` report means the radius leaves nothing to probe.
fn dead_zone(
    net: &Mlp,
    data: &TrainingSet,
    radius: Option<f64>,
    probes: u64,
    threshold: Option<f64>,
    seed: u64,
    allow_vacuous: bool,
) -> CliResult<(bool, String, Value)> {
    let radius = radius
        .or_else(|| net.metadata().and_then(|m| m.dead_zone_radius))
        .unwrap_or(0.02);
    let threshold = threshold.unwrap_or(if is_smooth(net) { SMOOTH_THRESHOLD } else { 1e-9 });
    if let Some(reach) = max_reachable_distance(data) {
        if allow_vacuous && radius >= reach - 1e-12 {
            let line = format!("vacuous: radius {radius:.4e} reaches every point (max distance {reach:.4e})");
            return Ok((true, line, json!({ "vacuous": true, "radius": radius, "max_distance": reach })));
        }
    }
    let r = dead_zone_check(net, data, radius, probes, threshold, seed)?;
    let line = format!(
        "worst |f| {:.2e} over {} probes at {} distance > {:.4e} (limit {:e})",
        r.worst_value, r.probes, r.norm, r.radius, r.threshold
    );
    Ok((r.pass, line, serde_json::to_value(&r)?))
}

fn default_loss(net: &Mlp) -> LossKind {
    match recipe(net) {
        Some(Recipe::ReluClassifier { cost: CostVariant::CrossEntropy, .. }) => LossKind::CrossEntropy,
        _ => LossKind::Mse,
    }
}

fn mark(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn verify(args: &VerifyArgs, argv: &[String]) -> CliResult<()> {
    let net = Mlp::load(&args.net)?;
    let mut report = serde_json::Map::new();
    let mut rows = Vec::new();
    let mut all = true;
    let needs_data = args.checks.iter().any(|c| matches!(c, Check::Optimum | Check::DeadZone));
    let data = if needs_data { Some(load_data(&net, &args.data)?) } else { None };
    for check in &args.checks {
        let (name, pass, line, value) = match check {
            Check::Optimum => {
                let kind = match args.loss {
                    Some(Loss::Mse) => LossKind::Mse,
                    Some(Loss::Mae) => LossKind::Mae,
                    Some(Loss::CrossEntropy) => LossKind::CrossEntropy,
                    None => default_loss(&net),
                };
                let tol = Tolerances { loss: args.loss_tol, residual: args.residual_tol };
                let r = check_global_optimum(&net, data.as_ref().expect("loaded"), kind, tol)?;
                let line = format!(
                    "{:?} loss {:.2e} (limit {:e}), max residual {:.2e} (limit {:e})",
                    r.loss_kind, r.loss, tol.loss, r.max_residual, tol.residual
                );
                ("optimum", r.pass, line, serde_json::to_value(&r)?)
            }
            Check::Support => {
                let r = support_report(&net, &args.sampling)?;
                ("support", r.pass, support_line(&r), serde_json::to_value(&r)?)
            }
            Check::DeadZone => {
                let (pass, line, value) = dead_zone(
                    &net,
                    data.as_ref().expect("loaded"),
                    args.radius,
                    args.probes,
                    args.dead_threshold,
                    args.sampling.seed,
                    true,
                )?;
                ("dead_zone", pass, line, value)
            }
        };
        all &= pass;
        rows.push(format!("{:<10} {}  {line}", name.replace('_', "-"), mark(pass)));
        report.insert(name.to_string(), value);
    }
    report.insert("pass".into(), Value::Bool(all));
    println!("{:<10} {:<4}  detail", "check", "");
    for r in &rows {
        println!("{r}");
    }
    write_report(&report, args.out.as_deref(), "verify", argv, args.sampling.seed)?;
    if all {
        Ok(())
    } else {
        Err(CliError::Failed("at least one check did not pass".into()))
    }
}

pub fn support(args: &SupportArgs, argv: &[String]) -> CliResult<()> {
    let net = Mlp::load(&args.net)?;
    let r = support_report(&net, &args.sampling)?;
    println!("{}  {}", mark(r.pass), support_line(&r));
    write_report(&r, args.out.as_deref(), "support", argv, args.sampling.seed)?;
    if r.pass {
        Ok(())
    } else {
        Err(CliError::Failed("support exceeds the analytic bound".into()))
    }
}

pub fn dead_zone_cmd(args: &DeadZoneArgs, argv: &[String]) -> CliResult<()> {
    let net = Mlp::load(&args.net)?;
    let data = load_data(&net, &args.data)?;
    let (pass, line, value) = dead_zone(&net, &data, args.radius, args.probes, args.threshold, args.seed, false)?;
    println!("{}  {line}", mark(pass));
    write_report(&value, args.out.as_deref(), "dead-zone", argv, args.seed)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed("non-zero output inside the dead zone".into()))
    }
}

pub fn image_accuracy(args: &ImageArgs, argv: &[String]) -> CliResult<()> {
    let spec = ImageGridSpec::new(args.pixels, args.step)?;
    let b = args.b.unwrap_or(args.pixels as f64 - 0.001);
    let net = image_classifier(&spec, b)?;
    let analytic = image_accuracy_analytic(&spec);
    println!(
        "P={} m={} b={b}: hidden widths {:?}, analytic accuracy {analytic:e} (share of ground-truth images on the grid)",
        spec.pixels,
        spec.step,
        net.hidden_widths()
    );
    let mut report = json!({
        "pixels": spec.pixels,
        "step": spec.step,
        "b": b,
        "hidden_widths": net.hidden_widths(),
        "analytic": analytic,
    });
    if args.samples > 0 {
        let r = image_accuracy_estimate(&net, &spec, args.samples, args.seed)?;
        println!(
            "sampled accuracy {:.4e} +- {:.1e} over {} images (seed {})",
            r.accuracy, r.standard_error, r.samples, r.seed
        );
        report["estimate"] = serde_json::to_value(&r)?;
    }
    if args.enumerate {
        let set = image_training_set(spec, args.budget)?;
        println!("enumerated {} training images", set.len());
        report["enumerated"] = json!(set.len());
    }
    write_report(&report, args.out.as_deref(), "image-accuracy", argv, args.seed)
}
