use overfit_forge::{CostVariant, Recipe, SigmoidSpikeParams, Target};

use crate::args::{ConstructArgs, Cost, Family};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

fn need<T>(value: Option<T>, flag: &str, family: Family) -> CliResult<T> {
    value.ok_or_else(|| CliError::usage(format!("--{flag} is required for {family:?}")))
}

fn dim(args: &ConstructArgs, nd: bool) -> CliResult<usize> {
    match (nd, args.d) {
        (false, None | Some(1)) => Ok(1),
        (false, Some(d)) => Err(CliError::usage(format!("1D families take --d 1, got {d}"))),
        (true, d) => Ok(d.unwrap_or(2)),
    }
}

fn biases(args: &ConstructArgs) -> CliResult<(f64, f64)> {
    let b1 = args.b1.or(args.b);
    let b2 = args.b2.or(args.b);
    match (b1, b2) {
        (Some(b1), Some(b2)) => Ok((b1, b2)),
        _ => Err(CliError::usage("give --b, or both --b1 and --b2")),
    }
}

fn target(args: &ConstructArgs) -> CliResult<Target> {
    Ok(Target::parse(args.target.as_deref().unwrap_or("sin-pi"))?)
}

/// Translates the flags into a recipe.
pub fn recipe(args: &ConstructArgs) -> CliResult<Recipe> {
    use Family::*;
    let f = args.family;
    let nd = matches!(f, ReluClassifierNd | ReluApproxNd | PreluClassifierNd | PreluApproxNd | SigmoidApproxNd);
    Ok(match f {
        ReluClassifier1d | ReluClassifierNd => {
            let (b1, b2) = biases(args)?;
            Recipe::ReluClassifier {
                d: dim(args, nd)?,
                n: need(args.n, "n", f)?,
                b1,
                b2,
                cost: match args.cost {
                    Some(Cost::CrossEntropy) => CostVariant::CrossEntropy,
                    _ => CostVariant::PlusMinusOne,
                },
                shared: !args.unshared,
            }
        }
        ReluApprox1d | ReluApproxNd => Recipe::ReluApprox {
            d: dim(args, nd)?,
            n: need(args.n, "n", f)?,
            b: need(args.b, "b", f)?,
            target: target(args)?,
        },
        ReluImageClassifier => {
            let pixels = need(args.pixels, "pixels", f)?;
            Recipe::ReluImageClassifier {
                pixels,
                step: need(args.step, "step", f)?,
                b: args.b.unwrap_or(pixels as f64 - 0.001),
            }
        }
        PreluClassifier1d | PreluClassifierNd => {
            let (b1, b2) = biases(args)?;
            Recipe::PreluClassifier {
                d: dim(args, nd)?,
                n: need(args.n, "n", f)?,
                b1,
                b2,
                alpha: args.alpha.unwrap_or(0.01),
                c: args.c,
            }
        }
        PreluApprox1d | PreluApproxNd => Recipe::PreluApprox {
            d: dim(args, nd)?,
            n: need(args.n, "n", f)?,
            b: need(args.b, "b", f)?,
            alpha: args.alpha.unwrap_or(0.01),
            c: args.c,
            target: target(args)?,
        },
        SigmoidApprox1d | SigmoidApproxNd => Recipe::SigmoidApprox {
            d: dim(args, nd)?,
            n: need(args.n, "n", f)?,
            k: args.k.unwrap_or(SigmoidSpikeParams::DEFAULT_K),
            l: args.l.unwrap_or(SigmoidSpikeParams::DEFAULT_L),
            b: need(args.b, "b", f)?,
            target: target(args)?,
        },
    })
}

pub fn run(args: &ConstructArgs, argv: &[String]) -> CliResult<()> {
    let recipe = recipe(args)?;
    let net = recipe.build(args.budget)?;
    net.save(&args.out)?;
    let mut outputs = vec![args.out.as_path()];
    if let Some(path) = &args.data_out {
        recipe.training_set(args.budget)?.save_csv(path)?;
        outputs.push(path.as_path());
    }
    Manifest::new("construct", argv, serde_json::to_value(&recipe)?).write(&outputs)?;
    println!(
        "{}: hidden widths {:?} -> {}",
        net.metadata().map(|m| m.family.as_str()).unwrap_or("network"),
        net.hidden_widths(),
        args.out.display()
    );
    Ok(())
}
