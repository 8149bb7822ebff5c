use overfit_forge::{extend, ActivationKind, ExtensionMode, ExtensionParams, Mlp};

use crate::args::{CarrierActivation, ExtendArgs, Mode};
use crate::error::CliResult;
use crate::manifest::Manifest;

fn network_alpha(net: &Mlp) -> Option<f64> {
    net.layers().iter().find_map(|l| match l.activation {
        ActivationKind::ParametricRelu { alpha } => Some(alpha),
        _ => None,
    })
}

pub fn params(args: &ExtendArgs, net: &Mlp) -> ExtensionParams {
    let (mode, activation) = match args.mode {
        Mode::ReluExact => (ExtensionMode::ReluExact { c: args.c }, ActivationKind::Relu),
        Mode::PreluShift => (
            ExtensionMode::PreluShift { shift: args.shift.or(args.c) },
            ActivationKind::ParametricRelu {
                alpha: args.alpha.or_else(|| network_alpha(net)).unwrap_or(0.01),
            },
        ),
        Mode::Smooth => (
            ExtensionMode::SmoothFirstOrder {
                eps: args.epsilon.unwrap_or(ExtensionMode::DEFAULT_EPS),
                c: args.c.unwrap_or(0.0),
            },
            match args.activation {
                CarrierActivation::Sigmoid => ActivationKind::Sigmoid,
                CarrierActivation::Identity => ActivationKind::Identity,
            },
        ),
    };
    let widths = match (&args.widths, args.width) {
        (Some(w), _) => w.clone(),
        (None, Some(w)) => vec![w; args.m],
        (None, None) => Vec::new(),
    };
    ExtensionParams {
        layers: args.m,
        widths,
        mode,
        activation,
        output_bound: args.output_bound,
    }
}

pub fn run(args: &ExtendArgs, argv: &[String]) -> CliResult<()> {
    let net = Mlp::load(&args.input)?;
    let params = params(args, &net);
    let ext = extend(&net, &params)?;
    ext.save(&args.out)?;
    Manifest::new("extend", argv, serde_json::to_value(&params)?).write(&[args.out.as_path()])?;
    println!(
        "{} hidden layers -> {} ({}): {}",
        net.hidden_count(),
        ext.hidden_count(),
        params.mode.name(),
        args.out.display()
    );
    Ok(())
}
