use std::fs;
use std::path::Path;

use overfit_forge::grid::format_f64;
use overfit_forge::{Mlp, Target};
use serde_json::json;

use crate::args::{EvaluateArgs, PlotArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

fn parse_point(s: &str, d: usize) -> CliResult<Vec<f64>> {
    let x: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("cannot parse point '{s}'")))?;
    if x.len() != d {
        return Err(CliError::usage(format!("point '{s}' has {} coordinates, the network takes {d}", x.len())));
    }
    Ok(x)
}

/// Points from a CSV with a header row; only the first `d` columns are used.
fn read_points(path: &Path, d: usize) -> CliResult<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() < d {
                return Err(CliError::usage(format!("row '{line}' has fewer than {d} columns")));
            }
            parse_point(&cols[..d].join(","), d)
        })
        .collect()
}

fn header(names: impl IntoIterator<Item = String>) -> String {
    names.into_iter().collect::<Vec<_>>().join(",") + "\n"
}

fn row(values: &[f64]) -> String {
    values.iter().map(|&v| format_f64(v)).collect::<Vec<_>>().join(",") + "\n"
}

pub fn evaluate(args: &EvaluateArgs, argv: &[String]) -> CliResult<()> {
    let net = Mlp::load(&args.net)?;
    let d = net.input_dim();
    let mut pts = args.x.iter().map(|s| parse_point(s, d)).collect::<CliResult<Vec<_>>>()?;
    if let Some(path) = &args.points {
        pts.extend(read_points(path, d)?);
    }
    if pts.is_empty() {
        return Err(CliError::usage("give at least one --x point or a --points file"));
    }
    let mut out = header((1..=d).map(|i| format!("x{i}")).chain(["f".to_string()]));
    for x in &pts {
        let mut values = x.clone();
        values.push(net.forward(x)?);
        out.push_str(&row(&values));
    }
    match &args.out {
        Some(path) => {
            fs::write(path, out)?;
            Manifest::new("evaluate", argv, json!({ "points": pts.len() })).write(&[path.as_path()])?;
        }
        None => print!("{out}"),
    }
    Ok(())
}

/// `(index, value)` pairs from `--slice i=v` (1-based, an `x` prefix is allowed).
fn parse_slices(slices: &[String], d: usize) -> CliResult<Vec<(usize, f64)>> {
    slices
        .iter()
        .map(|s| {
            let (i, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("slice '{s}' is not of the form i=value")))?;
            let i: usize = i
                .trim()
                .trim_start_matches('x')
                .parse()
                .map_err(|_| CliError::usage(format!("bad input index in slice '{s}'")))?;
            let v: f64 = v.trim().parse().map_err(|_| CliError::usage(format!("bad value in slice '{s}'")))?;
            if i == 0 || i > d {
                return Err(CliError::usage(format!("slice index {i} is outside 1..={d}")));
            }
            Ok((i - 1, v))
        })
        .collect()
}

pub fn plot_data(args: &PlotArgs, argv: &[String]) -> CliResult<()> {
    let net = Mlp::load(&args.net)?;
    let d = net.input_dim();
    let other = args.against.as_deref().map(Mlp::load).transpose()?;
    if let Some(g) = &other {
        if g.input_dim() != d {
            return Err(CliError::usage("--against network has a different input dimension"));
        }
    }
    let reference = args.reference.as_deref().map(Target::parse).transpose()?;
    let fixed = parse_slices(&args.slices, d)?;
    let free: Vec<usize> = (0..d).filter(|i| !fixed.iter().any(|(j, _)| j == i)).collect();
    if free.is_empty() || free.len() > 2 {
        return Err(CliError::usage(format!(
            "{} inputs are free; fix inputs with --slice until one or two remain",
            free.len()
        )));
    }
    if !(args.resolution > 0.0 && args.resolution <= 1.0) {
        return Err(CliError::usage("resolution must be in (0, 1]"));
    }
    let m = (1.0 / args.resolution).round().max(1.0) as usize;
    let total = (m + 1).pow(free.len() as u32);
    if total > 50_000_000 {
        return Err(CliError::usage(format!("{total} rows requested; use a coarser resolution")));
    }

    let mut names: Vec<String> = free.iter().map(|i| format!("x{}", i + 1)).collect();
    names.push("f".into());
    if reference.is_some() {
        names.push("reference".into());
    }
    if other.is_some() {
        names.extend(["g".to_string(), "f_minus_g".to_string()]);
    }
    let mut out = header(names);
    let mut x = vec![0.0; d];
    for (j, v) in &fixed {
        x[*j] = *v;
    }
    for flat in 0..total {
        let mut rest = flat;
        for &axis in free.iter().rev() {
            x[axis] = (rest % (m + 1)) as f64 / m as f64;
            rest /= m + 1;
        }
        let mut values: Vec<f64> = free.iter().map(|&i| x[i]).collect();
        let f = net.forward_unchecked(&x);
        values.push(f);
        if let Some(r) = &reference {
            values.push(r.eval(&x));
        }
        if let Some(g) = &other {
            let gv = g.forward_unchecked(&x);
            values.extend([gv, f - gv]);
        }
        out.push_str(&row(&values));
    }
    fs::write(&args.out, out)?;
    let params = json!({
        "resolution": args.resolution,
        "free_inputs": free.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "rows": total,
    });
    Manifest::new("plot-data", argv, params).write(&[args.out.as_path()])?;
    println!("{total} rows -> {}", args.out.display());
    Ok(())
}
