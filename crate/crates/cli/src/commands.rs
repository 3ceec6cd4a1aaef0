use std::path::Path;

use serde_json::{json, Value};
use switchstab_core::bounds::{
    algorithm1_upper, best_response_profile, best_response_upper, cone_lower_bound,
    subradius_norm_upper, sv_lower_bound, Certification,
};
use switchstab_core::ct_sim::{
    sample_hold_simulate, shift_scaling_check, Choice, CtSystem, GreedyFeedback, Schedule, Segment,
};
use switchstab_core::instances::{
    by_name, stanford_urbano, stanford_urbano_products, INSTANCE_NAMES,
};
use switchstab_core::lyapunov::{
    decrease_ratio, decrease_ratio_at, exceedance_fraction, extract_feedback, v_hat, v_lambda,
    AngularGrid, ValueKind, ValueTable,
};
use switchstab_core::orbit::{
    density_gap, explore_orbit, mod4_invariant, rotation_check, RationalDirection,
};
use switchstab_core::Enumerator;

use crate::args::{BoundsArgs, CaseArgs, CtArgs, ExportArgs, Kind, LyapArgs, Method, OrbitArgs};
use crate::error::{CliError, Result};
use crate::input::{self, LoadedInput, MatrixSetFile};
use crate::report::{
    certified, diagnostic, diagnostic_count, empirical, exact_count, number, with_status, Status,
};
use crate::svg::{Plot, Series};

/// Payload plus the digest of the analysed input, if any.
pub struct Outcome {
    pub payload: Value,
    pub digest: Option<String>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn status_of(c: Certification) -> Status {
    match c {
        Certification::Certified => Status::Certified,
        Certification::Empirical => Status::Empirical,
        Certification::Diagnostic => Status::Diagnostic,
    }
}

fn input_json(input: &LoadedInput) -> Value {
    json!({ "source": input.source, "dim": input.set.dim(), "modes": input.set.len() })
}

pub fn bounds(args: &BoundsArgs) -> Result<Outcome> {
    let input = input::load(&args.input)?;
    let set = &input.set;
    let labels = set.labels();
    let e = Enumerator {
        dedup_tol: args.dedup_tol,
        cap: args.cap,
    };
    let mut payload = match args.method {
        Method::Sv => {
            let r = sv_lower_bound(set, args.t_max, &e)?;
            let per: Vec<Value> = r
                .per_horizon
                .iter()
                .map(|&(t, v)| json!({ "t": t, "lower": certified(v) }))
                .collect();
            json!({ "method": "sv", "t_max": args.t_max, "per_horizon": per, "best": certified(r.best) })
        }
        Method::Cone => {
            let mut per = Vec::new();
            let mut best: Option<(f64, Value)> = None;
            for t in 1..=args.t_max {
                let (r, cert) = cone_lower_bound(set, t, &e)?;
                let v = r.best;
                per.push(json!({ "t": t, "lower": certified(v) }));
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    let witness = json!({
                        "horizon": cert.horizon,
                        "lambda": number(cert.lambda),
                        "v": cert.v.iter().map(|&x| number(x)).collect::<Vec<_>>(),
                        "residual": diagnostic(cert.residual),
                    });
                    best = Some((v, witness));
                }
            }
            let (b, witness) = best.expect("t_max ≥ 1 was checked by the first call");
            json!({ "method": "cone", "t_max": args.t_max, "per_horizon": per, "best": certified(b), "witness": witness })
        }
        Method::Alg1 => {
            let reports = algorithm1_upper(set, args.t_max, args.grid, &e)?;
            let per: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "t": r.horizon,
                        "empirical": empirical(r.empirical),
                        "upper": with_status(r.certified, status_of(r.certification)),
                        "lipschitz_pad": diagnostic(r.lipschitz_pad),
                        "argmax_angle": r.argmax_angle.map(diagnostic),
                    })
                })
                .collect();
            let best = reports
                .iter()
                .min_by(|a, b| a.certified.total_cmp(&b.certified))
                .expect("at least one horizon");
            json!({
                "method": "alg1",
                "t_max": args.t_max,
                "grid": args.grid,
                "per_horizon": per,
                "best": with_status(best.certified, status_of(best.certification)),
                "best_horizon": best.horizon,
                "contracting": best.is_contracting(),
            })
        }
        Method::BestResponse => {
            let (r, map) = best_response_upper(set, args.t_bar, args.grid, None, &e)?;
            let arcs: Vec<Value> = map
                .arcs
                .iter()
                .map(|a| {
                    json!({
                        "start": number(a.start),
                        "end": number(a.end),
                        "word": a.word.display_with(labels),
                        "rate": certified(a.rate),
                    })
                })
                .collect();
            json!({
                "method": "best-response",
                "t_bar": args.t_bar,
                "grid": args.grid,
                "empirical": empirical(r.empirical),
                "upper": with_status(r.certified, status_of(r.certification)),
                "lipschitz_pad": diagnostic(r.lipschitz_pad),
                "argmax_angle": r.argmax_angle.map(diagnostic),
                "contracting": r.is_contracting(),
                "arc_count": exact_count(map.arcs.len()),
                "arcs": arcs,
            })
        }
    };
    payload["input"] = input_json(&input);
    Ok(Outcome {
        payload,
        digest: Some(input.digest),
    })
}

fn table_csv(table: &ValueTable<f64>) -> String {
    let mut out = String::from("angle,value\n");
    for (k, v) in table.values.iter().enumerate() {
        out.push_str(&format!("{:.16e},{:.16e}\n", table.grid.angle::<f64>(k), v));
    }
    out
}

fn level_set_plot(table: &ValueTable<f64>) -> Plot {
    let n = table.grid.len();
    let points = (0..=2 * n)
        .map(|k| {
            let theta = std::f64::consts::PI * k as f64 / n as f64;
            let r = 1.0 / table.values[k % n];
            (r * theta.cos(), r * theta.sin())
        })
        .collect();
    Plot {
        title: format!("Level set V(x) = 1, lambda = {}", table.lambda),
        x_label: "x1".into(),
        y_label: "x2".into(),
        series: vec![Series::new("V = 1", "steelblue", points)],
        equal_aspect: true,
    }
}

fn ratio_plot(table: &ValueTable<f64>, ratios: &[f64]) -> Plot {
    let angles: Vec<f64> = table.grid.angles();
    let pts = angles.iter().copied().zip(ratios.iter().copied()).collect();
    let last = std::f64::consts::PI;
    Plot {
        title: format!("Decrease ratio, lambda = {}", table.lambda),
        x_label: "angle (rad)".into(),
        y_label: "min_i V(A_i x) / V(x)".into(),
        series: vec![
            Series::new("ratio", "steelblue", pts),
            Series::new(
                "lambda",
                "firebrick",
                vec![(0.0, table.lambda), (last, table.lambda)],
            ),
        ],
        equal_aspect: false,
    }
}

pub fn lyap(args: &LyapArgs) -> Result<Outcome> {
    let input = input::load(&args.input)?;
    let set = &input.set;
    let grid = AngularGrid::new(args.grid)?;
    let table = match args.kind {
        Kind::Vhat => v_hat(set, args.lambda, &grid, args.max_iter, args.tol)?,
        Kind::Vlam => v_lambda(set, args.lambda, args.horizon, &grid)?,
    };
    if table.kind == ValueKind::VHat && !table.converged {
        return Err(CliError::NonConvergence(format!(
            "value iteration did not converge within {} sweeps (increment {:e} > {:e})",
            table.iterations, table.residual, args.tol
        )));
    }
    let ratios = decrease_ratio(&table, set)?;
    let mid = decrease_ratio_at(&table, set, &grid.midpoints())?;
    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let feedback = match args.feedback {
        Some(mu) => {
            let part = extract_feedback(&table, set, mu)?;
            let arcs: Vec<Value> = part
                .arcs
                .iter()
                .map(|a| {
                    json!({
                        "start": number(a.start),
                        "end": number(a.end),
                        "mode": set.labels()[a.mode],
                        "check_ratio": empirical(a.check_ratio),
                    })
                })
                .collect();
            json!({ "requested_mu": number(part.requested_mu), "mu": empirical(part.mu), "arcs": arcs })
        }
        None => Value::Null,
    };

    if let Some(path) = &args.csv {
        write_file(path, &table_csv(&table))?;
    }
    if let Some(path) = &args.plot {
        write_file(path, &level_set_plot(&table).render())?;
    }
    if let Some(path) = &args.ratio_plot {
        write_file(path, &ratio_plot(&table, &ratios).render())?;
    }

    let payload = json!({
        "input": input_json(&input),
        "kind": match table.kind { ValueKind::VHat => "vhat", ValueKind::VLambda => "vlam" },
        "lambda": number(args.lambda),
        "grid": args.grid,
        "horizon": if args.kind == Kind::Vlam { Value::from(args.horizon) } else { Value::Null },
        "iterations": diagnostic_count(table.iterations),
        "converged": table.converged,
        "residual": diagnostic(table.residual),
        "min_value": empirical(table.min_value()),
        "max_value": empirical(table.max_value()),
        "ratio": {
            "max_nodes": empirical(max(&ratios)),
            "exceedance_nodes": diagnostic(exceedance_fraction(&ratios, args.lambda)),
            "max_midpoints": empirical(max(&mid)),
            "exceedance_midpoints": diagnostic(exceedance_fraction(&mid, args.lambda)),
        },
        "feedback": feedback,
    });
    Ok(Outcome {
        payload,
        digest: Some(input.digest),
    })
}

pub fn orbit(args: &OrbitArgs) -> Result<Outcome> {
    let queries = args
        .query
        .iter()
        .map(|q| {
            q.parse::<RationalDirection>()
                .map_err(|e| CliError::Input(format!("--query {q}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let graph = explore_orbit(args.depth, args.node_cap)?;
    let violations = graph.invariant_violations();
    let mut layer_sizes = vec![0usize; args.depth + 1];
    for &l in &graph.layers {
        layer_sizes[l] += 1;
    }
    let mut payload = json!({
        "depth": args.depth,
        "nodes": exact_count(graph.len()),
        "edges": exact_count(graph.edges.len()),
        "layer_sizes": layer_sizes,
        "invariant_violations": exact_count(violations.len()),
        "violating_nodes": violations.iter().take(10).map(|d| d.to_string()).collect::<Vec<_>>(),
        "queries": queries.iter().map(|d| json!({
            "tangent": d.to_string(),
            "present": graph.contains(d),
            "satisfies_invariant": mod4_invariant(d),
        })).collect::<Vec<_>>(),
    });
    if args.rotation {
        let r = rotation_check();
        payload["rotation"] = json!({
            "trace": diagnostic(r.trace),
            "determinant": diagnostic(r.determinant),
            "nonreal": r.nonreal,
            "eigen_moduli": [diagnostic(r.eigen_moduli.0), diagnostic(r.eigen_moduli.1)],
            "theta": diagnostic(r.theta),
            "cos_2theta": diagnostic(r.cos_2theta),
            "cos_2theta_exact": r.cos_2theta_exact.to_string(),
            "cos_2theta_exact_value": certified(*r.cos_2theta_exact.numer() as f64 / *r.cos_2theta_exact.denom() as f64),
            "trace_identity_residual": diagnostic(r.trace_identity_residual),
        });
    }
    if !args.density.is_empty() {
        let gaps = args
            .density
            .iter()
            .map(|&n| Ok(json!({ "n": n, "max_gap": diagnostic(density_gap(n)?) })))
            .collect::<Result<Vec<_>>>()?;
        payload["density"] = Value::from(gaps);
    }
    if let Some(path) = &args.edges {
        write_file(path, &graph.edge_list())?;
    }
    Ok(Outcome {
        payload,
        digest: None,
    })
}

pub fn case_stanford(args: &CaseArgs) -> Result<Outcome> {
    if args.grid == 0 {
        return Err(CliError::Input("--grid must be positive".into()));
    }
    let inst = stanford_urbano::<f64>();
    let set = &inst.set;
    let loaded = input::builtin(&inst.name, set);
    let e = Enumerator::default();
    let words = stanford_urbano_products();
    let angles: Vec<f64> = (0..args.grid)
        .map(|k| std::f64::consts::PI * k as f64 / args.grid as f64)
        .collect();
    let profile = best_response_profile(set, &words, &angles)?;
    let (k_max, f_max) =
        profile
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, v)| if v > acc.1 { (k, v) } else { acc },
            );
    let sv = sv_lower_bound(set, 4, &e)?;
    let sub = subradius_norm_upper(set, 10, &e)?;
    let alg1 = algorithm1_upper(set, 4, 4096, &e)?;
    let r4 = &alg1[3];

    if let Some(path) = &args.csv {
        let mut out = String::from("angle,F\n");
        for (a, f) in angles.iter().zip(&profile) {
            out.push_str(&format!("{a:.16e},{f:.16e}\n"));
        }
        write_file(path, &out)?;
    }
    if let Some(path) = &args.plot {
        let plot = Plot {
            title: "F(alpha) = min_i |A[i] z_alpha|^(1/t_i)".into(),
            x_label: "alpha (rad)".into(),
            y_label: "F".into(),
            series: vec![
                Series::new(
                    "F",
                    "steelblue",
                    angles
                        .iter()
                        .copied()
                        .zip(profile.iter().copied())
                        .collect(),
                ),
                Series::new(
                    format!("max = {f_max:.4}"),
                    "firebrick",
                    vec![(0.0, f_max), (std::f64::consts::PI, f_max)],
                ),
            ],
            equal_aspect: false,
        };
        write_file(path, &plot.render())?;
    }

    let payload = json!({
        "input": input_json(&loaded),
        "words": words.iter().map(|w| w.display_with(set.labels())).collect::<Vec<_>>(),
        "grid": args.grid,
        "max_f": empirical(f_max),
        "argmax_angle": diagnostic(angles[k_max]),
        "sv_lower_bound": { "t_max": 4, "value": certified(sv.best) },
        "subradius_norm_upper": {
            "t_max": 10,
            "value": certified(sub.value),
            "word": sub.word.display_with(set.labels()),
            "horizon": sub.horizon,
        },
        "algorithm1": {
            "t": r4.horizon,
            "grid": r4.grid_size,
            "upper": with_status(r4.certified, status_of(r4.certification)),
            "empirical": empirical(r4.empirical),
        },
        "reference_rate": diagnostic(0.9f64.powf(0.25)),
    });
    Ok(Outcome {
        payload,
        digest: Some(loaded.digest),
    })
}

pub fn ct(args: &CtArgs) -> Result<Outcome> {
    let input = input::load(&args.input)?;
    let d = input.set.dim();
    let x0 = match &args.x0 {
        Some(x) => x.clone(),
        None => {
            let mut e1 = vec![0.0; d];
            e1[0] = 1.0;
            e1
        }
    };
    if x0.len() != d {
        return Err(CliError::Input(format!(
            "--x0: expected {d} components, found {}",
            x0.len()
        )));
    }
    let sys = CtSystem::new(input.set.clone());
    let feedback = GreedyFeedback::new(&sys, args.delta)?;
    let traj = sample_hold_simulate(&sys, &feedback, args.delta, &x0, args.horizon)?;
    let switches = traj.modes.windows(2).filter(|w| w[0] != w[1]).count();

    let shift = match args.shift_gamma {
        Some(gamma) => {
            let segments = traj
                .modes
                .iter()
                .zip(traj.times.windows(2))
                .map(|(&m, t)| Segment {
                    choice: Choice::Mode(m),
                    duration: t[1] - t[0],
                })
                .collect();
            let report = shift_scaling_check(&sys, gamma, &Schedule::new(segments)?, &x0)?;
            let t_end = *report.times.last().expect("nonempty schedule");
            json!({
                "gamma": number(gamma),
                "checked_times": report.times.len(),
                "max_relative_error": diagnostic(report.max_relative_error),
                "final_norm_ratio": empirical(*report.norm_ratios.last().expect("nonempty schedule")),
                "expected_ratio": diagnostic((gamma * t_end).exp()),
            })
        }
        None => Value::Null,
    };

    if let Some(path) = &args.csv {
        write_file(path, &traj.to_csv())?;
    }
    let payload = json!({
        "input": input_json(&input),
        "delta": number(args.delta),
        "horizon": number(args.horizon),
        "x0": x0.iter().map(|&x| number(x)).collect::<Vec<_>>(),
        "steps": traj.modes.len(),
        "switches": exact_count(switches),
        "diverged": traj.diverged,
        "final_norm": empirical(traj.final_norm()),
        "max_norm": empirical(traj.max_norm()),
        "decay_per_step": empirical(traj.decay_per_step()),
        "shift_check": shift,
    });
    Ok(Outcome {
        payload,
        digest: Some(input.digest),
    })
}

pub fn export(args: &ExportArgs) -> Result<Outcome> {
    let inst = by_name::<f64>(&args.name).ok_or_else(|| {
        CliError::Input(format!(
            "unknown instance {:?}; known: {}",
            args.name,
            INSTANCE_NAMES.join(", ")
        ))
    })?;
    let text = MatrixSetFile::from_set(&inst.set).to_json();
    write_file(&args.out, &text)?;
    Ok(Outcome {
        payload: json!({ "instance": inst.name, "path": args.out.display().to_string() }),
        digest: Some(input::digest(text.as_bytes())),
    })
}
