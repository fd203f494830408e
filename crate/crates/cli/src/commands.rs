use serde_json::json;

use rxnpack::analysis::{
    binding_fraction, detect_period_series, ensemble_stats, initial_rate_ensemble, mean_and_sem, PeriodConfig,
};
use rxnpack::dsl::{apply_directives_report, document_from_network, serialize_model, Arg, Directive, DslError, Expr};
use rxnpack::reproduce::{conservation_violations, reproduce, Options, Target};
use rxnpack::sim::io::{fmt_num, summary_csv, to_json_pretty, trajectory_csv};
use rxnpack::sim::{run_ensemble_with, simulate_ode, Ensemble, Execution, OdeConfig, SsaConfig};

use crate::output::{build, load_model, out_dir, write_file, write_outputs, LoadedModel, Metadata, ModelInfo};
use crate::{
    AnalyzeArgs, AnalyzeKind, CliError, Command, EnsembleArgs, OdeArgs, ReproduceArgs, SimulateArgs, UnpackArgs, ValidateArgs,
};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Ode(a) => ode(a),
        Command::Unpack(a) => unpack(a),
        Command::Analyze(a) => analyze(a),
        Command::Reproduce(a) => reproduce_target(a),
        Command::Validate(a) => validate(a),
    }
}

fn execution(serial: bool) -> Execution {
    if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Input(format!("--{name} must be positive, got {v}")))
    }
}

struct EnsembleRun {
    model: LoadedModel,
    network: rxnpack::ReactionNetwork,
    ensemble: Ensemble,
    args: Vec<String>,
}

fn run_ensemble_args(a: &EnsembleArgs, command: &str) -> Result<EnsembleRun, CliError> {
    let model = load_model(&a.model)?;
    let network = build(&model)?.network;
    let t_end = positive("t-end", a.t_end)?;
    let dt = positive("dt", a.dt.unwrap_or(t_end / 200.0))?;
    if a.runs == 0 {
        return Err(CliError::Input("--runs must be at least 1".into()));
    }
    let config = SsaConfig::new(t_end, a.seed).with_dt(dt);
    let ensemble =
        run_ensemble_with(&network, &config, a.runs, execution(a.serial)).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut args = vec![
        command.to_string(),
        a.model.clone(),
        "--runs".into(),
        a.runs.to_string(),
        "--t-end".into(),
        fmt_num(t_end),
        "--dt".into(),
        fmt_num(dt),
        "--seed".into(),
        a.seed.to_string(),
    ];
    if a.serial {
        args.push("--serial".into());
    }
    Ok(EnsembleRun { model, network, ensemble, args })
}

fn model_info(model: &LoadedModel, network: &rxnpack::ReactionNetwork) -> ModelInfo {
    ModelInfo { source: model.source.clone(), fingerprint: network.fingerprint() }
}

fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let dir = out_dir(a.ensemble.out.as_deref(), "simulate");
    let mut r = run_ensemble_args(&a.ensemble, "simulate")?;
    let stats = ensemble_stats(&r.ensemble).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut files = vec![("summary.csv".to_string(), summary_csv(&stats))];
    if a.trajectories {
        r.args.push("--trajectories".into());
        for (i, rep) in r.ensemble.replicates.iter().enumerate() {
            files.push((format!("replicate_{i:04}.csv"), trajectory_csv(rep)));
        }
    }
    let violations = conservation_violations(&r.network, &r.ensemble).map_err(|e| CliError::Compute(e.to_string()))?;
    let conservations: Vec<String> = r.network.conservations.iter().map(|c| c.to_string()).collect();
    let events: u64 = r.ensemble.replicates.iter().map(|t| t.events).sum();
    r.args.extend(["--out".into(), dir.display().to_string()]);
    let mut meta = Metadata::new(&r.args, Some(a.ensemble.seed), Some(model_info(&r.model, &r.network)));
    meta.result = Some(json!({
        "runs": r.ensemble.len(),
        "events": events,
        "conservations": conservations,
        "conservation_violations": violations,
    }));
    write_outputs(&dir, &files, meta)?;
    println!("{} runs of {} written to {}", r.ensemble.len(), r.model.source, dir.display());
    if violations > 0 {
        return Err(CliError::Compute(format!("{violations} conservation violations")));
    }
    Ok(())
}

fn ode(a: OdeArgs) -> Result<(), CliError> {
    let dir = out_dir(a.out.as_deref(), "ode");
    let model = load_model(&a.model)?;
    let network = build(&model)?.network;
    let t_end = positive("t-end", a.t_end)?;
    let dt = positive("dt", a.dt.unwrap_or(t_end / 200.0))?;
    let config =
        OdeConfig::new(t_end).with_tolerances(positive("rtol", a.rtol)?, positive("atol", a.atol)?).with_output_dt(Some(dt));
    let traj = simulate_ode(&network, &config).map_err(|e| CliError::Compute(e.to_string()))?;
    let args = vec![
        "ode".to_string(),
        a.model.clone(),
        "--t-end".into(),
        fmt_num(t_end),
        "--dt".into(),
        fmt_num(dt),
        "--rtol".into(),
        format!("{:e}", a.rtol),
        "--atol".into(),
        format!("{:e}", a.atol),
        "--out".into(),
        dir.display().to_string(),
    ];
    let mut meta = Metadata::new(&args, None, Some(model_info(&model, &network)));
    meta.result = Some(json!({ "steps": traj.events, "termination": traj.termination }));
    write_outputs(&dir, &[("ode.csv".into(), trajectory_csv(&traj))], meta)?;
    println!("ODE solution of {} written to {}", model.source, dir.display());
    Ok(())
}

fn numbers(spec: &str, flag: &str, n: usize) -> Result<(String, Vec<f64>), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Input(format!("--{flag} {spec}: expected REACTION followed by {n} numbers separated by `:`"));
    if parts.len() != n + 1 || parts[0].is_empty() {
        return Err(bad());
    }
    let values = parts[1..].iter().map(|p| p.parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
    Ok((parts[0].to_string(), values))
}

fn unpack(a: UnpackArgs) -> Result<(), CliError> {
    let mut model = load_model(&a.model)?;
    let value = |v: f64| Arg::Value(Expr::Number(v));
    for spec in &a.mm {
        let (reaction, v) = numbers(spec, "mm", 2)?;
        model.document.directives.push(Directive::UnpackMm { reaction, etot: value(v[0]), rho: value(v[1]), enzyme: None });
    }
    for spec in &a.hill {
        let (reaction, v) = numbers(spec, "hill", 3)?;
        model.document.directives.push(Directive::UnpackHill {
            reaction,
            k1: value(v[0]),
            s1: value(v[1]),
            s2: value(v[2]),
            gene: None,
            dimer: None,
            complex: None,
        });
    }
    let has_unpack =
        model.document.directives.iter().any(|d| matches!(d, Directive::UnpackMm { .. } | Directive::UnpackHill { .. }));
    if !has_unpack {
        return Err(CliError::Input(format!("{}: nothing to unpack; add an unpack directive or --mm/--hill", model.source)));
    }
    let applied = apply_directives_report(&model.document).map_err(|e| match e {
        DslError::Template(_) => CliError::Compute(format!("{}: {e}", model.source)),
        _ => CliError::Input(format!("{}: {e}", model.source)),
    })?;
    let text = serialize_model(&document_from_network(&applied.network));
    let report = json!({
        "model": model.source,
        "expansions": applied.expansions,
        "warnings": applied.warnings,
        "all_assumptions_hold": applied.expansions.iter().all(|x| x.all_assumptions_hold()),
    });
    for x in &applied.expansions {
        for c in &x.assumptions {
            eprintln!("{} {}: {}", if c.passed { "ok  " } else { "WARN" }, x.replaced_reaction, c.detail);
        }
    }
    match a.out {
        Some(path) => {
            write_file(&path, &text)?;
            let report_path = path.with_extension("report.json");
            write_file(&report_path, &to_json_pretty(&report))?;
            println!("{} expansions written to {} and {}", applied.expansions.len(), path.display(), report_path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_observable(spec: &str) -> Result<Vec<(String, f64)>, CliError> {
    spec.split(',')
        .map(|part| {
            let (name, w) = part.split_once(':').unwrap_or((part, "1"));
            let w = w.parse::<f64>().map_err(|_| CliError::Input(format!("bad weight in observable term `{part}`")))?;
            if name.is_empty() {
                return Err(CliError::Input(format!("empty species in observable `{spec}`")));
            }
            Ok((name.to_string(), w))
        })
        .collect()
}

fn analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let dir = out_dir(a.ensemble.out.as_deref(), "analyze");
    let mut r = run_ensemble_args(&a.ensemble, "analyze")?;
    r.args.extend(["--out".into(), dir.display().to_string()]);
    let fail = |e: rxnpack::analysis::AnalysisError| CliError::Compute(e.to_string());
    let result = match &a.kind {
        AnalyzeKind::Rate { product, s0, cap } => {
            r.args.extend([
                "rate".into(),
                "--product".into(),
                product.clone(),
                "--s0".into(),
                fmt_num(*s0),
                "--cap".into(),
                fmt_num(*cap),
            ]);
            let est = initial_rate_ensemble(&r.ensemble, product, *s0, *cap).map_err(fail)?;
            json!({ "kind": "rate", "product": product, "rate": est.rate, "sem": est.se, "window_samples": est.samples })
        }
        AnalyzeKind::Binding { bound, total, burn_in } => {
            r.args.extend([
                "binding".into(),
                "--bound".into(),
                bound.clone(),
                "--total".into(),
                total.to_string(),
                "--burn-in".into(),
                fmt_num(*burn_in),
            ]);
            let f = binding_fraction(&r.ensemble, bound, *total, *burn_in).map_err(fail)?;
            json!({ "kind": "binding", "bound": bound, "total": total, "fraction": f })
        }
        AnalyzeKind::Period { observable, smoothing, burn_in } => {
            r.args.extend([
                "period".into(),
                "--observable".into(),
                observable.clone(),
                "--smoothing".into(),
                fmt_num(*smoothing),
                "--burn-in".into(),
                fmt_num(*burn_in),
            ]);
            let terms = parse_observable(observable)?;
            let weights: Vec<(&str, f64)> = terms.iter().map(|(n, w)| (n.as_str(), *w)).collect();
            let config = PeriodConfig::new(*smoothing).with_burn_in(*burn_in);
            let mut periods = Vec::new();
            let mut replicates = Vec::new();
            for rep in &r.ensemble.replicates {
                let series =
                    rep.combined(&weights).ok_or_else(|| CliError::Input(format!("unknown species in `{observable}`")))?;
                let est = detect_period_series(&rep.times, &series, &config).map_err(fail)?;
                if est.oscillating {
                    periods.push(est.period);
                }
                replicates.push(json!({ "oscillating": est.oscillating, "period": est.period, "peaks": est.n_peaks }));
            }
            let (mean, sem) = if periods.len() >= 2 { mean_and_sem(&periods) } else { (f64::NAN, f64::NAN) };
            json!({ "kind": "period", "observable": observable, "oscillating_replicates": periods.len(), "mean_period": mean, "sem": sem, "replicates": replicates })
        }
    };
    let mut meta = Metadata::new(&r.args, Some(a.ensemble.seed), Some(model_info(&r.model, &r.network)));
    meta.result = Some(result.clone());
    write_outputs(&dir, &[("analysis.json".into(), to_json_pretty(&result))], meta)?;
    println!("{}", serde_json::to_string(&result).expect("json"));
    Ok(())
}

fn reproduce_target(a: ReproduceArgs) -> Result<(), CliError> {
    let target: Target = a.target.parse().map_err(|e: rxnpack::reproduce::ReproduceError| CliError::Input(e.to_string()))?;
    let dir = out_dir(a.out.as_deref(), &format!("reproduce/{}", target.name()));
    let mut options = Options::new(a.seed);
    options.runs = a.runs;
    options.execution = execution(a.serial);
    let report = reproduce(target, &options).map_err(|e| CliError::Compute(e.to_string()))?;
    let mut args = vec![
        "reproduce".to_string(),
        target.name().into(),
        "--runs".into(),
        report.runs.to_string(),
        "--seed".into(),
        a.seed.to_string(),
    ];
    if a.serial {
        args.push("--serial".into());
    }
    args.extend(["--out".into(), dir.display().to_string()]);
    let mut meta = Metadata::new(&args, Some(a.seed), None);
    meta.result = Some(json!({ "passed": report.passed() }));
    write_outputs(&dir, &report.artifacts(), meta)?;
    for c in &report.checks {
        let tag = match (c.passed, c.informational) {
            (true, _) => "PASS",
            (false, true) => "info",
            (false, false) => "FAIL",
        };
        println!("{tag} {}: {}", c.name, c.detail);
    }
    println!("artifacts written to {}", dir.display());
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(CliError::Compute(format!("{} outside tolerance: {}", target.name(), failed.join(", "))))
    }
}

fn validate(a: ValidateArgs) -> Result<(), CliError> {
    let model = load_model(&a.model)?;
    let applied = build(&model)?;
    let net = &applied.network;
    println!(
        "{}: {} species, {} reactions, {} conservation laws",
        model.source,
        net.species.len(),
        net.reactions.len(),
        net.conservations.len()
    );
    for x in &applied.expansions {
        for c in &x.assumptions {
            println!("{} {}: {}", if c.passed { "ok  " } else { "WARN" }, x.replaced_reaction, c.detail);
        }
    }
    for w in &applied.warnings {
        println!("WARN {}: {}", w.species, w.message);
    }
    Ok(())
}
