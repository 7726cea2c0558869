use std::env;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use hartigan_core::io::{parse_points, scalar_json, PointFormat};
use hartigan_core::lower_bound::{verify_sequence_observed, PointLabel, TraceRecord};
use hartigan_core::scalar::rational_to_decimal;
use hartigan_core::search::{hw_run_observed, lloyd_run};
use hartigan_core::smoothed::{smoothed_sweep, SweepBase, SweepConfig, SweepRule};
use hartigan_core::{
    appendix_inequalities, build_instance, default_max_iters, init_clustering, is_hw_local_opt,
    is_lloyd_local_opt, scripted_sequence, InitStrategy, PivotRule, PointSet, Rational, Scalar,
    Termination,
};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::config::{pick, FileConfig};
use crate::{CliError, LowerboundArgs, RunArgs, SmoothedArgs};

pub const THREADS_ENV: &str = "HARTIGAN_LAB_THREADS";

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn input_format(path: &Path, flag: Option<&str>) -> PointFormat {
    match flag {
        Some("json") => PointFormat::Json,
        Some(_) => PointFormat::Csv,
        None => PointFormat::from_path(path),
    }
}

fn path_str(path: &Option<PathBuf>) -> Value {
    path.as_ref()
        .map_or(Value::Null, |p| Value::String(p.display().to_string()))
}

// ---------------------------------------------------------------- run

struct RunPlan {
    k: usize,
    algorithm: String,
    rule: String,
    init: String,
    seed: u64,
    max_iters: Option<usize>,
    config: Value,
}

enum Source {
    File(PathBuf, PointFormat),
    Gadget(usize),
}

fn read_assignment(path: &Path) -> Result<Vec<usize>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse().map_err(|_| {
                config_error(format!(
                    "{}: line {}: not a cluster id",
                    path.display(),
                    i + 1
                ))
            })
        })
        .collect()
}

pub fn run(args: RunArgs, file: &FileConfig, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let source = match (&args.input, args.gadget.or(file.m)) {
        (Some(path), _) => Source::File(path.clone(), input_format(path, args.format.as_deref())),
        (None, Some(m)) => Source::Gadget(m),
        (None, None) => return Err(config_error("either --input or --gadget is required")),
    };
    let mode = pick(args.mode.clone(), file.mode.clone(), "exact".into());
    let algorithm = pick(args.algorithm.clone(), file.algorithm.clone(), "hw".into());
    let is_gadget = matches!(source, Source::Gadget(_));
    let rule = pick(args.rule.clone(), file.rule.clone(), "first".into());
    let default_init = if is_gadget || args.assign.is_some() {
        "given"
    } else {
        "balanced"
    };
    let init = pick(args.init.clone(), file.init.clone(), default_init.into());

    if !["exact", "float", "f32"].contains(&mode.as_str()) {
        return Err(config_error(format!(
            "unknown mode {mode:?}; use exact, float or f32"
        )));
    }
    if !["hw", "lloyd"].contains(&algorithm.as_str()) {
        return Err(config_error(format!(
            "unknown algorithm {algorithm:?}; use hw or lloyd"
        )));
    }
    if !["first", "best", "random", "scripted"].contains(&rule.as_str()) {
        return Err(config_error(format!("unknown rule {rule:?}")));
    }
    if rule == "scripted" && !is_gadget {
        return Err(config_error(
            "the scripted rule requires a gadget instance (--gadget M)",
        ));
    }
    if !["balanced", "given"].contains(&init.as_str()) {
        return Err(config_error(format!(
            "unknown init {init:?}; use balanced or given"
        )));
    }
    if init == "given" && !is_gadget && args.assign.is_none() {
        return Err(config_error("--init given needs --assign PATH"));
    }

    let gadget = match source {
        Source::Gadget(m) => Some(build_instance(m)?),
        Source::File(..) => None,
    };
    let k = match &gadget {
        Some(g) => {
            if let Some(k) = args.k.filter(|&k| k != g.k()) {
                return Err(config_error(format!(
                    "gadget instance has k = {}, got --k {k}",
                    g.k()
                )));
            }
            g.k()
        }
        None => pick(args.k, file.k, 0),
    };
    if k == 0 {
        return Err(config_error("k is required"));
    }

    let seed = pick(args.seed, file.seed, 0);
    let max_iters = args.max_iters.or(file.max_iters);
    let plan = RunPlan {
        config: json!({
            "command": "run",
            "input": path_str(&args.input),
            "gadget": gadget.as_ref().map(|g| g.m),
            "k": k,
            "mode": mode,
            "algorithm": algorithm,
            "rule": rule,
            "init": init,
            "assign": path_str(&args.assign),
            "seed": seed,
            "max_iters": max_iters,
        }),
        k,
        algorithm,
        rule,
        init,
        seed,
        max_iters,
    };
    let given = match (&args.assign, &gadget) {
        (Some(path), _) => Some(read_assignment(path)?),
        (None, Some(g)) if plan.init == "given" => Some(g.initial.assignment().to_vec()),
        _ => None,
    };
    let labels = gadget.as_ref().map(|g| g.labels.clone());

    match (mode.as_str(), source, gadget) {
        ("exact", Source::File(path, fmt), _) => run_generic::<Rational>(
            parse_points(&path, fmt)?,
            given,
            labels,
            &plan,
            &args,
            stdout,
        ),
        ("float", Source::File(path, fmt), _) => run_generic::<f64>(
            parse_points(&path, fmt)?,
            given,
            labels,
            &plan,
            &args,
            stdout,
        ),
        (_, Source::File(path, fmt), _) => run_generic::<f32>(
            parse_points(&path, fmt)?,
            given,
            labels,
            &plan,
            &args,
            stdout,
        ),
        ("exact", Source::Gadget(_), Some(g)) => {
            run_generic(g.points, given, labels, &plan, &args, stdout)
        }
        ("float", Source::Gadget(_), Some(g)) => run_generic(
            g.points.map(Scalar::to_f64_lossy),
            given,
            labels,
            &plan,
            &args,
            stdout,
        ),
        (_, Source::Gadget(_), Some(g)) => run_generic(
            g.points.map(|v| v.to_f64_lossy() as f32),
            given,
            labels,
            &plan,
            &args,
            stdout,
        ),
        (_, Source::Gadget(_), None) => unreachable!("gadget source always builds an instance"),
    }
}

fn run_generic<S: Scalar>(
    points: PointSet<S>,
    given: Option<Vec<usize>>,
    labels: Option<Vec<PointLabel>>,
    plan: &RunPlan,
    args: &RunArgs,
    stdout: &mut dyn Write,
) -> Result<u8, CliError> {
    let strategy = match given {
        Some(assign) => InitStrategy::Given(assign),
        None => InitStrategy::BalancedRandom,
    };
    let init = init_clustering(&points, plan.k, &strategy, plan.seed)?;
    let max_iters = plan
        .max_iters
        .unwrap_or_else(|| default_max_iters(plan.k, points.dim()));
    let mut trace_out = args.trace.as_deref().map(create).transpose()?;
    let mut write_err: Option<io::Error> = None;

    let (summary, terminated) = if plan.algorithm == "lloyd" {
        let trace = lloyd_run(&points, &init, max_iters);
        if let Some(out) = trace_out.as_mut() {
            for (i, round) in trace.rounds.iter().enumerate() {
                let line = json!({
                    "round": i,
                    "reassigned": round.reassigned,
                    "potential": scalar_json(&round.potential),
                });
                writeln!(out, "{line}")?;
            }
        }
        let final_potential = trace
            .rounds
            .last()
            .map_or(trace.initial_potential.clone(), |r| r.potential.clone());
        let clustering = trace.clustering(&points).ok();
        let summary = json!({
            "iterations": trace.rounds.len(),
            "initial_potential": scalar_json(&trace.initial_potential),
            "final_potential": scalar_json(&final_potential),
            "terminated": trace.terminated.as_str(),
            "hw_local_opt": clustering.as_ref().map(|c| is_hw_local_opt(c, &points)),
            "lloyd_local_opt": clustering.as_ref().map(|c| is_lloyd_local_opt(c, &points)),
            "assignment": trace.assign,
        });
        (summary, trace.terminated)
    } else {
        let rule = match plan.rule.as_str() {
            "best" => PivotRule::BestImprovement,
            "random" => PivotRule::RandomImprovement { seed: plan.seed },
            "scripted" => {
                let m = points.len().div_ceil(4);
                PivotRule::scripted(scripted_sequence(m)?.iter().map(|s| s.as_move()))
            }
            _ => PivotRule::FirstImprovement,
        };
        let mut index = 0usize;
        let trace = hw_run_observed(&points, init, rule, max_iters, |mv, _| {
            if let (Some(out), None) = (trace_out.as_mut(), &write_err) {
                let mut line = json!({
                    "index": index,
                    "point": mv.point,
                    "src": mv.src,
                    "dst": mv.dst,
                    "gain": scalar_json(&mv.gain),
                });
                if let Some(labels) = &labels {
                    line["role"] = Value::String(labels[mv.point].to_string());
                }
                if let Err(e) = writeln!(out, "{line}") {
                    write_err = Some(e);
                }
            }
            index += 1;
        })?;
        if let Some(e) = write_err {
            return Err(e.into());
        }
        let summary = json!({
            "iterations": trace.iterations,
            "initial_potential": scalar_json(&trace.initial_potential),
            "final_potential": scalar_json(&trace.final_potential),
            "terminated": trace.terminated.as_str(),
            "hw_local_opt": is_hw_local_opt(&trace.clustering, &points),
            "lloyd_local_opt": is_lloyd_local_opt(&trace.clustering, &points),
            "assignment": trace.clustering.assignment(),
        });
        (summary, trace.terminated)
    };
    if let Some(mut out) = trace_out {
        out.flush()?;
    }

    writeln!(
        stdout,
        "iterations={} terminated={} final_potential={}",
        summary["iterations"],
        terminated.as_str(),
        summary["final_potential"]
    )?;
    if let Some(path) = &args.summary {
        let mut doc = json!({
            "config": plan.config,
            "scalar": S::NAME,
            "n": points.len(),
            "d": points.dim(),
            "k": plan.k,
        });
        doc.as_object_mut()
            .expect("object literal")
            .extend(summary.as_object().expect("object literal").clone());
        write_json(path, &doc)?;
    }
    Ok(match terminated {
        Termination::MaxIters => 2,
        _ => 0,
    })
}

// ---------------------------------------------------------- lowerbound

pub fn lowerbound(
    args: LowerboundArgs,
    file: &FileConfig,
    stdout: &mut dyn Write,
) -> Result<u8, CliError> {
    let m = args
        .m
        .or(file.m)
        .ok_or_else(|| config_error("--m is required"))?;
    let instance = build_instance(m)?;
    let script = scripted_sequence(m)?;
    writeln!(stdout, "m={m} n={} k={}", instance.n(), instance.k())?;

    if !(args.verify || args.trace.is_some() || args.report.is_some()) {
        writeln!(stdout, "moves={}", script.len())?;
        return Ok(0);
    }

    let mut trace_out = args.trace.as_deref().map(create).transpose()?;
    let mut write_err: Option<io::Error> = None;
    let outcome = verify_sequence_observed(&instance, &script, |index, mv, _| {
        if let (Some(out), None) = (trace_out.as_mut(), &write_err) {
            let record = TraceRecord::new(index, instance.labels[mv.point], mv);
            let written = serde_json::to_writer(&mut *out, &record)
                .map_err(io::Error::from)
                .and_then(|()| out.write_all(b"\n"));
            if let Err(e) = written {
                write_err = Some(e);
            }
        }
    });
    if let Some(e) = write_err {
        return Err(e.into());
    }
    if let Some(mut out) = trace_out {
        out.flush()?;
    }

    let report = match outcome {
        Ok(report) => report,
        Err(err) => {
            writeln!(stdout, "moves={} verification FAILED", script.len())?;
            return Err(CliError::Failed(err.to_string()));
        }
    };
    let positive = report.min_gain > Rational::zero();
    writeln!(
        stdout,
        "moves={} {}",
        report.moves,
        if positive {
            "min_gain>0"
        } else {
            "min_gain<=0"
        }
    )?;
    writeln!(
        stdout,
        "min_gain={} ({})",
        report.min_gain.encode(),
        rational_to_decimal(&report.min_gain, 6)
    )?;
    writeln!(stdout, "final_local_opt={}", report.final_is_local_opt)?;

    if let Some(path) = &args.report {
        let doc = json!({
            "config": {
                "command": "lowerbound",
                "m": m,
                "verify": args.verify,
                "trace": path_str(&args.trace),
            },
            "report": report,
        });
        write_json(path, &doc)?;
    }
    Ok(if positive { 0 } else { 1 })
}

// ------------------------------------------------------ verify-appendix

pub fn verify_appendix(stdout: &mut dyn Write) -> Result<u8, CliError> {
    let values = appendix_inequalities();
    let mut all_positive = true;
    for ineq in &values {
        all_positive &= ineq.value > Rational::zero();
        writeln!(
            stdout,
            "{}\t{}\t{}",
            ineq.name,
            ineq.value.encode(),
            rational_to_decimal(&ineq.value, 4)
        )?;
    }
    Ok(if all_positive { 0 } else { 1 })
}

// ------------------------------------------------------------- smoothed

fn env_threads() -> Result<Option<usize>, CliError> {
    match env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| config_error(format!("{THREADS_ENV}={v:?} is not a thread count"))),
        _ => Ok(None),
    }
}

pub fn smoothed(
    args: SmoothedArgs,
    file: &FileConfig,
    stdout: &mut dyn Write,
) -> Result<u8, CliError> {
    let mode = pick(args.mode.clone(), file.mode.clone(), "float".into());
    if mode != "float" {
        return Err(config_error(format!(
            "{mode} mode rejects Gaussian perturbation; sweeps run in float mode"
        )));
    }
    let rule_name = pick(args.rule.clone(), file.rule.clone(), "first".into());
    let rule = match rule_name.as_str() {
        "first" => SweepRule::First,
        "best" => SweepRule::Best,
        "random" => SweepRule::Random,
        "scripted" => {
            return Err(config_error(
                "the scripted rule cannot drive a perturbed sweep",
            ))
        }
        other => return Err(config_error(format!("unknown rule {other:?}"))),
    };
    let sigmas = pick(args.sigma.clone(), file.sigma.clone(), vec![0.1]);
    if let Some(bad) = sigmas.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
        return Err(config_error(format!("sigma must be ≥ 0, got {bad}")));
    }
    let trials = pick(args.trials, file.trials, 20);
    if trials == 0 {
        return Err(config_error("trials must be at least 1"));
    }
    let seed = pick(args.seed, file.seed, 0);
    let threads = match args.threads.or(file.threads) {
        Some(t) => Some(t),
        None => env_threads()?,
    };
    let rescale = !args.no_rescale && file.rescale.unwrap_or(true);

    let (base, base_desc) = match (&args.input, args.gadget.or(file.m)) {
        (Some(path), _) => {
            let k = args
                .k
                .or(file.k)
                .ok_or_else(|| config_error("--k is required with --input"))?;
            let points: PointSet<f64> =
                parse_points(path, input_format(path, args.format.as_deref()))?;
            if k > points.len() {
                return Err(config_error(format!(
                    "k = {k} exceeds n = {}",
                    points.len()
                )));
            }
            (
                SweepBase::Points { points, k },
                json!({ "input": path.display().to_string(), "k": k }),
            )
        }
        (None, Some(m)) => {
            let instance = build_instance(m)?;
            let desc = json!({ "gadget": m, "k": instance.k() });
            (SweepBase::Gadget(instance), desc)
        }
        (None, None) => return Err(config_error("either --input or --gadget is required")),
    };
    let cfg = SweepConfig {
        sigmas: sigmas.clone(),
        trials,
        seed,
        rule,
        max_iters: args.max_iters.or(file.max_iters),
        threads,
        rescale,
        timing: args.timing,
    };
    let config = json!({
        "command": "smoothed",
        "base": base_desc,
        "sigma": sigmas,
        "trials": trials,
        "seed": seed,
        "rule": rule,
        "max_iters": cfg.max_iters,
        "rescale": rescale,
        "timing": args.timing,
    });

    let result = smoothed_sweep(&base, &cfg)?;
    let csv = result.to_csv()?;
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut meta = path.clone().into_os_string();
            meta.push(".meta.json");
            write_json(Path::new(&meta), &json!({ "config": config }))?;
        }
        None => write!(stdout, "{csv}")?,
    }

    let per_sigma: Vec<Value> = sigmas
        .iter()
        .map(|&s| {
            let rows: Vec<_> = result.rows.iter().filter(|r| r.sigma == s).collect();
            json!({
                "sigma": s,
                "trials": rows.len(),
                "median_iterations": result.median_iterations(s),
                "max_iterations": rows.iter().map(|r| r.iterations).max(),
                "local_opt": rows.iter().filter(|r| r.terminated == Termination::LocalOpt).count(),
            })
        })
        .collect();
    if args.out.is_some() {
        for entry in &per_sigma {
            writeln!(
                stdout,
                "sigma={} median_iterations={} max_iterations={}",
                entry["sigma"], entry["median_iterations"], entry["max_iterations"]
            )?;
        }
    }
    if let Some(path) = &args.summary {
        write_json(path, &json!({ "config": config, "sigmas": per_sigma }))?;
    }
    Ok(0)
}
