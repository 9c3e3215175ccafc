//! Experiment runner and verification harness.
//!
//! Subcommands:
//!   geodesic  integrate one of the five geodesic models, emit CSV + JSON
//!   steer     steering constructions (rotation target or center target)
//!   martinet  the Martinet semi-rigidity variation experiment
//!   check     run the verification suites, emit a JSON report
//!
//! Every flag mirrors a config-file key 1:1 (`--config file` loads
//! defaults, flags override). Exit codes: 0 ok, 1 failed checks/runtime
//! error, 2 usage error, 3 numerical divergence (partial outputs flagged).

mod config;

use config::{Config, UsageError};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;
use virflow::checks::{run_suite, Suite};
use virflow::euler_arnold::{
    energy, energy_drift, integrate_partial, interpolate_fields, max_lambda_drift, max_mean,
    GeodesicState, IntegratorConfig, Lambda, ModelKind, Scheme,
};
use virflow::fourier::{CocycleParams, FourierField, MetricParams};
use virflow::group_flow::{central_lift, flow_from_log, DiffeoPath, FlowConfig};
use virflow::steering::{steer_to_rotation, steer_virasoro_center};
use virflow::{finite_sr, io};

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<virflow::Error> for Failure {
    fn from(e: virflow::Error) -> Self {
        match e {
            virflow::Error::Parameter(_) | virflow::Error::Input(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        eprintln!("{USAGE}");
        return ExitCode::from(2);
    }
    let command = args[0].clone();
    let rest = &args[1..];
    let outcome = match command.as_str() {
        "geodesic" => cmd_geodesic(rest),
        "steer" => cmd_steer(rest),
        "martinet" => cmd_martinet(rest),
        "check" => cmd_check(rest),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(0)
        }
        other => Err(Failure::Usage(format!("unknown command '{other}'"))),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}\n\n{USAGE}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

const USAGE: &str = "virflow <command> [--key value ...] [--config file]

commands:
  geodesic   --model h10|hab|vir10|virab|kahler [--alpha A --beta B]
             [--mu MU --nu NU] [--lambda L | --lambda1 L1 --lambda2 L2]
             --init FIELD [--n 64] [--m 256] [--dt 1e-3] [--steps 1000]
             [--scheme rk4|ifrk4] [--reconstruct true] [--out PREFIX]
  steer      --target-rotation DELTA [--tol 1e-4] [--grid 256] [--out PREFIX]
             or: --center-b0 B0 --center-b B --mu MU --nu NU [--out PREFIX]
  martinet   --v sin_pi|poly [--s 1e-2] [--samples 801] [--out PREFIX]
  check      [all|fourier|geodesic|group|su11|finite] [--seed 0] [--out PREFIX]

Field literals: dense 'a0,a1,b1,a2,b2,...' or triples '(k,re,im);(k,re,im)'.
VIRFLOW_OUTDIR redirects all outputs into the given directory.";

fn out_prefix(cfg: &Config, default_stem: &str) -> PathBuf {
    let prefix = cfg.str_or("out", default_stem).to_string();
    match std::env::var("VIRFLOW_OUTDIR") {
        Ok(dir) if !dir.is_empty() => {
            let stem = PathBuf::from(&prefix);
            let stem = stem
                .file_name()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or(prefix);
            PathBuf::from(dir).join(stem)
        }
        _ => PathBuf::from(prefix),
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Failure::Runtime(format!("cannot create {parent:?}: {e}")))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| Failure::Runtime(format!("cannot write {path:?}: {e}")))
}

// ---------------------------------------------------------------------------
// geodesic
// ---------------------------------------------------------------------------

const GEODESIC_KEYS: &[&str] = &[
    "model",
    "alpha",
    "beta",
    "mu",
    "nu",
    "lambda",
    "lambda1",
    "lambda2",
    "init",
    "n",
    "m",
    "dt",
    "steps",
    "scheme",
    "out",
    "seed",
    "reconstruct",
];

fn cmd_geodesic(args: &[String]) -> Result<u8, Failure> {
    let started = Instant::now();
    let (cfg, _) = Config::from_args(args, GEODESIC_KEYS)?;
    let band = cfg.usize_or("n", 64)?;
    let model_name = cfg.str_or("model", "h10").to_string();

    let metric = || -> Result<MetricParams, Failure> {
        Ok(MetricParams::new(
            cfg.f64_or("alpha", 1.0)?,
            cfg.f64_or("beta", 0.0)?,
            band,
        )?)
    };
    let cocycle = || -> Result<CocycleParams, Failure> {
        Ok(CocycleParams::new(
            cfg.f64_or("mu", 0.0)?,
            cfg.f64_or("nu", 1.0)?,
        ))
    };
    let scalar_lambda =
        || -> Result<Lambda, Failure> { Ok(Lambda::Scalar(cfg.f64_or("lambda", 0.0)?)) };
    let pair_lambda = || -> Result<Lambda, Failure> {
        Ok(Lambda::Pair(
            cfg.f64_or("lambda1", 0.0)?,
            cfg.f64_or("lambda2", 0.0)?,
        ))
    };

    let (model, lambda, default_scheme) = match model_name.as_str() {
        "h10" => (ModelKind::H10, scalar_lambda()?, Scheme::Rk4),
        "hab" => (ModelKind::Hab(metric()?), scalar_lambda()?, Scheme::Rk4),
        "vir10" => (ModelKind::Vir10(cocycle()?), pair_lambda()?, Scheme::IfRk4),
        "virab" => (
            ModelKind::Virab {
                metric: metric()?,
                cocycle: cocycle()?,
            },
            pair_lambda()?,
            Scheme::IfRk4,
        ),
        "kahler" => (ModelKind::Kahler(metric()?), scalar_lambda()?, Scheme::Rk4),
        other => return Err(Failure::Usage(format!("unknown model '{other}'"))),
    };
    let scheme = match cfg.get("scheme") {
        None => default_scheme,
        Some("rk4") => Scheme::Rk4,
        Some("ifrk4") => Scheme::IfRk4,
        Some(other) => return Err(Failure::Usage(format!("unknown scheme '{other}'"))),
    };

    let init = cfg
        .get("init")
        .ok_or_else(|| Failure::Usage("missing required key 'init'".into()))?;
    let u0 = FourierField::parse_literal(init, band)?;
    let state = GeodesicState::new(u0, lambda)?;

    let int_cfg = IntegratorConfig {
        dt: cfg.f64_or("dt", 1e-3)?,
        steps: cfg.usize_or("steps", 1000)?,
        scheme,
        band,
    };
    let (trajectory, diverged) = integrate_partial(&model, &state, &int_cfg)?;
    for w in &trajectory.warnings {
        eprintln!("warning: {w}");
    }

    let prefix = out_prefix(&cfg, "geodesic");
    let csv_path = prefix.with_extension("csv");
    write_file(&csv_path, &io::trajectory_csv(&model, &trajectory)?)?;
    let mut outputs = vec![csv_path.display().to_string()];

    // Optional group-level reconstruction of the flow.
    let reconstruct = cfg.str_or("reconstruct", "false") == "true";
    let mut center_sidecar = None;
    if reconstruct && trajectory.times.len() > 4 {
        let m = cfg.usize_or("m", 256)?;
        let times = trajectory.times.clone();
        let fields = trajectory.fields.clone();
        let flow_cfg = FlowConfig {
            grid: m,
            dt: int_cfg.dt,
            steps: trajectory.times.len() - 1,
        };
        let path: DiffeoPath =
            flow_from_log(&move |t| interpolate_fields(&times, &fields, t), &flow_cfg)?;
        let flow_path = PathBuf::from(format!("{}_flow.csv", prefix.display()));
        write_file(&flow_path, &io::diffeo_csv(&path))?;
        outputs.push(flow_path.display().to_string());
        if let (ModelKind::Vir10(c), _) | (ModelKind::Virab { cocycle: c, .. }, _) = (&model, ()) {
            let b = central_lift(&path, &trajectory.fields, c)?;
            let sidecar = PathBuf::from(format!("{}_center.json", prefix.display()));
            write_file(
                &sidecar,
                &serde_json::to_string_pretty(&json!({
                    "t": path.times,
                    "b": b,
                }))
                .unwrap(),
            )?;
            outputs.push(sidecar.display().to_string());
            center_sidecar = Some(b.last().copied().unwrap_or(0.0));
        }
    }

    let e0 = energy(&model, &trajectory.fields[0])?;
    let e1 = energy(&model, trajectory.fields.last().unwrap())?;
    let summary = json!({
        "command": "geodesic",
        "model": model_name,
        "params": {
            "alpha": cfg.f64_or("alpha", 1.0)?,
            "beta": cfg.f64_or("beta", 0.0)?,
            "mu": cfg.f64_or("mu", 0.0)?,
            "nu": cfg.f64_or("nu", 1.0)?,
            "lambda": cfg.f64_or("lambda", 0.0)?,
            "lambda1": cfg.f64_or("lambda1", 0.0)?,
            "lambda2": cfg.f64_or("lambda2", 0.0)?,
        },
        "N": band,
        "dt": int_cfg.dt,
        "steps": int_cfg.steps,
        "scheme": if scheme == Scheme::Rk4 { "rk4" } else { "ifrk4" },
        "seed": cfg.u64_or("seed", 0)?,
        "energy_initial": e0,
        "energy_final": e1,
        "energy_drift_rel": energy_drift(&model, &trajectory)?,
        "max_mean": max_mean(&trajectory),
        "lambda_drift": max_lambda_drift(&model, &trajectory)?,
        "final_central_component": center_sidecar,
        "warnings": trajectory.warnings,
        "diverged": diverged.as_ref().map(|(t, detail)| json!({"t": t, "detail": detail})),
        "wall_time_s": started.elapsed().as_secs_f64(),
        "outputs": outputs,
    });
    let json_path = prefix.with_extension("json");
    write_file(&json_path, &serde_json::to_string_pretty(&summary).unwrap())?;
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());

    if let Some((t, detail)) = diverged {
        eprintln!("diverged at t = {t}: {detail} (partial outputs written)");
        return Ok(3);
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// steer
// ---------------------------------------------------------------------------

const STEER_KEYS: &[&str] = &[
    "target-rotation",
    "tol",
    "grid",
    "band",
    "samples",
    "center-b0",
    "center-b",
    "mu",
    "nu",
    "out",
];

fn cmd_steer(args: &[String]) -> Result<u8, Failure> {
    let started = Instant::now();
    let (cfg, _) = Config::from_args(args, STEER_KEYS)?;
    let prefix = out_prefix(&cfg, "steer");

    if cfg.get("center-b0").is_some() || cfg.get("center-b").is_some() {
        let b0 = cfg.f64_req("center-b0")?;
        let b = cfg.f64_req("center-b")?;
        let params = CocycleParams::new(cfg.f64_or("mu", 0.0)?, cfg.f64_or("nu", 1.0)?);
        let plan = steer_virasoro_center(b0, b, &params)?;
        let plan_path = PathBuf::from(format!("{}_plan.json", prefix.display()));
        let doc = json!({
            "command": "steer-center",
            "target": {"b0": b0, "b": b},
            "mu": params.mu,
            "nu": params.nu,
            "r1": plan.r1,
            "r2": plan.r2,
            "stages": plan.stages,
            "wall_time_s": started.elapsed().as_secs_f64(),
        });
        write_file(&plan_path, &serde_json::to_string_pretty(&doc).unwrap())?;
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        return Ok(0);
    }

    let delta = cfg.f64_req("target-rotation")?;
    let tol = cfg.f64_or("tol", 1e-4)?;
    let grid = cfg.usize_or("grid", 256)?;
    let band = cfg.usize_or("band", 8)?;
    let samples = cfg.usize_or("samples", 16)?;
    let path = steer_to_rotation(delta, tol, grid, band, samples)?;

    let plan_path = PathBuf::from(format!("{}_plan.json", prefix.display()));
    let horizontality = path
        .log_fields
        .iter()
        .map(|f| f.mean().abs())
        .fold(0.0, f64::max);
    let doc = json!({
        "command": "steer-rotation",
        "target_rotation": delta,
        "tolerance": tol,
        "endpoint_error": path.endpoint_error,
        "horizontality": horizontality,
        "stages": path.stages,
        "wall_time_s": started.elapsed().as_secs_f64(),
    });
    write_file(&plan_path, &serde_json::to_string_pretty(&doc).unwrap())?;
    let csv_path = PathBuf::from(format!("{}_path.csv", prefix.display()));
    let diffeo_path = DiffeoPath {
        times: path.times.clone(),
        diffeos: path.diffeos.clone(),
    };
    write_file(&csv_path, &io::diffeo_csv(&diffeo_path))?;
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(0)
}

// ---------------------------------------------------------------------------
// martinet
// ---------------------------------------------------------------------------

const MARTINET_KEYS: &[&str] = &["v", "s", "samples", "out"];

fn cmd_martinet(args: &[String]) -> Result<u8, Failure> {
    let started = Instant::now();
    let (cfg, _) = Config::from_args(args, MARTINET_KEYS)?;
    let s = cfg.f64_or("s", 1e-2)?;
    let samples = cfg.usize_or("samples", 801)?;
    let profile = cfg.str_or("v", "sin_pi").to_string();
    let v: Box<dyn Fn(f64) -> f64> = match profile.as_str() {
        "sin_pi" => Box::new(|t: f64| (std::f64::consts::PI * t).sin()),
        "poly" => Box::new(|t: f64| t * (1.0 - t)),
        other => {
            return Err(Failure::Usage(format!(
                "unknown variation profile '{other}' (use sin_pi or poly)"
            )))
        }
    };
    let out = finite_sr::martinet_variation(v.as_ref(), s, samples)?;
    let ratio = out.endpoint_z / (s * s);

    let prefix = out_prefix(&cfg, "martinet");
    let mut csv = String::from("t,x,y,z\n");
    for (i, p) in out.path.iter().enumerate() {
        let t = i as f64 / (samples - 1) as f64;
        csv.push_str(&format!("{t},{},{},{}\n", p.x, p.y, p.z));
    }
    let csv_path = prefix.with_extension("csv");
    write_file(&csv_path, &csv)?;

    let doc = json!({
        "command": "martinet",
        "profile": profile,
        "s": s,
        "samples": samples,
        "endpoint_z": out.endpoint_z,
        "endpoint_z_over_s2": ratio,
        "field_residual": out.field_residual,
        "wall_time_s": started.elapsed().as_secs_f64(),
        "outputs": [csv_path.display().to_string()],
    });
    let json_path = prefix.with_extension("json");
    write_file(&json_path, &serde_json::to_string_pretty(&doc).unwrap())?;
    println!("z^s(1)/s^2 = {ratio}");
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(0)
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

const CHECK_KEYS: &[&str] = &["suite", "seed", "out"];

fn cmd_check(args: &[String]) -> Result<u8, Failure> {
    let started = Instant::now();
    let (cfg, positional) = Config::from_args(args, CHECK_KEYS)?;
    let suite_name = positional
        .first()
        .map(String::as_str)
        .or_else(|| cfg.get("suite"))
        .unwrap_or("all");
    let suite = Suite::parse(suite_name)
        .ok_or_else(|| Failure::Usage(format!("unknown suite '{suite_name}'")))?;
    let seed = cfg.u64_or("seed", 0)?;
    let report = run_suite(suite, seed)?;
    for r in &report.results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {:<24} measured {:>12.4e}  tolerance {:>8.1e}  {}",
            r.id, r.measured, r.tolerance, r.description
        );
    }
    let passed = report.results.iter().filter(|r| r.pass).count();
    println!("{passed}/{} criteria passed", report.results.len());

    let doc = json!({
        "command": "check",
        "suite": report.suite,
        "seed": report.seed,
        "results": report.results,
        "all_pass": report.all_pass(),
        "wall_time_s": started.elapsed().as_secs_f64(),
    });
    if let Some(out) = cfg.get("out") {
        let path = out_prefix(&cfg, out).with_extension("json");
        write_file(&path, &serde_json::to_string_pretty(&doc).unwrap())?;
    }
    if report.all_pass() {
        Ok(0)
    } else {
        Err(Failure::Runtime("one or more checks failed".into()))
    }
}
