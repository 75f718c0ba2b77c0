//! Command dispatch: `simulate`, `replay`, `bound`, `gen-arrivals`,
//! `presets`. Every run writes a manifest (config echo + effective seed +
//! artifact version) next to its outputs so it can be reproduced
//! byte-for-byte. Exit codes: 0 success, 2 validation error, 1 runtime
//! error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arrivals::{self, ArrivalSpec};
use crate::bounds;
use crate::config::{self, parse_config, ExperimentConfig, Preset, ReplayPreset, DEFAULT_SEED};
use crate::replay;
use crate::sim::{self, ReplicationPlan};

pub const THREADS_ENV: &str = "AUXBANDIT_THREADS";

#[derive(Parser)]
#[command(
    name = "auxbandit",
    about = "Bandit experiments with auxiliary information arrivals",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated simulation and write trajectory + summary CSVs.
    Simulate(SimulateArgs),
    /// Score a synthetic article-day corpus with click-gated policies.
    Replay(ReplayArgs),
    /// Evaluate a closed-form bound on a matrix file + JSON parameters.
    Bound(BoundArgs),
    /// Generate an arrival matrix CSV.
    GenArrivals(GenArrivalsArgs),
    /// List the named presets with their exact parameters.
    Presets,
}

#[derive(Args)]
struct SimulateArgs {
    /// Named preset (see `presets`).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Experiment config JSON (a previous run's manifest also works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed override (precedence: flag > config > 42).
    #[arg(long)]
    seed: Option<u64>,
    /// Replication count override.
    #[arg(long)]
    reps: Option<usize>,
    /// Stationary arrival-rate override.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads (0 = all cores); output is identical for any value.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Named replay preset.
    #[arg(long, default_value = "appE-replay", conflicts_with = "config")]
    preset: String,
    /// Replay config JSON (a previous run's manifest also works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Score an existing JSONL corpus instead of generating one.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    cases: Option<usize>,
    /// Mapping misspecification ratio alpha_hat / alpha_true.
    #[arg(long)]
    misspec: Option<f64>,
    /// Expected auxiliary arrivals per epoch.
    #[arg(long)]
    intensity: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    /// UCB tuning constant shared by all replay policies.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoundOp {
    Logsumexp,
    Minimax,
    Aucb1,
    TsStationary,
    TsDiminishing,
    UnknownMapping,
    Aie,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    op: BoundOp,
    /// Arrival matrix CSV (required by matrix-dependent bounds).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Row (arm) for single-row bounds.
    #[arg(long, default_value_t = 0)]
    row: usize,
    /// JSON parameters, inline or @file.
    #[arg(long, default_value = "{}")]
    params: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Stationary,
    DiminishingBernoulli,
    DiminishingDeterministic,
    Gamma,
}

#[derive(Args)]
struct GenArrivalsArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    #[arg(long, default_value_t = 2)]
    arms: usize,
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    kappa_aux: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    sigma_hat: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

enum CliError {
    Validation(Vec<String>),
    Runtime(String),
}

impl CliError {
    fn runtime(e: impl std::fmt::Display) -> Self {
        CliError::Runtime(e.to_string())
    }

    fn validation(e: impl std::fmt::Display) -> Self {
        CliError::Validation(vec![e.to_string()])
    }
}

type CliResult = Result<(), CliError>;

/// Entry point used by the binary.
pub fn run() -> ExitCode {
    ExitCode::from(run_command(std::env::args_os()) as u8)
}

/// Parse and dispatch; returns the process exit code (0 success,
/// 2 validation error, 1 runtime error).
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version as "errors" with success status.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Replay(args) => cmd_replay(&args),
        Command::Bound(args) => cmd_bound(&args),
        Command::GenArrivals(args) => cmd_gen_arrivals(&args),
        Command::Presets => cmd_presets(),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Validation(errors)) => {
            for e in errors {
                eprintln!("error: {e}");
            }
            2
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0)
}

fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    if threads == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(CliError::runtime)?;
        Ok(pool.install(f))
    }
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    artifact: &'a str,
    version: &'a str,
    command: &'a str,
    seed: u64,
    config: C,
}

fn write_manifest<C: Serialize>(out_dir: &Path, command: &str, seed: u64, config: C) -> CliResult {
    let manifest = Manifest {
        artifact: "auxbandit",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed,
        config,
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(CliError::runtime)?;
    std::fs::write(out_dir.join("manifest.json"), text + "\n").map_err(CliError::runtime)
}

fn load_sim_config(args: &SimulateArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&args.preset, &args.config) {
        (Some(name), None) => match config::preset(name) {
            Some(Preset::Sim(cfg)) => cfg,
            Some(Preset::Replay(_)) => {
                return Err(CliError::validation(format!(
                    "preset {name:?} is a replay preset; use the replay subcommand"
                )))
            }
            None => return Err(CliError::validation(format!("unknown preset {name:?}"))),
        },
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(CliError::runtime)?;
            // Accept a previous run's manifest directly.
            let text = match serde_json::from_str::<serde_json::Value>(&text) {
                Ok(v) if v.get("artifact").is_some() && v.get("config").is_some() => {
                    serde_json::to_string(&v["config"]).map_err(CliError::runtime)?
                }
                _ => text,
            };
            let (cfg, warnings) = parse_config(&text).map_err(CliError::Validation)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            cfg
        }
        _ => {
            return Err(CliError::validation(
                "exactly one of --preset or --config is required",
            ))
        }
    };
    if let Some(reps) = args.reps {
        cfg.n_reps = reps;
    }
    if let Some(lambda) = args.lambda {
        match &mut cfg.arrivals {
            ArrivalSpec::Stationary { lambda: l } => *l = lambda,
            other => {
                return Err(CliError::validation(format!(
                    "--lambda only applies to stationary arrivals, config has {other:?}"
                )))
            }
        }
    }
    config::validate(&cfg).map_err(CliError::Validation)?;
    Ok(cfg)
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult {
    let cfg = load_sim_config(args)?;
    let seed = args.seed.or(cfg.base_seed).unwrap_or(DEFAULT_SEED);
    let instance = cfg.instance.build().map_err(CliError::validation)?;
    let threads = resolve_threads(args.threads);
    std::fs::create_dir_all(&args.out_dir).map_err(CliError::runtime)?;

    let plan = ReplicationPlan {
        instance: &instance,
        arrivals: &cfg.arrivals,
        horizon: cfg.horizon,
        policies: &cfg.policies,
        n_reps: cfg.n_reps,
        base_seed: seed,
        regenerate_h: cfg.regenerate_h,
    };
    let output = in_pool(threads, || sim::run_replications(&plan))?.map_err(CliError::runtime)?;
    if output.clipped_cells > 0 {
        eprintln!(
            "warning: {} arrival cells had their Bernoulli mean clipped to 1",
            output.clipped_cells
        );
    }
    sim::write_trajectories(&args.out_dir.join("trajectories.csv"), &output.per_policy)
        .map_err(CliError::runtime)?;
    sim::write_summary(&args.out_dir.join("summary.csv"), &output.per_policy)
        .map_err(CliError::runtime)?;
    write_manifest(&args.out_dir, "simulate", seed, &cfg)?;
    for batch in &output.per_policy {
        println!(
            "{}: mean final regret {:.4} (stderr {:.4}) over {} reps",
            batch.summary.policy,
            batch.summary.final_mean(),
            batch.summary.final_stderr(),
            batch.summary.n_reps
        );
    }
    Ok(())
}

fn cmd_replay(args: &ReplayArgs) -> CliResult {
    let mut preset = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(CliError::runtime)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::validation(format!("invalid JSON: {e}")))?;
            let body = if value.get("artifact").is_some() && value.get("config").is_some() {
                value["config"].clone()
            } else {
                value
            };
            serde_json::from_value::<ReplayPreset>(body)
                .map_err(|e| CliError::validation(format!("replay config: {e}")))?
        }
        None => match config::preset(&args.preset) {
            Some(Preset::Replay(p)) => p,
            _ => {
                return Err(CliError::validation(format!(
                    "{:?} is not a replay preset",
                    args.preset
                )))
            }
        },
    };
    if let Some(cases) = args.cases {
        preset.corpus.n_cases = cases;
    }
    if let Some(m) = args.misspec {
        preset.corpus.misspec_ratio = m;
    }
    if let Some(i) = args.intensity {
        preset.corpus.arrival_intensity = i;
    }
    if let Some(r) = args.reps {
        preset.n_reps = r;
    }
    if let Some(c) = args.c {
        preset.c = c;
    }
    if preset.n_reps == 0 {
        return Err(CliError::validation("replay needs at least 1 replication"));
    }
    if !(preset.c > 0.0) {
        return Err(CliError::validation(
            "replay tuning constant must be positive",
        ));
    }
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let threads = resolve_threads(args.threads);
    std::fs::create_dir_all(&args.out_dir).map_err(CliError::runtime)?;

    let cases = match &args.corpus {
        Some(path) => replay::load_corpus(path).map_err(CliError::runtime)?,
        None => {
            let cases =
                replay::synth_article_days(&preset.corpus, seed).map_err(CliError::validation)?;
            replay::write_corpus(&args.out_dir.join("corpus.jsonl"), &cases)
                .map_err(CliError::runtime)?;
            cases
        }
    };
    let ReplayPreset {
        policies,
        c,
        n_reps,
        ..
    } = preset.clone();
    let report = in_pool(threads, || {
        replay::score_corpus(&cases, &policies, c, n_reps, seed)
    })?
    .map_err(CliError::runtime)?;
    replay::write_results(&args.out_dir.join("results.csv"), &report).map_err(CliError::runtime)?;
    write_manifest(&args.out_dir, "replay", seed, &preset)?;
    for (policy, mean_ri, nh) in &report.policy_rollup {
        let ri = mean_ri.map_or("n/a".to_string(), |v| format!("{:.4}", v));
        println!("{policy}: mean RI {ri}, no-harm rate {nh:.3}");
    }
    Ok(())
}

fn bound_params(raw: &str) -> Result<serde_json::Value, CliError> {
    let text = if let Some(path) = raw.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(CliError::runtime)?
    } else {
        raw.to_string()
    };
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("invalid --params JSON: {e}")))
}

fn need_matrix(args: &BoundArgs) -> Result<arrivals::ArrivalMatrix, CliError> {
    let path = args
        .matrix
        .as_ref()
        .ok_or_else(|| CliError::validation("this bound requires --matrix"))?;
    let m = arrivals::load_matrix(path).map_err(CliError::validation)?;
    if args.row >= m.arms() {
        return Err(CliError::validation(format!(
            "--row {} out of range for {} arms",
            args.row,
            m.arms()
        )));
    }
    Ok(m)
}

fn field(params: &serde_json::Value, name: &str) -> Result<f64, CliError> {
    params
        .get(name)
        .and_then(serde_json::Value::as_f64)
        .ok_or_else(|| CliError::validation(format!("--params needs numeric field {name:?}")))
}

fn field_vec(params: &serde_json::Value, name: &str) -> Result<Vec<f64>, CliError> {
    params
        .get(name)
        .and_then(|v| v.as_array())
        .map(|a| a.iter().filter_map(serde_json::Value::as_f64).collect())
        .ok_or_else(|| CliError::validation(format!("--params needs array field {name:?}")))
}

fn cmd_bound(args: &BoundArgs) -> CliResult {
    let params = bound_params(&args.params)?;
    let (value, vacuous) = match args.op {
        BoundOp::Logsumexp => {
            let m = need_matrix(args)?;
            let v = bounds::logsumexp_rate(m.row(args.row), field(&params, "c")?)
                .map_err(CliError::validation)?;
            (v, None)
        }
        BoundOp::Minimax => {
            let m = need_matrix(args)?;
            let b = bounds::minimax_lower_bound(
                &m,
                field(&params, "delta")?,
                field(&params, "sigma")?,
                field(&params, "sigma_hat")?,
            )
            .map_err(CliError::validation)?;
            (b.value, Some(b.vacuous))
        }
        BoundOp::Aucb1 => {
            let m = need_matrix(args)?;
            let v = bounds::aucb1_upper_bound(
                &m,
                &field_vec(&params, "delta_k")?,
                field(&params, "sigma")?,
                field(&params, "sigma_hat")?,
                field(&params, "c")?,
            )
            .map_err(CliError::validation)?;
            (v, None)
        }
        BoundOp::TsStationary | BoundOp::TsDiminishing => {
            let kind = if matches!(args.op, BoundOp::TsStationary) {
                bounds::TsEnvelopeKind::Stationary
            } else {
                bounds::TsEnvelopeKind::Diminishing
            };
            let p = bounds::TsEnvelopeParams {
                c: field(&params, "c")?,
                delta: field(&params, "delta")?,
                delta_k: field_vec(&params, "delta_k")?,
                sigma: field(&params, "sigma")?,
                sigma_hat: field(&params, "sigma_hat")?,
                horizon: field(&params, "horizon")? as usize,
                lambda: params.get("lambda").and_then(serde_json::Value::as_f64),
                kappa: params.get("kappa").and_then(serde_json::Value::as_f64),
                c_const: field(&params, "c_const")?,
            };
            let v = bounds::ts_envelope_bound(kind, &p).map_err(CliError::validation)?;
            (v, None)
        }
        BoundOp::UnknownMapping => {
            let m = need_matrix(args)?;
            let b = bounds::unknown_mapping_lower_bound(
                m.row(args.row),
                m.arms(),
                field(&params, "gap")?,
                field(&params, "delta_small")?,
                bounds::UnknownMappingConstants {
                    c5: field(&params, "c5")?,
                    c6: field(&params, "c6")?,
                    c7: field(&params, "c7")?,
                },
            )
            .map_err(CliError::validation)?;
            (b.value, Some(b.vacuous))
        }
        BoundOp::Aie => {
            let m = need_matrix(args)?;
            let v = bounds::aie_index(
                m.row(args.row),
                m.horizon(),
                field(&params, "delta")?,
                field(&params, "sigma_hat")?,
                field(&params, "alpha")?,
                field(&params, "c_tilde")?,
            )
            .map_err(CliError::validation)?;
            (v, None)
        }
    };
    let mut out = serde_json::json!({
        "op": format!("{:?}", args.op),
        "value": value,
    });
    if let Some(vac) = vacuous {
        out["vacuous"] = serde_json::Value::Bool(vac);
    }
    println!("{out}");
    Ok(())
}

fn require(name: &str, v: Option<f64>) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::validation(format!("this kind requires --{name}")))
}

fn cmd_gen_arrivals(args: &GenArrivalsArgs) -> CliResult {
    let spec = match args.kind {
        GenKind::Stationary => ArrivalSpec::Stationary {
            lambda: require("lambda", args.lambda)?,
        },
        GenKind::DiminishingBernoulli => ArrivalSpec::DiminishingBernoulli {
            kappa_aux: require("kappa-aux", args.kappa_aux)?,
        },
        GenKind::DiminishingDeterministic => ArrivalSpec::DiminishingDeterministic {
            kappa: require("kappa", args.kappa)?,
            delta: require("delta", args.delta)?,
            sigma_hat: require("sigma-hat", args.sigma_hat)?,
        },
        GenKind::Gamma => ArrivalSpec::GammaFamily {
            lambda: require("lambda", args.lambda)?,
            gamma: require("gamma", args.gamma)?,
        },
    };
    let report = arrivals::generate(&spec, args.arms, args.horizon, args.seed)
        .map_err(CliError::validation)?;
    if report.clipped_cells > 0 {
        eprintln!(
            "warning: {} cells had their Bernoulli mean clipped to 1",
            report.clipped_cells
        );
    }
    arrivals::save_matrix(&report.matrix, &args.out).map_err(CliError::runtime)?;
    Ok(())
}

fn cmd_presets() -> CliResult {
    for name in config::preset_names() {
        let p = config::preset(name).expect("listed preset exists");
        let json = serde_json::to_string(&p).map_err(CliError::runtime)?;
        println!("{name}: {json}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> i32 {
        run_command(std::iter::once("auxbandit").chain(args.iter().copied()))
    }

    #[test]
    fn presets_lists_everything() {
        assert_eq!(run(&["presets"]), 0);
    }

    #[test]
    fn unknown_preset_is_a_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o");
        assert_eq!(
            run(&[
                "simulate",
                "--preset",
                "nope",
                "--out-dir",
                out.to_str().unwrap()
            ]),
            2
        );
    }

    #[test]
    fn gen_arrivals_zero_lambda_is_all_zero() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("h.csv");
        let code = run(&[
            "gen-arrivals",
            "--kind",
            "stationary",
            "--lambda",
            "0",
            "--arms",
            "2",
            "--horizon",
            "5",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            std::fs::read_to_string(out).unwrap(),
            "0,0,0,0,0\n0,0,0,0,0\n"
        );
    }

    #[test]
    fn gen_arrivals_missing_param_is_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("h.csv");
        let code = run(&[
            "gen-arrivals",
            "--kind",
            "gamma",
            "--lambda",
            "0.1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bound_aie_zero_matrix_is_zero() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("zeros.csv");
        std::fs::write(&path, "0,0,0,0,0,0,0,0,0,0\n").unwrap();
        let code = run(&[
            "bound",
            "--op",
            "aie",
            "--matrix",
            path.to_str().unwrap(),
            "--params",
            r#"{"delta": 0.03, "sigma_hat": 0.25, "alpha": 2.0, "c_tilde": 0.2}"#,
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn replay_small_run_and_manifest_rerun() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r1");
        let code = run(&[
            "replay",
            "--cases",
            "3",
            "--reps",
            "5",
            "--seed",
            "9",
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.join("corpus.jsonl").exists());
        assert!(out.join("results.csv").exists());

        let out2 = dir.path().join("r2");
        let code = run(&[
            "replay",
            "--config",
            out.join("manifest.json").to_str().unwrap(),
            "--seed",
            "9",
            "--out-dir",
            out2.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            std::fs::read(out.join("results.csv")).unwrap(),
            std::fs::read(out2.join("results.csv")).unwrap()
        );
    }

    #[test]
    fn simulate_small_config_runs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("cfg.json");
        std::fs::write(
            &cfg,
            r#"{
                "instance": {"mu": [0.7, 0.5], "sigma": 0.5, "aux_equals_reward": true},
                "arrivals": {"kind": "stationary", "lambda": 0.1},
                "horizon": 50,
                "policies": [{"kind": "a-ucb1", "c": 3.0}],
                "n_reps": 3
            }"#,
        )
        .unwrap();
        let out = dir.path().join("out");
        let code = run(&[
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "7",
            "--out-dir",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.join("trajectories.csv").exists());
        assert!(out.join("summary.csv").exists());
        assert!(out.join("manifest.json").exists());

        // Rerunning from the manifest reproduces the outputs byte-for-byte.
        let out2 = dir.path().join("out2");
        let code = run(&[
            "simulate",
            "--config",
            out.join("manifest.json").to_str().unwrap(),
            "--seed",
            "7",
            "--out-dir",
            out2.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            std::fs::read(out.join("trajectories.csv")).unwrap(),
            std::fs::read(out2.join("trajectories.csv")).unwrap()
        );
    }
}
