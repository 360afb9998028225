//! Command-line front end: single trajectories, Monte-Carlo estimates,
//! scaling sweeps, fragmentation exports, and the verification suites.
//!
//! Exit codes: 0 success, 2 invalid arguments or configuration, 3 event cap
//! hit under `--strict`, 4 estimation failed (all replicates capped),
//! 1 any other failure.

mod manifest;
mod speclang;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use edgeavg::distributions::DistributionSpec;
use edgeavg::dynamics::{run_until_consensus_from_rng, run_until_consensus_traced};
use edgeavg::experiments::{
    estimate_consensus_time, scaling_sweep_eps, scaling_sweep_n, write_results_csv,
    DistributionRule, ExperimentConfig, GraphFamily, SweepOutput,
};
use edgeavg::fragmentation::{evolve_mass, evolve_matrix, write_snapshot_csv, MassVector};
use edgeavg::seed::derive_seed;
use edgeavg::verify;
use edgeavg::{Error, Graph};

use manifest::{now_ms, write_manifest, ManifestData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_OK: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_CAPPED: i32 = 3;
const EXIT_ESTIMATION: i32 = 4;

#[derive(Parser)]
#[command(
    name = "edgeavg",
    version,
    about = "Edge-averaging (randomized gossip) process simulator and experiment harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and print the consensus result as JSON
    Simulate(SimulateArgs),
    /// Monte-Carlo estimate of the expected consensus time at one point
    Estimate(EstimateArgs),
    /// Scaling sweep over the graph size or the threshold, with a log-log fit
    Sweep(SweepArgs),
    /// Run a named verification suite and print PASS/FAIL lines
    Verify(VerifyArgs),
    /// Evolve a fragmentation trajectory and export snapshot statistics
    Fragment(FragmentArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Graph spec: cycle:N, path:N, complete:N, k<N>, torus:SIDE,DIM, file:PATH
    #[arg(long)]
    graph: String,
    /// Distribution spec: rademacher, uniform:a,b, threepoint:x0,p,
    /// powerlaw:p,pprime[,mmax], constant:c, lower-bound
    #[arg(long)]
    dist: String,
    /// Consensus threshold (must be positive)
    #[arg(long)]
    eps: f64,
    /// Moment order used by lower-bound distributions
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Base seed (defaults to $EDGEAVG_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Event cap
    #[arg(long, default_value_t = 1_000_000_000)]
    max_events: u64,
    /// Write a trajectory CSV `event_index,time,osc` to this path
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Keep every k-th trace row
    #[arg(long, default_value_t = 1)]
    trace_every: u64,
    /// Exit 3 if the event cap fires before consensus
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct EstimateArgs {
    /// Graph spec (see `simulate --help`)
    #[arg(long)]
    graph: Option<String>,
    /// Distribution spec (see `simulate --help`)
    #[arg(long)]
    dist: Option<String>,
    /// Consensus threshold
    #[arg(long)]
    eps: Option<f64>,
    /// Moment order used by lower-bound distributions
    #[arg(long)]
    p: Option<f64>,
    /// Number of replicates
    #[arg(long)]
    reps: Option<usize>,
    /// Base seed (defaults to $EDGEAVG_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Event cap per replicate
    #[arg(long)]
    max_events: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON experiment config; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for result files and the manifest
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep coordinate: n or eps
    #[arg(long)]
    axis: String,
    /// Graph spec; the size parameter seeds `sizes` when --sizes is absent
    #[arg(long)]
    graph: Option<String>,
    /// Distribution spec
    #[arg(long)]
    dist: Option<String>,
    /// Comma-separated size list for --axis n
    #[arg(long)]
    sizes: Option<String>,
    /// Single threshold for --axis n
    #[arg(long)]
    eps: Option<f64>,
    /// Comma-separated threshold list for --axis eps
    #[arg(long)]
    eps_list: Option<String>,
    /// Moment order
    #[arg(long)]
    p: Option<f64>,
    /// Replicates per grid point
    #[arg(long)]
    reps: Option<usize>,
    /// Base seed (defaults to $EDGEAVG_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Event cap per replicate
    #[arg(long)]
    max_events: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON experiment config; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (required): results.csv, sweep.json, manifest.json
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: claims, qbound, decay, omega, drift, gap, subadd, or all
    suite: String,
    /// Base seed (defaults to $EDGEAVG_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct FragmentArgs {
    /// Graph spec (needs an explicit size unless file:PATH)
    #[arg(long)]
    graph: String,
    /// Source vertex of the initial point mass
    #[arg(long, default_value_t = 0)]
    source: usize,
    /// Start from uniform mass instead of a point mass
    #[arg(long)]
    uniform: bool,
    /// Comma-separated ascending snapshot times
    #[arg(long)]
    times: String,
    /// Base seed (defaults to $EDGEAVG_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory: snapshots.csv (+ matrix.csv), manifest.json
    #[arg(long)]
    out: PathBuf,
    /// Also dump the dense transport matrix at the last snapshot time
    /// (graphs up to 1024 vertices)
    #[arg(long)]
    dump_matrix: bool,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Fragment(args) => cmd_fragment(args),
    };
    std::process::exit(code);
}

fn default_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("EDGEAVG_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::EstimationFailed(_) => EXIT_ESTIMATION,
        Error::Io(_) | Error::Internal(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

fn usage_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn build_graph(family: &GraphFamily, size: Option<usize>) -> Result<Graph, String> {
    match (family, size) {
        (GraphFamily::File { .. }, _) => family.build(0).map_err(|e| e.to_string()),
        (_, Some(s)) => family.build(s).map_err(|e| e.to_string()),
        (_, None) => Err("graph spec needs an explicit size, e.g. cycle:64".into()),
    }
}

fn cmd_simulate(args: SimulateArgs) -> i32 {
    let seed = default_seed(args.seed);
    let (family, size) = match speclang::parse_graph(&args.graph) {
        Ok(x) => x,
        Err(e) => return usage_error(e),
    };
    let g = match build_graph(&family, size) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let rule = match speclang::parse_dist(&args.dist) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    if !(args.eps > 0.0) {
        return usage_error("--eps must be positive");
    }
    let dist = match rule.resolve(args.p, g.vertex_count(), args.eps) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return error_code(&e);
        }
    };
    let run = || -> edgeavg::Result<edgeavg::ConsensusResult> {
        let sampler = dist.sampler()?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0));
        let f0 = sampler.sample_profile(g.vertex_count(), &mut rng);
        let clock_seed = derive_seed(seed, 1);
        match &args.trace {
            Some(path) => {
                let mut out = BufWriter::new(File::create(path)?);
                writeln!(out, "event_index,time,osc")?;
                let mut sink = |i: u64, t: f64, o: f64| {
                    // trace rows are best-effort; a full disk surfaces at flush
                    let _ = writeln!(out, "{i},{t},{o}");
                };
                let r = run_until_consensus_traced(
                    &g,
                    &f0,
                    args.eps,
                    clock_seed,
                    args.max_events,
                    args.trace_every,
                    &mut sink,
                )?;
                Ok(r)
            }
            None => {
                let rng = ChaCha8Rng::seed_from_u64(clock_seed);
                run_until_consensus_from_rng(&g, &f0, args.eps, rng, args.max_events)
            }
        }
    };
    match run() {
        Ok(r) => {
            let doc = json!({
                "tau": r.tau.reached(),
                "capped": r.tau.is_capped(),
                "events_used": r.events_used,
                "final_osc": r.final_osc,
                "mean_l": r.mean_l,
                "n": g.vertex_count(),
                "epsilon": args.eps,
                "seed": seed,
            });
            println!("{doc}");
            if r.tau.is_capped() && args.strict {
                EXIT_CAPPED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

/// Loads the optional JSON config and lays explicit flags over it.
#[allow(clippy::too_many_arguments)]
fn merge_config(
    config_path: Option<&Path>,
    graph: Option<&str>,
    dist: Option<&str>,
    sizes: Option<&str>,
    eps: Option<f64>,
    eps_list: Option<&str>,
    p: Option<f64>,
    reps: Option<usize>,
    seed: Option<u64>,
    max_events: Option<u64>,
    jobs: Option<usize>,
) -> Result<ExperimentConfig, String> {
    let mut cfg = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| format!("bad config {}: {e}", path.display()))?
        }
        None => ExperimentConfig {
            family: GraphFamily::Cycle,
            sizes: Vec::new(),
            distribution: DistributionRule::Fixed {
                spec: DistributionSpec::rademacher(),
            },
            epsilons: Vec::new(),
            p: 1.0,
            replicates: 0,
            base_seed: default_seed(None),
            max_events: 1_000_000_000,
            parallelism: 0,
        },
    };
    if let Some(spec) = graph {
        let (family, size) = speclang::parse_graph(spec)?;
        cfg.family = family;
        if let Some(s) = size {
            cfg.sizes = vec![s];
        }
    }
    if let Some(list) = sizes {
        cfg.sizes = speclang::parse_list(list, "size")?;
    }
    if let Some(spec) = dist {
        cfg.distribution = speclang::parse_dist(spec)?;
    }
    if let Some(e) = eps {
        cfg.epsilons = vec![e];
    }
    if let Some(list) = eps_list {
        cfg.epsilons = speclang::parse_list(list, "epsilon")?;
    }
    if let Some(p) = p {
        cfg.p = p;
    }
    if let Some(r) = reps {
        cfg.replicates = r;
    }
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    if let Some(m) = max_events {
        cfg.max_events = m;
    }
    if let Some(j) = jobs {
        cfg.parallelism = j;
    }
    if cfg.sizes.is_empty() && !matches!(cfg.family, GraphFamily::File { .. }) {
        return Err("no graph size given (use --graph family:size or --sizes)".into());
    }
    if matches!(cfg.family, GraphFamily::File { .. }) && cfg.sizes.is_empty() {
        cfg.sizes = vec![0];
    }
    if cfg.epsilons.is_empty() {
        return Err("no threshold given (use --eps or --eps-list)".into());
    }
    if cfg.replicates == 0 {
        return Err("no replicate count given (use --reps)".into());
    }
    Ok(cfg)
}

fn cmd_estimate(args: EstimateArgs) -> i32 {
    let cfg = match merge_config(
        args.config.as_deref(),
        args.graph.as_deref(),
        args.dist.as_deref(),
        None,
        args.eps,
        None,
        args.p,
        args.reps,
        args.seed.or_else(|| Some(default_seed(None))),
        args.max_events,
        args.jobs,
    ) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    if cfg.sizes.len() != 1 || cfg.epsilons.len() != 1 {
        return usage_error("estimate needs exactly one size and one threshold");
    }
    if cfg.parallelism > 0 {
        // ignore failure: the global pool can only be installed once
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build_global();
    }
    let started = now_ms();
    let run = || -> edgeavg::Result<edgeavg::experiments::EstimateResult> {
        let g = cfg.family.build(cfg.sizes[0])?;
        let dist = cfg.distribution.resolve(cfg.p, g.vertex_count(), cfg.epsilons[0])?;
        estimate_consensus_time(
            &g,
            &dist,
            cfg.epsilons[0],
            cfg.replicates,
            cfg.base_seed,
            cfg.max_events,
        )
    };
    let result = run();
    let mut outputs = Vec::new();
    let mut exit = EXIT_OK;
    let mut error_text = None;
    match &result {
        Ok(est) => {
            println!("{}", serde_json::to_string(est).expect("estimate serializes"));
            if let Some(dir) = &args.out {
                if let Err(e) = write_estimate_files(dir, &cfg, est, &mut outputs) {
                    eprintln!("error: {e}");
                    error_text = Some(e.to_string());
                    exit = EXIT_FAIL;
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_text = Some(e.to_string());
            exit = error_code(e);
        }
    }
    if let Some(dir) = &args.out {
        if std::fs::create_dir_all(dir).is_ok() {
            let data = ManifestData {
                command: "estimate",
                base_seed: cfg.base_seed,
                config: serde_json::to_value(&cfg).unwrap_or_default(),
                started_ms: started,
                outputs,
                error: error_text,
            };
            if let Err(e) = write_manifest(dir, &data) {
                eprintln!("error: cannot write manifest: {e}");
                if exit == EXIT_OK {
                    exit = EXIT_FAIL;
                }
            }
        }
    }
    exit
}

fn write_estimate_files(
    dir: &Path,
    cfg: &ExperimentConfig,
    est: &edgeavg::experiments::EstimateResult,
    outputs: &mut Vec<PathBuf>,
) -> edgeavg::Result<()> {
    std::fs::create_dir_all(dir)?;
    let json_path = dir.join("result.json");
    let mut f = File::create(&json_path)?;
    writeln!(f, "{}", serde_json::to_string_pretty(est).expect("serializes"))?;
    outputs.push(json_path);
    let csv_path = dir.join("result.csv");
    let mut f = File::create(&csv_path)?;
    let point = edgeavg::experiments::SweepPoint {
        size: cfg.sizes[0],
        epsilon: est.epsilon,
        estimate: Some(*est),
        error: None,
    };
    write_results_csv(&mut f, cfg.family.label(), cfg.p, &[point])?;
    outputs.push(csv_path);
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> i32 {
    let out_dir = match &args.out {
        Some(d) => d.clone(),
        None => return usage_error("sweep requires --out"),
    };
    let axis = args.axis.to_lowercase();
    if axis != "n" && axis != "eps" {
        return usage_error("--axis must be `n` or `eps`");
    }
    let cfg = match merge_config(
        args.config.as_deref(),
        args.graph.as_deref(),
        args.dist.as_deref(),
        args.sizes.as_deref(),
        args.eps,
        args.eps_list.as_deref(),
        args.p,
        args.reps,
        args.seed.or_else(|| Some(default_seed(None))),
        args.max_events,
        args.jobs,
    ) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let started = now_ms();
    let result = if axis == "n" {
        scaling_sweep_n(&cfg)
    } else {
        scaling_sweep_eps(&cfg)
    };
    let mut outputs = Vec::new();
    let mut exit = EXIT_OK;
    let mut error_text = None;
    match &result {
        Ok(sweep) => {
            let summary = json!({
                "axis": sweep.axis,
                "fit": sweep.fit,
                "warnings": sweep.warnings,
            });
            println!("{summary}");
            if let Err(e) = write_sweep_files(&out_dir, &cfg, sweep, &mut outputs) {
                eprintln!("error: {e}");
                error_text = Some(e.to_string());
                exit = EXIT_FAIL;
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_text = Some(e.to_string());
            exit = error_code(e);
        }
    }
    if std::fs::create_dir_all(&out_dir).is_ok() {
        let data = ManifestData {
            command: "sweep",
            base_seed: cfg.base_seed,
            config: serde_json::to_value(&cfg).unwrap_or_default(),
            started_ms: started,
            outputs,
            error: error_text,
        };
        if let Err(e) = write_manifest(&out_dir, &data) {
            eprintln!("error: cannot write manifest: {e}");
            if exit == EXIT_OK {
                exit = EXIT_FAIL;
            }
        }
    }
    exit
}

fn write_sweep_files(
    dir: &Path,
    cfg: &ExperimentConfig,
    sweep: &SweepOutput,
    outputs: &mut Vec<PathBuf>,
) -> edgeavg::Result<()> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join("results.csv");
    let mut f = File::create(&csv_path)?;
    write_results_csv(&mut f, cfg.family.label(), cfg.p, &sweep.points)?;
    outputs.push(csv_path);
    let envelope = json!({
        "config": cfg,
        "axis": sweep.axis,
        "points": sweep.points,
        "fit": sweep.fit,
        "warnings": sweep.warnings,
    });
    let json_path = dir.join("sweep.json");
    let mut f = File::create(&json_path)?;
    writeln!(
        f,
        "{}",
        serde_json::to_string_pretty(&envelope).expect("serializes")
    )?;
    outputs.push(json_path);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> i32 {
    let seed = default_seed(args.seed);
    if args.jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build_global();
    }
    let names: Vec<&str> = if args.suite == "all" {
        verify::SUITES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut all_pass = true;
    for name in names {
        let report = match verify::run_suite(name, seed) {
            Ok(Some(r)) => r,
            Ok(None) => return usage_error(format!("unknown suite `{name}`")),
            Err(e) => {
                eprintln!("error: {e}");
                return error_code(&e);
            }
        };
        for check in &report.checks {
            let status = if check.pass() { "PASS" } else { "FAIL" };
            let op = match check.op {
                verify::Requirement::AtMost => "<=",
                verify::Requirement::AtLeast => ">=",
            };
            println!(
                "{status} {}: {} = {:.6e} (required {op} {:.6e})",
                report.name, check.label, check.measured, check.requirement
            );
            all_pass &= check.pass();
        }
    }
    if all_pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_fragment(args: FragmentArgs) -> i32 {
    let seed = default_seed(args.seed);
    let (family, size) = match speclang::parse_graph(&args.graph) {
        Ok(x) => x,
        Err(e) => return usage_error(e),
    };
    let g = match build_graph(&family, size) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let times = match speclang::parse_list::<f64>(&args.times, "time") {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let started = now_ms();
    let run = |outputs: &mut Vec<PathBuf>| -> edgeavg::Result<serde_json::Value> {
        let mu0 = if args.uniform {
            MassVector::uniform(g.vertex_count())?
        } else {
            MassVector::delta(g.vertex_count(), args.source)?
        };
        let snaps = evolve_mass(&g, &mu0, &times, seed)?;
        std::fs::create_dir_all(&args.out)?;
        let csv_path = args.out.join("snapshots.csv");
        let mut f = File::create(&csv_path)?;
        write_snapshot_csv(&mut f, &snaps)?;
        outputs.push(csv_path);
        if args.dump_matrix {
            let mats = evolve_matrix::<f64>(&g, &times, seed)?;
            let path = args.out.join("matrix.csv");
            let mut f = File::create(&path)?;
            mats.last().expect("non-empty grid").write_csv(&mut f)?;
            outputs.push(path);
        }
        let last = &snaps[snaps.len() - 1];
        Ok(json!({
            "n": g.vertex_count(),
            "snapshots": snaps.len(),
            "final_time": last.0.time(),
            "final_q": last.1.q,
            "final_q_star": last.1.q_star,
            "seed": seed,
        }))
    };
    let mut outputs = Vec::new();
    let result = run(&mut outputs);
    let (exit, error_text) = match &result {
        Ok(summary) => {
            println!("{summary}");
            (EXIT_OK, None)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (error_code(e), Some(e.to_string()))
        }
    };
    if std::fs::create_dir_all(&args.out).is_ok() {
        let data = ManifestData {
            command: "fragment",
            base_seed: seed,
            config: json!({
                "graph": args.graph,
                "source": args.source,
                "uniform": args.uniform,
                "times": times,
                "dump_matrix": args.dump_matrix,
            }),
            started_ms: started,
            outputs,
            error: error_text,
        };
        if let Err(e) = write_manifest(&args.out, &data) {
            eprintln!("error: cannot write manifest: {e}");
        }
    }
    exit
}
