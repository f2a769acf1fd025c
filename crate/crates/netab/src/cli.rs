//! Command-line front end with reproducible seeding and machine-readable
//! output.
//!
//! Every run writes its primary artifact to `--out` (or stdout) and a run
//! manifest (full config + seed + version) alongside it: `<out>.manifest.json`
//! next to a file output, or one JSON line on stderr otherwise. Exit codes:
//! 0 success, 1 domain error, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::diagnostics;
use crate::design::{
    algorithm2, algorithm2_batched, pair_structure, Rerandomization, Scenario, StoppingConfig,
};
use crate::error::{Error, Result};
use crate::evaluation::{
    convergence_csv, convergence_study, evaluate, format_significant, prob_figure_csv,
    prob_figure_data, table1_csv, table1_study, EvaluationReport, StudySetting,
};
use crate::graph::{generate_er, load_edge_list, Network};
use crate::seeds::{self, streams};
use crate::variance::ScenarioIParams;

#[derive(Parser, Debug)]
#[command(
    name = "netab",
    version,
    about = "Design and evaluate A/B tests on social networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic network and write it as an edge list
    Generate(GenerateArgs),
    /// Draw a rerandomized degree-balanced design
    Design(DesignArgs),
    /// Report distribution diagnostics and stopping thresholds
    Diagnose(DiagnoseArgs),
    /// Evaluate the design pipeline against Monte Carlo baselines
    Evaluate(EvaluateArgs),
    /// Percentile/gap study over a grid of synthetic settings
    Table1(Table1Args),
    /// Balance-probability summaries per network
    ProbFigure(ProbFigureArgs),
    /// Assumption-ratio decay over a (size, density) grid
    Convergence(ConvergenceArgs),
}

fn parse_unit_open(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is not in the open interval (0, 1)"))
    }
}

fn parse_scenario(s: &str) -> std::result::Result<Scenario, String> {
    s.parse()
}

#[derive(Args, Debug)]
struct NetworkSource {
    /// Edge-list file: two vertex ids per line, `#` comments allowed
    #[arg(long, conflicts_with_all = ["n", "p"], required_unless_present = "n")]
    edges: Option<PathBuf>,
    /// Generate a synthetic network with this many vertices
    #[arg(long, requires = "p")]
    n: Option<usize>,
    /// Density of the synthetic network, in (0, 1)
    #[arg(long, requires = "n", value_parser = parse_unit_open)]
    p: Option<f64>,
}

impl NetworkSource {
    /// Loads or generates the network. Synthetic generation uses its own
    /// stream of the run seed so the same seed governs the whole run.
    fn network(&self, seed: u64) -> Result<Network> {
        match (&self.edges, self.n, self.p) {
            (Some(path), _, _) => load_edge_list(path),
            (None, Some(n), Some(p)) => generate_er(n, p, seeds::derive(seed, streams::NETWORK)),
            _ => Err(Error::InvalidConfig(
                "a network source (--edges or --n/--p) is required".into(),
            )),
        }
    }

    fn describe(&self) -> serde_json::Value {
        json!({
            "edges": self.edges,
            "n": self.n,
            "p": self.p,
        })
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Number of vertices before trimming
    #[arg(long)]
    n: usize,
    /// Edge probability, in (0, 1)
    #[arg(long, value_parser = parse_unit_open)]
    p: f64,
    /// RNG seed; drawn from entropy when omitted
    #[arg(long, env = "NETAB_SEED")]
    seed: Option<u64>,
    /// Output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DesignArgs {
    #[command(flatten)]
    source: NetworkSource,
    /// Design scenario: I (minimize the cut) or II (zero the cut)
    #[arg(long, value_parser = parse_scenario, default_value = "I")]
    scenario: Scenario,
    /// Quantile level for the stopping threshold; defaults to 0.005 for
    /// Scenario I and 0.1 for Scenario II
    #[arg(long, value_parser = parse_unit_open)]
    alpha: Option<f64>,
    /// Maximum number of randomizations
    #[arg(long = "T", default_value_t = 5000, value_parser = clap::value_parser!(u32).range(1..))]
    t_max: u32,
    /// Explicit stopping threshold; overrides the quantile rule
    #[arg(long)]
    c: Option<f64>,
    /// Explicit degree-balance bound; reporting only, defaults to c(W)
    #[arg(long)]
    delta1: Option<f64>,
    /// Treatment-balance bound
    #[arg(long, default_value_t = 1.0)]
    delta2: f64,
    #[arg(long, env = "NETAB_SEED")]
    seed: Option<u64>,
    /// Worker threads; 1 = sequential draws
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiagnoseArgs {
    #[command(flatten)]
    source: NetworkSource,
    /// Quantile level applied to both thresholds; defaults to 0.005 for
    /// the one-sided and 0.1 for the folded rule
    #[arg(long, value_parser = parse_unit_open)]
    alpha: Option<f64>,
    #[arg(long, env = "NETAB_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    source: NetworkSource,
    #[arg(long, value_parser = parse_scenario, default_value = "I")]
    scenario: Scenario,
    #[arg(long, value_parser = parse_unit_open)]
    alpha: Option<f64>,
    #[arg(long = "T", default_value_t = 5000, value_parser = clap::value_parser!(u32).range(1..))]
    t_max: u32,
    /// Explicit stopping threshold
    #[arg(long)]
    c: Option<f64>,
    /// Correlation parameter of the response model
    #[arg(long, default_value_t = 0.5, value_parser = parse_unit_open)]
    rho: f64,
    /// Number of Monte Carlo baseline designs
    #[arg(long = "n-mc", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(100..))]
    n_mc: u64,
    #[arg(long, env = "NETAB_SEED")]
    seed: Option<u64>,
    /// Worker threads; 0 = all cores
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Table1Args {
    /// Restrict to one scenario; both when omitted
    #[arg(long, value_parser = parse_scenario)]
    scenario: Option<Scenario>,
    /// Single-setting override: network size
    #[arg(long, requires = "p")]
    n: Option<usize>,
    /// Single-setting override: network density
    #[arg(long, requires = "n", value_parser = parse_unit_open)]
    p: Option<f64>,
    /// Networks generated per setting
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long = "n-mc", default_value_t = 1000, value_parser = clap::value_parser!(u64).range(100..))]
    n_mc: u64,
    #[arg(long, default_value_t = 0.5, value_parser = parse_unit_open)]
    rho: f64,
    #[arg(long = "T", default_value_t = 5000, value_parser = clap::value_parser!(u32).range(1..))]
    t_max: u32,
    #[arg(long, env = "NETAB_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProbFigureArgs {
    /// Edge-list file; repeat for several networks
    #[arg(long, required_unless_present = "n")]
    edges: Vec<PathBuf>,
    #[arg(long, requires = "p", conflicts_with = "edges")]
    n: Option<usize>,
    #[arg(long, requires = "n", conflicts_with = "edges", value_parser = parse_unit_open)]
    p: Option<f64>,
    #[arg(long, env = "NETAB_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvergenceArgs {
    /// Network sizes, comma separated
    #[arg(long = "n-list", value_delimiter = ',', default_values_t = [100usize, 500, 1000, 2000])]
    n_list: Vec<usize>,
    /// Network densities, comma separated
    #[arg(long = "p-list", value_delimiter = ',', default_values_t = [0.01f64, 0.1, 0.3])]
    p_list: Vec<f64>,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, env = "NETAB_SEED")]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Json,
    Csv,
}

/// Run manifest written alongside every output; holds everything needed
/// to reproduce the run byte for byte.
#[derive(Serialize)]
struct Manifest {
    version: &'static str,
    command: &'static str,
    seed: u64,
    config: serde_json::Value,
}

/// Serialized design artifact.
#[derive(Serialize)]
struct DesignRecord {
    n: usize,
    x: Vec<i8>,
    seed: u64,
    iterations: u32,
    accepted: bool,
    objective: i64,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Design(args) => cmd_design(args),
        Command::Diagnose(args) => cmd_diagnose(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Table1(args) => cmd_table1(args),
        Command::ProbFigure(args) => cmd_prob_figure(args),
        Command::Convergence(args) => cmd_convergence(args),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s: u64 = rand::random();
            eprintln!("netab: no --seed given, drew {s} from entropy");
            s
        }
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("failed to build thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn emit(out: &Option<PathBuf>, content: &str, manifest: &Manifest) -> Result<()> {
    let manifest_json =
        serde_json::to_string_pretty(manifest).expect("manifest serialization cannot fail");
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let mpath = manifest_path(path);
            fs::write(&mpath, format!("{manifest_json}\n")).map_err(|source| Error::Io {
                path: mpath,
                source,
            })?;
        }
        None => {
            print!("{content}");
            eprintln!(
                "{}",
                serde_json::to_string(manifest).expect("manifest serialization cannot fail")
            );
        }
    }
    Ok(())
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    s.push('\n');
    s
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let net = generate_er(args.n, args.p, seed)?;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: "generate",
        seed,
        config: json!({
            "n": args.n,
            "p": args.p,
            "seed": seed,
            "out": args.out,
        }),
    };
    emit(&args.out, &net.to_edge_list_string(), &manifest)
}

fn cmd_design(args: DesignArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let net = args.source.network(seed)?;
    let cfg = StoppingConfig {
        scenario: args.scenario,
        c: args.c,
        delta1: args.delta1,
        delta2: args.delta2,
        t_max: args.t_max,
        alpha: args.alpha.unwrap_or(match args.scenario {
            Scenario::I => 0.005,
            Scenario::II => 0.1,
        }),
    };
    let rr: Rerandomization = in_pool(args.threads, || {
        if args.threads == 1 {
            algorithm2(&net, &cfg, seed)
        } else {
            algorithm2_batched(&net, &cfg, seed, 256)
        }
    })??;
    let record = DesignRecord {
        n: net.n(),
        x: rr.design.signs().to_vec(),
        seed,
        iterations: rr.iterations,
        accepted: rr.accepted,
        objective: rr.objective,
    };
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: "design",
        seed,
        config: json!({
            "source": args.source.describe(),
            "scenario": args.scenario,
            "alpha": cfg.alpha,
            "T": cfg.t_max,
            "c": args.c,
            "delta1": args.delta1,
            "delta2": args.delta2,
            "seed": seed,
            "threads": args.threads,
            "out": args.out,
            "threshold_used": rr.threshold,
        }),
    };
    emit(&args.out, &to_pretty_json(&record), &manifest)
}

fn cmd_diagnose(args: DiagnoseArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let net = args.source.network(seed)?;
    let alpha1 = args.alpha.unwrap_or(0.005);
    let alpha2 = args.alpha.unwrap_or(0.1);
    let ps = pair_structure(&net, seeds::derive(seed, streams::REFERENCE_PAIRING));
    let report = diagnostics(&net, &ps, alpha1, alpha2)?;
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: "diagnose",
        seed,
        config: json!({
            "source": args.source.describe(),
            "alpha": args.alpha,
            "seed": seed,
            "out": args.out,
        }),
    };
    emit(&args.out, &to_pretty_json(&report), &manifest)
}

fn evaluation_csv(r: &EvaluationReport) -> String {
    let mut out = String::from(
        "scenario,percentile,gap,gap_median,v_opt,v_median,v_lb,n_mc,acceptance_rate,\
         mean_iterations,balance_prob_upper,balance_prob_actual_avg\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}\n",
        r.scenario,
        format_significant(r.percentile),
        format_significant(r.gap),
        format_significant(r.gap_median),
        format_significant(r.v_opt),
        format_significant(r.v_median),
        format_significant(r.v_lb),
        r.n_mc,
        format_significant(r.acceptance_rate),
        format_significant(r.mean_iterations),
        format_significant(r.balance_prob_upper),
        format_significant(r.balance_prob_actual_avg),
    ));
    out
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let net = args.source.network(seed)?;
    let cfg = StoppingConfig {
        scenario: args.scenario,
        c: args.c,
        delta1: None,
        delta2: 1.0,
        t_max: args.t_max,
        alpha: args.alpha.unwrap_or(match args.scenario {
            Scenario::I => 0.005,
            Scenario::II => 0.1,
        }),
    };
    let params = ScenarioIParams::new(args.rho, 1.0)?;
    let n_mc = args.n_mc as usize;
    let report = in_pool(args.threads, || evaluate(&net, &cfg, &params, n_mc, seed))??;
    let content = match args.format {
        OutputFormat::Json => to_pretty_json(&report),
        OutputFormat::Csv => evaluation_csv(&report),
    };
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: "evaluate",
        seed,
        config: json!({
            "source": args.source.describe(),
            "scenario": args.scenario,
            "alpha": cfg.alpha,
            "T": cfg.t_max,
            "c": args.c,
            "rho": args.rho,
            "n_mc": n_mc,
            "seed": seed,
            "threads": args.threads,
            "format": args.format,
            "out": args.out,
        }),
    };
    emit(&args.out, &content, &manifest)
}

/// The synthetic study grid: sizes 50 and 100 at densities 0.1/0.3, and
/// sizes 1000 and 2000 at densities 0.01/0.1.
fn default_settings(scenario: Scenario) -> Vec<StudySetting> {
    [
        (50, 0.1),
        (50, 0.3),
        (100, 0.1),
        (100, 0.3),
        (1000, 0.01),
        (1000, 0.1),
        (2000, 0.01),
        (2000, 0.1),
    ]
    .into_iter()
    .map(|(n_target, p)| StudySetting {
        scenario,
        n_target,
        p,
    })
    .collect()
}

fn cmd_table1(args: Table1Args) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let scenarios: Vec<Scenario> = match args.scenario {
        Some(s) => vec![s],
        None => vec![Scenario::I, Scenario::II],
    };
    let mut settings = Vec::new();
    for &scenario in &scenarios {
        match (args.n, args.p) {
            (Some(n_target), Some(p)) => settings.push(StudySetting {
                scenario,
                n_target,
                p,
            }),
            _ => settings.extend(default_settings(scenario)),
        }
    }
    let params = ScenarioIParams::new(args.rho, 1.0)?;
    let reps = args.reps as usize;
    let n_mc = args.n_mc as usize;
    let rows = in_pool(args.threads, || {
        table1_study(&settings, reps, n_mc, args.t_max, &params, seed)
    })?;
    let content = match args.format {
        OutputFormat::Json => to_pretty_json(&rows),
        OutputFormat::Csv => table1_csv(&rows),
    };
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: "table1",
        seed,
        config: json!({
            "scenario": args.scenario,
            "n": args.n,
            "p": args.p,
            "reps": reps,
            "n_mc": n_mc,
            "rho": args.rho,
            "T": args.t_max,
            "seed": seed,
            "threads": args.threads,
            "format": args.format,
            "out": args.out,
        }),
    };
    emit(&args.out, &content, &manifest)
}

fn cmd_prob_figure(args: ProbFigureArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    let mut nets: Vec<(String, Network)> = Vec::new();
    if args.edges.is_empty() {
        let (n, p) = match (args.n, args.p) {
            (Some(n), Some(p)) => (n, p),
            _ => {
                return Err(Error::InvalidConfig(
                    "a network source (--edges or --n/--p) is required".into(),
                ))
            }
        };
        let net = generate_er(n, p, seeds::derive(seed, streams::NETWORK))?;
        nets.push((format!("er-n{n}-p{p}"), net));
    } else {
        for path in &args.edges {
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            nets.push((label, load_edge_list(path)?));
        }
    }
    let rows = in_pool(args.threads, || prob_figure_data(&nets, seed))??;
    let content = match args.format {
        OutputFormat::Json => to_pretty_json(&rows),
        OutputFormat::Csv => prob_figure_csv(&rows),
    };
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: "prob-figure",
        seed,
        config: json!({
            "edges": args.edges,
            "n": args.n,
            "p": args.p,
            "seed": seed,
            "threads": args.threads,
            "format": args.format,
            "out": args.out,
        }),
    };
    emit(&args.out, &content, &manifest)
}

fn cmd_convergence(args: ConvergenceArgs) -> Result<()> {
    let seed = resolve_seed(args.seed);
    for &p in &args.p_list {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "density {p} is not in the open interval (0, 1)"
            )));
        }
    }
    let reps = args.reps as usize;
    let rows = in_pool(args.threads, || {
        convergence_study(&args.n_list, &args.p_list, reps, seed)
    })?;
    let content = match args.format {
        OutputFormat::Json => to_pretty_json(&rows),
        OutputFormat::Csv => convergence_csv(&rows),
    };
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        command: "convergence",
        seed,
        config: json!({
            "n_list": args.n_list,
            "p_list": args.p_list,
            "reps": reps,
            "seed": seed,
            "threads": args.threads,
            "format": args.format,
            "out": args.out,
        }),
    };
    emit(&args.out, &content, &manifest)
}
