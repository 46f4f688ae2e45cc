//! Command-line front end. Exit codes: 0 success, 1 verification mismatch,
//! 2 usage or parameter error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bisect::BisectionOptions;
use crate::capacity::{capacity, horizontal_selection, vertical_ordering};
use crate::error::{Error, Result};
use crate::flowgraph::build_worst_case_graph;
use crate::model::{ResourceAllocation, SystemConfig};
use crate::rational::{from_usize, int, parse_rational, pow2_inv, to_display_decimal, to_fraction, Rational};
use crate::tradeoff::{
    capacity_of_kappa, curves_to_json, default_grid, linear_grid, sweep, CurveKind, FileSize, SweepParams,
};
use crate::verify::{verify, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cdss", version, about = "Storage capacity and repair trade-offs of clustered distributed storage")]
struct Cli {
    /// Also write a run manifest to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form capacity for one system and resource allocation.
    Capacity(CapacityArgs),
    /// Check the closed form against the max-flow oracle on all small systems.
    Verify(VerifyArgs),
    /// Write a trade-off curve as CSV plus an exact JSON sidecar.
    Sweep(SweepArgs),
    /// Re-run the invocation recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct CapacityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long = "L", visible_alias = "l")]
    clusters: usize,
    #[arg(long)]
    alpha: String,
    #[arg(long = "beta-i", requires = "beta_c", conflicts_with_all = ["gamma", "kappa"])]
    beta_i: Option<String>,
    #[arg(long = "beta-c", requires = "beta_i")]
    beta_c: Option<String>,
    #[arg(long, requires = "kappa")]
    gamma: Option<String>,
    #[arg(long, requires = "gamma")]
    kappa: Option<String>,
    /// Write the worst-case information flow graph as Graphviz DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    max_n: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deliberately corrupt one weight value of the closed form.
    #[arg(long)]
    perturb: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Fig6,
    Fig7,
    Fig8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveArg {
    Kappa,
    AlphaGamma,
    #[value(name = "gammaI-gammaC")]
    GammaIGammaC,
}

impl From<CurveArg> for CurveKind {
    fn from(c: CurveArg) -> Self {
        match c {
            CurveArg::Kappa => CurveKind::Kappa,
            CurveArg::AlphaGamma => CurveKind::AlphaGamma,
            CurveArg::GammaIGammaC => CurveKind::GammaIGammaC,
        }
    }
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    curve: Option<CurveArg>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "L", visible_alias = "l")]
    clusters: Option<usize>,
    /// File size.
    #[arg(long = "M", visible_alias = "m")]
    file_size: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Comma-separated grid values (rationals or decimals).
    #[arg(long, conflicts_with_all = ["grid_from", "grid_to", "grid_points"])]
    grid: Option<String>,
    #[arg(long, requires_all = ["grid_to", "grid_points"])]
    grid_from: Option<String>,
    #[arg(long)]
    grid_to: Option<String>,
    #[arg(long)]
    grid_points: Option<usize>,
    /// Bisection bracket width, as a power of two exponent (2^-N).
    #[arg(long, default_value_t = 40)]
    tolerance_bits: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long = "from")]
    from: PathBuf,
}

/// Record of one invocation, written as JSON beside the outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Arguments after the program name, verbatim.
    pub args: Vec<String>,
    /// Resolved parameters after presets and defaults.
    pub parameters: std::collections::BTreeMap<String, String>,
    pub outputs: Vec<PathBuf>,
    pub exit_status: i32,
    pub duration_ms: u128,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

struct Outcome {
    status: i32,
    parameters: std::collections::BTreeMap<String, String>,
    outputs: Vec<PathBuf>,
}

/// Runs the CLI on `argv` (including the program name) and returns the
/// process exit code. Output goes to stdout, diagnostics to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();

    let started = Instant::now();
    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Error::InvalidParameter(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    let manifest = RunManifest {
        subcommand: subcommand_name(&cli.command).to_string(),
        args,
        parameters: outcome.parameters,
        outputs: outcome.outputs.clone(),
        exit_status: outcome.status,
        duration_ms: started.elapsed().as_millis(),
    };
    let mut targets: Vec<PathBuf> = cli.manifest.into_iter().collect();
    if let Some(last) = outcome.outputs.last() {
        targets.push(manifest_path_for(last));
    }
    for path in targets {
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = std::fs::write(&path, json + "\n") {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    outcome.status
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Capacity(_) => "capacity",
        Command::Verify(_) => "verify",
        Command::Sweep(_) => "sweep",
        Command::Replay(_) => "replay",
    }
}

/// `out/fig6.csv` -> `out/fig6.manifest.json`
pub fn manifest_path_for(output: &Path) -> PathBuf {
    sibling(output, "manifest.json")
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Capacity(a) => cmd_capacity(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Replay(a) => cmd_replay(a),
    }
}

fn cmd_capacity(a: &CapacityArgs) -> Result<Outcome> {
    let cfg = SystemConfig::new(a.n, a.k, a.clusters)?;
    let alpha = parse_rational(&a.alpha)?;
    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("n".into(), a.n.to_string());
    parameters.insert("k".into(), a.k.to_string());
    parameters.insert("L".into(), a.clusters.to_string());
    parameters.insert("alpha".into(), to_fraction(&alpha));

    let (value, res) = match (&a.beta_i, &a.beta_c, &a.gamma, &a.kappa) {
        (Some(bi), Some(bc), None, None) => {
            let res = ResourceAllocation::new(&cfg, alpha, parse_rational(bi)?, parse_rational(bc)?)?;
            (capacity(&cfg, &res)?, res)
        }
        (None, None, Some(g), Some(kp)) => {
            let (gamma, kappa) = (parse_rational(g)?, parse_rational(kp)?);
            parameters.insert("gamma".into(), to_fraction(&gamma));
            parameters.insert("kappa".into(), to_fraction(&kappa));
            let value = capacity_of_kappa(&cfg, &alpha, &gamma, &kappa)?;
            let helpers = from_usize(cfg.intra_helpers()) + from_usize(cfg.cross_helpers()) * &kappa;
            let beta_i = &gamma / helpers;
            let res = ResourceAllocation::new(&cfg, alpha, beta_i.clone(), &beta_i * &kappa)?;
            (value, res)
        }
        _ => return Err(Error::InvalidParameter("give either --beta-i and --beta-c, or --gamma and --kappa".into())),
    };
    parameters.insert("beta_I".into(), to_fraction(res.beta_i()));
    parameters.insert("beta_c".into(), to_fraction(res.beta_c()));

    let mut outputs = Vec::new();
    if let Some(path) = &a.dot {
        let s_h = horizontal_selection(&cfg);
        let graph = build_worst_case_graph(&cfg, &res, &s_h, &vertical_ordering(&s_h))?;
        write_file(path, &graph.to_dot())?;
        outputs.push(path.clone());
    }
    println!("{} ({})", to_fraction(&value), to_display_decimal(&value));
    Ok(Outcome { status: EXIT_OK, parameters, outputs })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let opts =
        VerifyOptions { max_n: a.max_n, trials: a.trials, seed: a.seed, perturb: a.perturb, ..Default::default() };
    if opts.max_n < 2 {
        return Err(Error::InvalidParameter("--max-n must be at least 2".into()));
    }
    let report = verify(&opts)?;
    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("max_n".into(), a.max_n.to_string());
    parameters.insert("trials".into(), a.trials.to_string());
    parameters.insert("seed".into(), a.seed.to_string());
    parameters.insert("perturb".into(), a.perturb.to_string());

    let summary = format!(
        "{} configs, {} cases: {} oracle, {} ordering, {} selection, {} weight-sum, {} reduction comparisons",
        report.configs,
        report.cases,
        report.oracle_comparisons,
        report.ordering_comparisons,
        report.selection_comparisons,
        report.weight_sum_comparisons,
        report.reduction_comparisons
    );
    let status = if let Some(first) = report.failures.first() {
        println!("FAIL {summary}; {} mismatches", report.failures.len());
        println!("first counterexample: {first}");
        EXIT_MISMATCH
    } else {
        println!("ok {summary}");
        EXIT_OK
    };
    Ok(Outcome { status, parameters, outputs: Vec::new() })
}

struct ResolvedSweep {
    kind: CurveKind,
    cfg: SystemConfig,
    params: SweepParams,
    grid: Vec<Rational>,
}

fn resolve_sweep(a: &SweepArgs) -> Result<ResolvedSweep> {
    let (preset_kind, preset_m, preset_alpha, preset_gamma) = match a.preset {
        Some(Preset::Fig6) => (Some(CurveKind::Kappa), None, Some(int(1)), Some(int(1))),
        Some(Preset::Fig7) => (Some(CurveKind::AlphaGamma), Some(int(85)), None, None),
        // alpha = M/k
        Some(Preset::Fig8) => (Some(CurveKind::GammaIGammaC), Some(int(85)), Some(int(1)), None),
        None => (None, None, None, None),
    };
    let kind = match (a.curve.map(CurveKind::from), preset_kind) {
        (Some(c), Some(p)) if c != p => {
            return Err(Error::InvalidParameter(format!("--curve {c} does not match the preset's {p} curve")))
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => return Err(Error::InvalidParameter("give --curve or --preset".into())),
    };
    let (dn, dk, dl) = if a.preset.is_some() { (Some(100), Some(85), Some(10)) } else { (None, None, None) };
    let missing = |name: &str| Error::InvalidParameter(format!("--{name} is required"));
    let cfg = SystemConfig::new(
        a.n.or(dn).ok_or_else(|| missing("n"))?,
        a.k.or(dk).ok_or_else(|| missing("k"))?,
        a.clusters.or(dl).ok_or_else(|| missing("L"))?,
    )?;
    let parse_opt = |s: &Option<String>| s.as_deref().map(parse_rational).transpose();
    let file_size = parse_opt(&a.file_size)?.or(preset_m).map(FileSize::new).transpose()?;
    let params = SweepParams {
        file_size,
        alpha: parse_opt(&a.alpha)?.or(preset_alpha),
        gamma: parse_opt(&a.gamma)?.or(preset_gamma),
        bisection: BisectionOptions { tolerance: pow2_inv(a.tolerance_bits), ..Default::default() },
    };
    let grid = if let Some(list) = &a.grid {
        list.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?
    } else if let (Some(from), Some(to), Some(points)) = (&a.grid_from, &a.grid_to, a.grid_points) {
        linear_grid(&parse_rational(from)?, &parse_rational(to)?, points)
    } else {
        default_grid(kind, &cfg, &params)?
    };
    Ok(ResolvedSweep { kind, cfg, params, grid })
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let r = resolve_sweep(a)?;
    let curves = sweep(r.kind, &r.cfg, &r.params, &r.grid)?;

    let mut parameters = std::collections::BTreeMap::new();
    parameters.insert("curve".into(), r.kind.to_string());
    parameters.insert("n".into(), r.cfg.n().to_string());
    parameters.insert("k".into(), r.cfg.k().to_string());
    parameters.insert("L".into(), r.cfg.clusters().to_string());
    if let Some(m) = &r.params.file_size {
        parameters.insert("M".into(), to_fraction(m.value()));
    }
    for (name, v) in [("alpha", &r.params.alpha), ("gamma", &r.params.gamma)] {
        if let Some(v) = v {
            parameters.insert(name.into(), to_fraction(v));
        }
    }
    parameters.insert("tolerance".into(), to_fraction(&r.params.bisection.tolerance));
    parameters.insert("grid".into(), r.grid.iter().map(to_fraction).collect::<Vec<_>>().join(","));

    let mut outputs = Vec::new();
    for curve in &curves {
        let path = if curves.len() == 1 { a.out.clone() } else { sibling(&a.out, &format!("{}.csv", curve.series)) };
        write_file(&path, &curve.to_csv())?;
        let mut line = format!("{}: {} rows -> {}", curve.series, curve.points.len(), path.display());
        if !curve.gaps.is_empty() {
            line.push_str(&format!(" ({} infeasible points)", curve.gaps.len()));
        }
        if !curve.metadata.flags.is_empty() {
            line.push_str(&format!(" [{}]", curve.metadata.flags.join(", ")));
        }
        println!("{line}");
        outputs.push(path);
    }
    let sidecar = a.out.with_extension("json");
    write_file(&sidecar, &curves_to_json(&curves))?;
    outputs.push(sidecar);
    Ok(Outcome { status: EXIT_OK, parameters, outputs })
}

fn cmd_replay(a: &ReplayArgs) -> Result<Outcome> {
    let manifest = RunManifest::read(&a.from)?;
    if manifest.subcommand == "replay" {
        return Err(Error::InvalidParameter("refusing to replay a replay".into()));
    }
    let argv = std::iter::once("cdss".to_string()).chain(manifest.args.iter().cloned());
    let status = run(argv);
    Ok(Outcome { status, parameters: Default::default(), outputs: Vec::new() })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::InvalidParameter(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))
}
