use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use pruning_core::disk::{
    check_pruning_conditions, default_horizon, disk_from_homoclinic_pair, disk_from_params, oracle_check,
    Certificate, OracleReport, Verdict,
};
use pruning_core::henon::{census, classify, ContinuationConfig};
use pruning_core::sft::PruningParams;
use pruning_core::symbolic::HomoclinicCode;
use pruning_core::verifier::{census_vs_sft_refined, preset_suite, suite_passes, Provenance, ReportVerdict};
use serde::Serialize;

use crate::api::{self, to_json, ApiError, ClassifyQuery, SliceQuery};
use crate::service::{self, ServiceConfig, DEFAULT_CACHE_CAPACITY};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NEGATIVE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Api(#[from] ApiError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Other(#[from] Box<dyn std::error::Error + Send + Sync>),
}

fn other(e: impl std::error::Error + Send + Sync + 'static) -> CliError {
    CliError::Other(Box::new(e))
}

#[derive(Debug, Parser)]
#[command(name = "pruning", version, about = "Pruning disks, subshift counts and Hénon periodic-orbit census")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Periodic-point counts and entropy of the pruned subshift.
    Sft(SftArgs),
    /// Check the pruning-disk conditions for D_{N,M} or a homoclinic pair.
    Disk(DiskArgs),
    /// Parameter-region flags for (a, b).
    Classify(ClassifyArgs),
    /// Periodic-orbit census by continuation from large a.
    Census(CensusArgs),
    /// Compare the census with the subshift prediction.
    Verify(VerifyArgs),
    /// Render an escape-time slice of the unstable manifold.
    Slice(SliceArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct SftArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long = "N2", requires = "m2")]
    pub n2: Option<usize>,
    #[arg(long = "M2", requires = "n2")]
    pub m2: Option<usize>,
    #[arg(long, default_value_t = 12)]
    pub max_period: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("params").args(["n", "p0"]).required(true)))]
pub struct DiskArgs {
    #[arg(long = "N", requires = "m")]
    pub n: Option<usize>,
    #[arg(long = "M", requires = "n")]
    pub m: Option<usize>,
    #[arg(long, requires = "p1", conflicts_with = "n")]
    pub p0: Option<String>,
    #[arg(long, requires = "p0")]
    pub p1: Option<String>,
    /// Also run the plane-model oracle.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, default_value_t = 6)]
    pub oracle_depth: usize,
    #[arg(long, default_value_t = 64)]
    pub oracle_resolution: usize,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 8)]
    pub max_period: usize,
    #[arg(long)]
    pub a_start: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("target").args(["preset", "a"]).required(true)))]
pub struct VerifyArgs {
    /// theorem, section5, intervals, all, or a single preset name.
    #[arg(long, conflicts_with_all = ["a", "b", "n", "m"])]
    pub preset: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "b")]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    pub b: Option<f64>,
    /// Disk subscripts; repeat --N/--M for several disks.
    #[arg(long = "N")]
    pub n: Vec<usize>,
    #[arg(long = "M")]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 8)]
    pub max_period: usize,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub are: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub aim: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: f64,
    #[arg(long, default_value_t = 256)]
    pub res: usize,
    #[arg(long, default_value_t = 2.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 200)]
    pub budget: u32,
    #[arg(long, default_value_t = 24)]
    pub depth: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub workers: usize,
    #[arg(long, default_value_t = DEFAULT_CACHE_CAPACITY)]
    pub cache: usize,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Sft(a) => run_sft(a, out),
        Command::Disk(a) => run_disk(a, out),
        Command::Classify(a) => {
            let p = api::classify_payload(ClassifyQuery { a: a.a, b: a.b })?;
            writeln!(out, "{}", to_json(&p))?;
            Ok(EXIT_OK)
        }
        Command::Census(a) => run_census(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Slice(a) => run_slice(a, out),
        Command::Serve(a) => {
            let cfg = ServiceConfig { static_dir: a.static_dir, workers: a.workers, cache_capacity: a.cache };
            tokio::runtime::Runtime::new()?.block_on(service::serve(a.port, cfg))?;
            Ok(EXIT_OK)
        }
    }
}

fn run_sft(a: SftArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let mut disks = vec![PruningParams::new(a.n, a.m)];
    if let (Some(n), Some(m)) = (a.n2, a.m2) {
        disks.push(PruningParams::new(n, m));
    }
    let p = api::sft_payload(&disks, a.max_period)?;
    match a.format {
        Format::Json => writeln!(out, "{}", to_json(&p))?,
        Format::Table => {
            writeln!(out, "{:>3} {:>10} {:>10}", "n", "points", "orbits")?;
            for r in &p.rows {
                writeln!(out, "{:>3} {:>10} {:>10}", r.n, r.points, r.exact_orbits)?;
            }
            writeln!(out, "entropy {:.12}", p.entropy)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DiskOutput {
    certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

fn parse_code(text: &str) -> Result<HomoclinicCode, CliError> {
    text.parse().map_err(|e| CliError::Usage(format!("bad code {text:?}: {e}")))
}

fn run_disk(a: DiskArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let disk = match (a.n, a.m, &a.p0, &a.p1) {
        (Some(n), Some(m), _, _) => disk_from_params(PruningParams::new(n, m)),
        (_, _, Some(p0), Some(p1)) => disk_from_homoclinic_pair(&parse_code(p0)?, &parse_code(p1)?).map_err(other)?,
        _ => return Err(CliError::Usage("give --N and --M, or --p0 and --p1".into())),
    };
    let horizon = a.horizon.unwrap_or_else(|| default_horizon(&disk));
    let certificate = check_pruning_conditions(&disk, horizon).map_err(other)?;
    let oracle = if a.oracle {
        Some(oracle_check(&disk, a.oracle_depth, a.oracle_resolution).map_err(other)?)
    } else {
        None
    };
    let code = if certificate.verdict == Verdict::Pass { EXIT_OK } else { EXIT_NEGATIVE };
    writeln!(out, "{}", to_json(&DiskOutput { certificate, oracle }))?;
    Ok(code)
}

fn continuation(a_start: Option<f64>, steps: Option<usize>) -> ContinuationConfig {
    let mut cfg = ContinuationConfig { a_start, ..ContinuationConfig::default() };
    if let Some(s) = steps {
        cfg.steps = s;
    }
    cfg
}

fn run_census(a: CensusArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    if a.b == 0.0 {
        return Err(ApiError::Semantic("b must be nonzero".into()).into());
    }
    let c = census(&classify(a.a, a.b), a.max_period, &continuation(a.a_start, a.steps)).map_err(other)?;
    writeln!(out, "{}", to_json(&c))?;
    Ok(EXIT_OK)
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = continuation(None, a.steps);
    let reports = match (&a.preset, a.a, a.b) {
        (Some(name), _, _) => preset_suite(name, a.max_period, &cfg).map_err(other)?,
        (None, Some(x), Some(y)) => {
            if a.n.len() != a.m.len() {
                return Err(CliError::Usage("--N and --M must be given the same number of times".into()));
            }
            let disks: Vec<_> = a.n.iter().zip(&a.m).map(|(&n, &m)| PruningParams::new(n, m)).collect();
            vec![census_vs_sft_refined(x, y, &disks, a.max_period, &cfg, Provenance::Custom).map_err(other)?]
        }
        _ => return Err(CliError::Usage("give --preset, or --a and --b".into())),
    };
    writeln!(out, "{}", to_json(&reports))?;
    let ok = if a.preset.is_some() {
        suite_passes(&reports) && reports.iter().all(|r| r.verdict != ReportVerdict::Mismatch)
    } else {
        reports.iter().all(|r| r.verdict == ReportVerdict::Match)
    };
    Ok(if ok { EXIT_OK } else { EXIT_NEGATIVE })
}

fn run_slice(a: SliceArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let q = SliceQuery {
        are: a.are,
        aim: a.aim,
        b: a.b,
        res: a.res,
        radius: a.radius,
        budget: a.budget,
        depth: a.depth,
    };
    let img = api::slice_image(&q)?;
    std::fs::write(&a.out, img.to_pgm())?;
    writeln!(out, "{}", to_json(&img.meta))?;
    Ok(EXIT_OK)
}
