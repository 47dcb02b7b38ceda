use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toporesolve::{CbhConfig, ChfConfig, Correctness, EvalMode, ResolveOptions, ResolverKind};

#[derive(Debug, Parser)]
#[command(name = "toporesolve", version, about = "Unsupervised toponym resolution against GeoNames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a GeoNames dump and write a binary snapshot.
    Index(IndexArgs),
    /// Resolve every annotated toponym in a corpus.
    Resolve(ResolveArgs),
    /// Score resolutions against gold annotations.
    Eval(EvalArgs),
    /// Serve resolutions over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// GeoNames TSV dump.
    #[arg(long)]
    pub gazetteer: PathBuf,
    /// Optional bounding-box sidecar: id, south, west, north, east.
    #[arg(long)]
    pub bboxes: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GazetteerArgs {
    /// Snapshot or GeoNames TSV; the format is detected from the file header.
    #[arg(long, env = "TOPORESOLVE_SNAPSHOT")]
    pub gazetteer: PathBuf,
    /// Bounding-box sidecar, used only when loading a TSV dump.
    #[arg(long)]
    pub bboxes: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResolverArg {
    Preliminary,
    Cbh,
    Shs,
    Chf,
}

impl From<ResolverArg> for ResolverKind {
    fn from(r: ResolverArg) -> Self {
        match r {
            ResolverArg::Preliminary => ResolverKind::Preliminary,
            ResolverArg::Cbh => ResolverKind::Cbh,
            ResolverArg::Shs => ResolverKind::Shs,
            ResolverArg::Chf => ResolverKind::Chf,
        }
    }
}

#[derive(Debug, Args)]
pub struct ResolverArgs {
    #[arg(long, value_enum, default_value = "chf")]
    pub resolver: ResolverArg,
    /// CHF confidence threshold.
    #[arg(long, default_value_t = 0.55)]
    pub tau: f64,
    /// CBH hypothesis rounds.
    #[arg(long, default_value_t = 2)]
    pub max_iterations: usize,
}

impl ResolverArgs {
    pub fn options(&self) -> Result<ResolveOptions, String> {
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(format!("--tau must lie in [0, 1], got {}", self.tau));
        }
        Ok(ResolveOptions {
            resolver: self.resolver.into(),
            chf: ChfConfig {
                tau: self.tau,
                cbh: CbhConfig { max_iterations: self.max_iterations, ..CbhConfig::default() },
            },
        })
    }
}

#[derive(Debug, Args)]
pub struct ResolveArgs {
    #[command(flatten)]
    pub gazetteer: GazetteerArgs,
    #[arg(long)]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub resolver: ResolverArgs,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Resol,
    Geotag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrectnessArg {
    Distance,
    Bbox,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Resol => EvalMode::Resol,
            ModeArg::Geotag => EvalMode::GeoTag,
        }
    }
}

impl From<CorrectnessArg> for Correctness {
    fn from(c: CorrectnessArg) -> Self {
        match c {
            CorrectnessArg::Distance => Correctness::Distance,
            CorrectnessArg::Bbox => Correctness::BoundingBox,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub gazetteer: GazetteerArgs,
    /// Gold-annotated corpus.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Previously written resolutions; when absent the corpus is resolved first.
    #[arg(long, conflicts_with = "sweep_tau")]
    pub resolutions: Option<PathBuf>,
    #[command(flatten)]
    pub resolver: ResolverArgs,
    #[arg(long, value_enum, default_value = "resol")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "distance")]
    pub correctness: CorrectnessArg,
    #[arg(long, default_value_t = toporesolve::eval::RELAXED_THRESHOLD_KM)]
    pub threshold_km: f64,
    /// Evaluate CHF over `start:end:step` thresholds and emit CSV.
    #[arg(long, value_name = "START:END:STEP")]
    pub sweep_tau: Option<String>,
    /// Write metrics JSON (or the sweep CSV) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[command(flatten)]
    pub gazetteer: GazetteerArgs,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub listen: SocketAddr,
    /// Request bodies above this size are refused with 413.
    #[arg(long, default_value_t = 1 << 20)]
    pub max_body_bytes: usize,
    /// Defaults for requests that do not name a resolver or threshold.
    #[command(flatten)]
    pub resolver: ResolverArgs,
}
