use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use cloudskel::geometry::CloudFormat;
use cloudskel::synth::{NoiseModel, PatternKind};

/// Echo patterns and noise models in their command-line spelling.
fn as_strings<T: std::fmt::Display, S: serde::Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(ToString::to_string))
}

#[derive(Debug, Parser)]
#[command(name = "cloudskel", version, about = "Graph skeletons of noisy planar point clouds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// Sample noisy clouds around pattern graphs and write a manifest.
    Generate(GenerateArgs),
    /// Build a graph skeleton of one cloud.
    Skeletonize(SkeletonizeArgs),
    /// Persistence diagrams of a cloud.
    Diagram(DiagramArgs),
    /// Diagonal and vertical gaps of a one-dimensional diagram.
    Gaps(GapsArgs),
    /// Score the algorithms on a generated dataset.
    Benchmark(BenchmarkArgs),
    /// Draw a skeleton or diagram JSON file as SVG.
    Render(RenderArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Generate(_) => "generate",
            Self::Skeletonize(_) => "skeletonize",
            Self::Diagram(_) => "diagram",
            Self::Gaps(_) => "gaps",
            Self::Benchmark(_) => "benchmark",
            Self::Render(_) => "render",
        }
    }
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
#[command(group(ArgGroup::new("types").required(true).args(["pattern", "paper_grid"])))]
pub struct GenerateArgs {
    /// Pattern such as `wheel:5`, `grid:3x2` or `hexagons:4`; repeatable.
    #[arg(long, value_parser = clap::value_parser!(PatternKind))]
    #[serde(serialize_with = "as_strings")]
    pub pattern: Vec<PatternKind>,
    /// Noise such as `none`, `uniform:0.1` or `gaussian:0.04`; repeatable.
    /// Every pattern is combined with every noise.
    #[arg(long, default_value = "none", value_parser = clap::value_parser!(NoiseModel))]
    #[serde(serialize_with = "as_strings")]
    pub noise: Vec<NoiseModel>,
    /// Use the full grid of 395 pattern and noise types.
    #[arg(long, conflicts_with_all = ["pattern"])]
    pub paper_grid: bool,
    /// Clouds per type.
    #[arg(long, default_value_t = 20)]
    pub clouds: usize,
    /// Points per unit length of the pattern.
    #[arg(long, default_value_t = cloudskel::synth::DEFAULT_DENSITY)]
    pub density: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write cloud files for the full grid too; by default it gets a
    /// manifest only and clouds are regenerated from their seeds on demand.
    #[arg(long, requires = "paper_grid")]
    pub write_files: bool,
    /// Skip cloud files for explicit patterns.
    #[arg(long, conflicts_with = "paper_grid")]
    pub manifest_only: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SkeletonizeArgs {
    pub cloud: PathBuf,
    #[arg(long, default_value = "coords", value_parser = clap::value_parser!(CloudFormat))]
    pub format: CloudFormat,
    /// `hopes`, `hopes-derived K L`, `simhopes [K L]`, `mapper` or `alpha-reeb`.
    #[arg(long, num_args = 1..=3, required = true, value_name = "ALGO [K L]")]
    pub algo: Vec<String>,
    /// Scale for `hopes` (reduced skeleton) or interval length for `alpha-reeb`.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Mapper interval count as a percentage of the cloud size.
    #[arg(long)]
    pub t: Option<f64>,
    /// DBSCAN radius for Mapper.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub min_points: usize,
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    /// Neighbourhood radius for alpha-Reeb; twice the longest spanning-tree
    /// edge by default.
    #[arg(long)]
    pub graph_eps: Option<f64>,
    /// Start Mapper and alpha-Reeb from a seeded random point instead of
    /// point 0.
    #[arg(long)]
    pub random_start: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Remove degree-one vertices from the result.
    #[arg(long)]
    pub prune: bool,
    /// JSON output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct DiagramArgs {
    pub cloud: PathBuf,
    #[arg(long, default_value = "coords", value_parser = clap::value_parser!(CloudFormat))]
    pub format: CloudFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct GapsArgs {
    /// A cloud file, or a diagram JSON written by `diagram`.
    pub input: PathBuf,
    #[arg(long, default_value = "coords", value_parser = clap::value_parser!(CloudFormat))]
    pub format: CloudFormat,
    /// Number of diagonal selections to report.
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct BenchmarkArgs {
    /// Flat `key = value` file. `manifest` is required; `out` names the
    /// output directory; other keys tune the algorithm grids.
    pub config: PathBuf,
    /// Extra `key=value` settings that override the file; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct RenderArgs {
    /// Skeleton JSON from `skeletonize` or diagram JSON from `diagram`.
    pub input: PathBuf,
    /// Cloud drawn under a skeleton.
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    #[arg(long, default_value = "coords", value_parser = clap::value_parser!(CloudFormat))]
    pub format: CloudFormat,
    #[arg(long)]
    pub out: PathBuf,
}
