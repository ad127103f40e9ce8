use std::net::IpAddr;
use std::path::PathBuf;

use attnscope_core::format::InputFormat;
use attnscope_core::{Direction, SortField};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "attnscope",
    version,
    about = "Score, inspect and compare NMT output through its attention alignments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score an alignment file and write an index.
    Score(ScoreArgs),
    /// List the records ranked highest or lowest by a score.
    Top(TopArgs),
    /// Draw one record as a terminal grid or an SVG file.
    Render(RenderArgs),
    /// Serve the JSON API and browser UI.
    Serve(ServeArgs),
    /// Score two systems' output for the same sources side by side.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Canonical,
    Block,
}

impl From<FormatArg> for InputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Canonical => InputFormat::Canonical,
            FormatArg::Block => InputFormat::Block,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SortArg {
    Confidence,
    Cdp,
    ApIn,
    ApOut,
    Overlap,
    Bleu,
}

impl From<SortArg> for SortField {
    fn from(s: SortArg) -> Self {
        match s {
            SortArg::Confidence => SortField::Confidence,
            SortArg::Cdp => SortField::Cdp,
            SortArg::ApIn => SortField::ApIn,
            SortArg::ApOut => SortField::ApOut,
            SortArg::Overlap => SortField::Overlap,
            SortArg::Bleu => SortField::Bleu,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirArg {
    Asc,
    Desc,
}

impl From<DirArg> for Direction {
    fn from(d: DirArg) -> Self {
        match d {
            DirArg::Asc => Direction::Ascending,
            DirArg::Desc => Direction::Descending,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    A,
    B,
}

/// Overrides for the diagnostic flag thresholds.
#[derive(Debug, Clone, Default, Args)]
pub struct ThresholdArgs {
    /// Flag records with any attention percent below this [default: 30]
    #[arg(long, value_name = "PERCENT")]
    pub low_attention: Option<f64>,
    /// Overlap percent at which long hypotheses count as untranslated [default: 50]
    #[arg(long, value_name = "PERCENT")]
    pub overlap_threshold: Option<f64>,
    /// Minimum hypothesis length for the untranslated check [default: 10]
    #[arg(long, value_name = "TOKENS")]
    pub long_sentence: Option<usize>,
    /// BLEU below which a normal-looking record is reference-divergent [default: 25]
    #[arg(long, value_name = "POINTS")]
    pub low_bleu: Option<f64>,
    /// Attention percent every metric must reach to look normal [default: 50]
    #[arg(long, value_name = "PERCENT")]
    pub normal_attention: Option<f64>,
}

impl ThresholdArgs {
    pub fn is_empty(&self) -> bool {
        self.low_attention.is_none()
            && self.overlap_threshold.is_none()
            && self.long_sentence.is_none()
            && self.low_bleu.is_none()
            && self.normal_attention.is_none()
    }
}

/// One raw alignment file and how to read it.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input format
    #[arg(long, value_enum, default_value = "canonical")]
    pub format: FormatArg,
    /// Reference translations, one per line in record order
    #[arg(long, value_name = "FILE")]
    pub refs: Option<PathBuf>,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

/// Either a saved index or a raw alignment file.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Index written by `score` or `compare`
    #[arg(long, value_name = "FILE")]
    pub index: Option<PathBuf>,
    /// Alignment file to score on the fly
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Alignment file
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Where to write the index
    #[arg(long, short, value_name = "FILE")]
    pub output: PathBuf,
    /// System name stored in the index [default: input file stem]
    #[arg(long)]
    pub system: Option<String>,
}

#[derive(Debug, Args)]
pub struct TopArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Number of records to list
    #[arg(short = 'n', long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, value_enum, default_value = "confidence")]
    pub sort: SortArg,
    #[arg(long, value_enum, default_value = "asc")]
    pub dir: DirArg,
    /// Only list records with at least one diagnostic flag
    #[arg(long)]
    pub flagged_only: bool,
    /// Which system of a paired index to rank
    #[arg(long, value_enum, default_value = "a")]
    pub system: SystemArg,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Record id
    #[arg(long)]
    pub id: String,
    /// Write an SVG here instead of printing a grid
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,
    /// Grid width in columns
    #[arg(long, default_value_t = 100)]
    pub width: usize,
    /// Colour grid cells with ANSI escapes
    #[arg(long)]
    pub color: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Index written by `score` or `compare`
    #[arg(long, value_name = "FILE", conflicts_with = "input")]
    pub index: Option<PathBuf>,
    /// Alignment file; give two for comparison mode
    #[arg(long, value_name = "FILE", required_unless_present = "index")]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub input_args: InputArgs,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory with the built browser UI
    #[arg(long, value_name = "DIR")]
    pub ui_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// System A's alignment file
    #[arg(value_name = "A")]
    pub input_a: PathBuf,
    /// System B's alignment file
    #[arg(value_name = "B")]
    pub input_b: PathBuf,
    #[command(flatten)]
    pub input_args: InputArgs,
    /// Where to write the paired index
    #[arg(long, short, value_name = "FILE")]
    pub output: PathBuf,
    /// Names for the two systems [default: input file stems]
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    pub names: Option<Vec<String>>,
}
