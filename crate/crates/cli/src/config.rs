//! CLI argument and configuration handling. Precedence: command-line flags
//! override the optional TOML config file, which overrides built-in
//! defaults (segment size 100, readability sample 1000, family gigp,
//! type definition surface, seed 0, output directory lexcomp-out).

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use lexcomp::corpus::TypeDef;
use lexcomp::lnre::LnreFamily;

#[derive(Debug, Parser)]
#[command(
    name = "lexcomp",
    version,
    about = "Corpus language-complexity measures and two-corpus comparison"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one corpus: writes report.json, tables.csv and SVG plots
    Analyze(AnalyzeArgs),
    /// Compare two corpora: adds KS tests and the growth-rate Z-test
    Compare(CompareArgs),
    /// Fit an LNRE model to a corpus or spectrum CSV and plot growth
    Fit(FitArgs),
    /// Score bracketed parse trees on the D-level scale
    Dlevel(DlevelArgs),
    /// Sample whole sentences down to a token budget
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Detect from extension and content
    Auto,
    /// Plain UTF-8 text
    Plain,
    /// One `surface<TAB>pos<TAB>lemma` token per line
    Vertical,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Input format: auto, plain or vertical [default: auto]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Segment size in word tokens for TTR series [default: 100]
    #[arg(long)]
    pub segment_size: Option<usize>,
    /// Sample size in word tokens for readability series [default: 1000]
    #[arg(long)]
    pub readability_sample: Option<usize>,
    /// LNRE family: zm, fzm or gigp (fit also accepts all) [default: gigp]
    #[arg(long)]
    pub family: Option<String>,
    /// Type definition: surface or lemma [default: surface]
    #[arg(long)]
    pub type_def: Option<String>,
    /// Tag-class map TOML for lexical density [default: built-in Penn map]
    #[arg(long)]
    pub tags: Option<PathBuf>,
    /// D-level rules TOML [default: built-in Penn rules]
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Random seed for sentence sampling [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [default: lexcomp-out]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML config file; flags given on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Corpus file
    pub input: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First corpus (reported as corpus A)
    pub input_a: PathBuf,
    /// Second corpus (reported as corpus B)
    pub input_b: PathBuf,
    /// Sample the larger corpus down to the smaller one's token count
    /// before comparing [default: off]
    #[arg(long)]
    pub equalize_tokens: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Corpus file or spectrum CSV (`m,Vm` with `#N=`/`#V=` headers)
    pub input: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct DlevelArgs {
    /// File of bracketed parse trees, one per line
    pub trees: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Corpus file
    pub input: PathBuf,
    /// Token budget for whole-sentence sampling
    #[arg(long)]
    pub budget: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Values loadable from the TOML config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    format: Option<String>,
    segment_size: Option<usize>,
    readability_sample: Option<usize>,
    family: Option<String>,
    type_def: Option<String>,
    tags: Option<PathBuf>,
    rules: Option<PathBuf>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub segment_size: usize,
    pub readability_sample: usize,
    /// `None` means `--family all` (fit only).
    pub family: Option<LnreFamily>,
    pub type_def: TypeDef,
    pub tags: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub seed: u64,
    pub out: PathBuf,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let file: FileConfig = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read config file {}", path.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("bad config file {}", path.display()))?
            }
            None => FileConfig::default(),
        };
        let format = match self.format {
            Some(f) => f,
            None => match file.format.as_deref() {
                None => Format::Auto,
                Some("auto") => Format::Auto,
                Some("plain") => Format::Plain,
                Some("vertical") => Format::Vertical,
                Some(other) => anyhow::bail!("unknown format {other:?} in config file"),
            },
        };
        let family_str = self
            .family
            .clone()
            .or(file.family)
            .unwrap_or_else(|| "gigp".to_string());
        let family = if family_str == "all" {
            None
        } else {
            Some(
                family_str
                    .parse::<LnreFamily>()
                    .map_err(|e| anyhow::anyhow!("{e}"))?,
            )
        };
        let type_def = self
            .type_def
            .clone()
            .or(file.type_def)
            .unwrap_or_else(|| "surface".to_string())
            .parse::<TypeDef>()
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(RunConfig {
            format,
            segment_size: self.segment_size.or(file.segment_size).unwrap_or(100),
            readability_sample: self
                .readability_sample
                .or(file.readability_sample)
                .unwrap_or(1000),
            family,
            type_def,
            tags: self.tags.clone().or(file.tags),
            rules: self.rules.clone().or(file.rules),
            seed: self.seed.or(file.seed).unwrap_or(0),
            out: self
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("lexcomp-out")),
        })
    }
}
