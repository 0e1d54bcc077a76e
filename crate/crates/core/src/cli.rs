//! Command-line interface: `ingest`, `features` (alias `export`) and
//! `evaluate`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::dataset::{arff, build_features, delimited, FeatureSet};
use crate::error::{Error, Result};
use crate::eval::{
    comparison_table, cross_validate, generate_homophily_graph, EvalReport, HomophilyParams,
};
use crate::graph::LabeledGraph;
use crate::ingest;

#[derive(Debug, Parser)]
#[command(
    name = "netfeat",
    version,
    about = "Node features for within-network classification"
)]
pub struct Cli {
    /// Worker threads for parallel sections [default: all cores]
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a labeled co-attendance network and save it as a graph directory
    Ingest(IngestArgs),
    /// Compute a feature set and export it as ARFF or CSV
    #[command(alias = "export")]
    Features(FeaturesArgs),
    /// Cross-validate boosted stumps on one or more feature sets
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Attendance CSV (`person,talk`), `-` for standard input
    #[arg(long)]
    pub attendance: String,
    /// Profile CSV (`person,age,gender,country,phone_provider`)
    #[arg(long)]
    pub profiles: Option<String>,
    /// Targets CSV (`person,tags`, tags separated by `|`)
    #[arg(long)]
    pub targets: String,
    /// Interest tag that defines the positive class
    #[arg(long)]
    pub tag: String,
    /// Output graph directory
    #[arg(long)]
    pub out: PathBuf,
    /// Keep tagged profiles without any attendance as isolated nodes
    #[arg(long)]
    pub include_isolated: bool,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Graph directory written by `ingest`
    #[arg(
        long,
        conflicts_with = "synthetic",
        required_unless_present = "synthetic"
    )]
    pub graph: Option<PathBuf>,
    /// Generate a homophilous graph instead, e.g. `n=200,p_in=0.15,p_out=0.03`
    /// (keys: n, balance, p_in, p_out, w_min, w_max)
    #[arg(long)]
    pub synthetic: Option<String>,
}

/// Settings shared by `features` and `evaluate`. Unset flags fall back to
/// the config file, then to the defaults shown.
#[derive(Debug, Args)]
pub struct Settings {
    /// Config file with `key = value` lines
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Random seed for generation, sampling and fold assignment [default: 42]
    #[arg(long)]
    pub seed: Option<u64>,
    /// directed | undirected [default: undirected]
    #[arg(long)]
    pub direction: Option<String>,
    /// augmented | strict [default: augmented]
    #[arg(long)]
    pub lifting: Option<String>,
    /// missing | zero, for undefined label-dependent values [default: missing]
    #[arg(long)]
    pub missing: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Arff,
    Csv,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub settings: Settings,
    /// Feature set: 1 attributes, 2 structural, 3 label-dependent, 4 all
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub set: u8,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Arff)]
    pub format: Format,
    /// Output file (ARFF also writes `<out>.ids`)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub settings: Settings,
    /// Comma-separated feature sets
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4",
          value_parser = clap::value_parser!(u8).range(1..=4))]
    pub sets: Vec<u8>,
    /// Number of cross-validation folds (at least 2) [default: 10]
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub folds: Option<u64>,
    /// transductive | fold-masked [default: transductive]
    #[arg(long)]
    pub masking: Option<String>,
    /// Boosting rounds [default: 10]
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Percentage of total weight used to fit each stump [default: 100]
    #[arg(long)]
    pub weight_threshold: Option<f64>,
    /// Fraction of labels hidden from feature extraction [default: 0]
    #[arg(long)]
    pub hidden_fraction: Option<f64>,
    /// Average precision and F-measure over both classes
    #[arg(long = "macro")]
    pub macro_average: bool,
    /// Write per-fold results as CSV
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also print the per-fold table of every set
    #[arg(long)]
    pub verbose: bool,
}

/// Failure classes of a run, mapped to exit codes by [`Failure::exit_code`].
#[derive(Debug)]
pub enum Failure {
    /// Bad settings (usage error).
    Usage(Error),
    Runtime(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }

    pub fn error(&self) -> &Error {
        match self {
            Failure::Usage(e) | Failure::Runtime(e) => e,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

fn resolve(settings: &Settings, extra: &[(&str, Option<String>)]) -> Result<RunConfig> {
    let mut c = match &settings.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let base = [
        ("seed", settings.seed.map(|s| s.to_string())),
        ("direction", settings.direction.clone()),
        ("lifting", settings.lifting.clone()),
        ("missing", settings.missing.clone()),
    ];
    for (k, v) in base.iter().chain(extra) {
        if let Some(v) = v {
            c.set(k, v)?;
        }
    }
    c.validate()?;
    Ok(c)
}

fn load_source(source: &Source, seed: u64) -> Result<(LabeledGraph, String)> {
    match (&source.graph, &source.synthetic) {
        (Some(dir), _) => Ok((ingest::load_graph(dir)?, dir.display().to_string())),
        (None, Some(spec)) => {
            let p = HomophilyParams::parse(spec, seed)?;
            Ok((
                generate_homophily_graph(&p)?,
                format!("synthetic {} seed={seed}", p.describe()),
            ))
        }
        (None, None) => Err(Error::input("either --graph or --synthetic is required")),
    }
}

pub fn run(cli: Cli) -> std::result::Result<(), Failure> {
    if let Some(n) = cli.threads {
        // fails only when a pool already exists, in which case it is kept
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.into())
            .build_global();
    }
    match cli.command {
        Command::Ingest(a) => cmd_ingest(&a).map_err(Failure::Runtime),
        Command::Features(a) => cmd_features(&a),
        Command::Evaluate(a) => cmd_evaluate(&a),
    }
}

pub fn cmd_ingest(a: &IngestArgs) -> Result<()> {
    let records = ingest::load_attendance(&a.attendance)?;
    let targets = ingest::load_targets(&a.targets)?;
    let profiles = match &a.profiles {
        Some(p) => ingest::load_profiles(p)?,
        None => ingest::Profiles::default(),
    };
    let (g, report) =
        ingest::build_network(&records, &profiles, &targets, &a.tag, a.include_isolated)?;
    ingest::save_graph(&g, &a.out)?;
    let positives = g
        .nodes()
        .filter(|&v| g.label(v).is_some_and(|l| l.as_str() == "1"))
        .count();
    println!("{report}");
    println!("positive_nodes   {positives} (tag '{}')", a.tag);
    println!("graph written to {}", a.out.display());
    Ok(())
}

pub fn cmd_features(a: &FeaturesArgs) -> std::result::Result<(), Failure> {
    let config = resolve(&a.settings, &[]).map_err(Failure::Usage)?;
    let set = FeatureSet::from_id(a.set).map_err(Failure::Usage)?;
    let (g, source) = load_source(&a.source, config.seed)?;
    let mut m = build_features(&g, set, &config.features())?;
    m.provenance.insert(0, ("source".into(), source));
    m.provenance.push(("seed".into(), config.seed.to_string()));
    match a.format {
        Format::Arff => arff::write_arff(&m, &format!("netfeat_set{set}"), &a.out)?,
        Format::Csv => delimited::write_csv(&m, &a.out)?,
    }
    println!(
        "feature set {set}: {} rows, {} features written to {}",
        m.rows.len(),
        m.feature_columns().len(),
        a.out.display()
    );
    Ok(())
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> std::result::Result<(), Failure> {
    let extra = [
        ("folds", a.folds.map(|f| f.to_string())),
        ("masking", a.masking.clone()),
        ("iterations", a.iterations.map(|i| i.to_string())),
        (
            "weight_threshold",
            a.weight_threshold.map(|w| w.to_string()),
        ),
        ("hidden_fraction", a.hidden_fraction.map(|h| h.to_string())),
        ("macro_average", a.macro_average.then(|| "true".to_string())),
    ];
    let config = resolve(&a.settings, &extra).map_err(Failure::Usage)?;
    let sets = a
        .sets
        .iter()
        .map(|&s| FeatureSet::from_id(s))
        .collect::<Result<Vec<_>>>()
        .map_err(Failure::Usage)?;
    let (g, source) = load_source(&a.source, config.seed)?;
    let eval = config.eval();
    let reports = sets
        .iter()
        .map(|&s| cross_validate(&g, s, &eval))
        .collect::<Result<Vec<EvalReport>>>()?;

    println!("source: {source}");
    if a.verbose {
        for r in &reports {
            println!("{}", r.to_table());
        }
    }
    if reports.iter().any(|r| r.degenerate) {
        println!("WARNING: only one class present, metrics are degenerate");
    }
    print!("{}", comparison_table(&reports));
    if let Some(out) = &a.out {
        write_report_csv(&reports, &source, &config, out)?;
        println!("fold results written to {}", out.display());
    }
    Ok(())
}

fn write_report_csv(
    reports: &[EvalReport],
    source: &str,
    config: &RunConfig,
    out: &Path,
) -> Result<()> {
    let mut text = format!("# source = {source}\n");
    for line in config.to_text().lines() {
        text.push_str(&format!("# {line}\n"));
    }
    text.push_str(EvalReport::csv_header());
    for r in reports {
        text.push_str(&r.csv_rows());
    }
    fs::write(out, text).map_err(|e| Error::io(out, e))
}
