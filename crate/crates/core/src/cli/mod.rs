//! The `sagefair` command line: one binary, one subcommand per pipeline step.
//! Every invocation writes into a fresh run directory
//! `<out-root>/<YYYYmmdd-HHMMSS>-seed<S>` holding `config.txt` (the resolved
//! settings) and the step's outputs.

mod commands;

use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "sagefair", version, about = "Hateful-user detection with GraphSAGE and fairness evaluation")]
pub struct Cli {
    /// Worker threads (1 gives bitwise-reproducible runs)
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Random seed
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory under which run directories are created
    #[arg(long, global = true, default_value = "runs")]
    pub out_root: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Join an edge list and a node table into a store directory
    Ingest(IngestArgs),
    /// Run a dataset-construction sampler
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Cross-validated training: per-fold checkpoints and pooled predictions
    Train(TrainArgs),
    /// Accuracy metrics (and optional error cohorts) from prediction files
    Evaluate(EvaluateArgs),
    /// Per-group false positive rates from prediction files
    Fairness(FairnessArgs),
    /// Group labels from per-message dialect posteriors
    Demography(DemographyArgs),
    /// Finite-difference check of a model's gradients
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Edge list, one `src dst` pair per line
    #[arg(long)]
    pub edges: PathBuf,
    /// Node table with a header row
    #[arg(long)]
    pub nodes: PathBuf,
    /// Schema file (key=value: id, label, group, delimiter, text, user, network)
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Id column (when no schema file is given)
    #[arg(long, default_value = "user_id")]
    pub id: String,
    /// Label column
    #[arg(long)]
    pub label: Option<String>,
    /// Group column
    #[arg(long)]
    pub group: Option<String>,
    /// Comma-separated text feature column patterns (`*` wildcard)
    #[arg(long)]
    pub text: Option<String>,
    /// Comma-separated user feature column patterns
    #[arg(long)]
    pub user: Option<String>,
    /// Comma-separated network feature column patterns
    #[arg(long)]
    pub network: Option<String>,
    /// Edge list delimiter (`space` splits on any whitespace)
    #[arg(long, default_value = "space")]
    pub edge_delimiter: String,
    /// Also compute degree and eigenvector centrality columns
    #[arg(long)]
    pub network_features: bool,
    /// Add neighbor means of the user columns (requires --network-features)
    #[arg(long)]
    pub neighbor_means: bool,
    /// Neighborhood direction for neighbor means: out, in or both
    #[arg(long, default_value = "both")]
    pub direction: String,
}

#[derive(Debug, Args)]
pub struct GraphSource {
    /// Store directory written by `ingest`
    #[arg(long, conflicts_with = "edges")]
    pub store: Option<PathBuf>,
    /// Edge list (alternative to --store)
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Edge list delimiter
    #[arg(long, default_value = "space")]
    pub edge_delimiter: String,
}

#[derive(Debug, Subcommand)]
pub enum SampleCommand {
    /// Directed unbiased random walk crawl
    Durw(DurwArgs),
    /// Seed-score diffusion with quantile-stratified candidate selection
    Diffusion(DiffusionArgs),
}

#[derive(Debug, Args)]
pub struct DurwArgs {
    #[command(flatten)]
    pub graph: GraphSource,
    /// Raw id of the start node (default: the smallest id)
    #[arg(long)]
    pub start: Option<u64>,
    /// Random-jump weight w (jump probability w / (w + known degree))
    #[arg(long, default_value_t = 1.0)]
    pub jump_weight: f64,
    /// Number of distinct nodes to collect
    #[arg(long)]
    pub budget: usize,
}

#[derive(Debug, Args)]
pub struct DiffusionArgs {
    #[command(flatten)]
    pub graph: GraphSource,
    /// Seed file: `node_id,score` or `node_id,lexicon_hits,messages`
    #[arg(long)]
    pub seeds: PathBuf,
    /// Damping
    #[arg(long, default_value_t = 0.85)]
    pub alpha: f64,
    #[arg(long, default_value_t = 20)]
    pub iterations: usize,
    /// Quantile bins for candidate selection
    #[arg(long, default_value_t = 4)]
    pub strata: usize,
    /// Candidates per bin (no selection when absent)
    #[arg(long)]
    pub per_stratum: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Store directory written by `ingest`
    #[arg(long)]
    pub store: PathBuf,
    /// Run config (key=value: model, aggregator, feature_set, hidden_dim,
    /// layers, direction, fanouts, dropout, lr, epochs, batch_size, folds, seed)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Model name: lr, mlp, sage-mean, sage-maxpool, sage-attention
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    /// Cross-validation folds
    #[arg(long)]
    pub folds: Option<usize>,
    /// Threshold for the summary report
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Prediction file(s); several files are pooled
    #[arg(long = "pred", required = true)]
    pub preds: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Comma-separated thresholds for a sweep table
    #[arg(long)]
    pub sweep: Option<String>,
    /// Name shown in the report
    #[arg(long, default_value = "model")]
    pub name: String,
    /// Store directory, enabling error-cohort statistics
    #[arg(long)]
    pub store: Option<PathBuf>,
    /// Store column summed as the lexicon count per cohort
    #[arg(long, requires = "store")]
    pub lexicon_column: Option<String>,
    /// Store column averaged per cohort (e.g. sentiment)
    #[arg(long, requires = "store")]
    pub feature_column: Option<String>,
}

#[derive(Debug, Args)]
pub struct FairnessArgs {
    /// Prediction file(s); several files are pooled
    #[arg(long = "pred", required = true)]
    pub preds: Vec<PathBuf>,
    /// Group file (`node_id,group`) overriding the prediction file's group column
    #[arg(long)]
    pub groups: Option<PathBuf>,
    /// Protected group name
    #[arg(long)]
    pub protected: String,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct DemographyArgs {
    /// Posterior file (user_id, message_id, p_white, p_black, p_hispanic, p_asian)
    #[arg(long)]
    pub posteriors: PathBuf,
    /// Override file with `removals` and `additions` sections
    #[arg(long)]
    pub overrides: Option<PathBuf>,
    /// Category scored against the threshold
    #[arg(long, default_value = "black")]
    pub category: String,
    #[arg(long, default_value_t = 0.8)]
    pub threshold: f64,
    /// Group name written for protected users
    #[arg(long, default_value = "aa")]
    pub protected_name: String,
    /// Group name written for everyone else
    #[arg(long, default_value = "other")]
    pub other_name: String,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    /// lr, mlp, sage-mean, sage-maxpool or sage-attention
    #[arg(long)]
    pub model: String,
    /// Number of random points
    #[arg(long, default_value_t = 10)]
    pub points: u64,
    /// Central-difference step
    #[arg(long, default_value_t = 1e-5)]
    pub eps: f64,
    #[arg(long, default_value_t = 5)]
    pub input_dim: usize,
    #[arg(long, default_value_t = 4)]
    pub hidden: usize,
    /// Per-layer fanout for sage models
    #[arg(long, default_value_t = 3)]
    pub fanout: usize,
}

/// Fresh output directory for one invocation.
pub struct RunDir {
    pub path: PathBuf,
}

impl RunDir {
    /// Create `<root>/<timestamp>-seed<seed>`, adding `-1`, `-2`, ... if taken.
    pub fn create(root: &Path, seed: u64) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        let stamp = chrono::Local::now().format("%Y%m%d-%H%M%S");
        let base = format!("{stamp}-seed{seed}");
        for k in 0.. {
            let name = if k == 0 { base.clone() } else { format!("{base}-{k}") };
            let path = root.join(name);
            match fs::create_dir(&path) {
                Ok(()) => return Ok(Self { path }),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
                Err(e) => return Err(Error::io(&path, e)),
            }
        }
        unreachable!("suffix search is unbounded")
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.file(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Record the resolved configuration as `key=value` lines.
    pub fn record_config(&self, entries: &[(String, String)]) -> Result<()> {
        let mut s = String::new();
        for (k, v) in entries {
            s.push_str(&format!("{k}={v}\n"));
        }
        self.write("config.txt", &s).map(|_| ())
    }
}

/// Parse `argv` (program name first), run, and return the exit status.
/// Diagnostics go to stderr as one line.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout().lock();
    match commands::dispatch(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("sagefair: {}", one_line(&e.to_string()));
            e.exit_code()
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
