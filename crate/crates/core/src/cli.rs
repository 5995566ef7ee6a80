//! Command-line front end: `build`, `score`, `sweep`, `eigenmap`, `export`.
//!
//! Data goes to `--out` or standard output, progress and warnings to
//! standard error. Usage problems exit with status 2, other failures with 1.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::complex::{build_vietoris_rips, SimplicialComplex, WeightScheme};
use crate::error::Error;
use crate::export::{write_dot, write_edge_json, ExportFormat};
use crate::features::{Aggregation, FeatureSet};
use crate::inference::{score_report, sweep_epsilon, PermutationConfig, SweepConfig};
use crate::io::{read_distances, read_pair_features, read_point_features, InputKind};
use crate::spectral::eigenmap;

#[derive(Debug, Parser)]
#[command(name = "simplicial-score", version, about = "Laplacian scores of features on simplicial complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a Vietoris-Rips complex and write it as JSON.
    Build(BuildArgs),
    /// Score features, with permutation p-values and BH control.
    Score(ScoreArgs),
    /// Count BH rejections over a grid of scales.
    Sweep(SweepArgs),
    /// Write Laplacian eigenmap coordinates of the q-simplices.
    Eigenmap(EigenmapArgs),
    /// Write the 1-skeleton as a DOT or JSON edge list.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightChoice {
    Unit,
    Coface,
}

impl From<WeightChoice> for WeightScheme {
    fn from(w: WeightChoice) -> Self {
        match w {
            WeightChoice::Unit => WeightScheme::Unit,
            WeightChoice::Coface => WeightScheme::default(),
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Point coordinates or a distance matrix (CSV/TSV, optional header).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// euclidean, correlation or precomputed.
    #[arg(long, default_value = "euclidean")]
    pub metric: InputKind,
}

#[derive(Debug, Args)]
pub struct ComplexArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Previously built or externally produced complex JSON.
    #[arg(long, conflicts_with_all = ["input", "epsilon"])]
    pub complex: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    /// Weight scheme. Imported complexes keep their own weights unless set.
    #[arg(long, value_enum)]
    pub weights: Option<WeightChoice>,
}

#[derive(Debug, Args)]
pub struct FeatureArgs {
    /// 1-point features: one row per feature, name first.
    #[arg(long, conflicts_with = "pair_features")]
    pub features: Option<PathBuf>,
    /// 2-point features as `i, j, value` or `feature, i, j, value` triplets.
    #[arg(long)]
    pub pair_features: Option<PathBuf>,
    /// Value for pairs absent from the triplet file.
    #[arg(long, requires = "pair_features")]
    pub missing_value: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// mean, min or max over the vertices of each simplex.
    #[arg(long, default_value = "mean")]
    pub agg: Aggregation,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Permutations per feature; 0 reports scores only.
    #[arg(long, default_value_t = 1000)]
    pub permutations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    #[arg(long, value_enum, default_value = "coface")]
    pub weights: WeightChoice,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub test: TestArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated ascending scales.
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    #[arg(long, value_enum, default_value = "coface")]
    pub weights: WeightChoice,
    #[command(flatten)]
    pub features: FeatureArgs,
    #[command(flatten)]
    pub test: TestArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct EigenmapArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// Number of eigenvectors.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub complex: ComplexArgs,
    /// dot or json.
    #[arg(long, default_value = "dot")]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Inconsistent or out-of-range arguments.
    Usage(String),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Run(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn io_err(path: Option<&Path>, source: io::Error) -> CliError {
    CliError::Run(Error::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    })
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Opens `--out` or standard output, hands it to `f` and flushes.
fn with_output<F>(path: Option<&Path>, f: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    let mut sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_err(Some(p), e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    f(&mut sink)?;
    sink.flush().map_err(|e| io_err(path, e))
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> CliResult<T> + Send) -> CliResult<T> {
    if threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(f)
}

fn require_input(input: &InputArgs) -> CliResult<&Path> {
    input
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("--input is required".into()))
}

/// Builds or imports the complex and makes sure it carries weights. Returns
/// the complex and a label for its weights.
fn load_complex(a: &ComplexArgs) -> CliResult<(SimplicialComplex, String)> {
    let mut k = match (&a.complex, &a.input.input, a.epsilon) {
        (Some(path), _, _) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(Some(path), e))?;
            SimplicialComplex::from_json_str(&text)?
        }
        (None, Some(input), Some(eps)) => {
            let d = read_distances(input, a.input.metric)?;
            build_vietoris_rips(&d, eps, a.max_dim)?
        }
        _ => {
            return Err(CliError::Usage(
                "give either --complex, or --input together with --epsilon".into(),
            ))
        }
    };
    if k.has_weights() && a.weights.is_none() {
        return Ok((k, "imported".to_string()));
    }
    let scheme: WeightScheme = a.weights.unwrap_or(WeightChoice::Coface).into();
    k.compute_weights(scheme)?;
    Ok((k, scheme.to_string()))
}

fn load_features(a: &FeatureArgs) -> CliResult<FeatureSet> {
    match (&a.features, &a.pair_features) {
        (Some(p), None) => Ok(read_point_features(p)?),
        (None, Some(p)) => Ok(read_pair_features(p, a.missing_value)?),
        _ => Err(CliError::Usage("give exactly one of --features or --pair-features".into())),
    }
}

fn permutation_config(t: &TestArgs) -> CliResult<Option<PermutationConfig>> {
    if !(t.alpha > 0.0 && t.alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {}", t.alpha)));
    }
    Ok((t.permutations > 0).then_some(PermutationConfig {
        n_permutations: t.permutations,
        seed: t.seed,
        alpha: t.alpha,
    }))
}

fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let grid = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("grid value {t:?} is not a number")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if grid.is_empty() {
        return Err(CliError::Usage("--grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(CliError::Usage("--grid must be strictly ascending".into()));
    }
    Ok(grid)
}

fn report_counts(k: &SimplicialComplex) {
    let counts: Vec<String> = k.counts().iter().map(ToString::to_string).collect();
    eprintln!("simplices per dimension: {}", counts.join(" "));
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Build(a) => in_pool(a.run.threads, || {
            let input = require_input(&a.input)?;
            let d = read_distances(input, a.input.metric)?;
            let k = build_vietoris_rips(&d, a.epsilon, a.max_dim)?.with_weights(a.weights.into())?;
            report_counts(&k);
            with_output(a.run.out.as_deref(), |w| {
                writeln!(w, "{}", k.to_json_string()).map_err(|e| io_err(a.run.out.as_deref(), e))
            })
        }),
        Command::Score(a) => in_pool(a.run.threads, || {
            let cfg = permutation_config(&a.test)?;
            let (k, label) = load_complex(&a.complex)?;
            report_counts(&k);
            let fs = load_features(&a.features)?;
            eprintln!("scoring {} features at q = {}", fs.len(), a.features.q);
            let report = score_report(&k, &fs, a.features.q, a.features.agg, cfg.as_ref(), &label)?;
            for f in &report.features {
                if let Some(note) = &f.note {
                    eprintln!("warning: feature {}: {note}", f.name);
                }
            }
            if cfg.is_some() {
                eprintln!("{} of {} features rejected at alpha = {}", report.n_rejected(), fs.len(), report.alpha);
            }
            with_output(a.run.out.as_deref(), |w| {
                report.write_tsv(w).map_err(|e| io_err(a.run.out.as_deref(), e))
            })
        }),
        Command::Sweep(a) => in_pool(a.run.threads, || {
            let grid = parse_grid(&a.grid)?;
            let permutations = permutation_config(&a.test)?
                .ok_or_else(|| CliError::Usage("sweep needs --permutations of at least 1".into()))?;
            let input = require_input(&a.input)?;
            let d = read_distances(input, a.input.metric)?;
            let fs = load_features(&a.features)?;
            let cfg = SweepConfig {
                grid,
                max_dim: a.max_dim,
                q: a.features.q,
                scheme: a.weights.into(),
                aggregation: a.features.agg,
                permutations,
            };
            let result = sweep_epsilon(&d, &fs, &cfg)?;
            for r in &result.rows {
                match &r.diagnostic {
                    Some(msg) => eprintln!("epsilon {}: {msg}", r.epsilon),
                    None => eprintln!("epsilon {}: {} edges, {} rejected", r.epsilon, r.n_edges, r.n_rejected),
                }
            }
            eprintln!("best epsilon: {}", result.best_epsilon);
            with_output(a.run.out.as_deref(), |w| {
                result.write_tsv(w).map_err(|e| io_err(a.run.out.as_deref(), e))
            })
        }),
        Command::Eigenmap(a) => in_pool(a.run.threads, || {
            let (k, _) = load_complex(&a.complex)?;
            let n = k.count(a.q);
            if n == 0 {
                return Err(Error::NoSimplicesAtDimension { q: a.q }.into());
            }
            if a.m == 0 || a.m > n {
                return Err(CliError::Usage(format!(
                    "--m must lie between 1 and the {n} simplices at q = {}",
                    a.q
                )));
            }
            let map = eigenmap(&k, a.q, a.m)?;
            with_output(a.run.out.as_deref(), |w| {
                map.write_tsv(w).map_err(|e| io_err(a.run.out.as_deref(), e))
            })
        }),
        Command::Export(a) => {
            let (k, _) = load_complex(&a.complex)?;
            with_output(a.out.as_deref(), |w| match a.format {
                ExportFormat::Dot => write_dot(&k, w).map_err(|e| io_err(a.out.as_deref(), e)),
                ExportFormat::Json => {
                    write_edge_json(&k, &mut *w)?;
                    writeln!(w).map_err(|e| io_err(a.out.as_deref(), e))
                }
            })
        }
    }
}
