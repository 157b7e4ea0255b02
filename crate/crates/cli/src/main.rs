//! Command line for the word sense induction workflow:
//! induce -> evaluate -> report, plus split, stats, synth, and agreement
//! utilities.
//!
//! Exit codes: 0 on success (all requested files fully written), 1 for
//! data errors (unreadable or malformed inputs, scoring failures), 2 for
//! usage errors (bad or incompatible flags). Reports go to stdout,
//! warnings to stderr, and all outputs are byte-deterministic given the
//! same flags and inputs.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wsi::embed_io;
use wsi::report::{self, fmt6};
use wsi::tsv;
use wsi_core::cluster::{ApConfig, Linkage, StopRule};
use wsi_core::dataset::SplitSpec;
use wsi_core::induce::{self, ClusterMethod, Method, MethodConfig};
use wsi_core::metrics::krippendorff_alpha;
use wsi_core::synth::{self, SynthSpec};
use wsi_core::vectorize::WeightingScheme;

#[derive(Parser)]
#[command(name = "wsi", version, about = "Word sense induction toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fill predict_sense_id for every record of a dataset.
    Induce(InduceArgs),
    /// Score predictions against gold labels with per-word ARI.
    Evaluate(EvaluateArgs),
    /// Split a dataset into public and private parts by word.
    Split(SplitArgs),
    /// Print summary statistics of a dataset.
    Stats(StatsArgs),
    /// Generate a synthetic dataset and embedding store with planted senses.
    Synth(SynthArgs),
    /// Krippendorff's alpha of an annotation matrix.
    Agreement(AgreementArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Two prototypes per word via nearest-neighbor vector subtraction.
    NnSub,
    /// Affinity propagation over context vectors.
    Ap,
    /// Agglomerative clustering over context vectors.
    Agglomerative,
    /// k-means over context vectors.
    Kmeans,
    /// One cluster per word.
    One,
    /// Every context its own cluster.
    Singletons,
    /// Uniform random labels.
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightingArg {
    Uniform,
    Tfidf,
    TfidfChisq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LinkageArg {
    Average,
    Ward,
}

#[derive(clap::Args)]
struct InduceArgs {
    #[arg(long)]
    method: MethodArg,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Word vectors in the textual format; required by nn-sub, ap,
    /// agglomerative, and kmeans.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Token weighting for the clustering methods (default: uniform).
    #[arg(long)]
    weighting: Option<WeightingArg>,
    /// Cluster count for kmeans (default 2), agglomerative, or random.
    #[arg(long)]
    k: Option<usize>,
    /// Linkage for agglomerative (default: average).
    #[arg(long)]
    linkage: Option<LinkageArg>,
    /// Distance threshold stopping rule for agglomerative.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(clap::Args)]
struct EvaluateArgs {
    /// Predictions TSV; may carry gold labels too.
    #[arg(long)]
    pred: PathBuf,
    /// Gold TSV; defaults to reading gold labels from --pred.
    #[arg(long)]
    gold: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SplitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Output path for the public part.
    #[arg(long)]
    public: PathBuf,
    /// Output path for the private part.
    #[arg(long)]
    private: PathBuf,
    /// Fraction of words that go public.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    fraction: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(clap::Args)]
struct StatsArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(clap::Args)]
struct SynthArgs {
    /// Output path for the dataset TSV.
    #[arg(long)]
    dataset: PathBuf,
    /// Output path for the embedding text file.
    #[arg(long)]
    embeddings: PathBuf,
    /// Optional output path for the ground-truth report TSV.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    words: usize,
    #[arg(long, default_value_t = 2)]
    senses: usize,
    #[arg(long, default_value_t = 20)]
    contexts_per_sense: usize,
    #[arg(long, default_value_t = 25)]
    dim: usize,
    #[arg(long, default_value_t = 8)]
    vocab_per_sense: usize,
    #[arg(long, default_value_t = 2.0)]
    separation: f64,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(clap::Args)]
struct AgreementArgs {
    /// Annotation matrix TSV: one row per unit, one column per coder,
    /// empty cell = missing.
    #[arg(long)]
    input: PathBuf,
}

enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        Self::Usage(msg.into())
    }
}

macro_rules! data_error_from {
    ($($ty:ty),* $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                Self::Data(e.to_string())
            }
        }
    )*};
}

data_error_from!(
    std::io::Error,
    tsv::TsvError,
    embed_io::EmbedIoError,
    report::EvalError,
    induce::InduceError,
    synth::SynthError,
    wsi_core::metrics::MetricsError,
);

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Induce(args) => cmd_induce(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Split(args) => cmd_split(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Agreement(args) => cmd_agreement(args),
    }
}

/// Translate induce flags into a method configuration, rejecting flags
/// that do not apply to the chosen method.
fn build_config(args: &InduceArgs) -> Result<MethodConfig, CliError> {
    let reject = |given: bool, name: &str| -> Result<(), CliError> {
        if given {
            return Err(CliError::usage(format!("--{name} does not apply to this method")));
        }
        Ok(())
    };
    let no_k = || reject(args.k.is_some(), "k");
    let no_linkage = || reject(args.linkage.is_some(), "linkage");
    let no_threshold = || reject(args.threshold.is_some(), "threshold");
    let no_weighting = || reject(args.weighting.is_some(), "weighting");
    let no_embeddings = || reject(args.embeddings.is_some(), "embeddings");
    let need_embeddings = || -> Result<(), CliError> {
        if args.embeddings.is_none() {
            return Err(CliError::usage("this method requires --embeddings"));
        }
        Ok(())
    };

    let scheme = match args.weighting {
        None | Some(WeightingArg::Uniform) => WeightingScheme::Uniform,
        Some(WeightingArg::Tfidf) => WeightingScheme::TfIdf,
        Some(WeightingArg::TfidfChisq) => WeightingScheme::tfidf_chisq_default(),
    };

    let method = match args.method {
        MethodArg::One => {
            no_embeddings()?;
            no_k()?;
            no_linkage()?;
            no_threshold()?;
            no_weighting()?;
            Method::BaselineOne
        }
        MethodArg::Singletons => {
            no_embeddings()?;
            no_k()?;
            no_linkage()?;
            no_threshold()?;
            no_weighting()?;
            Method::BaselineSingletons
        }
        MethodArg::Random => {
            no_embeddings()?;
            no_linkage()?;
            no_threshold()?;
            no_weighting()?;
            let k = args.k.ok_or_else(|| CliError::usage("--method random requires --k"))?;
            if k == 0 {
                return Err(CliError::usage("--k must be at least 1"));
            }
            Method::BaselineRandom { k }
        }
        MethodArg::NnSub => {
            need_embeddings()?;
            no_k()?;
            no_linkage()?;
            no_threshold()?;
            no_weighting()?;
            Method::NnSubtraction
        }
        MethodArg::Ap => {
            need_embeddings()?;
            no_k()?;
            no_linkage()?;
            no_threshold()?;
            Method::Cluster(ClusterMethod::AffinityPropagation(ApConfig::default()))
        }
        MethodArg::Agglomerative => {
            need_embeddings()?;
            let linkage = match args.linkage {
                None | Some(LinkageArg::Average) => Linkage::Average,
                Some(LinkageArg::Ward) => Linkage::Ward,
            };
            let stop = match (args.k, args.threshold) {
                (Some(k), None) => {
                    if k == 0 {
                        return Err(CliError::usage("--k must be at least 1"));
                    }
                    StopRule::FixedK(k)
                }
                (None, Some(t)) => StopRule::Threshold(t),
                (Some(_), Some(_)) => {
                    return Err(CliError::usage("--k and --threshold are mutually exclusive"));
                }
                (None, None) => {
                    return Err(CliError::usage(
                        "--method agglomerative requires --k or --threshold",
                    ));
                }
            };
            Method::Cluster(ClusterMethod::Agglomerative { linkage, stop })
        }
        MethodArg::Kmeans => {
            need_embeddings()?;
            no_linkage()?;
            no_threshold()?;
            let k = args.k.unwrap_or(2);
            if k == 0 {
                return Err(CliError::usage("--k must be at least 1"));
            }
            Method::Cluster(ClusterMethod::KMeans { k })
        }
    };

    Ok(MethodConfig { method, scheme, seed: args.seed.unwrap_or(0) })
}

fn cmd_induce(args: InduceArgs) -> Result<(), CliError> {
    let config = build_config(&args)?;
    let dataset = tsv::load_tsv(&args.input)?;
    let store = match &args.embeddings {
        Some(path) => Some(embed_io::load_embeddings(path)?),
        None => None,
    };
    let output = induce::run(&dataset, &config, store.as_ref())?;
    tsv::save_tsv(&output.dataset, &args.output)?;
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    // Per-word summary of how many sense clusters each word received.
    for (word, indices) in output.dataset.group_by_word() {
        let clusters: BTreeSet<&str> = indices
            .iter()
            .filter_map(|&i| output.dataset.records[i].predict_sense_id.as_deref())
            .collect();
        println!("{word}\t{}", clusters.len());
    }
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let pred = tsv::load_tsv(&args.pred)?;
    let report = match &args.gold {
        Some(path) => {
            let gold = tsv::load_tsv(path)?;
            report::evaluate(&gold, &pred)?
        }
        None => report::evaluate(&pred, &pred)?,
    };
    print!("{report}");
    Ok(())
}

fn cmd_split(args: SplitArgs) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&args.fraction) {
        return Err(CliError::usage("--fraction must lie in [0, 1]"));
    }
    let dataset = tsv::load_tsv(&args.input)?;
    let spec = SplitSpec::new(args.fraction, args.seed);
    let (public, private) = dataset.split_public_private(&spec);
    tsv::save_tsv(&public, &args.public)?;
    tsv::save_tsv(&private, &args.private)?;
    println!("public_words\t{}", public.stats().words);
    println!("public_contexts\t{}", public.len());
    println!("private_words\t{}", private.stats().words);
    println!("private_contexts\t{}", private.len());
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<(), CliError> {
    let dataset = tsv::load_tsv(&args.input)?;
    let stats = dataset.stats();
    println!("words\t{}", stats.words);
    match (stats.senses, stats.avg_senses_per_word) {
        (Some(senses), Some(avg)) => {
            println!("senses\t{senses}");
            println!("avg_senses_per_word\t{}", fmt6(avg));
        }
        _ => {
            println!("senses\tunknown");
            println!("avg_senses_per_word\tunknown");
        }
    }
    println!("contexts\t{}", stats.contexts);
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<(), CliError> {
    let spec = SynthSpec {
        n_words: args.words,
        senses_per_word: args.senses,
        contexts_per_sense: args.contexts_per_sense,
        dim: args.dim,
        vocab_per_sense: args.vocab_per_sense,
        separation: args.separation,
        noise: args.noise,
        seed: args.seed,
    };
    let out = synth::generate(&spec)?;
    tsv::save_tsv(&out.dataset, &args.dataset)?;
    embed_io::save_embeddings(&out.store, &args.embeddings)?;
    if let Some(path) = &args.report {
        std::fs::write(path, truth_report(&out.truth))?;
    }
    println!("records\t{}", out.dataset.len());
    println!("words\t{}", out.dataset.stats().words);
    println!("vocabulary\t{}", out.store.len());
    Ok(())
}

/// Ground-truth TSV: one row per (word, sense) with the cosines of that
/// sense's prototype against every sense of the same word.
fn truth_report(truth: &[synth::WordTruth]) -> String {
    let mut out = String::new();
    for word in truth {
        for (idx, row) in word.prototype_cosines.iter().enumerate() {
            let cosines: Vec<String> = row.iter().map(|&c| fmt6(c)).collect();
            out.push_str(&format!("{}\t{}\t{}\n", word.word, idx + 1, cosines.join("\t")));
        }
    }
    out
}

fn cmd_agreement(args: AgreementArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(Path::new(&args.input))?;
    let units = report::parse_annotation_matrix(&text).map_err(CliError::Data)?;
    let alpha = krippendorff_alpha(&units)?;
    println!("{}", fmt6(alpha));
    Ok(())
}
