//! `lcr`: ingest ground signals, build the sentence index, review items,
//! serve the HTTP API and run dataset evaluations.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lcr_core::algebra::SchemeSet;
use lcr_core::bots::Clock;
use lcr_core::eval::{self, Dataset};
use lcr_core::model::{parse_items, serialize_jsonld};
use lcr_core::nlp::{HashingEncoder, RemoteBackend, SentenceEncoder, SentenceIndex};
use lcr_core::par::ExecMode;
use lcr_core::store::SignalStore;
use lcr_service::{build_engine, ServiceConfig};

#[derive(Parser)]
#[command(name = "lcr", version, about = "Composable credibility reviews")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add ground signals to a store directory.
    Ingest {
        kind: SignalFile,
        /// JSON Lines input.
        file: PathBuf,
        #[arg(long)]
        store: PathBuf,
    },
    /// Print signal counts of a store.
    Stats {
        #[arg(long)]
        store: PathBuf,
    },
    #[command(subcommand)]
    Index(IndexCommand),
    /// Review a JSON-LD item document and print the review graph.
    Review {
        /// Input document; stdin when omitted.
        file: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalFile {
    /// ClaimReview records.
    Claims,
    /// Pre-crawled sentences with known credibility.
    Sentences,
    /// Website reputation records.
    Sites,
}

#[derive(Subcommand)]
enum IndexCommand {
    /// Encode every indexable store text and write the index file.
    Build {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Encode with a remote backend instead of the baseline.
        #[arg(long)]
        backend_url: Option<String>,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Review every sample of a dataset and write predictions.csv plus graphs.
    Run {
        #[arg(long)]
        dataset: Dataset,
        /// Dataset file or directory.
        #[arg(long)]
        path: PathBuf,
        /// Label scheme; defaults to the dataset's own.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Score a predictions file.
    Metrics {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        dataset: Dataset,
        /// Print the confusion matrix as CSV.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct EngineArgs {
    /// Service config file; `LCR_*` variables apply on top.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    store: Option<PathBuf>,
    #[arg(long)]
    index: Option<PathBuf>,
    /// Turn on caution mode.
    #[arg(long)]
    caution: bool,
    #[arg(long)]
    sequential: bool,
}

impl EngineArgs {
    fn service_config(&self) -> Result<ServiceConfig> {
        let mut cfg = ServiceConfig::load(self.config.as_deref())?;
        if let Some(s) = &self.store {
            cfg.store = Some(s.clone());
        }
        if let Some(i) = &self.index {
            cfg.index = Some(i.clone());
        }
        if self.caution {
            cfg.caution = Some(true);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn mode(&self) -> ExecMode {
        if self.sequential {
            ExecMode::Sequential
        } else {
            ExecMode::Parallel
        }
    }
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "warn".into()))
        .with_writer(std::io::stderr)
        .init();
    match Cli::parse().command {
        Command::Ingest { kind, file, store } => ingest(kind, &file, &store),
        Command::Stats { store } => {
            let store = SignalStore::open(&store)?;
            println!("{}", serde_json::to_string_pretty(&store.stats())?);
            Ok(())
        }
        Command::Index(IndexCommand::Build {
            store,
            out,
            backend_url,
            sequential,
        }) => build_index(&store, &out, backend_url.as_deref(), sequential),
        Command::Review { file, engine } => review(file.as_deref(), &engine),
        Command::Serve { config } => {
            let cfg = ServiceConfig::load(config.as_deref())?;
            tokio::runtime::Runtime::new()?.block_on(lcr_service::serve(cfg))?;
            Ok(())
        }
        Command::Eval(EvalCommand::Run {
            dataset,
            path,
            scheme,
            out,
            engine,
        }) => eval_run(dataset, &path, scheme.as_deref(), &out, &engine),
        Command::Eval(EvalCommand::Metrics { pred, dataset, csv }) => {
            let predictions = eval::read_predictions(&pred)?;
            let report = eval::compute_metrics(&predictions, dataset)?;
            if csv {
                print!("{}", eval::render_confusion_csv(&report));
            } else {
                print_report(&report);
            }
            Ok(())
        }
    }
}

fn ingest(kind: SignalFile, file: &Path, store: &Path) -> Result<()> {
    let mut store = SignalStore::open(store)?;
    let report = match kind {
        SignalFile::Claims => store.ingest_claimreviews(file),
        SignalFile::Sentences => store.ingest_precrawled(file),
        SignalFile::Sites => store.ingest_sites(file),
    }
    .with_context(|| format!("ingesting {}", file.display()))?;
    println!(
        "accepted {}, rejected {}, added {}",
        report.accepted, report.rejected, report.added
    );
    Ok(())
}

fn build_index(store: &Path, out: &Path, backend_url: Option<&str>, sequential: bool) -> Result<()> {
    let store = SignalStore::open(store)?;
    let mode = if sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    let encoder: Box<dyn SentenceEncoder> = match backend_url {
        Some(url) => Box::new(RemoteBackend::connect(url, std::time::Duration::from_secs(30))?),
        None => Box::new(HashingEncoder::new(mode)),
    };
    let index = SentenceIndex::build_from_store(encoder.as_ref(), &store)?;
    index.save(out)?;
    println!(
        "indexed {} texts with {} (d={}) into {}",
        index.len(),
        index.backend_id(),
        index.dim(),
        out.display()
    );
    Ok(())
}

fn review(file: Option<&Path>, args: &EngineArgs) -> Result<()> {
    let text = match file {
        Some(p) => std::fs::read_to_string(p).with_context(|| p.display().to_string())?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let doc = parse_items(&text).map_err(|e| anyhow!("invalid item document: {e}"))?;
    let (engine, _) = build_engine(&args.service_config()?, Clock::System)?;
    let graph = engine.review_document(&doc)?;
    println!("{}", serialize_jsonld(&graph)?);
    Ok(())
}

fn eval_run(dataset: Dataset, path: &Path, scheme: Option<&str>, out: &Path, args: &EngineArgs) -> Result<()> {
    let schemes = SchemeSet::builtin();
    let name = scheme.unwrap_or(dataset.default_scheme());
    let Some(scheme) = schemes.get(name) else {
        bail!(
            "unknown label scheme {name:?}; known: {}",
            schemes.names().collect::<Vec<_>>().join(", ")
        );
    };
    let items = eval::load_dataset(dataset, path)?;
    let (engine, _) = build_engine(&args.service_config()?, Clock::System)?;
    let engine = Arc::new(engine);
    let summary = eval::run_pipeline(&items, engine.as_ref(), scheme, out, args.mode())?;
    eprintln!(
        "{} samples: {} reviewed, {} resumed, {} errors; predictions in {}",
        summary.predictions.len(),
        summary.reviewed,
        summary.resumed,
        summary.errors,
        summary.predictions_path.display()
    );
    if scheme.labels().iter().all(|l| dataset.canonical_label(l).is_some()) {
        print_report(&eval::compute_metrics(&summary.predictions, dataset)?);
    }
    Ok(())
}

fn print_report(r: &eval::MetricsReport) {
    println!("dataset     {}", r.dataset);
    println!("scored      {} ({} errors excluded)", r.n, r.errors);
    println!("accuracy    {:.4}", r.accuracy);
    println!("MAE         {:.4}", r.mae);
    println!("macro MAE   {:.4}", r.macro_mae);
    println!("macro F1    {:.4}", r.macro_f1);
    println!("macro AvgR  {:.4}", r.macro_avg_recall);
    println!();
    print!("{}", eval::render_confusion(r));
}
