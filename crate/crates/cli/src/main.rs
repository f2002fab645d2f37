use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;
use tracing_subscriber::EnvFilter;

use scorelens_core::corpus::IngestOptions;
use scorelens_core::features::catalog;
use scorelens_core::{extract_features, parse_score_bytes, CorpusStore};

#[derive(Parser)]
#[command(name = "scorelens", version, about = "Feature extraction and corpus analytics for MusicXML scores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse every score under DIR into the corpus store
    Ingest {
        dir: PathBuf,
        #[arg(long, env = "CORPUS_DIR", default_value = "corpus")]
        corpus_dir: PathBuf,
        /// Exclude works still under copyright, overriding the manifest
        #[arg(long)]
        public_domain_only: bool,
        /// Also write the preset use cases afterwards
        #[arg(long)]
        seed_usecases: bool,
    },
    /// Print the feature vector of a single score
    Extract {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP API
    Serve {
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "CORPUS_DIR", default_value = "corpus")]
        corpus_dir: PathBuf,
        #[arg(long, default_value = "0.0.0.0")]
        host: std::net::IpAddr,
    },
    /// Write a synthetic corpus of .mxl files plus manifest.json
    Demo {
        dir: PathBuf,
        #[arg(long, default_value_t = 6)]
        composers: usize,
        #[arg(long, default_value_t = 8)]
        types: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write the preset use cases for the current corpus
    SeedUsecases {
        #[arg(long, env = "CORPUS_DIR", default_value = "corpus")]
        corpus_dir: PathBuf,
    },
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();

    match Cli::parse().command {
        Command::Ingest { dir, corpus_dir, public_domain_only, seed_usecases } => {
            let store = open(&corpus_dir)?;
            let options = IngestOptions {
                public_domain_only: public_domain_only.then_some(true),
                ..IngestOptions::default()
            };
            let report = store.ingest_directory(&dir, options).with_context(|| format!("ingesting {}", dir.display()))?;
            tracing::info!(
                parsed = report.parsed.len(),
                failed = report.failed.len(),
                duplicates = report.duplicates.len(),
                unchanged = report.unchanged,
                excluded = report.excluded.len(),
                "ingest finished"
            );
            let seeded = if seed_usecases { store.seed_use_cases()? } else { Vec::new() };
            println!("{}", serde_json::to_string_pretty(&json!({ "report": report, "seeded_usecases": seeded }))?);
        }
        Command::Extract { file, json } => {
            let bytes = std::fs::read(&file).with_context(|| format!("reading {}", file.display()))?;
            let doc = parse_score_bytes(&bytes).with_context(|| format!("parsing {}", file.display()))?;
            let ex = extract_features(&doc);
            if json {
                let out = json!({
                    "file": file.display().to_string(),
                    "title": doc.title,
                    "composer": doc.composer_name,
                    "features": ex.features,
                    "quality_flags": ex.flags,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                let mut out = std::io::stdout().lock();
                writeln!(out, "{} ({})", doc.title, file.display())?;
                for d in catalog() {
                    writeln!(out, "  {:<8} {:<36} {:>12.6}", format!("{:?}", d.category).to_lowercase(), d.id, ex.features.get(d.id).unwrap_or(f64::NAN))?;
                }
                for flag in &ex.flags {
                    writeln!(out, "  flag: {flag:?}")?;
                }
            }
        }
        Command::Serve { port, corpus_dir, host } => {
            let store = open(&corpus_dir)?;
            serve(store, SocketAddr::new(host, port))?;
        }
        Command::Demo { dir, composers, types, seed } => {
            if composers == 0 || types == 0 {
                bail!("--composers and --types must be positive");
            }
            let manifest = scorelens_core::synth::write_demo_corpus(&dir, seed, composers, types)
                .with_context(|| format!("writing demo corpus to {}", dir.display()))?;
            println!("wrote {} scores to {}", manifest.files.len(), dir.display());
        }
        Command::SeedUsecases { corpus_dir } => {
            let created = open(&corpus_dir)?.seed_use_cases()?;
            println!("{}", serde_json::to_string_pretty(&created)?);
        }
    }
    Ok(())
}

fn open(corpus_dir: &Path) -> Result<CorpusStore> {
    CorpusStore::open(corpus_dir).with_context(|| format!("opening corpus at {}", corpus_dir.display()))
}

fn serve(store: CorpusStore, addr: SocketAddr) -> Result<()> {
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async move {
        let count = store.snapshot().records.len();
        let app = scorelens_api::router(Arc::new(store));
        let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
        let local = listener.local_addr()?;
        tracing::info!(compositions = count, "serving on http://{local}");
        // tests and scripts read the bound port from this line
        println!("listening on http://{local}");
        std::io::stdout().flush()?;
        axum::serve(listener, app).with_graceful_shutdown(shutdown()).await?;
        tracing::info!("shut down");
        Ok(())
    })
}

async fn shutdown() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        if let Ok(mut s) = tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            s.recv().await;
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}
