use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tracing_subscriber::EnvFilter;

use csindex_core::classifier::{classification_report, render_csv, render_table};
use csindex_core::ingest::{self, IngestError, PublicationRecord, RecordReader, UniqueKeys};
use csindex_core::registry::Registry;
use csindex_core::scoring::area_stats;
use csindex_core::selection::{IndexedPaper, YearWindow, select_papers};
use csindex_core::service::{self, Snapshot, SnapshotStore, build_snapshot, departments_csv};

#[derive(Parser)]
#[command(
    name = "csindex",
    version,
    about = "Index conference papers from a DBLP dump"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a DBLP XML dump into the canonical record format.
    Ingest {
        /// XML file, gzip or plain; `-` for standard input.
        #[arg(long)]
        input: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Print record and skip counts to standard error.
        #[arg(long)]
        stats: bool,
    },
    /// Check the registry tables.
    Validate {
        #[arg(long)]
        config_dir: PathBuf,
    },
    /// Classify every tracked venue.
    Classify {
        #[arg(long)]
        config_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassifyFormat::Table)]
        format: ClassifyFormat,
    },
    /// Select indexed papers from parsed records.
    Select {
        /// Records file: canonical format or DBLP XML.
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        config_dir: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        drop_report: Option<PathBuf>,
    },
    /// Score departments from selected papers.
    Score {
        /// Indexed papers, one JSON object per line, as written by `select`.
        #[arg(long)]
        papers: PathBuf,
        #[arg(long)]
        config_dir: PathBuf,
        /// Area id, or `all`.
        #[arg(long, default_value = "all")]
        area: String,
        #[arg(long, value_enum, default_value_t = ScoreFormat::Json)]
        format: ScoreFormat,
    },
    /// Serve the statistics API. SIGHUP re-reads the inputs.
    Serve {
        #[arg(long)]
        config_dir: PathBuf,
        #[arg(long)]
        records: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        #[command(flatten)]
        window: WindowArgs,
        /// Static dashboard files, served under /ui.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
    /// Write areas.json, conferences.csv, departments.csv and papers.jsonl.
    Export {
        #[arg(long)]
        config_dir: PathBuf,
        #[arg(long)]
        records: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Args, Clone, Copy)]
struct WindowArgs {
    /// First year of the window (inclusive).
    #[arg(long = "from", default_value_t = 2013)]
    from: i32,
    /// Last year of the window (inclusive).
    #[arg(long = "to", default_value_t = 2018)]
    to: i32,
}

impl WindowArgs {
    fn window(self) -> Result<YearWindow> {
        Ok(YearWindow::new(self.from, self.to)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScoreFormat {
    Json,
    Csv,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn ingest(input: &Path, out: Option<&Path>, stats: bool) -> Result<()> {
    let reader =
        ingest::open_input(input).with_context(|| format!("opening {}", input.display()))?;
    let mut records = UniqueKeys::new(RecordReader::new(reader));
    let mut out = output(out)?;
    let mut duplicates = 0u64;
    for item in records.by_ref() {
        match item {
            Ok(rec) => {
                serde_json::to_writer(&mut out, &rec)?;
                out.write_all(b"\n")?;
            }
            Err(e @ IngestError::Record { .. }) => {
                if matches!(
                    &e,
                    IngestError::Record {
                        fault: ingest::RecordFault::DuplicateKey,
                        ..
                    }
                ) {
                    duplicates += 1;
                }
                tracing::warn!("{e}");
            }
            Err(e) => return Err(e.into()),
        }
    }
    out.flush()?;
    if stats {
        let s = records.inner().stats();
        eprintln!("records: {}", s.records - duplicates);
        eprintln!("record errors: {}", s.record_errors + duplicates);
        for (kind, n) in &s.skipped {
            eprintln!("skipped {kind}: {n}");
        }
    }
    Ok(())
}

fn classify(config_dir: &Path, format: ClassifyFormat) -> Result<()> {
    let registry = Registry::load_dir(config_dir)?;
    let report = classification_report(&registry)?;
    let mut out = output(None)?;
    match format {
        ClassifyFormat::Table => write!(out, "{}", render_table(&report.rows))?,
        ClassifyFormat::Csv => write!(out, "{}", render_csv(&report.rows))?,
        ClassifyFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    if !matches!(format, ClassifyFormat::Json) {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(())
}

fn load_records(path: &Path) -> Result<Vec<PublicationRecord>> {
    let (records, report) =
        ingest::load_records(path).with_context(|| format!("reading {}", path.display()))?;
    for e in &report.record_errors {
        tracing::warn!("{e}");
    }
    Ok(records)
}

fn select(
    records: &Path,
    config_dir: &Path,
    window: YearWindow,
    out: Option<&Path>,
    drop_report: Option<&Path>,
) -> Result<()> {
    let registry = Registry::load_dir(config_dir)?;
    let records = load_records(records)?;
    let selection = select_papers(&records, &registry, window)?;
    let mut w = output(out)?;
    for p in &selection.papers {
        serde_json::to_writer(&mut w, p)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    if let Some(path) = drop_report {
        let mut w = output(Some(path))?;
        serde_json::to_writer_pretty(&mut w, &selection.report)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}

fn score(papers: &Path, config_dir: &Path, area: &str, format: ScoreFormat) -> Result<()> {
    let registry = Registry::load_dir(config_dir)?;
    let text =
        std::fs::read_to_string(papers).with_context(|| format!("reading {}", papers.display()))?;
    let papers = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str::<IndexedPaper>(l).with_context(|| format!("line {}", i + 1))
        })
        .collect::<Result<Vec<_>>>()?;
    let area_ids: Vec<&str> = if area == "all" {
        registry.areas.iter().map(|a| a.area_id.as_str()).collect()
    } else {
        vec![area]
    };
    let stats = area_ids
        .iter()
        .map(|id| area_stats(&papers, &registry, id))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = output(None)?;
    match format {
        ScoreFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &stats)?;
            writeln!(out)?;
        }
        ScoreFormat::Csv => write!(out, "{}", departments_csv(&stats, &registry))?,
    }
    out.flush()?;
    Ok(())
}

fn build(config_dir: &Path, records: &Path, window: YearWindow) -> Result<Snapshot> {
    Ok(build_snapshot(config_dir, records, window)?)
}

async fn serve(
    config_dir: PathBuf,
    records: PathBuf,
    bind: SocketAddr,
    window: YearWindow,
    ui_dir: Option<PathBuf>,
) -> Result<()> {
    let store = SnapshotStore::new(build(&config_dir, &records, window)?);
    let reload = store.clone();
    tokio::spawn(async move {
        let Ok(mut hup) = tokio::signal::unix::signal(tokio::signal::unix::SignalKind::hangup())
        else {
            return;
        };
        while hup.recv().await.is_some() {
            let (c, r) = (config_dir.clone(), records.clone());
            match tokio::task::spawn_blocking(move || build(&c, &r, window)).await {
                Ok(Ok(snap)) => {
                    tracing::info!("re-indexed, snapshot {}", snap.fingerprint());
                    reload.replace(snap);
                }
                Ok(Err(e)) => tracing::error!("re-index failed, keeping current snapshot: {e:#}"),
                Err(e) => tracing::error!("re-index task failed: {e}"),
            }
        }
    });
    service::serve(bind, store, ui_dir).await?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            input,
            output,
            stats,
        } => ingest(&input, output.as_deref(), stats),
        Command::Validate { config_dir } => {
            let registry = Registry::load_dir(&config_dir)?;
            let report = classification_report(&registry)?;
            println!(
                "ok: {} areas, {} venues, {} departments, {} researchers ({} aliases)",
                registry.areas.len(),
                registry.venues.len(),
                registry.departments.len(),
                registry.researchers.len(),
                registry.aliases().len()
            );
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(())
        }
        Command::Classify { config_dir, format } => classify(&config_dir, format),
        Command::Select {
            records,
            config_dir,
            window,
            output,
            drop_report,
        } => select(
            &records,
            &config_dir,
            window.window()?,
            output.as_deref(),
            drop_report.as_deref(),
        ),
        Command::Score {
            papers,
            config_dir,
            area,
            format,
        } => score(&papers, &config_dir, &area, format),
        Command::Serve {
            config_dir,
            records,
            bind,
            window,
            ui_dir,
        } => {
            let window = window.window()?;
            tokio::runtime::Runtime::new()?
                .block_on(serve(config_dir, records, bind, window, ui_dir))
        }
        Command::Export {
            config_dir,
            records,
            window,
            out_dir,
        } => {
            let snapshot = build(&config_dir, &records, window.window()?)?;
            service::write_exports(&snapshot, &out_dir)
                .with_context(|| format!("writing {}", out_dir.display()))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")),
        )
        .with_writer(io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
