use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use keeper_core::analysis::{analyze, render_svg};
use keeper_core::data::load_match;
use keeper_core::episodes::segment_episodes;
use keeper_core::synthetic::generate_synthetic;
use keeper_core::{Config, Match};
use keeper_service::report::{analysis_text, episode_frames, episode_text};
use keeper_service::store::Store;
use keeper_service::{router, AppState};

#[derive(Parser)]
#[command(name = "keeper", version, about = "Goalkeeper positioning analysis")]
struct Cli {
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare model-optimal moves with observed keeper moves.
    Analyze {
        #[arg(required = true)]
        matches: Vec<PathBuf>,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write a bar chart of the two move distributions as SVG.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Serve the JSON API and UI assets.
    Serve {
        matches: Vec<PathBuf>,
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        /// Directory of static UI assets served at `/`.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
    /// Write a seeded synthetic match file.
    GenSynthetic {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate every event of one episode.
    EvalEpisode {
        r#match: PathBuf,
        episode_id: String,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p).with_context(|| format!("loading configuration {}", p.display())),
        None => Ok(Config::default()),
    }
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<Match>> {
    paths.iter().map(|p| load_match(p).with_context(|| format!("loading {}", p.display()))).collect()
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

async fn serve(cfg: Config, matches: Vec<Match>, addr: SocketAddr, ui_dir: Option<PathBuf>) -> Result<()> {
    let store = Store::new(matches).map_err(anyhow::Error::msg)?;
    let app = router(AppState::new(cfg, store), ui_dir);
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Analyze { matches, report, plot } => {
            let matches = load_all(&matches)?;
            let r = analyze(&matches, &cfg)?;
            print!("{}", analysis_text(&r));
            if let Some(p) = report {
                write(&p, &serde_json::to_string_pretty(&r)?)?;
            }
            if let Some(p) = plot {
                write(&p, &render_svg(&r))?;
            }
        }
        Command::Serve { matches, port, host, ui_dir } => {
            let matches = load_all(&matches)?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(cfg, matches, SocketAddr::new(host, port), ui_dir))?;
        }
        Command::GenSynthetic { seed, episodes, out } => {
            if episodes == 0 {
                bail!("--episodes must be at least 1");
            }
            write(&out, &generate_synthetic(seed, episodes).to_json()?)?;
        }
        Command::EvalEpisode { r#match, episode_id, json } => {
            let m = load_match(&r#match).with_context(|| format!("loading {}", r#match.display()))?;
            let episodes = segment_episodes(&m);
            let Some(ep) = episodes.iter().find(|e| e.id == episode_id) else {
                bail!("no episode {episode_id} in {} ({} episodes)", m.id(), episodes.len());
            };
            let frames = episode_frames(ep, &cfg).map_err(|e| anyhow::anyhow!(e.0))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&frames)?);
            } else {
                print!("{}", episode_text(ep, &frames));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
