//! Command-line front end over `mecsim::harness`.

use std::fs::{self, File};
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mecsim::agents::AgentKind;
use mecsim::harness::{
    cmd_sweep, cmd_train, evaluate, read_metrics, render_plots, unix_now, write_metadata, MetricsRow, MetricsWriter,
    PolicySource, PolicySpec, RunConfig, SweepVar,
};

#[derive(Parser)]
#[command(name = "mecsim", version, about = "5G MEC slicing simulator: train, evaluate, sweep, plot")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// TOML run configuration; omitted keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config file.
    #[arg(long, env = "MECSIM_SEED")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Train a PPO or DQN agent.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "ppo")]
        agent: AgentKind,
        #[arg(long)]
        episodes: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one policy: local, sequential, fair, ppo:<ckpt> or dqn:<ckpt>.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        policy: PolicySpec,
        #[arg(long)]
        experiments: Option<u64>,
        /// Write the metrics row here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate policies across a range of arrival means.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        vary: SweepVar,
        /// Comma-separated; defaults bracket the operating point.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "local,sequential,fair")]
        policies: Vec<PolicySpec>,
        #[arg(long)]
        experiments: Option<u64>,
        /// Metrics CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Render SVG charts from a metrics CSV.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.run.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parent_dir(path: &Path) -> &Path {
    path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train {
            common,
            agent,
            episodes,
            out,
        } => {
            let mut cfg = load(&common)?;
            if let Some(n) = episodes {
                cfg.run.episodes = n;
            }
            let art = cmd_train(&cfg, agent, &out)?;
            println!("checkpoint: {}", art.checkpoint.display());
            println!("curve: {}", art.curve.display());
        }
        Command::Evaluate {
            common,
            policy,
            experiments,
            out,
        } => {
            let mut cfg = load(&common)?;
            if let Some(n) = experiments {
                cfg.run.experiments = n;
            }
            let source = policy.resolve().with_context(|| format!("loading policy {policy}"))?;
            let m = evaluate(&source, &cfg.env, &cfg.reward, cfg.run.seed, cfg.run.experiments)?;
            let row = MetricsRow::new("none", 0.0, source.label(), &m);
            match out {
                Some(path) => {
                    let started = unix_now();
                    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    MetricsWriter::new(file)?.write(&row)?;
                    write_metadata(parent_dir(&path), "evaluate", &policy.to_string(), &cfg, started)?;
                }
                None => MetricsWriter::new(io::stdout().lock())?.write(&row)?,
            }
        }
        Command::Sweep {
            common,
            vary,
            values,
            policies,
            experiments,
            out,
        } => {
            let started = unix_now();
            let mut cfg = load(&common)?;
            if let Some(n) = experiments {
                cfg.run.experiments = n;
            }
            let values = if values.is_empty() { vary.default_values() } else { values };
            let sources = policies
                .iter()
                .map(|p| p.resolve().with_context(|| format!("loading policy {p}")))
                .collect::<Result<Vec<PolicySource>>>()?;
            let dir = parent_dir(&out);
            fs::create_dir_all(dir)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut writer = MetricsWriter::new(file)?;
            let rows = cmd_sweep(&cfg, vary, &values, &sources, &mut writer)?;
            let names: Vec<String> = policies.iter().map(ToString::to_string).collect();
            write_metadata(dir, "sweep", &names.join(","), &cfg, started)?;
            println!("{} rows -> {}", rows.len(), out.display());
        }
        Command::Plot { input, out } => {
            let rows = read_metrics(&input)?;
            for p in render_plots(&rows, &out)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
