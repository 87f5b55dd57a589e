//! Runs both arrival-mean sweeps for the baselines, writes the metrics CSVs
//! and renders the SVG charts into a directory.
//!
//!     cargo run --release --example sweep_and_plot -- [out_dir] [experiments]

use std::fs::File;
use std::path::PathBuf;

use mecsim::harness::{cmd_sweep, render_plots, MetricsWriter, PolicySource, RunConfig, SweepVar};

fn main() -> mecsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "sweep_out".into()));
    let mut cfg = RunConfig::default();
    cfg.run.experiments = args.next().map_or(300, |a| a.parse().expect("experiment count"));
    std::fs::create_dir_all(&out).map_err(|e| mecsim::Error::Malformed(e.to_string()))?;

    let policies = [PolicySource::Local, PolicySource::Sequential, PolicySource::Fair];
    let mut all = Vec::new();
    for vary in [SweepVar::UrllcMean, SweepVar::MmtcMean] {
        let path = out.join(format!("{vary}.csv"));
        let file = File::create(&path).map_err(|e| mecsim::Error::Malformed(e.to_string()))?;
        let rows = cmd_sweep(&cfg, vary, &vary.default_values(), &policies, &mut MetricsWriter::new(file)?)?;
        for r in &rows {
            println!(
                "{:<11}{:>5} {:<11} time {:>7.2}  energy {:>7.2}  urllc {:>7.2}",
                r.vary, r.value, r.policy, r.total_time_pct, r.mmtc_energy_pct, r.urllc_time_pct
            );
        }
        all.extend(rows);
    }
    for p in render_plots(&all, &out)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
