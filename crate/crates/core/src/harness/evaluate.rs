use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{AgentCheckpoint, DqnPolicy, FairShare, LocalOnly, Policy, PpoPolicy, Sequential};
use crate::episode::{run_episode, EnvConfig, MetricTotals, RoundMetrics};
use crate::error::{Error, Result};
use crate::model::SliceId;
use crate::reward::RewardWeights;
use crate::seed::{stream, Domain};

/// Where an evaluation policy comes from, as written on the command line:
/// `local`, `sequential`, `fair`, `ppo:<checkpoint>` or `dqn:<checkpoint>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolicySpec {
    Local,
    Sequential,
    Fair,
    Ppo(PathBuf),
    Dqn(PathBuf),
}

impl FromStr for PolicySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => return Ok(PolicySpec::Local),
            "sequential" => return Ok(PolicySpec::Sequential),
            "fair" => return Ok(PolicySpec::Fair),
            _ => {}
        }
        match s.split_once(':') {
            Some(("ppo", p)) if !p.is_empty() => Ok(PolicySpec::Ppo(p.into())),
            Some(("dqn", p)) if !p.is_empty() => Ok(PolicySpec::Dqn(p.into())),
            _ => Err(Error::invalid(
                "policy",
                format!("{s:?}; expected local, sequential, fair, ppo:<checkpoint> or dqn:<checkpoint>"),
            )),
        }
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::Local => f.write_str("local"),
            PolicySpec::Sequential => f.write_str("sequential"),
            PolicySpec::Fair => f.write_str("fair"),
            PolicySpec::Ppo(p) => write!(f, "ppo:{}", p.display()),
            PolicySpec::Dqn(p) => write!(f, "dqn:{}", p.display()),
        }
    }
}

impl PolicySpec {
    /// Short label used in the metrics CSV.
    pub fn label(&self) -> &'static str {
        match self {
            PolicySpec::Local => "local",
            PolicySpec::Sequential => "sequential",
            PolicySpec::Fair => "fair",
            PolicySpec::Ppo(_) => "ppo",
            PolicySpec::Dqn(_) => "dqn",
        }
    }

    /// Loads checkpoints once; the result hands out fresh policy instances.
    pub fn resolve(&self) -> Result<PolicySource> {
        let load = |p: &Path| {
            if !p.exists() {
                return Err(Error::invalid("policy", format!("checkpoint {} not found", p.display())));
            }
            AgentCheckpoint::load(p)
        };
        Ok(match self {
            PolicySpec::Local => PolicySource::Local,
            PolicySpec::Sequential => PolicySource::Sequential,
            PolicySpec::Fair => PolicySource::Fair,
            PolicySpec::Ppo(p) => PolicySource::Ppo(load(p)?.into_ppo()?.policy(true)),
            PolicySpec::Dqn(p) => PolicySource::Dqn(load(p)?.into_dqn()?.policy()),
        })
    }
}

/// A frozen, cloneable policy.
#[derive(Debug, Clone)]
pub enum PolicySource {
    Local,
    Sequential,
    Fair,
    Ppo(PpoPolicy),
    Dqn(DqnPolicy),
}

impl PolicySource {
    pub fn instantiate(&self) -> Box<dyn Policy + Send> {
        match self {
            PolicySource::Local => Box::new(LocalOnly),
            PolicySource::Sequential => Box::new(Sequential),
            PolicySource::Fair => Box::new(FairShare::default()),
            PolicySource::Ppo(p) => Box::new(p.clone()),
            PolicySource::Dqn(p) => Box::new(p.clone()),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PolicySource::Local => "local",
            PolicySource::Sequential => "sequential",
            PolicySource::Fair => "fair",
            PolicySource::Ppo(_) => "ppo",
            PolicySource::Dqn(_) => "dqn",
        }
    }
}

/// Runs `experiments` independent rounds. Round `i` always draws from
/// evaluation stream `i` of `seed`, so every policy sees the same arrivals
/// and the pooled totals do not depend on thread scheduling.
pub fn evaluate_totals(
    source: &PolicySource,
    env: &EnvConfig,
    weights: &RewardWeights,
    seed: u64,
    experiments: u64,
) -> Result<MetricTotals> {
    let per_round: Vec<MetricTotals> = (0..experiments)
        .into_par_iter()
        .map(|i| {
            let mut policy = source.instantiate();
            let mut rng = stream(seed, Domain::Evaluation, i);
            run_episode(&mut policy, &mut rng, env, weights, i).map(|t| MetricTotals::from_trace(&t))
        })
        .collect::<Result<_>>()?;
    let mut totals = MetricTotals::default();
    for t in &per_round {
        totals.merge(t);
    }
    Ok(totals)
}

pub fn evaluate(
    source: &PolicySource,
    env: &EnvConfig,
    weights: &RewardWeights,
    seed: u64,
    experiments: u64,
) -> Result<RoundMetrics> {
    evaluate_totals(source, env, weights, seed, experiments)?.metrics()
}

/// One CSV line: one policy at one sweep point. Column order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub vary: String,
    pub value: f64,
    pub policy: String,
    pub seeds: u64,
    pub total_time_pct: f64,
    pub mmtc_energy_pct: f64,
    pub urllc_time_pct: f64,
    pub mean_episode_reward: f64,
    pub urllc_acceptance: f64,
    pub mmtc_acceptance: f64,
}

impl MetricsRow {
    pub const COLUMNS: [&'static str; 10] = [
        "vary",
        "value",
        "policy",
        "seeds",
        "total_time_pct",
        "mmtc_energy_pct",
        "urllc_time_pct",
        "mean_episode_reward",
        "urllc_acceptance",
        "mmtc_acceptance",
    ];

    pub fn new(vary: &str, value: f64, policy: &str, m: &RoundMetrics) -> Self {
        MetricsRow {
            vary: vary.into(),
            value,
            policy: policy.into(),
            seeds: m.episodes,
            total_time_pct: m.total_time_pct,
            mmtc_energy_pct: m.mmtc_energy_pct,
            urllc_time_pct: m.urllc_time_pct,
            mean_episode_reward: m.mean_episode_reward,
            urllc_acceptance: m.acceptance_rate(SliceId::Urllc),
            mmtc_acceptance: m.acceptance_rate(SliceId::Mmtc),
        }
    }
}

/// Writes rows with a header, flushing after each row so partial sweeps
/// survive an abort.
pub struct MetricsWriter<W: std::io::Write> {
    inner: csv::Writer<W>,
}

impl<W: std::io::Write> MetricsWriter<W> {
    pub fn new(writer: W) -> Result<Self> {
        let mut inner = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        inner.write_record(MetricsRow::COLUMNS)?;
        inner.flush().map_err(|e| Error::io("<metrics csv>", e))?;
        Ok(MetricsWriter { inner })
    }

    pub fn write(&mut self, row: &MetricsRow) -> Result<()> {
        self.inner.serialize(row)?;
        self.inner.flush().map_err(|e| Error::io("<metrics csv>", e))
    }
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.iter().ne(MetricsRow::COLUMNS) {
        return Err(Error::Malformed(format!(
            "{}: expected columns {:?}, found {:?}",
            path.display(),
            MetricsRow::COLUMNS,
            headers.iter().collect::<Vec<_>>()
        )));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(|e| Error::Malformed(format!("{}: {e}", path.display()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_spec_parses() {
        assert_eq!("fair".parse::<PolicySpec>().unwrap(), PolicySpec::Fair);
        assert_eq!("ppo:a/b.json".parse::<PolicySpec>().unwrap(), PolicySpec::Ppo("a/b.json".into()));
        assert!("ppo:".parse::<PolicySpec>().is_err());
        assert!("greedy".parse::<PolicySpec>().is_err());
    }

    #[test]
    fn missing_checkpoint_is_an_error() {
        let spec: PolicySpec = "dqn:/nonexistent/x.json".parse().unwrap();
        assert!(spec.resolve().is_err());
    }

    #[test]
    fn local_only_is_exactly_neutral() {
        let m = evaluate(&PolicySource::Local, &EnvConfig::default(), &RewardWeights::default(), 7, 20).unwrap();
        assert_eq!((m.total_time_pct, m.mmtc_energy_pct, m.urllc_time_pct), (100.0, 100.0, 100.0));
        assert_eq!(m.mean_episode_reward, 0.0);
        assert_eq!(m.episodes, 20);
    }

    #[test]
    fn csv_round_trip() {
        let m = evaluate(&PolicySource::Fair, &EnvConfig::default(), &RewardWeights::default(), 1, 4).unwrap();
        let row = MetricsRow::new("urllc_mean", 10.0, "fair", &m);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        {
            let mut w = MetricsWriter::new(std::fs::File::create(&path).unwrap()).unwrap();
            w.write(&row).unwrap();
        }
        assert_eq!(read_metrics(&path).unwrap(), vec![row]);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(&MetricsRow::COLUMNS.join(",")));
    }
}
