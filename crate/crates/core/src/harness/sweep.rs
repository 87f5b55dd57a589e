use std::fmt;
use std::str::FromStr;

use super::config::RunConfig;
use super::evaluate::{evaluate, MetricsRow, MetricsWriter, PolicySource};
use crate::error::{Error, Result};
use crate::model::SliceId;

/// Which arrival mean a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    UrllcMean,
    MmtcMean,
}

impl SweepVar {
    pub fn slice(self) -> SliceId {
        match self {
            SweepVar::UrllcMean => SliceId::Urllc,
            SweepVar::MmtcMean => SliceId::Mmtc,
        }
    }

    /// Brackets the default operating point (10 URLLC, 30 mMTC).
    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepVar::UrllcMean => vec![2.0, 5.0, 10.0, 15.0, 20.0],
            SweepVar::MmtcMean => vec![10.0, 20.0, 30.0, 40.0, 50.0, 60.0],
        }
    }

    pub fn column_name(self) -> &'static str {
        match self {
            SweepVar::UrllcMean => "urllc_mean",
            SweepVar::MmtcMean => "mmtc_mean",
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column_name())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "urllc_mean" => Ok(SweepVar::UrllcMean),
            "mmtc_mean" => Ok(SweepVar::MmtcMean),
            _ => Err(Error::invalid("vary", format!("{s:?}; expected urllc-mean or mmtc-mean"))),
        }
    }
}

/// Evaluates every policy at every value, in the given order, writing one
/// row per pair as soon as it is ready. All points share the same
/// evaluation seeds, so policies are compared on identical arrivals up to
/// the varied count.
pub fn cmd_sweep<W: std::io::Write>(
    cfg: &RunConfig,
    vary: SweepVar,
    values: &[f64],
    policies: &[PolicySource],
    out: &mut MetricsWriter<W>,
) -> Result<Vec<MetricsRow>> {
    if values.is_empty() {
        return Err(Error::invalid("values", "need at least one sweep value"));
    }
    if policies.is_empty() {
        return Err(Error::invalid("policies", "need at least one policy"));
    }
    let mut rows = Vec::with_capacity(values.len() * policies.len());
    for &value in values {
        let mut env = cfg.env.clone();
        env.slice_mut(vary.slice()).count_mean = value;
        env.validate()?;
        for p in policies {
            let m = evaluate(p, &env, &cfg.reward, cfg.run.seed, cfg.run.experiments)?;
            let row = MetricsRow::new(vary.column_name(), value, p.label(), &m);
            out.write(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.run.experiments = 3;
        cfg
    }

    #[test]
    fn one_value_one_policy_gives_one_row() {
        let mut w = MetricsWriter::new(Vec::new()).unwrap();
        let rows = cmd_sweep(&small(), SweepVar::UrllcMean, &[5.0], &[PolicySource::Fair], &mut w).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].vary, "urllc_mean");
    }

    #[test]
    fn local_only_is_flat() {
        let mut w = MetricsWriter::new(Vec::new()).unwrap();
        let vals = SweepVar::MmtcMean.default_values();
        let rows = cmd_sweep(&small(), SweepVar::MmtcMean, &vals, &[PolicySource::Local], &mut w).unwrap();
        assert_eq!(rows.len(), 6);
        for r in rows {
            assert_eq!((r.total_time_pct, r.mmtc_energy_pct, r.urllc_time_pct), (100.0, 100.0, 100.0));
        }
    }

    #[test]
    fn parse_accepts_both_spellings() {
        assert_eq!("urllc-mean".parse::<SweepVar>().unwrap(), SweepVar::UrllcMean);
        assert_eq!("mmtc_mean".parse::<SweepVar>().unwrap(), SweepVar::MmtcMean);
        assert!("x".parse::<SweepVar>().is_err());
    }
}
