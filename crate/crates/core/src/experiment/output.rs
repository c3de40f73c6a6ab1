use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{estimate_threshold, ExperimentConfig, ThresholdEstimate, TrialRecord};
use crate::error::{Error, Result};
use crate::game::Player;
use crate::graph::GraphSpec;

pub const CSV_HEADER: [&str; 7] = ["trialIndex", "seed", "k", "winner", "terminationRound", "movesPlayed", "fault"];
pub const CSV_FILE: &str = "trials.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Everything in `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub version: String,
    pub config: ExperimentConfig,
    pub threshold: ThresholdEstimate,
    /// `k_hat / (p n / 2)` for random graphs with a threshold.
    pub scaled_threshold: Option<f64>,
}

pub fn build_summary(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Summary {
    let threshold = estimate_threshold(records, cfg.threshold_quantile);
    let scaled_threshold = match (&cfg.graph, threshold.k_hat) {
        (GraphSpec::Gnp { n, p }, Some(k)) if *p > 0.0 => Some(k as f64 / (p * *n as f64 / 2.0)),
        _ => None,
    };
    Summary { version: env!("CARGO_PKG_VERSION").to_string(), config: cfg.clone(), threshold, scaled_threshold }
}

/// Creates `dir` and checks it accepts files, so an unwritable destination
/// fails before any game is played.
pub fn preflight_output(dir: &Path) -> Result<()> {
    let fail = |e: std::io::Error| Error::Config(format!("output directory {} is not writable: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(fail)?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(fail)?;
    fs::remove_file(&probe).map_err(fail)?;
    Ok(())
}

pub fn write_csv<W: std::io::Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        let winner = r.winner.map_or(String::new(), |p| p.to_string());
        w.write_record([
            r.trial_index.to_string(),
            r.seed.to_string(),
            r.k.to_string(),
            winner,
            r.termination_round.to_string(),
            r.moves_played.to_string(),
            r.fault.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a CSV written by [`write_csv`]. Fault reasons are not stored.
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let bad = |what: &str| Error::Config(format!("malformed trials CSV: {what}"));
    let header: Vec<String> = rd.headers().map_err(|e| bad(&e.to_string()))?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(bad("unexpected header"));
    }
    rd.records()
        .map(|row| {
            let row = row.map_err(|e| bad(&e.to_string()))?;
            let field = |i: usize| row.get(i).ok_or_else(|| bad("short row"));
            let num = |i: usize| -> Result<u64> { field(i)?.parse().map_err(|_| bad("number")) };
            let winner = match field(3)? {
                "alice" => Some(Player::Alice),
                "bob" => Some(Player::Bob),
                "" => None,
                _ => return Err(bad("winner")),
            };
            Ok(TrialRecord {
                trial_index: num(0)? as usize,
                seed: num(1)?,
                k: num(2)? as u32,
                winner,
                termination_round: num(4)? as u32,
                moves_played: num(5)? as usize,
                fault: field(6)?.parse().map_err(|_| bad("fault"))?,
                fault_reason: None,
            })
        })
        .collect()
}

/// Paths written by [`emit_outputs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFiles {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

pub fn emit_outputs(cfg: &ExperimentConfig, records: &[TrialRecord], dir: &Path) -> Result<OutputFiles> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no trial records to write".into()));
    }
    preflight_output(dir)?;
    let files = OutputFiles { csv: dir.join(CSV_FILE), summary: dir.join(SUMMARY_FILE) };
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    fs::write(&files.csv, buf)?;
    let summary = build_summary(cfg, records);
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    fs::write(&files.summary, json)?;
    Ok(files)
}
