//! CSV encoding of trial rows and summaries. No field contains a comma, so
//! values are written bare.

use std::io::{BufRead, Write};

use super::config::SweepParam;
use super::runner::TrialResult;
use super::summary::SummaryRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "scenario,sweep_param,sweep_value,estimator,trial,seed,qstar_loss,hamming,k_wan,wall_time_seconds";

pub const SUMMARY_HEADER: &str = "scenario,sweep_param,sweep_value,estimator,trials,\
qstar_loss_mean,qstar_loss_stderr,qstar_loss_min,qstar_loss_max,\
hamming_mean,hamming_stderr,hamming_min,hamming_max";

pub fn write_results<W: Write>(mut w: W, rows: &[TrialResult]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        let k = r.k_wan.map(|k| k.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.scenario,
            r.sweep_param,
            r.sweep_value,
            r.estimator,
            r.trial,
            r.seed,
            r.qstar_loss,
            r.hamming,
            k,
            r.wall_time_seconds
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results<R: BufRead>(r: R) -> Result<Vec<TrialResult>> {
    let mut rows = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let err = |message: String| Error::Config {
            line: line_no,
            message,
        };
        if idx == 0 {
            if line.trim() != CSV_HEADER {
                return Err(err(format!("unexpected header `{line}`")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(err(format!("expected 10 fields, found {}", f.len())));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| err(format!("`{s}` is not a number")))
        };
        let int = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| err(format!("`{s}` is not an integer")))
        };
        rows.push(TrialResult {
            scenario: f[0].parse().map_err(|e: Error| err(e.to_string()))?,
            sweep_param: f[1].parse::<SweepParam>().map_err(|e| err(e.to_string()))?,
            sweep_value: num(f[2])?,
            estimator: f[3].parse().map_err(|e: Error| err(e.to_string()))?,
            trial: int(f[4])? as usize,
            seed: int(f[5])?,
            qstar_loss: num(f[6])?,
            hamming: num(f[7])?,
            k_wan: if f[8].is_empty() {
                None
            } else {
                Some(int(f[8])? as usize)
            },
            wall_time_seconds: num(f[9])?,
        });
    }
    Ok(rows)
}

pub fn write_summary<W: Write>(mut w: W, rows: &[SummaryRow]) -> Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for s in rows {
        let (q, h) = (&s.qstar_loss, &s.hamming);
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.scenario,
            s.sweep_param,
            s.sweep_value,
            s.estimator,
            s.trials,
            q.mean,
            q.stderr,
            q.min,
            q.max,
            h.mean,
            h.stderr,
            h.min,
            h.max
        )?;
    }
    w.flush()?;
    Ok(())
}
