//! Aggregates sweep CSVs into frequency-vs-p curves with Wilson intervals.

use crate::sweep::CSV_HEADER;
use canram_core::{Error, Result};
use std::collections::BTreeMap;
use std::io::Write;

pub const REPORT_HEADER: &str = "n,adversary,p,trials,hits,frequency,wilson_low,wilson_high";

/// The columns the aggregation needs from one sweep row.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrial {
    pub n: usize,
    pub adversary: String,
    pub p: f64,
    pub weak: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub n: usize,
    pub adversary: String,
    pub p: f64,
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

/// Wilson 95% score interval (z = 1.96), clamped into [0,1]. Unlike the
/// normal approximation it stays sane at 0 and 1 and for tiny samples.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0 && hits <= trials, "need 0 <= hits <= trials, trials > 0");
    let z = 1.96f64;
    let nf = trials as f64;
    let phat = hits as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (phat + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Parses one sweep CSV. The header must match the sweep schema exactly;
/// `name` labels errors when aggregating several files.
pub fn parse_sweep_csv(name: &str, text: &str) -> Result<Vec<ParsedTrial>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("{name}: header {header:?} does not match the sweep schema"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("{name}: empty file"),
            })
        }
    }
    let columns = CSV_HEADER.split(',').count();
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let err = |msg: String| Error::Parse {
            line: i + 1,
            msg: format!("{name}: {msg}"),
        };
        if fields.len() != columns {
            return Err(err(format!(
                "expected {columns} columns, got {}",
                fields.len()
            )));
        }
        let n = fields[0]
            .parse::<usize>()
            .map_err(|e| err(format!("bad n: {e}")))?;
        let p = fields[2]
            .parse::<f64>()
            .map_err(|e| err(format!("bad p: {e}")))?;
        let weak = match fields[9] {
            "0" => false,
            "1" => true,
            other => return Err(err(format!("bad weak flag {other:?}"))),
        };
        out.push(ParsedTrial {
            n,
            adversary: fields[4].to_string(),
            p,
            weak,
        });
    }
    Ok(out)
}

/// Merges trials from any number of files into per-(n, adversary, p)
/// frequency rows, sorted by that key.
pub fn aggregate(trials: &[ParsedTrial]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(usize, String, u64), (u64, u64)> = BTreeMap::new();
    for t in trials {
        let slot = groups
            .entry((t.n, t.adversary.clone(), t.p.to_bits()))
            .or_insert((0, 0));
        slot.0 += t.weak as u64;
        slot.1 += 1;
    }
    groups
        .into_iter()
        .map(|((n, adversary, p_bits), (hits, trials))| {
            let (wilson_low, wilson_high) = wilson_interval(hits, trials);
            AggregateRow {
                n,
                adversary,
                p: f64::from_bits(p_bits),
                trials,
                hits,
                frequency: hits as f64 / trials as f64,
                wilson_low,
                wilson_high,
            }
        })
        .collect()
}

pub fn write_report<W: Write>(rows: &[AggregateRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{REPORT_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{:.6},{:.6},{:.6}",
            r.n, r.adversary, r.p, r.trials, r.hits, r.frequency, r.wilson_low, r.wilson_high
        )?;
    }
    Ok(())
}

/// Full pipeline over (label, csv text) inputs.
pub fn run_report(inputs: &[(String, String)]) -> Result<Vec<AggregateRow>> {
    let mut trials = Vec::new();
    for (name, text) in inputs {
        trials.extend(parse_sweep_csv(name, text)?);
    }
    Ok(aggregate(&trials))
}
