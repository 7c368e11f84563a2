use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::trial_model::{Detection, Setting1, Setting2, TrialRecord};

pub const CSV_HEADER: [&str; 5] = ["trial", "setting1", "setting2", "result1", "result2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrialFormat {
    #[default]
    Csv,
}

fn parse_field<T: std::str::FromStr>(raw: &str, line: u64, column: &str) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::Parse {
        line,
        reason: format!("unknown {column} token {:?}", raw.trim()),
    })
}

/// Reads trials from CSV with header `trial,setting1,setting2,result1,result2`.
/// Indices must be positive and strictly increasing.
pub fn parse_trials<R: Read>(reader: R, format: TrialFormat) -> Result<Vec<TrialRecord>> {
    let TrialFormat::Csv = format;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Parse { line: 1, reason: e.to_string() })?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            reason: format!("expected header {}, found {}", CSV_HEADER.join(","), names.join(",")),
        });
    }
    let mut trials = Vec::new();
    let mut previous = 0u64;
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != CSV_HEADER.len() {
            return Err(Error::Parse {
                line,
                reason: format!("expected {} columns, found {}", CSV_HEADER.len(), row.len()),
            });
        }
        let index: u64 = parse_field(&row[0], line, "trial index")?;
        if index == 0 || index <= previous {
            return Err(Error::Parse {
                line,
                reason: format!("trial index {index} is not positive and increasing (previous {previous})"),
            });
        }
        previous = index;
        trials.push(TrialRecord {
            index,
            setting1: parse_field::<Setting1>(&row[1], line, "setting1")?,
            setting2: parse_field::<Setting2>(&row[2], line, "setting2")?,
            result1: parse_field::<Detection>(&row[3], line, "result1")?,
            result2: parse_field::<Detection>(&row[4], line, "result2")?,
        });
    }
    Ok(trials)
}

pub fn parse_trials_path(path: impl AsRef<Path>) -> Result<Vec<TrialRecord>> {
    parse_trials(File::open(path)?, TrialFormat::Csv)
}

pub fn write_trials<W: Write>(writer: W, trials: &[TrialRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for t in trials {
        w.write_record([
            t.index.to_string().as_str(),
            t.setting1.token(),
            t.setting2.token(),
            t.result1.token(),
            t.result2.token(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
