use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Deserialize;

use super::{InversionTag, Metric, ScoreRecord, ScoreTable};
use crate::error::{Error, Result};

/// Required columns of a score CSV. An optional trailing `fold` column holds
/// per-fold records.
pub const SCORE_HEADER: [&str; 6] = ["dataset", "series_id", "contender", "metric", "inversion", "value"];

#[derive(Deserialize)]
struct Row {
    dataset: String,
    series_id: String,
    contender: String,
    metric: String,
    inversion: String,
    value: f64,
    #[serde(default)]
    fold: Option<u32>,
}

pub fn read_scores(path: impl AsRef<Path>) -> Result<ScoreTable> {
    read_scores_from(File::open(path)?)
}

pub fn read_scores_from(reader: impl Read) -> Result<ScoreTable> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Schema { line: 1, message: e.to_string() })?
        .clone();
    for col in SCORE_HEADER {
        if !headers.iter().any(|h| h == col) {
            return Err(Error::Schema {
                line: 1,
                message: format!("missing column {col:?}; expected header {}", SCORE_HEADER.join(",")),
            });
        }
    }

    let mut records = Vec::new();
    for result in rdr.records() {
        let raw = result.map_err(|e| Error::Schema {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = raw.position().map_or(0, |p| p.line());
        let schema = |message: String| Error::Schema { line, message };
        let row: Row = raw.deserialize(Some(&headers)).map_err(|e| schema(e.to_string()))?;
        let metric: Metric = row.metric.parse().map_err(|e: Error| schema(e.to_string()))?;
        let inversion = if row.inversion.is_empty() {
            None
        } else {
            Some(row.inversion.parse::<InversionTag>().map_err(|e| schema(e.to_string()))?)
        };
        if !row.value.is_finite() {
            return Err(schema(format!("non-finite value {}", row.value)));
        }
        records.push(ScoreRecord {
            dataset: row.dataset,
            series_id: row.series_id,
            contender: row.contender,
            metric,
            inversion,
            value: row.value,
            fold: row.fold,
        });
    }
    ScoreTable::new(records)
}

pub fn write_scores(path: impl AsRef<Path>, table: &ScoreTable) -> Result<()> {
    write_scores_to(File::create(path)?, table)
}

pub fn write_scores_to(writer: impl Write, table: &ScoreTable) -> Result<()> {
    let with_folds = table.records().iter().any(|r| r.fold.is_some());
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Io(e.into());
    let mut header: Vec<&str> = SCORE_HEADER.to_vec();
    if with_folds {
        header.push("fold");
    }
    w.write_record(&header).map_err(csv_err)?;
    for r in table.records() {
        let mut fields = vec![
            r.dataset.clone(),
            r.series_id.clone(),
            r.contender.clone(),
            r.metric.to_string(),
            r.inversion.map(|t| t.to_string()).unwrap_or_default(),
            r.value.to_string(),
        ];
        if with_folds {
            fields.push(r.fold.map(|f| f.to_string()).unwrap_or_default());
        }
        w.write_record(&fields).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
