//! Single-column series files and the per-window output of `invert`.

use std::fs::File;
use std::path::Path;

use anyhow::{bail, Context, Result};

use xirp::TimeSeries;

/// A series read from CSV together with the file line of every value.
pub struct LoadedSeries {
    pub series: TimeSeries,
    pub lines: Vec<u64>,
}

impl LoadedSeries {
    pub fn line_of(&self, position: usize) -> u64 {
        self.lines.get(position).copied().unwrap_or(0)
    }
}

/// Reads a single `value` column. A non-numeric first row is a header.
pub fn read_series(path: &Path) -> Result<LoadedSeries> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 1 {
            bail!("{}:{line}: expected one column, found {}", path.display(), record.len());
        }
        let cell = &record[0];
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                values.push(v);
                lines.push(line);
            }
            Ok(v) => bail!("{}:{line}: non-finite value {v}", path.display()),
            Err(_) if k == 0 => continue,
            Err(_) => bail!("{}:{line}: cannot parse {cell:?} as a number", path.display()),
        }
    }
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let series = TimeSeries::named(name, values).with_context(|| format!("{}: invalid series", path.display()))?;
    Ok(LoadedSeries { series, lines })
}

pub fn write_series(path: &Path, series: &TimeSeries) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    w.write_record(["value"])?;
    for v in series.values() {
        w.write_record([v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Header `window,t0,..,t{d-1}`, then one row per window.
pub fn write_windows(path: &Path, windows: &[TimeSeries]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot create {}", path.display()))?;
    let side = windows.first().map_or(0, TimeSeries::len);
    let mut header = vec!["window".to_string()];
    header.extend((0..side).map(|t| format!("t{t}")));
    w.write_record(&header)?;
    for (k, win) in windows.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(win.values().iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_windows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let line = record.position().map_or(0, |p| p.line());
        let values = record
            .iter()
            .skip(1)
            .map(|c| c.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .with_context(|| format!("{}:{line}: non-numeric cell", path.display()))?;
        out.push(values);
    }
    Ok(out)
}
