//! Tabular renderings of the aggregations, as CSV or aligned text.

use std::fmt::Write as _;

use super::{count_best, improvements, rank, summarize, Metric, ScoreTable, Selection};
use crate::error::Result;
use crate::metrics::InversionTag;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Free-form lines printed under the text table.
    pub notes: Vec<String>,
}

impl Report {
    fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for row in &self.rows {
            w.write_record(row).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }

    pub fn to_text(&self) -> String {
        let cols = self.header.len();
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, &w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
        };
        line(&mut out, &self.header);
        let rule: usize = widths.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
        writeln!(out, "{}", "-".repeat(rule)).unwrap();
        for row in &self.rows {
            line(&mut out, row);
        }
        for note in &self.notes {
            writeln!(out, "{note}").unwrap();
        }
        out
    }
}

fn score(v: f64) -> String {
    format!("{v:.3}")
}

/// Counts print as integers unless a tie split them.
fn count(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

/// Options shared by the report builders.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportOptions {
    pub dataset: Option<String>,
    pub metric: Option<Metric>,
    pub inversion: Option<InversionTag>,
}

impl ReportOptions {
    fn datasets(&self, table: &ScoreTable) -> Vec<String> {
        match &self.dataset {
            Some(d) => vec![d.clone()],
            None => table.datasets(),
        }
    }

    fn metrics(&self, table: &ScoreTable) -> Vec<Metric> {
        match self.metric {
            Some(m) => vec![m],
            None => table.metrics(),
        }
    }

    fn selection(&self, dataset: Option<&str>, metric: Metric) -> Selection {
        Selection {
            dataset: dataset.map(str::to_string),
            metric,
            inversion: self.inversion,
        }
    }
}

/// Mean (population std over series) per dataset, metric and contender.
pub fn summary_report(table: &ScoreTable, opts: &ReportOptions) -> Result<Report> {
    let mut report = Report::new(
        ["dataset", "n", "metric", "contender", "mean", "std_series", "std_folds"]
            .map(String::from)
            .to_vec(),
    );
    for dataset in opts.datasets(table) {
        for metric in opts.metrics(table) {
            let sel = opts.selection(Some(&dataset), metric);
            let Ok(summary) = summarize(table, &sel) else { continue };
            for s in summary {
                report.rows.push(vec![
                    dataset.clone(),
                    s.series.to_string(),
                    metric.to_string(),
                    s.contender,
                    score(s.mean),
                    score(s.std_over_series),
                    s.std_over_folds.map(score).unwrap_or_else(|| "-".into()),
                ]);
            }
        }
    }
    Ok(report)
}

/// Best-score counts per dataset and metric, then totals over all datasets.
pub fn best_report(table: &ScoreTable, opts: &ReportOptions) -> Result<Report> {
    let metrics = opts.metrics(table);
    let mut contenders: Vec<String> = Vec::new();
    let mut rows: Vec<(String, usize, Metric, indexmap::IndexMap<String, f64>)> = Vec::new();
    for dataset in opts.datasets(table) {
        for &metric in &metrics {
            let sel = opts.selection(Some(&dataset), metric);
            if super::series_scores(table, &sel)?.is_empty() {
                continue;
            }
            let counts = count_best(table, &sel)?;
            for c in counts.counts.keys() {
                if !contenders.contains(c) {
                    contenders.push(c.clone());
                }
            }
            rows.push((dataset.clone(), counts.series, metric, counts.counts));
        }
    }
    if opts.dataset.is_none() {
        for &metric in &metrics {
            let mut totals = indexmap::IndexMap::new();
            let mut n = 0;
            for (_, series, _, counts) in rows.iter().filter(|r| r.2 == metric) {
                n += series;
                for (c, v) in counts {
                    *totals.entry(c.clone()).or_insert(0.0) += v;
                }
            }
            if n > 0 {
                rows.push(("all".into(), n, metric, totals));
            }
        }
    }

    let mut header: Vec<String> = ["dataset", "n", "metric"].map(String::from).to_vec();
    header.extend(contenders.iter().cloned());
    let mut report = Report::new(header);
    for (dataset, n, metric, counts) in rows {
        let mut row = vec![dataset, n.to_string(), metric.to_string()];
        row.extend(contenders.iter().map(|c| counts.get(c).map_or("-".into(), |&v| count(v))));
        report.rows.push(row);
    }
    report.notes.push("ties award 1/t of a count to each of t tied winners".into());
    Ok(report)
}

/// Average rank (1 = best) per contender across the selected series.
pub fn rank_report(table: &ScoreTable, opts: &ReportOptions) -> Result<Report> {
    let mut report = Report::new(["scope", "metric", "contender", "mean_rank"].map(String::from).to_vec());
    let scope = opts.dataset.clone().unwrap_or_else(|| "all".into());
    for metric in opts.metrics(table) {
        let ranks = rank(table, &opts.selection(opts.dataset.as_deref(), metric))?;
        for (c, r) in ranks {
            report.rows.push(vec![scope.clone(), metric.to_string(), c, format!("{r:.2}")]);
        }
    }
    report.notes.push("tied scores share the mean of their rank positions".into());
    Ok(report)
}

/// IM vs IRC means and the signed improvement of IRC.
pub fn improvement_report(table: &ScoreTable, opts: &ReportOptions) -> Result<Report> {
    let mut report = Report::new(["contender", "metric", "im", "irc", "delta_pct"].map(String::from).to_vec());
    for imp in improvements(table, opts.dataset.as_deref())? {
        if opts.metric.is_some_and(|m| m != imp.metric) {
            continue;
        }
        report.rows.push(vec![
            imp.contender,
            imp.metric.to_string(),
            score(imp.im),
            score(imp.irc),
            format!("{:.3}", imp.pct),
        ]);
    }
    report
        .notes
        .push("S_D: 100*(irc-im)/im; S_P: 100*(im-irc)/irc; positive means IRC is better".into());
    Ok(report)
}
