//! Score aggregation: means, best-score counts, average ranks and the
//! improvement of random-column over mean inversion.
//!
//! Scores come as flat [`ScoreRecord`]s. Every aggregation first narrows the
//! table with a [`Selection`] and reduces each `(dataset, series_id,
//! contender)` cell to one value, the mean over its records (one per fold
//! when folds are recorded).

mod io;
pub mod report;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{read_scores, read_scores_from, write_scores, write_scores_to, SCORE_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    /// Held-out classification error of a real-vs-synthetic discriminator.
    #[serde(rename = "S_D")]
    Discriminative,
    /// Forecast error on real data of a model trained on synthetic data.
    #[serde(rename = "S_P")]
    Predictive,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Discriminative, Metric::Predictive];

    pub fn higher_is_better(self) -> bool {
        matches!(self, Metric::Discriminative)
    }

    /// True when `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        if self.higher_is_better() {
            a > b
        } else {
            a < b
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Discriminative => "S_D",
            Metric::Predictive => "S_P",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "S_D" | "SD" => Ok(Metric::Discriminative),
            "S_P" | "SP" => Ok(Metric::Predictive),
            _ => Err(Error::InvalidParams(format!("unknown metric {s:?}, expected S_D or S_P"))),
        }
    }
}

/// Which inversion turned the generated images back into series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InversionTag {
    Diagonal,
    Im,
    Irc,
}

impl InversionTag {
    pub fn label(self) -> &'static str {
        match self {
            InversionTag::Diagonal => "diagonal",
            InversionTag::Im => "im",
            InversionTag::Irc => "irc",
        }
    }
}

impl fmt::Display for InversionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InversionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "diagonal" => Ok(InversionTag::Diagonal),
            "im" => Ok(InversionTag::Im),
            "irc" => Ok(InversionTag::Irc),
            _ => Err(Error::InvalidParams(format!(
                "unknown inversion {s:?}, expected diagonal, im or irc"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub dataset: String,
    pub series_id: String,
    pub contender: String,
    pub metric: Metric,
    pub inversion: Option<InversionTag>,
    pub value: f64,
    /// Backtest fold, when per-fold values are recorded.
    pub fold: Option<u32>,
}

impl ScoreRecord {
    pub fn new(
        dataset: impl Into<String>,
        series_id: impl Into<String>,
        contender: impl Into<String>,
        metric: Metric,
        value: f64,
    ) -> Self {
        Self {
            dataset: dataset.into(),
            series_id: series_id.into(),
            contender: contender.into(),
            metric,
            inversion: None,
            value,
            fold: None,
        }
    }

    pub fn with_inversion(mut self, tag: InversionTag) -> Self {
        self.inversion = Some(tag);
        self
    }

    pub fn with_fold(mut self, fold: u32) -> Self {
        self.fold = Some(fold);
        self
    }
}

/// Validated collection of score records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    records: Vec<ScoreRecord>,
}

impl ScoreTable {
    /// Rejects non-finite values and duplicate
    /// `(dataset, series, contender, metric, inversion, fold)` keys.
    pub fn new(records: Vec<ScoreRecord>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for r in &records {
            if !r.value.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "non-finite score {} for {}/{}/{}",
                    r.value, r.dataset, r.series_id, r.contender
                )));
            }
            let key = (&r.dataset, &r.series_id, &r.contender, r.metric, r.inversion, r.fold);
            if !seen.insert(key) {
                return Err(Error::DuplicateRecord(describe(r)));
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[ScoreRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Dataset names in order of first appearance.
    pub fn datasets(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.records {
            if !out.contains(&r.dataset) {
                out.push(r.dataset.clone());
            }
        }
        out
    }

    pub fn metrics(&self) -> Vec<Metric> {
        Metric::ALL
            .into_iter()
            .filter(|m| self.records.iter().any(|r| r.metric == *m))
            .collect()
    }
}

fn describe(r: &ScoreRecord) -> String {
    let mut s = format!("{}/{}/{}/{}", r.dataset, r.series_id, r.contender, r.metric);
    if let Some(tag) = r.inversion {
        s.push_str(&format!("/{tag}"));
    }
    if let Some(fold) = r.fold {
        s.push_str(&format!("/fold {fold}"));
    }
    s
}

/// Which records an aggregation looks at.
///
/// With an inversion filter, records tagged with that inversion and untagged
/// records (e.g. a model that generates series directly) are both kept.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub dataset: Option<String>,
    pub metric: Metric,
    pub inversion: Option<InversionTag>,
}

impl Selection {
    pub fn new(metric: Metric) -> Self {
        Self {
            dataset: None,
            metric,
            inversion: None,
        }
    }

    pub fn dataset(mut self, dataset: impl Into<String>) -> Self {
        self.dataset = Some(dataset.into());
        self
    }

    pub fn inversion(mut self, tag: InversionTag) -> Self {
        self.inversion = Some(tag);
        self
    }

    fn matches(&self, r: &ScoreRecord) -> bool {
        r.metric == self.metric
            && self.dataset.as_ref().is_none_or(|d| *d == r.dataset)
            && match self.inversion {
                Some(tag) => r.inversion.is_none() || r.inversion == Some(tag),
                None => true,
            }
    }

    fn describe(&self) -> String {
        let mut s = format!("metric {}", self.metric);
        if let Some(d) = &self.dataset {
            s.push_str(&format!(", dataset {d:?}"));
        }
        if let Some(tag) = self.inversion {
            s.push_str(&format!(", inversion {tag}"));
        }
        s
    }
}

/// One series' score for one contender: the mean over its folds.
#[derive(Debug, Clone, PartialEq)]
pub struct CellScore {
    pub value: f64,
    pub folds: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesScores {
    pub dataset: String,
    pub series_id: String,
    pub scores: IndexMap<String, CellScore>,
}

/// Groups the selected records by series, reducing folds to their mean.
pub fn series_scores(table: &ScoreTable, sel: &Selection) -> Result<Vec<SeriesScores>> {
    struct Cell {
        inversion: Option<InversionTag>,
        values: Vec<f64>,
        folded: bool,
    }
    let mut groups: IndexMap<(String, String), IndexMap<String, Cell>> = IndexMap::new();
    for r in table.records.iter().filter(|r| sel.matches(r)) {
        let series = groups
            .entry((r.dataset.clone(), r.series_id.clone()))
            .or_default();
        match series.get_mut(&r.contender) {
            Some(cell) => {
                if cell.inversion != r.inversion {
                    return Err(Error::DuplicateRecord(format!(
                        "{} has scores under several inversions; select one",
                        describe(r)
                    )));
                }
                if !cell.folded || r.fold.is_none() {
                    return Err(Error::DuplicateRecord(describe(r)));
                }
                cell.values.push(r.value);
            }
            None => {
                series.insert(
                    r.contender.clone(),
                    Cell {
                        inversion: r.inversion,
                        values: vec![r.value],
                        folded: r.fold.is_some(),
                    },
                );
            }
        }
    }
    Ok(groups
        .into_iter()
        .map(|((dataset, series_id), cells)| SeriesScores {
            dataset,
            series_id,
            scores: cells
                .into_iter()
                .map(|(contender, cell)| {
                    let value = mean(&cell.values);
                    let folds = if cell.folded { cell.values } else { Vec::new() };
                    (contender, CellScore { value, folds })
                })
                .collect(),
        })
        .collect())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn population_std(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
}

fn contenders(groups: &[SeriesScores]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for g in groups {
        for c in g.scores.keys() {
            if !out.contains(c) {
                out.push(c.clone());
            }
        }
    }
    out
}

/// Checks that every series scores every contender and returns the
/// contender order.
fn complete_contenders(groups: &[SeriesScores], metric: Metric) -> Result<Vec<String>> {
    let all = contenders(groups);
    for g in groups {
        if let Some(missing) = all.iter().find(|c| !g.scores.contains_key(*c)) {
            return Err(Error::MissingContender {
                dataset: g.dataset.clone(),
                series_id: g.series_id.clone(),
                contender: missing.clone(),
                metric: metric.to_string(),
            });
        }
    }
    Ok(all)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContenderSummary {
    pub contender: String,
    pub series: usize,
    /// Mean over series of the per-series scores.
    pub mean: f64,
    /// Population standard deviation over series.
    pub std_over_series: f64,
    /// Population standard deviation over all fold-level values, when recorded.
    pub std_over_folds: Option<f64>,
}

pub fn summarize(table: &ScoreTable, sel: &Selection) -> Result<Vec<ContenderSummary>> {
    let groups = series_scores(table, sel)?;
    if groups.is_empty() {
        return Err(Error::EmptyGroup(sel.describe()));
    }
    Ok(contenders(&groups)
        .into_iter()
        .map(|c| {
            let cells: Vec<&CellScore> = groups.iter().filter_map(|g| g.scores.get(&c)).collect();
            let values: Vec<f64> = cells.iter().map(|s| s.value).collect();
            let folds: Vec<f64> = cells.iter().flat_map(|s| s.folds.iter().copied()).collect();
            ContenderSummary {
                contender: c,
                series: values.len(),
                mean: mean(&values),
                std_over_series: population_std(&values),
                std_over_folds: (!folds.is_empty()).then(|| population_std(&folds)),
            }
        })
        .collect())
}

/// Best-score counts per contender.
///
/// A tie between `t` best contenders awards `1/t` to each, so the counts
/// always sum to the number of series.
#[derive(Debug, Clone, PartialEq)]
pub struct BestCounts {
    pub series: usize,
    pub counts: IndexMap<String, f64>,
}

impl BestCounts {
    pub fn total(&self) -> f64 {
        self.counts.values().sum()
    }

    /// Sums counts over groups of contenders, e.g. representations into models.
    pub fn regroup(&self, group_of: impl Fn(&str) -> String) -> BestCounts {
        let mut counts: IndexMap<String, f64> = IndexMap::new();
        for (c, n) in &self.counts {
            *counts.entry(group_of(c)).or_default() += n;
        }
        BestCounts {
            series: self.series,
            counts,
        }
    }
}

pub fn count_best(table: &ScoreTable, sel: &Selection) -> Result<BestCounts> {
    let groups = series_scores(table, sel)?;
    if groups.is_empty() {
        return Err(Error::EmptyGroup(sel.describe()));
    }
    let order = complete_contenders(&groups, sel.metric)?;
    let mut counts: IndexMap<String, f64> = order.iter().map(|c| (c.clone(), 0.0)).collect();
    for g in &groups {
        let best = g
            .scores
            .values()
            .map(|s| s.value)
            .reduce(|a, b| if sel.metric.better(b, a) { b } else { a })
            .expect("series has at least one contender");
        let winners: Vec<&String> = g.scores.iter().filter(|(_, s)| s.value == best).map(|(c, _)| c).collect();
        let share = 1.0 / winners.len() as f64;
        for w in winners {
            counts[w] += share;
        }
    }
    Ok(BestCounts {
        series: groups.len(),
        counts,
    })
}

/// Ranks `values` from 1 (best) to `k`; tied values share the mean of the
/// positions they occupy.
pub fn rank_values(values: &[f64], metric: Metric) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let ord = values[a].total_cmp(&values[b]);
        if metric.higher_is_better() {
            ord.reverse()
        } else {
            ord
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end, averaged.
        let shared = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = shared;
        }
        start = end;
    }
    ranks
}

/// Average rank per contender over the selected series.
pub fn rank(table: &ScoreTable, sel: &Selection) -> Result<IndexMap<String, f64>> {
    let groups = series_scores(table, sel)?;
    if groups.is_empty() {
        return Err(Error::EmptyGroup(sel.describe()));
    }
    let order = complete_contenders(&groups, sel.metric)?;
    let mut sums: IndexMap<String, f64> = order.iter().map(|c| (c.clone(), 0.0)).collect();
    for g in &groups {
        let values: Vec<f64> = order.iter().map(|c| g.scores[c].value).collect();
        for (c, r) in order.iter().zip(rank_values(&values, sel.metric)) {
            sums[c] += r;
        }
    }
    let n = groups.len() as f64;
    Ok(sums.into_iter().map(|(c, s)| (c, s / n)).collect())
}

/// Signed percentage by which random-column inversion improves on mean
/// inversion, positive when IRC is better under the metric's direction.
///
/// `S_D`: `100 (irc - im) / im`; `S_P`: `100 (im - irc) / irc`.
pub fn improvement_pct(im: f64, irc: f64, metric: Metric) -> Result<f64> {
    if !(im.is_finite() && irc.is_finite()) {
        return Err(Error::InvalidParams(format!("non-finite scores im={im} irc={irc}")));
    }
    match metric {
        Metric::Discriminative => {
            if im == 0.0 {
                return Err(Error::DivisionByZero(format!("{metric} with IM score 0")));
            }
            Ok(100.0 * (irc - im) / im)
        }
        Metric::Predictive => {
            if irc == 0.0 {
                return Err(Error::DivisionByZero(format!("{metric} with IRC score 0")));
            }
            Ok(100.0 * (im - irc) / irc)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Improvement {
    pub contender: String,
    pub metric: Metric,
    pub im: f64,
    pub irc: f64,
    pub pct: f64,
}

/// IM and IRC mean scores and their improvement for every contender and
/// metric that has both.
pub fn improvements(table: &ScoreTable, dataset: Option<&str>) -> Result<Vec<Improvement>> {
    let mut out = Vec::new();
    for metric in table.metrics() {
        let tagged = |tag: InversionTag| -> Result<IndexMap<String, f64>> {
            let sel = Selection {
                dataset: dataset.map(str::to_string),
                metric,
                inversion: Some(tag),
            };
            let groups = series_scores(table, &sel)?;
            let mut values: IndexMap<String, Vec<f64>> = IndexMap::new();
            for g in &groups {
                for (c, s) in &g.scores {
                    values.entry(c.clone()).or_default().push(s.value);
                }
            }
            // Only contenders actually tagged with this inversion.
            Ok(values
                .into_iter()
                .filter(|(c, _)| {
                    table.records.iter().any(|r| {
                        r.metric == metric && &r.contender == c && r.inversion == Some(tag)
                    })
                })
                .map(|(c, v)| (c, mean(&v)))
                .collect())
        };
        let im = tagged(InversionTag::Im)?;
        let irc = tagged(InversionTag::Irc)?;
        for (c, &im_score) in &im {
            if let Some(&irc_score) = irc.get(c) {
                out.push(Improvement {
                    contender: c.clone(),
                    metric,
                    im: im_score,
                    irc: irc_score,
                    pct: improvement_pct(im_score, irc_score, metric)?,
                });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyGroup("contenders scored under both im and irc".into()));
    }
    Ok(out)
}
