use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use xirp::generators::{dataset_configs, generate as generate_series, Family, GeneratorConfig};
use xirp::inversion::{Averaging, IRC_PRNG};
use xirp::metrics::report::{best_report, improvement_report, rank_report, summary_report, ReportOptions};
use xirp::metrics::read_scores;
use xirp::preprocessing::{apply_scaler, fit_scaler_with_range, invert_scaler, truncate, window, DEFAULT_LIMIT};
use xirp::tensor::{sidecar_path, Sidecar, Tensor};
use xirp::{encode as encode_image, Error, InversionMethod, Inverter, RepresentationKind, TimeSeries};

use crate::args::{AggregateArgs, CompareArgs, EncodeArgs, Format, GenerateArgs, InvertArgs, MethodArg, Mode};
use crate::series_csv::{read_series, read_windows, write_series, write_windows};
use crate::{usage, CliError, CliResult};

/// Keys fixed by flags rather than `--param`.
const RESERVED_KEYS: [&str; 3] = ["family", "length", "seed"];

fn apply_overrides(cfg: &GeneratorConfig, overrides: &Map<String, Value>) -> CliResult<GeneratorConfig> {
    let Value::Object(mut fields) = serde_json::to_value(cfg).expect("config serializes") else {
        unreachable!("config serializes to an object");
    };
    for (key, value) in overrides {
        if !fields.contains_key(key) {
            let known: Vec<&str> = fields
                .keys()
                .map(String::as_str)
                .filter(|k| !RESERVED_KEYS.contains(k))
                .collect();
            return Err(usage(format!(
                "unknown parameter {key:?} for {}; known: {}",
                cfg.process.family(),
                known.join(", ")
            )));
        }
        fields.insert(key.clone(), value.clone());
    }
    let out: GeneratorConfig =
        serde_json::from_value(Value::Object(fields)).map_err(|e| usage(format!("bad parameter value: {e}")))?;
    out.validate().map_err(|e| usage(e.to_string()))?;
    Ok(out)
}

fn parse_overrides(raw: &[String]) -> CliResult<Map<String, Value>> {
    let mut out = Map::new();
    for item in raw {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("--param expects KEY=VALUE, got {item:?}")))?;
        let key = key.trim();
        if RESERVED_KEYS.contains(&key) {
            return Err(usage(format!("{key} is set by its own flag, not --param")));
        }
        let value: Value = serde_json::from_str(value.trim())
            .map_err(|_| usage(format!("--param {key}: {value:?} is not a number or boolean")))?;
        out.insert(key.to_string(), value);
    }
    Ok(out)
}

pub fn generate(a: &GenerateArgs) -> CliResult {
    let family: Family = a.family.into();
    let n = a.n.unwrap_or_else(|| family.default_count());
    let overrides = parse_overrides(&a.params)?;
    let configs = dataset_configs(family, n, a.length, a.seed).map_err(|e| usage(e.to_string()))?;
    let configs = configs
        .iter()
        .map(|c| apply_overrides(c, &overrides))
        .collect::<CliResult<Vec<_>>>()?;

    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    let mut entries = Vec::with_capacity(configs.len());
    for (k, cfg) in configs.iter().enumerate() {
        let series = generate_series(cfg)?;
        let file = format!("{}-{k:03}.csv", family.label());
        write_series(&a.out.join(&file), &series)?;
        entries.push(json!({ "file": file, "params": cfg }));
    }
    let manifest = json!({
        "family": family.label(),
        "n": configs.len(),
        "length": configs[0].length,
        "seed": a.seed,
        "prng": "rand_chacha::ChaCha8Rng(seed_from_u64), series k seeded with seed + k",
        "overrides": overrides,
        "series": entries,
    });
    let manifest_path = a.out.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest).expect("json") + "\n")
        .with_context(|| format!("cannot write {}", manifest_path.display()))?;
    println!("wrote {} {} series to {}", configs.len(), family, a.out.display());
    Ok(())
}

/// Positions whose scaled value lies outside the encoder's domain.
fn first_out_of_domain(kind: RepresentationKind, scaled: &[f64]) -> Option<(usize, &'static str)> {
    let (ok, domain): (fn(f64) -> bool, _) = match kind {
        RepresentationKind::Irp | RepresentationKind::Xirp => (|v| v > 0.0, "(0, inf)"),
        RepresentationKind::Gasf => (|v| (0.0..=1.0).contains(&v), "[0, 1]"),
        _ => return None,
    };
    scaled.iter().position(|&v| !ok(v)).map(|p| (p, domain))
}

pub fn encode(a: &EncodeArgs) -> CliResult {
    let kind = a.kind.to_kind(a.epsilon);
    if let RepresentationKind::BinaryRp { epsilon } = kind {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(usage(format!("--epsilon must be positive, got {epsilon}")));
        }
    }
    if a.window < 2 {
        return Err(usage(format!("window length {} is below 2", a.window)));
    }
    if a.stride == 0 {
        return Err(usage("stride must be at least 1"));
    }
    if a.limit < 2 {
        return Err(usage(format!("--limit {} is below 2", a.limit)));
    }
    if !(a.fit_fraction > 0.0 && a.fit_fraction <= 1.0) {
        return Err(usage(format!("--fit-fraction must lie in (0, 1], got {}", a.fit_fraction)));
    }
    let range = (a.positive_range[0], a.positive_range[1]);
    if !(range.0 > 0.0 && range.1 > range.0 && range.1.is_finite()) {
        return Err(usage(format!("--positive-range {},{} must satisfy 0 < lo < hi", range.0, range.1)));
    }

    let loaded = read_series(&a.input)?;
    let series = truncate(&loaded.series, a.limit)?;
    let fit_len = ((series.len() as f64 * a.fit_fraction).ceil() as usize).clamp(1, series.len());
    let scaling = fit_scaler_with_range(&series.values()[..fit_len], kind, range)?;
    let scaled = apply_scaler(&series, &scaling)?;
    if let Some((p, domain)) = first_out_of_domain(kind, scaled.values()) {
        return Err(CliError::Data(anyhow!(
            "{}:{}: value {} scales to {}, outside the {kind} domain {domain}",
            a.input.display(),
            loaded.line_of(p),
            series[p],
            scaled[p]
        )));
    }

    let windows = window(&scaled, a.window, a.stride)?;
    let images = windows
        .par_iter()
        .enumerate()
        .map(|(k, w)| encode_image(kind, w).with_context(|| format!("window {k}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let tensor = Tensor::from_matrices(&images)?;
    tensor
        .save(&a.out)
        .with_context(|| format!("cannot write {}", a.out.display()))?;
    let sidecar = Sidecar {
        kind,
        scaling,
        window: a.window,
        stride: Some(a.stride),
        series_name: series.name().to_string(),
        source_length: Some(series.len()),
        truncate_limit: Some(a.limit),
    };
    sidecar.save(&a.out)?;
    println!("wrote tensor {:?} to {}", tensor.dims(), a.out.display());
    Ok(())
}

fn load_with_sidecar(path: &Path) -> CliResult<(Tensor, Sidecar)> {
    let sidecar = Sidecar::load(path).with_context(|| format!("cannot read {}", sidecar_path(path).display()))?;
    let tensor = Tensor::load(path).with_context(|| format!("cannot read {}", path.display()))?;
    match tensor.dims() {
        [_, rows, cols] if *rows == sidecar.window && *cols == sidecar.window => Ok((tensor, sidecar)),
        dims => Err(CliError::Data(anyhow!(
            "{}: shape {dims:?} does not hold {w}x{w} images as its sidecar states",
            path.display(),
            w = sidecar.window
        ))),
    }
}

pub fn invert(a: &InvertArgs) -> CliResult {
    if a.geometric && a.method != MethodArg::Im {
        return Err(usage("--geometric applies to --method im only"));
    }
    let (tensor, sidecar) = load_with_sidecar(&a.input)?;
    if !sidecar.kind.is_invertible() {
        return Err(Error::NotInvertible(sidecar.kind).into());
    }
    if a.geometric && sidecar.kind != RepresentationKind::Xirp {
        return Err(usage(format!("--geometric needs an XIRP tensor, got {}", sidecar.kind)));
    }
    let inverter = Inverter {
        averaging: if a.geometric { Averaging::Geometric } else { Averaging::Arithmetic },
        repair: a.repair,
    };
    let images = tensor.to_matrices(sidecar.kind)?;
    let seed = a.seed.unwrap_or(0);
    let windows = images
        .par_iter()
        .enumerate()
        .map(|(k, image)| {
            let method = match a.method {
                MethodArg::Diagonal => InversionMethod::DiagonalOnly,
                MethodArg::Im => InversionMethod::Mean,
                MethodArg::Irc => InversionMethod::RandomColumn {
                    seed: seed.wrapping_add(k as u64),
                },
            };
            let scaled = inverter.invert(image, method)?;
            invert_scaler(&scaled, &sidecar.scaling)
        })
        .collect::<xirp::Result<Vec<TimeSeries>>>()?;
    write_windows(&a.out, &windows)?;

    let meta = json!({
        "source": a.input,
        "kind": sidecar.kind,
        "method": format!("{:?}", a.method).to_lowercase(),
        "seed": a.seed,
        "window_seed": "seed + window index, wrapping",
        "prng": IRC_PRNG,
        "inverter": inverter,
        "windows": windows.len(),
    });
    let meta_path = sidecar_path(&a.out);
    fs::write(&meta_path, serde_json::to_string_pretty(&meta).expect("json") + "\n")
        .with_context(|| format!("cannot write {}", meta_path.display()))?;
    println!("wrote {} windows to {}", windows.len(), a.out.display());
    Ok(())
}

pub fn compare(a: &CompareArgs) -> CliResult {
    if let Some(t) = a.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage(format!("--tolerance must be non-negative, got {t}")));
        }
    }
    let sidecar = Sidecar::load(&a.tensor).with_context(|| format!("cannot read {}", sidecar_path(&a.tensor).display()))?;
    let original = read_series(&a.original)?.series;
    let original = truncate(&original, sidecar.truncate_limit.unwrap_or(DEFAULT_LIMIT))?;
    let expected = window(&original, sidecar.window, sidecar.stride.unwrap_or(1))?;
    let actual = read_windows(&a.inverted)?;
    if actual.len() != expected.len() {
        return Err(CliError::Data(anyhow!(
            "{} has {} windows, the original yields {}",
            a.inverted.display(),
            actual.len(),
            expected.len()
        )));
    }
    let mut max_err = 0.0f64;
    for (k, (got, want)) in actual.iter().zip(&expected).enumerate() {
        if got.len() != want.len() {
            return Err(CliError::Data(anyhow!(
                "window {k} has {} values, expected {}",
                got.len(),
                want.len()
            )));
        }
        for (g, w) in got.iter().zip(want.values()) {
            max_err = max_err.max((g - w).abs());
        }
    }
    println!("windows {} max_abs_error {max_err:e}", expected.len());
    match a.tolerance {
        Some(t) if max_err > t => Err(CliError::Data(anyhow!("max error {max_err:e} exceeds tolerance {t:e}"))),
        _ => Ok(()),
    }
}

pub fn aggregate(a: &AggregateArgs) -> CliResult {
    let table = read_scores(&a.input).with_context(|| format!("cannot read scores from {}", a.input.display()))?;
    if let Some(d) = &a.dataset {
        let known = table.datasets();
        if !known.contains(d) {
            return Err(CliError::Data(anyhow!(
                "dataset {d:?} not in {}; available: {}",
                a.input.display(),
                known.join(", ")
            )));
        }
    }
    let opts = ReportOptions {
        dataset: a.dataset.clone(),
        metric: a.metric,
        inversion: a.inversion,
    };
    let report = match a.mode {
        Mode::Summary => summary_report(&table, &opts),
        Mode::Best => best_report(&table, &opts),
        Mode::Ranks => rank_report(&table, &opts),
        Mode::Improvement => improvement_report(&table, &opts),
    }?;
    let text = match a.format {
        Format::Text => report.to_text(),
        Format::Csv => report.to_csv(),
    };
    match &a.out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
