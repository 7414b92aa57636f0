//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xirp::generators::{build_dataset, dataset_configs, generate, Family, GeneratorConfig, Process};
use xirp::metrics::{count_best, improvement_pct, improvements, InversionTag, Metric, ScoreRecord, ScoreTable, Selection};
use xirp::preprocessing::window;
use xirp::tensor::Tensor;
use xirp::{
    encode, encode_gasf, encode_irp, encode_xirp, invert, InversionMethod, RepresentationKind, RepresentationMatrix,
    TimeSeries,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn methods(seed: u64) -> [InversionMethod; 3] {
    [
        InversionMethod::DiagonalOnly,
        InversionMethod::Mean,
        InversionMethod::RandomColumn { seed },
    ]
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn random_series(rng: &mut ChaCha8Rng, kind: RepresentationKind) -> TimeSeries {
    let len = rng.random_range(2..=48);
    let values = (0..len)
        .map(|_| match kind {
            RepresentationKind::Xirp => 10f64.powf(rng.random_range(-3.0..=3.0)),
            RepresentationKind::Gasf => rng.random_range(0.0..=1.0),
            _ => rng.random_range(-1e6..=1e6),
        })
        .collect();
    TimeSeries::new(values).unwrap()
}

fn roundtrip_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    let mut count = 0;
    for kind in [RepresentationKind::Xirp, RepresentationKind::Gasf, RepresentationKind::Naive] {
        for _ in 0..1000 {
            let x = random_series(&mut rng, kind);
            let image = encode(kind, &x).map_err(|e| e.to_string())?;
            for method in methods(rng.random()) {
                let back = invert(&image, method).map_err(|e| e.to_string())?;
                let err = max_abs_diff(back.values(), x.values());
                check(err <= 1e-9, || format!("{kind} {method} error {err:e} on {:?}", x.values()))?;
                worst = worst.max(err);
                count += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 10.0, || format!("took {secs:.2}s"))?;
    Ok(format!("{count} inversions, max error {worst:.1e}, {secs:.2}s"))
}

fn scale_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let x = random_series(&mut rng, RepresentationKind::Xirp);
        let c = 10f64.powf(rng.random_range(-3.0..=3.0));
        let cx = x.map(|v| c * v).unwrap();
        let (a, b) = (encode_irp(&x).unwrap(), encode_irp(&cx).unwrap());
        let irp_err = max_abs_diff(a.as_slice(), b.as_slice());
        check(irp_err <= 1e-12, || format!("IRP differs by {irp_err:e} at c={c}"))?;
        let (a, b) = (encode_xirp(&x).unwrap(), encode_xirp(&cx).unwrap());
        for i in 0..a.side() {
            for j in (0..a.side()).filter(|&j| j != i) {
                let err = (a.get(i, j) - b.get(i, j)).abs();
                check(err <= 1e-12, || format!("XIRP ({i},{j}) differs by {err:e} at c={c}"))?;
                worst = worst.max(err);
            }
        }
        worst = worst.max(irp_err);
    }
    let x = TimeSeries::new(vec![0.2, 0.8]).unwrap();
    let g = encode_gasf(&x).unwrap();
    let gc = encode_gasf(&x.map(|v| 0.5 * v).unwrap()).unwrap();
    let shift = (g.get(0, 1) - gc.get(0, 1)).abs();
    check(shift > 1e-3, || format!("GASF witness off-diagonal moved only {shift:e}"))?;
    Ok(format!("1000 pairs, max deviation {worst:.1e}; GASF witness shifts by {shift:.3}"))
}

fn structural_contracts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..1000 {
        let pos = random_series(&mut rng, RepresentationKind::Xirp);
        let unit = random_series(&mut rng, RepresentationKind::Gasf);
        let any = random_series(&mut rng, RepresentationKind::Naive);
        let eps = rng.random_range(1e-3..1e6);
        let s = pos.len();

        let irp = encode_irp(&pos).unwrap();
        let xirp = encode_xirp(&pos).unwrap();
        for m in [&irp, &xirp] {
            for i in 0..s {
                for j in (0..s).filter(|&j| j != i) {
                    check(m.get(i, j) == -m.get(j, i), || format!("trial {trial}: {} not antisymmetric", m.kind()))?;
                }
            }
        }
        check(irp.diagonal().iter().all(|&d| d == 0.0), || "IRP diagonal not zero".into())?;
        check(xirp.diagonal() == pos.values(), || "XIRP diagonal is not the series".into())?;
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let gap = (irp.get(i, k) - irp.get(i, j) - irp.get(j, k)).abs();
                    check(gap <= 1e-10, || format!("trial {trial}: additivity gap {gap:e}"))?;
                }
            }
        }

        let symmetric = |m: &RepresentationMatrix| {
            (0..m.side()).all(|i| (0..m.side()).all(|j| m.get(i, j) == m.get(j, i)))
        };
        let rp = encode(RepresentationKind::BinaryRp { epsilon: eps }, &any).unwrap();
        let urp = encode(RepresentationKind::Urp, &any).unwrap();
        let gasf = encode(RepresentationKind::Gasf, &unit).unwrap();
        for m in [&rp, &urp, &gasf] {
            check(symmetric(m), || format!("trial {trial}: {} not symmetric", m.kind()))?;
        }
        check(rp.diagonal().iter().all(|&d| d == 1.0), || "BinaryRP diagonal not one".into())?;
        check(rp.as_slice().iter().all(|&v| v == 0.0 || v == 1.0), || "BinaryRP not binary".into())?;
        check(urp.diagonal().iter().all(|&d| d == 0.0), || "URP diagonal not zero".into())?;
        check(gasf.as_slice().iter().all(|v| (-1.0..=1.0).contains(v)), || "GASF out of [-1, 1]".into())?;
        for (d, x) in gasf.diagonal().iter().zip(unit.values()) {
            check((d - (2.0 * x * x - 1.0)).abs() <= 1e-10, || format!("GASF diagonal {d} for x={x}"))?;
        }
        let naive = encode(RepresentationKind::Naive, &any).unwrap();
        for i in 0..any.len() {
            check(naive.row(i).iter().all(|&v| v == any[i]), || "Naive row is not constant".into())?;
        }
    }
    Ok("1000 randomized inputs per encoding".into())
}

const CONTENDERS: [&str; 4] = ["TS", "GASF", "XIRP", "Naive"];

/// Per-dataset best-score counts over (TS, GASF, XIRP, Naive), for S_D and S_P.
const BEST_COUNTS: [(&str, usize, [usize; 4], [usize; 4]); 9] = [
    ("Sine", 9, [2, 6, 1, 0], [0, 6, 2, 1]),
    ("Noisy Sine", 10, [1, 2, 3, 4], [1, 5, 4, 0]),
    ("Brownian Motion", 10, [0, 1, 1, 8], [0, 6, 3, 1]),
    ("Merton Process", 10, [5, 1, 3, 1], [1, 4, 5, 0]),
    ("Power Law", 9, [8, 0, 0, 1], [1, 5, 3, 0]),
    ("Energy Data", 27, [3, 4, 4, 16], [0, 15, 11, 1]),
    ("Stock Data", 5, [2, 2, 0, 1], [1, 2, 2, 0]),
    ("Air Quality", 13, [1, 4, 3, 5], [4, 2, 2, 5]),
    ("Bike Share", 7, [0, 3, 2, 2], [3, 0, 2, 2]),
];

/// Best-count totals per representation, then per model (TimeGAN, WGAN-GP).
const REPRESENTATION_TOTALS: ([usize; 4], [usize; 4]) = ([22, 23, 17, 38], [11, 45, 34, 10]);
const MODEL_TOTALS: ([usize; 2], [usize; 2]) = ([22, 78], [11, 89]);

/// IM and IRC mean scores with the reported improvement in percent.
const IMPROVEMENTS: [(&str, Metric, f64, f64, f64); 6] = [
    ("GASF", Metric::Discriminative, 0.107, 0.496, 365.423),
    ("GASF", Metric::Predictive, 0.263, 0.164, 60.308),
    ("XIRP", Metric::Discriminative, 0.107, 0.498, 366.619),
    ("XIRP", Metric::Predictive, 0.263, 0.161, 62.841),
    ("Naive", Metric::Discriminative, 0.543, 0.569, 4.808),
    ("Naive", Metric::Predictive, 0.334, 0.347, -3.881),
];

/// A score table whose series winners reproduce `BEST_COUNTS`.
fn winners_table() -> ScoreTable {
    let mut records = Vec::new();
    for (dataset, _, sd, sp) in BEST_COUNTS {
        for (metric, counts) in [(Metric::Discriminative, sd), (Metric::Predictive, sp)] {
            let (win, lose) = if metric.higher_is_better() { (0.9, 0.1) } else { (0.1, 0.9) };
            let mut series = 0;
            for (w, &n) in counts.iter().enumerate() {
                for _ in 0..n {
                    for (c, name) in CONTENDERS.iter().enumerate() {
                        let v = if c == w { win } else { lose };
                        records.push(ScoreRecord::new(dataset, series.to_string(), *name, metric, v));
                    }
                    series += 1;
                }
            }
        }
    }
    ScoreTable::new(records).unwrap()
}

fn table_arithmetic() -> Outcome {
    let mut records = Vec::new();
    let mut worst = 0.0f64;
    for (rep, metric, im, irc, reported) in IMPROVEMENTS {
        let pct = improvement_pct(im, irc, metric).map_err(|e| e.to_string())?;
        let gap = (pct - reported).abs();
        check(gap <= 3.0, || format!("{rep} {metric}: {pct:.3}% vs {reported}%"))?;
        check(pct.signum() == reported.signum(), || format!("{rep} {metric}: sign differs"))?;
        worst = worst.max(gap);
        records.push(ScoreRecord::new("all", "1", rep, metric, im).with_inversion(InversionTag::Im));
        records.push(ScoreRecord::new("all", "1", rep, metric, irc).with_inversion(InversionTag::Irc));
    }
    let via_table = improvements(&ScoreTable::new(records).unwrap(), None).map_err(|e| e.to_string())?;
    check(via_table.len() == 6, || format!("{} improvement rows", via_table.len()))?;

    let table = winners_table();
    let mut totals = [[0.0f64; 4]; 2];
    for (dataset, n, sd, sp) in BEST_COUNTS {
        for (m, (metric, row)) in [(Metric::Discriminative, sd), (Metric::Predictive, sp)].into_iter().enumerate() {
            check(row.iter().sum::<usize>() == n, || format!("{dataset} {metric} row does not sum to {n}"))?;
            let counts = count_best(&table, &Selection::new(metric).dataset(dataset)).map_err(|e| e.to_string())?;
            check(counts.series == n && counts.total() == n as f64, || {
                format!("{dataset} {metric}: counted {} over {} series", counts.total(), counts.series)
            })?;
            for (c, name) in CONTENDERS.iter().enumerate() {
                check(counts.counts[*name] == row[c] as f64, || format!("{dataset} {metric} {name} count"))?;
                totals[m][c] += counts.counts[*name];
            }
        }
    }
    let (rep_sd, rep_sp) = REPRESENTATION_TOTALS;
    for (m, expected) in [rep_sd, rep_sp].iter().enumerate() {
        let got: Vec<usize> = totals[m].iter().map(|&v| v as usize).collect();
        check(got == expected, || format!("representation totals {got:?} vs {expected:?}"))?;
    }
    let (model_sd, model_sp) = MODEL_TOTALS;
    for (metric, expected) in [(Metric::Discriminative, model_sd), (Metric::Predictive, model_sp)] {
        let all = count_best(&table, &Selection::new(metric)).map_err(|e| e.to_string())?;
        let models = all.regroup(|c| if c == "TS" { "TimeGAN".into() } else { "WGAN-GP".into() });
        let got = [models.counts["TimeGAN"] as usize, models.counts["WGAN-GP"] as usize];
        check(got == expected, || format!("{metric} model totals {got:?} vs {expected:?}"))?;
        check(all.total() == 100.0, || format!("{metric} total {}", all.total()))?;
    }
    Ok(format!("improvements within {worst:.2} pp; 18 count rows, totals 22/78 and 11/89"))
}

fn increments(x: &TimeSeries) -> Vec<f64> {
    x.values().windows(2).map(|w| w[1] - w[0]).collect()
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, var.sqrt())
}

fn dataset_shape() -> Outcome {
    let expected = [
        (Family::Sine, 9),
        (Family::NoisySine, 10),
        (Family::Brownian, 10),
        (Family::MertonJump, 10),
        (Family::PowerLaw, 9),
    ];
    for (family, n) in expected {
        check(family.default_count() == n, || format!("{family} default count"))?;
        let data = build_dataset(family, n, 5000, 42).map_err(|e| e.to_string())?;
        check(data.len() == n, || format!("{family}: {} series", data.len()))?;
        check(data.iter().all(|s| s.len() == 1000), || format!("{family}: length not capped at 1000"))?;
    }

    let brownian = dataset_configs(Family::Brownian, 10, 1000, 42).map_err(|e| e.to_string())?;
    for (k, cfg) in brownian.iter().enumerate() {
        let Process::Brownian { volatility, .. } = cfg.process else { unreachable!() };
        check((volatility - (0.90 + 0.01 * k as f64)).abs() < 1e-12, || format!("sigma {volatility}"))?;
        let (m, s) = mean_std(&increments(&generate(cfg).unwrap()));
        check(m.abs() <= 3.0 * volatility / 999f64.sqrt(), || format!("Brownian {k}: increment mean {m}"))?;
        check((s - volatility).abs() <= 0.1 * volatility, || format!("Brownian {k}: increment std {s}"))?;
    }

    let merton = |intensity| Process::MertonJump {
        drift: 0.01,
        volatility: 0.9,
        intensity,
        jump_mean: 0.5,
        jump_std: 3.0,
    };
    let jumpless = generate(&GeneratorConfig::new(merton(0.0), 1000, 9)).unwrap();
    let drift = 0.01 - 0.9 * 0.9 / 2.0;
    let diffusion = generate(&GeneratorConfig::new(Process::Brownian { drift, volatility: 0.9 }, 1000, 9)).unwrap();
    let bitwise = jumpless.values().iter().zip(diffusion.values()).all(|(a, b)| a.to_bits() == b.to_bits());
    check(bitwise, || "lambda=0 Merton differs from the diffusion".into())?;
    let n = 100_000;
    let (m, s) = mean_std(&increments(&generate(&GeneratorConfig::new(merton(0.1), n, 9)).unwrap()));
    let true_mean = drift + 0.1 * 0.5;
    let true_std = (0.81f64 + 0.1 * (9.0 + 0.25)).sqrt();
    check((m - true_mean).abs() <= 3.0 * true_std / ((n - 1) as f64).sqrt(), || format!("Merton mean {m}"))?;
    check((s - true_std).abs() <= 0.1 * true_std, || format!("Merton std {s} vs {true_std}"))?;

    let mut medians = Vec::new();
    for alpha in [0.1, 0.5, 0.9] {
        let mut maxima: Vec<f64> = (0..31)
            .map(|seed| {
                let x = generate(&GeneratorConfig::new(Process::PowerLaw { alpha, symmetric: false }, 1000, seed)).unwrap();
                let inc = increments(&x);
                assert!(inc.iter().all(|&d| d >= 0.0), "negative power-law increment");
                inc.into_iter().fold(0.0, f64::max)
            })
            .collect();
        maxima.sort_by(f64::total_cmp);
        medians.push(maxima[15]);
    }
    check(medians[0] > medians[1] && medians[1] > medians[2], || format!("tail medians {medians:?}"))?;
    Ok("sizes 9/10/10/10/9 at length 1000; increment statistics, jumpless Merton and power-law tails hold".into())
}

fn run(bin: &str, args: &[&str]) -> Result<String, String> {
    let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "xirp {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn read_rows(path: &Path, skip: usize) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(skip).map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn cli_end_to_end() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_xirp");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    run(bin, &["generate", "brownian", "--n", "10", "--len", "1000", "--seed", "42", "--out", &p("data")])?;
    let csv = p("data/brownian-000.csv");
    let series: Vec<f64> = read_rows(Path::new(&csv), 0).into_iter().flatten().collect();
    check(series.len() == 1000, || format!("generated {} points", series.len()))?;
    let expected = window(&TimeSeries::new(series).unwrap(), 20, 1).unwrap();

    let mut worst = 0.0f64;
    for kind in ["xirp", "gasf", "naive"] {
        let tensor_path = p(&format!("{kind}.bin"));
        run(bin, &["encode", "--input", &csv, "--kind", kind, "-d", "20", "--stride", "1", "--out", &tensor_path])?;
        let bytes = std::fs::read(&tensor_path).unwrap();
        let tensor = Tensor::from_bytes(&bytes).map_err(|e| e.to_string())?;
        check(tensor.dims() == [981, 20, 20], || format!("{kind} tensor shape {:?}", tensor.dims()))?;
        check(tensor.to_bytes() == bytes, || format!("{kind} tensor does not round-trip bit-exactly"))?;
        let again = p(&format!("{kind}-again.bin"));
        run(bin, &["encode", "--input", &csv, "--kind", kind, "--out", &again])?;
        check(std::fs::read(&again).unwrap() == bytes, || format!("{kind} encode is not deterministic"))?;

        for method in ["diagonal", "im", "irc"] {
            let out = p(&format!("{kind}-{method}.csv"));
            run(bin, &["invert", "--input", &tensor_path, "--method", method, "--seed", "7", "--out", &out])?;
            let rows = read_rows(Path::new(&out), 1);
            check(rows.len() == 981, || format!("{kind} {method}: {} rows", rows.len()))?;
            for (got, want) in rows.iter().zip(&expected) {
                let err = max_abs_diff(got, want.values());
                check(err <= 1e-9, || format!("{kind} {method}: window error {err:e}"))?;
                worst = worst.max(err);
            }
            let report = run(bin, &["compare", "--inverted", &out, "--original", &csv, "--tensor", &tensor_path, "--tolerance", "1e-9"])?;
            check(report.starts_with("windows 981 "), || format!("compare printed {report:?}"))?;
        }
    }
    Ok(format!("981 windows per kind, max error {worst:.1e}, tensors bit-exact"))
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("roundtrip exactness", roundtrip_exactness),
        ("scale invariance", scale_invariance),
        ("structural contracts", structural_contracts),
        ("table arithmetic", table_arithmetic),
        ("dataset shape", dataset_shape),
        ("cli end-to-end", cli_end_to_end),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(criterion))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
