//! Seeded synthetic processes and the benchmark parameter sweeps.
//!
//! All processes use a unit time step, start at `x_0 = 0` (the sine family
//! excepted) and draw from `ChaCha8Rng::seed_from_u64(seed)`, so a config
//! always produces the same series bit for bit.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocessing::DEFAULT_LIMIT;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sine,
    NoisySine,
    Ar1,
    Brownian,
    MertonJump,
    PowerLaw,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Sine,
        Family::NoisySine,
        Family::Ar1,
        Family::Brownian,
        Family::MertonJump,
        Family::PowerLaw,
    ];

    /// Series per dataset in the benchmark (AR(1) is not a benchmark dataset).
    pub fn default_count(self) -> usize {
        match self {
            Family::Sine | Family::PowerLaw => 9,
            Family::NoisySine | Family::Brownian | Family::MertonJump => 10,
            Family::Ar1 => 5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Sine => "sine",
            Family::NoisySine => "noisy_sine",
            Family::Ar1 => "ar1",
            Family::Brownian => "brownian",
            Family::MertonJump => "merton_jump",
            Family::PowerLaw => "power_law",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A process and its parameters. Rates and volatilities are per step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Process {
    /// `A sin(2 pi f t + phase)`, `f` in cycles per step.
    Sine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    /// Sine plus i.i.d. Gaussian noise.
    NoisySine {
        amplitude: f64,
        frequency: f64,
        phase: f64,
        noise_std: f64,
    },
    /// `x_t = intercept + coefficient x_{t-1} + e_t`.
    Ar1 {
        coefficient: f64,
        #[serde(default)]
        intercept: f64,
        innovation_std: f64,
    },
    /// Random walk `x_t = x_{t-1} + drift + volatility z_t`.
    Brownian { drift: f64, volatility: f64 },
    /// Log-domain Merton process: drift-corrected diffusion plus a
    /// compound-Poisson sum of Gaussian jumps.
    MertonJump {
        drift: f64,
        volatility: f64,
        intensity: f64,
        jump_mean: f64,
        jump_std: f64,
    },
    /// Increments `s (u^(-1/alpha) - 1)`, `u ~ U(0, 1]`. With `symmetric` the
    /// sign `s` is a fair coin flip; otherwise it is always `+1`.
    PowerLaw {
        alpha: f64,
        #[serde(default)]
        symmetric: bool,
    },
}

impl Process {
    pub fn family(&self) -> Family {
        match self {
            Process::Sine { .. } => Family::Sine,
            Process::NoisySine { .. } => Family::NoisySine,
            Process::Ar1 { .. } => Family::Ar1,
            Process::Brownian { .. } => Family::Brownian,
            Process::MertonJump { .. } => Family::MertonJump,
            Process::PowerLaw { .. } => Family::PowerLaw,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} = {v} is not finite")))
            }
        };
        let non_negative = |name: &str, v: f64| {
            finite(name, v)?;
            if v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} = {v} must be non-negative")))
            }
        };
        match *self {
            Process::Sine { amplitude, frequency, phase } => {
                finite("amplitude", amplitude)?;
                finite("frequency", frequency)?;
                finite("phase", phase)
            }
            Process::NoisySine { amplitude, frequency, phase, noise_std } => {
                finite("amplitude", amplitude)?;
                finite("frequency", frequency)?;
                finite("phase", phase)?;
                non_negative("noise_std", noise_std)
            }
            Process::Ar1 { coefficient, intercept, innovation_std } => {
                finite("coefficient", coefficient)?;
                finite("intercept", intercept)?;
                non_negative("innovation_std", innovation_std)
            }
            Process::Brownian { drift, volatility } => {
                finite("drift", drift)?;
                non_negative("volatility", volatility)
            }
            Process::MertonJump { drift, volatility, intensity, jump_mean, jump_std } => {
                finite("drift", drift)?;
                non_negative("volatility", volatility)?;
                non_negative("intensity", intensity)?;
                finite("jump_mean", jump_mean)?;
                non_negative("jump_std", jump_std)
            }
            Process::PowerLaw { alpha, .. } => {
                finite("alpha", alpha)?;
                if alpha > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParams(format!("alpha = {alpha} must be positive")))
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(flatten)]
    pub process: Process,
    pub length: usize,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(process: Process, length: usize, seed: u64) -> Self {
        Self { process, length, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.length < 2 {
            return Err(Error::InvalidParams(format!("length {} is below 2", self.length)));
        }
        self.process.validate()
    }
}

#[inline]
fn diffusion_step(prev: f64, drift: f64, volatility: f64, z: f64) -> f64 {
    prev + drift + volatility * z
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Draws one series from `cfg`.
///
/// ```
/// use xirp::generators::{generate, GeneratorConfig, Process};
///
/// let cfg = GeneratorConfig::new(Process::Brownian { drift: 0.0, volatility: 0.9 }, 1000, 42);
/// let a = generate(&cfg)?;
/// assert_eq!(a.len(), 1000);
/// assert_eq!(a[0], 0.0);
/// assert_eq!(a, generate(&cfg)?);
/// # Ok::<(), xirp::Error>(())
/// ```
pub fn generate(cfg: &GeneratorConfig) -> Result<TimeSeries> {
    cfg.validate()?;
    let n = cfg.length;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = Vec::with_capacity(n);

    match cfg.process {
        Process::Sine { amplitude, frequency, phase } => {
            x.extend((0..n).map(|t| amplitude * (2.0 * PI * frequency * t as f64 + phase).sin()));
        }
        Process::NoisySine { amplitude, frequency, phase, noise_std } => {
            for t in 0..n {
                let clean = amplitude * (2.0 * PI * frequency * t as f64 + phase).sin();
                x.push(clean + noise_std * normal(&mut rng));
            }
        }
        Process::Ar1 { coefficient, intercept, innovation_std } => {
            x.push(0.0);
            for t in 1..n {
                let next = intercept + coefficient * x[t - 1] + innovation_std * normal(&mut rng);
                x.push(next);
            }
        }
        Process::Brownian { drift, volatility } => {
            x.push(0.0);
            for t in 1..n {
                x.push(diffusion_step(x[t - 1], drift, volatility, normal(&mut rng)));
            }
        }
        Process::MertonJump { drift, volatility, intensity, jump_mean, jump_std } => {
            let corrected = drift - 0.5 * volatility * volatility;
            let jumps = if intensity > 0.0 {
                Some(Poisson::new(intensity).map_err(|e| Error::InvalidParams(e.to_string()))?)
            } else {
                None
            };
            x.push(0.0);
            for t in 1..n {
                let mut next = diffusion_step(x[t - 1], corrected, volatility, normal(&mut rng));
                if let Some(poisson) = &jumps {
                    let count = poisson.sample(&mut rng) as u64;
                    if count > 0 {
                        let jump: f64 = (0..count).map(|_| jump_mean + jump_std * normal(&mut rng)).sum();
                        next += jump;
                    }
                }
                x.push(next);
            }
        }
        Process::PowerLaw { alpha, symmetric } => {
            x.push(0.0);
            for t in 1..n {
                // random::<f64>() lies in [0, 1); flip it onto (0, 1].
                let u = 1.0 - rng.random::<f64>();
                let magnitude = u.powf(-1.0 / alpha) - 1.0;
                let sign = if symmetric && rng.random::<bool>() { -1.0 } else { 1.0 };
                x.push(x[t - 1] + sign * magnitude);
            }
        }
    }

    TimeSeries::named(format!("{}-{}", cfg.process.family(), cfg.seed), x)
}

/// `n` evenly spaced values from `start` to `end` inclusive; `[start]` when `n == 1`.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![start],
        _ => (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Sweep frequency for the sine families: one cycle per 20 steps.
pub const SINE_FREQUENCY: f64 = 1.0 / 20.0;
/// Jump size spread of the Merton sweep.
pub const MERTON_JUMP_STD: f64 = 3.0;

/// Parameter sweep behind [`build_dataset`]; series `k` gets seed `seed + k`.
pub fn dataset_configs(family: Family, n_series: usize, length: usize, seed: u64) -> Result<Vec<GeneratorConfig>> {
    if n_series == 0 {
        return Err(Error::InvalidParams("a dataset needs at least one series".into()));
    }
    let length = length.min(DEFAULT_LIMIT);
    let phases: Vec<f64> = (0..n_series).map(|k| 2.0 * PI * k as f64 / n_series as f64).collect();
    let processes: Vec<Process> = match family {
        Family::Sine => phases
            .iter()
            .map(|&phase| Process::Sine {
                amplitude: 1.0,
                frequency: SINE_FREQUENCY,
                phase,
            })
            .collect(),
        Family::NoisySine => phases
            .iter()
            .zip(linspace(0.05, 0.5, n_series))
            .map(|(&phase, noise_std)| Process::NoisySine {
                amplitude: 1.0,
                frequency: SINE_FREQUENCY,
                phase,
                noise_std,
            })
            .collect(),
        Family::Ar1 => linspace(0.5, 0.9, n_series)
            .into_iter()
            .map(|coefficient| Process::Ar1 {
                coefficient,
                intercept: 0.0,
                innovation_std: 1.0,
            })
            .collect(),
        Family::Brownian => linspace(0.90, 0.99, n_series)
            .into_iter()
            .map(|volatility| Process::Brownian { drift: 0.0, volatility })
            .collect(),
        Family::MertonJump => linspace(0.90, 0.99, n_series)
            .into_iter()
            .zip(linspace(0.01, 0.10, n_series))
            .map(|(volatility, intensity)| Process::MertonJump {
                drift: 0.0,
                volatility,
                intensity,
                jump_mean: 0.0,
                jump_std: MERTON_JUMP_STD,
            })
            .collect(),
        Family::PowerLaw => linspace(0.1, 0.9, n_series)
            .into_iter()
            .map(|alpha| Process::PowerLaw { alpha, symmetric: false })
            .collect(),
    };
    let configs: Vec<GeneratorConfig> = processes
        .into_iter()
        .enumerate()
        .map(|(k, process)| GeneratorConfig::new(process, length, seed.wrapping_add(k as u64)))
        .collect();
    for cfg in &configs {
        cfg.validate()?;
    }
    Ok(configs)
}

/// Generates a benchmark dataset. `length` is capped at 1000 observations.
pub fn build_dataset(family: Family, n_series: usize, length: usize, seed: u64) -> Result<Vec<TimeSeries>> {
    dataset_configs(family, n_series, length, seed)?
        .iter()
        .map(generate)
        .collect()
}
