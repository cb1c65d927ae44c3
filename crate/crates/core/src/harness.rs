//! Synthetic sources, mixing, and the repeated-run benchmark loop.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fastica::{self, FastIcaConfig};
use crate::metrics;
use crate::nonlinearity::NonlinearityKind;
use crate::signal::{MixingMatrix, SignalMatrix};

/// Mixing draws with `|det|` at or below this are rejected.
pub const MIN_RANDOM_DETERMINANT: f64 = 0.01;
const MAX_MIXING_DRAWS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceKind {
    Sine,
    Sawtooth,
    Square,
    UniformNoise,
    LaplacianNoise,
}

impl SourceKind {
    pub fn is_periodic(self) -> bool {
        matches!(
            self,
            SourceKind::Sine | SourceKind::Sawtooth | SourceKind::Square
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            SourceKind::Sine => "sine",
            SourceKind::Sawtooth => "sawtooth",
            SourceKind::Square => "square",
            SourceKind::UniformNoise => "uniform",
            SourceKind::LaplacianNoise => "laplacian",
        }
    }
}

/// Recipe for one synthetic source row.
///
/// Textual form: `sine:100`, `sawtooth:173`, `square:64`, `uniform:42`,
/// `laplacian:7`. The number is the period for periodic kinds and the seed
/// for noise kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub period_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl SourceSpec {
    pub fn sine(period: usize) -> Self {
        Self::periodic(SourceKind::Sine, period)
    }

    pub fn sawtooth(period: usize) -> Self {
        Self::periodic(SourceKind::Sawtooth, period)
    }

    pub fn square(period: usize) -> Self {
        Self::periodic(SourceKind::Square, period)
    }

    pub fn uniform_noise(seed: u64) -> Self {
        Self::noise(SourceKind::UniformNoise, seed)
    }

    pub fn laplacian_noise(seed: u64) -> Self {
        Self::noise(SourceKind::LaplacianNoise, seed)
    }

    fn periodic(kind: SourceKind, period: usize) -> Self {
        Self {
            kind,
            period_samples: Some(period),
            seed: None,
        }
    }

    fn noise(kind: SourceKind, seed: u64) -> Self {
        Self {
            kind,
            period_samples: None,
            seed: Some(seed),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.kind.is_periodic(), self.period_samples, self.seed) {
            (true, Some(p), None) if p >= 2 => Ok(()),
            (true, Some(p), None) => Err(Error::argument(format!(
                "{} period must be at least 2 samples, got {p}",
                self.kind.name()
            ))),
            (false, None, Some(_)) => Ok(()),
            _ => Err(Error::argument(format!(
                "{} needs {} only",
                self.kind.name(),
                if self.kind.is_periodic() {
                    "a period"
                } else {
                    "a seed"
                }
            ))),
        }
    }

    fn raw_row(&self, n: usize) -> Vec<f64> {
        match self.kind {
            SourceKind::Sine => {
                let p = self.period_samples.unwrap_or(2) as f64;
                (0..n)
                    .map(|i| (std::f64::consts::TAU * i as f64 / p).sin())
                    .collect()
            }
            SourceKind::Sawtooth => {
                let p = self.period_samples.unwrap_or(2);
                (0..n)
                    .map(|i| 2.0 * (i % p) as f64 / p as f64 - 1.0)
                    .collect()
            }
            SourceKind::Square => {
                let p = self.period_samples.unwrap_or(2);
                (0..n)
                    .map(|i| if 2 * (i % p) < p { 1.0 } else { -1.0 })
                    .collect()
            }
            SourceKind::UniformNoise => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or_default());
                (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
            }
            SourceKind::LaplacianNoise => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.unwrap_or_default());
                (0..n)
                    .map(|_| {
                        // inverse CDF; u = -0.5 would give -inf, so keep u in (-0.5, 0.5)
                        let u: f64 = loop {
                            let u = rng.random_range(-0.5..0.5);
                            if u > -0.5 {
                                break u;
                            }
                        };
                        -u.signum() * (1.0 - 2.0 * u.abs()).ln()
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.period_samples, self.seed) {
            (Some(p), _) => write!(f, "{}:{p}", self.kind.name()),
            (None, Some(s)) => write!(f, "{}:{s}", self.kind.name()),
            (None, None) => f.write_str(self.kind.name()),
        }
    }
}

impl FromStr for SourceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = s.split_once(':').ok_or_else(|| {
            Error::argument(format!("source spec {s:?} must look like kind:number"))
        })?;
        let parse_num = || {
            arg.parse::<u64>()
                .map_err(|_| Error::argument(format!("bad number {arg:?} in source spec {s:?}")))
        };
        let spec = match name {
            "sine" => SourceSpec::sine(parse_num()? as usize),
            "sawtooth" => SourceSpec::sawtooth(parse_num()? as usize),
            "square" => SourceSpec::square(parse_num()? as usize),
            "uniform" => SourceSpec::uniform_noise(parse_num()?),
            "laplacian" => SourceSpec::laplacian_noise(parse_num()?),
            other => {
                return Err(Error::argument(format!(
                    "unknown source kind {other:?} (expected sine, sawtooth, square, uniform or laplacian)"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn standardize(row: &mut [f64]) -> Result<()> {
    let n = row.len() as f64;
    let mean = row.iter().sum::<f64>() / n;
    row.iter_mut().for_each(|v| *v -= mean);
    let var = row.iter().map(|v| v * v).sum::<f64>() / n;
    // raw rows have unit-scale amplitude, so this only catches constant rows
    if var <= 1e-20 {
        return Err(Error::argument("generated source has zero variance"));
    }
    let sd = var.sqrt();
    row.iter_mut().for_each(|v| *v /= sd);
    // second pass removes the residual mean left by rounding
    let mean = row.iter().sum::<f64>() / n;
    row.iter_mut().for_each(|v| *v -= mean);
    Ok(())
}

/// One standardized (zero-mean, unit-variance) row per spec.
pub fn gen_sources(specs: &[SourceSpec], n: usize) -> Result<SignalMatrix> {
    if n < 2 {
        return Err(Error::argument(format!("need at least 2 samples, got {n}")));
    }
    if specs.is_empty() {
        return Err(Error::argument("no source specs given"));
    }
    let mut rows = Vec::with_capacity(specs.len());
    for spec in specs {
        spec.validate()?;
        let mut row = spec.raw_row(n);
        standardize(&mut row)
            .map_err(|_| Error::argument(format!("source {spec} is constant over {n} samples")))?;
        rows.push(row);
    }
    SignalMatrix::from_rows(&rows)
}

/// `x = A s`.
pub fn mix(sources: &SignalMatrix, a: &MixingMatrix) -> Result<SignalMatrix> {
    if a.size() != sources.channels() {
        return Err(Error::argument(format!(
            "{}x{} mixing matrix for {} sources",
            a.size(),
            a.size(),
            sources.channels()
        )));
    }
    if !a.is_invertible() {
        return Err(Error::argument(format!(
            "mixing matrix is singular (det = {:e})",
            a.determinant()
        )));
    }
    SignalMatrix::new(a.as_matrix() * sources.as_matrix())
}

/// Entries uniform on `[0, 1]`, redrawn until `|det| > 0.01`.
pub fn random_mixing_matrix(m: usize, seed: u64) -> Result<MixingMatrix> {
    if m < 2 {
        return Err(Error::argument(format!(
            "random mixing matrices need m >= 2, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_MIXING_DRAWS {
        let a = DMatrix::<f64>::from_fn(m, m, |_, _| rng.random_range(0.0..=1.0));
        if a.determinant().abs() > MIN_RANDOM_DETERMINANT {
            return MixingMatrix::new(a);
        }
    }
    Err(Error::Generation(format!(
        "{MAX_MIXING_DRAWS} consecutive draws had |det| <= {MIN_RANDOM_DETERMINANT}"
    )))
}

/// The fixed 3x3 mixing matrix of the desk-scale benchmark.
pub fn reference_mixing_matrix() -> MixingMatrix {
    MixingMatrix::from_rows(&[
        vec![0.1946, 0.8345, 0.1477],
        vec![0.2252, 0.7008, 0.2098],
        vec![0.0967, 0.8110, 0.7473],
    ])
    .expect("static 3x3 matrix")
}

/// Sources of the desk-scale benchmark: sine (period 100), sawtooth
/// (period 173) and uniform noise (seed 42).
pub fn reference_source_specs() -> [SourceSpec; 3] {
    [
        SourceSpec::sine(100),
        SourceSpec::sawtooth(173),
        SourceSpec::uniform_noise(42),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub nonlinearity: NonlinearityKind,
    pub c_ave: f64,
    pub t_ave_seconds: f64,
    /// Mean over repeats of the iterations summed across components.
    pub mean_iterations: f64,
    /// Fraction of repeats in which every component converged.
    pub convergence_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
    pub repeats: usize,
    pub experiment_label: String,
}

impl BenchmarkReport {
    pub fn row(&self, kind: NonlinearityKind) -> Option<&BenchmarkRow> {
        self.rows.iter().find(|r| r.nonlinearity == kind)
    }
}

/// Outcome of a single benchmark repeat.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub c_ave: f64,
    pub seconds: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Runs one separation and scores it. Failures are reported as a
/// non-converged run with `c_ave = 0`.
pub fn run_once(sources: &SignalMatrix, mixed: &SignalMatrix, config: &FastIcaConfig) -> RunRecord {
    let start = Instant::now();
    let outcome = fastica::run(mixed, config).and_then(|res| {
        let report = metrics::match_sources(sources, &res.estimates)?;
        Ok((res, report))
    });
    match outcome {
        Ok((res, report)) => RunRecord {
            c_ave: report.c_ave,
            seconds: res.elapsed_seconds,
            iterations: res.total_iterations(),
            converged: res.all_converged(),
        },
        Err(_) => RunRecord {
            c_ave: 0.0,
            seconds: start.elapsed().as_secs_f64(),
            iterations: 0,
            converged: false,
        },
    }
}

/// Averages accuracy and runtime over `repeats` seeded runs per kind,
/// using default epsilon and iteration cap.
pub fn benchmark(
    sources: &SignalMatrix,
    a: &MixingMatrix,
    kinds: &[NonlinearityKind],
    repeats: usize,
    base_seed: u64,
) -> Result<BenchmarkReport> {
    let template = FastIcaConfig::new(sources.channels(), NonlinearityKind::Sin);
    benchmark_with_config(sources, a, kinds, repeats, base_seed, &template)
}

/// Like [`benchmark`], taking epsilon and the iteration cap from `template`.
/// The template's nonlinearity, component count and seed are overridden.
pub fn benchmark_with_config(
    sources: &SignalMatrix,
    a: &MixingMatrix,
    kinds: &[NonlinearityKind],
    repeats: usize,
    base_seed: u64,
    template: &FastIcaConfig,
) -> Result<BenchmarkReport> {
    if repeats == 0 {
        return Err(Error::argument("repeats must be at least 1"));
    }
    let mixed = mix(sources, a)?;
    let reps = repeats as f64;
    let mut rows = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let mut c_sum = 0.0;
        let mut t_sum = 0.0;
        let mut it_sum = 0.0;
        let mut converged = 0usize;
        for r in 0..repeats {
            let config = FastIcaConfig {
                nonlinearity: kind,
                components: sources.channels(),
                seed: base_seed.wrapping_add(r as u64),
                ..template.clone()
            };
            let rec = run_once(sources, &mixed, &config);
            c_sum += rec.c_ave;
            t_sum += rec.seconds;
            it_sum += rec.iterations as f64;
            converged += usize::from(rec.converged);
        }
        rows.push(BenchmarkRow {
            nonlinearity: kind,
            c_ave: c_sum / reps,
            t_ave_seconds: t_sum / reps,
            mean_iterations: it_sum / reps,
            convergence_rate: converged as f64 / reps,
        });
    }
    Ok(BenchmarkReport {
        rows,
        repeats,
        experiment_label: format!(
            "{} sources x {} samples",
            sources.channels(),
            sources.samples()
        ),
    })
}
