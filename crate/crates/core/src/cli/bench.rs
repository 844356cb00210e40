//! `softsort bench`: wall-clock timing of batched soft operators.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::CliError;
use crate::operators::{batched, Direction, OpKind, SoftOpSpec};
use crate::regularizer::Regularizer;

pub const MIN_REPS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub batch: usize,
    pub reps: usize,
    pub seed: u64,
    pub epsilon: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![100, 500, 1000, 2000, 5000],
            batch: 128,
            reps: 5,
            seed: 0,
            epsilon: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub batch: usize,
    pub operator: String,
    pub regularizer: String,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub reps: usize,
}

/// `batch × n` standard normal scores, identical for identical seeds.
pub fn normal_batch(n: usize, batch: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..batch)
        .map(|_| (0..n).map(|_| rng.sample(StandardNormal)).collect())
        .collect()
}

fn validate(config: &BenchConfig) -> Result<(), CliError> {
    if config.reps < MIN_REPS {
        return Err(CliError::Usage(format!("--reps must be at least {MIN_REPS}, got {}", config.reps)));
    }
    if config.batch == 0 {
        return Err(CliError::Usage("--batch must be at least 1".into()));
    }
    if config.sizes.is_empty() || config.sizes.contains(&0) {
        return Err(CliError::Usage("--sizes must be a non-empty list of positive integers".into()));
    }
    if !(config.epsilon.is_finite() && config.epsilon > 0.0) {
        return Err(CliError::Usage(format!("--epsilon must be positive, got {}", config.epsilon)));
    }
    Ok(())
}

/// Times the forward pass of soft rank and soft sort under both regularizers
/// for every size. One untimed warmup run precedes the timed repetitions.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>, CliError> {
    validate(config)?;
    let mut records = Vec::new();
    for (idx, &n) in config.sizes.iter().enumerate() {
        let rows = normal_batch(n, config.batch, config.seed.wrapping_add(idx as u64));
        for (kind, name) in [(OpKind::Rank, "rank"), (OpKind::Sort, "sort")] {
            for reg in [Regularizer::Quadratic, Regularizer::Entropic] {
                let spec = SoftOpSpec::new(kind, config.epsilon, reg, Direction::Descending);
                batched(&spec, &rows).map_err(|e| CliError::Data(e.to_string()))?;
                let mut times = Vec::with_capacity(config.reps);
                for _ in 0..config.reps {
                    let start = Instant::now();
                    let out = batched(&spec, &rows).map_err(|e| CliError::Data(e.to_string()))?;
                    times.push(start.elapsed().as_secs_f64() * 1e3);
                    std::hint::black_box(out);
                }
                let mean = times.iter().sum::<f64>() / times.len() as f64;
                let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (times.len() - 1) as f64;
                records.push(BenchRecord {
                    n,
                    batch: config.batch,
                    operator: name.to_string(),
                    regularizer: reg.as_str().to_string(),
                    mean_ms: mean,
                    std_ms: var.sqrt(),
                    reps: config.reps,
                });
            }
        }
    }
    Ok(records)
}

pub fn write_bench_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Data(e.to_string());
    writer
        .write_record(["n", "batch", "operator", "regularizer", "mean_ms", "std_ms", "reps"])
        .map_err(csv_err)?;
    for r in records {
        writer
            .write_record([
                r.n.to_string(),
                r.batch.to_string(),
                r.operator.clone(),
                r.regularizer.clone(),
                format!("{:.4}", r.mean_ms),
                format!("{:.4}", r.std_ms),
                r.reps.to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}
