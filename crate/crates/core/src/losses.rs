//! Losses built on the soft operators: a differentiable Spearman loss for
//! label ranking and soft least trimmed squares for robust regression.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{check_epsilon, check_finite, check_same_len, Error, Result};
use crate::isotonic::Regularizer;
use crate::operators::{soft_rank, soft_sort, Direction};

/// `½‖target − soft_rank(θ)‖²` and its gradient with respect to θ.
///
/// `target` holds 1-based descending ranks (rank 1 for the most relevant
/// label); non-integer targets inside `[1, n]` are accepted.
pub fn soft_spearman_loss(
    target: &[f64],
    theta: &[f64],
    epsilon: f64,
    regularizer: Regularizer,
) -> Result<(f64, Vec<f64>)> {
    check_same_len(target, theta)?;
    check_finite(target)?;
    let n = target.len() as f64;
    if let Some(index) = target.iter().position(|&t| !(1.0..=n).contains(&t)) {
        return Err(Error::TargetOutOfRange {
            index,
            value: target[index],
            n: target.len(),
        });
    }
    let ranks = soft_rank(theta, epsilon, regularizer, Direction::Descending)?;
    let residual: Vec<f64> = ranks.values().iter().zip(target).map(|(r, t)| r - t).collect();
    let value = 0.5 * residual.iter().map(|r| r * r).sum::<f64>();
    let grad = ranks.vjp(&residual)?;
    Ok((value, grad))
}

/// Trimming window of soft least trimmed squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimSpec {
    /// Number of largest losses discarded.
    pub k: usize,
    pub epsilon: f64,
    pub regularizer: Regularizer,
}

impl TrimSpec {
    pub fn new(k: usize, epsilon: f64, regularizer: Regularizer) -> Self {
        TrimSpec {
            k,
            epsilon,
            regularizer,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        check_epsilon(self.epsilon)?;
        if self.k >= n {
            return Err(Error::TrimOutOfRange { k: self.k, n });
        }
        Ok(())
    }
}

/// Mean of the `n − k` smallest soft-sorted losses, and its gradient with
/// respect to the loss vector.
///
/// Losses are soft-sorted in descending order and the first `k` entries
/// dropped. As ε → 0 this is the hard trimmed mean; as ε → ∞ (quadratic) it
/// tends to the plain mean.
pub fn soft_lts_loss(losses: &[f64], spec: &TrimSpec) -> Result<(f64, Vec<f64>)> {
    if losses.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = losses.len();
    spec.validate(n)?;
    let sorted = soft_sort(losses, spec.epsilon, spec.regularizer, Direction::Descending)?;
    let weight = 1.0 / (n - spec.k) as f64;
    let value = sorted.values()[spec.k..].iter().sum::<f64>() * weight;
    let mut u = vec![0.0; n];
    u[spec.k..].fill(weight);
    let grad = sorted.vjp(&u)?;
    Ok((value, grad))
}

/// Hard trimmed mean: the mean of the `n − k` smallest losses.
pub fn hard_trimmed_mean(losses: &[f64], k: usize) -> Result<f64> {
    if k >= losses.len() {
        return Err(Error::TrimOutOfRange { k, n: losses.len() });
    }
    check_finite(losses)?;
    let mut sorted = losses.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let kept = losses.len() - k;
    Ok(sorted[..kept].iter().sum::<f64>() / kept as f64)
}

fn check_design(features: &[Vec<f64>], targets: &[f64]) -> Result<usize> {
    if features.len() != targets.len() {
        return Err(Error::LengthMismatch(features.len(), targets.len()));
    }
    let Some(first) = features.first() else {
        return Err(Error::EmptyInput);
    };
    let d = first.len();
    for (row, x) in features.iter().enumerate() {
        if x.len() != d {
            return Err(Error::RaggedBatch {
                row,
                len: x.len(),
                expected: d,
            });
        }
        check_finite(x)?;
    }
    check_finite(targets)?;
    Ok(d)
}

pub fn predict(features: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    features
        .iter()
        .map(|x| x.iter().zip(weights).map(|(a, b)| a * b).sum())
        .collect()
}

/// Per-sample squared losses `½(y_i − ⟨w, x_i⟩)²`.
pub fn squared_losses(features: &[Vec<f64>], targets: &[f64], weights: &[f64]) -> Vec<f64> {
    predict(features, weights)
        .iter()
        .zip(targets)
        .map(|(p, y)| 0.5 * (y - p).powi(2))
        .collect()
}

/// Soft LTS objective of a linear model and its gradient in the weights.
pub fn lts_objective(
    features: &[Vec<f64>],
    targets: &[f64],
    weights: &[f64],
    spec: &TrimSpec,
) -> Result<(f64, Vec<f64>)> {
    let d = check_design(features, targets)?;
    if weights.len() != d {
        return Err(Error::LengthMismatch(weights.len(), d));
    }
    let residuals: Vec<f64> = predict(features, weights)
        .iter()
        .zip(targets)
        .map(|(p, y)| p - y)
        .collect();
    let losses: Vec<f64> = residuals.iter().map(|r| 0.5 * r * r).collect();
    let (value, dloss) = soft_lts_loss(&losses, spec)?;
    let mut grad = vec![0.0; d];
    for ((x, r), g) in features.iter().zip(&residuals).zip(&dloss) {
        for (gj, xj) in grad.iter_mut().zip(x) {
            *gj += g * r * xj;
        }
    }
    Ok((value, grad))
}

/// Fits a linear model by fixed-step gradient descent on the soft LTS
/// objective, starting from zero weights. Deterministic.
///
/// No intercept is added; append a constant feature for one.
pub fn lts_demo_fit(
    features: &[Vec<f64>],
    targets: &[f64],
    spec: &TrimSpec,
    steps: usize,
    step_size: f64,
) -> Result<Vec<f64>> {
    let d = check_design(features, targets)?;
    if steps == 0 {
        return Err(Error::Invalid("steps must be at least 1".into()));
    }
    if !(step_size.is_finite() && step_size > 0.0) {
        return Err(Error::Invalid(format!("step size must be positive: {step_size}")));
    }
    spec.validate(targets.len())?;
    let mut weights = vec![0.0; d];
    for _ in 0..steps {
        let (_, grad) = lts_objective(features, targets, &weights, spec)?;
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= step_size * g;
        }
    }
    Ok(weights)
}

/// Ordinary least squares by SVD.
pub fn ols_fit(features: &[Vec<f64>], targets: &[f64]) -> Result<Vec<f64>> {
    let d = check_design(features, targets)?;
    let flat: Vec<f64> = features.iter().flatten().copied().collect();
    let x = DMatrix::from_row_slice(features.len(), d, &flat);
    let y = DVector::from_column_slice(targets);
    let solution = x
        .svd(true, true)
        .solve(&y, 1e-12)
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(solution.iter().copied().collect())
}

/// Coefficient of determination of `predicted` against `actual`.
pub fn r2_score(actual: &[f64], predicted: &[f64]) -> f64 {
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    let ss_tot: f64 = actual.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = actual.iter().zip(predicted).map(|(y, p)| (y - p).powi(2)).sum();
    1.0 - ss_res / ss_tot
}

/// Settings for [`synthetic_regression`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticConfig {
    pub n_train: usize,
    pub n_test: usize,
    pub n_features: usize,
    /// Standard deviation of the clean label noise.
    pub noise: f64,
    /// Fraction of training labels corrupted.
    pub outlier_fraction: f64,
    /// Corrupted labels get `y ← y + e`, `e ~ N(0, outlier_scale · std(y))`.
    pub outlier_scale: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_train: 200,
            n_test: 200,
            n_features: 5,
            noise: 0.5,
            outlier_fraction: 0.0,
            outlier_scale: 5.0,
            seed: 0,
        }
    }
}

/// A train/test split of a linear problem. Every feature row ends with a
/// constant 1 for the intercept. Test labels are never corrupted.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData {
    pub x_train: Vec<Vec<f64>>,
    pub y_train: Vec<f64>,
    pub x_test: Vec<Vec<f64>>,
    pub y_test: Vec<f64>,
    pub true_weights: Vec<f64>,
    pub outliers: Vec<usize>,
}

pub fn synthetic_regression(config: &SyntheticConfig) -> Result<RegressionData> {
    if !(0.0..1.0).contains(&config.outlier_fraction) {
        return Err(Error::Invalid(format!(
            "outlier fraction must lie in [0, 1): {}",
            config.outlier_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let d = config.n_features + 1;
    let true_weights: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let noise = Normal::new(0.0, config.noise).map_err(|e| Error::Invalid(e.to_string()))?;
    let draw = |rng: &mut ChaCha8Rng, count: usize| {
        let xs: Vec<Vec<f64>> = (0..count)
            .map(|_| {
                let mut x: Vec<f64> = (0..config.n_features).map(|_| rng.sample(StandardNormal)).collect();
                x.push(1.0);
                x
            })
            .collect();
        let ys: Vec<f64> = predict(&xs, &true_weights)
            .into_iter()
            .map(|y| y + noise.sample(rng))
            .collect();
        (xs, ys)
    };
    let (x_train, mut y_train) = draw(&mut rng, config.n_train);
    let (x_test, y_test) = draw(&mut rng, config.n_test);

    let n_out = (config.outlier_fraction * config.n_train as f64).round() as usize;
    let mut order: Vec<usize> = (0..config.n_train).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut outliers = order[..n_out].to_vec();
    outliers.sort_unstable();
    if n_out > 0 {
        let mean = y_train.iter().sum::<f64>() / y_train.len() as f64;
        let std = (y_train.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / y_train.len() as f64).sqrt();
        let corruption =
            Normal::new(0.0, config.outlier_scale * std).map_err(|e| Error::Invalid(e.to_string()))?;
        for &i in &outliers {
            y_train[i] += corruption.sample(&mut rng);
        }
    }
    Ok(RegressionData {
        x_train,
        y_train,
        x_test,
        y_test,
        true_weights,
        outliers,
    })
}
