//! `softsort lts-demo`: robust linear regression with soft least trimmed
//! squares on synthetic data with corrupted labels.

use std::io::Write;

use super::CliError;
use crate::losses::{
    hard_trimmed_mean, lts_demo_fit, lts_objective, ols_fit, predict, r2_score, squared_losses,
    synthetic_regression, RegressionData, SyntheticConfig, TrimSpec,
};
use crate::regularizer::Regularizer;

#[derive(Debug, Clone, PartialEq)]
pub struct LtsDemoConfig {
    pub outlier_fraction: f64,
    /// Trimmed count is `k = ⌈k_fraction · n_train⌉`.
    pub k_fraction: f64,
    pub seed: u64,
    pub epsilons: Vec<f64>,
    pub regularizer: Regularizer,
    pub steps: usize,
    pub step_size: f64,
    pub data: SyntheticConfig,
}

impl Default for LtsDemoConfig {
    fn default() -> Self {
        LtsDemoConfig {
            outlier_fraction: 0.3,
            k_fraction: 0.3,
            seed: 0,
            epsilons: vec![1e-6, 1e-3, 1.0, 1e3, 1e6, 1e9],
            regularizer: Regularizer::Quadratic,
            steps: 500,
            step_size: 0.5,
            data: SyntheticConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LtsRow {
    pub epsilon: f64,
    /// Soft LTS objective at the weights fitted with this ε.
    pub train_objective: f64,
    /// Soft LTS objective at the fixed OLS weights, for comparing ε values
    /// on a common point.
    pub fixed_objective: f64,
    /// R² of the fitted weights on the uncorrupted test split.
    pub test_r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LtsDemoReport {
    pub k: usize,
    pub n_train: usize,
    pub rows: Vec<LtsRow>,
    pub ols_test_r2: f64,
    /// Soft LTS fit with `k = 0` (plain least squares by gradient descent).
    pub untrimmed_test_r2: f64,
    /// Hard trimmed mean of the squared losses at the fixed weights.
    pub hard_lts_objective: f64,
    /// Plain mean of the squared losses at the fixed weights.
    pub ls_objective: f64,
}

impl LtsDemoReport {
    /// Best clean-test R² across the ε sweep.
    pub fn best_test_r2(&self) -> f64 {
        self.rows.iter().map(|r| r.test_r2).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn summary(&self) -> String {
        format!(
            "n_train={} k={} best soft-LTS test R²={:.4} untrimmed R²={:.4} OLS R²={:.4} hard-LTS objective={:.6} LS objective={:.6}",
            self.n_train,
            self.k,
            self.best_test_r2(),
            self.untrimmed_test_r2,
            self.ols_test_r2,
            self.hard_lts_objective,
            self.ls_objective
        )
    }
}

fn check_fraction(name: &str, value: f64) -> Result<(), CliError> {
    if (0.0..1.0).contains(&value) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must lie in [0, 1), got {value}")))
    }
}

pub fn run_lts_demo(config: &LtsDemoConfig) -> Result<LtsDemoReport, CliError> {
    check_fraction("--outlier-fraction", config.outlier_fraction)?;
    check_fraction("--k-fraction", config.k_fraction)?;
    if config.epsilons.is_empty() || config.epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(CliError::Usage("--epsilon values must be positive and finite".into()));
    }
    let data_config = SyntheticConfig {
        outlier_fraction: config.outlier_fraction,
        seed: config.seed,
        ..config.data
    };
    let lib = |e: crate::Error| CliError::Data(e.to_string());
    let RegressionData {
        x_train,
        y_train,
        x_test,
        y_test,
        ..
    } = synthetic_regression(&data_config).map_err(lib)?;
    let n = y_train.len();
    let k = ((config.k_fraction * n as f64).ceil() as usize).min(n.saturating_sub(1));

    let fixed = ols_fit(&x_train, &y_train).map_err(lib)?;
    let ols_test_r2 = r2_score(&y_test, &predict(&x_test, &fixed));
    let fixed_losses = squared_losses(&x_train, &y_train, &fixed);
    let hard_lts_objective = hard_trimmed_mean(&fixed_losses, k).map_err(lib)?;
    let ls_objective = fixed_losses.iter().sum::<f64>() / n as f64;

    let fit = |k: usize, epsilon: f64| -> Result<(Vec<f64>, TrimSpec), CliError> {
        let spec = TrimSpec::new(k, epsilon, config.regularizer);
        let w = lts_demo_fit(&x_train, &y_train, &spec, config.steps, config.step_size).map_err(lib)?;
        Ok((w, spec))
    };

    let mut rows = Vec::with_capacity(config.epsilons.len());
    for &epsilon in &config.epsilons {
        let (w, spec) = fit(k, epsilon)?;
        let (train_objective, _) = lts_objective(&x_train, &y_train, &w, &spec).map_err(lib)?;
        let (fixed_objective, _) = lts_objective(&x_train, &y_train, &fixed, &spec).map_err(lib)?;
        rows.push(LtsRow {
            epsilon,
            train_objective,
            fixed_objective,
            test_r2: r2_score(&y_test, &predict(&x_test, &w)),
        });
    }
    let (w0, _) = fit(0, 1.0)?;
    Ok(LtsDemoReport {
        k,
        n_train: n,
        rows,
        ols_test_r2,
        untrimmed_test_r2: r2_score(&y_test, &predict(&x_test, &w0)),
        hard_lts_objective,
        ls_objective,
    })
}

pub fn write_lts_csv<W: Write>(out: W, report: &LtsDemoReport) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Data(e.to_string());
    writer
        .write_record(["epsilon", "train_objective", "fixed_objective", "test_r2"])
        .map_err(csv_err)?;
    for r in &report.rows {
        writer
            .write_record([
                r.epsilon.to_string(),
                r.train_objective.to_string(),
                r.fixed_objective.to_string(),
                r.test_r2.to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_endpoints_match_hard_lts_and_ls() {
        let report = run_lts_demo(&LtsDemoConfig::default()).unwrap();
        let first = report.rows.first().unwrap().fixed_objective;
        let last = report.rows.last().unwrap().fixed_objective;
        assert!((first - report.hard_lts_objective).abs() <= 1e-6 * report.hard_lts_objective);
        assert!((last - report.ls_objective).abs() <= 1e-6 * report.ls_objective);
        assert!(report.best_test_r2() > report.untrimmed_test_r2);
    }

    #[test]
    fn clean_data_favors_large_epsilon() {
        let report = run_lts_demo(&LtsDemoConfig {
            outlier_fraction: 0.0,
            ..LtsDemoConfig::default()
        })
        .unwrap();
        let best_large = report
            .rows
            .iter()
            .filter(|r| r.epsilon >= 1e3)
            .map(|r| r.test_r2)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((best_large - report.ols_test_r2).abs() <= 0.02);
    }

    #[test]
    fn fractions_are_validated() {
        for (o, k) in [(1.0, 0.3), (-0.1, 0.3), (0.3, 1.0)] {
            let config = LtsDemoConfig {
                outlier_fraction: o,
                k_fraction: k,
                ..LtsDemoConfig::default()
            };
            assert!(matches!(run_lts_demo(&config), Err(CliError::Usage(_))));
        }
    }
}
