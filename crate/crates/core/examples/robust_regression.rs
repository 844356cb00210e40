// Soft least trimmed squares on data with 30% corrupted labels, compared
// with ordinary least squares.
//
// `cargo run --example robust_regression`

use softsort::cli::{run_lts_demo, LtsDemoConfig};
use softsort::losses::{hard_trimmed_mean, soft_lts_loss, TrimSpec};
use softsort::Regularizer;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // interpolation between the trimmed mean and the mean
    let losses = [4.0, 0.5, 9.0, 1.5, 0.2, 7.0];
    let k = 2;
    println!("hard trimmed mean {}", hard_trimmed_mean(&losses, k)?);
    for eps in [1e-3, 1.0, 10.0, 1e6] {
        let (value, _) = soft_lts_loss(&losses, &TrimSpec::new(k, eps, Regularizer::Quadratic))?;
        println!("soft LTS at ε = {eps:>7}: {value:.6}");
    }
    println!("plain mean {}", losses.iter().sum::<f64>() / losses.len() as f64);

    let report = run_lts_demo(&LtsDemoConfig::default())?;
    for row in &report.rows {
        println!("ε = {:>8e}: train objective {:>10.4}, clean test R² {:.4}", row.epsilon, row.train_objective, row.test_r2);
    }
    println!("{}", report.summary());
    if report.best_test_r2() <= report.untrimmed_test_r2 {
        return Err("trimming should help with 30% outliers".into());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
