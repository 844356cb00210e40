// Batched soft ranking with backward passes, and a small timing sweep.
//
// `cargo run --release --example batch_throughput`

use softsort::cli::bench::normal_batch;
use softsort::cli::{run_bench, BenchConfig};
use softsort::{batched_results, batched_vjp, Direction, OpKind, Regularizer, SoftOpSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rows = normal_batch(256, 32, 7);
    let spec = SoftOpSpec::new(OpKind::Rank, 1.0, Regularizer::Quadratic, Direction::Descending);
    let results = batched_results(&spec, &rows)?;
    let cotangents: Vec<Vec<f64>> = results.iter().map(|r| r.values().to_vec()).collect();
    let grads = batched_vjp(&results, &cotangents)?;
    println!("{} rows of length {}; first gradient norm {:.4}", grads.len(), grads[0].len(), norm(&grads[0]));

    let records = run_bench(&BenchConfig {
        sizes: vec![128, 512, 2048],
        batch: 32,
        reps: 3,
        ..BenchConfig::default()
    })?;
    for r in &records {
        println!("n = {:>5} {} {}: {:.3} ms ± {:.3}", r.n, r.operator, r.regularizer, r.mean_ms, r.std_ms);
    }
    Ok(())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
