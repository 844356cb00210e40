// Soft ranks and soft sorts at a few regularization strengths.
//
// `cargo run --example soft_rank_basics`

use softsort::{hard_rank, soft_rank, soft_rank_kl_direct, soft_sort, Direction, Regularizer};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let theta = [2.9, 0.1, 1.2];
    println!("θ = {theta:?}, hard ranks {:?}", hard_rank(&theta, Direction::Descending)?);

    for eps in [0.1, 1.0, 10.0, 100.0] {
        let q = soft_rank(&theta, eps, Regularizer::Quadratic, Direction::Descending)?;
        let e = soft_rank(&theta, eps, Regularizer::Entropic, Direction::Descending)?;
        let kl = soft_rank_kl_direct(&theta, eps, Direction::Descending)?;
        println!("ε = {eps:>5}: rank_q {:?}", rounded(q.values()));
        println!("           rank_e {:?}", rounded(e.values()));
        println!("           rank_kl {:?}", rounded(kl.values()));
    }

    let s = soft_sort(&theta, 1.0, Regularizer::Quadratic, Direction::Ascending)?;
    println!("ascending soft sort at ε = 1: {:?}", rounded(s.values()));

    // the exact regime reproduces the hard ranks
    let r = soft_rank(&theta, 1.0, Regularizer::Quadratic, Direction::Descending)?;
    let hard: Vec<f64> = hard_rank(&theta, Direction::Descending)?.into_iter().map(|r| r as f64).collect();
    if r.values().iter().zip(&hard).any(|(a, b)| (a - b).abs() > 1e-9) {
        return Err("soft rank at ε = 1 should equal the hard ranks".into());
    }
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
