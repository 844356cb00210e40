// Learning scores whose soft ranks match a target ranking, by gradient
// descent on the soft Spearman loss.
//
// `cargo run --example spearman_label_ranking`

use softsort::{hard_rank, soft_spearman_loss, Direction, Regularizer};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let target = [3.0, 1.0, 4.0, 2.0, 5.0];
    let mut theta = vec![0.0; target.len()];
    let eps = 0.5;

    for step in 0..=200 {
        let (loss, grad) = soft_spearman_loss(&target, &theta, eps, Regularizer::Quadratic)?;
        if step % 40 == 0 {
            println!("step {step:>3}: loss {loss:.6}");
        }
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t -= 0.2 * g;
        }
    }

    let ranks = hard_rank(&theta, Direction::Descending)?;
    println!("learned θ {theta:.3?} → ranks {ranks:?}");
    if ranks.iter().zip(&target).any(|(&r, &t)| r as f64 != t) {
        return Err("target ranking not recovered".into());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
