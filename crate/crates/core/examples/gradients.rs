// Vector-Jacobian and Jacobian-vector products of the soft operators,
// checked against central finite differences.
//
// `cargo run --example gradients`

use softsort::oracle::{finite_difference_jacobian, relative_error};
use softsort::{soft_rank, soft_sort, Direction, Regularizer};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let theta = [0.8, -0.4, 1.1, 0.2, -1.5];
    let eps = 1.5;
    let n = theta.len();

    let rank = soft_rank(&theta, eps, Regularizer::Entropic, Direction::Descending)?;
    let sort = soft_sort(&theta, eps, Regularizer::Quadratic, Direction::Descending)?;
    println!("soft rank {:?}", rank.values());
    println!("soft sort {:?}", sort.values());

    // gradient of the top soft-sorted value
    let mut u = vec![0.0; n];
    u[0] = 1.0;
    let g = sort.vjp(&u)?;
    println!("∇ soft_sort(θ)_1 = {g:?} (sums to {:.6})", g.iter().sum::<f64>());

    let fd = finite_difference_jacobian(
        |x| soft_rank(x, eps, Regularizer::Entropic, Direction::Descending).unwrap().into_values(),
        &theta,
        1e-6,
    );
    let mut worst = 0.0f64;
    for (i, row) in fd.iter().enumerate() {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        worst = worst.max(relative_error(&rank.vjp(&e)?, row));
    }
    println!("max relative error of the rank Jacobian vs finite differences: {worst:.2e}");
    if worst > 1e-5 {
        return Err("Jacobian mismatch".into());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
