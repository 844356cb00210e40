// Pool adjacent violators on a small non-increasing fit, with both
// regularizers and the block partition it finds.
//
// `cargo run --example isotonic_pav`

use softsort::{solve_isotonic, Regularizer, Wrt};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let s = [1.0, 3.0, 2.0, 0.0];
    let w = [0.0; 4];

    for reg in [Regularizer::Quadratic, Regularizer::Entropic] {
        let sol = solve_isotonic(&s, &w, reg)?;
        println!("{reg}: v = {:?}", sol.v());
        for block in sol.partition().blocks() {
            println!("  block {:?}", block);
        }
        // Jacobian of v with respect to s, one column at a time
        for j in 0..s.len() {
            let mut e = vec![0.0; s.len()];
            e[j] = 1.0;
            println!("  ∂v/∂s_{j} = {:?}", sol.jvp(&e, Wrt::Input)?);
        }
    }

    let sol = solve_isotonic(&s, &w, Regularizer::Quadratic)?;
    if sol.v().iter().zip([2.0, 2.0, 2.0, 0.0]).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err("unexpected quadratic solution".into());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
