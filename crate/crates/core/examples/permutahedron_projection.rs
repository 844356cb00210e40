// Projections onto the permutahedron, the ε thresholds that bracket the
// exact and fully pooled regimes, and their closed forms.
//
// `cargo run --example permutahedron_projection`

use softsort::oracle::in_permutahedron;
use softsort::{epsilon_max, epsilon_min, limit_projection, project, Permutation, Regime, Regularizer};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let w = [3.0, 2.0, 1.0];
    for z in [[-2.9, -0.1, -1.2], [0.3, 0.1, 0.2], [0.0, 0.0, 0.0]] {
        let (y, ctx) = project(&z, &w, Regularizer::Quadratic)?;
        println!(
            "P_Q({z:?}) = {y:?}, blocks {:?}, inside P(w): {}",
            ctx.solution().partition().starts(),
            in_permutahedron(&y, &w, 1e-9)
        );
    }

    let z = [0.4, -1.3, 2.2, 0.9];
    let rho = [4.0, 3.0, 2.0, 1.0];
    let s = Permutation::argsort_descending(&z).gather(&z);
    let (lo, hi) = (epsilon_min(&s, &rho)?, epsilon_max(&s, &rho)?);
    println!("z = {z:?}: ε_min = {lo}, ε_max = {hi}");

    for (eps, regime) in [(0.5 * lo, Regime::Small), (10.0 * hi, Regime::Large)] {
        let scaled: Vec<f64> = z.iter().map(|x| x / eps).collect();
        let (pav, _) = project(&scaled, &rho, Regularizer::Quadratic)?;
        let closed = limit_projection(&z, &rho, eps, Regularizer::Quadratic, regime)?;
        println!("ε = {eps:.4} ({regime:?}): PAV {pav:?}");
        println!("{:>22} closed form {closed:?}", "");
        if pav.iter().zip(&closed).any(|(a, b)| (a - b).abs() > 1e-9) {
            return Err("closed form disagrees with PAV".into());
        }
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
