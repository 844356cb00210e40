mod common;

use common::{rng, sorted_desc, tie_free};
use rand::Rng;
use softsort::oracle::{
    in_permutahedron, isotonic_bruteforce, isotonic_minimax_quadratic, max_abs_error, projection_bruteforce_q,
    OracleReport, Tolerance,
};
use softsort::{Error, Regularizer};

#[test]
fn independent_quadratic_oracles_agree() {
    let mut r = rng(51);
    let mut report = OracleReport::new(Tolerance::Absolute(1e-10));
    for _ in 0..100 {
        let n = r.random_range(1..=10);
        let d: Vec<f64> = (0..n).map(|_| r.random_range(-3.0..3.0)).collect();
        let brute = isotonic_bruteforce(&d, &vec![0.0; n], Regularizer::Quadratic).unwrap();
        report.record(&d, &brute, &isotonic_minimax_quadratic(&d));
    }
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.instances, 100);
}

#[test]
fn frank_wolfe_lands_in_permutahedron() {
    let mut r = rng(52);
    for _ in 0..10 {
        let n = r.random_range(2..=6);
        let z = tie_free(&mut r, n);
        let w = sorted_desc(&tie_free(&mut r, n));
        let y = projection_bruteforce_q(&z, &w).unwrap();
        assert!(in_permutahedron(&y, &w, 1e-9));
    }
}

#[test]
fn frank_wolfe_exact_on_interior_point() {
    // centroid of P(w) projects to itself
    let w = [4.0, 1.0, -2.0];
    let y = projection_bruteforce_q(&[1.0; 3], &w).unwrap();
    assert!(max_abs_error(&y, &[1.0; 3]) < 1e-6);
}

#[test]
fn size_guards() {
    assert!(matches!(
        projection_bruteforce_q(&[0.0; 7], &[0.0; 7]),
        Err(Error::TooLarge { n: 7, max: 6 })
    ));
}
