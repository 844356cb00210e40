#[allow(dead_code)]
mod soft_rank_basics {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/soft_rank_basics.rs"));
}

#[test]
fn soft_rank_basics_runs() {
    soft_rank_basics::run_example().expect("soft_rank_basics example should run");
}

#[allow(dead_code)]
mod isotonic_pav {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/isotonic_pav.rs"));
}

#[test]
fn isotonic_pav_runs() {
    isotonic_pav::run_example().expect("isotonic_pav example should run");
}

#[allow(dead_code)]
mod permutahedron_projection {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/permutahedron_projection.rs"));
}

#[test]
fn permutahedron_projection_runs() {
    permutahedron_projection::run_example().expect("permutahedron_projection example should run");
}

#[allow(dead_code)]
mod gradients {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gradients.rs"));
}

#[test]
fn gradients_runs() {
    gradients::run_example().expect("gradients example should run");
}

#[allow(dead_code)]
mod spearman_label_ranking {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spearman_label_ranking.rs"));
}

#[test]
fn spearman_label_ranking_runs() {
    spearman_label_ranking::run_example().expect("spearman_label_ranking example should run");
}

#[allow(dead_code)]
mod robust_regression {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/robust_regression.rs"));
}

#[test]
fn robust_regression_runs() {
    robust_regression::run_example().expect("robust_regression example should run");
}

#[allow(dead_code)]
mod batch_throughput {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/batch_throughput.rs"));
}

#[test]
fn batch_throughput_runs() {
    batch_throughput::run_example().expect("batch_throughput example should run");
}
