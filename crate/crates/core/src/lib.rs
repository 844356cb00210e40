//! # softsort
//!
//! Differentiable sorting and ranking in O(n log n) forward and O(n) backward.
//!
//! Soft sort and soft rank are regularized projections onto the permutahedron
//! `P(w)`, the convex hull of all permutations of `w`:
//!
//! ```text
//! soft_sort(θ, ε) = P_Ψ(ρ/ε, sort(θ))
//! soft_rank(θ, ε) = P_Ψ(−θ/ε, ρ)          ρ = (n, n−1, …, 1)
//! ```
//!
//! `Ψ` is either the quadratic regularizer (Euclidean projection) or the
//! entropic one (log-KL projection). Each projection reduces to an isotonic
//! problem solved exactly by pool adjacent violators, and the block partition
//! it produces gives Jacobian-vector products in linear time.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`isotonic`] | Generalized PAV, block Jacobians |
//! | [`projection`] | `P_Q`, `P_E`, ε thresholds, closed-form limits |
//! | [`operators`] | Hard and soft sort/rank, gradients, batching |
//! | [`losses`] | Soft Spearman loss, soft least trimmed squares |
//! | [`oracle`] | Brute-force references for testing |
//! | [`cli`] | Implementation of the `softsort` binary |
//!
//! ```rust
//! use softsort::{soft_rank, Direction, Regularizer};
//!
//! let r = soft_rank(&[2.9, 0.1, 1.2], 1.0, Regularizer::Quadratic, Direction::Descending).unwrap();
//! assert!((r.values()[1] - 3.0).abs() < 1e-12);
//!
//! // gradient of ⟨u, r⟩ with respect to θ
//! let grad = r.vjp(&[1.0, 0.0, 0.0]).unwrap();
//! assert_eq!(grad.len(), 3);
//! ```

pub mod cli;
pub mod error;
pub mod isotonic;
pub mod losses;
pub mod operators;
pub mod oracle;
pub mod projection;
pub mod regularizer;

pub use error::{Error, Result};
pub use isotonic::{
    jvp_isotonic, solve_isotonic, solve_isotonic_entropic, solve_isotonic_quadratic, vjp_isotonic,
    BlockPartition, BlockStats, IsotonicSolution, Regularizer, Wrt,
};
pub use losses::{lts_demo_fit, soft_lts_loss, soft_spearman_loss, TrimSpec};
pub use operators::{
    argsort, batched, batched_results, batched_vjp, hard_rank, hard_sort, jvp_soft, soft_rank,
    soft_rank_kl_direct, soft_sort, vjp_soft, Direction, OpKind, SoftOpResult, SoftOpSpec,
};
pub use projection::{
    epsilon_max, epsilon_min, jvp_projection, limit_projection, project, vjp_projection,
    Permutation, ProjectionContext, Regime,
};
