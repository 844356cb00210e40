//! Hard and soft sorting and ranking.
//!
//! Conventions: sorting is descending by default and ranks are 1-based with
//! rank 1 for the largest entry. Ties are broken by original index (lower
//! index first). Ascending variants are obtained by negation,
//! `−s(−θ)` for sort and `r(−θ)` for rank.
//!
//! ```text
//! soft_sort(θ, ε) = P_Ψ(ρ/ε, sort(θ))
//! soft_rank(θ, ε) = P_Ψ(−θ/ε, ρ)          ρ = (n, n−1, …, 1)
//! ```

use rayon::prelude::*;

use crate::error::{check_epsilon, check_finite, check_same_len, Error, Result};
use crate::isotonic::{Regularizer, Wrt};
use crate::projection::{self, Permutation, ProjectionContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Direction {
    #[default]
    Descending,
    Ascending,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Descending => 1.0,
            Direction::Ascending => -1.0,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "desc" | "descending" => Ok(Direction::Descending),
            "asc" | "ascending" => Ok(Direction::Ascending),
            other => Err(Error::Invalid(format!("unknown direction '{other}'"))),
        }
    }
}

/// Which soft operator produced a [`SoftOpResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Sort,
    Rank,
    /// `exp(P_E(−θ/ε, log ρ))`: KL projection straight onto `P(ρ)`.
    RankKlDirect,
}

/// `ρ = (n, n−1, …, 1)`.
pub fn reversing(n: usize) -> Vec<f64> {
    (0..n).map(|k| (n - k) as f64).collect()
}

/// Descending argsort, stable under ties.
pub fn argsort(theta: &[f64]) -> Result<Permutation> {
    check_finite(theta)?;
    Ok(Permutation::argsort_descending(theta))
}

pub fn hard_sort(theta: &[f64], direction: Direction) -> Result<Vec<f64>> {
    check_finite(theta)?;
    let d = direction.sign();
    let x: Vec<f64> = theta.iter().map(|&t| d * t).collect();
    let perm = Permutation::argsort_descending(&x);
    Ok(perm.forward().iter().map(|&i| d * x[i]).collect())
}

/// 1-based ranks: the inverse of the argsort, plus one.
pub fn hard_rank(theta: &[f64], direction: Direction) -> Result<Vec<usize>> {
    check_finite(theta)?;
    let d = direction.sign();
    let x: Vec<f64> = theta.iter().map(|&t| d * t).collect();
    let perm = Permutation::argsort_descending(&x);
    Ok(perm.inverse().iter().map(|&k| k + 1).collect())
}

/// Forward output of a soft operator, with what is needed for backward.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftOpResult {
    values: Vec<f64>,
    context: ProjectionContext,
    input_permutation: Permutation,
    epsilon: f64,
    regularizer: Regularizer,
    direction: Direction,
    kind: OpKind,
}

/// Combinatorial structure of a forward pass. Jacobians are locally constant
/// (quadratic) or smooth (entropic) wherever this does not change.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpStructure {
    pub input_permutation: Vec<usize>,
    pub sigma: Vec<usize>,
    pub block_starts: Vec<usize>,
}

impl SoftOpResult {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn context(&self) -> &ProjectionContext {
        &self.context
    }

    /// Descending argsort of the (direction-adjusted) input for soft sort;
    /// the identity for soft rank.
    pub fn input_permutation(&self) -> &Permutation {
        &self.input_permutation
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn regularizer(&self) -> Regularizer {
        self.regularizer
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn kind(&self) -> OpKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn structure(&self) -> OpStructure {
        OpStructure {
            input_permutation: self.input_permutation.forward().to_vec(),
            sigma: self.context.sigma().forward().to_vec(),
            block_starts: self.context.solution().partition().starts().to_vec(),
        }
    }

    /// Gradient of `⟨u, values⟩` with respect to θ.
    pub fn vjp(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_same_len(u, &self.values)?;
        match self.kind {
            OpKind::Sort => {
                let g = self.context.vjp(u, Wrt::Weights)?;
                Ok(self.input_permutation.scatter(&g))
            }
            OpKind::Rank => {
                let scale = self.rank_scale();
                let mut g = self.context.vjp(u, Wrt::Input)?;
                g.iter_mut().for_each(|x| *x *= scale);
                Ok(g)
            }
            OpKind::RankKlDirect => {
                let scale = self.rank_scale();
                let weighted: Vec<f64> = u.iter().zip(&self.values).map(|(a, b)| a * b).collect();
                let mut g = self.context.vjp(&weighted, Wrt::Input)?;
                g.iter_mut().for_each(|x| *x *= scale);
                Ok(g)
            }
        }
    }

    /// Directional derivative of `values` along `u` (a perturbation of θ).
    pub fn jvp(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_same_len(u, &self.values)?;
        match self.kind {
            OpKind::Sort => {
                let uw = self.input_permutation.gather(u);
                self.context.jvp(&uw, Wrt::Weights)
            }
            OpKind::Rank => {
                let scale = self.rank_scale();
                let mut t = self.context.jvp(u, Wrt::Input)?;
                t.iter_mut().for_each(|x| *x *= scale);
                Ok(t)
            }
            OpKind::RankKlDirect => {
                let scale = self.rank_scale();
                let t = self.context.jvp(u, Wrt::Input)?;
                Ok(t.iter().zip(&self.values).map(|(a, b)| scale * a * b).collect())
            }
        }
    }

    // d(−d·θ/ε)/dθ
    fn rank_scale(&self) -> f64 {
        -self.direction.sign() / self.epsilon
    }
}

fn validate(theta: &[f64], epsilon: f64) -> Result<()> {
    check_epsilon(epsilon)?;
    if theta.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(theta)
}

/// Soft sort of θ. Descending values are non-increasing; ascending ones
/// non-decreasing.
pub fn soft_sort(theta: &[f64], epsilon: f64, regularizer: Regularizer, direction: Direction) -> Result<SoftOpResult> {
    validate(theta, epsilon)?;
    let n = theta.len();
    let d = direction.sign();
    let x: Vec<f64> = theta.iter().map(|&t| d * t).collect();
    let input_permutation = Permutation::argsort_descending(&x);
    let w = input_permutation.gather(&x);
    let z: Vec<f64> = reversing(n).into_iter().map(|r| r / epsilon).collect();
    check_finite(&z)?;
    let (mut values, context) =
        projection::project_sorted_unchecked(&z, w, regularizer, Permutation::identity(n));
    if direction == Direction::Ascending {
        values.iter_mut().for_each(|v| *v = -*v);
    }
    Ok(SoftOpResult {
        values,
        context,
        input_permutation,
        epsilon,
        regularizer,
        direction,
        kind: OpKind::Sort,
    })
}

/// Soft rank of θ; values lie in the permutahedron `P(ρ)` (quadratic) and
/// approach 1-based hard ranks as ε → 0.
pub fn soft_rank(theta: &[f64], epsilon: f64, regularizer: Regularizer, direction: Direction) -> Result<SoftOpResult> {
    rank_impl(theta, epsilon, regularizer, direction, OpKind::Rank)
}

/// Rank variant that projects with KL directly onto `P(ρ)`:
/// `exp(P_E(−θ/ε, log ρ))`.
pub fn soft_rank_kl_direct(theta: &[f64], epsilon: f64, direction: Direction) -> Result<SoftOpResult> {
    rank_impl(theta, epsilon, Regularizer::Entropic, direction, OpKind::RankKlDirect)
}

fn rank_impl(
    theta: &[f64],
    epsilon: f64,
    regularizer: Regularizer,
    direction: Direction,
    kind: OpKind,
) -> Result<SoftOpResult> {
    validate(theta, epsilon)?;
    let n = theta.len();
    let d = direction.sign();
    let z: Vec<f64> = theta.iter().map(|&t| -(d * t) / epsilon).collect();
    check_finite(&z)?;
    let mut w = reversing(n);
    if kind == OpKind::RankKlDirect {
        w.iter_mut().for_each(|r| *r = r.ln());
    }
    let (mut values, context) = projection::project_unchecked(&z, w, regularizer);
    if kind == OpKind::RankKlDirect {
        values.iter_mut().for_each(|v| *v = v.exp());
    }
    Ok(SoftOpResult {
        values,
        context,
        input_permutation: Permutation::identity(n),
        epsilon,
        regularizer,
        direction,
        kind,
    })
}

pub fn vjp_soft(result: &SoftOpResult, u: &[f64]) -> Result<Vec<f64>> {
    result.vjp(u)
}

pub fn jvp_soft(result: &SoftOpResult, u: &[f64]) -> Result<Vec<f64>> {
    result.jvp(u)
}

/// A fully specified soft operator, applied row by row in batches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftOpSpec {
    pub kind: OpKind,
    pub epsilon: f64,
    pub regularizer: Regularizer,
    pub direction: Direction,
}

impl SoftOpSpec {
    pub fn new(kind: OpKind, epsilon: f64, regularizer: Regularizer, direction: Direction) -> Self {
        SoftOpSpec {
            kind,
            epsilon,
            regularizer,
            direction,
        }
    }

    /// Parses the string forms used on the command line: `op` is `sort` or
    /// `rank`, `method` is `q`, `e` or `kl-direct`, `direction` is `asc` or
    /// `desc`.
    pub fn parse(op: &str, method: &str, epsilon: f64, direction: &str) -> Result<Self> {
        let direction: Direction = direction.parse()?;
        let (kind, regularizer) = match (op, method.to_ascii_lowercase().as_str()) {
            ("rank", "kl-direct") => (OpKind::RankKlDirect, Regularizer::Entropic),
            ("sort", "kl-direct") => {
                return Err(Error::Invalid("kl-direct is only defined for rank".into()))
            }
            ("sort", m) => (OpKind::Sort, m.parse()?),
            ("rank", m) => (OpKind::Rank, m.parse()?),
            (other, _) => return Err(Error::Invalid(format!("unknown operator '{other}'"))),
        };
        check_epsilon(epsilon)?;
        Ok(SoftOpSpec::new(kind, epsilon, regularizer, direction))
    }

    pub fn apply(&self, theta: &[f64]) -> Result<SoftOpResult> {
        match self.kind {
            OpKind::Sort => soft_sort(theta, self.epsilon, self.regularizer, self.direction),
            OpKind::Rank => soft_rank(theta, self.epsilon, self.regularizer, self.direction),
            OpKind::RankKlDirect => soft_rank_kl_direct(theta, self.epsilon, self.direction),
        }
    }
}

fn check_rectangular<R: AsRef<[f64]>>(rows: &[R]) -> Result<()> {
    let Some(first) = rows.first() else {
        return Ok(());
    };
    let expected = first.as_ref().len();
    for (row, r) in rows.iter().enumerate() {
        let len = r.as_ref().len();
        if len != expected {
            return Err(Error::RaggedBatch { row, len, expected });
        }
    }
    Ok(())
}

/// Applies `spec` to every row. Rows are processed in parallel; the output
/// order matches the input order and each row equals the unbatched call.
pub fn batched_results<R: AsRef<[f64]> + Sync>(spec: &SoftOpSpec, rows: &[R]) -> Result<Vec<SoftOpResult>> {
    check_rectangular(rows)?;
    rows.par_iter().map(|r| spec.apply(r.as_ref())).collect()
}

pub fn batched<R: AsRef<[f64]> + Sync>(spec: &SoftOpSpec, rows: &[R]) -> Result<Vec<Vec<f64>>> {
    check_rectangular(rows)?;
    rows.par_iter()
        .map(|r| spec.apply(r.as_ref()).map(SoftOpResult::into_values))
        .collect()
}

/// Row-wise [`vjp_soft`].
pub fn batched_vjp<R: AsRef<[f64]> + Sync>(results: &[SoftOpResult], cotangents: &[R]) -> Result<Vec<Vec<f64>>> {
    if results.len() != cotangents.len() {
        return Err(Error::LengthMismatch(results.len(), cotangents.len()));
    }
    results
        .par_iter()
        .zip(cotangents.par_iter())
        .map(|(res, u)| res.vjp(u.as_ref()))
        .collect()
}
