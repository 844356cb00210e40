//! Brute-force references for tests and acceptance runs.
//!
//! Nothing here calls into the solver path (`isotonic`, `projection`,
//! `operators`); every reference is computed from first principles so that
//! agreement means something. All routines are exponential or slow and guard
//! their input size.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::regularizer::Regularizer;

pub const MAX_ISOTONIC_N: usize = 12;
pub const MAX_PERMUTATION_N: usize = 6;
pub const FRANK_WOLFE_ITERATIONS: usize = 100_000;
pub const DEFAULT_FD_STEP: f64 = 1e-6;

fn guard(n: usize, max: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > max {
        return Err(Error::TooLarge { n, max });
    }
    Ok(())
}

fn lse(x: &[f64]) -> f64 {
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

fn pooled_value(s: &[f64], w: &[f64], regularizer: Regularizer) -> f64 {
    match regularizer {
        Regularizer::Quadratic => s.iter().zip(w).map(|(a, b)| a - b).sum::<f64>() / s.len() as f64,
        Regularizer::Entropic => lse(s) - lse(w),
    }
}

fn isotonic_objective(v: &[f64], s: &[f64], w: &[f64], regularizer: Regularizer) -> f64 {
    match regularizer {
        Regularizer::Quadratic => v
            .iter()
            .zip(s.iter().zip(w))
            .map(|(vi, (si, wi))| 0.5 * (vi - (si - wi)).powi(2))
            .sum(),
        Regularizer::Entropic => v
            .iter()
            .zip(s.iter().zip(w))
            .map(|(vi, (si, wi))| (si - vi).exp() + wi.exp() * vi)
            .sum(),
    }
}

/// Minimizer of the isotonic problem by exhaustive search over all `2^(n−1)`
/// ordered partitions of `0..n`.
///
/// Each partition yields a blockwise-constant candidate from the closed-form
/// pooled values; infeasible candidates are dropped and the feasible one with
/// the smallest objective wins.
pub fn isotonic_bruteforce(s: &[f64], w: &[f64], regularizer: Regularizer) -> Result<Vec<f64>> {
    if s.len() != w.len() {
        return Err(Error::LengthMismatch(s.len(), w.len()));
    }
    let n = s.len();
    guard(n, MAX_ISOTONIC_N)?;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut candidate = vec![0.0; n];
    for cuts in 0u32..(1 << (n - 1)) {
        let mut start = 0;
        let mut feasible = true;
        let mut prev = f64::INFINITY;
        for end in 1..=n {
            let is_cut = end == n || cuts & (1 << (end - 1)) != 0;
            if !is_cut {
                continue;
            }
            let gamma = pooled_value(&s[start..end], &w[start..end], regularizer);
            if gamma > prev {
                feasible = false;
                break;
            }
            candidate[start..end].fill(gamma);
            prev = gamma;
            start = end;
        }
        if !feasible {
            continue;
        }
        let value = isotonic_objective(&candidate, s, w, regularizer);
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, candidate.clone()));
        }
    }
    Ok(best.expect("the all-in-one-block candidate is always feasible").1)
}

/// Non-increasing least-squares fit of `d` from the min-max formula
/// `v_i = max_{k≥i} min_{j≤i} mean(d_j..d_k)`. O(n³).
pub fn isotonic_minimax_quadratic(d: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + d[i];
    }
    let mean = |j: usize, k: usize| (prefix[k + 1] - prefix[j]) / (k + 1 - j) as f64;
    (0..n)
        .map(|i| {
            (i..n)
                .map(|k| (0..=i).map(|j| mean(j, k)).fold(f64::INFINITY, f64::min))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

// Vertex of P(w) maximizing ⟨c, y⟩: the largest w goes where c is largest.
fn best_vertex(c: &[f64], w_desc: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c[b].partial_cmp(&c[a]).expect("finite"));
    let mut y = vec![0.0; c.len()];
    for (k, &i) in order.iter().enumerate() {
        y[i] = w_desc[k];
    }
    y
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean projection of `z` onto `P(w)` by Frank–Wolfe.
///
/// The linear maximization oracle over the permutahedron is a sort. Uses
/// pairwise steps over the active vertex set with exact line search, which
/// converges linearly on polytopes; capped at [`FRANK_WOLFE_ITERATIONS`].
pub fn projection_bruteforce_q(z: &[f64], w: &[f64]) -> Result<Vec<f64>> {
    if z.len() != w.len() {
        return Err(Error::LengthMismatch(z.len(), w.len()));
    }
    guard(z.len(), MAX_PERMUTATION_N)?;
    let mut w_desc = w.to_vec();
    w_desc.sort_by(|a, b| b.partial_cmp(a).expect("finite"));

    let start = best_vertex(z, &w_desc);
    let mut x = start.clone();
    let mut active: Vec<(Vec<f64>, f64)> = vec![(start, 1.0)];

    for _ in 0..FRANK_WOLFE_ITERATIONS {
        let grad: Vec<f64> = x.iter().zip(z).map(|(a, b)| a - b).collect();
        let neg: Vec<f64> = grad.iter().map(|g| -g).collect();
        let toward = best_vertex(&neg, &w_desc);
        let gap = dot(&grad, &x) - dot(&grad, &toward);
        if gap <= 1e-22 {
            break;
        }
        let (away_idx, _) = active
            .iter()
            .enumerate()
            .map(|(k, (v, _))| (k, dot(&grad, v)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
            .expect("active set is never empty");
        let away = active[away_idx].0.clone();
        let direction: Vec<f64> = toward.iter().zip(&away).map(|(a, b)| a - b).collect();
        let norm2 = dot(&direction, &direction);
        if norm2 == 0.0 {
            break;
        }
        let max_step = active[away_idx].1;
        let step = (-dot(&grad, &direction) / norm2).clamp(0.0, max_step);
        if step == 0.0 {
            break;
        }
        for (xi, di) in x.iter_mut().zip(&direction) {
            *xi += step * di;
        }
        active[away_idx].1 -= step;
        match active.iter_mut().find(|(v, _)| *v == toward) {
            Some(entry) => entry.1 += step,
            None => active.push((toward, step)),
        }
        if step >= max_step {
            active.retain(|(v, _)| *v != away);
        }
    }
    Ok(x)
}

/// What [`lp_bruteforce`] maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpObjective {
    /// `argmax_{y ∈ P(θ)} ⟨y, ρ⟩`, the descending sort of θ.
    Sort,
    /// `argmax_{y ∈ P(ρ)} ⟨y, −θ⟩`, the 1-based descending ranks of θ.
    Rank,
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Linear programs over the permutahedron solved by enumerating all `n!`
/// vertices. Among tied optima the lexicographically first vertex is kept,
/// which gives lower indices the smaller rank.
pub fn lp_bruteforce(theta: &[f64], objective: LpObjective) -> Result<Vec<f64>> {
    let n = theta.len();
    guard(n, MAX_PERMUTATION_N)?;
    let rho: Vec<f64> = (0..n).map(|k| (n - k) as f64).collect();
    let scale: f64 = theta.iter().map(|t| t.abs()).sum::<f64>() * n as f64 + 1.0;
    let tie_tol = 1e-12 * scale;

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let (value, y) = match objective {
            LpObjective::Sort => {
                let y: Vec<f64> = perm.iter().map(|&i| theta[i]).collect();
                (dot(&y, &rho), y)
            }
            LpObjective::Rank => {
                let y: Vec<f64> = perm.iter().map(|&i| (i + 1) as f64).collect();
                (-dot(&y, theta), y)
            }
        };
        if best.as_ref().is_none_or(|(b, _)| value > *b + tie_tol) {
            best = Some((value, y));
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.expect("at least one permutation").1)
}

/// Whether `y` lies in `P(w)` up to `tol`: equal totals and every top-k
/// partial sum of `y` bounded by that of `w`.
pub fn in_permutahedron(y: &[f64], w: &[f64], tol: f64) -> bool {
    if y.len() != w.len() {
        return false;
    }
    let mut ys = y.to_vec();
    let mut ws = w.to_vec();
    ys.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    ws.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let (mut sy, mut sw) = (0.0, 0.0);
    for (a, b) in ys.iter().zip(&ws) {
        sy += a;
        sw += b;
        if sy > sw + tol {
            return false;
        }
    }
    (sy - sw).abs() <= tol
}

/// Central-difference Jacobian, `jac[i][j] = ∂f_i/∂x_j`.
pub fn finite_difference_jacobian<F>(f: F, x: &[f64], h: f64) -> Vec<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    finite_difference_jacobian_checked(|p| (f(p), ()), x, h).jacobian
}

/// Finite-difference Jacobian plus a stability flag.
#[derive(Debug, Clone, PartialEq)]
pub struct FdJacobian {
    pub jacobian: Vec<Vec<f64>>,
    /// `false` when any ±h probe changed the structure signature, i.e. `x`
    /// sits within `h` of a kink and the differences are not trustworthy.
    pub stable: bool,
}

/// Like [`finite_difference_jacobian`], but `f` also returns an opaque
/// signature of its combinatorial structure (e.g. the PAV partition); any
/// change of signature across the probes marks the result unstable.
pub fn finite_difference_jacobian_checked<F, S>(f: F, x: &[f64], h: f64) -> FdJacobian
where
    F: Fn(&[f64]) -> (Vec<f64>, S),
    S: PartialEq,
{
    let (f0, sig0) = f(x);
    let m = f0.len();
    let n = x.len();
    let mut jacobian = vec![vec![0.0; n]; m];
    let mut stable = true;
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + h;
        let (fp, sp) = f(&probe);
        probe[j] = x[j] - h;
        let (fm, sm) = f(&probe);
        probe[j] = x[j];
        stable &= sp == sig0 && sm == sig0;
        for i in 0..m {
            jacobian[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    FdJacobian { jacobian, stable }
}

/// Column `j` of a row-major matrix.
pub fn column(jac: &[Vec<f64>], j: usize) -> Vec<f64> {
    jac.iter().map(|row| row[j]).collect()
}

/// `max |a − b| / max(1, max |b|)`: relative to the reference's scale, with
/// an absolute floor for references near zero.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    max_abs_error(a, b) / scale
}

pub fn max_abs_error(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "compared vectors must have equal length");
    // f64::max drops NaN, so propagate it explicitly
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| {
        let d = (x - y).abs();
        if d.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(d)
        }
    })
}

/// Short stable hex digest of an input vector, for failure reports.
pub fn digest(x: &[f64]) -> String {
    let mut hasher = DefaultHasher::new();
    for v in x {
        v.to_bits().hash(&mut hasher);
    }
    format!("{:016x}", hasher.finish())
}

/// Which error a report judges against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

/// Aggregate of many oracle comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub tolerance: Tolerance,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub instances: usize,
    pub failures: Vec<(String, f64)>,
}

impl OracleReport {
    pub fn new(tolerance: Tolerance) -> Self {
        OracleReport {
            tolerance,
            max_abs_error: 0.0,
            max_rel_error: 0.0,
            instances: 0,
            failures: Vec::new(),
        }
    }

    /// Compares `actual` against `expected` for the instance `input`.
    pub fn record(&mut self, input: &[f64], actual: &[f64], expected: &[f64]) {
        let abs = max_abs_error(actual, expected);
        let rel = relative_error(actual, expected);
        self.instances += 1;
        // NaN compares false; fold it in as infinite error
        let abs = if abs.is_nan() { f64::INFINITY } else { abs };
        let rel = if rel.is_nan() { f64::INFINITY } else { rel };
        self.max_abs_error = self.max_abs_error.max(abs);
        self.max_rel_error = self.max_rel_error.max(rel);
        let (err, tol) = match self.tolerance {
            Tolerance::Absolute(t) => (abs, t),
            Tolerance::Relative(t) => (rel, t),
        };
        if err > tol {
            self.failures.push((digest(input), err));
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(&mut self, other: &OracleReport) {
        self.instances += other.instances;
        self.max_abs_error = self.max_abs_error.max(other.max_abs_error);
        self.max_rel_error = self.max_rel_error.max(other.max_rel_error);
        self.failures.extend(other.failures.iter().cloned());
    }
}
