//! Regularized projections onto the permutahedron `P(w)`.
//!
//! For `w` sorted in non-increasing order,
//!
//! ```text
//! P_Ψ(z, w) = z − v_Ψ(z_σ, w)_{σ⁻¹}
//! ```
//!
//! where `σ` sorts `z` in descending order and `v_Ψ` is the isotonic solution
//! from [`crate::isotonic`]. With `Ψ = Quadratic` this is the Euclidean
//! projection of `z` onto `P(w)`; with `Ψ = Entropic` it is the log of the KL
//! projection of `exp(z)` onto `P(exp(w))`.
//!
//! The projection itself never sees ε; callers scale `z` by `1/ε`.

use crate::error::{check_finite, check_same_len, Error, Result};
use crate::isotonic::{self, log_sum_exp, IsotonicSolution, Regularizer, Wrt};

/// A permutation of `0..n` stored together with its inverse.
///
/// `forward[k]` is the index of the `k`-th entry in sorted order;
/// `inverse[forward[k]] == k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        let forward: Vec<usize> = (0..n).collect();
        Permutation {
            inverse: forward.clone(),
            forward,
        }
    }

    /// Builds a permutation from its forward map. Returns `None` if `forward`
    /// is not a bijection on `0..n`.
    pub fn from_forward(forward: Vec<usize>) -> Option<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (k, &i) in forward.iter().enumerate() {
            if i >= n || inverse[i] != usize::MAX {
                return None;
            }
            inverse[i] = k;
        }
        Some(Permutation { forward, inverse })
    }

    /// Descending argsort; ties keep their original order.
    pub fn argsort_descending(x: &[f64]) -> Self {
        let mut forward: Vec<usize> = (0..x.len()).collect();
        forward.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
        Self::from_forward(forward).expect("argsort yields a bijection")
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// `out[k] = x[forward[k]]`.
    pub fn gather(&self, x: &[f64]) -> Vec<f64> {
        self.forward.iter().map(|&i| x[i]).collect()
    }

    /// `out[forward[k]] = x[k]`, the inverse of [`Permutation::gather`].
    pub fn scatter(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (&i, &value) in self.forward.iter().zip(x) {
            out[i] = value;
        }
        out
    }

    pub fn inverted(&self) -> Permutation {
        Permutation {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}

/// Forward state retained by [`project`] for O(n) Jacobian products.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionContext {
    sigma: Permutation,
    solution: IsotonicSolution,
}

impl ProjectionContext {
    /// Descending argsort of `z`.
    pub fn sigma(&self) -> &Permutation {
        &self.sigma
    }

    pub fn solution(&self) -> &IsotonicSolution {
        &self.solution
    }

    pub fn regularizer(&self) -> Regularizer {
        self.solution.regularizer()
    }

    pub fn w_sorted(&self) -> &[f64] {
        self.solution.w()
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `(∂P/∂z)·u` or `(∂P/∂w)·u`. For `Wrt::Weights`, `u` is indexed like `w`.
    pub fn jvp(&self, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
        check_same_len(u, self.solution.v())?;
        match wrt {
            Wrt::Input => {
                let us = self.sigma.gather(u);
                let t = self.solution.jvp(&us, Wrt::Input)?;
                let diff: Vec<f64> = us.iter().zip(&t).map(|(a, b)| a - b).collect();
                Ok(self.sigma.scatter(&diff))
            }
            Wrt::Weights => {
                let mut t = self.solution.jvp(u, Wrt::Weights)?;
                t.iter_mut().for_each(|x| *x = -*x);
                Ok(self.sigma.scatter(&t))
            }
        }
    }

    /// `(∂P/∂z)ᵀ·u` or `(∂P/∂w)ᵀ·u`. For `Wrt::Weights` the result is indexed like `w`.
    pub fn vjp(&self, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
        check_same_len(u, self.solution.v())?;
        let us = self.sigma.gather(u);
        match wrt {
            Wrt::Input => {
                let t = self.solution.vjp(&us, Wrt::Input)?;
                let diff: Vec<f64> = us.iter().zip(&t).map(|(a, b)| a - b).collect();
                Ok(self.sigma.scatter(&diff))
            }
            Wrt::Weights => {
                let mut t = self.solution.vjp(&us, Wrt::Weights)?;
                t.iter_mut().for_each(|x| *x = -*x);
                Ok(t)
            }
        }
    }
}

pub(crate) fn check_non_increasing(x: &[f64], what: &'static str) -> Result<()> {
    match x.windows(2).position(|p| p[0] < p[1]) {
        Some(i) => Err(Error::NotSorted { what, index: i + 1 }),
        None => Ok(()),
    }
}

/// Projects `z` onto the permutahedron `P(w)` under `regularizer`.
///
/// `w` must be sorted in non-increasing order. Runs in O(n log n).
pub fn project(z: &[f64], w: &[f64], regularizer: Regularizer) -> Result<(Vec<f64>, ProjectionContext)> {
    check_same_len(z, w)?;
    if z.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(z)?;
    check_finite(w)?;
    check_non_increasing(w, "w")?;
    Ok(project_unchecked(z, w.to_vec(), regularizer))
}

pub(crate) fn project_unchecked(z: &[f64], w: Vec<f64>, regularizer: Regularizer) -> (Vec<f64>, ProjectionContext) {
    let sigma = Permutation::argsort_descending(z);
    project_sorted_unchecked(z, w, regularizer, sigma)
}

// `sigma` must be the descending argsort of `z`.
pub(crate) fn project_sorted_unchecked(
    z: &[f64],
    w: Vec<f64>,
    regularizer: Regularizer,
    sigma: Permutation,
) -> (Vec<f64>, ProjectionContext) {
    let s = sigma.gather(z);
    let solution = isotonic::solve_unchecked(s, w, regularizer);
    let mut out = vec![0.0; z.len()];
    for (k, &i) in sigma.forward().iter().enumerate() {
        out[i] = solution.s()[k] - solution.v()[k];
    }
    // a singleton block reproduces its weight; skip the cancellation error
    for block in solution.partition().blocks() {
        if block.len() == 1 {
            out[sigma.forward()[block.start]] = solution.w()[block.start];
        }
    }
    (out, ProjectionContext { sigma, solution })
}

pub fn jvp_projection(ctx: &ProjectionContext, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
    ctx.jvp(u, wrt)
}

pub fn vjp_projection(ctx: &ProjectionContext, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
    ctx.vjp(u, wrt)
}

fn check_threshold_inputs(s: &[f64], w: &[f64]) -> Result<()> {
    check_same_len(s, w)?;
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(s)?;
    check_finite(w)?;
    check_non_increasing(s, "s")?;
    check_non_increasing(w, "w")?;
    if let Some(i) = w.windows(2).position(|p| p[0] == p[1]) {
        return Err(Error::TiedWeights(i, i + 1));
    }
    Ok(())
}

/// `min_i (s_i − s_{i+1}) / (w_i − w_{i+1})`; `+∞` when `n = 1`.
///
/// For `ε ≤ epsilon_min(s, w)` the projection of `z/ε` is the vertex of
/// `P(w)` ordered like `z`. Both inputs must be sorted non-increasing and
/// `w` must be free of ties.
pub fn epsilon_min(s: &[f64], w: &[f64]) -> Result<f64> {
    check_threshold_inputs(s, w)?;
    Ok(s.windows(2)
        .zip(w.windows(2))
        .map(|(sp, wp)| (sp[0] - sp[1]) / (wp[0] - wp[1]))
        .fold(f64::INFINITY, f64::min))
}

/// `max_{i<j} (s_i − s_j) / (w_i − w_j)`; `0` when `n = 1`. O(n²).
///
/// For `ε > epsilon_max(s, w)` every coordinate pools into a single block.
pub fn epsilon_max(s: &[f64], w: &[f64]) -> Result<f64> {
    check_threshold_inputs(s, w)?;
    let n = s.len();
    let mut best = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            best = best.max((s[i] - s[j]) / (w[i] - w[j]));
        }
    }
    Ok(best)
}

/// Limit regime of the ε-scaled projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `ε ≤ ε_min`: the projection is a vertex.
    Small,
    /// `ε > ε_max`: the projection is a shift of `z/ε`.
    Large,
}

/// Closed form of `project(z/eps, w)` in a limit regime, without PAV.
///
/// Fails with [`Error::RegimeViolated`] when `eps` is not inside the requested
/// regime for `(sort(z), w)`.
pub fn limit_projection(
    z: &[f64],
    w: &[f64],
    eps: f64,
    regularizer: Regularizer,
    regime: Regime,
) -> Result<Vec<f64>> {
    crate::error::check_epsilon(eps)?;
    check_same_len(z, w)?;
    check_finite(z)?;
    let sigma = Permutation::argsort_descending(z);
    let s = sigma.gather(z);
    match regime {
        Regime::Small => {
            let threshold = epsilon_min(&s, w)?;
            if eps > threshold {
                return Err(Error::RegimeViolated {
                    epsilon: eps,
                    threshold,
                });
            }
            Ok(sigma.scatter(w))
        }
        Regime::Large => {
            let threshold = epsilon_max(&s, w)?;
            if eps <= threshold {
                return Err(Error::RegimeViolated {
                    epsilon: eps,
                    threshold,
                });
            }
            let scaled: Vec<f64> = z.iter().map(|&x| x / eps).collect();
            let shift = match regularizer {
                Regularizer::Quadratic => {
                    let n = z.len() as f64;
                    scaled.iter().zip(w).map(|(a, b)| a - b).sum::<f64>() / n
                }
                Regularizer::Entropic => log_sum_exp(&scaled) - log_sum_exp(w),
            };
            Ok(scaled.into_iter().map(|x| x - shift).collect())
        }
    }
}
