//! Chain-constrained convex minimization by generalized pool adjacent violators.
//!
//! Two problems are solved exactly, both under `v[0] >= v[1] >= ... >= v[n-1]`:
//!
//! ```text
//! quadratic:  min ½‖v − (s − w)‖²
//! entropic:   min ⟨exp(s − v), 1⟩ + ⟨exp(w), v⟩
//! ```
//!
//! PAV returns a partition of `0..n` into contiguous blocks; inside a block the
//! solution equals the block's pooled value
//!
//! ```text
//! γ_Q(B) = mean_{i∈B}(s_i − w_i)
//! γ_E(B) = LSE(s_B) − LSE(w_B)
//! ```
//!
//! The partition is all that is needed to multiply with the Jacobian in O(n):
//! `∂v/∂s` is block diagonal with blocks `1/|B|` (quadratic) or
//! `1 ⊗ softmax(s_B)` (entropic).

use std::ops::Range;

use crate::error::{check_finite, check_same_len, Error, Result};
pub use crate::regularizer::{Regularizer, Wrt};

/// Sufficient statistics of a block's pooled value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockStats {
    Quadratic { count: usize, sum_diff: f64 },
    /// `lse_s`, `lse_w` are log-sum-exps of `s` and `w` over the block.
    Entropic { count: usize, lse_s: f64, lse_w: f64 },
}

impl BlockStats {
    fn singleton(regularizer: Regularizer, s: f64, w: f64) -> Self {
        match regularizer {
            Regularizer::Quadratic => BlockStats::Quadratic {
                count: 1,
                sum_diff: s - w,
            },
            Regularizer::Entropic => BlockStats::Entropic {
                count: 1,
                lse_s: s,
                lse_w: w,
            },
        }
    }

    pub fn count(&self) -> usize {
        match *self {
            BlockStats::Quadratic { count, .. } | BlockStats::Entropic { count, .. } => count,
        }
    }

    /// The pooled value γ(B).
    pub fn gamma(&self) -> f64 {
        match *self {
            BlockStats::Quadratic { count, sum_diff } => sum_diff / count as f64,
            BlockStats::Entropic { lse_s, lse_w, .. } => lse_s - lse_w,
        }
    }

    /// Statistics of the union of two adjacent blocks.
    pub fn merge(&self, other: &Self) -> Self {
        match (*self, *other) {
            (
                BlockStats::Quadratic { count: c1, sum_diff: d1 },
                BlockStats::Quadratic { count: c2, sum_diff: d2 },
            ) => BlockStats::Quadratic {
                count: c1 + c2,
                sum_diff: d1 + d2,
            },
            (
                BlockStats::Entropic { count: c1, lse_s: s1, lse_w: w1 },
                BlockStats::Entropic { count: c2, lse_s: s2, lse_w: w2 },
            ) => BlockStats::Entropic {
                count: c1 + c2,
                lse_s: log_add_exp(s1, s2),
                lse_w: log_add_exp(w1, w2),
            },
            _ => panic!("cannot merge blocks of different regularizers"),
        }
    }
}

/// `log(exp(a) + exp(b))` without overflow.
#[inline]
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Shifted log-sum-exp of a slice.
pub(crate) fn log_sum_exp(x: &[f64]) -> f64 {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + x.iter().map(|&v| (v - max).exp()).sum::<f64>().ln()
}

/// Ordered contiguous blocks covering `0..n`, with one pooled value per block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPartition {
    starts: Vec<usize>,
    gammas: Vec<f64>,
    stats: Vec<BlockStats>,
    n: usize,
}

impl BlockPartition {
    /// Zero-based start index of every block, ascending, first is 0.
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    /// Pooled values, non-increasing across blocks.
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn stats(&self) -> &[BlockStats] {
        &self.stats
    }

    pub fn num_blocks(&self) -> usize {
        self.starts.len()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Index ranges of the blocks, in order.
    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.starts.iter().enumerate().map(move |(j, &start)| {
            let end = self.starts.get(j + 1).copied().unwrap_or(self.n);
            start..end
        })
    }
}

/// Output of an isotonic solve plus the inputs needed for backward passes.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotonicSolution {
    v: Vec<f64>,
    partition: BlockPartition,
    s: Vec<f64>,
    w: Vec<f64>,
    regularizer: Regularizer,
}

impl IsotonicSolution {
    /// The non-increasing minimizer.
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn into_v(self) -> Vec<f64> {
        self.v
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn regularizer(&self) -> Regularizer {
        self.regularizer
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    /// `(∂v/∂s)·u` or `(∂v/∂w)·u`.
    pub fn jvp(&self, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        self.jvp_into(u, wrt, &mut out)?;
        Ok(out)
    }

    /// `(∂v/∂s)ᵀ·u` or `(∂v/∂w)ᵀ·u`.
    pub fn vjp(&self, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        self.vjp_into(u, wrt, &mut out)?;
        Ok(out)
    }

    pub(crate) fn jvp_into(&self, u: &[f64], wrt: Wrt, out: &mut [f64]) -> Result<()> {
        check_same_len(u, &self.v)?;
        let sign = sign_of(wrt);
        for (block, stats) in self.partition.blocks().zip(&self.partition.stats) {
            let ub = &u[block.clone()];
            let value = match *stats {
                BlockStats::Quadratic { count, .. } => ub.iter().sum::<f64>() / count as f64,
                BlockStats::Entropic { lse_s, lse_w, .. } => {
                    let (x, lse) = self.entropic_weights(wrt, block.clone(), lse_s, lse_w);
                    x.iter().zip(ub).map(|(&xi, &ui)| (xi - lse).exp() * ui).sum()
                }
            };
            out[block].fill(sign * value);
        }
        Ok(())
    }

    pub(crate) fn vjp_into(&self, u: &[f64], wrt: Wrt, out: &mut [f64]) -> Result<()> {
        check_same_len(u, &self.v)?;
        let sign = sign_of(wrt);
        for (block, stats) in self.partition.blocks().zip(&self.partition.stats) {
            let total: f64 = u[block.clone()].iter().sum();
            match *stats {
                BlockStats::Quadratic { count, .. } => {
                    out[block].fill(sign * total / count as f64);
                }
                BlockStats::Entropic { lse_s, lse_w, .. } => {
                    let (x, lse) = self.entropic_weights(wrt, block.clone(), lse_s, lse_w);
                    for (o, &xi) in out[block].iter_mut().zip(x) {
                        *o = sign * (xi - lse).exp() * total;
                    }
                }
            }
        }
        Ok(())
    }

    // softmax(s_B) for Input, softmax(w_B) for Weights, as (values, lse)
    fn entropic_weights(&self, wrt: Wrt, block: Range<usize>, lse_s: f64, lse_w: f64) -> (&[f64], f64) {
        match wrt {
            Wrt::Input => (&self.s[block], lse_s),
            Wrt::Weights => (&self.w[block], lse_w),
        }
    }
}

fn sign_of(wrt: Wrt) -> f64 {
    match wrt {
        Wrt::Input => 1.0,
        Wrt::Weights => -1.0,
    }
}

/// Solve either isotonic problem. `s` and `w` need not be sorted.
pub fn solve_isotonic(s: &[f64], w: &[f64], regularizer: Regularizer) -> Result<IsotonicSolution> {
    check_same_len(s, w)?;
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(s)?;
    check_finite(w)?;
    Ok(solve_unchecked(s.to_vec(), w.to_vec(), regularizer))
}

pub fn solve_isotonic_quadratic(s: &[f64], w: &[f64]) -> Result<IsotonicSolution> {
    solve_isotonic(s, w, Regularizer::Quadratic)
}

pub fn solve_isotonic_entropic(s: &[f64], w: &[f64]) -> Result<IsotonicSolution> {
    solve_isotonic(s, w, Regularizer::Entropic)
}

pub fn jvp_isotonic(sol: &IsotonicSolution, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
    sol.jvp(u, wrt)
}

pub fn vjp_isotonic(sol: &IsotonicSolution, u: &[f64], wrt: Wrt) -> Result<Vec<f64>> {
    sol.vjp(u, wrt)
}

/// PAV with a block stack. Inputs are assumed validated.
pub(crate) fn solve_unchecked(s: Vec<f64>, w: Vec<f64>, regularizer: Regularizer) -> IsotonicSolution {
    let n = s.len();
    let mut starts: Vec<usize> = Vec::with_capacity(n);
    let mut stats: Vec<BlockStats> = Vec::with_capacity(n);
    let mut gammas: Vec<f64> = Vec::with_capacity(n);

    for i in 0..n {
        let mut top = BlockStats::singleton(regularizer, s[i], w[i]);
        let mut top_gamma = top.gamma();
        let mut top_start = i;
        // Merge only on strict violation; equal neighbours stay separate.
        while let Some(&left_gamma) = gammas.last() {
            if left_gamma >= top_gamma {
                break;
            }
            gammas.pop();
            let left = stats.pop().expect("stats and gammas have equal length");
            top_start = starts.pop().expect("starts and gammas have equal length");
            top = left.merge(&top);
            top_gamma = top.gamma();
        }
        starts.push(top_start);
        stats.push(top);
        gammas.push(top_gamma);
    }

    let partition = BlockPartition {
        starts,
        gammas,
        stats,
        n,
    };
    let mut v = vec![0.0; n];
    for (block, &gamma) in partition.blocks().zip(&partition.gammas) {
        v[block].fill(gamma);
    }
    IsotonicSolution {
        v,
        partition,
        s,
        w,
        regularizer,
    }
}
