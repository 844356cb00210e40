//! `softsort gradcheck`: analytic Jacobian products against central finite
//! differences on random tie-free inputs.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::operators::{Direction, OpKind, SoftOpResult, SoftOpSpec};
use crate::oracle::{finite_difference_jacobian_checked, relative_error};
use crate::regularizer::Regularizer;

#[derive(Debug, Clone, PartialEq)]
pub struct GradcheckConfig {
    pub trials: usize,
    pub n: usize,
    pub seed: u64,
    /// Maximum accepted relative error.
    pub tolerance: f64,
    /// Finite-difference step.
    pub h: f64,
    /// ε is drawn log-uniformly from this range.
    pub epsilon_range: (f64, f64),
    /// Redraws allowed per trial when a point sits on a kink.
    pub max_resamples: usize,
}

impl Default for GradcheckConfig {
    fn default() -> Self {
        GradcheckConfig {
            trials: 50,
            n: 8,
            seed: 0,
            tolerance: 1e-5,
            h: 1e-6,
            epsilon_range: (0.1, 10.0),
            max_resamples: 100,
        }
    }
}

/// Results for one operator/regularizer pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ComboReport {
    pub name: String,
    pub instances: usize,
    /// Draws rejected because a ±h probe changed the partition.
    pub skipped: usize,
    pub max_vjp_error: f64,
    pub max_jvp_error: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradcheckReport {
    pub tolerance: f64,
    pub combos: Vec<ComboReport>,
}

impl GradcheckReport {
    pub fn passed(&self) -> bool {
        self.total_failures() == 0
    }

    pub fn total_failures(&self) -> usize {
        self.combos.iter().map(|c| c.failures).sum()
    }

    pub fn total_instances(&self) -> usize {
        self.combos.iter().map(|c| c.instances).sum()
    }

    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "combo,instances,skipped,max_vjp_rel_error,max_jvp_rel_error,failures")?;
        for c in &self.combos {
            writeln!(
                out,
                "{},{},{},{:.3e},{:.3e},{}",
                c.name, c.instances, c.skipped, c.max_vjp_error, c.max_jvp_error, c.failures
            )?;
        }
        writeln!(
            out,
            "# {} instances, {} failures at tolerance {:e}: {}",
            self.total_instances(),
            self.total_failures(),
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Every operator/regularizer pair exercised by the check.
pub fn combos() -> Vec<(OpKind, Regularizer, &'static str)> {
    vec![
        (OpKind::Sort, Regularizer::Quadratic, "sort/q"),
        (OpKind::Sort, Regularizer::Entropic, "sort/e"),
        (OpKind::Rank, Regularizer::Quadratic, "rank/q"),
        (OpKind::Rank, Regularizer::Entropic, "rank/e"),
        (OpKind::RankKlDirect, Regularizer::Entropic, "rank/kl-direct"),
    ]
}

pub fn run_gradcheck(config: &GradcheckConfig) -> Result<GradcheckReport> {
    run_gradcheck_with(config, |r, u| r.vjp(u))
}

/// Like [`run_gradcheck`] with a substitute vjp, so a deliberately broken
/// backward pass can be shown to fail the check.
pub fn run_gradcheck_with<F>(config: &GradcheckConfig, vjp: F) -> Result<GradcheckReport>
where
    F: Fn(&SoftOpResult, &[f64]) -> Result<Vec<f64>>,
{
    let (lo, hi) = config.epsilon_range;
    if config.n == 0 {
        return Err(Error::EmptyInput);
    }
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Invalid(format!("bad epsilon range ({lo}, {hi})")));
    }
    if !(config.h > 0.0 && config.tolerance > 0.0) {
        return Err(Error::Invalid("step and tolerance must be positive".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut reports = Vec::new();
    for (kind, reg, name) in combos() {
        let mut report = ComboReport {
            name: name.to_string(),
            instances: 0,
            skipped: 0,
            max_vjp_error: 0.0,
            max_jvp_error: 0.0,
            failures: 0,
        };
        for trial in 0..config.trials {
            let direction = if trial % 2 == 0 {
                Direction::Descending
            } else {
                Direction::Ascending
            };
            let mut attempts = 0;
            loop {
                let epsilon = (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp();
                let theta: Vec<f64> = (0..config.n).map(|_| rng.sample(StandardNormal)).collect();
                let spec = SoftOpSpec::new(kind, epsilon, reg, direction);
                let fd = finite_difference_jacobian_checked(
                    |x| {
                        let r = spec.apply(x).expect("finite probe");
                        let s = r.structure();
                        (r.into_values(), s)
                    },
                    &theta,
                    config.h,
                );
                if !fd.stable {
                    report.skipped += 1;
                    attempts += 1;
                    if attempts > config.max_resamples {
                        return Err(Error::Invalid(format!("{name}: no stable point after {attempts} draws")));
                    }
                    continue;
                }
                let result = spec.apply(&theta)?;
                let n = config.n;
                let mut vjp_rows = Vec::with_capacity(n * n);
                let mut jvp_cols = vec![0.0; n * n];
                let mut fd_flat = Vec::with_capacity(n * n);
                for i in 0..n {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    vjp_rows.extend(vjp(&result, &e)?);
                    fd_flat.extend_from_slice(&fd.jacobian[i]);
                    let col = result.jvp(&e)?;
                    for (row, v) in col.into_iter().enumerate() {
                        jvp_cols[row * n + i] = v;
                    }
                }
                let vjp_err = relative_error(&vjp_rows, &fd_flat);
                let jvp_err = relative_error(&jvp_cols, &fd_flat);
                report.max_vjp_error = report.max_vjp_error.max(vjp_err);
                report.max_jvp_error = report.max_jvp_error.max(jvp_err);
                if vjp_err > config.tolerance || jvp_err > config.tolerance || vjp_err.is_nan() || jvp_err.is_nan() {
                    report.failures += 1;
                }
                report.instances += 1;
                break;
            }
        }
        reports.push(report);
    }
    Ok(GradcheckReport {
        tolerance: config.tolerance,
        combos: reports,
    })
}
