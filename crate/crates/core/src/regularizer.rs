use crate::error::{Error, Result};

/// Which regularizer defines the projection (and hence the isotonic problem).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regularizer {
    /// ½‖μ‖², Euclidean projection.
    Quadratic,
    /// ⟨μ, log μ − 1⟩, KL projection carried out in log-space.
    Entropic,
}

impl Regularizer {
    pub fn as_str(self) -> &'static str {
        match self {
            Regularizer::Quadratic => "q",
            Regularizer::Entropic => "e",
        }
    }
}

impl std::fmt::Display for Regularizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Regularizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "q" | "quadratic" | "l2" => Ok(Regularizer::Quadratic),
            "e" | "entropic" | "kl" => Ok(Regularizer::Entropic),
            other => Err(Error::Invalid(format!("unknown regularizer '{other}'"))),
        }
    }
}

/// Which input a Jacobian product is taken with respect to.
///
/// For the isotonic problems `Input` is `s`; for projections it is `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wrt {
    Input,
    Weights,
}
