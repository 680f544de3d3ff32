use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The parameter pair `(alpha, beta)` of the Jacobi-Cherednik operator,
/// together with the derived shift `rho = alpha + beta + 1`.
///
/// Construction enforces `alpha >= beta >= -1/2` and `alpha > -1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct JCParams {
    alpha: f64,
    beta: f64,
    rho: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for JCParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        JCParams::new(raw.alpha, raw.beta)
    }
}

impl From<JCParams> for RawParams {
    fn from(p: JCParams) -> Self {
        RawParams { alpha: p.alpha, beta: p.beta }
    }
}

impl JCParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::domain("alpha and beta must be finite"));
        }
        if beta < -0.5 {
            return Err(Error::domain(format!("beta = {beta} must be >= -1/2")));
        }
        if alpha < beta {
            return Err(Error::domain(format!(
                "alpha = {alpha} must be >= beta = {beta}"
            )));
        }
        if alpha <= -0.5 {
            return Err(Error::domain(format!("alpha = {alpha} must be > -1/2")));
        }
        let rho = alpha + beta + 1.0;
        assert!(rho > 0.0, "rho must be positive for admissible parameters");
        Ok(JCParams { alpha, beta, rho })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Parameters `(alpha + 1, beta + 1)`, used by the derivative-free formula
    /// for the Opdam eigenfunction.
    pub fn shifted(&self) -> JCParams {
        JCParams {
            alpha: self.alpha + 1.0,
            beta: self.beta + 1.0,
            rho: self.rho + 2.0,
        }
    }
}

impl std::fmt::Display for JCParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "alpha={} beta={} rho={}", self.alpha, self.beta, self.rho)
    }
}
