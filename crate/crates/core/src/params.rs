use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nondimensional constants of one hydroelastic configuration.
///
/// Field names in serialized form follow the usual symbols: `S` (bending),
/// `tau1` (surface tension), `A` (Atwood number), `Atilde` (sheet mass
/// ratio), `gamma_bar` (mean sheet strength) and `M` (horizontal period).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysParams {
    #[serde(rename = "S")]
    pub bending: f64,
    pub tau1: f64,
    #[serde(rename = "A")]
    pub atwood: f64,
    #[serde(rename = "Atilde")]
    pub atilde: f64,
    #[serde(default)]
    pub gamma_bar: f64,
    #[serde(rename = "M", default = "default_period")]
    pub period: f64,
}

fn default_period() -> f64 {
    2.0 * PI
}

impl PhysParams {
    pub fn new(bending: f64, tau1: f64, atwood: f64, atilde: f64, gamma_bar: f64, period: f64) -> Result<Self> {
        let p = Self { bending, tau1, atwood, atilde, gamma_bar, period };
        p.validate()?;
        Ok(p)
    }

    /// `S = 0.25`, `τ₁ = 2`, `A = 1`, `Ã = 0.2`, `γ̄ = 0`, `M = 2π`: a branch
    /// that ends in a self-intersecting profile.
    pub fn reference() -> Self {
        Self { bending: 0.25, tau1: 2.0, atwood: 1.0, atilde: 0.2, gamma_bar: 0.0, period: 2.0 * PI }
    }

    pub fn with_atilde(mut self, atilde: f64) -> Self {
        self.atilde = atilde;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.bending, self.tau1, self.atwood, self.atilde, self.gamma_bar, self.period];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("physical parameters must be finite".into()));
        }
        if self.bending <= 0.0 {
            return Err(Error::InvalidInput(format!("S must be positive, got {}", self.bending)));
        }
        if self.tau1 <= 0.0 {
            return Err(Error::InvalidInput(format!("tau1 must be positive, got {}", self.tau1)));
        }
        if self.period <= 0.0 {
            return Err(Error::InvalidInput(format!("M must be positive, got {}", self.period)));
        }
        if self.atilde < 0.0 {
            return Err(Error::InvalidInput(format!("Atilde must be non-negative, got {}", self.atilde)));
        }
        if self.atwood.abs() > 1.0 {
            return Err(Error::InvalidInput(format!("A must lie in [-1, 1], got {}", self.atwood)));
        }
        Ok(())
    }
}
