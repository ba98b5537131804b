use crate::error::{Error, Result};

/// Dissipation exponents and coefficients plus the working Sobolev index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub s: f64,
}

/// Whether the local/global existence construction is backed by theory
/// for the given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `α, β ∈ (1/2, 1)` and `s ∈ (max{2−2α, 2−2β}, 2)`.
    Guaranteed,
    /// The construction still runs, but nothing is promised.
    Unguaranteed,
}

impl DissipParams {
    pub fn new(alpha: f64, beta: f64, mu: f64, nu: f64, s: f64) -> Result<Self> {
        let p = DissipParams {
            alpha,
            beta,
            mu,
            nu,
            s,
        };
        p.validate()?;
        Ok(p)
    }

    /// `μ = ν = 1`, the normalization of the existence argument.
    pub fn unit(alpha: f64, beta: f64, s: f64) -> Result<Self> {
        Self::new(alpha, beta, 1.0, 1.0, s)
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |name, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must lie in (0, 1)",
                })
            }
        };
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be positive",
                })
            }
        };
        open_unit("alpha", self.alpha)?;
        open_unit("beta", self.beta)?;
        positive("mu", self.mu)?;
        positive("nu", self.nu)?;
        if !self.s.is_finite() {
            return Err(Error::InvalidParameter {
                name: "s",
                value: self.s,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    /// Lower end of the admissible Sobolev window, `max{2−2α, 2−2β}`.
    pub fn sobolev_floor(&self) -> f64 {
        (2.0 - 2.0 * self.alpha).max(2.0 - 2.0 * self.beta)
    }

    pub fn regime(&self) -> Regime {
        let exponents_ok =
            self.alpha > 0.5 && self.alpha < 1.0 && self.beta > 0.5 && self.beta < 1.0;
        let s_ok = self.s > self.sobolev_floor() && self.s < 2.0;
        if exponents_ok && s_ok {
            Regime::Guaranteed
        } else {
            Regime::Unguaranteed
        }
    }

    /// Same exponents and index with `μ = ν = 1`.
    pub fn with_unit_coefficients(&self) -> Self {
        DissipParams {
            mu: 1.0,
            nu: 1.0,
            ..*self
        }
    }
}
