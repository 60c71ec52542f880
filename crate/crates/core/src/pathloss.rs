//! Path-loss model functions shared by the analytic and simulation paths.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which of the three path-loss laws applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathLossKind {
    /// `r^-alpha`, unbounded at the origin.
    L0,
    /// `(h^2 + r^2)^(-alpha/2)`, bounded, models the antenna height gap.
    L1,
    /// `max(h, r)^-alpha`, bounded, dominates L1 pointwise.
    L2,
}

/// A path-loss law with its parameters. `h` is the antenna height difference
/// in meters, `alpha` the path-loss exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub kind: PathLossKind,
    #[serde(default)]
    pub h: f64,
    pub alpha: f64,
}

impl PathLossModel {
    pub fn l0(alpha: f64) -> Self {
        Self { kind: PathLossKind::L0, h: 0.0, alpha }
    }

    pub fn l1(h: f64, alpha: f64) -> Self {
        Self { kind: PathLossKind::L1, h, alpha }
    }

    pub fn l2(h: f64, alpha: f64) -> Self {
        Self { kind: PathLossKind::L2, h, alpha }
    }

    /// True for L1/L2 (finite at r = 0), and for L0 only when treated as the
    /// h = 0 limit of L1 (it is not).
    pub fn is_bounded(&self) -> bool {
        match self.kind {
            PathLossKind::L0 => false,
            PathLossKind::L1 | PathLossKind::L2 => self.h > 0.0,
        }
    }

    /// Path gain at horizontal distance `r >= 0`.
    pub fn gain(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::Domain(format!("distance must be nonnegative, got {r}")));
        }
        match self.kind {
            PathLossKind::L0 => {
                if r == 0.0 {
                    return Err(Error::Singularity("l0 gain at r = 0".into()));
                }
                Ok(pow_neg_alpha(r * r, self.alpha))
            }
            PathLossKind::L1 => Ok(pow_neg_alpha(self.h * self.h + r * r, self.alpha)),
            PathLossKind::L2 => {
                let d = self.h.max(r);
                if d == 0.0 {
                    return Err(Error::Singularity("l2 gain with h = 0 at r = 0".into()));
                }
                Ok(pow_neg_alpha(d * d, self.alpha))
            }
        }
    }

    /// Gain as a function of squared distance, skipping the domain checks;
    /// the hot path of the lattice products and the Monte Carlo loop.
    #[inline]
    pub(crate) fn gain_d2(&self, d2: f64) -> f64 {
        match self.kind {
            PathLossKind::L0 => pow_neg_alpha(d2, self.alpha),
            PathLossKind::L1 => pow_neg_alpha(self.h * self.h + d2, self.alpha),
            PathLossKind::L2 => pow_neg_alpha((self.h * self.h).max(d2), self.alpha),
        }
    }

    /// Inverse gain `1/l(r)` used in the noise exponent.
    #[inline]
    pub(crate) fn inv_gain_d2(&self, d2: f64) -> f64 {
        match self.kind {
            PathLossKind::L0 => pow_half_alpha(d2, self.alpha),
            PathLossKind::L1 => pow_half_alpha(self.h * self.h + d2, self.alpha),
            PathLossKind::L2 => pow_half_alpha((self.h * self.h).max(d2), self.alpha),
        }
    }
}

/// `x^(-alpha/2)` with integer fast paths for the common exponents.
#[inline]
fn pow_neg_alpha(x: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (x * x)
    } else if alpha == 2.0 {
        1.0 / x
    } else if alpha == 6.0 {
        1.0 / (x * x * x)
    } else {
        x.powf(-0.5 * alpha)
    }
}

/// `x^(alpha/2)`.
#[inline]
fn pow_half_alpha(x: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        x * x
    } else if alpha == 2.0 {
        x
    } else if alpha == 6.0 {
        x * x * x
    } else {
        x.powf(0.5 * alpha)
    }
}
