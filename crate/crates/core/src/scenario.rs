//! The full experiment description shared by the analytic and Monte Carlo
//! paths.

use crate::error::{Error, Result};
use crate::geometry::Deployment;
use crate::pathloss::{PathLossKind, PathLossModel};
use serde::{Deserialize, Serialize};

fn one() -> f64 {
    1.0
}

/// Deployment, path-loss model and radio parameters of one experiment.
///
/// `mu` is the inverse transmit power (the fading rate parameter), `sigma2`
/// the noise power, `gamma0` the minimum working SINR used as the lower
/// limit of the rate integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub deployment: Deployment,
    pub model: PathLossModel,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default)]
    pub sigma2: f64,
    #[serde(default)]
    pub gamma0: f64,
}

impl Scenario {
    pub fn noiseless(deployment: Deployment, model: PathLossModel) -> Self {
        Self { deployment, model, mu: 1.0, sigma2: 0.0, gamma0: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.deployment.validated()?;
        if !(self.mu > 0.0) {
            return Err(Error::InvalidScenario(format!("mu must be positive, got {}", self.mu)));
        }
        if self.sigma2 < 0.0 {
            return Err(Error::InvalidScenario(format!("sigma2 must be nonnegative, got {}", self.sigma2)));
        }
        if self.gamma0 < 0.0 {
            return Err(Error::InvalidScenario(format!("gamma0 must be nonnegative, got {}", self.gamma0)));
        }
        if self.model.h < 0.0 {
            return Err(Error::InvalidScenario(format!("h must be nonnegative, got {}", self.model.h)));
        }
        let d = self.deployment.dimension as f64;
        if self.model.alpha <= d {
            return Err(Error::InvalidScenario(format!(
                "alpha must exceed the dimension ({} <= {d})",
                self.model.alpha
            )));
        }
        if self.model.kind == PathLossKind::L2 && self.model.h == 0.0 {
            return Err(Error::InvalidScenario("l2 requires h > 0".into()));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.sigma2 == 0.0
    }
}
