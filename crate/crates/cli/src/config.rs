//! Sweep configuration: a scenario template plus grid axes, consumed from a
//! JSON document.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use udn_sg_core::mcsim::MCConfig;
use udn_sg_core::{Deployment, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Coverage,
    Rate,
    Ase,
    Gain,
}

impl Quantity {
    pub fn file_stem(&self) -> &'static str {
        match self {
            Quantity::Coverage => "coverage",
            Quantity::Rate => "rate",
            Quantity::Ase => "ase",
            Quantity::Gain => "gain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    ClosedForm,
    Mc,
}

/// One sweep: the scenario template, the grid axes (`lambda` or `isd`, `h`,
/// `thresholds`), which quantities and methods to run, and where to write.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub isd: Vec<f64>,
    #[serde(default)]
    pub h: Vec<f64>,
    #[serde(default)]
    pub thresholds: Vec<f64>,
    pub quantities: Vec<Quantity>,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub mc: Option<MCConfig>,
    pub output_dir: PathBuf,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.lambda.is_empty() && !self.isd.is_empty() {
            bail!("lambda and isd axes are mutually exclusive");
        }
        if self.lambda.is_empty() && self.isd.is_empty() && self.h.is_empty() && self.thresholds.is_empty() {
            bail!("at least one sweep axis must be non-empty");
        }
        if self.quantities.is_empty() {
            bail!("no quantities requested");
        }
        if self.methods.is_empty() {
            bail!("no methods requested");
        }
        if self.quantities.contains(&Quantity::Coverage) && self.effective_thresholds().is_empty() {
            bail!("coverage sweeps need a thresholds axis");
        }
        if self.methods.contains(&Method::Mc) && self.mc.is_none() {
            bail!("mc method requested without an mc config");
        }
        self.scenario.validate().map_err(|e| anyhow::anyhow!(e))?;
        Ok(())
    }

    /// Density axis with any ISD values converted through the deployment's
    /// dimension.
    pub fn effective_lambdas(&self) -> Vec<f64> {
        if !self.isd.is_empty() {
            let d = self.scenario.deployment.dimension;
            self.isd.iter().map(|&u| Deployment::lambda_from_isd(d, u)).collect()
        } else if !self.lambda.is_empty() {
            self.lambda.clone()
        } else {
            vec![self.scenario.deployment.lambda]
        }
    }

    pub fn effective_heights(&self) -> Vec<f64> {
        if self.h.is_empty() {
            vec![self.scenario.model.h]
        } else {
            self.h.clone()
        }
    }

    pub fn effective_thresholds(&self) -> Vec<f64> {
        if self.thresholds.is_empty() {
            vec![1.0]
        } else {
            self.thresholds.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let text = r#"{
            "scenario": {
                "deployment": {"kind": "line", "dimension": 1, "lambda": 1.0},
                "model": {"kind": "l1", "h": 0.5, "alpha": 2.0}
            },
            "isd": [0.1, 1.0, 10.0],
            "h": [0.0, 0.5],
            "quantities": ["rate", "ase"],
            "methods": ["analytic"],
            "output_dir": "/tmp/out"
        }"#;
        let cfg: SweepConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        let lams = cfg.effective_lambdas();
        assert_eq!(lams, vec![10.0, 1.0, 0.1]);
    }

    #[test]
    fn axis_exclusivity() {
        let text = r#"{
            "scenario": {
                "deployment": {"kind": "ppp", "dimension": 2, "lambda": 1.0},
                "model": {"kind": "l0", "alpha": 4.0}
            },
            "lambda": [1.0],
            "isd": [1.0],
            "quantities": ["rate"],
            "methods": ["analytic"],
            "output_dir": "/tmp/out"
        }"#;
        let cfg: SweepConfig = serde_json::from_str(text).unwrap();
        assert!(cfg.validate().is_err());
    }
}
