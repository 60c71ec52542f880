//! Coverage probability, per-cell ergodic rate and area spectral efficiency
//! of ultra-dense cellular deployments, for regular (line / hex lattice) and
//! Poisson BS placements under the `r^-alpha`, `(h^2+r^2)^(-alpha/2)` and
//! `max(h,r)^-alpha` path-loss laws, cross-validated by an internal Monte
//! Carlo simulator.

// `!(x > 0.0)` deliberately rejects NaN along with the out-of-domain values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod mcsim;
pub mod pathloss;
pub mod quad;
pub mod rate;
pub mod scenario;
pub mod specfun;

pub use error::{Error, Result};
pub use geometry::{Deployment, DeploymentKind, PointSet, Points};
pub use pathloss::{PathLossKind, PathLossModel};
pub use quad::QuadratureControl;
pub use scenario::Scenario;
