//! Per-cell ergodic rate, area spectral efficiency, deployment gain, and the
//! dense-network limits and bounds.

use crate::analytic::{cosh_ratio_layer, layered_integrate, ln_cosh_minus_cos, CoverageCtx};
use crate::error::{Error, Result};
use crate::geometry::{interference_bounds_hex, DeploymentKind};
use crate::pathloss::{PathLossKind, PathLossModel};
use crate::quad::{integrate, integrate_to_inf, QuadratureControl};
use crate::scenario::Scenario;
use crate::specfun::{self, gamma, SeriesControl};

pub const LN2: f64 = std::f64::consts::LN_2;

/// How a rate number was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateMethod {
    Quadrature,
    ClosedForm,
    Limit,
    BoundPair,
}

/// A rate (bits/s/Hz per cell) or an ASE (bits/s/Hz/m^d), with provenance.
/// `BoundPair` results carry the lower bound in `value` and the upper bound
/// in `upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub value: f64,
    pub method: RateMethod,
    pub error_estimate: f64,
    pub upper: Option<f64>,
}

impl RateResult {
    fn quadrature(value: f64, err: f64) -> Self {
        Self { value, method: RateMethod::Quadrature, error_estimate: err, upper: None }
    }

    fn closed(value: f64) -> Self {
        Self { value, method: RateMethod::ClosedForm, error_estimate: 0.0, upper: None }
    }

    fn limit(value: f64) -> Self {
        Self { value, method: RateMethod::Limit, error_estimate: 0.0, upper: None }
    }

    fn bounds(lower: f64, upper: f64) -> Self {
        Self { value: lower, method: RateMethod::BoundPair, error_estimate: 0.0, upper: Some(upper) }
    }
}

/// Threshold below which the coverage tail no longer contributes to the rate
/// integral.
const PC_TAIL_CUTOFF: f64 = 1e-10;

/// Per-cell ergodic rate `tau = (1/ln2) int_{gamma0}^inf pc(e^t - 1) dt`.
///
/// The outer variable is integrated in t with geometric panel growth, reusing
/// one coverage context (and its lattice cache) across evaluations; the scan
/// stops once pc falls under `PC_TAIL_CUTOFF`.
pub fn ergodic_rate(scenario: &Scenario, ctrl: &QuadratureControl) -> Result<RateResult> {
    scenario.validate()?;
    let ctx = CoverageCtx::new(scenario, *ctrl);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut lo = scenario.gamma0;
    let mut width = 1.0 / 64.0;
    let mut settled = false;
    for _ in 0..200 {
        let q = integrate(
            |t| ctx.pc((t.exp() - 1.0).max(1e-300)).unwrap_or(0.0),
            lo,
            lo + width,
            ctrl,
        )?;
        value += q.value;
        err += q.abs_error;
        lo += width;
        width *= 2.0;
        let pc_edge = ctx.pc(lo.exp() - 1.0).unwrap_or(0.0);
        if pc_edge < PC_TAIL_CUTOFF && q.value < ctrl.abs_tol.max(1e-12 * value) {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(Error::NonConvergence("rate integral did not settle".into()));
    }
    Ok(RateResult::quadrature(value / LN2, err / LN2))
}

/// Area spectral efficiency `lambda * tau`.
pub fn ase(scenario: &Scenario, ctrl: &QuadratureControl) -> Result<RateResult> {
    let tau = ergodic_rate(scenario, ctrl)?;
    let lambda = scenario.deployment.lambda;
    Ok(RateResult {
        value: lambda * tau.value,
        method: tau.method,
        error_estimate: lambda * tau.error_estimate,
        upper: None,
    })
}

/// Ratio of the regular-lattice per-cell rate to the PPP per-cell rate at
/// matched density and dimension.
pub fn deployment_gain(
    lambda: f64,
    model: &PathLossModel,
    d: u8,
    sigma2: f64,
    ctrl: &QuadratureControl,
) -> Result<f64> {
    let regular = match d {
        1 => crate::geometry::Deployment::line(lambda)?,
        _ => crate::geometry::Deployment::hex(lambda)?,
    };
    let irregular = crate::geometry::Deployment::ppp(d, lambda)?;
    let mut reg = Scenario::noiseless(regular, *model);
    reg.sigma2 = sigma2;
    let mut irr = Scenario::noiseless(irregular, *model);
    irr.sigma2 = sigma2;
    let tau_reg = ergodic_rate(&reg, ctrl)?.value;
    let tau_irr = ergodic_rate(&irr, ctrl)?.value;
    if tau_irr <= 0.0 {
        return Err(Error::Divergence("irregular rate vanished; gain undefined".into()));
    }
    Ok(tau_reg / tau_irr)
}

/// `sum_{i>=1} l(i ups)` for a bounded model on the 1D lattice: the one-sided
/// interference at a user collocated with its serving BS.
fn line_interference_one_sided(model: &PathLossModel, ups: f64) -> Result<f64> {
    let alpha = model.alpha;
    let sc = SeriesControl::default();
    match model.kind {
        PathLossKind::L1 => {
            let c = model.h / ups;
            let base = ups.powf(-alpha);
            if c == 0.0 {
                return Ok(base * specfun::hurwitz_zeta(alpha, 1.0, &sc)?);
            }
            match alpha {
                a if a == 2.0 => Ok(base * specfun::sum_inv_quadratic(c)?),
                a if a == 4.0 => Ok(base * specfun::sum_inv_quartic(c)?),
                a if a == 6.0 => Ok(base * specfun::sum_inv_sextic(c)?),
                _ => {
                    // direct head then binomial zeta tail in (c/n)^2
                    let n = (2.0 * c).ceil().max(8.0) as u64;
                    let mut acc = 0.0;
                    for i in 1..n {
                        acc += model.gain(i as f64 * ups)?;
                    }
                    let mut coeff = 1.0;
                    let mut c_pow = 1.0;
                    let mut tail = 0.0;
                    for k in 0..60u32 {
                        let z = specfun::hurwitz_zeta(alpha + 2.0 * k as f64, n as f64, &sc)?;
                        let term = coeff * c_pow * z;
                        tail += if k % 2 == 0 { term } else { -term };
                        if term.abs() < 1e-14 * tail.abs() {
                            break;
                        }
                        coeff *= (0.5 * alpha + k as f64) / (k as f64 + 1.0);
                        c_pow *= c * c;
                    }
                    Ok(acc + base * tail)
                }
            }
        }
        PathLossKind::L2 => {
            let n = (model.h / ups).floor() as u64;
            let mut acc = n as f64 * model.h.powf(-alpha);
            acc += ups.powf(-alpha) * specfun::hurwitz_zeta(alpha, (n + 1) as f64, &sc)?;
            Ok(acc)
        }
        PathLossKind::L0 => Err(Error::UnboundedModel("collocated user needs l(0) < inf".into())),
    }
}

/// Rate of a user collocated with its serving lattice BS, without fading:
/// `log2(1 + l(0) / (I0 + mu sigma^2))`.
///
/// Exact for the line lattice; a bound pair from the hex ring-sum bounds in
/// 2D.
pub fn tau0_collocated(scenario: &Scenario, _ctrl: &QuadratureControl) -> Result<RateResult> {
    scenario.validate()?;
    let model = &scenario.model;
    if model.kind == PathLossKind::L0 || model.h == 0.0 {
        return Err(Error::UnboundedModel("tau0 requires a bounded path-loss model".into()));
    }
    let dep = &scenario.deployment;
    let l0 = model.gain(0.0)?;
    let noise = scenario.mu * scenario.sigma2;
    match dep.kind {
        DeploymentKind::Line => {
            let i0 = 2.0 * line_interference_one_sided(model, dep.isd())?;
            Ok(RateResult::closed((1.0 + l0 / (i0 + noise)).log2()))
        }
        DeploymentKind::Hex => {
            let (i_lo, i_hi) = interference_bounds_hex(model, dep.isd())?;
            let lower = (1.0 + l0 / (i_hi + noise)).log2();
            let upper = (1.0 + l0 / (i_lo + noise)).log2();
            Ok(RateResult::bounds(lower, upper))
        }
        DeploymentKind::Ppp => Err(Error::UnsupportedCase(
            "collocated-user rate is defined for lattice deployments".into(),
        )),
    }
}

/// Exact dense-network ASE limit of the 1D network under the bounded model,
/// for the path-loss exponents with hyperbolic lattice sums.
pub fn ase_limit_1d(alpha: f64, h: f64) -> Result<RateResult> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("ase_limit_1d requires h > 0, got {h}")));
    }
    let v = if alpha == 2.0 {
        1.0 / (LN2 * std::f64::consts::PI * h)
    } else if alpha == 4.0 {
        2.0 / (LN2 * std::f64::consts::PI * h)
    } else if alpha == 6.0 {
        8.0 / (3.0 * LN2 * std::f64::consts::PI * h)
    } else {
        return Err(Error::UnsupportedCase(format!("ase_limit_1d supports alpha in {{2,4,6}}, got {alpha}")));
    };
    Ok(RateResult::limit(v))
}

/// Dense-network ASE lower bound:
/// 1D `1/(2 ln2 h (1 + Gamma(alpha-1)/Gamma(alpha)))`,
/// 2D `2 sqrt3 / (12 ln2 h^2 (1 + 2 Gamma(alpha-2)/Gamma(alpha-1)))`.
pub fn ase_lower_bound(d: u8, alpha: f64, h: f64) -> Result<RateResult> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("ase_lower_bound requires h > 0, got {h}")));
    }
    let v = match d {
        1 => {
            if alpha <= 1.0 {
                return Err(Error::Domain(format!("1D bound requires alpha > 1, got {alpha}")));
            }
            1.0 / (2.0 * LN2 * h * (1.0 + gamma(alpha - 1.0) / gamma(alpha)))
        }
        2 => {
            if alpha <= 2.0 {
                return Err(Error::Domain(format!("2D bound requires alpha > 2, got {alpha}")));
            }
            2.0 * 3f64.sqrt()
                / (12.0 * LN2 * h * h * (1.0 + 2.0 * gamma(alpha - 2.0) / gamma(alpha - 1.0)))
        }
        _ => return Err(Error::Domain(format!("dimension must be 1 or 2, got {d}"))),
    };
    Ok(RateResult::limit(v))
}

/// Dense-network ASE bracket for the 2D network at alpha = 4:
/// `2 sqrt3/(12 ln2 h^2) <= lim lambda tau <= 2 sqrt3/(9 ln2 h^2)`.
pub fn ase_bounds_2d_alpha4(h: f64) -> Result<(f64, f64)> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("ase_bounds_2d_alpha4 requires h > 0, got {h}")));
    }
    let s3 = 3f64.sqrt();
    Ok((2.0 * s3 / (12.0 * LN2 * h * h), 2.0 * s3 / (9.0 * LN2 * h * h)))
}

/// Noise-less regular-1D rate at alpha = 2 as the explicit double integral
/// over the hyperbolic coverage integrand (independent of the Definition-2
/// outer quadrature in [`ergodic_rate`]).
pub fn rate_closed_form_reg1d(
    lambda: f64,
    h: f64,
    kind: PathLossKind,
    alpha: f64,
    ctrl: &QuadratureControl,
) -> Result<RateResult> {
    if alpha != 2.0 {
        return Err(Error::UnsupportedCase(format!("regular-1D rate integral requires alpha = 2, got {alpha}")));
    }
    match kind {
        PathLossKind::L0 => {
            // tau = 2/(ln2 pi) int_0^inf k int_0^pi (1-cos x)/(cosh(x k)-cos x) dx dk
            let inner = |k: f64| -> f64 {
                layered_integrate(
                    |x: f64| {
                        if x < 1e-6 || (x * k) < 1e-8 {
                            // both differences are O(x^2)
                            return (1.0 - 0.5 * x * x / 6.0) / (1.0 + k * k);
                        }
                        let num = (1.0 - x.cos()).ln();
                        (num - ln_cosh_minus_cos(x * k, x)).exp()
                    },
                    0.0,
                    std::f64::consts::PI,
                    cosh_ratio_layer(0.0, (k * k).max(1e-12)),
                    ctrl,
                )
                .map(|q| q.value)
                .unwrap_or(0.0)
            };
            let q = integrate_to_inf(|k| k * inner(k), 0.0, 0.25, ctrl)?;
            Ok(RateResult::closed(2.0 / (LN2 * std::f64::consts::PI) * q.value))
        }
        PathLossKind::L1 => {
            // tau = 1/(ln2 pi) int_0^inf int_0^pi
            //   (cosh A - cos x)/(cosh sqrt(A^2(1+k) + x^2 k) - cos x) dx dk
            let big_a = 2.0 * std::f64::consts::PI * lambda * h;
            if big_a == 0.0 {
                return rate_closed_form_reg1d(lambda, h, PathLossKind::L0, alpha, ctrl);
            }
            let inner = |k: f64| -> f64 {
                layered_integrate(
                    |x: f64| {
                        let big_b = (big_a * big_a * (1.0 + k) + x * x * k).sqrt();
                        (ln_cosh_minus_cos(big_a, x) - ln_cosh_minus_cos(big_b, x)).exp()
                    },
                    0.0,
                    std::f64::consts::PI,
                    cosh_ratio_layer(big_a, k.max(1e-12)),
                    ctrl,
                )
                .map(|q| q.value)
                .unwrap_or(0.0)
            };
            let q = integrate_to_inf(inner, 0.0, 0.25, ctrl)?;
            Ok(RateResult::closed(1.0 / (LN2 * std::f64::consts::PI) * q.value))
        }
        PathLossKind::L2 => Err(Error::UnsupportedCase("no regular-1D rate integral for l2".into())),
    }
}
