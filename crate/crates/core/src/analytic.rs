//! Analytical coverage probability: Laplace transforms of the interference
//! field for PPP, line and hex deployments, the generic quadrature form, and
//! the closed-form cases.

use crate::error::{Error, Result};
use crate::geometry::{hex_points_sorted, DeploymentKind, SQRT3};
use crate::pathloss::{PathLossKind, PathLossModel};
use crate::quad::{integrate, integrate_to_inf, QuadratureControl};
use crate::scenario::Scenario;
use crate::specfun::{hurwitz_zeta, SeriesControl};
use std::cell::RefCell;

pub use crate::quad::Quadrature;

const FRAC_PI_3: f64 = std::f64::consts::FRAC_PI_3;

/// Log-product terms smaller than this are absorbed into the analytic tail
/// of the lattice products. The tails carry the series of `ln(1+x)` through
/// third order, so the truncation error of the tail itself is below
/// `threshold^3` of the leading tail mass; what remains is the
/// lattice-vs-continuum boundary error of the hex tail, of order
/// `threshold * sqrt(R/ISD)`.
const LINEAR_TAIL_THRESHOLD: f64 = 1e-4;

/// Ratio h/ISD above which the lattice sum in the hex Laplace transform is
/// evaluated as its continuum integral; the Poisson-summation error is below
/// `exp(-4 pi h / (sqrt3 ISD))`, i.e. < 1e-9 at the switch point.
const HEX_CONTINUUM_RATIO: f64 = 3.0;

/// `ln(1+x)` with a cheap series on the small-x fast path of the lattice
/// loops.
#[inline]
fn ln1p_fast(x: f64) -> f64 {
    if x < 1e-4 {
        x * (1.0 - x * (0.5 - x / 3.0))
    } else {
        x.ln_1p()
    }
}

/// `rho_d(T, alpha) = T^(d/alpha) * int_{T^(-d/alpha)}^inf du/(1 + u^(alpha/d))`.
///
/// Evaluated through `int_0^inf du/(1+u^b) = pi/(b sin(pi/b))` minus the
/// finite head (adaptive quadrature), or an alternating tail series when the
/// lower limit is large; the arctan special case at `alpha/d = 2` serves as
/// an independent oracle in the tests.
pub fn rho(threshold: f64, alpha: f64, d: u8, ctrl: &QuadratureControl) -> Result<f64> {
    let dd = d as f64;
    if alpha <= dd {
        return Err(Error::Divergence(format!("rho requires alpha > d, got alpha = {alpha}, d = {d}")));
    }
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("rho requires T > 0, got {threshold}")));
    }
    let b = alpha / dd;
    let lower = threshold.powf(-dd / alpha);
    let scale = threshold.powf(dd / alpha);
    if lower >= 2.0 {
        // int_L^inf 1/(1+u^b) du = sum_k (-1)^k L^(1-b(k+1)) / (b(k+1)-1)
        let mut acc = 0.0;
        for k in 0..200 {
            let e = b * (k as f64 + 1.0);
            let term = lower.powf(1.0 - e) / (e - 1.0);
            let term = if k % 2 == 0 { term } else { -term };
            acc += term;
            if term.abs() < 1e-16 * acc.abs() {
                break;
            }
        }
        return Ok(scale * acc);
    }
    let full = std::f64::consts::PI / (b * (std::f64::consts::PI / b).sin());
    let head = integrate(|u| 1.0 / (1.0 + u.powf(b)), 0.0, lower, ctrl)?;
    Ok(scale * (full - head.value))
}

/// Antenna height that keeps pc unchanged when the density moves to
/// `lambda`, along the countering trajectory `lambda h^d = c`.
pub fn countering_height(lambda: f64, c: f64, d: u8) -> f64 {
    (c / lambda).powf(1.0 / d as f64)
}

// ---------------------------------------------------------------------------
// Lattice Laplace transforms
// ---------------------------------------------------------------------------

/// Cached triangular-lattice geometry: points sorted by distance with their
/// squared norms, grown on demand.
pub(crate) struct HexLattice {
    ups: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
    d2: Vec<f64>,
    radius: f64,
}

impl HexLattice {
    fn new(ups: f64) -> Self {
        Self { ups, xs: Vec::new(), ys: Vec::new(), d2: Vec::new(), radius: 0.0 }
    }

    fn ensure_radius(&mut self, radius: f64) {
        if radius <= self.radius {
            return;
        }
        let radius = radius.max(6.0 * self.ups) * 1.05;
        let pts = hex_points_sorted(self.ups, radius);
        self.xs = pts.iter().map(|p| p[0]).collect();
        self.ys = pts.iter().map(|p| p[1]).collect();
        self.d2 = pts.iter().map(|p| p[0] * p[0] + p[1] * p[1]).collect();
        self.radius = radius;
    }
}

/// Distance beyond which log terms drop under the linear-tail threshold:
/// solves `(s/mu) l(v) = eps` for v.
fn linear_switch_radius(model: &PathLossModel, s_over_mu: f64, eps: f64) -> f64 {
    if s_over_mu <= 0.0 {
        return 0.0;
    }
    let d2 = (s_over_mu / eps).powf(2.0 / model.alpha) - model.h * model.h;
    d2.max(0.0).sqrt()
}

/// `-ln L(s)` for the two-sided line lattice at serving offset `r`:
/// explicit `ln(1+x)` terms while they exceed the linear threshold, then an
/// exact zeta tail (binomial expansion in `(h/ISD)^2` for the bounded model).
fn neg_log_laplace_line(model: &PathLossModel, s_over_mu: f64, r: f64, ups: f64) -> Result<f64> {
    if s_over_mu == 0.0 {
        return Ok(0.0);
    }
    let alpha = model.alpha;
    let a = r / ups;
    let c = match model.kind {
        PathLossKind::L1 => model.h / ups,
        _ => 0.0,
    };
    // direct terms: continue past the l2 kink and past i ~ 2c so the tail
    // expansion below converges geometrically
    let v_switch = linear_switch_radius(model, s_over_mu, LINEAR_TAIL_THRESHOLD);
    let mut i_min = (v_switch / ups + a).ceil() as u64 + 1;
    i_min = i_min.max((2.0 * c).ceil() as u64 + 2);
    if model.kind == PathLossKind::L2 {
        i_min = i_min.max((model.h / ups).ceil() as u64 + 2);
    }
    if i_min > 200_000_000 {
        return Err(Error::TruncationFailure(format!(
            "line product needs {i_min} explicit terms"
        )));
    }
    let mut acc = 0.0;
    for i in 1..i_min {
        let ii = i as f64;
        let dp = ii * ups + r;
        let dm = ii * ups - r;
        acc += ln1p_fast(s_over_mu * model.gain_d2(dp * dp));
        acc += ln1p_fast(s_over_mu * model.gain_d2(dm * dm));
    }
    // ln(1+x) tail through third order; each power sum is an exact zeta sum
    let mut sign = 1.0;
    let mut s_pow = s_over_mu;
    for j in 1..=3u32 {
        acc += sign / j as f64 * s_pow * lattice_power_sum_line(alpha * j as f64, c, a, i_min, ups)?;
        sign = -sign;
        s_pow *= s_over_mu;
    }
    Ok(acc)
}

/// `sum_{i>=n} [((i+a)^2 ups^2 + (c ups)^2)^(-s/2) + (a -> -a)]` as a
/// binomial series of Hurwitz zetas in `(c/(n+-a))^2`; exact lattice tail.
fn lattice_power_sum_line(s_exp: f64, c: f64, a: f64, n: u64, ups: f64) -> Result<f64> {
    let sc = SeriesControl::default();
    let n = n as f64;
    let mut coeff = 1.0;
    let mut c_pow = 1.0;
    let mut tail = 0.0;
    for k in 0..60u32 {
        let e = s_exp + 2.0 * k as f64;
        let z = hurwitz_zeta(e, n + a, &sc)? + hurwitz_zeta(e, n - a, &sc)?;
        let term = coeff * c_pow * z;
        tail += if k % 2 == 0 { term } else { -term };
        if term.abs() < 1e-14 * tail.abs() {
            break;
        }
        coeff *= (0.5 * s_exp + k as f64) / (k as f64 + 1.0);
        c_pow *= c * c;
    }
    Ok(ups.powf(-s_exp) * tail)
}

/// `-ln L(s)` for the hex lattice with the user at `(ux, uy)` and serving BS
/// at the lattice origin.
///
/// Deep-UDN regime (`h >= 3 ISD`): the lattice sum equals its continuum
/// integral to Poisson-summation accuracy, with the serving term added back.
/// Otherwise: explicit terms over the cached points out to `n_explicit`
/// (frozen per coverage call so the integrand stays smooth across the
/// serving-geometry quadrature), then a continuum tail from `r_tail`.
fn neg_log_laplace_hex(
    model: &PathLossModel,
    s_over_mu: f64,
    ux: f64,
    uy: f64,
    lattice: &HexLattice,
    split: &HexSplit,
    ctrl: &QuadratureControl,
) -> Result<f64> {
    if s_over_mu == 0.0 {
        return Ok(0.0);
    }
    let ups = lattice.ups;
    let lambda = 2.0 / (ups * ups * SQRT3);
    let r2_serv = ux * ux + uy * uy;

    if model.kind != PathLossKind::L0 && model.h >= HEX_CONTINUUM_RATIO * ups {
        // sum over the whole lattice as lambda * integral, minus the serving BS
        let full = continuum_log_integral(model, s_over_mu, 0.0, ctrl)?;
        return Ok(lambda * full - ln1p_fast(s_over_mu * model.gain_d2(r2_serv)));
    }

    let mut acc = 0.0;
    for idx in 0..split.n_explicit {
        let dx = lattice.xs[idx] - ux;
        let dy = lattice.ys[idx] - uy;
        acc += ln1p_fast(s_over_mu * model.gain_d2(dx * dx + dy * dy));
    }
    // continuum tail, ln(1+x) through third order; the remaining error is
    // the lattice-vs-continuum boundary term
    let mut sign = 1.0;
    let mut s_pow = s_over_mu;
    for j in 1..=3u32 {
        acc += sign / j as f64 * lambda * s_pow * power_tail_integral(model, split.r_tail, j);
        sign = -sign;
        s_pow *= s_over_mu;
    }
    Ok(acc)
}

/// Explicit/tail split of the hex product, fixed for one coverage call.
struct HexSplit {
    n_explicit: usize,
    r_tail: f64,
}

impl HexSplit {
    /// Splits at the radius where the largest `s` of the call drops under the
    /// linear threshold; `s_max` bounds `s` over the serving-geometry domain.
    fn for_max_argument(model: &PathLossModel, s_max: f64, lattice: &mut HexLattice) -> Self {
        let r_cell = lattice.ups / SQRT3;
        let v_switch = linear_switch_radius(model, s_max, LINEAR_TAIL_THRESHOLD) + r_cell;
        lattice.ensure_radius(v_switch);
        let cut_d2 = v_switch * v_switch;
        let n_explicit = lattice.d2.partition_point(|&d2| d2 <= cut_d2);
        let r_tail = if n_explicit < lattice.d2.len() {
            lattice.d2[n_explicit].sqrt()
        } else {
            lattice.radius
        };
        Self { n_explicit, r_tail }
    }
}

/// `int_{r0}^inf ln(1 + (s/mu) l(v)) 2 pi v dv` by radial quadrature.
fn continuum_log_integral(
    model: &PathLossModel,
    s_over_mu: f64,
    r0: f64,
    ctrl: &QuadratureControl,
) -> Result<f64> {
    // substitute w = v^2: pi * int ln(1 + (s/mu) l(sqrt w)) dw
    let f = |w: f64| ln1p_fast(s_over_mu * model.gain_d2(w));
    let scale = (model.h * model.h).max(1e-300);
    let q = integrate_to_inf(f, r0 * r0, scale, ctrl)?;
    Ok(std::f64::consts::PI * q.value)
}

/// `int_R^inf l(v)^j 2 pi v dv` in closed form (valid beyond the l2 kink).
fn power_tail_integral(model: &PathLossModel, big_r: f64, j: u32) -> f64 {
    let e = model.alpha * j as f64;
    match model.kind {
        PathLossKind::L1 => {
            2.0 * std::f64::consts::PI * (big_r * big_r + model.h * model.h).powf(1.0 - e / 2.0)
                / (e - 2.0)
        }
        _ => {
            let r = big_r.max(model.h);
            2.0 * std::f64::consts::PI * r.powf(2.0 - e) / (e - 2.0)
        }
    }
}

// ---------------------------------------------------------------------------
// Laplace transform of the interference (public surface)
// ---------------------------------------------------------------------------

/// Laplace transform `E[exp(-s I_r)]` of the cumulated interference seen by
/// the typical user at serving distance `r` (and angle `theta` for HEX).
pub fn laplace_interference(
    scenario: &Scenario,
    s: f64,
    r: f64,
    theta: Option<f64>,
    ctrl: &QuadratureControl,
) -> Result<f64> {
    scenario.validate()?;
    if s < 0.0 {
        return Err(Error::Domain(format!("Laplace argument must be nonnegative, got {s}")));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let s_over_mu = s / scenario.mu;
    let model = &scenario.model;
    let dep = &scenario.deployment;
    match dep.kind {
        DeploymentKind::Ppp => {
            let d = dep.dimension as f64;
            let c_d = if dep.dimension == 1 { 2.0 } else { std::f64::consts::PI };
            let f = |v: f64| {
                let x = s_over_mu * model.gain_d2(v * v);
                x / (1.0 + x) * v.powf(d - 1.0)
            };
            let width = r.max(dep.isd()).max(model.h).max(f64::MIN_POSITIVE);
            let q = integrate_to_inf(f, r, width, ctrl)?;
            Ok((-(d * c_d * dep.lambda) * q.value).exp())
        }
        DeploymentKind::Line => {
            let neg_log = neg_log_laplace_line(model, s_over_mu, r, dep.isd())?;
            Ok((-neg_log).exp())
        }
        DeploymentKind::Hex => {
            let theta = theta.ok_or_else(|| Error::Domain("HEX Laplace requires theta".into()))?;
            let mut lattice = HexLattice::new(dep.isd());
            let split = HexSplit::for_max_argument(model, s_over_mu, &mut lattice);
            let neg_log = neg_log_laplace_hex(
                model,
                s_over_mu,
                r * theta.cos(),
                r * theta.sin(),
                &lattice,
                &split,
                ctrl,
            )?;
            Ok((-neg_log).exp())
        }
    }
}

// ---------------------------------------------------------------------------
// Coverage probability
// ---------------------------------------------------------------------------

/// Coverage probability `P(SINR > T)`: the closed form when one matches the
/// scenario, the general lemma quadrature otherwise.
pub fn coverage_probability(scenario: &Scenario, threshold: f64, ctrl: &QuadratureControl) -> Result<f64> {
    match coverage_closed_form(scenario, threshold, ctrl) {
        Err(Error::UnsupportedCase(_)) => coverage_probability_general(scenario, threshold, ctrl),
        other => other,
    }
}

/// Coverage probability along the general quadrature path (never dispatches
/// to a closed form; the cross-validation target for them).
pub fn coverage_probability_general(
    scenario: &Scenario,
    threshold: f64,
    ctrl: &QuadratureControl,
) -> Result<f64> {
    scenario.validate()?;
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("coverage requires T > 0, got {threshold}")));
    }
    let ctx = CoverageCtx::new(scenario, *ctrl);
    ctx.pc_general(threshold)
}

/// Closed-form coverage probability; `UnsupportedCase` when the scenario does
/// not match one of the closed-form cases.
pub fn coverage_closed_form(scenario: &Scenario, threshold: f64, ctrl: &QuadratureControl) -> Result<f64> {
    scenario.validate()?;
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("coverage requires T > 0, got {threshold}")));
    }
    let t = threshold;
    let model = &scenario.model;
    let dep = &scenario.deployment;
    let lambda = dep.lambda;
    match (dep.kind, dep.dimension, model.kind) {
        (DeploymentKind::Ppp, 2, PathLossKind::L0 | PathLossKind::L1) if scenario.is_noiseless() => {
            let r2 = rho(t, model.alpha, 2, ctrl)?;
            Ok((-lambda * std::f64::consts::PI * model.h * model.h * r2).exp() / (1.0 + r2))
        }
        (DeploymentKind::Ppp, 1, PathLossKind::L0) if scenario.is_noiseless() => {
            let r1 = rho(t, model.alpha, 1, ctrl)?;
            Ok(1.0 / (1.0 + r1))
        }
        (DeploymentKind::Ppp, 1, PathLossKind::L1) if scenario.is_noiseless() && model.alpha == 2.0 => {
            // single-integral form of the 1D Laplace exponent at alpha = 2:
            // xi(T, 2, k) = T (k^2 + b^2) arctan(A/k) / A, A = sqrt(T(k^2+b^2) + b^2)
            let b = lambda * model.h;
            let f = |k: f64| {
                let x = t * (b * b + k * k);
                let a = (x + b * b).sqrt();
                let at = if k == 0.0 { std::f64::consts::FRAC_PI_2 } else { (a / k).atan() };
                (-2.0 * k).exp() * (-2.0 * x * at / a).exp()
            };
            let q = integrate_to_inf(f, 0.0, 0.5, ctrl)?;
            Ok(2.0 * q.value)
        }
        (DeploymentKind::Line, _, PathLossKind::L0 | PathLossKind::L1) if model.alpha == 2.0 => {
            // hyperbolic form of the two-sided product at alpha = 2,
            // with noise carried inside the integrand
            let big_a = 2.0 * std::f64::consts::PI * lambda * model.h;
            let noise_scale = scenario.mu * t * scenario.sigma2 / (2.0 * std::f64::consts::PI * lambda).powi(2);
            let f = |x: f64| {
                if big_a == 0.0 && x < 1e-6 {
                    return (-noise_scale * x * x).exp() / (1.0 + t);
                }
                let big_b = (big_a * big_a * (1.0 + t) + x * x * t).sqrt();
                let num = ln_cosh_minus_cos(big_a, x);
                let den = ln_cosh_minus_cos(big_b, x);
                (-noise_scale * x * x).exp() * (num - den).exp()
            };
            let q = layered_integrate(f, 0.0, std::f64::consts::PI, cosh_ratio_layer(big_a, t), ctrl)?;
            Ok((1.0 + t) / std::f64::consts::PI * q.value)
        }
        _ => Err(Error::UnsupportedCase(format!(
            "{:?}/{}D/{:?}, sigma2 = {}, alpha = {}",
            dep.kind, dep.dimension, model.kind, scenario.sigma2, model.alpha
        ))),
    }
}

/// Integrate over `[a, b]` when the integrand lives in a boundary layer of
/// width `layer` at `a`: a layer panel keeps the adaptive scheme from
/// sampling past the feature and reporting zero.
pub(crate) fn layered_integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    layer: f64,
    ctrl: &QuadratureControl,
) -> Result<Quadrature> {
    let w = 20.0 * layer;
    if w > 0.0 && a + w < b {
        let head = integrate(&f, a, a + w, ctrl)?;
        let tail = integrate(&f, a + w, b, ctrl)?;
        Ok(Quadrature { value: head.value + tail.value, abs_error: head.abs_error + tail.abs_error })
    } else {
        integrate(&f, a, b, ctrl)
    }
}

/// Width of the small-x feature of `(cosh A - cos x)/(cosh B(x) - cos x)`
/// integrands, `B = sqrt(A^2 (1+T) + x^2 T)`: Gaussian decay of scale
/// `sqrt(2 A sqrt(1+T)/T)` rolling into exponential decay of scale
/// `1/sqrt(T)`.
pub(crate) fn cosh_ratio_layer(big_a: f64, t: f64) -> f64 {
    ((2.0 * big_a * (1.0 + t).sqrt() + 1.0) / t).sqrt()
}

/// `ln(cosh a - cos x)` for `a >= 0`, stable for large `a`.
pub(crate) fn ln_cosh_minus_cos(a: f64, x: f64) -> f64 {
    if a < 30.0 {
        (a.cosh() - x.cos()).ln()
    } else {
        // cosh a = e^a (1 + e^-2a)/2
        a - std::f64::consts::LN_2 + ((-2.0 * a).exp() - 2.0 * x.cos() * (-a).exp()).ln_1p()
    }
}

/// Shared evaluation context so that grid sweeps and the rate integral reuse
/// the hex lattice cache across coverage evaluations.
pub(crate) struct CoverageCtx<'a> {
    pub scenario: &'a Scenario,
    pub ctrl: QuadratureControl,
    hex: RefCell<Option<HexLattice>>,
}

impl<'a> CoverageCtx<'a> {
    pub fn new(scenario: &'a Scenario, ctrl: QuadratureControl) -> Self {
        Self { scenario, ctrl, hex: RefCell::new(None) }
    }

    /// Dispatching coverage: closed form when available.
    pub fn pc(&self, threshold: f64) -> Result<f64> {
        match coverage_closed_form(self.scenario, threshold, &self.ctrl) {
            Err(Error::UnsupportedCase(_)) => self.pc_general(threshold),
            other => other,
        }
    }

    pub fn pc_general(&self, threshold: f64) -> Result<f64> {
        let dep = &self.scenario.deployment;
        match (dep.kind, dep.dimension) {
            (DeploymentKind::Ppp, 1) => self.pc_ppp_1d(threshold),
            (DeploymentKind::Ppp, _) => self.pc_ppp_2d(threshold),
            (DeploymentKind::Line, _) => self.pc_line(threshold),
            (DeploymentKind::Hex, _) => self.pc_hex(threshold),
        }
    }

    /// 1D PPP: substitution k = lambda r normalizes the serving-distance
    /// factor to 2 e^(-2k); the Laplace exponent is the inner xi integral.
    fn pc_ppp_1d(&self, t: f64) -> Result<f64> {
        let sc = self.scenario;
        let model = &sc.model;
        let lambda = sc.deployment.lambda;
        let noise = sc.mu * t * sc.sigma2;
        let ctrl = self.ctrl;
        let inner_ctrl = QuadratureControl { abs_tol: ctrl.abs_tol * 0.1, ..ctrl };
        let f = |k: f64| -> f64 {
            let r = k / lambda;
            let l_r = model.gain_d2(r * r);
            // xi = int_k^inf dt / (1 + l(r) / (T l(t/lambda)))
            let xi = integrate_to_inf(
                |tt: f64| {
                    let l_t = model.gain_d2((tt / lambda) * (tt / lambda));
                    let x = t * l_t / l_r;
                    x / (1.0 + x)
                },
                k,
                k.max(lambda * model.h).max(1.0),
                &inner_ctrl,
            )
            .map(|q| q.value)
            .unwrap_or(f64::INFINITY);
            let noise_term = if noise > 0.0 { (-noise / l_r).exp() } else { 1.0 };
            (-2.0 * k).exp() * noise_term * (-2.0 * xi).exp()
        };
        let q = integrate_to_inf(f, 0.0, 0.5, &ctrl)?;
        Ok(2.0 * q.value)
    }

    /// 2D PPP for L0/L1: the Laplace transform collapses to
    /// `exp(-lambda pi (r^2+h^2) rho_2)`; substitution k = lambda r^2.
    /// Other models go through the generic serving-distance integral.
    fn pc_ppp_2d(&self, t: f64) -> Result<f64> {
        let sc = self.scenario;
        let model = &sc.model;
        let lambda = sc.deployment.lambda;
        let ctrl = self.ctrl;
        if matches!(model.kind, PathLossKind::L0 | PathLossKind::L1) {
            let r2 = rho(t, model.alpha, 2, &ctrl)?;
            let pi = std::f64::consts::PI;
            let prefactor = (-lambda * pi * model.h * model.h * r2).exp();
            let noise = sc.mu * t * sc.sigma2;
            let f = |k: f64| {
                let noise_term = if noise > 0.0 {
                    (-noise * sc.model.inv_gain_d2(k / lambda)).exp()
                } else {
                    1.0
                };
                noise_term * (-pi * k * (1.0 + r2)).exp()
            };
            let q = integrate_to_inf(f, 0.0, 1.0 / (1.0 + r2), &ctrl)?;
            return Ok(pi * prefactor * q.value);
        }
        // generic: pc = int f_r(r) e^{-mu T sigma^2 / l(r)} L_I(mu T / l(r)) dr
        let pi = std::f64::consts::PI;
        let f = |k: f64| -> f64 {
            let r = (k / lambda).sqrt();
            let inv_l = model.inv_gain_d2(r * r);
            let s = sc.mu * t * inv_l;
            let lap = laplace_interference(sc, s, r, None, &ctrl).unwrap_or(0.0);
            let noise_term = if sc.sigma2 > 0.0 { (-sc.mu * t * sc.sigma2 * inv_l).exp() } else { 1.0 };
            (-pi * k).exp() * noise_term * lap
        };
        let q = integrate_to_inf(f, 0.0, 1.0 / pi, &ctrl)?;
        Ok(pi * q.value)
    }

    fn pc_line(&self, t: f64) -> Result<f64> {
        let sc = self.scenario;
        let model = &sc.model;
        let ups = sc.deployment.isd();
        let noise = sc.mu * t * sc.sigma2;
        let err = RefCell::new(None::<Error>);
        let f = |r: f64| -> f64 {
            let inv_l = model.inv_gain_d2(r * r);
            match neg_log_laplace_line(model, t * inv_l, r, ups) {
                Ok(neg_log) => {
                    let noise_term = if noise > 0.0 { (-noise * inv_l).exp() } else { 1.0 };
                    noise_term * (-neg_log).exp()
                }
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        // at extreme thresholds only serving distances r < ~ISD T^(-1/alpha)
        // survive the product
        let layer = 0.5 * ups * t.powf(-1.0 / model.alpha).min(1.0);
        let q = layered_integrate(f, 0.0, ups / 2.0, layer, &self.ctrl)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(2.0 / ups * q.value)
    }

    fn pc_hex(&self, t: f64) -> Result<f64> {
        let sc = self.scenario;
        let model = &sc.model;
        let ups = sc.deployment.isd();
        let noise = sc.mu * t * sc.sigma2;
        let mut hex = self.hex.borrow_mut();
        let lattice = hex.get_or_insert_with(|| HexLattice::new(ups));
        // freeze the explicit/tail split at the worst serving distance so the
        // integrand below is smooth in (r, theta)
        let r_cell = ups / SQRT3;
        let s_max = t * model.inv_gain_d2(r_cell * r_cell);
        let r_needed = linear_switch_radius(model, s_max, LINEAR_TAIL_THRESHOLD) + r_cell;
        if !(model.kind != PathLossKind::L0 && model.h >= HEX_CONTINUUM_RATIO * ups)
            && r_needed > 50_000.0 * ups
        {
            return Err(Error::TruncationFailure(format!(
                "hex product needs points out to {:.1} ISD",
                r_needed / ups
            )));
        }
        let split = HexSplit::for_max_argument(model, s_max, lattice);
        let lattice: &HexLattice = lattice;
        // the lattice product itself is accurate to ~1e-4 * sqrt(R/ISD) of
        // log L, so sub-1e-7 quadrature tolerances only burn subdivisions
        let ctrl = QuadratureControl {
            abs_tol: self.ctrl.abs_tol.max(1e-10),
            rel_tol: self.ctrl.rel_tol.max(1e-7),
            max_subdivisions: self.ctrl.max_subdivisions.min(80),
            product_truncation: self.ctrl.product_truncation,
        };
        let inner_ctrl = QuadratureControl { max_subdivisions: 50, ..ctrl };
        let err = RefCell::new(None::<Error>);
        let outer = |theta: f64| -> f64 {
            let r_max = ups / (2.0 * (theta + FRAC_PI_3).sin());
            let (cth, sth) = (theta.cos(), theta.sin());
            let inner = |r: f64| -> f64 {
                let inv_l = model.inv_gain_d2(r * r);
                match neg_log_laplace_hex(model, t * inv_l, r * cth, r * sth, lattice, &split, &inner_ctrl) {
                    Ok(neg_log) => {
                        let noise_term = if noise > 0.0 { (-noise * inv_l).exp() } else { 1.0 };
                        noise_term * (-neg_log).exp() * r
                    }
                    Err(e) => {
                        err.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            };
            let layer = r_max * t.powf(-1.0 / model.alpha).min(1.0);
            layered_integrate(inner, 0.0, r_max, layer, &inner_ctrl)
                .map(|q| q.value)
                .unwrap_or(0.0)
        };
        let q = integrate(outer, 0.0, FRAC_PI_3, &ctrl)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        Ok(12.0 / (ups * ups * SQRT3) * q.value)
    }
}
