//! Adaptive Gauss-Kronrod quadrature on finite intervals plus a
//! geometric-panel scheme for semi-infinite ranges with decaying integrands.

use crate::error::{Error, Result};

/// Tolerances for the quadrature and lattice-product evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Relative log-term threshold below which the infinite lattice products
    /// switch from explicit terms to an analytic tail.
    pub product_truncation: f64,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 200,
            product_truncation: 1e-12,
        }
    }
}

impl QuadratureControl {
    /// Relaxed tolerances for sweeps where per-point accuracy of ~1e-6 is
    /// enough (figure reproduction over many grid points).
    pub fn relaxed() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-6,
            max_subdivisions: 100,
            product_truncation: 1e-10,
        }
    }
}

/// Result of a quadrature: value plus an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
}

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_26,
    0.000_000_000_000_000_0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_93,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel; returns (integral, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, &v) in fv.iter().enumerate().take(7) {
        res_asc += WGK[j] * ((v - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Bisects the interval with the largest error estimate until the global
/// estimate meets `ctrl` or the subdivision budget is exhausted.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, ctrl: &QuadratureControl) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, abs_error: 0.0 });
    }
    struct Interval {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (v, e) = qk15(&f, a, b);
    let mut ivs = vec![Interval { a, b, value: v, err: e }];
    let mut total = v;
    let mut total_err = e;

    for _ in 0..ctrl.max_subdivisions {
        if total_err <= ctrl.abs_tol.max(ctrl.rel_tol * total.abs()) {
            break;
        }
        // split the worst interval
        let (idx, _) = ivs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let worst = ivs.swap_remove(idx);
        total -= worst.value;
        total_err -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable in f64
            total += worst.value;
            total_err += worst.err;
            break;
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = qk15(&f, lo, hi);
            total += v;
            total_err += e;
            ivs.push(Interval { a: lo, b: hi, value: v, err: e });
        }
    }

    if total_err > 1e3 * ctrl.abs_tol.max(ctrl.rel_tol * total.abs()) && total_err > 1e-6 {
        return Err(Error::NonConvergence(format!(
            "quadrature error {total_err:.3e} after {} subdivisions on [{a}, {b}]",
            ctrl.max_subdivisions
        )));
    }
    Ok(Quadrature { value: total, abs_error: total_err })
}

/// Integration of `f` over `[a, inf)` for integrands that eventually decay.
///
/// Panels grow geometrically; the scan stops when a panel contributes less
/// than the tolerance. `initial_width` sets the first panel and should match
/// the scale on which the integrand varies.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    initial_width: f64,
    ctrl: &QuadratureControl,
) -> Result<Quadrature> {
    let mut lo = a;
    let mut w = initial_width.max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut quiet_panels = 0;
    for _ in 0..256 {
        let q = integrate(&f, lo, lo + w, ctrl)?;
        total += q.value;
        total_err += q.abs_error;
        lo += w;
        w *= 2.0;
        let thresh = 0.25 * ctrl.abs_tol.max(ctrl.rel_tol * total.abs());
        if q.value.abs() <= thresh {
            // two consecutive quiet panels guard against oscillating integrands
            quiet_panels += 1;
            if quiet_panels >= 2 {
                return Ok(Quadrature { value: total, abs_error: total_err });
            }
        } else {
            quiet_panels = 0;
        }
    }
    Err(Error::NonConvergence(format!(
        "semi-infinite integral did not settle by x = {lo:.3e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let ctrl = QuadratureControl::default();
        let q = integrate(|x| 3.0 * x * x, 0.0, 2.0, &ctrl).unwrap();
        assert!((q.value - 8.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_tail() {
        let ctrl = QuadratureControl::default();
        let q = integrate_to_inf(|x| (-x * x).exp(), 0.0, 1.0, &ctrl).unwrap();
        assert!((q.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn power_law_tail() {
        let ctrl = QuadratureControl::default();
        // int_1^inf x^-4 dx = 1/3; decays fast enough for panel truncation
        let q = integrate_to_inf(|x| x.powi(-4), 1.0, 1.0, &ctrl).unwrap();
        assert!((q.value - 1.0 / 3.0).abs() < 1e-9, "got {}", q.value);
    }

    #[test]
    fn removable_spike_resolved() {
        let ctrl = QuadratureControl::default();
        // narrow bump requires subdivision
        let q = integrate(|x| (-(x - 0.3).powi(2) * 1e4).exp(), 0.0, 1.0, &ctrl).unwrap();
        let exact = (std::f64::consts::PI / 1e4).sqrt();
        assert!((q.value - exact).abs() < 1e-9 * exact.max(1.0));
    }
}
