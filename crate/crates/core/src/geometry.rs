//! Deployment point processes (PPP, line lattice, hex lattice), nearest-BS
//! distance distributions, and lattice interference bounds.

use crate::error::{Error, Result};
use crate::pathloss::{PathLossKind, PathLossModel};
use crate::specfun::{self, SeriesControl};
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Deployment kind. LINE is the 1D lattice, HEX the 2D triangular lattice of
/// hexagonal cells, PPP the homogeneous Poisson process in either dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeploymentKind {
    Ppp,
    Line,
    Hex,
}

/// A BS deployment: process kind, Euclidean dimension, and density in m^-d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deployment {
    pub kind: DeploymentKind,
    pub dimension: u8,
    pub lambda: f64,
}

impl Deployment {
    pub fn ppp(dimension: u8, lambda: f64) -> Result<Self> {
        Self { kind: DeploymentKind::Ppp, dimension, lambda }.validated()
    }

    pub fn line(lambda: f64) -> Result<Self> {
        Self { kind: DeploymentKind::Line, dimension: 1, lambda }.validated()
    }

    pub fn hex(lambda: f64) -> Result<Self> {
        Self { kind: DeploymentKind::Hex, dimension: 2, lambda }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.lambda > 0.0) {
            return Err(Error::InvalidScenario(format!("lambda must be positive, got {}", self.lambda)));
        }
        match (self.kind, self.dimension) {
            (DeploymentKind::Line, 1) | (DeploymentKind::Hex, 2) | (DeploymentKind::Ppp, 1 | 2) => Ok(self),
            (kind, d) => Err(Error::InvalidScenario(format!("{kind:?} is not defined in dimension {d}"))),
        }
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self.kind, DeploymentKind::Line | DeploymentKind::Hex)
    }

    /// (Mean) inter-site distance: 1/lambda in 1D, sqrt(2/(lambda sqrt3)) in 2D.
    pub fn isd(&self) -> f64 {
        match self.dimension {
            1 => 1.0 / self.lambda,
            _ => (2.0 / (self.lambda * SQRT3)).sqrt(),
        }
    }

    /// Density from an inter-site distance, inverse of [`Deployment::isd`].
    pub fn lambda_from_isd(dimension: u8, isd: f64) -> f64 {
        match dimension {
            1 => 1.0 / isd,
            _ => 2.0 / (isd * isd * SQRT3),
        }
    }
}

/// Coordinates of a realized deployment.
#[derive(Debug, Clone, PartialEq)]
pub enum Points {
    One(Vec<f64>),
    Two(Vec<[f64; 2]>),
}

impl Points {
    pub fn len(&self) -> usize {
        match self {
            Points::One(v) => v.len(),
            Points::Two(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A realized deployment inside a centered window, with the user at the
/// origin by convention.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub points: Points,
    pub window_radius: f64,
    /// Index of the serving (nearest) BS, when one has been designated.
    pub origin_excluded_index: Option<usize>,
}

impl PointSet {
    /// Squared distances from the origin, in point order.
    pub fn squared_distances(&self) -> Vec<f64> {
        match &self.points {
            Points::One(v) => v.iter().map(|x| x * x).collect(),
            Points::Two(v) => v.iter().map(|p| p[0] * p[0] + p[1] * p[1]).collect(),
        }
    }

    /// Index and distance of the point nearest the origin.
    pub fn nearest(&self) -> Option<(usize, f64)> {
        let d2 = self.squared_distances();
        let (i, best) = d2
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
        Some((i, best.sqrt()))
    }

    /// CSV export, one point per row, columns `x[,y]`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        match &self.points {
            Points::One(v) => {
                writeln!(w, "x")?;
                for x in v {
                    writeln!(w, "{x:.16e}")?;
                }
            }
            Points::Two(v) => {
                writeln!(w, "x,y")?;
                for p in v {
                    writeln!(w, "{:.16e},{:.16e}", p[0], p[1])?;
                }
            }
        }
        Ok(())
    }
}

/// Draw one deployment realization inside a window of the given radius.
///
/// PPP: Poisson count, uniform placement. LINE/HEX: every lattice point in
/// the window after a uniform lattice offset (plus a uniform rotation for
/// HEX), so the origin sees a stationary process.
pub fn sample_deployment<R: Rng + ?Sized>(dep: &Deployment, window_radius: f64, rng: &mut R) -> Result<PointSet> {
    if !(window_radius > 0.0) {
        return Err(Error::Domain(format!("window_radius must be positive, got {window_radius}")));
    }
    let r = window_radius;
    let points = match (dep.kind, dep.dimension) {
        (DeploymentKind::Ppp, 1) => {
            let mean = dep.lambda * 2.0 * r;
            let n = Poisson::new(mean)
                .map_err(|e| Error::Domain(format!("poisson: {e}")))?
                .sample(rng) as usize;
            Points::One((0..n).map(|_| rng.gen_range(-r..r)).collect())
        }
        (DeploymentKind::Ppp, _) => {
            let mean = dep.lambda * std::f64::consts::PI * r * r;
            let n = Poisson::new(mean)
                .map_err(|e| Error::Domain(format!("poisson: {e}")))?
                .sample(rng) as usize;
            Points::Two(
                (0..n)
                    .map(|_| {
                        let radius = r * rng.gen::<f64>().sqrt();
                        let angle = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
                        [radius * angle.cos(), radius * angle.sin()]
                    })
                    .collect(),
            )
        }
        (DeploymentKind::Line, _) => {
            let ups = dep.isd();
            let offset = rng.gen::<f64>() * ups;
            let mut v = Vec::new();
            let i_lo = ((-r - offset) / ups).ceil() as i64;
            let i_hi = ((r - offset) / ups).floor() as i64;
            for i in i_lo..=i_hi {
                v.push(offset + i as f64 * ups);
            }
            Points::One(v)
        }
        (DeploymentKind::Hex, _) => {
            let ups = dep.isd();
            // uniform offset in the fundamental cell, then a uniform rotation
            let a = rng.gen::<f64>();
            let b = rng.gen::<f64>();
            let (ox, oy) = (ups * (a + b / 2.0), ups * b * SQRT3 / 2.0);
            let phi = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
            let (c, s) = (phi.cos(), phi.sin());
            let mut v = Vec::new();
            let k = (r / ups).ceil() as i64 + 2;
            for n in -k..=k {
                for m in -2 * k..=2 * k {
                    let x = ups * (m as f64 + n as f64 / 2.0) + ox;
                    let y = ups * n as f64 * SQRT3 / 2.0 + oy;
                    let (rx, ry) = (c * x - s * y, s * x + c * y);
                    if rx * rx + ry * ry <= r * r {
                        v.push([rx, ry]);
                    }
                }
            }
            Points::Two(v)
        }
    };
    Ok(PointSet { points, window_radius: r, origin_excluded_index: None })
}

/// Nearest-BS distance density at `r` (joint density in `(r, theta)` for
/// HEX, where `theta` spans the folded cell sector `[0, pi/3]`).
pub fn nearest_distance_pdf(dep: &Deployment, r: f64, theta: Option<f64>) -> Result<f64> {
    if r < 0.0 {
        return Ok(0.0);
    }
    match dep.kind {
        DeploymentKind::Ppp => {
            let (c_d, d) = match dep.dimension {
                1 => (2.0, 1.0),
                _ => (std::f64::consts::PI, 2.0),
            };
            let rd = r.powf(d);
            Ok(c_d * d * r.powf(d - 1.0) * dep.lambda * (-c_d * dep.lambda * rd).exp())
        }
        DeploymentKind::Line => {
            let ups = dep.isd();
            Ok(if r <= ups / 2.0 { 2.0 / ups } else { 0.0 })
        }
        DeploymentKind::Hex => {
            let theta = theta.ok_or_else(|| Error::Domain("HEX pdf requires theta".into()))?;
            if !(0.0..=std::f64::consts::FRAC_PI_3).contains(&theta) {
                return Err(Error::Domain(format!("theta must lie in [0, pi/3], got {theta}")));
            }
            let ups = dep.isd();
            let r_max = ups / (2.0 * (theta + std::f64::consts::FRAC_PI_3).sin());
            Ok(if r <= r_max { 12.0 * r / (ups * ups * SQRT3) } else { 0.0 })
        }
    }
}

/// Triangular-lattice points around the origin, origin excluded, sorted by
/// distance, out to `radius`. Shared by the lattice Laplace transforms and
/// the interference oracles.
pub fn hex_points_sorted(ups: f64, radius: f64) -> Vec<[f64; 2]> {
    let k = (radius / ups).ceil() as i64 + 2;
    let r2 = radius * radius;
    let mut pts = Vec::new();
    for n in -k..=k {
        for m in -2 * k..=2 * k {
            if n == 0 && m == 0 {
                continue;
            }
            let x = ups * (m as f64 + n as f64 / 2.0);
            let y = ups * n as f64 * SQRT3 / 2.0;
            let d2 = x * x + y * y;
            if d2 <= r2 && d2 > 0.0 {
                pts.push([x, y]);
            }
        }
    }
    pts.sort_by(|a, b| {
        let da = a[0] * a[0] + a[1] * a[1];
        let db = b[0] * b[0] + b[1] * b[1];
        da.partial_cmp(&db).unwrap()
    });
    pts
}

/// Ring-sum bounds on the interference cumulated at a lattice point of a hex
/// deployment with inter-site distance `ups`:
/// `sum_{k>=1} 6k l(ups k) < I0 < 6 l(ups) + sum_{k>=2} 6k l(ups sqrt3/2 k)`.
pub fn interference_bounds_hex(model: &PathLossModel, ups: f64) -> Result<(f64, f64)> {
    if !(ups > 0.0) {
        return Err(Error::Domain(format!("inter-site distance must be positive, got {ups}")));
    }
    if model.kind == PathLossKind::L0 && model.alpha <= 2.0 {
        return Err(Error::Divergence(format!(
            "hex ring sum diverges for l0 with alpha = {} <= 2",
            model.alpha
        )));
    }
    let lower = ring_sum(model, ups, 1)?;
    let upper = 6.0 * model.gain(ups)? + ring_sum(model, ups * SQRT3 / 2.0, 2)?;
    Ok((lower, upper))
}

/// `sum_{k>=k0} 6k l(spacing * k)` via the specfun closed forms where they
/// apply, controlled summation otherwise.
fn ring_sum(model: &PathLossModel, spacing: f64, k0: u64) -> Result<f64> {
    let ctrl = SeriesControl::default();
    let alpha = model.alpha;
    let head = |upto: u64| -> Result<f64> {
        let mut acc = 0.0;
        for k in k0..upto {
            acc += 6.0 * k as f64 * model.gain(spacing * k as f64)?;
        }
        Ok(acc)
    };
    match model.kind {
        PathLossKind::L0 => {
            // 6 spacing^-alpha * zeta(alpha - 1, k0)
            let z = specfun::hurwitz_zeta(alpha - 1.0, k0 as f64, &ctrl)?;
            Ok(6.0 * spacing.powf(-alpha) * z)
        }
        PathLossKind::L1 if alpha == 4.0 => {
            // 6 spacing^-4 sum_{k>=k0} k/(k^2 + (h/spacing)^2)^2
            let c = model.h / spacing;
            if c == 0.0 {
                let z = specfun::hurwitz_zeta(3.0, k0 as f64, &ctrl)?;
                return Ok(6.0 * spacing.powf(-4.0) * z);
            }
            Ok(6.0 * spacing.powf(-4.0) * specfun::tail_sum_quartic(k0 - 1, c)?)
        }
        PathLossKind::L2 => {
            // flat h^-alpha inside radius h, then a zeta tail
            let n = (model.h / spacing).floor() as u64;
            let n = n.max(k0 - 1);
            let mut acc = head(n + 1)?;
            let z = specfun::hurwitz_zeta(alpha - 1.0, (n + 1) as f64, &ctrl)?;
            acc += 6.0 * spacing.powf(-alpha) * z;
            Ok(acc)
        }
        _ => {
            // direct summation with an integral-test tail bound
            let mut acc = 0.0;
            let mut k = k0;
            loop {
                let term = 6.0 * k as f64 * model.gain(spacing * k as f64)?;
                acc += term;
                // integral tail of 6x l(spacing x): for x >> h/spacing behaves
                // like 6 spacing^-alpha x^(1-alpha)
                let x = (k + 1) as f64;
                let tail_bound =
                    6.0 * spacing.powf(-alpha) * x.powf(2.0 - alpha) / (alpha - 2.0);
                if tail_bound < ctrl.rel_tol * acc {
                    acc += tail_bound * 0.5; // midpoint estimate of the remainder
                    break;
                }
                k += 1;
                if (k - k0) as usize > ctrl.max_terms {
                    return Err(Error::NonConvergence("hex ring sum".into()));
                }
            }
            Ok(acc)
        }
    }
}

/// Window radius rule for Monte Carlo: sized so the neglected interference
/// tail is below 1e-4 of the in-window interference (ratio bounded by
/// `(R/r_eff)^(d-alpha)` for the models used here), floored at 30 ISD.
pub fn default_window_radius(dep: &Deployment, model: &PathLossModel) -> f64 {
    let ups = dep.isd();
    let r_eff = (ups / 2.0).max(model.h).max(f64::MIN_POSITIVE);
    let d = dep.dimension as f64;
    let grow = if model.alpha > d { 10f64.powf(4.0 / (model.alpha - d)) } else { 1e4 };
    (r_eff * grow.min(2e4)).max(30.0 * ups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, QuadratureControl};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn densities_and_isd_are_inverse() {
        let d = Deployment::hex(2.0 / SQRT3).unwrap();
        assert!((d.isd() - 1.0).abs() < 1e-14);
        let d = Deployment::line(4.0).unwrap();
        assert!((d.isd() - 0.25).abs() < 1e-14);
        for dim in [1u8, 2] {
            for &l in &[0.01, 1.0, 300.0] {
                let isd = Deployment::ppp(dim, l).unwrap().isd();
                assert!((Deployment::lambda_from_isd(dim, isd) - l).abs() < 1e-10 * l);
            }
        }
        assert!(Deployment::line(0.0).is_err());
        assert!(Deployment { kind: DeploymentKind::Hex, dimension: 1, lambda: 1.0 }.validated().is_err());
    }

    #[test]
    fn line_sample_spacing_exact() {
        let dep = Deployment::line(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ps = sample_deployment(&dep, 10.0, &mut rng).unwrap();
        let Points::One(mut v) = ps.points else { panic!() };
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(v.len() == 20 || v.len() == 21, "count {}", v.len());
        for w in v.windows(2) {
            assert!((w[1] - w[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hex_sample_nearest_neighbor_spacing() {
        let dep = Deployment::hex(2.0 / SQRT3).unwrap(); // ups = 1
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ps = sample_deployment(&dep, 5.0, &mut rng).unwrap();
        let Points::Two(v) = &ps.points else { panic!() };
        // interior points have nearest neighbor exactly at ups = 1
        let mut checked = 0;
        for (i, p) in v.iter().enumerate() {
            if p[0] * p[0] + p[1] * p[1] > 9.0 {
                continue; // avoid window edge
            }
            let mut best = f64::INFINITY;
            for (j, q) in v.iter().enumerate() {
                if i != j {
                    let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
                    best = best.min(d2);
                }
            }
            assert!((best.sqrt() - 1.0).abs() < 1e-9, "spacing {}", best.sqrt());
            checked += 1;
        }
        assert!(checked > 10);
    }

    #[test]
    fn ppp_count_statistics() {
        let dep = Deployment::ppp(2, 1e-4).unwrap();
        let r = 1e4 / 10.0; // keep the count moderate
        let mean = dep.lambda * std::f64::consts::PI * r * r;
        let mut total = 0.0;
        let n_seeds = 200;
        for seed in 0..n_seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            total += sample_deployment(&dep, r, &mut rng).unwrap().points.len() as f64;
        }
        let emp = total / n_seeds as f64;
        let sigma = (mean / n_seeds as f64).sqrt();
        assert!((emp - mean).abs() < 3.0 * sigma, "empirical {emp} vs mean {mean}");
    }

    #[test]
    fn pdf_normalization() {
        let ctrl = QuadratureControl::default();
        // PPP 2D
        let dep = Deployment::ppp(2, 1.0).unwrap();
        let q = integrate(|r| nearest_distance_pdf(&dep, r, None).unwrap(), 0.0, 10.0, &ctrl).unwrap();
        assert!((q.value - 1.0).abs() < 1e-9);
        // PPP 1D mean nearest distance = 1/(2 lambda)
        let dep = Deployment::ppp(1, 1.0).unwrap();
        let q = integrate(|r| r * nearest_distance_pdf(&dep, r, None).unwrap(), 0.0, 30.0, &ctrl).unwrap();
        assert!((q.value - 0.5).abs() < 1e-9);
        // LINE value
        let dep = Deployment::line(2.0).unwrap();
        assert!((nearest_distance_pdf(&dep, 0.1, None).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(nearest_distance_pdf(&dep, 0.3, None).unwrap(), 0.0);
        // HEX joint normalization over (r, theta)
        let dep = Deployment::hex(2.0 / SQRT3).unwrap();
        let outer = integrate(
            |theta| {
                let rmax = 1.0 / (2.0 * (theta + std::f64::consts::FRAC_PI_3).sin());
                integrate(|r| nearest_distance_pdf(&dep, r, Some(theta)).unwrap(), 0.0, rmax, &ctrl)
                    .unwrap()
                    .value
            },
            0.0,
            std::f64::consts::FRAC_PI_3,
            &ctrl,
        )
        .unwrap();
        assert!((outer.value - 1.0).abs() < 1e-9, "hex joint mass {}", outer.value);
        // theta out of range
        assert!(nearest_distance_pdf(&dep, 0.1, Some(2.0)).is_err());
    }

    #[test]
    fn hex_bounds_l0_value_and_order() {
        // lower bound for l0, alpha=4, ups=1 is 6 zeta(3)
        let m = PathLossModel::l0(4.0);
        let (lo, hi) = interference_bounds_hex(&m, 1.0).unwrap();
        assert!((lo - 7.2123414189575657).abs() < 1e-10, "lo = {lo}");
        assert!(lo < hi);

        for model in [PathLossModel::l0(3.0), PathLossModel::l1(1.0, 4.0), PathLossModel::l2(2.0, 4.0)] {
            let (lo, hi) = interference_bounds_hex(&model, 0.7).unwrap();
            assert!(lo < hi, "{model:?}");
        }
        assert!(interference_bounds_hex(&PathLossModel::l0(2.0), 1.0).is_err());
    }

    #[test]
    fn hex_bounds_contain_brute_force_sum() {
        let m = PathLossModel::l1(1.0, 4.0);
        let ups = 0.1;
        let (lo, hi) = interference_bounds_hex(&m, ups).unwrap();
        let mut brute = 0.0;
        for p in hex_points_sorted(ups, 1000.0 * ups) {
            brute += m.gain_d2(p[0] * p[0] + p[1] * p[1]);
        }
        assert!(lo < brute && brute < hi, "lo={lo} brute={brute} hi={hi}");
    }

    #[test]
    fn hex_point_set_rotation_invariant() {
        // rotating the lattice by 60 degrees about a lattice point maps the
        // point set to itself
        let pts = hex_points_sorted(1.0, 4.0);
        let (c, s) = (0.5, SQRT3 / 2.0); // cos 60, sin 60
        for p in &pts {
            let q = [c * p[0] - s * p[1], s * p[0] + c * p[1]];
            let found = pts
                .iter()
                .any(|r| (r[0] - q[0]).abs() < 1e-9 && (r[1] - q[1]).abs() < 1e-9);
            assert!(found, "rotated image of {p:?} missing");
        }
    }

    #[test]
    fn ppp_disjoint_region_counts_uncorrelated() {
        let dep = Deployment::ppp(1, 5.0).unwrap();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for seed in 0..800u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ps = sample_deployment(&dep, 10.0, &mut rng).unwrap();
            let Points::One(v) = &ps.points else { panic!() };
            let left = v.iter().filter(|&&x| x < 0.0).count() as f64;
            let right = v.iter().filter(|&&x| x >= 0.0).count() as f64;
            xs.push(left);
            ys.push(right);
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let cov = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / n;
        let vx = xs.iter().map(|a| (a - mx).powi(2)).sum::<f64>() / n;
        let vy = ys.iter().map(|b| (b - my).powi(2)).sum::<f64>() / n;
        let corr = cov / (vx * vy).sqrt();
        assert!(corr.abs() < 0.08, "correlation {corr}");
    }

    #[test]
    fn csv_export_shape() {
        let ps = PointSet {
            points: Points::Two(vec![[1.0, 2.0], [3.0, 4.0]]),
            window_radius: 5.0,
            origin_excluded_index: None,
        };
        let mut buf = Vec::new();
        ps.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,y\n"));
        assert_eq!(text.lines().count(), 3);
    }
}
