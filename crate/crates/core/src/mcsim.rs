//! Monte Carlo oracle: empirical coverage probability, ergodic rate and raw
//! SINR samples for any scenario, plus the fading-equivalence density
//! rescale.
//!
//! Trials are mutually independent and individually seeded, so estimates are
//! bit-identical for a given `(scenario, MCConfig)` regardless of thread
//! count or execution order.

use crate::error::{Error, Result};
use crate::geometry::default_window_radius;
use crate::pathloss::PathLossKind;
use crate::scenario::Scenario;
use crate::specfun::gamma;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FadingKind {
    Rayleigh,
    None,
}

/// Which BS serves the user.
///
/// `NearestMean` (strongest mean received power, i.e. the nearest BS) matches
/// the analytic formulas, where fading never enters the association.
/// `StrongestSignal` picks the instantaneously strongest BS; the
/// fading-equivalence rescale is a statement about the propagation-loss
/// process and holds exactly only under this rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Association {
    NearestMean,
    StrongestSignal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCConfig {
    pub trials: usize,
    pub seed: u64,
    /// Window radius; derived from the geometry rule when absent.
    #[serde(default)]
    pub window_radius: Option<f64>,
    pub fading: FadingKind,
    #[serde(default = "default_association")]
    pub association: Association,
}

fn default_association() -> Association {
    Association::NearestMean
}

impl Default for MCConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 0,
            window_radius: None,
            fading: FadingKind::Rayleigh,
            association: Association::NearestMean,
        }
    }
}

impl MCConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self { trials, seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidScenario("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// A Monte Carlo estimate with its 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub ci95_halfwidth: f64,
    pub trials_used: usize,
}

/// SplitMix64 step; decorrelates per-trial seeds from the base seed.
fn mix_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Accumulates received powers one BS at a time: total power plus the
/// serving BS under the chosen association rule.
struct TrialAccumulator {
    assoc: Association,
    total: f64,
    serving_power: f64,
    best_metric: f64,
    count: usize,
    origin_hit: bool,
}

impl TrialAccumulator {
    fn new(assoc: Association) -> Self {
        Self {
            assoc,
            total: 0.0,
            serving_power: 0.0,
            best_metric: f64::NEG_INFINITY,
            count: 0,
            origin_hit: false,
        }
    }

    #[inline]
    fn push(&mut self, d2: f64, power: f64) {
        self.total += power;
        self.count += 1;
        if d2 == 0.0 {
            self.origin_hit = true;
        }
        let metric = match self.assoc {
            Association::NearestMean => -d2,
            Association::StrongestSignal => power,
        };
        if metric > self.best_metric {
            self.best_metric = metric;
            self.serving_power = power;
        }
    }
}

/// One SINR draw for the typical user at the origin. Degenerate realizations
/// (no BS in the window, or an L0 BS exactly at the origin) are resampled
/// within the trial's own RNG stream.
fn sinr_one_trial(scenario: &Scenario, window: f64, rng: &mut ChaCha8Rng, assoc: Association, fading: FadingKind) -> f64 {
    let model = &scenario.model;
    let dep = &scenario.deployment;
    let inv_mu = 1.0 / scenario.mu;
    let r = window;
    loop {
        let mut acc = TrialAccumulator::new(assoc);
        let draw_gain = |rng: &mut ChaCha8Rng| match fading {
            FadingKind::Rayleigh => {
                let u: f64 = rng.gen::<f64>();
                -inv_mu * (1.0 - u).ln()
            }
            FadingKind::None => inv_mu,
        };
        match (dep.kind, dep.dimension) {
            (crate::geometry::DeploymentKind::Ppp, 1) => {
                let n = poisson_count(dep.lambda * 2.0 * r, rng);
                for _ in 0..n {
                    let x = rng.gen_range(-r..r);
                    acc.push(x * x, draw_gain(rng) * model.gain_d2(x * x));
                }
            }
            (crate::geometry::DeploymentKind::Ppp, _) => {
                let n = poisson_count(dep.lambda * std::f64::consts::PI * r * r, rng);
                for _ in 0..n {
                    let d2 = r * r * rng.gen::<f64>();
                    acc.push(d2, draw_gain(rng) * model.gain_d2(d2));
                }
            }
            (crate::geometry::DeploymentKind::Line, _) => {
                let ups = dep.isd();
                let offset = rng.gen::<f64>() * ups;
                let i_lo = ((-r - offset) / ups).ceil() as i64;
                let i_hi = ((r - offset) / ups).floor() as i64;
                for i in i_lo..=i_hi {
                    let x = offset + i as f64 * ups;
                    acc.push(x * x, draw_gain(rng) * model.gain_d2(x * x));
                }
            }
            (crate::geometry::DeploymentKind::Hex, _) => {
                // SINR depends on distances from the origin only, and a
                // rotation about the origin preserves them, so the uniform
                // cell offset alone stationarizes the trial
                let ups = dep.isd();
                let a = rng.gen::<f64>();
                let b = rng.gen::<f64>();
                let (ox, oy) = (ups * (a + b / 2.0), ups * b * crate::geometry::SQRT3 / 2.0);
                let k = (r / ups).ceil() as i64 + 2;
                for n in -k..=k {
                    for m in -2 * k..=2 * k {
                        let x = ups * (m as f64 + n as f64 / 2.0) + ox;
                        let y = ups * n as f64 * crate::geometry::SQRT3 / 2.0 + oy;
                        let d2 = x * x + y * y;
                        if d2 <= r * r {
                            acc.push(d2, draw_gain(rng) * model.gain_d2(d2));
                        }
                    }
                }
            }
        }
        if acc.count == 0 {
            continue;
        }
        if acc.origin_hit && model.kind == PathLossKind::L0 {
            continue; // measure-zero collision with the origin
        }
        let interference = acc.total - acc.serving_power;
        return acc.serving_power / (interference + scenario.sigma2);
    }
}

/// Poisson draw via inversion for small means, normal approximation plus
/// rejection fallback through `rand_distr` for large ones.
fn poisson_count(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    use rand_distr::{Distribution, Poisson};
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|p| p.sample(rng) as u64).unwrap_or(0)
}

fn resolve_window(scenario: &Scenario, mc: &MCConfig) -> f64 {
    mc.window_radius
        .unwrap_or_else(|| default_window_radius(&scenario.deployment, &scenario.model))
}

/// Raw per-trial SINR samples, in trial order.
pub fn sinr_samples(scenario: &Scenario, mc: &MCConfig) -> Result<Vec<f64>> {
    scenario.validate()?;
    mc.validate()?;
    let window = resolve_window(scenario, mc);
    Ok((0..mc.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(mc.seed, trial));
            sinr_one_trial(scenario, window, &mut rng, mc.association, mc.fading)
        })
        .collect())
}

/// Empirical `P(SINR > T)` with a binomial 95% confidence half-width.
pub fn simulate_coverage(scenario: &Scenario, threshold: f64, mc: &MCConfig) -> Result<MCEstimate> {
    scenario.validate()?;
    mc.validate()?;
    let window = resolve_window(scenario, mc);
    let successes: u64 = (0..mc.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(mc.seed, trial));
            u64::from(sinr_one_trial(scenario, window, &mut rng, mc.association, mc.fading) > threshold)
        })
        .sum();
    let n = mc.trials as f64;
    let p = successes as f64 / n;
    Ok(MCEstimate {
        mean: p,
        ci95_halfwidth: 1.96 * (p * (1.0 - p) / n).sqrt(),
        trials_used: mc.trials,
    })
}

/// Empirical per-cell rate: the mean of `max(0, ln(1+SINR) - gamma0)/ln2`,
/// which is the sample form of the rate integral truncated at `gamma0`.
pub fn simulate_rate(scenario: &Scenario, mc: &MCConfig) -> Result<MCEstimate> {
    scenario.validate()?;
    mc.validate()?;
    let window = resolve_window(scenario, mc);
    let values: Vec<f64> = (0..mc.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(mc.seed, trial));
            let sinr = sinr_one_trial(scenario, window, &mut rng, mc.association, mc.fading);
            (sinr.ln_1p() - scenario.gamma0).max(0.0) / std::f64::consts::LN_2
        })
        .collect();
    Ok(estimate_from_values(&values))
}

/// Test hook: rate of a user pinned to a lattice point of its serving BS.
/// With `FadingKind::None` this is deterministic and matches
/// [`crate::rate::tau0_collocated`] up to window truncation.
pub fn simulate_rate_collocated(scenario: &Scenario, mc: &MCConfig) -> Result<MCEstimate> {
    scenario.validate()?;
    mc.validate()?;
    if !scenario.deployment.is_lattice() {
        return Err(Error::UnsupportedCase("collocated hook needs a lattice deployment".into()));
    }
    let model = &scenario.model;
    if model.kind == PathLossKind::L0 || model.h == 0.0 {
        return Err(Error::UnboundedModel("collocated user needs l(0) < inf".into()));
    }
    let window = resolve_window(scenario, mc);
    let ups = scenario.deployment.isd();
    // lattice anchored at the origin: the serving BS sits on the user
    let interferer_d2: Vec<f64> = match scenario.deployment.kind {
        crate::geometry::DeploymentKind::Line => {
            let n = (window / ups).floor() as i64;
            (1..=n).flat_map(|i| [i, -i]).map(|i| (i as f64 * ups).powi(2)).collect()
        }
        _ => crate::geometry::hex_points_sorted(ups, window)
            .iter()
            .map(|p| p[0] * p[0] + p[1] * p[1])
            .collect(),
    };
    let inv_mu = 1.0 / scenario.mu;
    let l0 = model.gain(0.0)?;
    let values: Vec<f64> = (0..mc.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(mc.seed, trial));
            let mut interference = 0.0;
            for &dd in &interferer_d2 {
                let g = match mc.fading {
                    FadingKind::Rayleigh => {
                        let u: f64 = rng.gen::<f64>();
                        -inv_mu * (1.0 - u).ln()
                    }
                    FadingKind::None => inv_mu,
                };
                interference += g * model.gain_d2(dd);
            }
            let sinr = inv_mu * l0 / (interference + scenario.sigma2);
            (sinr.ln_1p() - scenario.gamma0).max(0.0) / std::f64::consts::LN_2
        })
        .collect();
    Ok(estimate_from_values(&values))
}

fn estimate_from_values(values: &[f64]) -> MCEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0).max(1.0);
    MCEstimate {
        mean,
        ci95_halfwidth: 1.96 * (var / n).sqrt(),
        trials_used: values.len(),
    }
}

/// Density of the no-fading PPP whose SINR law matches a Rayleigh network of
/// density `lambda`: `lambda / Gamma(d/alpha + 1)`.
pub fn fading_equivalent_density(lambda: f64, d: u8, alpha: f64) -> f64 {
    lambda / gamma(d as f64 / alpha + 1.0)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}
