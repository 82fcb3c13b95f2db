//! Path simulation of the exactly simulatable parents, used to check the
//! two-sided exit identity `P_x(τ_a⁺ < τ_0⁻) = W(x)/W(a)` end to end.
//!
//! Every path draws from its own ChaCha stream keyed by `(seed, path index)`
//! and outcomes are tallied as integers, so results do not depend on the
//! number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::ScaleFamily;
use crate::error::{Error, Result};
use crate::fluctuation::exit_up_probability;

/// Law of the downward jumps of a compound Poisson parent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum JumpSampler {
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
}

impl JumpSampler {
    fn mean(&self) -> f64 {
        match *self {
            JumpSampler::Exponential { rate } => 1.0 / rate,
            JumpSampler::Gamma { shape, rate } => shape / rate,
        }
    }
}

/// A parent process that can be simulated without truncating small jumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "process", rename_all = "snake_case")]
pub enum SimProcess {
    /// `X_t = x + μt + σB_t`.
    BrownianDrift { mu: f64, sigma: f64 },
    /// Linear upward drift interrupted by downward jumps at rate `jump_rate`.
    DriftMinusCP { drift_rate: f64, jump_rate: f64, jump_sampler: JumpSampler },
}

impl SimProcess {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            SimProcess::BrownianDrift { mu, sigma } => mu.is_finite() && sigma > 0.0 && sigma.is_finite(),
            SimProcess::DriftMinusCP { drift_rate, jump_rate, jump_sampler } => {
                let jumps = match jump_sampler {
                    JumpSampler::Exponential { rate } => rate > 0.0 && rate.is_finite(),
                    JumpSampler::Gamma { shape, rate } => {
                        shape > 0.0 && shape.is_finite() && rate > 0.0 && rate.is_finite()
                    }
                };
                drift_rate > 0.0 && drift_rate.is_finite() && jump_rate > 0.0 && jump_rate.is_finite() && jumps
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("invalid process {self:?}")))
        }
    }

    /// `E[X_1 - X_0]`.
    pub fn mean_drift(&self) -> f64 {
        match *self {
            SimProcess::BrownianDrift { mu, .. } => mu,
            SimProcess::DriftMinusCP { drift_rate, jump_rate, jump_sampler } => {
                drift_rate - jump_rate * jump_sampler.mean()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub n_paths: u64,
    pub seed: u64,
    /// Euler step for the Brownian parent.
    pub time_step: f64,
    /// Censoring time. `None` means `50a/|drift|`, which needs a nonzero
    /// mean drift.
    pub horizon: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { n_paths: 200_000, seed: 0x5ca1e, time_step: 1e-4, horizon: None }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let horizon_ok = self.horizon.map_or(true, |h| h > 0.0 && h.is_finite());
        if self.n_paths == 0 || !(self.time_step > 0.0 && self.time_step.is_finite()) || !horizon_ok {
            return Err(Error::Parameter(format!("invalid simulation config {self:?}")));
        }
        Ok(())
    }

    fn horizon_for(&self, p: &SimProcess, a: f64) -> Result<f64> {
        if let Some(h) = self.horizon {
            return Ok(h);
        }
        let m = p.mean_drift();
        if m.abs() < 1e-12 {
            return Err(Error::Parameter("oscillating process needs an explicit horizon".into()));
        }
        Ok(50.0 * a / m.abs())
    }
}

/// Monte Carlo estimate of an exit probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExitEstimate {
    pub p_hat: f64,
    /// `√(p̂(1-p̂)/n)` over uncensored paths.
    pub std_err: f64,
    pub n_effective: u64,
    pub censored: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Up,
    Down,
    Censored,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    up: u64,
    down: u64,
    censored: u64,
}

impl Tally {
    fn add(mut self, o: Outcome) -> Self {
        match o {
            Outcome::Up => self.up += 1,
            Outcome::Down => self.down += 1,
            Outcome::Censored => self.censored += 1,
        }
        self
    }

    fn merge(self, o: Tally) -> Tally {
        Tally { up: self.up + o.up, down: self.down + o.down, censored: self.censored + o.censored }
    }
}

fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

// Euler steps with a Brownian-bridge test for crossings inside a step.
fn brownian_path(rng: &mut ChaCha8Rng, mu: f64, sigma: f64, x: f64, a: f64, dt: f64, horizon: f64) -> Outcome {
    let (drift, scale) = (mu * dt, sigma * dt.sqrt());
    let inv_var = 2.0 / (sigma * sigma * dt);
    let steps = (horizon / dt).ceil() as u64;
    let mut y = x;
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        let next = y + drift + scale * z;
        if next >= a {
            return Outcome::Up;
        }
        if next <= 0.0 {
            return Outcome::Down;
        }
        let up = (a - y) * (a - next) * inv_var;
        let down = y * next * inv_var;
        if up < 40.0 || down < 40.0 {
            let u: f64 = rng.random();
            let p_up = (-up).exp();
            if u < p_up {
                return Outcome::Up;
            }
            if u < p_up + (-down).exp() {
                return Outcome::Down;
            }
        }
        y = next;
    }
    Outcome::Censored
}

// Exact: between jumps the path rises linearly, so crossing `a` is found
// from the arrival time alone and `0` can only be passed by a jump.
fn compound_path(
    rng: &mut ChaCha8Rng,
    drift_rate: f64,
    jump_rate: f64,
    jumps: &JumpLaw,
    x: f64,
    a: f64,
    horizon: f64,
) -> Outcome {
    let (mut y, mut t) = (x, 0.0);
    loop {
        let wait: f64 = rng.sample::<f64, _>(Exp1) / jump_rate;
        let to_top = (a - y) / drift_rate;
        if wait >= to_top {
            return if t + to_top <= horizon { Outcome::Up } else { Outcome::Censored };
        }
        t += wait;
        if t > horizon {
            return Outcome::Censored;
        }
        y += drift_rate * wait - jumps.sample(rng);
        if y < 0.0 {
            return Outcome::Down;
        }
    }
}

enum JumpLaw {
    Exponential(f64),
    Gamma(Gamma<f64>),
}

impl JumpLaw {
    fn new(s: JumpSampler) -> Result<Self> {
        Ok(match s {
            JumpSampler::Exponential { rate } => JumpLaw::Exponential(rate),
            JumpSampler::Gamma { shape, rate } => JumpLaw::Gamma(
                Gamma::new(shape, 1.0 / rate).map_err(|e| Error::Parameter(format!("gamma jumps: {e}")))?,
            ),
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            JumpLaw::Exponential(rate) => rng.sample::<f64, _>(Exp1) / rate,
            JumpLaw::Gamma(g) => g.sample(rng),
        }
    }
}

/// Estimates `P_x(τ_a⁺ < τ_0⁻)` from `cfg.n_paths` independent paths.
///
/// More than 1% censored paths is a [`Error::Quality`] carrying the
/// estimate from the uncensored ones.
pub fn estimate_exit_up(p: SimProcess, x: f64, a: f64, cfg: &SimConfig) -> Result<ExitEstimate> {
    p.validate()?;
    cfg.validate()?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("exit level a must be positive, got {a}")));
    }
    if !(0.0..=a).contains(&x) {
        return Err(Error::Domain(format!("start x = {x} must lie in [0, {a}]")));
    }
    if x == a {
        return Ok(ExitEstimate { p_hat: 1.0, std_err: 0.0, n_effective: cfg.n_paths, censored: 0 });
    }
    let horizon = cfg.horizon_for(&p, a)?;
    let jumps = match p {
        SimProcess::DriftMinusCP { jump_sampler, .. } => Some(JumpLaw::new(jump_sampler)?),
        SimProcess::BrownianDrift { .. } => None,
    };
    let tally = (0..cfg.n_paths)
        .into_par_iter()
        .fold(Tally::default, |acc, i| {
            let mut rng = path_rng(cfg.seed, i);
            let o = match (p, &jumps) {
                (SimProcess::BrownianDrift { mu, sigma }, _) => {
                    brownian_path(&mut rng, mu, sigma, x, a, cfg.time_step, horizon)
                }
                (SimProcess::DriftMinusCP { drift_rate, jump_rate, .. }, Some(j)) => {
                    compound_path(&mut rng, drift_rate, jump_rate, j, x, a, horizon)
                }
                (SimProcess::DriftMinusCP { .. }, None) => unreachable!("jump law built above"),
            };
            acc.add(o)
        })
        .reduce(Tally::default, Tally::merge);
    let n = tally.up + tally.down;
    let p_hat = if n == 0 { f64::NAN } else { tally.up as f64 / n as f64 };
    if tally.censored * 100 > cfg.n_paths {
        return Err(Error::Quality {
            what: format!("{} of {} paths censored at horizon {horizon}", tally.censored, cfg.n_paths),
            partial: p_hat,
        });
    }
    let std_err = (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    Ok(ExitEstimate { p_hat, std_err, n_effective: n, censored: tally.censored })
}

/// Simulation against the scale-function prediction `W(x)/W(a)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub family: String,
    pub process: SimProcess,
    pub x: f64,
    pub a: f64,
    pub estimate: ExitEstimate,
    pub scale_ratio: f64,
    pub z_score: f64,
}

/// The simulatable parent of `f`, if any.
///
/// Only finite-activity parents qualify: Brownian motion with drift and its
/// conjugate, a drift minus compound Poisson process with exponential jumps.
pub fn sim_process(f: &ScaleFamily<f64>) -> Result<SimProcess> {
    let unsupported = || {
        Error::Unsupported(format!("{} has no exactly simulatable parent", f.describe()))
    };
    match f {
        ScaleFamily::BrownianDrift(b) => {
            Ok(SimProcess::BrownianDrift { mu: b.kappa(), sigma: (2.0 * b.d()).sqrt() })
        }
        ScaleFamily::Conjugate(c) => match c.base() {
            ScaleFamily::BrownianDrift(b) if b.kappa() > 0.0 => {
                let (k, d) = (b.kappa(), b.d());
                Ok(SimProcess::DriftMinusCP {
                    drift_rate: 1.0 / d,
                    jump_rate: k / (d * d),
                    jump_sampler: JumpSampler::Exponential { rate: k / d },
                })
            }
            _ => Err(unsupported()),
        },
        _ => Err(unsupported()),
    }
}

/// Simulates the parent of `f` and compares with `W(x)/W(a)`.
pub fn mc_vs_scale(f: &ScaleFamily<f64>, x: f64, a: f64, cfg: &SimConfig) -> Result<McReport> {
    let process = sim_process(f)?;
    let scale_ratio = exit_up_probability(f, x, a)?;
    let estimate = estimate_exit_up(process, x, a, cfg)?;
    let diff = estimate.p_hat - scale_ratio;
    let z_score = if estimate.std_err > 0.0 {
        diff / estimate.std_err
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    };
    Ok(McReport { family: f.describe(), process, x, a, estimate, scale_ratio, z_score })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: u64) -> SimConfig {
        SimConfig { n_paths: n, ..SimConfig::default() }
    }

    #[test]
    fn start_at_top_is_certain() {
        let p = SimProcess::BrownianDrift { mu: 1.0, sigma: 2f64.sqrt() };
        let e = estimate_exit_up(p, 1.0, 1.0, &small(10)).unwrap();
        assert_eq!((e.p_hat, e.std_err), (1.0, 0.0));
    }

    #[test]
    fn brownian_from_zero_exits_down() {
        let p = SimProcess::BrownianDrift { mu: 1.0, sigma: 1.0 };
        let e = estimate_exit_up(p, 0.0, 1.0, &small(100)).unwrap();
        assert_eq!(e.p_hat, 0.0);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let p = SimProcess::DriftMinusCP {
            drift_rate: 1.0,
            jump_rate: 1.0,
            jump_sampler: JumpSampler::Exponential { rate: 1.0 },
        };
        let cfg = SimConfig { horizon: Some(1e3), ..small(5000) };
        let a = estimate_exit_up(p, 0.5, 1.0, &cfg).unwrap();
        let b = estimate_exit_up(p, 0.5, 1.0, &cfg).unwrap();
        assert_eq!(a, b);
        let other = estimate_exit_up(p, 0.5, 1.0, &SimConfig { seed: 7, ..cfg }).unwrap();
        assert_ne!(a.p_hat, other.p_hat);
    }

    #[test]
    fn oscillating_needs_horizon() {
        let p = SimProcess::DriftMinusCP {
            drift_rate: 1.0,
            jump_rate: 1.0,
            jump_sampler: JumpSampler::Exponential { rate: 1.0 },
        };
        assert!(matches!(estimate_exit_up(p, 0.5, 1.0, &small(10)), Err(Error::Parameter(_))));
    }

    #[test]
    fn heavy_censoring_is_a_quality_error() {
        let p = SimProcess::BrownianDrift { mu: 0.0, sigma: 1e-3 };
        let cfg = SimConfig { horizon: Some(1e-3), ..small(200) };
        assert!(matches!(estimate_exit_up(p, 0.5, 1.0, &cfg), Err(Error::Quality { .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = SimProcess::BrownianDrift { mu: 1.0, sigma: 0.0 };
        assert!(matches!(estimate_exit_up(p, 0.5, 1.0, &small(10)), Err(Error::Parameter(_))));
        let p = SimProcess::BrownianDrift { mu: 1.0, sigma: 1.0 };
        assert!(matches!(estimate_exit_up(p, 1.5, 1.0, &small(10)), Err(Error::Domain(_))));
        assert!(matches!(estimate_exit_up(p, 0.5, 1.0, &small(0)), Err(Error::Parameter(_))));
    }

    #[test]
    fn gamma_jumps_of_shape_one_match_exponential() {
        let cp = |s| SimProcess::DriftMinusCP { drift_rate: 2.0, jump_rate: 1.0, jump_sampler: s };
        let cfg = small(40_000);
        let e = estimate_exit_up(cp(JumpSampler::Exponential { rate: 1.0 }), 0.5, 1.0, &cfg).unwrap();
        let g = estimate_exit_up(cp(JumpSampler::Gamma { shape: 1.0, rate: 1.0 }), 0.5, 1.0, &cfg).unwrap();
        let se = (e.std_err.powi(2) + g.std_err.powi(2)).sqrt();
        assert!((e.p_hat - g.p_hat).abs() < 4.0 * se);
    }

    #[test]
    fn binding_and_guards() {
        let f = ScaleFamily::brownian_drift(1.0, 2.0).unwrap();
        assert_eq!(sim_process(&f).unwrap(), SimProcess::BrownianDrift { mu: 1.0, sigma: 2.0 });
        let c = f.conjugate_family().unwrap();
        assert_eq!(
            sim_process(&c).unwrap(),
            SimProcess::DriftMinusCP {
                drift_rate: 0.5,
                jump_rate: 0.25,
                jump_sampler: JumpSampler::Exponential { rate: 0.5 }
            }
        );
        let k = ScaleFamily::killed_stable(1.0, 1.0, 0.5, 0.0).unwrap();
        assert!(matches!(mc_vs_scale(&k, 0.5, 1.0, &small(10)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn conjugate_exit_matches_linear_scale() {
        let f = ScaleFamily::brownian_drift(1.0, 1.0).unwrap().conjugate_family().unwrap();
        let cfg = SimConfig { horizon: Some(1e4), ..small(50_000) };
        let r = mc_vs_scale(&f, 0.5, 1.0, &cfg).unwrap();
        assert!((r.scale_ratio - 0.75).abs() < 1e-12);
        assert!(r.z_score.abs() < 3.0, "{r:?}");
    }
}
