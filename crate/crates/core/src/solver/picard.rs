use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::norms::{gevrey_weighted_norm, sobolev_norm, WeightedNorm};
use crate::params::{DissipParams, Regime};
use crate::spectral::SpectralContext;

use super::duhamel::{duhamel_bilinear, linear_trajectory};
use super::existence::{existence_time, ExistenceTime};
use super::{ConstantsTable, TimeGrid, Trajectory};

/// Consecutive distance increases after which the iteration is declared
/// divergent.
const DIVERGENCE_RUN: usize = 3;

/// Settings for a Picard solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardConfig {
    pub horizon: f64,
    pub n_nodes: usize,
    pub max_iter: usize,
    /// Threshold on the sup-in-time `H^s` distance between iterates.
    pub tol: f64,
    /// Track the Gevrey-weighted norms and use the weighted existence time.
    pub weighted: bool,
    /// Run even when the horizon exceeds the guaranteed existence time.
    pub allow_outside: bool,
}

impl PicardConfig {
    pub fn new(horizon: f64, n_nodes: usize) -> Self {
        PicardConfig {
            horizon,
            n_nodes,
            max_iter: 50,
            tol: 1e-10,
            weighted: false,
            allow_outside: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        TimeGrid::new(self.horizon, self.n_nodes)?;
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: self.tol,
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

/// Ball membership of the iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct BallCheck {
    /// `2‖θ⁰‖_{H^s}`.
    pub radius: f64,
    /// `sup_t ‖θ⁽ⁿ⁾(t)‖_{H^s}` per iterate, starting with `θ⁽⁰⁾ = L₀`.
    pub max_norms: Vec<f64>,
    /// Every iterate satisfied `max_norm ≤ radius + tol`.
    pub inside: bool,
    /// `sup_t ‖e^{(t/2)B}θ⁽ⁿ⁾(t)‖_{H^s}` per iterate; empty unless weighted.
    pub weighted_max_norms: Vec<f64>,
    /// Weighted counterpart of `inside`; `None` unless weighted.
    pub weighted_inside: Option<bool>,
}

/// Outcome of a Picard solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardReport {
    pub converged: bool,
    /// Index of the last iterate computed.
    pub iterations: usize,
    /// `distances[n] = sup_t ‖θ⁽ⁿ⁺¹⁾ − θ⁽ⁿ⁾‖_{H^s}`.
    pub distances: Vec<f64>,
    /// `distances[n+1] / distances[n]`.
    pub contraction_ratios: Vec<f64>,
    pub ball: BallCheck,
    /// Last iterate.
    pub trajectory: Trajectory,
    /// Weighted norm of the last iterate at each node, with weight time
    /// equal to the node time; empty unless weighted.
    pub weighted_norms: Vec<WeightedNorm>,
    pub existence_time: ExistenceTime,
    /// The horizon exceeded the existence time and `allow_outside` was set.
    pub outside_guaranteed_ball: bool,
    pub diverged: bool,
    pub constants: ConstantsTable,
    pub regime: Regime,
}

/// Plain iteration `θ⁽ⁿ⁺¹⁾ = L₀ − B(θ⁽ⁿ⁾, θ⁽ⁿ⁾)` from `θ⁽⁰⁾ = L₀`.
pub fn picard_solve(
    ctx: &SpectralContext,
    theta0: &SpectralField,
    cfg: &PicardConfig,
    p: &DissipParams,
    c: &ConstantsTable,
) -> Result<PicardReport> {
    solve(
        ctx,
        theta0,
        &PicardConfig {
            weighted: false,
            ..*cfg
        },
        p,
        c,
    )
}

/// The same iteration, checked against the weighted existence time and
/// with the weighted norms `‖e^{(t/2)B}θ(t)‖_{H^s}` tracked at every node.
pub fn weighted_picard_solve(
    ctx: &SpectralContext,
    theta0: &SpectralField,
    cfg: &PicardConfig,
    p: &DissipParams,
    c: &ConstantsTable,
) -> Result<PicardReport> {
    solve(
        ctx,
        theta0,
        &PicardConfig {
            weighted: true,
            ..*cfg
        },
        p,
        c,
    )
}

fn weighted_norms(traj: &Trajectory, s: f64, p: &DissipParams) -> Result<Vec<WeightedNorm>> {
    traj.states
        .iter()
        .zip(traj.times.times())
        .map(|(f, t)| gevrey_weighted_norm(f, t, s, p))
        .collect()
}

fn sup_value(norms: &[WeightedNorm]) -> f64 {
    norms.iter().map(|w| w.value).fold(0.0, f64::max)
}

fn solve(
    ctx: &SpectralContext,
    theta0: &SpectralField,
    cfg: &PicardConfig,
    p: &DissipParams,
    c: &ConstantsTable,
) -> Result<PicardReport> {
    cfg.validate()?;
    c.validate()?;
    if theta0.grid() != ctx.grid() {
        return Err(Error::GridMismatch);
    }
    let s = p.s;
    let norm0 = sobolev_norm(theta0, s, false);
    let existence = existence_time(norm0, p, c, cfg.weighted);
    let outside = cfg.horizon > existence.time;
    if outside && !cfg.allow_outside {
        return Err(Error::OutsideGuaranteedBall {
            horizon: cfg.horizon,
            existence_time: existence.time,
        });
    }
    let times = TimeGrid::new(cfg.horizon, cfg.n_nodes)?;
    let radius = 2.0 * norm0;
    let hs = |f: &SpectralField| sobolev_norm(f, s, false);

    let linear = linear_trajectory(theta0, times, p)?;
    let mut current = linear.clone();
    let mut max_norms = alloc::vec![current.sup(hs)];
    let mut weighted_max = Vec::new();
    let mut last_weighted = Vec::new();
    if cfg.weighted {
        last_weighted = weighted_norms(&current, s, p)?;
        weighted_max.push(sup_value(&last_weighted));
    }

    let mut distances = Vec::new();
    let mut converged = norm0 == 0.0;
    let mut diverged = false;
    let mut iterations = 0;
    let mut increases = 0;
    while !converged && iterations < cfg.max_iter {
        let b = duhamel_bilinear(ctx, &current, &current, p)?;
        let states = linear
            .states
            .iter()
            .zip(&b.states)
            .map(|(l, b)| l - b)
            .collect();
        let next = Trajectory::new(times, states)?;
        let d = next.sup_distance(&current, hs);
        iterations += 1;
        max_norms.push(next.sup(hs));
        if cfg.weighted {
            last_weighted = weighted_norms(&next, s, p)?;
            weighted_max.push(sup_value(&last_weighted));
        }
        current = next;
        if let Some(&prev) = distances.last() {
            increases = if d > prev { increases + 1 } else { 0 };
        }
        distances.push(d);
        if !d.is_finite() || increases >= DIVERGENCE_RUN {
            diverged = true;
            break;
        }
        converged = d < cfg.tol;
    }

    let contraction_ratios = distances.windows(2).map(|w| w[1] / w[0]).collect();
    let within = |v: &f64| *v <= radius + cfg.tol;
    let ball = BallCheck {
        radius,
        inside: max_norms.iter().all(within),
        weighted_inside: cfg.weighted.then(|| weighted_max.iter().all(within)),
        max_norms,
        weighted_max_norms: weighted_max,
    };
    Ok(PicardReport {
        converged,
        iterations,
        distances,
        contraction_ratios,
        ball,
        trajectory: current,
        weighted_norms: last_weighted,
        existence_time: existence,
        outside_guaranteed_ball: outside,
        diverged,
        constants: *c,
        regime: existence.regime,
    })
}
