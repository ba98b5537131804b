use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::math::exp;
use crate::params::DissipParams;
use crate::spectral::{dissipation_symbol, SpectralContext};

use super::{TimeGrid, Trajectory};

/// `e^{−h A(k)}` for every stored wavenumber.
pub(crate) fn decay_factors(grid: crate::grid::GridSpec, h: f64, p: &DissipParams) -> Vec<f64> {
    (0..grid.len())
        .map(|idx| exp(-h * dissipation_symbol(grid.wavenumber(idx), p)))
        .collect()
}

pub(crate) fn scale_modes(f: &SpectralField, factors: &[f64]) -> SpectralField {
    let mut out = f.clone();
    for (c, &w) in out.coeffs_mut().iter_mut().zip(factors) {
        *c *= w;
    }
    out
}

/// `L₀(t_j) = e^{−t_j A}θ⁰` on every node.
pub fn linear_trajectory(
    theta0: &SpectralField,
    times: TimeGrid,
    p: &DissipParams,
) -> Result<Trajectory> {
    let states = times
        .times()
        .into_iter()
        .map(|t| crate::spectral::apply_semigroup(theta0, t, p))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(times, states)
}

/// Trapezoidal Duhamel integral
/// `B(θ₁, θ₂)(t) = ∫₀ᵗ e^{−(t−τ)A} div(θ₁(τ) u_{θ₂}(τ)) dτ` on the nodes of
/// the trajectories' common time grid.
///
/// Uses the recursion `B_{j+1} = e^{−hA}(B_j + (h/2)N_j) + (h/2)N_{j+1}`,
/// which is exactly the composite trapezoid rule applied at every node.
pub fn duhamel_bilinear(
    ctx: &SpectralContext,
    traj1: &Trajectory,
    traj2: &Trajectory,
    p: &DissipParams,
) -> Result<Trajectory> {
    if traj1.times != traj2.times {
        return Err(Error::TimeGridMismatch);
    }
    let grid = ctx.grid();
    if traj1
        .states
        .iter()
        .chain(&traj2.states)
        .any(|s| s.grid() != grid)
    {
        return Err(Error::GridMismatch);
    }
    let h = traj1.times.step();
    let factors = decay_factors(grid, h, p);
    let terms = traj1
        .states
        .iter()
        .zip(&traj2.states)
        .map(|(a, b)| ctx.bilinear_term(a, b))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(terms.len());
    let mut acc = SpectralField::zeros(grid);
    out.push(acc.clone());
    for j in 0..terms.len() - 1 {
        acc = scale_modes(&acc.axpy(0.5 * h, &terms[j]), &factors).axpy(0.5 * h, &terms[j + 1]);
        out.push(acc.clone());
    }
    Trajectory::new(traj1.times, out)
}
