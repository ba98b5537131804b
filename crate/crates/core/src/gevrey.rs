//! Measurable forms of the regularity statements: weighted-norm traces,
//! fitted decay rates, the `H²` smoothing check, the exponential-weight
//! chain and the parameter-plane classifier.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::math::{abs_pow, exp, hypot, ln, powf, sqrt};
use crate::norms::{bessel_weight, gevrey_weighted_norm, sobolev_norm, WeightedNorm};
use crate::params::DissipParams;
use crate::solver::Trajectory;
use crate::spectral::gevrey_symbol;

/// Coefficients at or below this modulus are ignored by the rate fit.
pub const NOISE_FLOOR: f64 = 1e-14;

/// Fewest axis modes a rate fit may use.
pub const MIN_FIT_MODES: usize = 5;

/// `‖e^{(t/2)B}θ(t)‖_{H^s}` at every node, with weight time equal to the
/// node time.
pub fn weighted_norm_trace(
    traj: &Trajectory,
    p: &DissipParams,
    s: f64,
) -> Result<Vec<WeightedNorm>> {
    traj.states
        .iter()
        .zip(traj.times.times())
        .map(|(f, t)| gevrey_weighted_norm(f, t, s, p))
        .collect()
}

/// Fitted decay rate along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxisFit {
    Fit {
        rate: f64,
        /// RMS residual of the linear fit.
        residual: f64,
        modes: usize,
    },
    /// Fewer than [`MIN_FIT_MODES`] usable modes.
    Unfit { modes: usize },
}

impl AxisFit {
    pub fn rate(&self) -> Option<f64> {
        match self {
            AxisFit::Fit { rate, .. } => Some(*rate),
            AxisFit::Unfit { .. } => None,
        }
    }
}

/// Decay rates of `f_t` relative to `f_0` along both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusFit {
    /// Against `|k₁|^{2α}` on `k₂ = 0`; `tμ` for the linear flow.
    pub axis1: AxisFit,
    /// Against `|k₂|^{2β}` on `k₁ = 0`; `tν` for the linear flow.
    pub axis2: AxisFit,
}

fn fit_line(points: &[(f64, f64)]) -> AxisFit {
    let n = points.len();
    if n < MIN_FIT_MODES {
        return AxisFit::Unfit { modes: n };
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return AxisFit::Unfit { modes: n };
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| {
            let r = p.1 - icpt - slope * p.0;
            r * r
        })
        .sum();
    AxisFit::Fit {
        rate: slope,
        residual: sqrt(ss / nf),
        modes: n,
    }
}

/// Least-squares fit with intercept of `ln|f̂_t(k)| − ln|f̂_0(k)|` against
/// `−|k₁|^{2α}` on `k₂ = 0` and against `−|k₂|^{2β}` on `k₁ = 0`, over
/// positive-axis modes above [`NOISE_FLOOR`] in both fields.
pub fn analyticity_radius_fit(
    f_t: &SpectralField,
    f_0: &SpectralField,
    p: &DissipParams,
) -> Result<RadiusFit> {
    let grid = f_t.grid();
    if f_0.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let axis = |along_first: bool| {
        let n = if along_first { grid.n1() } else { grid.n2() } as i64;
        let mut pts = Vec::new();
        for m in 1..n / 2 {
            let (k1, k2) = if along_first { (m, 0) } else { (0, m) };
            let (a, b) = (f_t.coeff(k1, k2).norm(), f_0.coeff(k1, k2).norm());
            if a > NOISE_FLOOR && b > NOISE_FLOOR {
                let x = if along_first {
                    abs_pow(m as f64, 2.0 * p.alpha)
                } else {
                    abs_pow(m as f64, 2.0 * p.beta)
                };
                pts.push((-x, ln(a) - ln(b)));
            }
        }
        fit_line(&pts)
    };
    Ok(RadiusFit {
        axis1: axis(true),
        axis2: axis(false),
    })
}

/// Output of [`h2_smoothing_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingReport {
    /// Node used for `t0`.
    pub t0: f64,
    /// `t0/2`.
    pub epsilon: f64,
    pub h2_norm: f64,
    /// `sup_k (1+|k|²)^{4−2s} e^{−(t0−ε)B(k)}` over the dealiased band.
    pub weight_sup: f64,
    pub weight_sup_at: (i64, i64),
    /// `1 + τ^{−(8−4s)/α} + τ^{−(8−4s)/β}` with `τ = t0 − ε`.
    pub bound_shape: f64,
    /// Smallest constant making the weight bound hold at every mode.
    pub bound_constant: f64,
    /// `max ‖θ(t_{j±1}) − θ(t0)‖_{H²}` over the neighboring nodes.
    pub continuity_modulus: f64,
}

/// `H²` regularity at an interior node.
///
/// `t0` is snapped to the nearest node, which must not be the first or the
/// last one.
pub fn h2_smoothing_check(
    traj: &Trajectory,
    t0: f64,
    p: &DissipParams,
    s: f64,
) -> Result<SmoothingReport> {
    let times = traj.times.times();
    let j = times
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - t0).abs().total_cmp(&(b.1 - t0).abs()))
        .map(|(j, _)| j)
        .unwrap_or(0);
    if !(t0 > 0.0) || j == 0 || j + 1 >= times.len() {
        return Err(Error::BoundaryTime { t0 });
    }
    let tj = times[j];
    let eps = 0.5 * tj;
    let tau = tj - eps;
    let state = &traj.states[j];
    let (weight_sup, weight_sup_at) = weight_scan(state, s, tau, p);
    let e = 8.0 - 4.0 * s;
    let bound_shape = 1.0 + powf(tau, -e / p.alpha) + powf(tau, -e / p.beta);
    let h2 = |f: &SpectralField| sobolev_norm(f, 2.0, false);
    let continuity_modulus =
        h2(&(&traj.states[j - 1] - state)).max(h2(&(&traj.states[j + 1] - state)));
    Ok(SmoothingReport {
        t0: tj,
        epsilon: eps,
        h2_norm: h2(state),
        weight_sup,
        weight_sup_at,
        bound_shape,
        bound_constant: weight_sup / bound_shape,
        continuity_modulus,
    })
}

/// `sup_k (1+|k|²)^{4−2s} e^{−τB(k)}` over the dealiased band of `f`'s grid.
pub fn weight_scan(f: &SpectralField, s: f64, tau: f64, p: &DissipParams) -> (f64, (i64, i64)) {
    let grid = f.grid();
    let mut best = (0.0, (0, 0));
    for idx in 0..grid.len() {
        let k = grid.wavenumber(idx);
        if !grid.in_dealiased_band(k.0, k.1) {
            continue;
        }
        let w = bessel_weight(k, 2.0 - s) * exp(-tau * gevrey_symbol(k, p));
        if w > best.0 {
            best = (w, k);
        }
    }
    best
}

/// Extremes of one logarithmic ratio in the weight chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainLink {
    /// Smallest and largest `ln(lhs/rhs)`.
    pub min_log_ratio: f64,
    pub max_log_ratio: f64,
    /// Points where `ln(lhs/rhs) > 1e-12`.
    pub violations: usize,
    pub worst_at: Option<((i64, i64), f64)>,
}

impl ChainLink {
    fn new() -> Self {
        ChainLink {
            min_log_ratio: f64::INFINITY,
            max_log_ratio: f64::NEG_INFINITY,
            violations: 0,
            worst_at: None,
        }
    }

    fn record(&mut self, r: f64, k: (i64, i64), t: f64) {
        self.min_log_ratio = self.min_log_ratio.min(r);
        if r > self.max_log_ratio {
            self.max_log_ratio = r;
            self.worst_at = Some((k, t));
        }
        if r > 1e-12 {
            self.violations += 1;
        }
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Scan of `e^{−T₀}e^{t|ξ|^α} ≤ e^{t(|ξ₁|^α+|ξ₂|^β)} ≤ e^{T₀}e^{2t|ξ|^β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainReport {
    pub t0: f64,
    /// Upper end of the sampled times, `min(T₀, T₁)`.
    pub t_max: f64,
    pub lattice_extent: i64,
    pub t_samples: usize,
    pub lower: ChainLink,
    pub upper: ChainLink,
    /// The scalar step `|ξ₁|^α + |ξ₂|^β ≤ 2|ξ₂|^β + 2`, tested on its own
    /// (ratio form `ln(lhs/rhs)`).
    pub scalar_step: ChainLink,
}

/// Evaluates every link of the chain on the lattice `|kᵢ| ≤ extent` and at
/// `t_samples` equispaced times in `[0, min(T₀, T₁)]`. Violations are
/// reported, not raised.
pub fn remark_chain_check(
    p: &DissipParams,
    t0: f64,
    t1: f64,
    t_samples: usize,
    extent: i64,
) -> Result<ChainReport> {
    if !(t0 >= 0.0 && t0.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "T0",
            value: t0,
            reason: "must be nonnegative and finite",
        });
    }
    if !(t1 >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "T1",
            value: t1,
            reason: "must be nonnegative",
        });
    }
    if t_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "t_samples",
            value: 0.0,
            reason: "need at least one time",
        });
    }
    let t_max = t0.min(t1);
    let mut lower = ChainLink::new();
    let mut upper = ChainLink::new();
    let mut scalar = ChainLink::new();
    for k1 in -extent..=extent {
        for k2 in -extent..=extent {
            let (x, y) = (k1 as f64, k2 as f64);
            let r = hypot(x, y);
            let ra = powf(r, p.alpha);
            let rb = powf(r, p.beta);
            let mid = abs_pow(x, p.alpha) + abs_pow(y, p.beta);
            scalar.record(ln(mid / (2.0 * abs_pow(y, p.beta) + 2.0)), (k1, k2), 0.0);
            for i in 0..t_samples {
                let t = if t_samples == 1 {
                    0.0
                } else {
                    t_max * i as f64 / (t_samples - 1) as f64
                };
                lower.record(-t0 + t * (ra - mid), (k1, k2), t);
                upper.record(t * (mid - 2.0 * rb) - t0, (k1, k2), t);
            }
        }
    }
    Ok(ChainReport {
        t0,
        t_max,
        lattice_extent: extent,
        t_samples,
        lower,
        upper,
        scalar_step: scalar,
    })
}

/// Parameter-plane regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionLabel {
    /// `(1/2, 1)²`.
    Y1,
    /// `α ∈ (1/2, 1)`, `β ∈ ((1−α)/(2α), 1/2]`.
    Y2,
    /// `α ∈ (0, 1/2]`, `β ∈ (1/(2α+1), 1)`.
    Y3,
    Outside,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::Y1 => "Y1",
            RegionLabel::Y2 => "Y2",
            RegionLabel::Y3 => "Y3",
            RegionLabel::Outside => "outside",
        }
    }
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must lie in (0, 1)",
        })
    }
}

/// Region of `(α, β) ∈ (0, 1)²`.
pub fn region_classify(alpha: f64, beta: f64) -> Result<RegionLabel> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    Ok(if alpha > 0.5 && beta > 0.5 {
        RegionLabel::Y1
    } else if alpha > 0.5 && beta > (1.0 - alpha) / (2.0 * alpha) && beta <= 0.5 {
        RegionLabel::Y2
    } else if alpha <= 0.5 && beta > 1.0 / (2.0 * alpha + 1.0) {
        RegionLabel::Y3
    } else {
        RegionLabel::Outside
    })
}

/// The threshold condition on `β` in its piecewise form.
pub fn condition_p(alpha: f64, beta: f64) -> Result<bool> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    let threshold = if alpha <= 0.5 {
        1.0 / (2.0 * alpha + 1.0)
    } else {
        (1.0 - alpha) / (2.0 * alpha)
    };
    Ok(beta > threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::solver::{linear_trajectory, TimeGrid};
    use crate::spectral::apply_semigroup;

    fn params() -> DissipParams {
        DissipParams::unit(0.75, 0.75, 1.0).unwrap()
    }

    fn smooth(n: usize) -> SpectralField {
        let g = GridSpec::square(n).unwrap();
        let m = (n / 3) as i64;
        let mut modes = Vec::new();
        for k in 1..m {
            let c = num_complex::Complex64::new((-0.1 * k as f64).exp(), 0.0);
            modes.push(((k, 0), c));
            modes.push(((0, k), c * 0.5));
            modes.push(((k, 1), c * 0.25));
        }
        SpectralField::from_modes(g, &modes)
    }

    #[test]
    fn zero_trace_and_single_mode_cancellation() {
        let g = GridSpec::square(16).unwrap();
        let times = TimeGrid::new(0.4, 5).unwrap();
        let zero = linear_trajectory(&SpectralField::zeros(g), times, &params()).unwrap();
        assert!(weighted_norm_trace(&zero, &params(), 1.0)
            .unwrap()
            .iter()
            .all(|w| w.value == 0.0));
        let f = SpectralField::sine(g, 1, 0, 1.0);
        let traj = linear_trajectory(&f, times, &params()).unwrap();
        let n0 = sobolev_norm(&f, 1.0, false);
        for w in weighted_norm_trace(&traj, &params(), 1.0).unwrap() {
            assert!((w.value - n0).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_trace_within_exponential_envelope() {
        let f = smooth(32);
        let p = DissipParams::unit(0.6, 0.9, 1.2).unwrap();
        let times = TimeGrid::new(0.4, 9).unwrap();
        let traj = linear_trajectory(&f, times, &p).unwrap();
        let n0 = sobolev_norm(&f, p.s, false);
        for (w, t) in weighted_norm_trace(&traj, &p, p.s)
            .unwrap()
            .iter()
            .zip(times.times())
        {
            assert!(w.value <= t.exp() * n0 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn fit_recovers_linear_rate() {
        let f = smooth(64);
        let p = params();
        let ft = apply_semigroup(&f, 0.3, &p).unwrap();
        let fit = analyticity_radius_fit(&ft, &f, &p).unwrap();
        let r1 = fit.axis1.rate().unwrap();
        let r2 = fit.axis2.rate().unwrap();
        assert!((r1 / 0.3 - 1.0).abs() < 0.01, "{r1}");
        assert!((r2 / 0.3 - 1.0).abs() < 0.01, "{r2}");
        let fit0 = analyticity_radius_fit(&f, &f, &p).unwrap();
        assert_eq!(fit0.axis1.rate(), Some(0.0));
    }

    #[test]
    fn too_few_modes_is_unfit() {
        let g = GridSpec::square(16).unwrap();
        let f = &SpectralField::sine(g, 1, 0, 1.0) + &SpectralField::sine(g, 2, 0, 1.0);
        let fit = analyticity_radius_fit(&f, &f, &params()).unwrap();
        assert_eq!(fit.axis1, AxisFit::Unfit { modes: 2 });
        assert_eq!(fit.axis2, AxisFit::Unfit { modes: 0 });
    }

    #[test]
    fn smoothing_check_on_band_limited_data() {
        let f = smooth(32);
        let p = params();
        let mut moduli = Vec::new();
        for nodes in [11, 21, 41] {
            let traj = linear_trajectory(&f, TimeGrid::new(0.2, nodes).unwrap(), &p).unwrap();
            let r = h2_smoothing_check(&traj, 0.1, &p, 1.0).unwrap();
            assert!(r.h2_norm.is_finite());
            assert!((r.t0 - 0.1).abs() < 1e-12);
            moduli.push(r.continuity_modulus);
        }
        for w in moduli.windows(2) {
            assert!(w[1] <= 0.55 * w[0], "{moduli:?}");
        }
    }

    #[test]
    fn boundary_times_rejected() {
        let traj =
            linear_trajectory(&smooth(16), TimeGrid::new(0.2, 5).unwrap(), &params()).unwrap();
        assert_eq!(
            h2_smoothing_check(&traj, 0.0, &params(), 1.0).unwrap_err(),
            Error::BoundaryTime { t0: 0.0 }
        );
        assert!(h2_smoothing_check(&traj, 0.2, &params(), 1.0).is_err());
    }

    #[test]
    fn weight_sup_decreases_in_time() {
        let f = smooth(64);
        let p = params();
        let mut prev = f64::INFINITY;
        for tau in [0.05, 0.1, 0.2, 0.4] {
            let (w, _) = weight_scan(&f, 1.0, tau, &p);
            assert!(w.is_finite() && w < prev);
            prev = w;
        }
    }

    #[test]
    fn chain_at_time_zero_has_t0_slack() {
        let p = DissipParams::unit(0.75, 0.8, 1.0).unwrap();
        let r = remark_chain_check(&p, 0.3, 0.3, 1, 8).unwrap();
        assert!((r.lower.max_log_ratio + 0.3).abs() < 1e-15);
        assert!((r.upper.min_log_ratio + 0.3).abs() < 1e-15);
    }

    #[test]
    fn chain_on_diagonal() {
        // |ξ|^α = 2^{α/2}|k₁|^α on k₁ = k₂ with α = β
        let a = 0.75f64;
        let k = 5f64;
        let t = 0.2;
        let mid = 2.0 * k.powf(a);
        let r = 2f64.powf(a / 2.0) * k.powf(a);
        assert!(((2.0 * k * k).sqrt().powf(a) - r).abs() < 1e-12);
        let t0 = 0.1;
        assert!(-t0 + t * r <= t * mid);
        assert!(t * mid <= t0 + 2.0 * t * r);
    }

    #[test]
    fn chain_holds_on_lattice() {
        let p = DissipParams::unit(0.75, 0.8, 1.0).unwrap();
        let r = remark_chain_check(&p, 0.05, 0.05, 5, 128).unwrap();
        assert!(r.lower.holds() && r.upper.holds());
    }

    #[test]
    fn scalar_step_fails_off_the_second_axis() {
        // |ξ₁|^α ≤ 2 is false for large |ξ₁| on ξ₂ = 0
        let p = DissipParams::unit(0.75, 0.8, 1.0).unwrap();
        let r = remark_chain_check(&p, 0.05, 0.05, 1, 16).unwrap();
        assert!(!r.scalar_step.holds());
        let ((_, k2), _) = r.scalar_step.worst_at.unwrap();
        assert_eq!(k2, 0);
        let expected = (16f64.powf(0.75) / 2.0).ln();
        assert!((r.scalar_step.max_log_ratio - expected).abs() < 1e-12);
    }

    #[test]
    fn region_examples() {
        assert_eq!(region_classify(0.75, 0.75).unwrap(), RegionLabel::Y1);
        assert_eq!(region_classify(0.75, 0.30).unwrap(), RegionLabel::Y2);
        assert_eq!(region_classify(0.40, 0.50).unwrap(), RegionLabel::Outside);
        assert_eq!(region_classify(0.40, 0.60).unwrap(), RegionLabel::Y3);
        assert!(region_classify(0.0, 0.5).is_err());
        assert!(region_classify(0.5, 1.0).is_err());
    }

    #[test]
    fn regions_partition_condition_set() {
        for i in 1..200 {
            for j in 1..200 {
                let (a, b) = (i as f64 / 200.0, j as f64 / 200.0);
                let inside = region_classify(a, b).unwrap() != RegionLabel::Outside;
                assert_eq!(inside, condition_p(a, b).unwrap(), "({a}, {b})");
            }
        }
    }
}
