use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::math::{exp, expm1, ln, sqrt};
use crate::norms::{directional_seminorm, gevrey_weighted_norm, sobolev_norm, Axis};
use crate::params::DissipParams;
use crate::spectral::{dissipation_symbol, SpectralContext};

/// Step controls for [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOptions {
    /// Safety factor in `h ≤ cfl·min(Δx)/max|u|`.
    pub cfl: f64,
    /// Relative local error target in `H^s`.
    pub tol: f64,
    pub dt_max: f64,
    /// Steps below this abort the run.
    pub dt_min: f64,
    /// First step, and the step after every stop.
    pub dt_initial: f64,
    /// Record a trace row every this many accepted steps.
    pub trace_stride: usize,
    /// Drop the nonlinearity and take exact linear steps.
    pub linear_only: bool,
    /// Global times at which the state is snapshotted and the step
    /// controller restarts.
    pub stops: Vec<f64>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            cfl: 0.5,
            tol: 1e-6,
            dt_max: 0.05,
            dt_min: 1e-12,
            dt_initial: 1e-3,
            trace_stride: 1,
            linear_only: false,
            stops: Vec::new(),
        }
    }
}

impl EvolveOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be positive and finite",
                })
            }
        };
        positive("cfl", self.cfl)?;
        positive("tol", self.tol)?;
        positive("dt_max", self.dt_max)?;
        positive("dt_min", self.dt_min)?;
        positive("dt_initial", self.dt_initial)?;
        if self.dt_min > self.dt_initial {
            return Err(Error::InvalidParameter {
                name: "dt_min",
                value: self.dt_min,
                reason: "must not exceed dt_initial",
            });
        }
        if self.trace_stride == 0 {
            return Err(Error::InvalidParameter {
                name: "trace_stride",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if let Some(&t) = self.stops.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "stops",
                value: t,
                reason: "must be finite",
            });
        }
        Ok(())
    }
}

/// Diagnostics at one recorded time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t: f64,
    pub l2: f64,
    pub hs: f64,
    pub h2: f64,
    /// `‖e^{(t/2)B}θ‖_{H^s}` with weight time `t`; `+∞` when saturated.
    pub gevrey_hs: f64,
    pub gevrey_saturated: bool,
    /// `‖|∂₁|^α θ‖_{Ḣ^s}`.
    pub diss1: f64,
    /// `‖|∂₂|^β θ‖_{Ḣ^s}`.
    pub diss2: f64,
    pub max_u: f64,
    /// Step that led to this row; 0 for the first.
    pub dt: f64,
}

impl TraceRow {
    pub fn measure(
        ctx: &SpectralContext,
        f: &SpectralField,
        t: f64,
        dt: f64,
        p: &DissipParams,
    ) -> Result<Self> {
        let g = gevrey_weighted_norm(f, t, p.s, p)?;
        Ok(TraceRow {
            t,
            l2: sqrt(f.energy()),
            hs: sobolev_norm(f, p.s, false),
            h2: sobolev_norm(f, 2.0, false),
            gevrey_hs: g.value,
            gevrey_saturated: g.is_saturated(),
            diss1: directional_seminorm(f, Axis::X1, p.alpha, p.s),
            diss2: directional_seminorm(f, Axis::X2, p.beta, p.s),
            max_u: ctx.max_velocity(f)?,
            dt,
        })
    }
}

/// Trace rows in time order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsTrace {
    pub rows: Vec<TraceRow>,
}

impl DiagnosticsTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    /// Appends `later`, dropping its rows at or before the last time here.
    pub fn glue(&mut self, later: &DiagnosticsTrace) {
        let end = self.rows.last().map_or(f64::NEG_INFINITY, |r| r.t);
        self.rows.extend(later.rows.iter().filter(|r| r.t > end));
    }
}

/// Discrete energy balance `‖θ‖²` change against the dissipation
/// integral `2∫Σ A(k)|θ̂_k|² dt`, both in coefficient sums.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnergyLedger {
    pub initial_energy: f64,
    pub final_energy: f64,
    /// Quadrature of the dissipation integral over the accepted steps.
    pub dissipated: f64,
    /// `final − initial + dissipated`.
    pub residual: f64,
    /// Largest `|step residual| / h` over accepted steps.
    pub max_residual_rate: f64,
}

impl EnergyLedger {
    fn record(&mut self, before: &SpectralField, after: &SpectralField, h: f64, symbols: &[f64]) {
        let mut diss = 0.0;
        for ((a, b), &s) in before.coeffs().iter().zip(after.coeffs()).zip(symbols) {
            let (a, b) = (a.norm_sqr(), b.norm_sqr());
            if s == 0.0 || (a == 0.0 && b == 0.0) {
                continue;
            }
            // exact for exponential decay between the endpoints
            let mean = if a > 0.0 && b > 0.0 && (b / a - 1.0).abs() > 1e-8 {
                (b - a) / ln(b / a)
            } else {
                0.5 * (a + b)
            };
            diss += 2.0 * s * h * mean;
        }
        let step = after.energy() - before.energy() + diss;
        self.dissipated += diss;
        self.residual += step;
        self.final_energy = after.energy();
        self.max_residual_rate = self.max_residual_rate.max(step.abs() / h);
    }
}

/// Why a run stopped before `t_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AbortReason {
    /// A step produced NaN or infinity.
    NonFinite { t: f64 },
    /// The controller asked for a step below `dt_min`.
    StepTooSmall { t: f64, dt: f64 },
}

/// Output of [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveResult {
    pub trace: DiagnosticsTrace,
    /// Last valid state.
    pub final_state: SpectralField,
    /// Time of `final_state`.
    pub time: f64,
    /// States at the stops inside `(t_start, t_end]`.
    pub snapshots: Vec<(f64, SpectralField)>,
    pub abort: Option<AbortReason>,
    pub energy: EnergyLedger,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

/// Stored state for restarting a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params: DissipParams,
    pub time: f64,
    pub field: SpectralField,
}

struct Stepper {
    symbols: Vec<f64>,
}

impl Stepper {
    /// `e^{−hA}θ − φ(h)N` with `φ(h) = (1 − e^{−hA})/A`.
    fn etd(&self, theta: &SpectralField, n: Option<&SpectralField>, h: f64) -> SpectralField {
        let mut out = theta.clone();
        let coeffs = out.coeffs_mut();
        for (idx, &a) in self.symbols.iter().enumerate() {
            coeffs[idx] *= exp(-h * a);
            if let Some(n) = n {
                let phi = if a == 0.0 { h } else { -expm1(-h * a) / a };
                coeffs[idx] -= n.coeffs()[idx] * phi;
            }
        }
        out
    }
}

/// Marches `θ_t + u·∇θ + A(D)θ = 0` from `t_start` to `t_end`.
///
/// Each step is first-order exponential time differencing with the exact
/// linear factor. A step `h` is compared with two steps `h/2`; the step is
/// accepted when their relative `H^s` difference is within `tol`, and the
/// accepted state is the extrapolation `2·fine − coarse`. Steps are also
/// capped by the CFL limit, `dt_max` and the distance to the next stop.
/// Non-finite states abort the run and return the last valid state.
pub fn evolve(
    ctx: &SpectralContext,
    theta0: &SpectralField,
    t_start: f64,
    t_end: f64,
    p: &DissipParams,
    opts: &EvolveOptions,
) -> Result<EvolveResult> {
    opts.validate()?;
    p.validate()?;
    if !(t_end >= t_start) || !t_start.is_finite() || !t_end.is_finite() {
        return Err(Error::NegativeTime(t_end - t_start));
    }
    let grid = ctx.grid();
    if theta0.grid() != grid {
        return Err(Error::GridMismatch);
    }
    // rejects a nonzero mean
    ctx.max_velocity(theta0)?;
    let stepper = Stepper {
        symbols: (0..grid.len())
            .map(|idx| dissipation_symbol(grid.wavenumber(idx), p))
            .collect(),
    };
    let (dx1, dx2) = grid.spacing();
    let dx = dx1.min(dx2);
    let mut stops: Vec<f64> = opts
        .stops
        .iter()
        .copied()
        .filter(|&s| s > t_start && s < t_end)
        .collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    stops.push(t_end);

    let mut theta = theta0.clone().without_mean();
    let mut t = t_start;
    let mut h;
    let mut trace = DiagnosticsTrace::default();
    trace.rows.push(TraceRow::measure(ctx, &theta, t, 0.0, p)?);
    let mut energy = EnergyLedger {
        initial_energy: theta.energy(),
        final_energy: theta.energy(),
        ..Default::default()
    };
    let mut snapshots = Vec::new();
    let mut abort = None;
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut since_row;

    'stops: for &stop in &stops {
        h = opts.dt_initial;
        since_row = 0;
        while t < stop {
            let u = ctx.max_velocity(&theta)?;
            let mut limit = opts.dt_max;
            if u > 0.0 {
                limit = limit.min(opts.cfl * dx / u);
            }
            let (next, used) = loop {
                let hh = h.min(limit);
                let last = t + hh >= stop;
                let step = if last { stop - t } else { hh };
                if opts.linear_only {
                    break (stepper.etd(&theta, None, step), step);
                }
                if step < opts.dt_min && !last {
                    abort = Some(AbortReason::StepTooSmall { t, dt: step });
                    break 'stops;
                }
                let n0 = ctx.nonlinear_term(&theta)?;
                let coarse = stepper.etd(&theta, Some(&n0), step);
                let half = stepper.etd(&theta, Some(&n0), 0.5 * step);
                let fine = match ctx.nonlinear_term(&half) {
                    Ok(n1) => stepper.etd(&half, Some(&n1), 0.5 * step),
                    Err(_) => half,
                };
                let scale = sobolev_norm(&fine, p.s, false).max(f64::MIN_POSITIVE);
                let err = sobolev_norm(&(&fine - &coarse), p.s, false) / scale;
                if !err.is_finite() || !fine.is_finite() {
                    abort = Some(AbortReason::NonFinite { t });
                    break 'stops;
                }
                let factor = if err == 0.0 {
                    2.0
                } else {
                    (0.9 * sqrt(opts.tol / err)).clamp(0.2, 2.0)
                };
                if err <= opts.tol {
                    h = step * factor;
                    break (fine.scaled(2.0).axpy(-1.0, &coarse), step);
                }
                rejected += 1;
                h = step * factor;
                if h < opts.dt_min {
                    abort = Some(AbortReason::StepTooSmall { t, dt: h });
                    break 'stops;
                }
            };
            if !next.is_finite() {
                abort = Some(AbortReason::NonFinite { t });
                break 'stops;
            }
            energy.record(&theta, &next, used, &stepper.symbols);
            theta = next;
            t = if t + used >= stop { stop } else { t + used };
            accepted += 1;
            since_row += 1;
            if since_row >= opts.trace_stride || t == stop {
                trace.rows.push(TraceRow::measure(ctx, &theta, t, used, p)?);
                since_row = 0;
            }
        }
        if stop < t_end {
            snapshots.push((stop, theta.clone()));
        }
    }
    if abort.is_none()
        && !snapshots.last().map_or(false, |(s, _)| *s == t_end)
        && t == t_end
        && t_end > t_start
    {
        snapshots.push((t_end, theta.clone()));
    }
    Ok(EvolveResult {
        trace,
        final_state: theta,
        time: t,
        snapshots,
        abort,
        energy,
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

/// Resumes a run from `checkpoint` for `t_extra` more time units on the
/// global clock.
///
/// The checkpoint must live on the context's grid and carry exactly `p`.
/// When the checkpoint time is one of `opts.stops` of an earlier run, the
/// continuation reproduces that run's later states bit for bit.
pub fn glue_continue(
    ctx: &SpectralContext,
    checkpoint: &Checkpoint,
    t_extra: f64,
    p: &DissipParams,
    opts: &EvolveOptions,
) -> Result<EvolveResult> {
    let (g, c) = (ctx.grid(), checkpoint.field.grid());
    if g.n1() != c.n1() {
        return Err(Error::CheckpointMismatch { field: "n1" });
    }
    if g.n2() != c.n2() {
        return Err(Error::CheckpointMismatch { field: "n2" });
    }
    let q = &checkpoint.params;
    for (name, a, b) in [
        ("alpha", q.alpha, p.alpha),
        ("beta", q.beta, p.beta),
        ("mu", q.mu, p.mu),
        ("nu", q.nu, p.nu),
        ("s", q.s, p.s),
    ] {
        if a.to_bits() != b.to_bits() {
            return Err(Error::CheckpointMismatch { field: name });
        }
    }
    if !(t_extra >= 0.0) {
        return Err(Error::NegativeTime(t_extra));
    }
    evolve(
        ctx,
        &checkpoint.field,
        checkpoint.time,
        checkpoint.time + t_extra,
        p,
        opts,
    )
}
