//! Subcommand implementations.
//!
//! Each `run_*` validates its configuration, creates the output directory,
//! echoes the configuration into it and writes its result files. Findings
//! (solver aborts, inequality violations) are returned in the outcome with
//! the matching exit code; only failures that prevent output are errors.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use aqg_core::gevrey::{analyticity_radius_fit, condition_p, region_classify, AxisFit};
use aqg_core::lemmas::{
    functional_inequality_suite, normalized, random_band_limited_field, riesz_isometry_constant,
    scalar_inequality_suite, FieldEnsembleSpec, InequalityKind, InequalityReport,
};
use aqg_core::norms::{gevrey_weighted_norm, sobolev_norm};
use aqg_core::solver::{
    calibrate_constants, evolve, existence_time, glue_continue, picard_solve,
    weighted_picard_solve, AbortReason, Calibration, Checkpoint, ConstantsTable, EvolveResult,
    ExistenceTime, PicardReport, TraceRow,
};
use aqg_core::{DissipParams, Error as CoreError, GridSpec, SpectralContext, SpectralField};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::checkpoint::{self, CheckpointError};
use crate::config::{ConfigError, InitKind, RunConfig, ECHO_FILE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.toml";
pub const INITIAL_FILE: &str = "initial.aqgs";
pub const FINAL_FILE: &str = "final.aqgs";
pub const PICARD_FILE: &str = "picard.toml";
pub const LEMMAS_FILE: &str = "lemmas.toml";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const SWEEP_FAILURES_FILE: &str = "sweep_failures.csv";
pub const GEVREY_FILE: &str = "gevrey.csv";
pub const GEVREY_SUMMARY_FILE: &str = "gevrey.toml";
pub const CHECKPOINT_EXT: &str = "aqgs";

pub const TRACE_HEADER: [&str; 9] = [
    "t",
    "l2",
    "hs",
    "h2",
    "gevrey_hs",
    "diss1",
    "diss2",
    "max_u",
    "dt",
];
pub const SWEEP_HEADER: [&str; 7] = [
    "alpha",
    "beta",
    "region",
    "T0",
    "hs_growth",
    "rate1",
    "rate2",
];
pub const GEVREY_HEADER: [&str; 7] = ["t", "rate1", "rate2", "modes1", "modes2", "gevrey_hs", "h2"];

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("solver error: {0}")]
    Solver(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Io(_) => EXIT_IO,
            RunError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl From<io::Error> for RunError {
    fn from(e: io::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<csv::Error> for RunError {
    fn from(e: csv::Error) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<CheckpointError> for RunError {
    fn from(e: CheckpointError) -> Self {
        RunError::Io(e.to_string())
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CheckpointMismatch { field } => RunError::Config(ConfigError::invalid(
                "init.path",
                format!("checkpoint {field} does not match the configuration"),
            )),
            other => RunError::Solver(other.to_string()),
        }
    }
}

/// Shortest round-trip decimal form.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn prepare(cfg: &RunConfig) -> Result<PathBuf, RunError> {
    cfg.validate()?;
    let dir = cfg.output.directory.clone();
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(ECHO_FILE), cfg.to_toml_string())?;
    Ok(dir)
}

fn write_toml<T: Serialize>(path: &Path, value: &T) -> Result<(), RunError> {
    let text = toml::to_string(value).map_err(|e| RunError::Io(e.to_string()))?;
    fs::write(path, text)?;
    Ok(())
}

/// Initial data described by the `init` section.
pub enum Initial {
    Field(SpectralField),
    Restart(Checkpoint),
}

impl Initial {
    pub fn field(&self) -> &SpectralField {
        match self {
            Initial::Field(f) => f,
            Initial::Restart(c) => &c.field,
        }
    }

    pub fn time(&self) -> f64 {
        match self {
            Initial::Field(_) => 0.0,
            Initial::Restart(c) => c.time,
        }
    }
}

pub fn initial_state(
    cfg: &RunConfig,
    grid: GridSpec,
    p: &DissipParams,
) -> Result<Initial, RunError> {
    let init = &cfg.init;
    Ok(match init.kind {
        InitKind::Random => {
            let spec = FieldEnsembleSpec {
                seed: init.seed,
                count: 1,
                kmax: init.kmax.unwrap_or(grid.dealiased_kmax()),
                spectrum_slope: init.spectrum_slope,
            };
            let f = random_band_limited_field(grid, &spec, 0);
            Initial::Field(normalized(&f, p.s, init.amplitude))
        }
        InitKind::Modes => Initial::Field(SpectralField::from_modes(grid, &init.modes())),
        InitKind::File => {
            let path = init.path.as_deref().expect("validated");
            let c = checkpoint::read(path)?;
            if c.field.grid() != grid {
                let g = c.field.grid();
                return Err(ConfigError::invalid(
                    "init.path",
                    format!(
                        "grid mismatch: checkpoint is {}x{}, configuration {}x{}",
                        g.n1(),
                        g.n2(),
                        grid.n1(),
                        grid.n2()
                    ),
                )
                .into());
            }
            Initial::Restart(c)
        }
    })
}

fn constants(
    cfg: &RunConfig,
    ctx: &SpectralContext,
    p: &DissipParams,
) -> Result<(ConstantsTable, Option<Calibration>), RunError> {
    match cfg.constants.explicit()? {
        Some(table) => Ok((table, None)),
        None => {
            let cal = calibrate_constants(ctx, p, cfg.constants.samples, cfg.constants.seed)?;
            Ok((cal.table, Some(cal)))
        }
    }
}

// simulate

pub struct SimulateOutcome {
    pub dir: PathBuf,
    pub t_start: f64,
    pub result: EvolveResult,
}

impl SimulateOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.result.abort.is_some() {
            EXIT_SOLVER
        } else {
            EXIT_OK
        }
    }
}

pub fn write_trace(path: &Path, rows: &[TraceRow]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(TRACE_HEADER)?;
    for r in rows {
        w.write_record([
            num(r.t),
            num(r.l2),
            num(r.hs),
            num(r.h2),
            num(r.gevrey_hs),
            num(r.diss1),
            num(r.diss2),
            num(r.max_u),
            num(r.dt),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SimulateSummary {
    t_start: f64,
    t_end: f64,
    completed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    abort: Option<String>,
    accepted_steps: usize,
    rejected_steps: usize,
    trace_rows: usize,
    checkpoints: Vec<String>,
    energy: EnergySummary,
}

#[derive(Serialize)]
struct EnergySummary {
    initial: f64,
    final_energy: f64,
    dissipated: f64,
    residual: f64,
    max_residual_rate: f64,
}

pub fn abort_message(a: &AbortReason) -> String {
    match a {
        AbortReason::NonFinite { t } => format!("non-finite state at t = {t}"),
        AbortReason::StepTooSmall { t, dt } => format!("step {dt:e} below the minimum at t = {t}"),
    }
}

pub fn checkpoint_name(index: usize) -> String {
    format!("checkpoint_{index:03}.{CHECKPOINT_EXT}")
}

pub fn run_simulate(cfg: &RunConfig) -> Result<SimulateOutcome, RunError> {
    let dir = prepare(cfg)?;
    let grid = cfg.grid()?;
    let p = cfg.params()?;
    let ctx = SpectralContext::new(grid);
    let init = initial_state(cfg, grid, &p)?;
    let opts = cfg.time.evolve_options();
    let t_start = init.time();
    let result = match &init {
        Initial::Field(f) => evolve(&ctx, f, 0.0, cfg.time.horizon, &p, &opts)?,
        Initial::Restart(c) => glue_continue(&ctx, c, cfg.time.horizon, &p, &opts)?,
    };

    let store = |name: &str, time: f64, field: &SpectralField| {
        checkpoint::write(
            &dir.join(name),
            &Checkpoint {
                params: p,
                time,
                field: field.clone(),
            },
        )
    };
    store(INITIAL_FILE, t_start, init.field())?;
    let mut names = Vec::new();
    // the end time is always snapshotted; only requested times become checkpoints
    let requested = result
        .snapshots
        .iter()
        .filter(|(t, _)| cfg.time.checkpoints.contains(t));
    for (i, (t, f)) in requested.enumerate() {
        let name = checkpoint_name(i);
        store(&name, *t, f)?;
        names.push(name);
    }
    store(FINAL_FILE, result.time, &result.final_state)?;

    if cfg.output.wants("csv") {
        write_trace(&dir.join(TRACE_FILE), &result.trace.rows)?;
    }
    if cfg.output.wants("toml") {
        let e = &result.energy;
        write_toml(
            &dir.join(SUMMARY_FILE),
            &SimulateSummary {
                t_start,
                t_end: result.time,
                completed: result.abort.is_none(),
                abort: result.abort.as_ref().map(abort_message),
                accepted_steps: result.accepted_steps,
                rejected_steps: result.rejected_steps,
                trace_rows: result.trace.len(),
                checkpoints: names,
                energy: EnergySummary {
                    initial: e.initial_energy,
                    final_energy: e.final_energy,
                    dissipated: e.dissipated,
                    residual: e.residual,
                    max_residual_rate: e.max_residual_rate,
                },
            },
        )?;
    }
    Ok(SimulateOutcome {
        dir,
        t_start,
        result,
    })
}

// picard

pub struct PicardOutcome {
    pub dir: PathBuf,
    pub t0: ExistenceTime,
    pub t1: Option<ExistenceTime>,
    pub constants: ConstantsTable,
    pub plain: Option<PicardReport>,
    pub weighted: Option<PicardReport>,
}

impl PicardOutcome {
    pub fn exit_code(&self) -> i32 {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct PicardFile {
    #[serde(rename = "T0")]
    t0: f64,
    #[serde(rename = "T1", skip_serializing_if = "Option::is_none")]
    t1: Option<f64>,
    t0_unsatisfiable: bool,
    regime: String,
    theta0_hs: f64,
    constants: ConstantsOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    plain: Option<SolveOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weighted: Option<SolveOut>,
}

#[derive(Serialize)]
struct ConstantsOut {
    mode: String,
    #[serde(rename = "C1")]
    c1: f64,
    #[serde(rename = "C2")]
    c2: f64,
    #[serde(rename = "C3")]
    c3: f64,
    #[serde(rename = "C4")]
    c4: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    calibration: Option<CalibrationOut>,
}

#[derive(Serialize)]
struct CalibrationOut {
    samples: usize,
    seed: u64,
    max_ratios: Vec<f64>,
    four_term_calibrated: bool,
    cz_deviation: f64,
}

#[derive(Serialize, Default)]
struct SolveOut {
    horizon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
    converged: bool,
    iterations: usize,
    diverged: bool,
    outside_guaranteed_ball: bool,
    distances: Vec<f64>,
    contraction_ratios: Vec<f64>,
    ball_radius: f64,
    ball_max_norms: Vec<f64>,
    ball_inside: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    weighted_ball_max_norms: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weighted_ball_inside: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    weighted_norms: Vec<f64>,
}

impl SolveOut {
    fn from_report(horizon: f64, r: &PicardReport) -> Self {
        SolveOut {
            horizon,
            skipped: None,
            converged: r.converged,
            iterations: r.iterations,
            diverged: r.diverged,
            outside_guaranteed_ball: r.outside_guaranteed_ball,
            distances: r.distances.clone(),
            contraction_ratios: r.contraction_ratios.clone(),
            ball_radius: r.ball.radius,
            ball_max_norms: r.ball.max_norms.clone(),
            ball_inside: r.ball.inside,
            weighted_ball_max_norms: r.ball.weighted_max_norms.clone(),
            weighted_ball_inside: r.ball.weighted_inside,
            weighted_norms: r.weighted_norms.iter().map(|w| w.value).collect(),
        }
    }

    fn skipped(horizon: f64, reason: &str) -> Self {
        SolveOut {
            horizon,
            skipped: Some(reason.to_string()),
            ..SolveOut::default()
        }
    }
}

fn picard_error(e: CoreError) -> RunError {
    match e {
        CoreError::OutsideGuaranteedBall { .. } => {
            ConfigError::invalid("picard.horizon", e.to_string()).into()
        }
        other => other.into(),
    }
}

pub fn run_picard(cfg: &RunConfig) -> Result<PicardOutcome, RunError> {
    let dir = prepare(cfg)?;
    let grid = cfg.grid()?;
    let p = cfg.params()?;
    let ctx = SpectralContext::new(grid);
    let init = initial_state(cfg, grid, &p)?;
    let theta0 = init.field();
    let (table, calibration) = constants(cfg, &ctx, &p)?;
    let norm = sobolev_norm(theta0, p.s, false);
    let t0 = existence_time(norm, &p, &table, false);
    let t1 = cfg
        .picard
        .weighted
        .then(|| existence_time(norm, &p, &table, true));

    // A zero field has an unbounded existence time; fall back to time.T.
    let horizon_for = |guaranteed: f64| {
        let h = cfg.picard.horizon.unwrap_or(guaranteed);
        if h.is_infinite() {
            cfg.time.horizon
        } else {
            h
        }
    };

    let h0 = horizon_for(t0.time);
    let (plain, plain_out) = if h0 > 0.0 {
        let r =
            picard_solve(&ctx, theta0, &cfg.picard.config(h0), &p, &table).map_err(picard_error)?;
        let out = SolveOut::from_report(h0, &r);
        (Some(r), out)
    } else {
        (None, SolveOut::skipped(h0, "existence time is zero"))
    };

    let (weighted, weighted_out) = match t1 {
        Some(t1) => {
            let h1 = horizon_for(t1.time);
            if h1 > 0.0 {
                let r = weighted_picard_solve(&ctx, theta0, &cfg.picard.config(h1), &p, &table)
                    .map_err(picard_error)?;
                let out = SolveOut::from_report(h1, &r);
                (Some(r), Some(out))
            } else {
                (None, Some(SolveOut::skipped(h1, "existence time is zero")))
            }
        }
        None => (None, None),
    };

    let [c1, c2, c3, c4] = table.as_array();
    write_toml(
        &dir.join(PICARD_FILE),
        &PicardFile {
            t0: t0.time,
            t1: t1.map(|t| t.time),
            t0_unsatisfiable: t0.unsatisfiable,
            regime: format!("{:?}", t0.regime),
            theta0_hs: norm,
            constants: ConstantsOut {
                mode: if calibration.is_some() {
                    "calibrate".into()
                } else {
                    "explicit".into()
                },
                c1,
                c2,
                c3,
                c4,
                calibration: calibration.as_ref().map(|c| CalibrationOut {
                    samples: c.samples,
                    seed: c.seed,
                    max_ratios: c.max_ratios.to_vec(),
                    four_term_calibrated: c.four_term_calibrated,
                    cz_deviation: c.cz_deviation,
                }),
            },
            plain: Some(plain_out),
            weighted: weighted_out,
        },
    )?;
    Ok(PicardOutcome {
        dir,
        t0,
        t1,
        constants: table,
        plain,
        weighted,
    })
}

// lemmas

pub struct LemmasOutcome {
    pub dir: PathBuf,
    pub scalar: Vec<InequalityReport>,
    pub functional: Vec<InequalityReport>,
}

impl LemmasOutcome {
    pub fn reports(&self) -> impl Iterator<Item = &InequalityReport> {
        self.scalar.iter().chain(&self.functional)
    }

    pub fn violations(&self) -> usize {
        self.reports().map(|r| r.violations.len()).sum()
    }

    pub fn calderon_zygmund_p2(&self) -> Option<f64> {
        riesz_isometry_constant(&self.functional)
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations() == 0 {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }
}

#[derive(Serialize)]
struct LemmasFile {
    violations: usize,
    scalar_samples: usize,
    field_samples: usize,
    calderon_zygmund_p2: f64,
    report: Vec<ReportOut>,
}

#[derive(Serialize)]
struct ReportOut {
    id: String,
    suite: &'static str,
    kind: &'static str,
    samples: usize,
    skipped: usize,
    worst_ratio: f64,
    empirical_constant: f64,
    passed: bool,
    violations: Vec<ViolationOut>,
}

#[derive(Serialize)]
struct ViolationOut {
    seed: u64,
    index: u64,
    ratio: f64,
    detail: String,
}

fn report_out(suite: &'static str, r: &InequalityReport) -> ReportOut {
    ReportOut {
        id: r.id.clone(),
        suite,
        kind: match r.kind {
            InequalityKind::ConstantFree => "constant_free",
            InequalityKind::ConstantBearing => "constant_bearing",
        },
        samples: r.samples,
        skipped: r.skipped,
        worst_ratio: r.worst_ratio,
        empirical_constant: r.empirical_constant,
        passed: r.passed(),
        violations: r
            .violations
            .iter()
            .map(|v| ViolationOut {
                seed: v.seed,
                index: v.index,
                ratio: v.ratio,
                detail: v.detail.clone(),
            })
            .collect(),
    }
}

pub fn run_lemmas(cfg: &RunConfig) -> Result<LemmasOutcome, RunError> {
    let dir = prepare(cfg)?;
    let grid = cfg.grid()?;
    let p = cfg.params()?;
    let ctx = SpectralContext::new(grid);
    let l = &cfg.lemmas;
    let scalar = scalar_inequality_suite(&p, l.scalar_density, l.seed)?;
    let spec = l.ensemble(grid);
    let functional = functional_inequality_suite(&ctx, &spec, &p, l.options())?;
    let outcome = LemmasOutcome {
        dir,
        scalar,
        functional,
    };
    let mut report: Vec<ReportOut> = outcome
        .scalar
        .iter()
        .map(|r| report_out("scalar", r))
        .collect();
    report.extend(
        outcome
            .functional
            .iter()
            .map(|r| report_out("functional", r)),
    );
    write_toml(
        &outcome.dir.join(LEMMAS_FILE),
        &LemmasFile {
            violations: outcome.violations(),
            scalar_samples: outcome.scalar.iter().map(|r| r.samples).sum(),
            field_samples: spec.count,
            calderon_zygmund_p2: outcome.calderon_zygmund_p2().unwrap_or(f64::NAN),
            report,
        },
    )?;
    Ok(outcome)
}

// sweep

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub region: String,
    pub t0: f64,
    /// `ln(‖θ(T)‖_{H^s}/‖θ⁰‖_{H^s}) / T` over the short run.
    pub hs_growth: f64,
    /// Fitted decay rates of `θ(T)` against `θ⁰`; NaN when unfit.
    pub rate1: f64,
    pub rate2: f64,
    pub error: Option<String>,
}

pub struct SweepOutcome {
    pub dir: PathBuf,
    pub rows: Vec<SweepRow>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn exit_code(&self) -> i32 {
        EXIT_OK
    }
}

fn rate(fit: AxisFit) -> f64 {
    fit.rate().unwrap_or(f64::NAN)
}

fn sweep_point(
    cfg: &RunConfig,
    ctx: &SpectralContext,
    theta0: &SpectralField,
    alpha: f64,
    beta: f64,
) -> SweepRow {
    let mut row = SweepRow {
        alpha,
        beta,
        region: region_classify(alpha, beta)
            .map(|r| r.as_str().to_string())
            .unwrap_or_default(),
        t0: f64::NAN,
        hs_growth: f64::NAN,
        rate1: f64::NAN,
        rate2: f64::NAN,
        error: None,
    };
    let result = (|| -> Result<(), RunError> {
        let q = &cfg.params;
        let p = DissipParams::new(alpha, beta, q.mu, q.nu, q.s)?;
        let (table, _) = constants(cfg, ctx, &p)?;
        let h0 = sobolev_norm(theta0, p.s, false);
        row.t0 = existence_time(h0, &p, &table, false).time;
        let opts = aqg_core::solver::EvolveOptions {
            stops: Vec::new(),
            ..cfg.time.evolve_options()
        };
        let horizon = cfg.sweep.horizon;
        let r = evolve(ctx, theta0, 0.0, horizon, &p, &opts)?;
        if let Some(a) = &r.abort {
            return Err(RunError::Solver(abort_message(a)));
        }
        let h1 = sobolev_norm(&r.final_state, p.s, false);
        row.hs_growth = if h0 > 0.0 {
            (h1 / h0).ln() / horizon
        } else {
            0.0
        };
        let fit = analyticity_radius_fit(&r.final_state, theta0, &p)?;
        row.rate1 = rate(fit.axis1);
        row.rate2 = rate(fit.axis2);
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

pub fn run_sweep(cfg: &RunConfig, threads: Option<usize>) -> Result<SweepOutcome, RunError> {
    let dir = prepare(cfg)?;
    let grid = cfg.grid()?;
    let p = cfg.params()?;
    let ctx = SpectralContext::new(grid);
    let init = initial_state(cfg, grid, &p)?;
    let theta0 = init.field();
    let lattice = cfg.sweep.lattice();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| RunError::Solver(e.to_string()))?;
    // collect keeps lattice order whatever the scheduling
    let rows: Vec<SweepRow> = pool.install(|| {
        lattice
            .par_iter()
            .map(|&(a, b)| sweep_point(cfg, &ctx, theta0, a, b))
            .collect()
    });

    let mut w = csv::Writer::from_path(dir.join(SWEEP_FILE))?;
    w.write_record(SWEEP_HEADER)?;
    for r in &rows {
        w.write_record([
            num(r.alpha),
            num(r.beta),
            r.region.clone(),
            num(r.t0),
            num(r.hs_growth),
            num(r.rate1),
            num(r.rate2),
        ])?;
    }
    w.flush()?;
    let mut w = csv::Writer::from_path(dir.join(SWEEP_FAILURES_FILE))?;
    w.write_record(["alpha", "beta", "error"])?;
    for r in &rows {
        if let Some(e) = &r.error {
            w.write_record([num(r.alpha), num(r.beta), e.clone()])?;
        }
    }
    w.flush()?;
    Ok(SweepOutcome { dir, rows })
}

// gevrey

#[derive(Debug, Clone, PartialEq)]
pub struct GevreyRow {
    pub t: f64,
    pub rate1: f64,
    pub rate2: f64,
    pub modes1: usize,
    pub modes2: usize,
    /// `‖e^{(τ/2)B}θ‖_{H^s}` with `τ` the time since the first snapshot.
    pub gevrey_hs: f64,
    pub h2: f64,
}

pub struct GevreyOutcome {
    pub dir: PathBuf,
    pub rows: Vec<GevreyRow>,
}

#[derive(Serialize)]
struct GevreySummary {
    snapshots: usize,
    alpha: f64,
    beta: f64,
    region: String,
    condition_p: bool,
    t_first: f64,
    t_last: f64,
}

fn modes(fit: AxisFit) -> usize {
    match fit {
        AxisFit::Fit { modes, .. } | AxisFit::Unfit { modes } => modes,
    }
}

/// Fits decay rates and weighted norms for every checkpoint in `run_dir`,
/// relative to the earliest one.
pub fn run_gevrey(run_dir: &Path, out: Option<&Path>) -> Result<GevreyOutcome, RunError> {
    let mut snaps = Vec::new();
    let entries =
        fs::read_dir(run_dir).map_err(|e| RunError::Io(format!("{}: {e}", run_dir.display())))?;
    for entry in entries {
        let path = entry?.path();
        if path.extension().is_some_and(|x| x == CHECKPOINT_EXT) {
            snaps.push(checkpoint::read(&path)?);
        }
    }
    if snaps.is_empty() {
        return Err(RunError::Io(format!(
            "no .{CHECKPOINT_EXT} files in {}",
            run_dir.display()
        )));
    }
    snaps.sort_by(|a, b| a.time.total_cmp(&b.time));
    snaps.dedup_by(|a, b| a.time == b.time);
    let first = &snaps[0];
    let p = first.params;
    if let Some(bad) = snaps
        .iter()
        .find(|c| c.params != p || c.field.grid() != first.field.grid())
    {
        return Err(RunError::Io(format!(
            "checkpoint at t = {} belongs to a different run",
            bad.time
        )));
    }
    let mut rows = Vec::with_capacity(snaps.len());
    for c in &snaps {
        let fit = analyticity_radius_fit(&c.field, &first.field, &p)?;
        let w = gevrey_weighted_norm(&c.field, c.time - first.time, p.s, &p)?;
        rows.push(GevreyRow {
            t: c.time,
            rate1: rate(fit.axis1),
            rate2: rate(fit.axis2),
            modes1: modes(fit.axis1),
            modes2: modes(fit.axis2),
            gevrey_hs: w.value,
            h2: sobolev_norm(&c.field, 2.0, false),
        });
    }

    let dir = out.unwrap_or(run_dir).to_path_buf();
    fs::create_dir_all(&dir)?;
    let mut w = csv::Writer::from_path(dir.join(GEVREY_FILE))?;
    w.write_record(GEVREY_HEADER)?;
    for r in &rows {
        w.write_record([
            num(r.t),
            num(r.rate1),
            num(r.rate2),
            r.modes1.to_string(),
            r.modes2.to_string(),
            num(r.gevrey_hs),
            num(r.h2),
        ])?;
    }
    w.flush()?;
    write_toml(
        &dir.join(GEVREY_SUMMARY_FILE),
        &GevreySummary {
            snapshots: rows.len(),
            alpha: p.alpha,
            beta: p.beta,
            region: region_classify(p.alpha, p.beta)?.as_str().to_string(),
            condition_p: condition_p(p.alpha, p.beta)?,
            t_first: first.time,
            t_last: snaps[snaps.len() - 1].time,
        },
    )?;
    Ok(GevreyOutcome { dir, rows })
}
