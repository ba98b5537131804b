//! Run configuration.
//!
//! One TOML file drives every subcommand. Unknown keys are rejected, every
//! section has defaults, and [`RunConfig::validate`] checks all of it before
//! any computation, naming the offending key path in the error.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use aqg_core::lemmas::{FieldEnsembleSpec, FunctionalOptions, MIN_SCALAR_DENSITY};
use aqg_core::solver::{ConstantsTable, EvolveOptions, PicardConfig};
use aqg_core::{Complex64, DissipParams, Error as CoreError, GridSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the configuration echo written into every output directory.
pub const ECHO_FILE: &str = "config.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid `{key}`: {message}")]
    Invalid { key: String, message: String },
}

impl ConfigError {
    pub fn invalid(key: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.into(),
            message: message.into(),
        }
    }

    /// Offending key path, when known.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            _ => None,
        }
    }

    /// Attaches a core validation error to `section`.
    pub fn from_core(section: &str, e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter {
                name,
                value,
                reason,
            } => Self::invalid(format!("{section}.{name}"), format!("{value} {reason}")),
            other => Self::invalid(section, other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub n1: usize,
    pub n2: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n1: 64, n2: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub s: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            alpha: 0.75,
            beta: 0.75,
            mu: 1.0,
            nu: 1.0,
            s: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    /// Random band-limited field normalized to `‖θ⁰‖_{H^s} = amplitude`.
    Random,
    /// Explicit Fourier modes scaled by `amplitude`; conjugates are implied.
    Modes,
    /// State read from a checkpoint; the run continues from its time.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub k1: i64,
    pub k2: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitConfig {
    pub kind: InitKind,
    pub seed: u64,
    pub spectrum_slope: f64,
    pub amplitude: f64,
    /// Band limit of random data; defaults to the dealiased band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig {
            kind: InitKind::Random,
            seed: 1,
            spectrum_slope: 2.0,
            amplitude: 1.0,
            kmax: None,
            modes: Vec::new(),
            path: None,
        }
    }
}

impl InitConfig {
    pub fn modes(&self) -> Vec<((i64, i64), Complex64)> {
        self.modes
            .iter()
            .map(|m| ((m.k1, m.k2), Complex64::new(m.re, m.im) * self.amplitude))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeConfig {
    /// Horizon of the run, counted from the initial time.
    #[serde(rename = "T")]
    pub horizon: f64,
    pub cfl: f64,
    pub tol: f64,
    pub dt_max: f64,
    pub trace_stride: usize,
    /// Global times at which checkpoints are written.
    pub checkpoints: Vec<f64>,
    /// Test flag: drop the nonlinearity.
    pub linear_only: bool,
}

impl Default for TimeConfig {
    fn default() -> Self {
        let d = EvolveOptions::default();
        TimeConfig {
            horizon: 1.0,
            cfl: d.cfl,
            tol: d.tol,
            dt_max: d.dt_max,
            trace_stride: d.trace_stride,
            checkpoints: Vec::new(),
            linear_only: false,
        }
    }
}

impl TimeConfig {
    pub fn evolve_options(&self) -> EvolveOptions {
        EvolveOptions {
            cfl: self.cfl,
            tol: self.tol,
            dt_max: self.dt_max,
            trace_stride: self.trace_stride,
            linear_only: self.linear_only,
            stops: self.checkpoints.clone(),
            ..EvolveOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PicardSection {
    pub n_nodes: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub weighted: bool,
    /// Fixed horizon; defaults to the existence time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    pub allow_outside: bool,
}

impl Default for PicardSection {
    fn default() -> Self {
        let d = PicardConfig::new(1.0, 32);
        PicardSection {
            n_nodes: d.n_nodes,
            max_iter: d.max_iter,
            tol: d.tol,
            weighted: true,
            horizon: None,
            allow_outside: false,
        }
    }
}

impl PicardSection {
    pub fn config(&self, horizon: f64) -> PicardConfig {
        PicardConfig {
            max_iter: self.max_iter,
            tol: self.tol,
            weighted: self.weighted,
            allow_outside: self.allow_outside,
            ..PicardConfig::new(horizon, self.n_nodes)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsMode {
    Calibrate,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    pub mode: ConstantsMode,
    #[serde(rename = "C1", skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(rename = "C2", skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(rename = "C3", skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    #[serde(rename = "C4", skip_serializing_if = "Option::is_none")]
    pub c4: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            mode: ConstantsMode::Calibrate,
            c1: None,
            c2: None,
            c3: None,
            c4: None,
            samples: 4,
            seed: 7,
        }
    }
}

impl ConstantsConfig {
    /// The explicit table; `None` in calibrate mode.
    pub fn explicit(&self) -> Result<Option<ConstantsTable>, ConfigError> {
        if self.mode == ConstantsMode::Calibrate {
            return Ok(None);
        }
        let mut values = [0.0; 4];
        for (i, v) in [self.c1, self.c2, self.c3, self.c4].into_iter().enumerate() {
            values[i] = v.ok_or_else(|| {
                ConfigError::invalid(
                    format!("constants.C{}", i + 1),
                    "required when mode = \"explicit\"",
                )
            })?;
        }
        let [c1, c2, c3, c4] = values;
        ConstantsTable::new(c1, c2, c3, c4)
            .map(Some)
            .map_err(|e| ConfigError::from_core("constants", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmasConfig {
    pub seed: u64,
    pub count: usize,
    /// Band limit; defaults to the smaller of 10 and the dealiased band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<usize>,
    pub spectrum_slope: f64,
    pub scalar_density: usize,
    /// Test hook: corrupt the interpolation norms so the suite must fail.
    pub fault_injection: bool,
}

impl Default for LemmasConfig {
    fn default() -> Self {
        LemmasConfig {
            seed: 1,
            count: FieldEnsembleSpec::DEFAULT_COUNT,
            kmax: None,
            spectrum_slope: FieldEnsembleSpec::DEFAULT_SLOPE,
            scalar_density: 100_000,
            fault_injection: false,
        }
    }
}

impl LemmasConfig {
    pub fn ensemble(&self, grid: GridSpec) -> FieldEnsembleSpec {
        FieldEnsembleSpec {
            seed: self.seed,
            count: self.count,
            kmax: self
                .kmax
                .unwrap_or(FieldEnsembleSpec::DEFAULT_KMAX.min(grid.dealiased_kmax())),
            spectrum_slope: self.spectrum_slope,
        }
    }

    pub fn options(&self) -> FunctionalOptions {
        FunctionalOptions {
            fault_injection: self.fault_injection,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Horizon of the short run at each lattice point.
    #[serde(rename = "T")]
    pub horizon: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            alphas: vec![0.6, 0.75, 0.9],
            betas: vec![0.6, 0.75, 0.9],
            horizon: 0.1,
        }
    }
}

impl SweepConfig {
    /// Lattice points, `alpha`-major.
    pub fn lattice(&self) -> Vec<(f64, f64)> {
        self.alphas
            .iter()
            .flat_map(|&a| self.betas.iter().map(move |&b| (a, b)))
            .collect()
    }
}

pub const FORMATS: [&str; 2] = ["csv", "toml"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// `csv` enables the trace table, `toml` the run summary.
    pub formats: Vec<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            formats: FORMATS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl OutputConfig {
    pub fn wants(&self, format: &str) -> bool {
        self.formats.iter().any(|f| f == format)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub params: ParamsConfig,
    pub init: InitConfig,
    pub time: TimeConfig,
    pub picard: PicardSection,
    pub constants: ConstantsConfig,
    pub lemmas: LemmasConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

fn positive(key: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::invalid(
            key,
            format!("{v} must be positive and finite"),
        ))
    }
}

fn at_least(key: &str, v: usize, min: usize) -> Result<(), ConfigError> {
    if v >= min {
        Ok(())
    } else {
        Err(ConfigError::invalid(
            key,
            format!("{v} must be at least {min}"),
        ))
    }
}

fn band(key: &str, kmax: usize, grid: GridSpec) -> Result<(), ConfigError> {
    if kmax >= 1 && kmax <= grid.dealiased_kmax() {
        Ok(())
    } else {
        Err(ConfigError::invalid(
            key,
            format!(
                "{kmax} must lie in 1..={} for a {}x{} grid",
                grid.dealiased_kmax(),
                grid.n1(),
                grid.n2()
            ),
        ))
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Applies the `--seed` and `--out` command-line overrides.
    pub fn apply_overrides(&mut self, seed: Option<u64>, out: Option<&Path>) {
        if let Some(seed) = seed {
            self.init.seed = seed;
            self.lemmas.seed = seed;
        }
        if let Some(out) = out {
            self.output.directory = out.to_path_buf();
        }
    }

    pub fn grid(&self) -> Result<GridSpec, ConfigError> {
        GridSpec::new(self.grid.n1, self.grid.n2).map_err(|_| {
            let key = if self.grid.n1 % 2 == 1 || self.grid.n1 < GridSpec::MIN_MODES {
                "grid.n1"
            } else {
                "grid.n2"
            };
            ConfigError::invalid(
                key,
                format!(
                    "{}x{} grid: sizes must be even and at least {}",
                    self.grid.n1,
                    self.grid.n2,
                    GridSpec::MIN_MODES
                ),
            )
        })
    }

    pub fn params(&self) -> Result<DissipParams, ConfigError> {
        let q = &self.params;
        DissipParams::new(q.alpha, q.beta, q.mu, q.nu, q.s)
            .map_err(|e| ConfigError::from_core("params", e))
    }

    /// Checks every section against the preconditions of the operations
    /// it feeds.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let grid = self.grid()?;
        self.params()?;

        let init = &self.init;
        if !init.spectrum_slope.is_finite() {
            return Err(ConfigError::invalid(
                "init.spectrum_slope",
                "must be finite",
            ));
        }
        if !(init.amplitude >= 0.0 && init.amplitude.is_finite()) {
            return Err(ConfigError::invalid(
                "init.amplitude",
                format!("{} must be nonnegative and finite", init.amplitude),
            ));
        }
        if let Some(k) = init.kmax {
            band("init.kmax", k, grid)?;
        }
        match init.kind {
            InitKind::Random => {}
            InitKind::Modes => {
                if init.modes.is_empty() {
                    return Err(ConfigError::invalid(
                        "init.modes",
                        "required when kind = \"modes\"",
                    ));
                }
                for m in &init.modes {
                    if (m.k1, m.k2) == (0, 0) {
                        return Err(ConfigError::invalid(
                            "init.modes",
                            "the k = (0, 0) mode must be absent (mean-zero data)",
                        ));
                    }
                    if !grid.in_dealiased_band(m.k1, m.k2) {
                        return Err(ConfigError::invalid(
                            "init.modes",
                            format!("mode ({}, {}) lies outside the dealiased band", m.k1, m.k2),
                        ));
                    }
                    if !(m.re.is_finite() && m.im.is_finite()) {
                        return Err(ConfigError::invalid("init.modes", "non-finite coefficient"));
                    }
                }
            }
            InitKind::File => {
                if init.path.is_none() {
                    return Err(ConfigError::invalid(
                        "init.path",
                        "required when kind = \"file\"",
                    ));
                }
            }
        }

        let time = &self.time;
        positive("time.T", time.horizon)?;
        for t in &time.checkpoints {
            let inside = if init.kind == InitKind::File {
                *t > 0.0 && t.is_finite()
            } else {
                *t > 0.0 && *t <= time.horizon
            };
            if !inside {
                return Err(ConfigError::invalid(
                    "time.checkpoints",
                    format!("{t} lies outside the run"),
                ));
            }
        }
        time.evolve_options()
            .validate()
            .map_err(|e| ConfigError::from_core("time", e))?;

        let picard = &self.picard;
        at_least("picard.n_nodes", picard.n_nodes, 2)?;
        at_least("picard.max_iter", picard.max_iter, 1)?;
        positive("picard.tol", picard.tol)?;
        if let Some(h) = picard.horizon {
            positive("picard.horizon", h)?;
        }

        self.constants.explicit()?;
        at_least("constants.samples", self.constants.samples, 1)?;

        let lemmas = &self.lemmas;
        at_least("lemmas.count", lemmas.count, 1)?;
        at_least(
            "lemmas.scalar_density",
            lemmas.scalar_density,
            MIN_SCALAR_DENSITY,
        )?;
        if !lemmas.spectrum_slope.is_finite() {
            return Err(ConfigError::invalid(
                "lemmas.spectrum_slope",
                "must be finite",
            ));
        }
        band("lemmas.kmax", lemmas.ensemble(grid).kmax, grid)?;

        let sweep = &self.sweep;
        for (key, values) in [
            ("sweep.alphas", &sweep.alphas),
            ("sweep.betas", &sweep.betas),
        ] {
            if values.is_empty() {
                return Err(ConfigError::invalid(key, "must not be empty"));
            }
            if let Some(v) = values.iter().find(|&&v| !(v > 0.0 && v < 1.0)) {
                return Err(ConfigError::invalid(key, format!("{v} must lie in (0, 1)")));
            }
        }
        positive("sweep.T", sweep.horizon)?;

        if self.output.directory.as_os_str().is_empty() {
            return Err(ConfigError::invalid(
                "output.directory",
                "must not be empty",
            ));
        }
        if let Some(f) = self
            .output
            .formats
            .iter()
            .find(|f| !FORMATS.contains(&f.as_str()))
        {
            return Err(ConfigError::invalid(
                "output.formats",
                format!("unknown format {f:?}; expected one of {FORMATS:?}"),
            ));
        }
        Ok(())
    }
}
