//! Flat `key=value` experiment configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bandgap_qed::bandedge::EmitterSpec;
use bandgap_qed::dynamics::MAX_DELTA_HAT;
use bandgap_qed::lattice1d::LatticeSpec;
use bandgap_qed::Tolerances;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("line {line}: expected key=value, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("cannot read config {path}: {reason}")]
    Read { path: String, reason: String },
    #[error("BANDGAP_QED_THREADS: {0}")]
    Threads(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Bands,
    Gaps,
    Dos,
    Kernel,
    Decay,
    Spectrum,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Analytic,
    Volterra,
    Talbot,
    Asymptotic,
    /// Closed form, Volterra and Talbot side by side.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSource {
    ClosedForm,
    Dos,
}

macro_rules! keyword_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(format!("expected one of: {}", [$($name),+].join(", "))),
                }
            }
        }
    };
}

keyword_enum!(Command {
    Bands => "bands",
    Gaps => "gaps",
    Dos => "dos",
    Kernel => "kernel",
    Decay => "decay",
    Spectrum => "spectrum",
    Figure => "figure",
});

keyword_enum!(MethodChoice {
    Analytic => "analytic",
    Volterra => "volterra",
    Talbot => "talbot",
    Asymptotic => "asymptotic",
    All => "all",
});

keyword_enum!(KernelSource {
    ClosedForm => "closed_form",
    Dos => "dos",
});

/// Detunings of the population figure, in units of beta.
pub const FIGURE_DETUNINGS: [f64; 6] = [-10.0, -3.5, -1.0, 0.0, 1.0, 10.0];

/// Everything a run needs. Lattice lengths are absolute with `c = 1`;
/// emitter times and detunings are in units of `1/beta` and `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub figure: String,
    pub n: f64,
    pub a: f64,
    pub b: f64,
    pub k_points: usize,
    pub bands: usize,
    /// Upper frequency for the gap search; `None` covers `bands` branches.
    pub omega_max: Option<f64>,
    pub edge_branch: usize,
    pub dos_span: f64,
    pub dos_points: usize,
    pub beta: f64,
    pub deltas: Vec<f64>,
    pub t_max: f64,
    pub dt: f64,
    pub method: MethodChoice,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_points: usize,
    pub kernel_source: KernelSource,
    /// DOS cutoff above the edge, in units of beta.
    pub cutoff: f64,
    pub dk_min: f64,
    pub dk_max: f64,
    pub dk_points: usize,
    pub spectrum_t_max: f64,
    pub spectrum_dt: f64,
    pub out: PathBuf,
    pub svg: bool,
    pub svg_log_y: bool,
    pub root_tol: f64,
    pub quad_tol: f64,
    pub erf_tol: f64,
    pub max_iter: usize,
    pub volterra_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self {
            command: Command::Figure,
            figure: "pop-isotropic".into(),
            n: 3.0,
            a: 0.25,
            b: 1.5,
            k_points: 128,
            bands: 4,
            omega_max: None,
            edge_branch: 1,
            dos_span: 0.5,
            dos_points: 201,
            beta: 1.0,
            deltas: FIGURE_DETUNINGS.to_vec(),
            t_max: 10.0,
            dt: 1e-3,
            method: MethodChoice::Analytic,
            tau_min: 0.1,
            tau_max: 10.0,
            tau_points: 100,
            kernel_source: KernelSource::ClosedForm,
            cutoff: 1e4,
            dk_min: -5.0,
            dk_max: 20.0,
            dk_points: 501,
            spectrum_t_max: 120.0,
            spectrum_dt: 0.01,
            out: PathBuf::from("."),
            svg: false,
            svg_log_y: false,
            root_tol: tol.root_tol,
            quad_tol: tol.quad_tol,
            erf_tol: tol.erf_tol,
            max_iter: tol.max_iter,
            volterra_tol: 1e-4,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::InvalidValue {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    value.split(',').map(|v| parse(key, v.trim())).collect()
}

fn join_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "command" => self.command = parse(key, value)?,
            "figure" => self.figure = value.into(),
            "n" => self.n = parse(key, value)?,
            "a" => self.a = parse(key, value)?,
            "b" => self.b = parse(key, value)?,
            "k_points" => self.k_points = parse(key, value)?,
            "bands" => self.bands = parse(key, value)?,
            "omega_max" => {
                self.omega_max = if value == "auto" { None } else { Some(parse(key, value)?) }
            }
            "edge_branch" => self.edge_branch = parse(key, value)?,
            "dos_span" => self.dos_span = parse(key, value)?,
            "dos_points" => self.dos_points = parse(key, value)?,
            "beta" => self.beta = parse(key, value)?,
            "deltas" => self.deltas = parse_list(key, value)?,
            "t_max" => self.t_max = parse(key, value)?,
            "dt" => self.dt = parse(key, value)?,
            "method" => self.method = parse(key, value)?,
            "tau_min" => self.tau_min = parse(key, value)?,
            "tau_max" => self.tau_max = parse(key, value)?,
            "tau_points" => self.tau_points = parse(key, value)?,
            "kernel_source" => self.kernel_source = parse(key, value)?,
            "cutoff" => self.cutoff = parse(key, value)?,
            "dk_min" => self.dk_min = parse(key, value)?,
            "dk_max" => self.dk_max = parse(key, value)?,
            "dk_points" => self.dk_points = parse(key, value)?,
            "spectrum_t_max" => self.spectrum_t_max = parse(key, value)?,
            "spectrum_dt" => self.spectrum_dt = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "svg" => self.svg = parse(key, value)?,
            "svg_log_y" => self.svg_log_y = parse(key, value)?,
            "root_tol" => self.root_tol = parse(key, value)?,
            "quad_tol" => self.quad_tol = parse(key, value)?,
            "erf_tol" => self.erf_tol = parse(key, value)?,
            "max_iter" => self.max_iter = parse(key, value)?,
            "volterra_tol" => self.volterra_tol = parse(key, value)?,
            _ => return Err(ConfigError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// `key=value` pair, as accepted by [`ExperimentConfig::set`].
    pub fn set_pair(&mut self, pair: &str) -> Result<(), ConfigError> {
        let (k, v) = pair.split_once('=').ok_or_else(|| ConfigError::Syntax { line: 0, text: pair.into() })?;
        self.set(k.trim(), v.trim())
    }

    /// Every key with its current value, in a fixed order.
    pub fn to_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("command", self.command.to_string()),
            ("figure", self.figure.clone()),
            ("n", self.n.to_string()),
            ("a", self.a.to_string()),
            ("b", self.b.to_string()),
            ("k_points", self.k_points.to_string()),
            ("bands", self.bands.to_string()),
            ("omega_max", self.omega_max.map_or("auto".into(), |w| w.to_string())),
            ("edge_branch", self.edge_branch.to_string()),
            ("dos_span", self.dos_span.to_string()),
            ("dos_points", self.dos_points.to_string()),
            ("beta", self.beta.to_string()),
            ("deltas", join_list(&self.deltas)),
            ("t_max", self.t_max.to_string()),
            ("dt", self.dt.to_string()),
            ("method", self.method.to_string()),
            ("tau_min", self.tau_min.to_string()),
            ("tau_max", self.tau_max.to_string()),
            ("tau_points", self.tau_points.to_string()),
            ("kernel_source", self.kernel_source.to_string()),
            ("cutoff", self.cutoff.to_string()),
            ("dk_min", self.dk_min.to_string()),
            ("dk_max", self.dk_max.to_string()),
            ("dk_points", self.dk_points.to_string()),
            ("spectrum_t_max", self.spectrum_t_max.to_string()),
            ("spectrum_dt", self.spectrum_dt.to_string()),
            ("out", self.out.display().to_string()),
            ("svg", self.svg.to_string()),
            ("svg_log_y", self.svg_log_y.to_string()),
            ("root_tol", self.root_tol.to_string()),
            ("quad_tol", self.quad_tol.to_string()),
            ("erf_tol", self.erf_tol.to_string()),
            ("max_iter", self.max_iter.to_string()),
            ("volterra_tol", self.volterra_tol.to_string()),
        ]
    }

    /// One `key=value` per line.
    pub fn to_text(&self) -> String {
        self.to_pairs().iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// Single-line form used in CSV comment headers.
    pub fn to_comment(&self) -> String {
        self.to_pairs().iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join("; ")
    }

    /// Parses a config file body on top of the defaults. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax { line: i + 1, text: line.into() })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            root_tol: self.root_tol,
            quad_tol: self.quad_tol,
            erf_tol: self.erf_tol,
            max_iter: self.max_iter,
        }
    }

    pub fn lattice(&self) -> Result<LatticeSpec<f64>, ConfigError> {
        LatticeSpec::new(self.n, self.a, self.b).map_err(|e| ConfigError::InvalidValue {
            key: "n/a/b".into(),
            value: format!("{}/{}/{}", self.n, self.a, self.b),
            reason: e.to_string(),
        })
    }

    pub fn emitter(&self, delta_hat: f64) -> Result<EmitterSpec<f64>, ConfigError> {
        EmitterSpec::with_delta_hat(self.beta, delta_hat).map_err(|e| ConfigError::InvalidValue {
            key: "beta/deltas".into(),
            value: format!("{}/{}", self.beta, delta_hat),
            reason: e.to_string(),
        })
    }

    /// Range checks that do not need a solver.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, value: String, reason: &str| {
            Err(ConfigError::InvalidValue { key: key.into(), value, reason: reason.into() })
        };
        let positive = [
            ("dos_span", self.dos_span),
            ("beta", self.beta),
            ("t_max", self.t_max),
            ("dt", self.dt),
            ("tau_min", self.tau_min),
            ("cutoff", self.cutoff),
            ("spectrum_t_max", self.spectrum_t_max),
            ("spectrum_dt", self.spectrum_dt),
            ("volterra_tol", self.volterra_tol),
        ];
        for (k, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(k, v.to_string(), "must be finite and > 0");
            }
        }
        for (k, v) in [("k_points", self.k_points), ("dos_points", self.dos_points), ("tau_points", self.tau_points), ("dk_points", self.dk_points)] {
            if v < 2 {
                return bad(k, v.to_string(), "need at least 2 points");
            }
        }
        if self.bands == 0 {
            return bad("bands", "0".into(), "need at least one band");
        }
        if !(self.tau_max > self.tau_min) {
            return bad("tau_max", self.tau_max.to_string(), "must exceed tau_min");
        }
        if !(self.dk_max > self.dk_min && self.dk_min.is_finite() && self.dk_max.is_finite()) {
            return bad("dk_max", self.dk_max.to_string(), "must exceed dk_min");
        }
        if self.deltas.is_empty() {
            return bad("deltas", String::new(), "need at least one detuning");
        }
        if let Some(d) = self.deltas.iter().find(|d| !(d.abs() <= MAX_DELTA_HAT)) {
            return bad("deltas", d.to_string(), "|delta| must be <= 1000 beta");
        }
        if let Some(w) = self.omega_max {
            if !(w.is_finite() && w > 0.0) {
                return bad("omega_max", w.to_string(), "must be finite and > 0");
            }
        }
        if (self.t_max / self.dt) > 1e7 || (self.spectrum_t_max / self.spectrum_dt) > 1e7 {
            return bad("dt", self.dt.to_string(), "more than 1e7 steps");
        }
        self.tolerances().validate().map_err(|e| ConfigError::InvalidValue {
            key: "tol".into(),
            value: String::new(),
            reason: e.to_string(),
        })?;
        self.lattice()?;
        self.emitter(self.deltas[0])?;
        Ok(())
    }
}
