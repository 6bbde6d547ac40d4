//! Command drivers. Each one computes its artifacts in memory; files are
//! written afterwards by a single writer.

use std::path::{Path, PathBuf};

use bandgap_qed::bandedge::{
    band_edge_from_structure, dos_eval, kernel_band_edge, kernel_from_dos_with, DosModel, Edge, EmitterSpec,
};
use bandgap_qed::dynamics::{
    a2_analytic, a2_asymptotic, a2_talbot, emission_spectrum, trapped_fraction, uniform_times, volterra_solve_with,
    DecayTrace, VolterraOptions, DEFAULT_ASYMPTOTIC_START,
};
use bandgap_qed::lattice1d::{find_gaps_with, BandStructure, DEFAULT_SCAN_PER_PI};
use rayon::prelude::*;

use crate::config::{Command, ConfigError, ExperimentConfig, KernelSource, MethodChoice};
use crate::format::{fmt_g, Table};
use crate::svg::{Plot, Series};

/// Largest sup-norm gap tolerated between the closed-form figure curves
/// and the Volterra solution.
pub const FIGURE_CHECK_TOLERANCE: f64 = 1e-2;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}")]
    Numerical {
        context: String,
        #[source]
        source: bandgap_qed::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical { .. } | RunError::Verification(_) => 3,
            RunError::Io { .. } => 1,
        }
    }
}

trait Context<T> {
    fn context(self, what: impl Into<String>) -> Result<T, RunError>;
}

impl<T, E: Into<bandgap_qed::Error>> Context<T> for Result<T, E> {
    fn context(self, what: impl Into<String>) -> Result<T, RunError> {
        self.map_err(|e| RunError::Numerical { context: what.into(), source: e.into() })
    }
}

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    /// File name relative to the output directory.
    pub name: String,
    pub contents: String,
}

/// Caps the rayon pool from `BANDGAP_QED_THREADS` if it is set.
pub fn configure_threads() -> Result<(), ConfigError> {
    let Ok(v) = std::env::var("BANDGAP_QED_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| ConfigError::Threads(format!("`{v}` is not a thread count")))?;
    if n == 0 {
        return Err(ConfigError::Threads("must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| ConfigError::Threads(e.to_string()))
}

/// Runs the configured command and writes its files under `cfg.out`.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, RunError> {
    let artifacts = build_artifacts(cfg)?;
    write_artifacts(&cfg.out, &artifacts)
}

fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.to_path_buf(), source })?;
    artifacts
        .iter()
        .map(|a| {
            let path = dir.join(&a.name);
            std::fs::write(&path, &a.contents).map_err(|source| RunError::Io { path: path.clone(), source })?;
            Ok(path)
        })
        .collect()
}

/// Computes every file of a run without touching the disk.
pub fn build_artifacts(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    cfg.validate()?;
    match cfg.command {
        Command::Bands => bands(cfg),
        Command::Gaps => gaps(cfg),
        Command::Dos => dos(cfg),
        Command::Kernel => kernel(cfg),
        Command::Decay => decay(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Figure => figure(cfg),
    }
}

fn table<S: Into<String>>(cfg: &ExperimentConfig, header: impl IntoIterator<Item = S>) -> Table {
    let mut t = Table::new(header);
    t.comment(format!("config: {}", cfg.to_comment()));
    t
}

fn csv_and_svg(cfg: &ExperimentConfig, stem: &str, t: &Table, plot: impl FnOnce() -> Plot) -> Vec<Artifact> {
    let mut out = vec![Artifact { name: format!("{stem}.csv"), contents: t.render() }];
    if cfg.svg {
        let mut p = plot();
        p.log_y = cfg.svg_log_y;
        out.push(Artifact { name: format!("{stem}.svg"), contents: p.render() });
    }
    out
}

/// Detuning label used in file and column names: at least one decimal.
pub fn delta_label(d: f64) -> String {
    let d = if d == 0.0 { 0.0 } else { d };
    let short = format!("{d:.1}");
    if short.parse::<f64>() == Ok(d) {
        short
    } else {
        d.to_string()
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn bands(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    let spec = cfg.lattice()?;
    let bs = BandStructure::compute(spec, cfg.k_points, cfg.bands, &cfg.tolerances()).context("band structure")?;
    let l = spec.period();
    let pi = std::f64::consts::PI;
    let kx: Vec<f64> = bs.k().iter().map(|k| k * l / pi).collect();
    let mut t = table(cfg, ["k_over_piL", "band_index", "omega_L_over_2pic"]);
    let mut plot = Plot::new("Band structure", "k L / pi", "omega L / (2 pi c)");
    for (m, branch) in bs.bands().iter().enumerate() {
        let w: Vec<f64> = branch.iter().map(|w| w * l / (2.0 * pi)).collect();
        for (k, w) in kx.iter().zip(&w) {
            t.push_fields(&[fmt_g(*k), m.to_string(), fmt_g(*w)]);
        }
        plot.add(Series::new(format!("band {m}"), &kx, &w));
    }
    Ok(csv_and_svg(cfg, "bands", &t, || plot))
}

fn gaps(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    let spec = cfg.lattice()?;
    let omega_max = cfg
        .omega_max
        .unwrap_or((cfg.bands as f64 + 1.0) * std::f64::consts::PI / spec.period());
    let found = find_gaps_with(&spec, omega_max, DEFAULT_SCAN_PER_PI, &cfg.tolerances()).context("gap search")?;
    let mut t = table(cfg, ["gap_index", "omega_low", "omega_high", "midgap", "gap_midgap_ratio"]);
    for (i, g) in found.iter().enumerate() {
        t.push_fields(&[
            (i + 1).to_string(),
            fmt_g(g.omega_low),
            fmt_g(g.omega_high),
            fmt_g(g.midgap),
            fmt_g(g.gap_midgap_ratio),
        ]);
    }
    Ok(csv_and_svg(cfg, "gaps", &t, || {
        let idx: Vec<f64> = (1..=found.len()).map(|i| i as f64).collect();
        let mut p = Plot::new("Gap edges", "gap index", "omega");
        p.add(Series::new("omega_low", &idx, &found.iter().map(|g| g.omega_low).collect::<Vec<_>>()));
        p.add(Series::new("omega_high", &idx, &found.iter().map(|g| g.omega_high).collect::<Vec<_>>()));
        p
    }))
}

fn dos(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    let spec = cfg.lattice()?;
    let bs = BandStructure::compute(spec, cfg.k_points, cfg.edge_branch + 1, &cfg.tolerances()).context("band structure")?;
    let edge = band_edge_from_structure(&bs, cfg.edge_branch, Edge::Lower).context("band edge fit")?;
    let model = DosModel::from_edge_model(&edge).context("density of states")?;
    let omega = linspace(edge.omega_g - cfg.dos_span, edge.omega_g + cfg.dos_span, cfg.dos_points);
    let rho: Vec<f64> = omega.iter().map(|&w| dos_eval(&model, w)).collect();
    let mut t = table(cfg, ["omega", "rho"]);
    t.comment(format!(
        "band_edge: omega_g={} k0={} curvature={}",
        fmt_g(edge.omega_g),
        fmt_g(edge.k0),
        fmt_g(edge.curvature)
    ));
    for (w, r) in omega.iter().zip(&rho) {
        t.push_numbers(&[*w, *r]);
    }
    Ok(csv_and_svg(cfg, "dos", &t, || {
        let mut p = Plot::new("Band-edge density of states", "omega", "rho");
        p.add(Series::new("rho", &omega, &rho));
        p
    }))
}

fn kernel(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    let taus = linspace(cfg.tau_min, cfg.tau_max, cfg.tau_points);
    let tol = cfg.tolerances();
    let mut out = Vec::new();
    for &d in &cfg.deltas {
        let em = cfg.emitter(d)?;
        let k = match cfg.kernel_source {
            KernelSource::ClosedForm => taus
                .iter()
                .map(|&tau| kernel_band_edge(&em, tau))
                .collect::<Result<Vec<_>, _>>()
                .context("kernel")?,
            KernelSource::Dos => {
                let dos = DosModel::band_edge_for_coupling(0.0, cfg.beta).context("density of states")?;
                taus.par_iter()
                    .map(|&tau| kernel_from_dos_with(&dos, &em, tau, cfg.cutoff * cfg.beta, &tol))
                    .collect::<Result<Vec<_>, _>>()
                    .context("kernel quadrature")?
            }
        };
        let mut t = table(cfg, ["tau", "re_K", "im_K"]);
        t.comment(format!("delta_over_beta={}", fmt_g(d)));
        for (tau, k) in taus.iter().zip(&k) {
            t.push_numbers(&[*tau, k.re, k.im]);
        }
        out.extend(csv_and_svg(cfg, &format!("kernel_delta_{}", delta_label(d)), &t, || {
            let mut p = Plot::new(format!("Memory kernel, delta = {} beta", delta_label(d)), "tau", "K");
            p.add(Series::new("Re K", &taus, &k.iter().map(|k| k.re).collect::<Vec<_>>()));
            p.add(Series::new("Im K", &taus, &k.iter().map(|k| k.im).collect::<Vec<_>>()));
            p
        }));
    }
    Ok(out)
}

fn volterra(cfg: &ExperimentConfig, em: &EmitterSpec<f64>, t_max: f64, dt: f64) -> Result<DecayTrace<f64>, RunError> {
    let opts = VolterraOptions { tolerance: cfg.volterra_tol, ..Default::default() };
    Ok(volterra_solve_with(em, t_max, dt, &opts).context("Volterra solver")?.trace)
}

fn decay_traces(cfg: &ExperimentConfig, d: f64) -> Result<Vec<DecayTrace<f64>>, RunError> {
    let em = cfg.emitter(d)?;
    let times = uniform_times(cfg.t_max, cfg.dt);
    let ctx = |m: &str| format!("{m} amplitude at delta = {} beta", delta_label(d));
    Ok(match cfg.method {
        MethodChoice::Analytic => vec![a2_analytic(&em, &times).context(ctx("closed-form"))?],
        MethodChoice::Volterra => vec![volterra(cfg, &em, cfg.t_max, cfg.dt)?],
        MethodChoice::Talbot => vec![a2_talbot(&em, &times).context(ctx("Talbot"))?],
        MethodChoice::Asymptotic => {
            let late: Vec<f64> = times.into_iter().filter(|&t| t >= DEFAULT_ASYMPTOTIC_START).collect();
            vec![a2_asymptotic(&em, &late).context(ctx("asymptotic"))?]
        }
        MethodChoice::All => vec![
            a2_analytic(&em, &times).context(ctx("closed-form"))?,
            volterra(cfg, &em, cfg.t_max, cfg.dt)?,
            a2_talbot(&em, &times).context(ctx("Talbot"))?,
        ],
    })
}

fn decay(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    if cfg.method == MethodChoice::Asymptotic && cfg.t_max < DEFAULT_ASYMPTOTIC_START {
        return Err(ConfigError::InvalidValue {
            key: "t_max".into(),
            value: cfg.t_max.to_string(),
            reason: format!("the asymptotic form starts at beta t = {DEFAULT_ASYMPTOTIC_START}"),
        }
        .into());
    }
    let all: Vec<Vec<DecayTrace<f64>>> = cfg.deltas.par_iter().map(|&d| decay_traces(cfg, d)).collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (&d, traces) in cfg.deltas.iter().zip(&all) {
        let mut t = table(cfg, ["beta_t", "re_a2", "im_a2", "population", "method"]);
        t.comment(format!("delta_over_beta={}", fmt_g(d)));
        if traces.len() > 1 {
            let mut worst: f64 = 0.0;
            for i in 0..traces.len() {
                for j in i + 1..traces.len() {
                    worst = worst.max(traces[i].sup_distance(&traces[j]).context("trace comparison")?);
                }
            }
            t.comment(format!("max_pairwise_sup={}", fmt_g(worst)));
        }
        for tr in traces {
            let name = tr.method().as_str();
            for (time, a) in tr.times().iter().zip(tr.amplitude()) {
                t.push_fields(&[fmt_g(*time), fmt_g(a.re), fmt_g(a.im), fmt_g(a.norm_sqr()), name.to_string()]);
            }
        }
        out.extend(csv_and_svg(cfg, &format!("decay_delta_{}", delta_label(d)), &t, || {
            let mut p = Plot::new(format!("Excited-state population, delta = {} beta", delta_label(d)), "beta t", "P");
            for tr in traces {
                p.add(Series::new(tr.method().as_str(), tr.times(), &tr.population()));
            }
            p
        }));
    }
    Ok(out)
}

fn spectrum(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    if !matches!(cfg.method, MethodChoice::Analytic | MethodChoice::Volterra) {
        return Err(ConfigError::InvalidValue {
            key: "method".into(),
            value: cfg.method.to_string(),
            reason: "spectrum needs an analytic or volterra trace".into(),
        }
        .into());
    }
    let grid = linspace(cfg.dk_min, cfg.dk_max, cfg.dk_points);
    let spectra = cfg
        .deltas
        .par_iter()
        .map(|&d| {
            let em = cfg.emitter(d)?;
            let trace = match cfg.method {
                MethodChoice::Volterra => volterra(cfg, &em, cfg.spectrum_t_max, cfg.spectrum_dt)?,
                _ => a2_analytic(&em, &uniform_times(cfg.spectrum_t_max, cfg.spectrum_dt)).context("closed-form amplitude")?,
            };
            emission_spectrum(&trace, &em, &grid).context("emission spectrum")
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for (&d, s) in cfg.deltas.iter().zip(&spectra) {
        let mut t = table(cfg, ["delta_k_over_beta", "density"]);
        t.comment(format!("delta_over_beta={}", fmt_g(d)));
        t.comment(format!("bound_weight_total={}", fmt_g(s.bound_weight)));
        t.comment(format!("emitted_weight_total={}", fmt_g(s.emitted_weight)));
        for (x, rho) in s.detunings.iter().zip(&s.density) {
            t.push_numbers(&[*x, *rho]);
        }
        out.extend(csv_and_svg(cfg, &format!("spectrum_delta_{}", delta_label(d)), &t, || {
            let mut p = Plot::new(format!("Emitted spectrum, delta = {} beta", delta_label(d)), "delta_k / beta", "density");
            p.add(Series::new("density", &s.detunings, &s.density));
            p
        }));
    }
    Ok(out)
}

fn figure(cfg: &ExperimentConfig) -> Result<Vec<Artifact>, RunError> {
    if cfg.figure != "pop-isotropic" {
        return Err(ConfigError::InvalidValue {
            key: "figure".into(),
            value: cfg.figure.clone(),
            reason: "known figures: pop-isotropic".into(),
        }
        .into());
    }
    let times = uniform_times(cfg.t_max, cfg.dt);
    let curves = cfg
        .deltas
        .par_iter()
        .map(|&d| {
            let em = cfg.emitter(d)?;
            let exact = a2_analytic(&em, &times).context(format!("closed-form amplitude at delta = {} beta", delta_label(d)))?;
            let check = volterra(cfg, &em, cfg.t_max, cfg.dt)?;
            let gap = exact.sup_distance(&check).context("trace comparison")?;
            if !(gap <= FIGURE_CHECK_TOLERANCE) {
                return Err(RunError::Verification(format!(
                    "closed form and Volterra differ by {gap:e} at delta = {} beta (limit {FIGURE_CHECK_TOLERANCE})",
                    delta_label(d)
                )));
            }
            let trapped = trapped_fraction(&em).context("trapped fraction")?;
            Ok((exact.population(), gap, trapped))
        })
        .collect::<Result<Vec<_>, RunError>>()?;

    let labels: Vec<String> = cfg.deltas.iter().map(|&d| format!("P_delta_{}", delta_label(d))).collect();
    let mut t = table(cfg, std::iter::once("beta_t".to_string()).chain(labels.iter().cloned()));
    let worst = curves.iter().fold(0.0f64, |m, c| m.max(c.1));
    t.comment(format!("volterra_max_sup={}", fmt_g(worst)));
    t.comment(format!(
        "trapped_fraction={}",
        curves.iter().map(|c| fmt_g(c.2)).collect::<Vec<_>>().join(",")
    ));
    for (i, time) in times.iter().enumerate() {
        let row: Vec<f64> = std::iter::once(*time).chain(curves.iter().map(|c| c.0[i])).collect();
        t.push_numbers(&row);
    }
    let mut plot = Plot::new("Excited-state population at an isotropic band edge", "beta t", "P");
    plot.log_y = cfg.svg_log_y;
    for (label, c) in labels.iter().zip(&curves) {
        plot.add(Series::new(label.clone(), &times, &c.0));
    }
    Ok(vec![
        Artifact { name: "pop_isotropic.csv".into(), contents: t.render() },
        Artifact { name: "pop_isotropic.svg".into(), contents: plot.render() },
    ])
}
