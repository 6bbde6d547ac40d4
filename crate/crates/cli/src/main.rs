use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use bandgap_qed_cli::{configure_threads, run, Command, ConfigError, ExperimentConfig, RunError};
use clap::{Args, Parser, Subcommand};

/// 1-D photonic band structures and band-edge spontaneous emission.
#[derive(Parser)]
#[command(name = "bandgap-qed", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Cmd {
    /// Band structure over the first Brillouin zone.
    Bands,
    /// Gap edges, midgap and gap/midgap ratio.
    Gaps,
    /// Effective-mass density of states at a lower band edge.
    Dos,
    /// Reservoir memory kernel.
    Kernel,
    /// Excited-state amplitude a2(t).
    Decay,
    /// Emitted photon spectrum.
    Spectrum,
    /// Reproduce a figure (`pop-isotropic`).
    Figure { name: String },
}

#[derive(Args)]
struct Common {
    /// key=value file applied before any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    svg: bool,
    /// Logarithmic y axis in SVG plots.
    #[arg(long, global = true)]
    log_y: bool,
    /// Tolerance override, e.g. `--tol quad_tol=1e-9`. Repeatable.
    #[arg(long, global = true, value_name = "KEY=VAL")]
    tol: Vec<String>,
    /// Any config key, e.g. `--set dk_points=801`. Repeatable.
    #[arg(long, global = true, value_name = "KEY=VAL")]
    set: Vec<String>,
    #[arg(long, global = true)]
    n: Option<String>,
    #[arg(long, global = true)]
    a: Option<String>,
    #[arg(long, global = true)]
    b: Option<String>,
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Detunings in units of beta, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Final time in units of 1/beta.
    #[arg(long, global = true)]
    tmax: Option<String>,
    #[arg(long, global = true)]
    dt: Option<String>,
    /// analytic, volterra, talbot, asymptotic or all.
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true)]
    k_points: Option<String>,
    #[arg(long, global = true)]
    bands: Option<String>,
}

const TOLERANCE_KEYS: [&str; 5] = ["root_tol", "quad_tol", "erf_tol", "max_iter", "volterra_tol"];

fn resolve(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let c = &cli.common;
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        cfg.apply_text(&text)?;
    }
    for pair in &c.set {
        cfg.set_pair(pair)?;
    }
    for pair in &c.tol {
        let (k, v) = pair.split_once('=').ok_or_else(|| ConfigError::Syntax { line: 0, text: pair.clone() })?;
        let k = k.trim();
        let key = if TOLERANCE_KEYS.contains(&k) { k.to_string() } else { format!("{k}_tol") };
        if !TOLERANCE_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey(k.into()));
        }
        cfg.set(&key, v.trim())?;
    }
    let flags = [
        ("n", &c.n),
        ("a", &c.a),
        ("b", &c.b),
        ("beta", &c.beta),
        ("deltas", &c.delta),
        ("t_max", &c.tmax),
        ("dt", &c.dt),
        ("method", &c.method),
        ("k_points", &c.k_points),
        ("bands", &c.bands),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(out) = &c.out {
        cfg.out = out.clone();
    }
    cfg.svg |= c.svg;
    cfg.svg_log_y |= c.log_y;
    cfg.command = match &cli.command {
        Cmd::Bands => Command::Bands,
        Cmd::Gaps => Command::Gaps,
        Cmd::Dos => Command::Dos,
        Cmd::Kernel => Command::Kernel,
        Cmd::Decay => Command::Decay,
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Figure { name } => {
            cfg.figure = name.clone();
            Command::Figure
        }
    };
    Ok(cfg)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<RunError>() {
        e.exit_code()
    } else if err.downcast_ref::<ConfigError>().is_some() {
        2
    } else {
        1
    }
}

fn try_main(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    let cfg = resolve(&cli)?;
    let written = run(&cfg).with_context(|| format!("{} failed", cfg.command))?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match try_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
