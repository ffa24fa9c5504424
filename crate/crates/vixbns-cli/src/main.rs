//! Batch CLI for VIX option pricing and hedging under BNS variance models.
//!
//! Five commands over one flat configuration: `price` and `hedge` evaluate
//! a single query, `sweep` walks the time or strike grid, `validate` runs
//! the internal cross-check suite, and `check` reports which model
//! conditions hold. Results are CSV with 12 significant digits; every run
//! echoes its fully resolved configuration to a sidecar file.
//!
//! Exit codes: 0 success, 1 failed validation or unsatisfied condition,
//! 2 bad input or configuration, 3 numerical failure.

// Guards are written `!(x > 0.0)` on purpose: the negated form rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod checks;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use vixbns::hedging::hedge;
use vixbns::pricing::{price, FftPricer};
use vixbns::Error;

use config::{grid, RunConfig};
use output::{emit, fmt_sig, write_sidecar};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => f.write_str(msg),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(e) => match e {
                Error::QuadratureFailure { .. } | Error::Inversion(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(
    name = "vixbns",
    version,
    about = "VIX option prices, futures, and risk-minimizing hedges under BNS models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Price one VIX call (quadrature path)
    Price(ConfigArgs),
    /// Price plus hedge ratio and riskless leg for one query
    Hedge(ConfigArgs),
    /// Evaluate the full time or strike grid
    Sweep(SweepArgs),
    /// Run the cross-validation suite (quadrature, MC, inversion)
    Validate(ConfigArgs),
    /// Report which model conditions hold for the configured variant
    Check(ConfigArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Axis {
    Time,
    Strike,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid to walk: time (t_min..t_max) or strike (K_min..K_max)
    #[arg(long, value_enum)]
    axis: Axis,
    #[command(flatten)]
    config: ConfigArgs,
}

/// One flag per config key; flags override config-file values.
#[derive(Args, Default)]
struct ConfigArgs {
    /// Flat key=value config file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (default stdout); the resolved config lands next to it
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Model variant: gamma or ig
    #[arg(long)]
    variant: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    spot: Option<f64>,
    #[arg(long = "sigma_sq", allow_negative_numbers = true)]
    sigma_sq: Option<f64>,
    /// Option maturity
    #[arg(long = "T", allow_negative_numbers = true)]
    maturity: Option<f64>,
    /// Strike
    #[arg(long = "K", allow_negative_numbers = true)]
    k: Option<f64>,
    #[arg(long = "K_min", allow_negative_numbers = true)]
    k_min: Option<f64>,
    #[arg(long = "K_max", allow_negative_numbers = true)]
    k_max: Option<f64>,
    #[arg(long = "K_step", allow_negative_numbers = true)]
    k_step: Option<f64>,
    #[arg(long = "t_min", allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long = "t_max", allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long = "t_step", allow_negative_numbers = true)]
    t_step: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long = "v_max", allow_negative_numbers = true)]
    v_max: Option<f64>,
    #[arg(long = "abs_tol", allow_negative_numbers = true)]
    abs_tol: Option<f64>,
    #[arg(long = "fft_size")]
    fft_size: Option<usize>,
    #[arg(long = "n_paths")]
    n_paths: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output format (csv)
    #[arg(long)]
    format: Option<String>,
}

impl ConfigArgs {
    /// defaults, then the config file, then the flags.
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(v) = &self.variant {
            cfg.set("variant", v)?;
        }
        macro_rules! overlay {
            ($($field:ident),+) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })+
            };
        }
        overlay!(
            lambda, a, b, rho, r, tau, t, spot, sigma_sq, maturity, k, k_min, k_max, k_step,
            t_min, t_max, t_step, alpha, eps, v_max, abs_tol, fft_size, n_paths, seed
        );
        if let Some(f) = &self.format {
            cfg.set("format", f)?;
        }
        if let Some(out) = &self.out {
            cfg.path = Some(out.clone());
        }
        Ok(cfg)
    }
}

const PRICE_HEADER: &str = "t,T,K,alpha,eps,price,method,im_residual\n";
const HEDGE_HEADER: &str = "t,T,K,alpha,eps,xi,eta,price\n";

fn price_row(t: f64, maturity: f64, k: f64, alpha: f64, r: &vixbns::PriceResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{}\n",
        fmt_sig(t),
        fmt_sig(maturity),
        fmt_sig(k),
        fmt_sig(alpha),
        fmt_sig(r.eps_used),
        fmt_sig(r.price),
        r.method,
        fmt_sig(r.im_residual),
    )
}

fn hedge_row(t: f64, maturity: f64, k: f64, alpha: f64, h: &vixbns::HedgeResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{}\n",
        fmt_sig(t),
        fmt_sig(maturity),
        fmt_sig(k),
        fmt_sig(alpha),
        fmt_sig(h.eps_used),
        fmt_sig(h.xi),
        fmt_sig(h.eta),
        fmt_sig(h.price),
    )
}

fn cmd_price(cfg: &RunConfig) -> Result<String, CliError> {
    let params = cfg.model()?;
    let state = cfg.state_at(cfg.t)?;
    let result = price(&params, &state, cfg.maturity, cfg.k, cfg.alpha, &cfg.settings())
        .map_err(CliError::Lib)?;
    let mut text = String::from(PRICE_HEADER);
    text.push_str(&price_row(cfg.t, cfg.maturity, cfg.k, cfg.alpha, &result));
    Ok(text)
}

fn cmd_hedge(cfg: &RunConfig) -> Result<String, CliError> {
    let params = cfg.model()?;
    let state = cfg.state_at(cfg.t)?;
    let bundle = hedge(&params, &state, cfg.maturity, cfg.k, cfg.alpha, &cfg.settings())
        .map_err(CliError::Lib)?;
    let mut text = String::from(HEDGE_HEADER);
    text.push_str(&hedge_row(cfg.t, cfg.maturity, cfg.k, cfg.alpha, &bundle));
    Ok(text)
}

/// Strike sweep: one characteristic-function grid, all strikes through the
/// FFT with cubic interpolation at the payoff abscissa.
fn sweep_strike(cfg: &RunConfig) -> Result<String, CliError> {
    let params = cfg.model()?;
    let state = cfg.state_at(cfg.t)?;
    if !(cfg.t < cfg.maturity) {
        return Err(CliError::Config(format!(
            "strike sweep needs t < T, got t={}, T={}",
            cfg.t, cfg.maturity
        )));
    }
    let strikes = grid("strike", cfg.k_min, cfg.k_max, cfg.k_step)?;
    let mut pricer =
        FftPricer::new(&params, &strikes, cfg.alpha, &cfg.settings()).map_err(CliError::Lib)?;
    let results = pricer.price_at(&state, cfg.maturity).map_err(CliError::Lib)?;
    let mut text = String::from(PRICE_HEADER);
    for (k, r) in strikes.iter().zip(&results) {
        text.push_str(&price_row(cfg.t, cfg.maturity, *k, cfg.alpha, r));
    }
    Ok(text)
}

/// Time sweep: quadrature price and hedge ratio at every observation time.
fn sweep_time(cfg: &RunConfig) -> Result<String, CliError> {
    let params = cfg.model()?;
    let times = grid("time", cfg.t_min, cfg.t_max, cfg.t_step)?;
    if let Some(&last) = times.last() {
        if !(last < cfg.maturity) {
            return Err(CliError::Config(format!(
                "time sweep needs every t < T, got t_max={last}, T={}",
                cfg.maturity
            )));
        }
    }
    let settings = cfg.settings();
    let mut text = String::from(HEDGE_HEADER);
    for &t in &times {
        let state = cfg.state_at(t)?;
        let bundle = hedge(&params, &state, cfg.maturity, cfg.k, cfg.alpha, &settings)
            .map_err(CliError::Lib)?;
        text.push_str(&hedge_row(t, cfg.maturity, cfg.k, cfg.alpha, &bundle));
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let args = match &cli.command {
        Command::Price(a) | Command::Hedge(a) | Command::Validate(a) | Command::Check(a) => a,
        Command::Sweep(s) => &s.config,
    };
    let cfg = args.resolve()?;
    let (text, code) = match &cli.command {
        Command::Price(_) => (cmd_price(&cfg)?, 0),
        Command::Hedge(_) => (cmd_hedge(&cfg)?, 0),
        Command::Sweep(s) => match s.axis {
            Axis::Strike => (sweep_strike(&cfg)?, 0),
            Axis::Time => (sweep_time(&cfg)?, 0),
        },
        Command::Validate(_) => {
            let (text, ok) = checks::run_validate(&cfg)?;
            (text, u8::from(!ok))
        }
        Command::Check(_) => {
            let (text, ok) = checks::run_check(&cfg)?;
            (text, u8::from(!ok))
        }
    };
    let out = cfg.path.clone();
    emit(&text, out.as_deref())?;
    write_sidecar(&cfg.resolved_text(), out.as_deref())?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
