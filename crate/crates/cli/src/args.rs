//! Argument parsing and validation into a [`RunSpec`].

use clap::{Args, Parser, Subcommand, ValueEnum};
use crs_noma_core::{CombinerKind, Error, LinkSpec, Result, Scheme, SystemConfig};

/// Performance tables for a NOMA-based cooperative relaying system with
/// receive diversity (SC/MRC) over Nakagami-m fading: exact closed forms,
/// a quadrature oracle, and a reproducible Monte Carlo simulator.
#[derive(Debug, Parser)]
#[command(name = "crs-noma-lab", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ergodic-rate sweep over an SNR grid (analytic + Monte Carlo).
    RateSweep(SweepArgs),
    /// Outage-probability sweep over an SNR grid (analytic + Monte Carlo).
    OutageSweep(SweepArgs),
    /// Per-SNR optimal power split minimizing the closed-form outage.
    OptimizeA2(OptimizeArgs),
    /// Cross-check closed forms against the quadrature oracle and Monte
    /// Carlo at every grid point; nonzero exit on any violation.
    Validate(SweepArgs),
    /// Emit a preset data table.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CombinerArg {
    Sc,
    Mrc,
}

impl From<CombinerArg> for CombinerKind {
    fn from(c: CombinerArg) -> Self {
        match c {
            CombinerArg::Sc => CombinerKind::Sc,
            CombinerArg::Mrc => CombinerKind::Mrc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Noma,
    Oma,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Noma => Scheme::Noma,
            SchemeArg::Oma => Scheme::Oma,
        }
    }
}

/// Power-split selection: a fixed value or a per-SNR optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum A2Mode {
    Fixed(f64),
    Opt,
}

impl std::str::FromStr for A2Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("opt") {
            return Ok(A2Mode::Opt);
        }
        s.parse::<f64>()
            .map(A2Mode::Fixed)
            .map_err(|_| format!("expected a number or 'opt', got '{s}'"))
    }
}

/// System parameters shared by every command.
#[derive(Debug, Args, Clone)]
pub struct ConfigArgs {
    /// Nakagami shape for all three links.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Shape override for the source-relay link.
    #[arg(long)]
    pub m_sr: Option<u32>,
    /// Shape override for the source-destination link.
    #[arg(long)]
    pub m_sd: Option<u32>,
    /// Shape override for the relay-destination link.
    #[arg(long)]
    pub m_rd: Option<u32>,

    /// Receive antennas at both the relay and the destination.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Antenna override for the relay.
    #[arg(long)]
    pub n_r: Option<u32>,
    /// Antenna override for the destination.
    #[arg(long)]
    pub n_d: Option<u32>,

    /// Mean-square gain of the source-relay link.
    #[arg(long, default_value_t = 10.0)]
    pub omega_sr: f64,
    /// Mean-square gain of the source-destination link.
    #[arg(long, default_value_t = 1.0)]
    pub omega_sd: f64,
    /// Mean-square gain of the relay-destination link.
    #[arg(long, default_value_t = 2.5)]
    pub omega_rd: f64,

    /// Receive combiner at the relay and destination.
    #[arg(long, value_enum, default_value_t = CombinerArg::Sc)]
    pub combiner: CombinerArg,

    /// Target rate R in bps/Hz (sets the outage threshold 2^{2R} - 1).
    #[arg(long, default_value_t = 1.0)]
    pub rate_r: f64,

    /// Power fraction of the weak symbol: a value in (0, 0.5) or 'opt'
    /// for a per-SNR outage-minimizing search.
    #[arg(long, default_value = "opt")]
    pub a2: A2Mode,
}

impl ConfigArgs {
    /// Build the system with an explicit a2 (the optimizer substitutes its
    /// own values later in opt mode).
    pub fn system_with_a2(&self, a2: f64) -> Result<SystemConfig> {
        SystemConfig::new(
            LinkSpec::new(self.m_sr.unwrap_or(self.m), self.omega_sr)?,
            LinkSpec::new(self.m_sd.unwrap_or(self.m), self.omega_sd)?,
            LinkSpec::new(self.m_rd.unwrap_or(self.m), self.omega_rd)?,
            self.n_r.unwrap_or(self.n),
            self.n_d.unwrap_or(self.n),
            self.combiner.into(),
            a2,
            self.rate_r,
        )
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,

    /// Multiple-access scheme to simulate (rate sweeps only).
    #[arg(long, value_enum, default_value_t = SchemeArg::Noma)]
    pub scheme: SchemeArg,

    /// First SNR grid point in dB.
    #[arg(long, default_value_t = 0.0)]
    pub rho_start_db: f64,
    /// Last SNR grid point in dB (default 30 for rate, 40 for outage).
    #[arg(long)]
    pub rho_stop_db: Option<f64>,
    /// Grid step in dB (default 2 for rate, 2.5 for outage).
    #[arg(long)]
    pub rho_step_db: Option<f64>,

    /// Monte Carlo trials per grid point (0 disables the simulation).
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    /// Master seed for all random streams.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Output CSV path ('-' for stdout).
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub config: ConfigArgs,

    #[arg(long, default_value_t = 0.0)]
    pub rho_start_db: f64,
    #[arg(long)]
    pub rho_stop_db: Option<f64>,
    #[arg(long)]
    pub rho_step_db: Option<f64>,

    /// After the coarse search, rerun on a half-step grid around the
    /// optimum.
    #[arg(long)]
    pub refine: bool,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Preset name: fig2, fig3, fig4, fig5, fig6, fig7 or fig8.
    pub preset: String,

    /// Monte Carlo trials per grid point where the preset simulates.
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, default_value = "-")]
    pub out: String,
}

/// The dB grid of a sweep, validated.
pub fn build_grid(start_db: f64, stop_db: f64, step_db: f64) -> Result<Vec<f64>> {
    if !(step_db > 0.0) {
        return Err(Error::Config(format!(
            "rho-step-db must be positive, got {step_db}"
        )));
    }
    if stop_db < start_db {
        return Err(Error::Config(format!(
            "rho-stop-db ({stop_db}) must not precede rho-start-db ({start_db})"
        )));
    }
    let count = ((stop_db - start_db) / step_db + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start_db + i as f64 * step_db).collect())
}
