//! Monte Carlo link simulator: per-trial simulation of both time slots for
//! the NOMA scheme and the OMA baseline, under either combiner.
//!
//! Reproducibility contract: trials are processed in fixed chunks of
//! [`TRIAL_CHUNK`]; chunk k draws from a substream derived from
//! (master seed, k) alone, and chunk results are reduced in index order.
//! The outcome is therefore bitwise identical for any worker count,
//! including the rayon pool size.

use crate::channel::{sample_gain, SystemConfig};
use crate::error::{Error, Result};
use crate::outage::outage_closed;
use crate::rate::{rate_high_snr, rate_total};
use crate::rng::{point_seed, RngStream};
use rayon::prelude::*;

/// Trials per substream chunk.
pub const TRIAL_CHUNK: u64 = 1 << 16;

/// Multiple-access scheme simulated per trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Two superposed symbols delivered in two slots.
    Noma,
    /// One symbol over both slots, slot copies MRC-combined.
    Oma,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Noma => "noma",
            Scheme::Oma => "oma",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "noma" => Ok(Scheme::Noma),
            "oma" => Ok(Scheme::Oma),
            other => Err(Error::config(format!(
                "unknown scheme '{other}' (expected noma or oma)"
            ))),
        }
    }
}

/// Which metric a sweep estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Rate,
    Outage,
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over sqrt(n_trials).
    pub stderr: f64,
    pub n_trials: u64,
    pub master_seed: u64,
}

/// Per-chunk running moments (Welford), merged in chunk order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, v: f64) {
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        Moments {
            count: n,
            mean: self.mean + d * other.count as f64 / n as f64,
            m2: self.m2 + other.m2 + d * d * (self.count as f64 * other.count as f64) / n as f64,
        }
    }
}

/// Effective gains drawn in a fixed order, so runs with the same seed see
/// the same channel realizations regardless of scheme.
#[inline]
fn draw_gains(cfg: &SystemConfig, rng: &mut RngStream) -> (f64, f64, f64) {
    let g_sd = sample_gain(&cfg.sd, cfg.n_d, cfg.combiner, rng);
    let g_sr = sample_gain(&cfg.sr, cfg.n_r, cfg.combiner, rng);
    let g_rd = sample_gain(&cfg.rd, cfg.n_d, cfg.combiner, rng);
    (g_sd, g_sr, g_rd)
}

#[inline]
fn trial_rate(cfg: &SystemConfig, rho: f64, scheme: Scheme, rng: &mut RngStream) -> f64 {
    let (g_sd, g_sr, g_rd) = draw_gains(cfg, rng);
    match scheme {
        Scheme::Noma => {
            let a1 = cfg.a1();
            let a2 = cfg.a2;
            let gamma_sd = g_sd * a1 * rho / (g_sd * a2 * rho + 1.0);
            let gamma_sr1 = g_sr * a1 * rho / (g_sr * a2 * rho + 1.0);
            let s1 = 0.5 * (1.0 + gamma_sd).log2().min((1.0 + gamma_sr1).log2());
            let s2 = 0.5 * (1.0 + rho * (a2 * g_sr).min(g_rd)).log2();
            s1 + s2
        }
        Scheme::Oma => 0.5 * (1.0 + rho * g_sr.min(g_sd + g_rd)).log2(),
    }
}

#[inline]
fn trial_in_outage(cfg: &SystemConfig, rho: f64, theta: f64, rng: &mut RngStream) -> bool {
    let (g_sd, g_sr, g_rd) = draw_gains(cfg, rng);
    let a1 = cfg.a1();
    let a2 = cfg.a2;
    let gamma_sd = g_sd * a1 * rho / (g_sd * a2 * rho + 1.0);
    let gamma_sr1 = g_sr * a1 * rho / (g_sr * a2 * rho + 1.0);
    let gamma_sr2 = g_sr * a2 * rho;
    let gamma_rd = g_rd * rho;
    !(gamma_sd >= theta && gamma_sr1 >= theta && gamma_sr2 >= theta && gamma_rd >= theta)
}

fn chunk_bounds(n_trials: u64) -> Vec<(u64, u64)> {
    let n_chunks = n_trials.div_ceil(TRIAL_CHUNK);
    (0..n_chunks)
        .map(|k| (k, TRIAL_CHUNK.min(n_trials - k * TRIAL_CHUNK)))
        .collect()
}

/// Ergodic-rate estimate over `n_trials` channel realizations.
pub fn simulate_rate(
    cfg: &SystemConfig,
    rho: f64,
    scheme: Scheme,
    n_trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n_trials == 0 {
        return Err(Error::domain("simulate_rate requires n_trials >= 1"));
    }
    if !(rho > 0.0) {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    let chunk_stats: Vec<Moments> = chunk_bounds(n_trials)
        .into_par_iter()
        .map(|(k, count)| {
            let mut rng = RngStream::substream(seed, k);
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(trial_rate(cfg, rho, scheme, &mut rng));
            }
            m
        })
        .collect();
    let total = chunk_stats.into_iter().fold(Moments::default(), Moments::merge);
    let n = total.count as f64;
    let stderr = if total.count > 1 {
        (total.m2 / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        mean: total.mean,
        stderr,
        n_trials,
        master_seed: seed,
    })
}

/// Outage-probability estimate over `n_trials` channel realizations.
pub fn simulate_outage(
    cfg: &SystemConfig,
    rho: f64,
    n_trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n_trials == 0 {
        return Err(Error::domain(
            "simulate_outage requires n_trials >= 1",
        ));
    }
    if !(rho > 0.0) {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    let theta = (2.0 * cfg.target_rate_r).exp2() - 1.0;
    let events: u64 = chunk_bounds(n_trials)
        .into_par_iter()
        .map(|(k, count)| {
            let mut rng = RngStream::substream(seed, k);
            let mut hits = 0u64;
            for _ in 0..count {
                if trial_in_outage(cfg, rho, theta, &mut rng) {
                    hits += 1;
                }
            }
            hits
        })
        .collect::<Vec<u64>>()
        .into_iter()
        .sum();
    let n = n_trials as f64;
    let p = events as f64 / n;
    Ok(McEstimate {
        mean: p,
        stderr: (p * (1.0 - p) / n).sqrt(),
        n_trials,
        master_seed: seed,
    })
}

/// One record of a sweep: configuration echo, analytic values where the
/// scheme has them, and the Monte Carlo estimates. `None` fields are
/// emitted as empty CSV cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rho_db: f64,
    pub scheme: Scheme,
    pub combiner: crate::channel::CombinerKind,
    pub m_sr: u32,
    pub m_sd: u32,
    pub m_rd: u32,
    pub n_r: u32,
    pub n_d: u32,
    pub a2: f64,
    pub rate_s1_analytic: Option<f64>,
    pub rate_s2_analytic: Option<f64>,
    pub rate_total_analytic: Option<f64>,
    pub rate_high_snr: Option<f64>,
    pub rate_mc: Option<f64>,
    pub rate_mc_stderr: Option<f64>,
    pub outage_analytic: Option<f64>,
    pub outage_mc: Option<f64>,
    pub outage_mc_stderr: Option<f64>,
    pub trials: u64,
}

impl SweepRow {
    fn blank(cfg: &SystemConfig, rho_db: f64, scheme: Scheme, trials: u64) -> Self {
        SweepRow {
            rho_db,
            scheme,
            combiner: cfg.combiner,
            m_sr: cfg.sr.m,
            m_sd: cfg.sd.m,
            m_rd: cfg.rd.m,
            n_r: cfg.n_r,
            n_d: cfg.n_d,
            a2: cfg.a2,
            rate_s1_analytic: None,
            rate_s2_analytic: None,
            rate_total_analytic: None,
            rate_high_snr: None,
            rate_mc: None,
            rate_mc_stderr: None,
            outage_analytic: None,
            outage_mc: None,
            outage_mc_stderr: None,
            trials,
        }
    }
}

/// Evaluate one sweep grid point with an explicit per-point seed.
/// `n_trials = 0` skips the Monte Carlo part (analytic columns only).
pub fn sweep_point(
    cfg: &SystemConfig,
    rho_db: f64,
    scheme: Scheme,
    metric: Metric,
    n_trials: u64,
    seed: u64,
) -> Result<SweepRow> {
    let rho = 10.0_f64.powf(rho_db / 10.0);
    let mut row = SweepRow::blank(cfg, rho_db, scheme, n_trials);
    match (scheme, metric) {
        (Scheme::Noma, Metric::Rate) => {
            let report = rate_total(cfg, rho)?;
            row.rate_s1_analytic = Some(report.rate_s1);
            row.rate_s2_analytic = Some(report.rate_s2);
            row.rate_total_analytic = Some(report.rate_total);
            row.rate_high_snr = Some(rate_high_snr(cfg, rho)?.rate_total);
            if n_trials > 0 {
                let mc = simulate_rate(cfg, rho, scheme, n_trials, seed)?;
                row.rate_mc = Some(mc.mean);
                row.rate_mc_stderr = Some(mc.stderr);
            }
        }
        (Scheme::Oma, Metric::Rate) => {
            if n_trials > 0 {
                let mc = simulate_rate(cfg, rho, scheme, n_trials, seed)?;
                row.rate_mc = Some(mc.mean);
                row.rate_mc_stderr = Some(mc.stderr);
            }
        }
        (Scheme::Noma, Metric::Outage) => {
            row.outage_analytic = Some(outage_closed(cfg, rho)?);
            if n_trials > 0 {
                let mc = simulate_outage(cfg, rho, n_trials, seed)?;
                row.outage_mc = Some(mc.mean);
                row.outage_mc_stderr = Some(mc.stderr);
            }
        }
        (Scheme::Oma, Metric::Outage) => {
            return Err(Error::config(
                "outage is only modeled for the NOMA scheme",
            ));
        }
    }
    Ok(row)
}

/// Sweep a dB grid. Each point's seed is derived from the master seed and
/// that point's SNR only, so NOMA and OMA sweeps over the same grid share
/// channel realizations (common random numbers).
pub fn run_sweep(
    cfg: &SystemConfig,
    rho_grid_db: &[f64],
    scheme: Scheme,
    metric: Metric,
    n_trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if rho_grid_db.is_empty() {
        return Err(Error::domain("run_sweep requires a nonempty grid"));
    }
    rho_grid_db
        .iter()
        .map(|&rho_db| sweep_point(cfg, rho_db, scheme, metric, n_trials, point_seed(seed, rho_db)))
        .collect()
}

/// Agreement test |analytic - mean| <= k * stderr. For Bernoulli metrics
/// the standard error floor sqrt(p(1-p)/n) evaluated at the analytic p is
/// used, which keeps the test meaningful when no events were observed.
pub fn within_k_sigma(analytic: f64, est: &McEstimate, k: f64, bernoulli: bool) -> bool {
    let se = if bernoulli {
        let floor = (analytic * (1.0 - analytic)).max(0.0) / est.n_trials as f64;
        est.stderr.max(floor.sqrt())
    } else {
        est.stderr
    };
    (analytic - est.mean).abs() <= k * se
}
