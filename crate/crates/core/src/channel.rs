//! Probabilistic layer: link statistics, post-combining effective channel
//! gains (CDF/CCDF), and gain sampling.
//!
//! A branch power gain |h|^2 on a Nakagami-m link is Gamma-distributed with
//! shape m and scale Omega/m. Selection combining takes the maximum of the
//! branch gains, maximal-ratio combining their sum.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::specfun::{reg_gamma_pair, reg_lower_gamma};

/// One fading link: integer Nakagami shape m and mean-square gain Omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSpec {
    /// Shape parameter, restricted to positive integers.
    pub m: u32,
    /// Mean-square value of the channel envelope, Omega > 0.
    pub omega: f64,
}

impl LinkSpec {
    pub fn new(m: u32, omega: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::config("link shape m must be a positive integer"));
        }
        if !(omega > 0.0) {
            return Err(Error::config(format!(
                "link mean-square omega must be positive, got {omega}"
            )));
        }
        Ok(Self { m, omega })
    }
}

/// Receive diversity combiner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombinerKind {
    /// Selection combining: branch with the largest envelope.
    Sc,
    /// Maximal-ratio combining: coherent sum of all branches.
    Mrc,
}

impl CombinerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CombinerKind::Sc => "sc",
            CombinerKind::Mrc => "mrc",
        }
    }
}

impl std::str::FromStr for CombinerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(CombinerKind::Sc),
            "mrc" => Ok(CombinerKind::Mrc),
            other => Err(Error::config(format!(
                "unknown combiner '{other}' (expected sc or mrc)"
            ))),
        }
    }
}

/// Full system description: the three links, antenna counts, combiner,
/// power split and target rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Source-to-relay link.
    pub sr: LinkSpec,
    /// Source-to-destination link.
    pub sd: LinkSpec,
    /// Relay-to-destination link.
    pub rd: LinkSpec,
    /// Receive antennas at the relay.
    pub n_r: u32,
    /// Receive antennas at the destination.
    pub n_d: u32,
    pub combiner: CombinerKind,
    /// Power fraction of the weak symbol; 0 < a2 < 0.5 so a1 > a2.
    pub a2: f64,
    /// Target data rate R in bps/Hz for the outage definition.
    pub target_rate_r: f64,
}

impl SystemConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        sr: LinkSpec,
        sd: LinkSpec,
        rd: LinkSpec,
        n_r: u32,
        n_d: u32,
        combiner: CombinerKind,
        a2: f64,
        target_rate_r: f64,
    ) -> Result<Self> {
        if n_r < 1 || n_d < 1 {
            return Err(Error::config("antenna counts must be at least 1"));
        }
        if !(a2 > 0.0 && a2 < 0.5) {
            return Err(Error::config(format!(
                "a2 must satisfy 0 < a2 < 0.5 so that a1 = 1 - a2 > a2, got {a2}"
            )));
        }
        if !(target_rate_r > 0.0) {
            return Err(Error::config(format!(
                "target rate R must be positive, got {target_rate_r}"
            )));
        }
        Ok(Self {
            sr,
            sd,
            rd,
            n_r,
            n_d,
            combiner,
            a2,
            target_rate_r,
        })
    }

    /// Power fraction of the strong symbol.
    pub fn a1(&self) -> f64 {
        1.0 - self.a2
    }

    /// Same system with a different power split.
    pub fn with_a2(&self, a2: f64) -> Result<Self> {
        let mut cfg = self.clone();
        if !(a2 > 0.0 && a2 < 0.5) {
            return Err(Error::config(format!(
                "a2 must satisfy 0 < a2 < 0.5, got {a2}"
            )));
        }
        cfg.a2 = a2;
        Ok(cfg)
    }

    /// Soft checks that are worth flagging but not rejecting, e.g. the
    /// usual assumption Omega_sd < Omega_sr.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.sd.omega >= self.sr.omega {
            w.push(format!(
                "omega_sd = {} is not below omega_sr = {}; the power-domain \
                 ordering the scheme assumes does not hold",
                self.sd.omega, self.sr.omega
            ));
        }
        w
    }
}

/// CDF of the effective post-combining gain at `x`.
///
/// SC: [P(m, m x / Omega)]^n (max of n i.i.d. branch gains);
/// MRC: P(m n, m x / Omega) (sum of n i.i.d. branch gains).
pub fn gain_cdf(link: &LinkSpec, n: u32, combiner: CombinerKind, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("gain_cdf requires x >= 0, got {x}")));
    }
    let m = link.m as f64;
    let z = m * x / link.omega;
    match combiner {
        CombinerKind::Sc => Ok(reg_lower_gamma(m, z)?.powi(n as i32)),
        CombinerKind::Mrc => reg_lower_gamma(m * n as f64, z),
    }
}

/// Complementary CDF of the effective gain. For MRC this is evaluated as
/// the upper regularized gamma directly, so tiny tail values keep their
/// relative accuracy.
pub fn gain_ccdf(link: &LinkSpec, n: u32, combiner: CombinerKind, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("gain_ccdf requires x >= 0, got {x}")));
    }
    let m = link.m as f64;
    let z = m * x / link.omega;
    match combiner {
        CombinerKind::Sc => {
            let p = reg_lower_gamma(m, z)?;
            Ok(1.0 - p.powi(n as i32))
        }
        CombinerKind::Mrc => {
            let (_, q) = reg_gamma_pair(m * n as f64, z)?;
            Ok(q)
        }
    }
}

/// Pr(min(scale_a * G_a, scale_b * G_b) > x)
///   = CCDF_a(x / scale_a) * CCDF_b(x / scale_b).
#[allow(clippy::too_many_arguments)]
pub fn min_pair_ccdf(
    link_a: &LinkSpec,
    n_a: u32,
    scale_a: f64,
    link_b: &LinkSpec,
    n_b: u32,
    scale_b: f64,
    combiner: CombinerKind,
    x: f64,
) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "min_pair_ccdf requires x >= 0, got {x}"
        )));
    }
    if !(scale_a > 0.0 && scale_b > 0.0) {
        return Err(Error::domain("min_pair_ccdf requires positive scales"));
    }
    let ca = gain_ccdf(link_a, n_a, combiner, x / scale_a)?;
    let cb = gain_ccdf(link_b, n_b, combiner, x / scale_b)?;
    Ok(ca * cb)
}

/// Draw one effective post-combining gain. Branch powers are sampled as
/// Gamma(m, Omega/m) variates; SC keeps the largest (the envelope argmax
/// equals the power argmax), MRC sums all branches.
pub fn sample_gain(link: &LinkSpec, n: u32, combiner: CombinerKind, rng: &mut RngStream) -> f64 {
    let shape = link.m as f64;
    let scale = link.omega / shape;
    match combiner {
        CombinerKind::Sc => {
            let mut best = 0.0_f64;
            for _ in 0..n {
                best = best.max(rng.next_gamma(shape, scale));
            }
            best
        }
        CombinerKind::Mrc => {
            let mut sum = 0.0_f64;
            for _ in 0..n {
                sum += rng.next_gamma(shape, scale);
            }
            sum
        }
    }
}
