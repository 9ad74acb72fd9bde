//! Outage probability: decoding thresholds, the exact closed form, its
//! high-SNR leading-order behavior, and empirical diversity-slope fitting.
//!
//! The system is in outage unless the strong symbol decodes at the
//! destination and both symbols decode at the relay in slot one, and the
//! relayed weak symbol decodes at the destination in slot two. With
//! theta = 2^{2R} - 1 those four SINR conditions reduce to per-link gain
//! thresholds Delta_1..Delta_3.

use crate::channel::{gain_cdf, CombinerKind, SystemConfig};
use crate::error::{Error, Result};
use crate::specfun::factorial;

/// SINR threshold theta and the per-link gain thresholds derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageThresholds {
    /// theta = 2^{2R} - 1.
    pub theta: f64,
    /// Gain needed at the destination for s1; `None` when infeasible.
    pub delta1: Option<f64>,
    /// Gain needed at the relay, max(delta1, theta/(a2 rho)); `None` when
    /// infeasible.
    pub delta2: Option<f64>,
    /// Gain needed on the relay-destination leg, theta / rho.
    pub delta3: f64,
    /// a2 < 1/(1 + theta); outside this the strong symbol can never be
    /// decoded and outage is certain.
    pub feasible: bool,
}

/// Decoding thresholds for power split `a2` at SNR `rho` and target rate
/// `target_rate` (bps/Hz). Infeasibility is a value, not an error.
pub fn thresholds(a2: f64, rho: f64, target_rate: f64) -> Result<OutageThresholds> {
    if !(a2 > 0.0 && a2 < 0.5) {
        return Err(Error::domain(format!(
            "thresholds requires 0 < a2 < 0.5, got {a2}"
        )));
    }
    if !(rho > 0.0) {
        return Err(Error::domain(format!("rho must be positive, got {rho}")));
    }
    if !(target_rate > 0.0) {
        return Err(Error::domain(format!(
            "target rate must be positive, got {target_rate}"
        )));
    }
    let theta = (2.0 * target_rate).exp2() - 1.0;
    let a1 = 1.0 - a2;
    let feasible = a2 < 1.0 / (1.0 + theta);
    if !feasible {
        return Ok(OutageThresholds {
            theta,
            delta1: None,
            delta2: None,
            delta3: theta / rho,
            feasible,
        });
    }
    let delta1 = theta / (rho * (a1 - a2 * theta));
    let delta2 = delta1.max(theta / (a2 * rho));
    Ok(OutageThresholds {
        theta,
        delta1: Some(delta1),
        delta2: Some(delta2),
        delta3: theta / rho,
        feasible,
    })
}

/// Exact outage probability. Evaluated in the expanded
/// inclusion–exclusion form, which keeps full relative accuracy when the
/// per-link CDFs are far below machine epsilon (deep diversity regime);
/// the product form 1 - prod(1 - F_i) would round to zero there.
pub fn outage_closed(cfg: &SystemConfig, rho: f64) -> Result<f64> {
    let th = thresholds(cfg.a2, rho, cfg.target_rate_r)?;
    if !th.feasible {
        return Ok(1.0);
    }
    let f1 = gain_cdf(&cfg.sd, cfg.n_d, cfg.combiner, th.delta1.unwrap())?;
    let f2 = gain_cdf(&cfg.sr, cfg.n_r, cfg.combiner, th.delta2.unwrap())?;
    let f3 = gain_cdf(&cfg.rd, cfg.n_d, cfg.combiner, th.delta3)?;
    let p = f1 + f2 + f3 - f1 * f2 - f2 * f3 - f3 * f1 + f1 * f2 * f3;
    Ok(p.clamp(0.0, 1.0))
}

/// Leading coefficient of the SC effective-gain CDF near zero:
/// [P(m, m x / Omega)]^N ~ c^N x^{m N} with c = (m/Omega)^m / m!.
fn sc_leading_coeff(m: u32, omega: f64) -> f64 {
    (m as f64 / omega).powi(m as i32) / factorial(m)
}

/// Sum of the three leading-order CDF terms, i.e. the high-SNR behavior of
/// the outage with every link's decay exponent retained. The ratio to
/// [`outage_closed`] tends to 1 as rho grows; the smallest exponent
/// min{m_sd N_d, m_sr N_r, m_rd N_d} is the diversity order.
pub fn asymptotic_outage(cfg: &SystemConfig, rho: f64) -> Result<f64> {
    let th = thresholds(cfg.a2, rho, cfg.target_rate_r)?;
    if !th.feasible {
        return Ok(1.0);
    }
    let lead = |link: &crate::channel::LinkSpec, n: u32, delta: f64| -> f64 {
        let mn = link.m * n;
        match cfg.combiner {
            CombinerKind::Sc => sc_leading_coeff(link.m, link.omega).powi(n as i32)
                * delta.powi(mn as i32),
            CombinerKind::Mrc => {
                (link.m as f64 * delta / link.omega).powi(mn as i32) / factorial(mn)
            }
        }
    };
    Ok(lead(&cfg.sd, cfg.n_d, th.delta1.unwrap())
        + lead(&cfg.sr, cfg.n_r, th.delta2.unwrap())
        + lead(&cfg.rd, cfg.n_d, th.delta3))
}

/// Least-squares diversity-order estimate from (rho_dB, outage) samples:
/// minus the slope of log10(outage) against log10(rho_linear).
pub fn diversity_slope_estimate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::domain(
            "diversity_slope_estimate needs at least two points",
        ));
    }
    for w in points.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::domain(
                "diversity_slope_estimate requires strictly increasing rho_db",
            ));
        }
    }
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for &(rho_db, p) in points {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "outage values must lie in (0, 1); got {p} at {rho_db} dB \
                 (filter saturated points before fitting)"
            )));
        }
        xs.push(rho_db / 10.0); // log10 of the linear SNR
        ys.push(p.log10());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(-(sxy / sxx))
}
