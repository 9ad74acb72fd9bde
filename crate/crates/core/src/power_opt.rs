//! Power-allocation optimization: grid search for the a2 that minimizes
//! the closed-form outage probability, plus the per-factor decomposition
//! explaining where the optimum comes from.
//!
//! The optimizer consumes only the closed form, never Monte Carlo, so its
//! output is deterministic.

use crate::channel::{gain_ccdf, SystemConfig};
use crate::error::{Error, Result};
use crate::outage::{outage_closed, thresholds};

/// Outcome of a grid search over a2.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// Minimizer; ties resolve to the smallest a2 (which is how a fully
    /// infeasible grid, where every outage is 1, behaves).
    pub a2_star: f64,
    pub outage_at_star: f64,
    /// Human-readable description of the searched set.
    pub grid: String,
    /// Every evaluated (a2, outage) pair, ordered by a2.
    pub per_point: Vec<(f64, f64)>,
}

/// The canonical search set {0.01, 0.02, ..., 0.24}.
pub fn default_a2_grid() -> Vec<f64> {
    (1..=24).map(|i| i as f64 / 100.0).collect()
}

/// A finer set around `a2_star`: plus/minus one step at half resolution,
/// clipped to (0, 0.5).
pub fn refined_grid(a2_star: f64, step: f64) -> Vec<f64> {
    (-2..=2)
        .map(|k| a2_star + k as f64 * step / 2.0)
        .filter(|&a| a > 0.0 && a < 0.5)
        .collect()
}

/// Evaluate the closed-form outage at every grid a2 (the cfg's own a2 is
/// ignored) and return the minimizer.
pub fn optimal_a2(cfg: &SystemConfig, rho: f64, grid: &[f64]) -> Result<OptResult> {
    if grid.is_empty() {
        return Err(Error::domain("optimal_a2 requires a nonempty grid"));
    }
    let mut points: Vec<f64> = grid.to_vec();
    points.sort_by(|a, b| a.partial_cmp(b).expect("grid values must be comparable"));
    for &a2 in &points {
        if !(a2 > 0.0 && a2 < 0.5) {
            return Err(Error::domain(format!(
                "grid values must lie in (0, 0.5), got {a2}"
            )));
        }
    }
    let mut per_point = Vec::with_capacity(points.len());
    let mut best: Option<(f64, f64)> = None;
    for &a2 in &points {
        let outage = outage_closed(&cfg.with_a2(a2)?, rho)?;
        per_point.push((a2, outage));
        let better = match best {
            None => true,
            Some((_, b)) => outage < b,
        };
        if better {
            best = Some((a2, outage));
        }
    }
    let (a2_star, outage_at_star) = best.expect("grid is nonempty");
    Ok(OptResult {
        a2_star,
        outage_at_star,
        grid: format!(
            "{} points in [{}, {}]",
            points.len(),
            points.first().unwrap(),
            points.last().unwrap()
        ),
        per_point,
    })
}

/// Per-a2 decomposition of the outage into its power-split-dependent
/// factors. Delta_3 does not depend on a2, so the product
/// CCDF_sd(Delta_1) * CCDF_sr(Delta_2) alone determines the optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub a2: f64,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub ccdf_sd: Option<f64>,
    pub ccdf_sr: Option<f64>,
    /// CCDF_sd(Delta_1) * CCDF_sr(Delta_2).
    pub product: Option<f64>,
    pub outage: f64,
}

/// The data behind the factor-decomposition view of the optimum.
pub fn ccdf_factor_trace(cfg: &SystemConfig, rho: f64, a2_grid: &[f64]) -> Result<Vec<TracePoint>> {
    if a2_grid.is_empty() {
        return Err(Error::domain(
            "ccdf_factor_trace requires a nonempty grid",
        ));
    }
    let mut grid = a2_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("grid values must be comparable"));
    let mut out = Vec::with_capacity(grid.len());
    for &a2 in &grid {
        let sys = cfg.with_a2(a2)?;
        let th = thresholds(a2, rho, cfg.target_rate_r)?;
        let outage = outage_closed(&sys, rho)?;
        if th.feasible {
            let d1 = th.delta1.unwrap();
            let d2 = th.delta2.unwrap();
            let c_sd = gain_ccdf(&cfg.sd, cfg.n_d, cfg.combiner, d1)?;
            let c_sr = gain_ccdf(&cfg.sr, cfg.n_r, cfg.combiner, d2)?;
            out.push(TracePoint {
                a2,
                delta1: Some(d1),
                delta2: Some(d2),
                ccdf_sd: Some(c_sd),
                ccdf_sr: Some(c_sr),
                product: Some(c_sd * c_sr),
                outage,
            });
        } else {
            out.push(TracePoint {
                a2,
                delta1: None,
                delta2: None,
                ccdf_sd: None,
                ccdf_sr: None,
                product: None,
                outage,
            });
        }
    }
    Ok(out)
}
