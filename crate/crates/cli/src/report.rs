//! CSV emission. One fixed sweep schema serves every figure and sweep;
//! the power-split trace views have their own narrower schemas. Floats
//! are written with Rust's shortest round-trip formatting, so re-parsing
//! reproduces the exact f64 values.

use crs_noma_core::power_opt::TracePoint;
use crs_noma_core::SweepRow;
use std::io::{self, Write};

pub const SWEEP_HEADER: &str = "rho_db,scheme,combiner,m_sr,m_sd,m_rd,n_r,n_d,a2,\
rate_s1_analytic,rate_s2_analytic,rate_total_analytic,rate_high_snr,rate_mc,rate_mc_stderr,\
outage_analytic,outage_mc,outage_mc_stderr,trials";

pub const TRACE_HEADER: &str = "a2,delta1,delta2,ccdf_sd,ccdf_sr,product,outage";

pub const OPT_HEADER: &str = "rho_db,a2_star,outage_at_star,grid_points";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Version-and-seed comment line written ahead of every header.
pub fn preamble(out: &mut dyn Write, seed: u64) -> io::Result<()> {
    writeln!(
        out,
        "# crs-noma-lab v{}, seed={seed}",
        env!("CARGO_PKG_VERSION")
    )
}

pub fn write_sweep_header(out: &mut dyn Write, seed: u64) -> io::Result<()> {
    preamble(out, seed)?;
    writeln!(out, "{SWEEP_HEADER}")
}

pub fn write_sweep_row(out: &mut dyn Write, r: &SweepRow) -> io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.rho_db,
        r.scheme.as_str(),
        r.combiner.as_str(),
        r.m_sr,
        r.m_sd,
        r.m_rd,
        r.n_r,
        r.n_d,
        r.a2,
        opt(r.rate_s1_analytic),
        opt(r.rate_s2_analytic),
        opt(r.rate_total_analytic),
        opt(r.rate_high_snr),
        opt(r.rate_mc),
        opt(r.rate_mc_stderr),
        opt(r.outage_analytic),
        opt(r.outage_mc),
        opt(r.outage_mc_stderr),
        r.trials
    )
}

pub fn write_trace_header(out: &mut dyn Write, seed: u64) -> io::Result<()> {
    preamble(out, seed)?;
    writeln!(out, "{TRACE_HEADER}")
}

pub fn write_trace_row(out: &mut dyn Write, p: &TracePoint) -> io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        p.a2,
        opt(p.delta1),
        opt(p.delta2),
        opt(p.ccdf_sd),
        opt(p.ccdf_sr),
        opt(p.product),
        p.outage
    )
}

pub fn write_opt_header(out: &mut dyn Write, seed: u64) -> io::Result<()> {
    preamble(out, seed)?;
    writeln!(out, "{OPT_HEADER}")
}

pub fn write_opt_row(
    out: &mut dyn Write,
    rho_db: f64,
    a2_star: f64,
    outage: f64,
    grid_points: usize,
) -> io::Result<()> {
    writeln!(out, "{rho_db},{a2_star},{outage},{grid_points}")
}
