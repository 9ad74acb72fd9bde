//! Command execution and exit-code policy.

use crate::args::{build_grid, A2Mode, Cli, Command, ConfigArgs, FigureArgs, OptimizeArgs, SweepArgs};
use crate::report;
use crs_noma_core::power_opt::{ccdf_factor_trace, default_a2_grid, optimal_a2, refined_grid};
use crs_noma_core::rate::{rate_quadrature_oracle, rate_total};
use crs_noma_core::rng::point_seed;
use crs_noma_core::sim::{simulate_outage, simulate_rate, sweep_point, within_k_sigma};
use crs_noma_core::{CombinerKind, Error, Metric, Scheme, SweepRow, SystemConfig};
use std::fs::File;
use std::io::{self, BufWriter, Write};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    /// 2 for usage/config/I/O problems, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 2,
            CliError::Core(Error::Numerical { .. }) | CliError::Core(Error::Quadrature(_)) => 3,
            CliError::Core(_) => 2,
        }
    }
}

fn open_out(path: &str) -> io::Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout())))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn db(rho_db: f64) -> f64 {
    10.0_f64.powf(rho_db / 10.0)
}

/// System for one grid point: fixed a2 passes through, opt mode runs the
/// per-SNR outage-minimizing search first.
fn resolve_system(config: &ConfigArgs, rho_db: f64) -> Result<SystemConfig, Error> {
    match config.a2 {
        A2Mode::Fixed(v) => config.system_with_a2(v),
        A2Mode::Opt => {
            let base = config.system_with_a2(0.1)?;
            let star = optimal_a2(&base, db(rho_db), &default_a2_grid())?.a2_star;
            config.system_with_a2(star)
        }
    }
}

fn print_warnings(cfg: &SystemConfig) {
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
}

pub fn execute(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::RateSweep(a) => sweep(a, Metric::Rate),
        Command::OutageSweep(a) => sweep(a, Metric::Outage),
        Command::OptimizeA2(a) => optimize(a),
        Command::Validate(a) => validate(a),
        Command::Figure(a) => figure(a),
    }
}

fn sweep(args: SweepArgs, metric: Metric) -> Result<u8, CliError> {
    let (stop, step) = match metric {
        Metric::Rate => (30.0, 2.0),
        Metric::Outage => (40.0, 2.5),
    };
    let grid = build_grid(
        args.rho_start_db,
        args.rho_stop_db.unwrap_or(stop),
        args.rho_step_db.unwrap_or(step),
    )?;
    print_warnings(&resolve_system(&args.config, grid[0])?);
    let mut out = open_out(&args.out)?;
    report::write_sweep_header(&mut *out, args.seed)?;
    for &rho_db in &grid {
        let cfg = resolve_system(&args.config, rho_db)?;
        let row = sweep_point(
            &cfg,
            rho_db,
            args.scheme.into(),
            metric,
            args.trials,
            point_seed(args.seed, rho_db),
        )?;
        report::write_sweep_row(&mut *out, &row)?;
    }
    out.flush()?;
    Ok(0)
}

fn optimize(args: OptimizeArgs) -> Result<u8, CliError> {
    let grid = build_grid(
        args.rho_start_db,
        args.rho_stop_db.unwrap_or(30.0),
        args.rho_step_db.unwrap_or(2.0),
    )?;
    let base = args.config.system_with_a2(0.1)?;
    print_warnings(&base);
    let a2_grid = default_a2_grid();
    let mut out = open_out(&args.out)?;
    report::write_opt_header(&mut *out, args.seed)?;
    for &rho_db in &grid {
        let rho = db(rho_db);
        let mut best = optimal_a2(&base, rho, &a2_grid)?;
        let mut n_points = best.per_point.len();
        if args.refine {
            let fine = optimal_a2(&base, rho, &refined_grid(best.a2_star, 0.01))?;
            n_points += fine.per_point.len();
            if fine.outage_at_star < best.outage_at_star {
                best = fine;
            }
        }
        report::write_opt_row(&mut *out, rho_db, best.a2_star, best.outage_at_star, n_points)?;
    }
    out.flush()?;
    Ok(0)
}

fn validate(args: SweepArgs) -> Result<u8, CliError> {
    let grid = build_grid(
        args.rho_start_db,
        args.rho_stop_db.unwrap_or(30.0),
        args.rho_step_db.unwrap_or(2.0),
    )?;
    print_warnings(&resolve_system(&args.config, grid[0])?);
    let mut out = open_out(&args.out)?;
    report::write_sweep_header(&mut *out, args.seed)?;
    let mut violations: Vec<String> = Vec::new();
    for &rho_db in &grid {
        let cfg = resolve_system(&args.config, rho_db)?;
        let rho = db(rho_db);
        let seed = point_seed(args.seed, rho_db);

        let closed = rate_total(&cfg, rho)?;
        let oracle = rate_quadrature_oracle(&cfg, rho)?;
        let oracle_gap = (closed.rate_total - oracle.rate_total).abs();
        if oracle_gap > 1e-7 {
            violations.push(format!(
                "{rho_db} dB: closed-form vs quadrature gap {oracle_gap:.3e} > 1e-7"
            ));
        }

        let rate_mc = simulate_rate(&cfg, rho, Scheme::Noma, args.trials, seed)?;
        if !within_k_sigma(closed.rate_total, &rate_mc, 4.0, false) {
            violations.push(format!(
                "{rho_db} dB: rate {} vs MC {} +/- {} exceeds 4 sigma",
                closed.rate_total, rate_mc.mean, rate_mc.stderr
            ));
        }

        let p = crs_noma_core::outage::outage_closed(&cfg, rho)?;
        let outage_mc = simulate_outage(&cfg, rho, args.trials, seed)?;
        if !within_k_sigma(p, &outage_mc, 4.0, true) {
            violations.push(format!(
                "{rho_db} dB: outage {p} vs MC {} +/- {} exceeds 4 sigma",
                outage_mc.mean, outage_mc.stderr
            ));
        }

        let mut row = sweep_point(&cfg, rho_db, Scheme::Noma, Metric::Rate, 0, seed)?;
        row.rate_mc = Some(rate_mc.mean);
        row.rate_mc_stderr = Some(rate_mc.stderr);
        row.outage_analytic = Some(p);
        row.outage_mc = Some(outage_mc.mean);
        row.outage_mc_stderr = Some(outage_mc.stderr);
        row.trials = args.trials;
        report::write_sweep_row(&mut *out, &row)?;
    }
    out.flush()?;
    if violations.is_empty() {
        eprintln!("validate: all {} grid points agree", grid.len());
        Ok(0)
    } else {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        eprintln!("validate: {} violation(s)", violations.len());
        Ok(1)
    }
}

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

struct PresetConfig {
    m: u32,
    n: u32,
    combiner: CombinerKind,
}

fn preset_system(p: &PresetConfig, a2: f64) -> Result<SystemConfig, Error> {
    SystemConfig::new(
        crs_noma_core::LinkSpec::new(p.m, 10.0)?,
        crs_noma_core::LinkSpec::new(p.m, 1.0)?,
        crs_noma_core::LinkSpec::new(p.m, 2.5)?,
        p.n,
        p.n,
        p.combiner,
        a2,
        1.0,
    )
}

/// Optimal power split for a preset system at one SNR.
fn preset_opt_a2(p: &PresetConfig, rho_db: f64) -> Result<f64, Error> {
    let base = preset_system(p, 0.1)?;
    Ok(optimal_a2(&base, db(rho_db), &default_a2_grid())?.a2_star)
}

fn figure(args: FigureArgs) -> Result<u8, CliError> {
    let mut out = open_out(&args.out)?;
    let combiners = [CombinerKind::Sc, CombinerKind::Mrc];
    match args.preset.as_str() {
        // outage vs SNR for (N, m) in {1,2}^2, both combiners, optimal a2
        "fig2" => {
            let grid = build_grid(0.0, 40.0, 2.5)?;
            report::write_sweep_header(&mut *out, args.seed)?;
            for combiner in combiners {
                for m in [1, 2] {
                    for n in [1, 2] {
                        let p = PresetConfig { m, n, combiner };
                        for &rho_db in &grid {
                            let cfg = preset_system(&p, preset_opt_a2(&p, rho_db)?)?;
                            let row = sweep_point(
                                &cfg,
                                rho_db,
                                Scheme::Noma,
                                Metric::Outage,
                                args.trials,
                                point_seed(args.seed, rho_db),
                            )?;
                            report::write_sweep_row(&mut *out, &row)?;
                        }
                    }
                }
            }
        }
        // power-split decomposition at fixed SNR (2 dB / 20 dB)
        "fig3" | "fig4" => {
            let rho_db = if args.preset == "fig3" { 2.0 } else { 20.0 };
            let p = PresetConfig {
                m: 2,
                n: 2,
                combiner: CombinerKind::Sc,
            };
            let cfg = preset_system(&p, 0.1)?;
            let trace = ccdf_factor_trace(&cfg, db(rho_db), &default_a2_grid())?;
            report::write_trace_header(&mut *out, args.seed)?;
            for point in &trace {
                report::write_trace_row(&mut *out, point)?;
            }
        }
        // ergodic rate vs SNR: antenna sweep at m = 2 / shape sweep at N = 2
        "fig5" | "fig6" => {
            let grid = build_grid(0.0, 30.0, 2.0)?;
            let pairs: &[(u32, u32)] = if args.preset == "fig5" {
                &[(2, 1), (2, 2)]
            } else {
                &[(1, 2), (2, 2)]
            };
            report::write_sweep_header(&mut *out, args.seed)?;
            for combiner in combiners {
                for &(m, n) in pairs {
                    let p = PresetConfig { m, n, combiner };
                    for scheme in [Scheme::Noma, Scheme::Oma] {
                        for &rho_db in &grid {
                            let cfg = preset_system(&p, preset_opt_a2(&p, rho_db)?)?;
                            let row = sweep_point(
                                &cfg,
                                rho_db,
                                scheme,
                                Metric::Rate,
                                args.trials,
                                point_seed(args.seed, rho_db),
                            )?;
                            report::write_sweep_row(&mut *out, &row)?;
                        }
                    }
                }
            }
        }
        // NOMA and OMA rate rows for the difference plot
        "fig7" => {
            let grid = build_grid(0.0, 40.0, 2.0)?;
            report::write_sweep_header(&mut *out, args.seed)?;
            for combiner in combiners {
                for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                    let p = PresetConfig { m, n, combiner };
                    for scheme in [Scheme::Noma, Scheme::Oma] {
                        for &rho_db in &grid {
                            let cfg = preset_system(&p, preset_opt_a2(&p, rho_db)?)?;
                            let row = sweep_point(
                                &cfg,
                                rho_db,
                                scheme,
                                Metric::Rate,
                                args.trials,
                                point_seed(args.seed, rho_db),
                            )?;
                            report::write_sweep_row(&mut *out, &row)?;
                        }
                    }
                }
            }
        }
        // exact closed form vs high-SNR approximation, fixed a2 = 0.1
        "fig8" => {
            let grid = build_grid(0.0, 40.0, 2.0)?;
            report::write_sweep_header(&mut *out, args.seed)?;
            for combiner in combiners {
                for n in [1, 2] {
                    let p = PresetConfig { m: 2, n, combiner };
                    let cfg = preset_system(&p, 0.1)?;
                    for &rho_db in &grid {
                        let row = sweep_point(
                            &cfg,
                            rho_db,
                            Scheme::Noma,
                            Metric::Rate,
                            0,
                            point_seed(args.seed, rho_db),
                        )?;
                        report::write_sweep_row(&mut *out, &row)?;
                    }
                }
            }
        }
        other => {
            return Err(CliError::Core(Error::Config(format!(
                "unknown figure preset '{other}' (expected fig2..fig8)"
            ))));
        }
    }
    out.flush()?;
    Ok(0)
}
