//! Acceptance suite: every release-gating criterion, one test each, with a
//! printed pass line carrying the measured margin. Run with `--nocapture`
//! to see the lines. Tolerances are pinned here, not configurable.

use crs_noma_core::channel::{CombinerKind, LinkSpec, SystemConfig};
use crs_noma_core::outage::{diversity_slope_estimate, outage_closed};
use crs_noma_core::power_opt::{default_a2_grid, optimal_a2};
use crs_noma_core::rate::{rate_high_snr, rate_quadrature_oracle, rate_total};
use crs_noma_core::rng::point_seed;
use crs_noma_core::series::{ccdf_from_terms, expansion_terms};
use crs_noma_core::sim::{simulate_outage, simulate_rate, within_k_sigma, Scheme};
use std::time::Instant;

const OMEGA_SR: f64 = 10.0;
const OMEGA_SD: f64 = 1.0;
const OMEGA_RD: f64 = 2.5;

fn cfg(m: u32, n: u32, combiner: CombinerKind, a2: f64) -> SystemConfig {
    SystemConfig::new(
        LinkSpec::new(m, OMEGA_SR).unwrap(),
        LinkSpec::new(m, OMEGA_SD).unwrap(),
        LinkSpec::new(m, OMEGA_RD).unwrap(),
        n,
        n,
        combiner,
        a2,
        1.0,
    )
    .unwrap()
}

fn db(rho_db: f64) -> f64 {
    10.0_f64.powf(rho_db / 10.0)
}

const COMBINERS: [CombinerKind; 2] = [CombinerKind::Sc, CombinerKind::Mrc];

/// Criterion 1: closed form vs quadrature oracle, |diff| <= 1e-7 bps/Hz
/// over the full (m, N, combiner, rho, a2) grid, in under 30 s.
#[test]
fn acceptance_1_closed_form_vs_quadrature() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for m in [1u32, 2] {
        for n in [1u32, 2, 3] {
            for comb in COMBINERS {
                for a2 in [0.05, 0.1, 0.2] {
                    let c = cfg(m, n, comb, a2);
                    for rho_db in [0.0, 10.0, 20.0, 30.0] {
                        let rho = db(rho_db);
                        let closed = rate_total(&c, rho).unwrap();
                        let oracle = rate_quadrature_oracle(&c, rho).unwrap();
                        worst = worst
                            .max((closed.rate_s1 - oracle.rate_s1).abs())
                            .max((closed.rate_s2 - oracle.rate_s2).abs())
                            .max((closed.rate_total - oracle.rate_total).abs());
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(worst <= 1e-7, "worst closed-vs-oracle diff {worst:.3e}");
    assert!(elapsed < 30.0, "oracle sweep took {elapsed:.1} s");
    println!(
        "acceptance 1: PASS — closed form vs quadrature, max |diff| = {worst:.3e} bps/Hz \
         over 144 configs in {elapsed:.1} s"
    );
}

/// Criterion 2: closed form vs Monte Carlo at 1e6 trials per point; rate
/// and outage each within 4 standard errors at >= 95% of grid points.
#[test]
fn acceptance_2_closed_form_vs_monte_carlo() {
    let start = Instant::now();
    let seed = 0x5EED_CAFE;
    let trials = 1_000_000;
    let mut rate_ok = 0usize;
    let mut outage_ok = 0usize;
    let mut total = 0usize;
    for m in [1u32, 2] {
        for n in [1u32, 2, 3] {
            for comb in COMBINERS {
                for a2 in [0.05, 0.1, 0.2] {
                    let c = cfg(m, n, comb, a2);
                    for rho_db in [0.0, 10.0, 20.0, 30.0] {
                        let rho = db(rho_db);
                        total += 1;
                        let ps = point_seed(seed, rho_db);

                        let analytic = rate_total(&c, rho).unwrap().rate_total;
                        let mc = simulate_rate(&c, rho, Scheme::Noma, trials, ps).unwrap();
                        if within_k_sigma(analytic, &mc, 4.0, false) {
                            rate_ok += 1;
                        }

                        let p = outage_closed(&c, rho).unwrap();
                        let mc = simulate_outage(&c, rho, trials, ps).unwrap();
                        if within_k_sigma(p, &mc, 4.0, true) {
                            outage_ok += 1;
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let rate_frac = rate_ok as f64 / total as f64;
    let outage_frac = outage_ok as f64 / total as f64;
    assert!(rate_frac >= 0.95, "rate agreement only {rate_frac:.3}");
    assert!(outage_frac >= 0.95, "outage agreement only {outage_frac:.3}");
    assert!(elapsed < 600.0, "MC validation took {elapsed:.0} s");
    println!(
        "acceptance 2: PASS — MC agreement at 4 sigma: rates {rate_ok}/{total}, \
         outage {outage_ok}/{total}, {elapsed:.0} s"
    );
}

/// Criterion 3: the optimal power split anchor a2* = 0.09 at 2 dB for the
/// m = 2, N = 2 SC system, staying within [0.08, 0.10] over 0..30 dB.
#[test]
fn acceptance_3_optimal_power_split_anchor() {
    let c = cfg(2, 2, CombinerKind::Sc, 0.1);
    let grid = default_a2_grid();
    let r = optimal_a2(&c, db(2.0), &grid).unwrap();
    assert_eq!(r.a2_star, 0.09, "a2* at 2 dB");
    let mut band = (1.0f64, 0.0f64);
    for tenth_db in 0..=300 {
        let rho_db = tenth_db as f64 / 10.0;
        let star = optimal_a2(&c, db(rho_db), &grid).unwrap().a2_star;
        band = (band.0.min(star), band.1.max(star));
        assert!(
            (0.08..=0.10).contains(&star),
            "a2* = {star} at {rho_db} dB"
        );
    }
    println!(
        "acceptance 3: PASS — a2* = 0.09 at 2 dB; a2* in [{}, {}] across 0..30 dB",
        band.0, band.1
    );
}

/// Criterion 4: fitted diversity slope within 10% of m*N over 40..60 dB
/// for all four (m, N) pairs and both combiners, in under 5 s.
#[test]
fn acceptance_4_diversity_order() {
    let start = Instant::now();
    let mut report = Vec::new();
    for (m, n) in [(1u32, 1u32), (1, 2), (2, 1), (2, 2)] {
        for comb in COMBINERS {
            let c = cfg(m, n, comb, 0.1);
            let pts: Vec<(f64, f64)> = (0..=8)
                .map(|i| {
                    let rho_db = 40.0 + 2.5 * i as f64;
                    (rho_db, outage_closed(&c, db(rho_db)).unwrap())
                })
                .collect();
            let d_hat = diversity_slope_estimate(&pts).unwrap();
            let target = (m * n) as f64;
            assert!(
                (d_hat - target).abs() <= 0.1 * target,
                "m={m} N={n} {comb:?}: d_hat = {d_hat} vs {target}"
            );
            report.push(format!("({m},{n},{}) {d_hat:.3}", comb.as_str()));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "diversity fits took {elapsed:.2} s");
    println!(
        "acceptance 4: PASS — diversity slopes within 10% of mN: {} ({elapsed:.2} s)",
        report.join(", ")
    );
}

/// Criterion 5: the sum rate gains 0.5 log2(10) per decade beyond 30 dB,
/// and the high-SNR approximation sits within 0.02 bps/Hz of the exact
/// closed form at 40 dB under the fixed a2 = 0.1, m = 2 protocol.
#[test]
fn acceptance_5_high_snr_slope_and_approximation() {
    let per_decade = 0.5 * 10.0_f64.log2();
    let mut worst_slope_err: f64 = 0.0;
    for (m, n) in [(1u32, 1u32), (2, 2)] {
        for comb in COMBINERS {
            let c = cfg(m, n, comb, 0.1);
            for rho_db in [30.0, 40.0] {
                let lo = rate_total(&c, db(rho_db)).unwrap().rate_total;
                let hi = rate_total(&c, db(rho_db + 10.0)).unwrap().rate_total;
                let err = (hi - lo - per_decade).abs();
                worst_slope_err = worst_slope_err.max(err);
                assert!(
                    err <= 0.05,
                    "decade slope off by {err:.4} at m={m} N={n} {comb:?} {rho_db} dB"
                );
            }
        }
    }
    let mut worst_gap: f64 = 0.0;
    for n in [1u32, 2] {
        for comb in COMBINERS {
            let c = cfg(2, n, comb, 0.1);
            let exact = rate_total(&c, db(40.0)).unwrap().rate_total;
            let approx = rate_high_snr(&c, db(40.0)).unwrap().rate_total;
            let gap = (exact - approx).abs();
            worst_gap = worst_gap.max(gap);
            assert!(gap <= 0.02, "gap {gap:.4} at N={n} {comb:?}");
        }
    }
    println!(
        "acceptance 5: PASS — decade slope within {worst_slope_err:.4} of 0.5 log2(10); \
         exact-vs-approx gap at 40 dB <= {worst_gap:.4} bps/Hz"
    );
}

/// NOMA-vs-OMA rate difference at one grid point with shared channel
/// realizations (identical per-point seed).
fn noma_minus_oma(c: &SystemConfig, rho_db: f64, trials: u64, seed: u64) -> f64 {
    let rho = db(rho_db);
    let ps = point_seed(seed, rho_db);
    let noma = simulate_rate(c, rho, Scheme::Noma, trials, ps).unwrap();
    let oma = simulate_rate(c, rho, Scheme::Oma, trials, ps).unwrap();
    noma.mean - oma.mean
}

/// Crossover SNR: interpolated zero of the NOMA-OMA difference along the
/// grid; requires exactly one sign change and positivity beyond it.
fn crossover_db(c_base: &SystemConfig, grid_db: &[f64], trials: u64, seed: u64) -> f64 {
    let a2_grid = default_a2_grid();
    let diffs: Vec<(f64, f64)> = grid_db
        .iter()
        .map(|&rho_db| {
            let star = optimal_a2(c_base, db(rho_db), &a2_grid).unwrap().a2_star;
            let c = c_base.with_a2(star).unwrap();
            (rho_db, noma_minus_oma(&c, rho_db, trials, seed))
        })
        .collect();
    let last_neg = diffs
        .iter()
        .rposition(|&(_, d)| d <= 0.0)
        .expect("OMA should win at the grid start");
    assert!(
        last_neg + 1 < diffs.len(),
        "no crossover inside the grid for {c_base:?}"
    );
    for &(rho_db, d) in &diffs[last_neg + 1..] {
        assert!(d > 0.0, "NOMA fell below OMA again at {rho_db} dB");
    }
    let (x0, y0) = diffs[last_neg];
    let (x1, y1) = diffs[last_neg + 1];
    x0 + (x1 - x0) * (-y0) / (y1 - y0)
}

/// Criterion 6: multi-antenna NOMA overtakes OMA earlier — crossover
/// ordering in both N and m at MRC — and the rate difference saturates
/// over 30..40 dB.
#[test]
fn acceptance_6_crossover_and_saturation() {
    let trials = 1_000_000;
    let seed = 0xC0FFEE;
    let grid: Vec<f64> = (-4..=10).map(|i| i as f64).collect();

    let rho_m2n1 = crossover_db(&cfg(2, 1, CombinerKind::Mrc, 0.1), &grid, trials, seed);
    let rho_m2n2 = crossover_db(&cfg(2, 2, CombinerKind::Mrc, 0.1), &grid, trials, seed);
    let rho_m1n2 = crossover_db(&cfg(1, 2, CombinerKind::Mrc, 0.1), &grid, trials, seed);
    assert!(
        rho_m2n2 < rho_m2n1,
        "more antennas should cross earlier: {rho_m2n2:.2} vs {rho_m2n1:.2} dB"
    );
    assert!(
        rho_m2n2 < rho_m1n2,
        "larger shape should cross earlier: {rho_m2n2:.2} vs {rho_m1n2:.2} dB"
    );

    // NOMA stays ahead through the rest of the sweep range
    let a2_grid = default_a2_grid();
    for (m, n) in [(2u32, 1u32), (2, 2), (1, 2)] {
        for rho_db in [14.0, 20.0, 26.0, 30.0] {
            let base = cfg(m, n, CombinerKind::Mrc, 0.1);
            let star = optimal_a2(&base, db(rho_db), &a2_grid).unwrap().a2_star;
            let c = base.with_a2(star).unwrap();
            let d = noma_minus_oma(&c, rho_db, trials, seed);
            assert!(d > 0.0, "NOMA behind OMA at {rho_db} dB (m={m}, N={n})");
        }
    }

    // saturation of the difference over 30..40 dB
    let mut worst_spread: f64 = 0.0;
    for comb in COMBINERS {
        let base = cfg(2, 2, comb, 0.1);
        let diffs: Vec<f64> = [30.0, 35.0, 40.0]
            .iter()
            .map(|&rho_db| {
                let star = optimal_a2(&base, db(rho_db), &a2_grid).unwrap().a2_star;
                let c = base.with_a2(star).unwrap();
                noma_minus_oma(&c, rho_db, trials, seed)
            })
            .collect();
        let spread =
            diffs.iter().fold(f64::MIN, |a, &b| a.max(b)) - diffs.iter().fold(f64::MAX, |a, &b| a.min(b));
        worst_spread = worst_spread.max(spread);
        assert!(spread < 0.05, "difference spread {spread:.4} over 30..40 dB");
    }
    println!(
        "acceptance 6: PASS — crossovers (MRC, dB): m=2: N=2 {rho_m2n2:.2} < N=1 {rho_m2n1:.2}; \
         N=2: m=2 {rho_m2n2:.2} < m=1 {rho_m1n2:.2}; 30..40 dB difference spread <= {worst_spread:.4}"
    );
}

/// Criterion 7: reduction identities. With one antenna the SC and MRC
/// closed forms coincide; with m = 1 the multinomial expansion collapses
/// to the plain order-statistic CCDF.
#[test]
fn acceptance_7_reduction_identities() {
    let mut worst_combiner: f64 = 0.0;
    for m in [1u32, 2, 3] {
        for rho in [1.0, 10.0, 100.0, 1000.0] {
            for a2 in [0.05, 0.1, 0.2] {
                let sc = rate_total(&cfg(m, 1, CombinerKind::Sc, a2), rho).unwrap();
                let mrc = rate_total(&cfg(m, 1, CombinerKind::Mrc, a2), rho).unwrap();
                let d = (sc.rate_s1 - mrc.rate_s1)
                    .abs()
                    .max((sc.rate_s2 - mrc.rate_s2).abs());
                worst_combiner = worst_combiner.max(d);
                assert!(d <= 1e-10, "SC/MRC mismatch {d:.2e} at m={m}");
            }
        }
    }

    let mut worst_rayleigh: f64 = 0.0;
    for n in [1u32, 2, 3] {
        for omega in [1.0, 10.0] {
            let link = LinkSpec::new(1, omega).unwrap();
            let terms = expansion_terms(&link, n, 1.0).unwrap();
            for i in 1..=20 {
                let x = 0.25 * i as f64;
                let expansion = ccdf_from_terms(&terms, 1.0 / omega, x);
                let direct = 1.0 - (1.0 - (-x / omega).exp()).powi(n as i32);
                let d = (expansion - direct).abs();
                worst_rayleigh = worst_rayleigh.max(d);
                assert!(d <= 1e-10, "expansion mismatch {d:.2e} at n={n} x={x}");
            }
        }
    }
    println!(
        "acceptance 7: PASS — N=1 SC/MRC agree to {worst_combiner:.2e}; m=1 expansion \
         matches order statistics to {worst_rayleigh:.2e}"
    );
}

/// Criterion 8: any a2 >= 0.25 with R = 1 makes outage certain, exactly,
/// in both the closed form and the simulator.
#[test]
fn acceptance_8_infeasible_power_split() {
    for a2 in [0.25, 0.3, 0.4] {
        for comb in COMBINERS {
            let c = cfg(2, 2, comb, a2);
            assert_eq!(outage_closed(&c, db(10.0)).unwrap(), 1.0, "analytic, a2={a2}");
            let mc = simulate_outage(&c, db(10.0), 100_000, 0xD003).unwrap();
            assert_eq!(mc.mean, 1.0, "monte carlo, a2={a2}");
            assert_eq!(mc.stderr, 0.0);
        }
    }
    println!("acceptance 8: PASS — a2 in {{0.25, 0.3, 0.4}} gives outage exactly 1.0 (analytic and MC)");
}
