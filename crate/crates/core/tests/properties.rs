//! Property tests for the enumeration and distribution layers.

use crs_noma_core::channel::{gain_cdf, min_pair_ccdf, CombinerKind, LinkSpec};
use crs_noma_core::outage::thresholds;
use crs_noma_core::series::{ccdf_from_terms, expansion_terms, weak_compositions};
use crs_noma_core::specfun::reg_lower_gamma;
use proptest::prelude::*;

fn binom(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut c = 1u64;
    for i in 1..=k {
        c = c * (n - k + i) / i;
    }
    c
}

proptest! {
    #[test]
    fn compositions_count_sum_and_order(n in 0u32..=6, parts in 1u32..=5, exclude in any::<bool>()) {
        let v = weak_compositions(n, parts, exclude);
        let mut expect = binom((n + parts - 1) as u64, (parts - 1) as u64) as usize;
        if exclude {
            expect -= 1;
        }
        prop_assert_eq!(v.len(), expect);
        for c in &v {
            prop_assert_eq!(c.len(), parts as usize);
            prop_assert_eq!(c.iter().sum::<u32>(), n);
        }
        prop_assert!(v.windows(2).all(|w| w[0] < w[1]), "lexicographic order");
    }

    #[test]
    fn expansion_reconstructs_order_statistic_ccdf(
        m in 1u32..=3,
        n in 1u32..=4,
        omega in 0.5f64..20.0,
        scale in 0.05f64..1.0,
        x in 0.0f64..15.0,
    ) {
        let link = LinkSpec::new(m, omega).unwrap();
        let terms = expansion_terms(&link, n, scale).unwrap();
        let rate = m as f64 / (scale * omega);
        let sum = ccdf_from_terms(&terms, rate, x);
        let p = reg_lower_gamma(m as f64, rate * x).unwrap();
        let direct = 1.0 - p.powi(n as i32);
        prop_assert!((sum - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        prop_assert!((-1e-10..=1.0 + 1e-10).contains(&sum));
    }

    #[test]
    fn min_pair_factorizes(
        m_a in 1u32..=3,
        m_b in 1u32..=3,
        n_a in 1u32..=3,
        n_b in 1u32..=3,
        scale_a in 0.05f64..1.0,
        omega_a in 0.5f64..20.0,
        omega_b in 0.5f64..20.0,
        x in 0.0f64..10.0,
        mrc in any::<bool>(),
    ) {
        let comb = if mrc { CombinerKind::Mrc } else { CombinerKind::Sc };
        let a = LinkSpec::new(m_a, omega_a).unwrap();
        let b = LinkSpec::new(m_b, omega_b).unwrap();
        let joint = min_pair_ccdf(&a, n_a, scale_a, &b, n_b, 1.0, comb, x).unwrap();
        let fa = 1.0 - gain_cdf(&a, n_a, comb, x / scale_a).unwrap();
        let fb = 1.0 - gain_cdf(&b, n_b, comb, x).unwrap();
        prop_assert!((joint - fa * fb).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&joint));
    }

    #[test]
    fn threshold_relations(
        a2 in 0.001f64..0.499,
        rho in 0.01f64..1e6,
        rate in 0.1f64..3.0,
    ) {
        let th = thresholds(a2, rho, rate).unwrap();
        prop_assert_eq!(th.theta, (2.0 * rate).exp2() - 1.0);
        prop_assert_eq!(th.feasible, a2 < 1.0 / (1.0 + th.theta));
        prop_assert!((th.delta3 - th.theta / rho).abs() <= 1e-15 * th.delta3.abs());
        if th.feasible {
            let d1 = th.delta1.unwrap();
            let d2 = th.delta2.unwrap();
            prop_assert!(d2 >= d1);
            prop_assert!((d2 - d1.max(th.theta / (a2 * rho))).abs() <= 1e-12 * d2);
        } else {
            prop_assert!(th.delta1.is_none() && th.delta2.is_none());
        }
    }

    #[test]
    fn single_antenna_combiners_agree(
        m in 1u32..=4,
        omega in 0.5f64..20.0,
        x in 0.0f64..30.0,
    ) {
        let l = LinkSpec::new(m, omega).unwrap();
        let sc = gain_cdf(&l, 1, CombinerKind::Sc, x).unwrap();
        let mrc = gain_cdf(&l, 1, CombinerKind::Mrc, x).unwrap();
        prop_assert_eq!(sc, mrc);
    }
}
