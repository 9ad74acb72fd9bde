//! Weak-composition enumeration, exact multinomial coefficients, and the
//! assembled per-term constants of the finite CCDF expansions used by the
//! closed-form rate engine.

use crate::channel::LinkSpec;
use crate::error::{Error, Result};
use crate::specfun::factorial;

/// Every length-`parts` vector of non-negative integers summing to `n`, in
/// lexicographic order. With `exclude_first_full` the vector
/// (n, 0, ..., 0) is omitted. Total count is C(n + parts - 1, parts - 1),
/// minus one if excluded.
pub fn weak_compositions(n: u32, parts: u32, exclude_first_full: bool) -> Vec<Vec<u32>> {
    assert!(parts >= 1, "weak_compositions requires parts >= 1");
    let mut out = Vec::new();
    let mut scratch = vec![0u32; parts as usize];
    fill(n, 0, &mut scratch, &mut out);
    if exclude_first_full {
        // (n, 0, ..., 0) is the unique vector with first component n
        out.retain(|v| v[0] != n);
    }
    out
}

fn fill(remaining: u32, idx: usize, scratch: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if idx + 1 == scratch.len() {
        scratch[idx] = remaining;
        out.push(scratch.clone());
        return;
    }
    for first in 0..=remaining {
        scratch[idx] = first;
        fill(remaining - first, idx + 1, scratch, out);
    }
}

/// Exact multinomial coefficient n! / (k_0! k_1! ... k_m!), computed as a
/// product of binomials with overflow checking.
pub fn multinomial(n: u32, ks: &[u32]) -> Result<u64> {
    let sum: u64 = ks.iter().map(|&k| k as u64).sum();
    if sum != n as u64 {
        return Err(Error::domain(format!(
            "multinomial contract violated: sum(ks) = {sum} != n = {n}"
        )));
    }
    let mut acc: u128 = 1;
    let mut total: u32 = 0;
    for &k in ks {
        total += k;
        acc = acc
            .checked_mul(binomial_u128(total, k)?)
            .ok_or_else(|| Error::domain(format!("multinomial({n}, {ks:?}) overflows")))?;
    }
    u64::try_from(acc)
        .map_err(|_| Error::domain(format!("multinomial({n}, {ks:?}) exceeds u64")))
}

fn binomial_u128(n: u32, k: u32) -> Result<u128> {
    let k = k.min(n - k.min(n));
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        // multiply first, then divide: the intermediate is always divisible
        c = c
            .checked_mul((n as u128) - k as u128 + i)
            .ok_or_else(|| Error::domain(format!("binomial({n}, {k}) overflows")))?
            / i;
    }
    Ok(c)
}

/// One term of the per-link CCDF expansion
/// 1 - F(x) = sum_t coeff_t * (m/(scale*Omega))^exponent_t * x^exponent_t
///            * exp(-decay_t * x).
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionTerm {
    /// Composition vector (k_0, ..., k_m), summing to the antenna count,
    /// with k_0 != N.
    pub ks: Vec<u32>,
    /// Signed scalar: multinomial coefficient, the sign making the sum
    /// reproduce the CCDF directly, and the product of reciprocal
    /// factorials.
    pub coeff: f64,
    /// Polynomial order tau = sum_mu mu * k_{mu+1}; at most (m-1) * N.
    pub exponent: u32,
    /// Exponential rate (N - k_0) * m / (scale * Omega); strictly positive.
    pub decay: f64,
}

/// All terms of the CCDF expansion of the selection-combined gain of
/// `n_antennas` i.i.d. branches on `link`, with the gain scaled by
/// `gain_scale` (1 for unscaled links). The reconstructed sum equals
/// 1 - [P(m, m x / (scale * Omega))]^N pointwise.
pub fn expansion_terms(
    link: &LinkSpec,
    n_antennas: u32,
    gain_scale: f64,
) -> Result<Vec<CompositionTerm>> {
    if !(gain_scale > 0.0) {
        return Err(Error::domain(format!(
            "expansion_terms requires gain_scale > 0, got {gain_scale}"
        )));
    }
    if n_antennas == 0 {
        return Err(Error::domain("expansion_terms requires n_antennas >= 1"));
    }
    let m = link.m;
    let n = n_antennas;
    let rate = m as f64 / (gain_scale * link.omega);
    let mut out = Vec::new();
    for ks in weak_compositions(n, m + 1, true) {
        let mult = multinomial(n, &ks)? as f64;
        let sign = if (n - ks[0]) % 2 == 0 { -1.0 } else { 1.0 };
        let mut recip_fact = 1.0;
        let mut tau = 0u32;
        for mu in 0..m {
            let k = ks[(mu + 1) as usize];
            recip_fact *= (1.0 / factorial(mu)).powi(k as i32);
            tau += mu * k;
        }
        out.push(CompositionTerm {
            decay: (n - ks[0]) as f64 * rate,
            coeff: sign * mult * recip_fact,
            exponent: tau,
            ks,
        });
    }
    Ok(out)
}

/// Evaluate the expansion sum at `x` given the per-link unit rate
/// m / (scale * Omega).
pub fn ccdf_from_terms(terms: &[CompositionTerm], unit_rate: f64, x: f64) -> f64 {
    terms
        .iter()
        .map(|t| t.coeff * (unit_rate * x).powi(t.exponent as i32) * (-t.decay * x).exp())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::LinkSpec;
    use crate::specfun::reg_lower_gamma;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn binom(n: u32, k: u32) -> usize {
        binomial_u128(n, k).unwrap() as usize
    }

    #[test]
    fn compositions_counts_and_order() {
        let v = weak_compositions(2, 3, false);
        assert_eq!(v.len(), 6); // C(4, 2)
        assert!(v.windows(2).all(|w| w[0] < w[1]), "not lexicographic");

        assert_eq!(weak_compositions(1, 2, false), vec![vec![0, 1], vec![1, 0]]);

        let v = weak_compositions(2, 3, true);
        assert_eq!(v.len(), 5);
        assert!(!v.contains(&vec![2, 0, 0]));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(2, &[1, 1, 0]).unwrap(), 2);
        assert_eq!(multinomial(4, &[2, 1, 1]).unwrap(), 12);
        assert_eq!(multinomial(7, &[7, 0, 0]).unwrap(), 1);
        assert!(multinomial(3, &[1, 1]).is_err());
    }

    #[test]
    fn expansion_term_count_formula() {
        for m in 1u32..=3 {
            for n in 1u32..=4 {
                let link = LinkSpec::new(m, 1.0).unwrap();
                let terms = expansion_terms(&link, n, 1.0).unwrap();
                assert_eq!(terms.len(), binom(n + m, m) - 1, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn single_exponential_term() {
        let link = LinkSpec::new(1, 1.0).unwrap();
        let terms = expansion_terms(&link, 1, 1.0).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].coeff, 1.0);
        assert_eq!(terms[0].exponent, 0);
        assert_eq!(terms[0].decay, 1.0);
    }

    #[test]
    fn max_of_two_exponentials() {
        let link = LinkSpec::new(1, 1.0).unwrap();
        let terms = expansion_terms(&link, 2, 1.0).unwrap();
        for x in [0.1_f64, 0.5, 1.0, 3.0] {
            let want = 2.0 * (-x).exp() - (-2.0 * x).exp();
            assert_abs_diff_eq!(ccdf_from_terms(&terms, 1.0, x), want, epsilon = 1e-14);
        }
    }

    #[test]
    fn reconstruction_matches_direct_ccdf() {
        // the expansion algebra against the order-statistic CDF complement
        for m in 1u32..=3 {
            for n in 1u32..=4 {
                for &omega in &[1.0, 10.0] {
                    for &scale in &[1.0, 0.1] {
                        let link = LinkSpec::new(m, omega).unwrap();
                        let terms = expansion_terms(&link, n, scale).unwrap();
                        let rate = m as f64 / (scale * omega);
                        for &x in &[0.01, 0.1, 1.0, 10.0] {
                            let sum = ccdf_from_terms(&terms, rate, x);
                            let p = reg_lower_gamma(m as f64, rate * x).unwrap();
                            let direct = 1.0 - p.powi(n as i32);
                            assert_relative_eq!(
                                sum,
                                direct,
                                max_relative = 1e-10,
                                epsilon = 1e-12
                            );
                            assert!(sum >= -1e-12 && sum <= 1.0 + 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn derived_point_value() {
        // m=2, Omega=10, N=2 at x=5: 1 - P(2,1)^2
        let link = LinkSpec::new(2, 10.0).unwrap();
        let terms = expansion_terms(&link, 2, 1.0).unwrap();
        let got = ccdf_from_terms(&terms, 0.2, 5.0);
        let p21 = 1.0 - 2.0 * (-1.0_f64).exp();
        assert_relative_eq!(got, 1.0 - p21 * p21, max_relative = 1e-12);
    }

    #[test]
    fn invariants_on_terms() {
        let link = LinkSpec::new(3, 2.5).unwrap();
        for t in expansion_terms(&link, 4, 0.2).unwrap() {
            assert_eq!(t.ks.iter().sum::<u32>(), 4);
            assert_ne!(t.ks[0], 4);
            assert!(t.exponent <= (3 - 1) * 4);
            assert!(t.decay > 0.0);
        }
    }
}
