//! Leaked information `I(S; Z^n)` of the linear hash `S = X^n M^T` with a
//! uniform source, and the erasure-decoding error probability of the code
//! generated by `M`.
//!
//! Erasure side information: given an erased set `J`, `S` is uniform on a
//! coset of the span of the columns `M_J`, so `H(S | z^n) = rank(M_J) ln 2`
//! and
//!
//! ```text
//! I(M) = ln 2 * E_J[ rank(M) - rank(M_J) ]
//! ```
//!
//! Symmetric side information: `I(M) = rank(M) ln 2 - H(V M^T)`, see
//! [`syndrome_entropy`].

mod brute;
mod profile;
mod syndrome;

use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{check_probability, Error, Result};
use crate::gf2::{BinMatrix, XorBasis};

pub use brute::{brute_force_leakage, BRUTE_MAX_N_BINARY, BRUTE_MAX_N_TERNARY};
pub use profile::{RankProfile, MAX_EXACT_N};
pub use syndrome::syndrome_entropy;

/// Slack below which the leakage bound counts as violated.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnumeration,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub leakage_nats: f64,
    /// `H(S) = rank(M) ln 2`.
    pub hash_entropy_nats: f64,
    /// `n * P_ML(C, 1 - eps)`; erasure channel only.
    pub bound_nats: Option<f64>,
    pub slack_nats: Option<f64>,
    pub method: Method,
    pub samples: u64,
    pub ci_halfwidth: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PmlResult {
    pub value: f64,
    pub method: Method,
    pub ci_halfwidth: f64,
    pub samples: u64,
}

/// Exact leakage with BEC(eps) side information, together with the
/// decoding-error bound `n * P_ML(C, 1 - eps)`.
pub fn exact_leakage_bec(m: &BinMatrix, eps: f64) -> Result<LeakageReport> {
    check_probability("eps", eps)?;
    let profile = RankProfile::new(m)?;
    Ok(bec_report(&profile, eps))
}

fn bec_report(profile: &RankProfile, eps: f64) -> LeakageReport {
    let leakage = LN_2 * profile.expected_deficit(eps);
    let bound = profile.n() as f64 * pml_from_profile(profile, 1.0 - eps);
    LeakageReport {
        leakage_nats: leakage,
        hash_entropy_nats: profile.rank() as f64 * LN_2,
        bound_nats: Some(bound),
        slack_nats: Some(bound - leakage),
        method: Method::ExactEnumeration,
        samples: 0,
        ci_halfwidth: 0.0,
    }
}

/// Exact leakage with BSC(eps) side information.
pub fn exact_leakage_bsc(m: &BinMatrix, eps: f64) -> Result<LeakageReport> {
    check_probability("eps", eps)?;
    let hash_entropy = m.rank() as f64 * LN_2;
    let leakage = (hash_entropy - syndrome_entropy(m, eps)?).max(0.0);
    Ok(LeakageReport {
        leakage_nats: leakage,
        hash_entropy_nats: hash_entropy,
        bound_nats: None,
        slack_nats: None,
        method: Method::ExactEnumeration,
        samples: 0,
        ci_halfwidth: 0.0,
    })
}

pub fn exact_leakage(m: &BinMatrix, channel: Channel) -> Result<LeakageReport> {
    match channel {
        Channel::Bec(eps) => exact_leakage_bec(m, eps),
        Channel::Bsc(eps) => exact_leakage_bsc(m, eps),
    }
}

/// ML decoding error probability of the code generated by `m` over
/// BEC(delta), by enumeration of all erasure patterns. Rank deficiency of the
/// unerased columns (several compatible messages) counts as an error.
pub fn p_ml_erasure(m: &BinMatrix, delta: f64) -> Result<PmlResult> {
    check_probability("delta", delta)?;
    let profile = RankProfile::new(m)?;
    Ok(PmlResult {
        value: pml_from_profile(&profile, delta),
        method: Method::ExactEnumeration,
        ci_halfwidth: 0.0,
        samples: 0,
    })
}

// A column survives with probability 1 - delta.
fn pml_from_profile(profile: &RankProfile, delta: f64) -> f64 {
    profile.short_probability(1.0 - delta).min(1.0)
}

/// Monte Carlo estimate of [`p_ml_erasure`] with a normal-approximation 95%
/// confidence half-width. Works for any `n`; `k` is limited to 64.
pub fn mc_p_ml_erasure(m: &BinMatrix, delta: f64, samples: u64, seed: u64) -> Result<PmlResult> {
    check_probability("delta", delta)?;
    if samples == 0 {
        return Err(Error::Degenerate("samples must be at least 1".into()));
    }
    if m.rows() > 64 {
        return Err(Error::TooLarge {
            what: "row count k for Monte Carlo decoding",
            value: m.rows(),
            limit: 64,
        });
    }
    let columns: Vec<u64> = (0..m.cols()).map(|c| m.column_mask(c)).collect();
    let k = m.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errors = 0u64;
    for _ in 0..samples {
        let mut basis = XorBasis::new();
        for &col in &columns {
            let erased: f64 = rng.gen();
            if erased >= delta {
                basis.insert(col);
            }
        }
        if basis.rank() < k {
            errors += 1;
        }
    }
    let p = errors as f64 / samples as f64;
    Ok(PmlResult {
        value: p,
        method: Method::MonteCarlo,
        ci_halfwidth: 1.96 * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
    })
}

/// Exact leakage and its decoding-error bound over BEC(eps); fails with
/// [`Error::Invariant`] if the bound is violated by more than
/// [`BOUND_TOLERANCE`].
pub fn verify_theorem1(m: &BinMatrix, eps: f64) -> Result<LeakageReport> {
    let report = exact_leakage_bec(m, eps)?;
    let slack = report.slack_nats.unwrap_or(0.0);
    if slack < -BOUND_TOLERANCE {
        return Err(Error::Invariant(format!(
            "leakage {} exceeds n*P_ML = {} (slack {slack})",
            report.leakage_nats,
            report.bound_nats.unwrap_or(f64::NAN)
        )));
    }
    Ok(report)
}

/// Seed of the `trial`-th matrix drawn from a search seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Draws `trials` random `k x n` matrices and keeps the full-rank one
/// leaking least over `channel`. Ties go to the earliest trial.
///
/// Rank-deficient draws are skipped: their key is not uniform on `k` bits,
/// and the zero matrix would trivially leak nothing.
pub fn best_matrix_search(
    k: usize,
    n: usize,
    channel: Channel,
    trials: u64,
    seed: u64,
) -> Result<(BinMatrix, LeakageReport)> {
    if trials == 0 {
        return Err(Error::Degenerate("trials must be at least 1".into()));
    }
    if k > n {
        return Err(Error::RowsExceedColumns { k, n });
    }
    profile::check_exact_size(n)?;
    check_probability("eps", channel.eps())?;

    let candidates: Vec<Option<(BinMatrix, LeakageReport)>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let m = BinMatrix::random(k, n, trial_seed(seed, t))?;
            if m.rank() < k {
                return Ok(None);
            }
            let report = exact_leakage(&m, channel)?;
            Ok(Some((m, report)))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(BinMatrix, LeakageReport)> = None;
    for (m, r) in candidates.into_iter().flatten() {
        if best
            .as_ref()
            .is_none_or(|(_, b)| r.leakage_nats < b.leakage_nats)
        {
            best = Some((m, r));
        }
    }
    best.ok_or_else(|| {
        Error::Degenerate(format!(
            "none of {trials} random {k}x{n} matrices has full rank"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_bit_closed_forms() {
        let m = BinMatrix::from_rows(&[[1]]);
        for eps in [0.0, 0.3, 0.5, 1.0] {
            let r = exact_leakage_bec(&m, eps).unwrap();
            assert_abs_diff_eq!(r.leakage_nats, (1.0 - eps) * LN_2, epsilon = 1e-15);
            assert_abs_diff_eq!(r.hash_entropy_nats, LN_2);
        }
        let e: f64 = 0.11;
        let h = -e * e.ln() - (1.0 - e) * (1.0 - e).ln();
        assert_abs_diff_eq!(
            exact_leakage_bsc(&m, e).unwrap().leakage_nats,
            LN_2 - h,
            epsilon = 1e-15
        );
    }

    #[test]
    fn zero_matrix_leaks_nothing() {
        let m = BinMatrix::zeros(1, 3);
        assert_eq!(exact_leakage_bec(&m, 0.4).unwrap().leakage_nats, 0.0);
        assert_eq!(exact_leakage_bsc(&m, 0.4).unwrap().leakage_nats, 0.0);
        let r = verify_theorem1(&m, 0.4).unwrap();
        assert!(r.bound_nats.unwrap() >= r.leakage_nats);
    }

    #[test]
    fn pml_closed_forms() {
        for d in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let one = p_ml_erasure(&BinMatrix::from_rows(&[[1]]), d).unwrap();
            assert_abs_diff_eq!(one.value, d, epsilon = 1e-15);
            let parity = p_ml_erasure(&BinMatrix::from_rows(&[[1, 1]]), d).unwrap();
            assert_abs_diff_eq!(parity.value, d * d, epsilon = 1e-15);
            let id = p_ml_erasure(&BinMatrix::identity(2), d).unwrap();
            assert_abs_diff_eq!(id.value, 1.0 - (1.0 - d) * (1.0 - d), epsilon = 1e-15);
            assert_eq!((id.samples, id.ci_halfwidth), (0, 0.0));
        }
    }

    #[test]
    fn pml_at_channel_extremes() {
        for seed in 0..20 {
            let m = BinMatrix::random(3, 7, seed).unwrap();
            let full = m.rank() == 3;
            assert_eq!(
                p_ml_erasure(&m, 0.0).unwrap().value,
                if full { 0.0 } else { 1.0 }
            );
            assert_eq!(p_ml_erasure(&m, 1.0).unwrap().value, 1.0);
        }
        // no message bits, nothing to get wrong
        assert_eq!(
            p_ml_erasure(&BinMatrix::zeros(0, 4), 0.7).unwrap().value,
            0.0
        );
    }

    #[test]
    fn leakage_bound_single_bit() {
        let r = verify_theorem1(&BinMatrix::from_rows(&[[1]]), 0.5).unwrap();
        assert_abs_diff_eq!(r.leakage_nats, 0.346574, epsilon = 1e-6);
        assert_abs_diff_eq!(r.bound_nats.unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.slack_nats.unwrap(), 0.5 - 0.5 * LN_2, epsilon = 1e-15);
    }

    #[test]
    fn parameter_validation() {
        let m = BinMatrix::identity(2);
        assert!(exact_leakage_bec(&m, 1.5).is_err());
        assert!(exact_leakage_bsc(&m, -0.5).is_err());
        assert!(p_ml_erasure(&m, 2.0).is_err());
        assert!(mc_p_ml_erasure(&m, 0.5, 0, 1).is_err());
        let big = BinMatrix::zeros(1, MAX_EXACT_N + 1);
        assert!(matches!(
            exact_leakage_bec(&big, 0.5),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            exact_leakage_bsc(&big, 0.5),
            Err(Error::TooLarge { .. })
        ));
        assert!(best_matrix_search(2, 4, Channel::Bec(0.5), 0, 1).is_err());
    }

    #[test]
    fn monte_carlo_bernoulli_mean() {
        let m = BinMatrix::from_rows(&[[1]]);
        let r = mc_p_ml_erasure(&m, 0.3, 1_000_000, 7).unwrap();
        assert_eq!(r.method, Method::MonteCarlo);
        assert!((r.value - 0.3).abs() <= r.ci_halfwidth, "{r:?}");
        assert_eq!(r, mc_p_ml_erasure(&m, 0.3, 1_000_000, 7).unwrap());
    }

    #[test]
    fn monte_carlo_tracks_exact_enumeration() {
        let m = BinMatrix::random(8, 16, 11).unwrap();
        let exact = p_ml_erasure(&m, 0.5).unwrap().value;
        let mc = mc_p_ml_erasure(&m, 0.5, 200_000, 3).unwrap();
        assert!(
            (mc.value - exact).abs() <= 3.0 * mc.ci_halfwidth,
            "mc {mc:?} exact {exact}"
        );
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| trial_seed(5, t)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn search_with_one_trial_is_first_draw() {
        let (m, r) = best_matrix_search(3, 8, Channel::Bsc(0.2), 1, 42).unwrap();
        let expected = BinMatrix::random(3, 8, trial_seed(42, 0)).unwrap();
        assert_eq!(m, expected);
        assert_eq!(r, exact_leakage_bsc(&expected, 0.2).unwrap());
    }

    #[test]
    fn search_skips_rank_deficient_draws() {
        for seed in 0..50 {
            let (m, _) = best_matrix_search(4, 5, Channel::Bsc(0.1), 3, seed).unwrap();
            assert_eq!(m.rank(), 4);
        }
        // one trial that happens to be deficient has nothing to return
        let seed = (0..1000)
            .find(|&s| BinMatrix::random(3, 3, trial_seed(s, 0)).unwrap().rank() < 3)
            .unwrap();
        assert!(matches!(
            best_matrix_search(3, 3, Channel::Bec(0.5), 1, seed),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn search_finds_all_ones_row() {
        // Over BEC(eps) a single nonzero row of weight w leaks (1-eps)^w ln 2,
        // so the all-ones row is the unique minimizer among the 15 candidates.
        let eps: f64 = 0.5;
        let mut by_row: Vec<(u64, f64)> = (1u64..16)
            .map(|bits| {
                let row: Vec<u8> = (0..4).map(|i| ((bits >> i) & 1) as u8).collect();
                let m = BinMatrix::from_rows(&[row]);
                (bits, exact_leakage_bec(&m, eps).unwrap().leakage_nats)
            })
            .collect();
        by_row.sort_by(|a, b| a.1.total_cmp(&b.1));
        assert_eq!(by_row[0].0, 0b1111);
        assert_abs_diff_eq!(by_row[0].1, eps.powi(4) * LN_2, epsilon = 1e-15);

        let (m, r) = best_matrix_search(1, 4, Channel::Bec(eps), 64, 1).unwrap();
        assert_eq!(m, BinMatrix::from_rows(&[[1, 1, 1, 1]]));
        assert_abs_diff_eq!(r.leakage_nats, eps.powi(4) * LN_2, epsilon = 1e-15);
    }

    #[test]
    fn search_is_monotone_in_trials() {
        for seed in 0..5 {
            let one = best_matrix_search(3, 9, Channel::Bec(0.4), 1, seed)
                .unwrap()
                .1;
            let many = best_matrix_search(3, 9, Channel::Bec(0.4), 64, seed)
                .unwrap()
                .1;
            assert!(many.leakage_nats <= one.leakage_nats);
        }
    }

    #[test]
    fn report_json_keys() {
        let r = exact_leakage_bec(&BinMatrix::from_rows(&[[1]]), 0.5).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in [
            "leakage_nats",
            "hash_entropy_nats",
            "bound_nats",
            "slack_nats",
            "method",
            "samples",
            "ci_halfwidth",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["method"], "exact-enumeration");
        let b = exact_leakage_bsc(&BinMatrix::from_rows(&[[1]]), 0.5).unwrap();
        assert!(serde_json::to_value(&b).unwrap()["bound_nats"].is_null());
    }
}
