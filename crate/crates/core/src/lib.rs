//! Leaked information of privacy amplification with linear hashes.
//!
//! A uniform binary string `X^n` is compressed to a key `S = X^n M^T` by a
//! `k x n` binary matrix `M`, while an eavesdropper observes `X^n` through a
//! binary erasure or binary symmetric channel. This crate computes
//!
//! * the exact leaked information `I(S; Z^n)` in nats ([`leakage`]), with a
//!   brute-force reference implementation for small instances;
//! * the maximum-likelihood erasure-decoding error probability of the code
//!   generated by `M`, which bounds the leakage as `I(M) <= n P_ML`;
//! * the random-coding and expurgation exponents of the leakage, the critical
//!   and expurgation rates, and exponent curves as CSV ([`exponent`],
//!   [`curve`]).
//!
//! ```
//! use leakexp::{exact_leakage_bec, BinMatrix};
//!
//! let m: BinMatrix = "1 2\n11\n".parse().unwrap();
//! let report = exact_leakage_bec(&m, 0.4).unwrap();
//! assert!((report.leakage_nats - 0.36 * std::f64::consts::LN_2).abs() < 1e-12);
//! ```

pub mod channel;
pub mod curve;
pub mod error;
pub mod exponent;
pub mod format;
pub mod gf2;
pub mod leakage;
pub mod optimize;

pub use channel::{bec_joint, bsc_joint, less_noisy_erasure_param, Channel, JointSource, ZSymbol};
pub use curve::{curve, CurveKind, CurvePoint, CurveTable, RateGrid};
pub use error::{Error, Result};
pub use exponent::{
    critical_rate, critical_rate_bec, e_r, e_r_bec_closed, e_r_bsc_closed, e_x_bec,
    e_x_bsc_reduction, e_x_dual, e_x_min_form, expurgation_rate, lagrangian, psi, Form, OptResult,
};
pub use gf2::{BinMatrix, IndexSet};
pub use leakage::{
    best_matrix_search, brute_force_leakage, exact_leakage, exact_leakage_bec, exact_leakage_bsc,
    mc_p_ml_erasure, p_ml_erasure, trial_seed, verify_theorem1, LeakageReport, Method, PmlResult,
    RankProfile,
};
