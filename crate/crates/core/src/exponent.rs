//! Exponents of the leaked information as functions of the key rate `R`
//! (nats per source symbol).
//!
//! * `psi(θ) = -ln Σ P_XZ(x,z)^{1+θ} P_Z(z)^{-θ}` and the random-coding
//!   exponent `E_r(R) = max_{0≤θ≤1} [psi(θ) - θR]`, valid for any universal-2
//!   family.
//! * The expurgation exponent of BEC(δ),
//!   `E_x(R, δ) = max_{θ≥1} θ [ln 2 - R - ln(1 + δ^{1/θ})]`, which bounds the
//!   leakage of good linear hashes when the eavesdropper sees X through
//!   BEC(1 - δ). Its equivalent minimum over `p = P_W(1)` and its Lagrangian
//!   dual are provided as independent routes to the same number.
//! * For BSC(ε) side information the erasure result applies through the less
//!   noisy BEC(4ε(1-ε)).
//!
//! Values are raw: negative results mean the bound is vacuous and are not
//! clamped here.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{less_noisy_erasure_param, JointSource};
use crate::error::{check_probability, Error, Result};
use crate::optimize::{golden_max, golden_min, DEFAULT_TOLERANCE};

/// Smallest `u = 1/θ` searched for the expurgation exponent.
pub const U_FLOOR: f64 = 1e-9;

// Upper end of the search over ln(1 + λ) for the dual problem; θ ≤ e^21.
const LOG_THETA_MAX: f64 = 21.0;

const ENTROPY_BISECTION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    /// Maximum over θ attained at `theta_star`.
    MaxTheta,
    /// Minimum over `p` attained at `p_star`.
    MinP,
    /// Supremum approached as θ → ∞ but not attained.
    ClosedLimit,
}

/// Optimal value of an exponent optimization and where it was attained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub value: f64,
    /// Optimal θ (λ = θ - 1 for the dual). Infinite for [`Form::ClosedLimit`],
    /// absent for [`Form::MinP`].
    pub theta_star: Option<f64>,
    /// Optimal `p = P_W(1)` for [`Form::MinP`].
    pub p_star: Option<f64>,
    pub form: Form,
}

impl OptResult {
    fn at_theta(value: f64, theta: f64) -> Self {
        Self {
            value,
            theta_star: Some(theta),
            p_star: None,
            form: Form::MaxTheta,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.form == Form::ClosedLimit
    }
}

/// Binary entropy in nats.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// `psi(θ; X|Z)`; zero-probability cells contribute nothing. The sum is
/// divided by the table total so that `psi(0)` is exactly 0.
pub fn psi(theta: f64, src: &JointSource) -> f64 {
    let (mut sum, mut total) = (0.0, 0.0);
    for z in 0..src.z_size() {
        let pz = src.p_z(z);
        for x in 0..2 {
            let p = src.prob(x, z);
            if p > 0.0 {
                sum += p * (theta * (p / pz).ln()).exp();
                total += p;
            }
        }
    }
    -(sum / total).ln()
}

/// `d psi / dθ`, from the same table sum.
pub fn psi_derivative(theta: f64, src: &JointSource) -> f64 {
    let (mut a, mut da) = (0.0, 0.0);
    for z in 0..src.z_size() {
        let pz = src.p_z(z);
        for x in 0..2 {
            let p = src.prob(x, z);
            if p > 0.0 {
                let log_cond = (p / pz).ln();
                let term = p * (theta * log_cond).exp();
                a += term;
                da += term * log_cond;
            }
        }
    }
    -da / a
}

fn check_rate(rate: f64) -> Result<()> {
    if rate >= 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::Rate {
            rate,
            max: f64::INFINITY,
        })
    }
}

fn maximize_theta_unit<F: Fn(f64) -> f64>(objective: F) -> OptResult {
    let m = golden_max(objective, 0.0, 1.0, DEFAULT_TOLERANCE);
    OptResult::at_theta(m.value, m.arg)
}

/// Random-coding exponent `max_{0≤θ≤1} [psi(θ) - θR]` for any source.
pub fn e_r(rate: f64, src: &JointSource) -> Result<OptResult> {
    check_rate(rate)?;
    Ok(maximize_theta_unit(|t| psi(t, src) - t * rate))
}

/// [`e_r`] for BEC(eps) side information:
/// `max_{0≤θ≤1} [-ln((1-eps) + eps 2^{-θ}) - θR]`.
pub fn e_r_bec_closed(rate: f64, eps: f64) -> Result<OptResult> {
    check_rate(rate)?;
    check_probability("eps", eps)?;
    let total = (1.0 - eps) + eps;
    Ok(maximize_theta_unit(|t| {
        -(((1.0 - eps) + eps * (-t * LN_2).exp()) / total).ln() - t * rate
    }))
}

/// [`e_r`] for BSC(eps) side information:
/// `max_{0≤θ≤1} [-ln((1-eps)^{1+θ} + eps^{1+θ}) - θR]`.
pub fn e_r_bsc_closed(rate: f64, eps: f64) -> Result<OptResult> {
    check_rate(rate)?;
    check_probability("eps", eps)?;
    let total = (1.0 - eps) + eps;
    Ok(maximize_theta_unit(|t| {
        -(((1.0 - eps).powf(1.0 + t) + eps.powf(1.0 + t)) / total).ln() - t * rate
    }))
}

fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    check_probability(name, value)?;
    if value == 0.0 || value == 1.0 {
        return Err(Error::Degenerate(format!(
            "{name} = {value} must lie strictly inside (0, 1)"
        )));
    }
    Ok(())
}

/// Objective of [`e_x_bec`] in `u = 1/θ`.
fn expurgated_in_u(u: f64, rate: f64, delta: f64) -> f64 {
    (LN_2 - rate - delta.powf(u).ln_1p()) / u
}

/// Expurgation exponent `max_{θ≥1} θ [ln 2 - R - ln(1 + δ^{1/θ})]` of
/// BEC(δ), searched over `u = 1/θ ∈ [1e-9, 1]`.
///
/// At `R = 0` the supremum `-ln(δ)/2` is only reached as θ → ∞ and is
/// returned as [`Form::ClosedLimit`].
pub fn e_x_bec(rate: f64, delta: f64) -> Result<OptResult> {
    check_rate(rate)?;
    check_open_unit("delta", delta)?;
    if rate == 0.0 {
        return Ok(OptResult {
            value: -0.5 * delta.ln(),
            theta_star: Some(f64::INFINITY),
            p_star: None,
            form: Form::ClosedLimit,
        });
    }
    let m = golden_max(
        |u| expurgated_in_u(u, rate, delta),
        U_FLOOR,
        1.0,
        DEFAULT_TOLERANCE,
    );
    Ok(OptResult::at_theta(m.value, 1.0 / m.arg))
}

/// The same exponent as [`e_x_bec`], written as
/// `min { -p ln δ + (ln 2 - R) - h(p) : p ∈ [0, 1/2], h(p) ≥ ln 2 - R }`.
pub fn e_x_min_form(rate: f64, delta: f64) -> Result<OptResult> {
    check_rate(rate)?;
    check_open_unit("delta", delta)?;
    if rate > LN_2 {
        return Err(Error::Rate { rate, max: LN_2 });
    }
    let slack = LN_2 - rate;
    let p_lo = entropy_boundary(slack);
    let m = golden_min(
        |p| -p * delta.ln() + slack - binary_entropy(p),
        p_lo,
        0.5,
        DEFAULT_TOLERANCE,
    );
    Ok(OptResult {
        value: m.value,
        theta_star: None,
        p_star: Some(m.arg),
        form: Form::MinP,
    })
}

/// Smallest `p ∈ [0, 1/2]` with `h(p) ≥ target`, by bisection.
fn entropy_boundary(target: f64) -> f64 {
    if target <= 0.0 {
        return 0.0;
    }
    if target >= LN_2 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > ENTROPY_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `L(λ) = min_p [-p ln δ + (1+λ)(ln 2 - R - h(p))]`, the dual function of
/// [`e_x_min_form`]. The inner minimum sits at
/// `p = δ^{1/(1+λ)} / (1 + δ^{1/(1+λ)})`.
///
/// # Panics
///
/// Panics if `lambda` is negative.
pub fn lagrangian(lambda: f64, rate: f64, delta: f64) -> f64 {
    assert!(
        lambda >= 0.0,
        "multiplier must be non-negative, got {lambda}"
    );
    let theta = 1.0 + lambda;
    let w = delta.powf(1.0 / theta);
    let p = w / (1.0 + w);
    -p * delta.ln() + theta * (LN_2 - rate - binary_entropy(p))
}

/// `max_{λ≥0} L(λ)`, searched over `ln(1+λ)`. Reported with
/// `theta_star = 1 + λ*`.
pub fn e_x_dual(rate: f64, delta: f64) -> Result<OptResult> {
    check_rate(rate)?;
    check_open_unit("delta", delta)?;
    let m = golden_max(
        |s| lagrangian(s.exp_m1(), rate, delta),
        0.0,
        LOG_THETA_MAX,
        DEFAULT_TOLERANCE,
    );
    Ok(OptResult::at_theta(m.value, m.arg.exp()))
}

/// Exponent for BSC(eps) side information obtained through the less noisy
/// BEC(4 eps (1-eps)): `E_x(R, 1 - 4 eps (1-eps))`.
pub fn e_x_bsc_reduction(rate: f64, eps: f64) -> Result<OptResult> {
    check_bsc_interior(eps)?;
    e_x_bec(rate, 1.0 - less_noisy_erasure_param(eps)?)
}

fn check_bsc_interior(eps: f64) -> Result<()> {
    check_probability("eps", eps)?;
    if eps <= 0.0 || eps >= 0.5 {
        return Err(Error::Degenerate(format!(
            "crossover probability {eps} must lie strictly inside (0, 1/2)"
        )));
    }
    Ok(())
}

/// Critical rate of BSC(eps): the largest `R` at which the optimum of
/// [`e_r_bsc_closed`] is `θ = 1`, i.e. `psi'(1)`.
pub fn critical_rate(eps: f64) -> Result<f64> {
    check_bsc_interior(eps)?;
    let a = (1.0 - eps) * (1.0 - eps);
    let b = eps * eps;
    Ok(-(a * (1.0 - eps).ln() + b * eps.ln()) / (a + b))
}

/// Critical rate of BEC(eps) side information, `psi'(1) = eps ln 2 / (2 - eps)`.
pub fn critical_rate_bec(eps: f64) -> Result<f64> {
    check_open_unit("eps", eps)?;
    Ok(eps * LN_2 / (2.0 - eps))
}

/// Expurgation rate of BEC(δ): the smallest `R` at which the optimum of
/// [`e_x_bec`] is `θ = 1`,
/// `R_x = ln 2 - ln(1+δ) + δ ln δ / (1+δ)`.
pub fn expurgation_rate(delta: f64) -> Result<f64> {
    check_open_unit("delta", delta)?;
    Ok(LN_2 - delta.ln_1p() + delta * delta.ln() / (1.0 + delta))
}
