//! Closed-form results for the post-scheduling SINR.
//!
//! Single-user SINR distributions (all supported on `x >= 0`):
//!
//! ```text
//! F_scn(x) = 1 - exp(-x/rho)
//! F_scp(x) = 1 - exp(-x/rho) / (1 + beta^2 x)
//! F_zf(x)  = 1 - exp(-x/rho) / (1 + beta^2)
//! ```
//!
//! With `n` users and a scheduler that maximises the SINR itself, the
//! scheduled SINR has distribution `F^n`. Following the usual convention,
//! `F^y` with real `y > 0` is taken as the definition for fractional user
//! counts, which is what the numeric mean and rate integrals accept.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::model::{DistKind, SystemConfig};
use crate::quadrature;
use crate::specfun::{self, EULER_GAMMA};

/// Absolute error target of the tail-expectation quadrature.
const QUAD_ABS_TOL: f64 = 1e-10;
const QUAD_MAX_SEGMENTS: usize = 4000;

/// Location and scale of the affine normalisation `mu + nu * x` under which
/// the maximum converges to the Gumbel law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvtNormalizers {
    pub mu: f64,
    pub nu: f64,
}

/// Standard Gumbel distribution function `exp(-exp(-x))`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Mean of the standard Gumbel distribution.
pub const GUMBEL_MEAN: f64 = EULER_GAMMA;

/// `1 - F(x)`; equal to 1 for `x < 0`.
pub fn survival(kind: DistKind, x: f64, cfg: &SystemConfig) -> f64 {
    if x < 0.0 {
        return 1.0;
    }
    let decay = (-x / cfg.rho).exp();
    match kind {
        DistKind::Scn => decay,
        DistKind::Scp => decay / (1.0 + cfg.beta2() * x),
        DistKind::Zf => decay / (1.0 + cfg.beta2()),
    }
}

pub fn cdf(kind: DistKind, x: f64, cfg: &SystemConfig) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    match kind {
        DistKind::Scn => -(-x / cfg.rho).exp_m1(),
        _ => 1.0 - survival(kind, x, cfg),
    }
}

/// Density for `x > 0` (the ZF law also carries an atom of mass
/// `beta^2 / (1 + beta^2)` at zero, which is not included here).
pub fn pdf(kind: DistKind, x: f64, cfg: &SystemConfig) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let s = survival(kind, x, cfg);
    match kind {
        DistKind::Scn | DistKind::Zf => s / cfg.rho,
        DistKind::Scp => s * (1.0 / cfg.rho + cfg.beta2() / (1.0 + cfg.beta2() * x)),
    }
}

/// `F(x)^y` for real `y > 0`.
pub fn cdf_pow(kind: DistKind, x: f64, y: f64, cfg: &SystemConfig) -> Result<f64> {
    check_exponent("cdf_pow", y)?;
    Ok(cdf(kind, x, cfg).powf(y))
}

fn check_exponent(function: &'static str, y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, y, "y > 0 and finite"))
    }
}

/// `1 - F(x)^y` without cancellation in either tail.
fn complement_pow(kind: DistKind, x: f64, y: f64, cfg: &SystemConfig) -> f64 {
    let s = survival(kind, x, cfg);
    -(y * (-s).ln_1p()).exp_m1()
}

/// Generalised inverse `inf { x >= 0 : F(x) >= p }` for `0 <= p < 1`.
pub fn inv_cdf(kind: DistKind, p: f64, cfg: &SystemConfig) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain("inv_cdf", p, "0 <= p < 1"));
    }
    // -ln(1 - p)
    let log_tail = -(-p).ln_1p();
    Ok(quantile_from_log_tail(kind, log_tail, cfg))
}

/// `g(y) = F^{-1}(1 - 1/y)` evaluated from `ln y` directly, which keeps full
/// relative precision when `1/y` is far below machine epsilon.
fn quantile_from_log_tail(kind: DistKind, log_tail: f64, cfg: &SystemConfig) -> f64 {
    let rho = cfg.rho;
    match kind {
        DistKind::Scn => rho * log_tail,
        DistKind::Zf => (rho * (log_tail - cfg.beta2().ln_1p())).max(0.0),
        DistKind::Scp => scp_quantile(log_tail, cfg),
    }
}

/// Solves `x / rho + ln(1 + beta^2 x) = log_tail` for `x >= 0`.
///
/// Closed form `x = rho W(c e^{c + log_tail}) - 1/beta^2` with
/// `c = 1 / (beta^2 rho)`, followed by Newton polishing on the original
/// equation to remove the cancellation in the subtraction.
fn scp_quantile(log_tail: f64, cfg: &SystemConfig) -> f64 {
    let rho = cfg.rho;
    let b2 = cfg.beta2();
    if log_tail <= 0.0 {
        return 0.0;
    }
    if b2 == 0.0 {
        return rho * log_tail;
    }
    let c = 1.0 / (b2 * rho);
    let w = specfun::lambert_w0_exp(c.ln() + c + log_tail).expect("finite log-argument");
    let mut x = (rho * w - 1.0 / b2).max(0.0);
    for _ in 0..3 {
        let g = x / rho + (b2 * x).ln_1p() - log_tail;
        let dg = 1.0 / rho + b2 / (1.0 + b2 * x);
        let step = g / dg;
        x = (x - step).max(0.0);
        if step.abs() <= 1e-16 * x.max(1.0) {
            break;
        }
    }
    x
}

/// `rho H_n`.
pub fn mean_sinr_scn(n: u64, cfg: &SystemConfig) -> f64 {
    cfg.rho * specfun::harmonic(n as f64).expect("n >= 0")
}

/// `beta^2 / (1 + beta^2)`, the ZF probability mass at zero.
fn zf_atom(cfg: &SystemConfig) -> f64 {
    cfg.beta2() / (1.0 + cfg.beta2())
}

/// Mean SINR with zero-forcing and optimal scheduling:
/// `rho H_n - rho sum_{k=1}^{n} q^k / k` with `q = beta^2 / (1 + beta^2)`.
pub fn mean_sinr_zf(n: u64, cfg: &SystemConfig) -> f64 {
    let q = zf_atom(cfg);
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..=n {
        power *= q;
        if power == 0.0 {
            break;
        }
        sum += power / k as f64;
    }
    mean_sinr_scn(n, cfg) - cfg.rho * sum
}

/// `mean_sinr_zf(n) - (rho H_n - rho ln(1 + beta^2))`, i.e. the series tail
/// `rho sum_{k>n} q^k / k`, evaluated directly so it stays resolvable long
/// after the subtraction underflows to zero.
pub fn zf_lower_bound_gap(n: u64, cfg: &SystemConfig) -> f64 {
    let q = zf_atom(cfg);
    if q == 0.0 {
        return 0.0;
    }
    let mut power = q.powf(n as f64);
    let mut sum = 0.0;
    let mut k = n + 1;
    loop {
        power *= q;
        let term = power / k as f64;
        if term == 0.0 || term <= 1e-18 * sum {
            break;
        }
        sum += term;
        k += 1;
    }
    cfg.rho * sum
}

/// `rho H_n - rho ln(1 + beta^2)`.
pub fn zf_lower_bound(n: u64, cfg: &SystemConfig) -> f64 {
    mean_sinr_scn(n, cfg) - cfg.rho * cfg.beta2().ln_1p()
}

/// Mean SINR with zero-forcing when the largest local gain is scheduled:
/// `rho H_n - rho beta^2 (1 - n B(1 + 1/beta^2, n))`.
///
/// At `beta = 0` the beta-function argument diverges; the continuous limit
/// `rho H_n` is returned.
pub fn mean_sinr_zf2(n: u64, cfg: &SystemConfig) -> f64 {
    let b2 = cfg.beta2();
    let scn = mean_sinr_scn(n, cfg);
    if b2 == 0.0 || n == 0 {
        return scn;
    }
    let nf = n as f64;
    let ln_b = specfun::ln_beta(1.0 + 1.0 / b2, nf).expect("positive arguments");
    scn - cfg.rho * b2 * (1.0 - (nf.ln() + ln_b).exp())
}

/// `rho H_n - rho beta^2 n / (n + 1)`, the upper bound on [`mean_sinr_zf2`].
pub fn zf2_upper_bound(n: u64, cfg: &SystemConfig) -> f64 {
    let nf = n as f64;
    mean_sinr_scn(n, cfg) - cfg.rho * cfg.beta2() * nf / (nf + 1.0)
}

/// Upper bound `2 rho` on the mean SINR of the gain-ratio scheduler, valid
/// for every number of users.
pub fn bound_zf3(cfg: &SystemConfig) -> f64 {
    2.0 * cfg.rho
}

/// Exact mean SINR of the gain-ratio scheduler,
/// `2 rho [1 - (1 + beta^2)(1 - q^{n+1}) / (n + 1)]` with `q = beta^2 / (1 + beta^2)`.
///
/// The scheduled user's `|a|^2 + |b|^2` is Gamma(2) and independent of the
/// ratio, and `|b|^2 / (|a|^2 + |b|^2)` is the minimum of `n` uniforms.
pub fn mean_sinr_zf3(n: u64, cfg: &SystemConfig) -> f64 {
    let nf = n as f64;
    let q = zf_atom(cfg);
    2.0 * cfg.rho * (1.0 - (1.0 + cfg.beta2()) * (1.0 - q.powf(nf + 1.0)) / (nf + 1.0))
}

fn tail_integral<G: Fn(f64) -> f64>(kind: DistKind, y: f64, cfg: &SystemConfig, weight: G) -> Result<f64> {
    let rho = cfg.rho;
    // Every family satisfies 1 - F^y <= y exp(-x/rho), so the integral beyond
    // `cut` is below y rho exp(-cut/rho) < 1e-13.
    let log_y = y.ln().max(0.0);
    let cut = rho * ((y * rho).ln() + 30.0).max(30.0);
    let knee = rho * log_y;
    let mut breaks = vec![0.0, knee - 5.0 * rho, knee, knee + 5.0 * rho, cut];
    breaks.retain(|&b| (0.0..=cut).contains(&b));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let q = quadrature::integrate(
        |x| complement_pow(kind, x, y, cfg) * weight(x),
        &breaks,
        QUAD_ABS_TOL,
        1e-13,
        QUAD_MAX_SEGMENTS,
    )
    .map_err(|e| match e {
        Error::Numeric {
            estimated_error,
            evaluations,
            ..
        } => Error::Numeric {
            what: "tail-expectation quadrature",
            estimated_error,
            evaluations,
        },
        other => other,
    })?;
    Ok(q.value)
}

/// `E Gamma(y) = int_0^inf 1 - F(x)^y dx` for real `y > 0`.
pub fn mean_sinr_numeric(kind: DistKind, y: f64, cfg: &SystemConfig) -> Result<f64> {
    check_exponent("mean_sinr_numeric", y)?;
    tail_integral(kind, y, cfg, |_| 1.0)
}

/// Per-cell sum-rate `E log2(1 + Gamma(y))` in bits/s/Hz.
pub fn sum_rate_numeric(kind: DistKind, y: f64, cfg: &SystemConfig) -> Result<f64> {
    check_exponent("sum_rate_numeric", y)?;
    tail_integral(kind, y, cfg, |x| 1.0 / ((1.0 + x) * LN_2))
}

/// Normalising functions `mu(y) = g(y)`, `nu(y) = g(y e) - g(y)` with
/// `g(y) = F^{-1}(1 - 1/y)`.
///
/// SCN and ZF use their closed forms (for ZF the unclamped logarithmic
/// quantile). SCP uses the Lambert-W form and requires `beta > 0`.
pub fn evt_normalizers(kind: DistKind, y: f64, cfg: &SystemConfig) -> Result<EvtNormalizers> {
    if !(y > 1.0) || y.is_infinite() {
        return Err(Error::domain("evt_normalizers", y, "y > 1 and finite"));
    }
    let rho = cfg.rho;
    let log_y = y.ln();
    match kind {
        DistKind::Scn => Ok(EvtNormalizers {
            mu: rho * log_y,
            nu: rho,
        }),
        DistKind::Zf => Ok(EvtNormalizers {
            mu: rho * log_y - rho * cfg.beta2().ln_1p(),
            nu: rho,
        }),
        DistKind::Scp => {
            if cfg.beta == 0.0 {
                return Err(Error::domain(
                    "evt_normalizers(scp)",
                    cfg.beta,
                    "beta > 0 (use scn for beta = 0)",
                ));
            }
            let mu = scp_quantile(log_y, cfg);
            let mu_e = scp_quantile(log_y + 1.0, cfg);
            Ok(EvtNormalizers { mu, nu: mu_e - mu })
        }
    }
}

/// Gumbel approximation `mu(n) + gamma nu(n)` to the mean scheduled SINR.
pub fn gumbel_mean_approx(kind: DistKind, n: f64, cfg: &SystemConfig) -> Result<f64> {
    let EvtNormalizers { mu, nu } = evt_normalizers(kind, n, cfg)?;
    Ok(mu + GUMBEL_MEAN * nu)
}

/// Users per cell needed by `target` to match the single-cell network with
/// `n` users: `n (1 + beta^2)` for ZF, `n (1 + beta^2 rho ln n)` for SCP.
pub fn equivalent_users(target: DistKind, n: f64, cfg: &SystemConfig) -> Result<f64> {
    if !(n > 1.0) || n.is_infinite() {
        return Err(Error::domain("equivalent_users", n, "n > 1 and finite"));
    }
    Ok(match target {
        DistKind::Scn => n,
        DistKind::Zf => n * (1.0 + cfg.beta2()),
        DistKind::Scp => n * (1.0 + cfg.beta2() * cfg.rho * n.ln()),
    })
}

/// Inverts the SCP load map: the unique `t` in `[1, n]` with
/// `n = t (1 + beta^2 rho ln t)`.
pub fn scn_users_for_scp_load(n: f64, cfg: &SystemConfig) -> Result<f64> {
    if !(n >= 1.0) || n.is_infinite() {
        return Err(Error::domain("scn_users_for_scp_load", n, "n >= 1 and finite"));
    }
    let k = cfg.beta2() * cfg.rho;
    if k == 0.0 || n == 1.0 {
        return Ok(n);
    }
    let map = |t: f64| t * (1.0 + k * t.ln()) - n;
    let (mut lo, mut hi) = (1.0_f64, n);
    let mut t = (n / (1.0 + k * n.ln())).clamp(lo, hi);
    for _ in 0..200 {
        let f = map(t);
        if f == 0.0 {
            return Ok(t);
        }
        if f > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let newton = t - f / (1.0 + k + k * t.ln());
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - t).abs() <= 1e-10 * t * 1e-3 || hi - lo <= 1e-14 * hi {
            return Ok(next);
        }
        t = next;
    }
    Err(Error::Numeric {
        what: "scp load inversion",
        estimated_error: hi - lo,
        evaluations: 200,
    })
}

/// Estimate of the ZF-over-SCP sum-rate gap at `n` users per cell,
/// `log2(1 + [ln(1 + beta^2 rho ln t) - ln(1 + beta^2)] / (1/rho + ln t))`
/// with `t` from [`scn_users_for_scp_load`]. Zero when `beta = 0`.
pub fn delta_c_estimate(n: f64, cfg: &SystemConfig) -> Result<f64> {
    if !(n > 1.0) || n.is_infinite() {
        return Err(Error::domain("delta_c_estimate", n, "n > 1 and finite"));
    }
    if cfg.beta == 0.0 {
        return Ok(0.0);
    }
    let b2 = cfg.beta2();
    let t = scn_users_for_scp_load(n, cfg)?;
    let lt = t.ln();
    let num = (b2 * cfg.rho * lt).ln_1p() - b2.ln_1p();
    Ok((num / (1.0 / cfg.rho + lt)).ln_1p() / LN_2)
}

/// `d/dx [(1 - F(x)) / f(x)]` in closed form. Tends to zero as `x` grows
/// for all three families, which places them in the Gumbel domain.
pub fn von_mises_statistic(kind: DistKind, x: f64, cfg: &SystemConfig) -> f64 {
    match kind {
        // (1 - F)/f = rho, constant
        DistKind::Scn | DistKind::Zf => 0.0,
        DistKind::Scp => {
            let b2 = cfg.beta2();
            let rho = cfg.rho;
            let denom = 1.0 + b2 * x + rho * b2;
            rho * rho * b2 * b2 / (denom * denom)
        }
    }
}

/// `x + rho ln(1 + beta^2 x)`: maps an SCP-distributed SINR onto the SCN law.
pub fn scp_to_scn_transform(x: f64, cfg: &SystemConfig) -> f64 {
    x + cfg.rho * (cfg.beta2() * x).ln_1p()
}
