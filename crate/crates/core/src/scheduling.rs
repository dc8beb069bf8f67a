//! Per-cell schedulers and the post-scheduling SINR they produce.
//!
//! Indices returned here are zero-based.

use crate::error::{Error, Result};
use crate::model::{Policy, SystemConfig, UserChannel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleResult {
    pub chosen_index: usize,
    pub metric_value: f64,
}

/// The quantity each policy maximises.
///
/// * `MaxGain`: `|a|^2`
/// * `ScpSinr`: `|a|^2 / (1/rho + beta^2 |b|^2)`, the SINR without coordination
/// * `ZfOptimal`: `[|a|^2 - beta^2 |b|^2]_+`, the gain left after zero forcing
/// * `ZfRatio`: `|a|^2 / |b|^2`, infinite when `b = 0`
pub fn metric(policy: Policy, user: &UserChannel, cfg: &SystemConfig) -> f64 {
    let ga = user.gain_local();
    let gb = user.gain_cross();
    match policy {
        Policy::MaxGain => ga,
        Policy::ScpSinr => ga / (1.0 / cfg.rho + cfg.beta2() * gb),
        Policy::ZfOptimal => (ga - cfg.beta2() * gb).max(0.0),
        Policy::ZfRatio => {
            if gb == 0.0 {
                if ga > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            } else {
                ga / gb
            }
        }
    }
}

/// Argmax of the policy metric; ties go to the lowest index.
pub fn schedule(policy: Policy, cell: &[UserChannel], cfg: &SystemConfig) -> Result<ScheduleResult> {
    let mut best: Option<ScheduleResult> = None;
    for (k, user) in cell.iter().enumerate() {
        let m = metric(policy, user, cfg);
        if best.is_none_or(|b| m > b.metric_value) {
            best = Some(ScheduleResult {
                chosen_index: k,
                metric_value: m,
            });
        }
    }
    best.ok_or(Error::EmptyCell)
}

/// SINR after zero forcing, `rho [|a|^2 - beta^2 |b|^2]_+`.
pub fn zf_sinr(user: &UserChannel, cfg: &SystemConfig) -> f64 {
    cfg.rho * (user.gain_local() - cfg.beta2() * user.gain_cross()).max(0.0)
}

/// SINR of the user the policy schedules.
///
/// `ScpSinr` reports the uncoordinated SINR. The other three report the
/// zero-forcing SINR of their chosen user; `MaxGain` under `beta = 0` is the
/// single-cell-network SINR `rho |a|^2`.
pub fn post_scheduling_sinr(policy: Policy, cell: &[UserChannel], cfg: &SystemConfig) -> Result<f64> {
    let chosen = schedule(policy, cell, cfg)?;
    let user = &cell[chosen.chosen_index];
    Ok(match policy {
        Policy::ScpSinr => chosen.metric_value,
        _ => zf_sinr(user, cfg),
    })
}
