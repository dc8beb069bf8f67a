//! Multicell zero-forcing precoder on a finite window of the cell array.
//!
//! Base station `i` transmits
//!
//! ```text
//! x_i = sqrt(rho) (1 - |r_i|^2)^{1/2} s_i - r_i x_{i+1}
//! ```
//!
//! which pre-subtracts the interference its neighbour causes at the user
//! scheduled in cell `i`. Solving the recursion backwards from the open
//! boundary (`r_N = 0`) gives the upper-triangular matrix
//!
//! ```text
//! B[i][j] = (1 - |r_j|^2)^{1/2} prod_{l=i}^{j-1} (-r_l),   j >= i
//! ```
//!
//! whose rows have squared norm `1 - prod_{l>=i} |r_l|^2 = 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{SystemConfig, UserChannel};

/// Interference ratio `r` of a scheduled user.
///
/// `beta b / a` when `|a| >= beta |b|`; otherwise the unit-modulus number with
/// the same phase. A zero local gain with a nonzero cross gain takes the
/// phase of `b`.
pub fn compute_r(a: Complex64, b: Complex64, beta: f64) -> Result<Complex64> {
    let a_abs = a.norm();
    let cross = beta * b.norm();
    if a_abs == 0.0 && b.norm() == 0.0 {
        return Err(Error::DegenerateChannel { cell: 0 });
    }
    if cross == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a_abs == 0.0 {
        return Ok(b / b.norm());
    }
    let ratio = b * beta / a;
    if a_abs >= cross {
        Ok(ratio)
    } else {
        Ok(ratio / ratio.norm())
    }
}

/// Precoding matrix for one slot, before the `sqrt(rho)` power scale.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderWindow {
    r: Vec<Complex64>,
    b_matrix: Vec<Vec<Complex64>>,
    rho: f64,
}

impl PrecoderWindow {
    /// Builds the matrix from explicit ratios. Every `|r_i|` must be at most one.
    pub fn from_ratios(r: Vec<Complex64>, rho: f64) -> Result<Self> {
        if let Some(bad) = r.iter().find(|z| !(z.norm() <= 1.0 + 1e-15)) {
            return Err(Error::domain("PrecoderWindow::from_ratios", bad.norm(), "|r_i| <= 1"));
        }
        let size = r.len();
        let direct: Vec<f64> = r
            .iter()
            .map(|z| {
                // unit-modulus ratios carry no direct signal
                let rest = 1.0 - z.norm_sqr();
                if rest <= 4.0 * f64::EPSILON {
                    0.0
                } else {
                    rest.sqrt()
                }
            })
            .collect();
        let mut b_matrix = vec![vec![Complex64::new(0.0, 0.0); size]; size];
        for (i, row) in b_matrix.iter_mut().enumerate() {
            let mut chain = Complex64::new(1.0, 0.0);
            for j in i..size {
                row[j] = chain * direct[j];
                chain *= -r[j];
            }
        }
        Ok(PrecoderWindow { r, b_matrix, rho })
    }

    pub fn size(&self) -> usize {
        self.r.len()
    }

    pub fn ratios(&self) -> &[Complex64] {
        &self.r
    }

    pub fn matrix(&self) -> &[Vec<Complex64>] {
        &self.b_matrix
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Squared 2-norm of row `i`; the transmit power of base `i` is `rho` times this.
    pub fn row_power(&self, i: usize) -> f64 {
        self.b_matrix[i].iter().map(Complex64::norm_sqr).sum()
    }

    /// `1 - prod_{l >= i} |r_l|^2`, the closed form of [`Self::row_power`].
    pub fn row_power_telescoped(&self, i: usize) -> f64 {
        1.0 - self.r[i..].iter().map(Complex64::norm_sqr).product::<f64>()
    }
}

/// Builds the precoder for one scheduled user per cell. The last cell of the
/// window is the open boundary and uses `r = 0`.
pub fn build_precoder(scheduled: &[UserChannel], cfg: &SystemConfig) -> Result<PrecoderWindow> {
    let last = scheduled.len().saturating_sub(1);
    let r = scheduled
        .iter()
        .enumerate()
        .map(|(cell, u)| {
            if cell == last {
                if u.a.norm() == 0.0 && u.b.norm() == 0.0 {
                    return Err(Error::DegenerateChannel { cell });
                }
                Ok(Complex64::new(0.0, 0.0))
            } else {
                compute_r(u.a, u.b, cfg.beta).map_err(|_| Error::DegenerateChannel { cell })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PrecoderWindow::from_ratios(r, cfg.rho)
}

/// Antenna outputs `x = sqrt(rho) B s`.
pub fn apply_precoder(window: &PrecoderWindow, symbols: &[Complex64]) -> Result<Vec<Complex64>> {
    if symbols.len() != window.size() {
        return Err(Error::DimensionMismatch {
            expected: window.size(),
            got: symbols.len(),
        });
    }
    let scale = window.rho.sqrt();
    Ok(window
        .b_matrix
        .iter()
        .map(|row| row.iter().zip(symbols).map(|(w, s)| w * s).sum::<Complex64>() * scale)
        .collect())
}

/// Largest normalised residual `|beta b_i - a_i r_i| / (|a_i| + beta |b_i|)`
/// over interior cells whose scheduled user satisfies `|a_i| >= beta |b_i|`.
///
/// Zero forcing holds when this is at the level of rounding error.
pub fn verify_zero_forcing(window: &PrecoderWindow, scheduled: &[UserChannel], cfg: &SystemConfig) -> f64 {
    let interior = window.size().saturating_sub(1);
    scheduled
        .iter()
        .zip(window.r.iter())
        .take(interior)
        .filter(|(u, _)| u.a.norm() >= cfg.beta * u.b.norm())
        .map(|(u, r)| {
            let residual = (u.b * cfg.beta - u.a * r).norm();
            let scale = u.a.norm() + cfg.beta * u.b.norm();
            if scale == 0.0 {
                0.0
            } else {
                residual / scale
            }
        })
        .fold(0.0, f64::max)
}

/// Coefficients of every symbol `s_j` in the noiseless signal received by the
/// scheduled user of cell `i`, `sqrt(rho) (a_i B[i][j] + beta b_i B[i+1][j])`.
pub fn received_coefficients(
    window: &PrecoderWindow,
    scheduled: &[UserChannel],
    i: usize,
    cfg: &SystemConfig,
) -> Vec<Complex64> {
    let size = window.size();
    let scale = window.rho.sqrt();
    let u = scheduled[i];
    (0..size)
        .map(|j| {
            let own = u.a * window.b_matrix[i][j];
            let cross = if i + 1 < size {
                u.b * cfg.beta * window.b_matrix[i + 1][j]
            } else {
                Complex64::new(0.0, 0.0)
            };
            (own + cross) * scale
        })
        .collect()
}
