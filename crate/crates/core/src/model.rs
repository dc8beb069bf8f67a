//! System model of the linear cell array: configuration, per-user channel
//! gains and the enumerations selecting analytic families and schedulers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Cell-array parameters shared by the analytic and simulation paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Users per cell, `n >= 1`.
    pub users_per_cell: usize,
    /// Cross-path gain `beta` in `[0, 1]`.
    pub beta: f64,
    /// Per-base SNR `rho`, linear scale.
    pub rho: f64,
    /// Truncation window `N >= 2`. The last cell is an open boundary.
    pub num_cells: usize,
    pub seed: u64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            users_per_cell: 10,
            beta: 1.0,
            rho: 10.0,
            num_cells: 16,
            seed: 42,
        }
    }
}

impl SystemConfig {
    pub fn new(users_per_cell: usize, beta: f64, rho: f64) -> Self {
        SystemConfig {
            users_per_cell,
            beta,
            rho,
            ..SystemConfig::default()
        }
    }

    pub fn with_users(self, users_per_cell: usize) -> Self {
        SystemConfig { users_per_cell, ..self }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        SystemConfig { beta, ..self }
    }

    pub fn with_rho(self, rho: f64) -> Self {
        SystemConfig { rho, ..self }
    }

    pub fn with_cells(self, num_cells: usize) -> Self {
        SystemConfig { num_cells, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SystemConfig { seed, ..self }
    }

    /// The interference-free single-cell network: same config with `beta = 0`.
    pub fn scn(self) -> Self {
        self.with_beta(0.0)
    }

    pub fn beta2(&self) -> f64 {
        self.beta * self.beta
    }

    /// Checks every invariant and returns the config unchanged.
    pub fn validate(self) -> Result<Self> {
        if self.users_per_cell < 1 {
            return Err(Error::Config {
                field: "users_per_cell",
                value: self.users_per_cell.to_string(),
                reason: "must be at least 1",
            });
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::Config {
                field: "beta",
                value: self.beta.to_string(),
                reason: "must lie in [0, 1]",
            });
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Config {
                field: "rho",
                value: self.rho.to_string(),
                reason: "must be positive and finite",
            });
        }
        if self.num_cells < 2 {
            return Err(Error::Config {
                field: "num_cells",
                value: self.num_cells.to_string(),
                reason: "must be at least 2",
            });
        }
        Ok(self)
    }
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Fading gains of one user: `a` towards its own base station `i`, `b`
/// towards the neighbouring base station `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserChannel {
    pub a: Complex64,
    pub b: Complex64,
}

impl UserChannel {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        UserChannel { a, b }
    }

    pub fn real(a: f64, b: f64) -> Self {
        UserChannel::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    pub fn gain_local(&self) -> f64 {
        self.a.norm_sqr()
    }

    pub fn gain_cross(&self) -> f64 {
        self.b.norm_sqr()
    }
}

/// One slot's channel gains for every user in a window of cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRealization {
    cells: Vec<Vec<UserChannel>>,
}

impl CellRealization {
    /// Fails unless the window is rectangular with at least one user per cell.
    pub fn new(cells: Vec<Vec<UserChannel>>) -> Result<Self> {
        let n = cells.first().map(Vec::len).unwrap_or(0);
        if n == 0 {
            return Err(Error::EmptyCell);
        }
        if let Some(bad) = cells.iter().find(|c| c.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(CellRealization { cells })
    }

    pub fn cells(&self) -> &[Vec<UserChannel>] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn users_per_cell(&self) -> usize {
        self.cells[0].len()
    }
}

/// Scheduling policy.
///
/// `MaxGain` serves both as the single-cell-network scheduler (run with
/// `beta = 0`) and as the suboptimal zero-forcing scheduler that picks the
/// strongest local gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    MaxGain,
    ScpSinr,
    ZfOptimal,
    ZfRatio,
}

impl Policy {
    pub const ALL: [Policy; 4] = [Policy::MaxGain, Policy::ScpSinr, Policy::ZfOptimal, Policy::ZfRatio];
}

/// Analytic family of the single-user SINR distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistKind {
    Scn,
    Scp,
    Zf,
}

impl DistKind {
    pub const ALL: [DistKind; 3] = [DistKind::Scn, DistKind::Scp, DistKind::Zf];

    pub fn name(self) -> &'static str {
        match self {
            DistKind::Scn => "scn",
            DistKind::Scp => "scp",
            DistKind::Zf => "zf",
        }
    }
}
