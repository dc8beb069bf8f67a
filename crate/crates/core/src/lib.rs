//! Zero-forcing beamforming and opportunistic scheduling on a linear cell
//! array where each user hears its own base station and the next one.
//!
//! * [`analytic`]: SINR distributions, closed-form means, bounds and
//!   extreme-value approximations
//! * [`beamforming`]: the bidiagonal zero-forcing precoder
//! * [`scheduling`]: per-cell schedulers
//! * [`montecarlo`]: deterministic parallel simulation and KS tests
//! * [`cli`]: experiment drivers behind the `wyner-zf` binary

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod beamforming;
pub mod cli;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod scheduling;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{DistKind, Policy, SystemConfig, UserChannel};
