//! Continuous collision-risk measures for pairs of traffic participants.
//!
//! Three measures are provided on top of a shared constant-velocity
//! prediction: time to closest encounter (TTCE, with plain TTC as its
//! collinear special case), Gaussian occupancy overlap, and a survival
//! analysis of competing escape and collision events. The crate also ships
//! a synthetic scenario generator, an evaluation harness reporting detection
//! times and false positives, parameter calibration, and Monte Carlo /
//! brute-force oracles.

// `!(x > 0.0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calibration;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod kinematics;
pub mod oracle;
pub mod risk_measures;
pub mod scenarios;
pub mod survival;

pub use error::{Result, RiskError};
pub use evaluation::{Measure, MeasureParams};
pub use kinematics::{Encounter, KinematicState, RelativeState, Trajectory, Vec2};
