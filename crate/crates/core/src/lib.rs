//! Leading-order Maxwell-time analysis of the plate-ball problem.
//!
//! The crate evaluates the transcendental functions whose minimal positive
//! roots `p1(m)`, `p2(m)` give the first Maxwell times, brackets those roots
//! with the published two-sided estimates, locates the crossings of the two
//! curves, evaluates small-amplitude trajectories and checks every stated
//! estimate on parameter grids.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod maxwell;
pub mod roots;
pub mod special;
pub mod trajectory;
pub mod verify;

pub use error::{Error, Result};
