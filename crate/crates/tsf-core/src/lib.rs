//! Filtering with concentrated Gaussians on matrix Lie groups.
//!
//! The crate is `no_std` with `alloc`. It covers the group closed forms,
//! generic Lie machinery, concentrated Gaussians with whitening, tangent-space
//! SDE propagation with the continuous-time unscented transform, the UT
//! measurement update, and heat-kernel / Monte-Carlo validation oracles.
#![cfg_attr(not(test), no_std)]
// NaN must fail parameter and branch checks, hence `!(x < y)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
extern crate alloc;

pub mod cg;
pub mod error;
pub mod fpe;
pub mod groups;
pub mod lie;
pub mod measurement;
pub mod propagation;
pub mod quadrature;
pub mod ut;

pub use error::{Result, TsfError};
