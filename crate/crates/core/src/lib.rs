//! Tensor calculus on coordinate charts for almost contact metric
//! manifolds: curvature, (α,β) structure fitting, and residual checks for
//! almost Riemann, Ricci and Yamabe solitons.

// index loops mirror the tensor notation they implement
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod contact;
pub mod error;
pub mod expected;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod invariants;
pub mod jet;
pub mod report;
pub mod sample;
pub mod session;
pub mod soliton;
pub mod spec_file;
pub mod suite;
pub mod tensor;
pub mod zoo;
