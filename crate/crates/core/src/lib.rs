//! Hybrid memetic solver for multi-depot vehicle routing problems with
//! closed routes, time windows or open routes.

// `!(x > 0.0)` is used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bench;
pub mod engine;
pub mod eval;
pub mod genetic;
pub mod io;
pub mod localsearch;
pub mod model;
pub mod neighborhood;
pub mod population;
pub mod synth;
