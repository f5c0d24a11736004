//! Exact solutions, symmetry structure, group foliation and numerical
//! simulation for the semilinear radial wave equation
//!
//! ```text
//! u_tt - u_rr - (n-1) u_r / r = k u^q
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod field;
pub mod foliation;
pub mod initial;
pub mod jet;
pub mod liealg;
pub mod numerics;
pub mod params;
pub mod reconstruct;
pub mod reduction;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Jet2Sample, RadialField};
pub use jet::Jet2;
pub use params::{classify_power, exponent_p, ModelParams, PowerKind, Sign, SpecialPower};
