//! Collective-spin toolkit: symmetric N-qubit states in the Dicke basis,
//! squeezing parameters, pairwise entanglement, metrology, decoherence
//! analytics and a few ground-state and measurement models.
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is enabled.
//! Dicke-basis vectors are always ordered from m = +j down to m = -j.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod decoherence;
pub mod dicke;
pub mod entanglement;
mod error;
pub mod linalg;
pub mod metrics;
pub mod metrology;
pub mod models;
pub mod roots;
pub mod twist;

pub use dicke::{
    build_operators, css, dicke, husimi_q, local_moments, moments, rotate, CollectiveOperator,
    LocalMoments, MomentSet, Operators, SymmetricState,
};
pub use error::{Result, SqzError};
pub use metrics::{compute_report, parity_shortcuts, SqueezingReport};
