//! Exact collective spin-squeezing dynamics and quantum Fisher information.
//!
//! This crate simulates one-axis-twisting, two-axis-twisting, and
//! twist-and-turn squeezing of `N` spin-1/2 particles exactly in the
//! `(N+1)`-dimensional Dicke subspace, computes the quantum Fisher
//! information and its optimal transverse measurement axis, locates optimal
//! squeezing times and fits their scaling laws, and tabulates closed-form
//! preparation-time exponents for power-law interacting systems. A
//! brute-force full-Hilbert-space engine cross-validates the fast path at
//! small `N`.
//!
//! Start from [`protocols::ProtocolSpec`] for simulations, [`bounds`] for
//! the exponent tables, and [`cli`] for the batch front end. The
//! `examples/` directory has one runnable program per capability.

pub mod bounds;
pub mod cli;
pub mod collective;
pub mod dynamics;
pub mod error;
pub mod fitting;
pub mod oracle;
pub mod protocols;
pub mod qfi;

pub use error::{Error, Result};
