//! Leggett–Garg temporal correlations for systems of arbitrary spin.
//!
//! The crate is layered bottom-up:
//!
//! * [`numerics`]: dense complex matrices, Hermitian eigendecomposition and
//!   unitary exponentials.
//! * [`dynamics`]: density matrices, sharp and unsharp two-outcome
//!   measurements, Lüders updates and sequential two-time statistics.
//! * [`spin_lg`]: the block (Gisin–Peres) observable scheme and the parity
//!   (Kofler–Brukner) scheme for spin `j`, in closed form and simulated.
//! * [`macrorealism`]: four-time records, Leggett–Garg and LG-CH
//!   inequalities, no-signalling-in-time checks and the joint-distribution
//!   feasibility test.
//! * [`cli`]: the `lgspin` command-line front end.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod macrorealism;
pub mod numerics;
pub mod optimize;
pub mod spin_lg;

pub use error::{Error, Result};
