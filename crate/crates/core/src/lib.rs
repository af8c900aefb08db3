//! Exact finite-size solution of the XX spin ring
//!
//! ```text
//! H = -sum_i (g sigma^z_i + sigma^x_i sigma^x_{i+1} / 2 + sigma^y_i sigma^y_{i+1} / 2),   sigma_N = sigma_0
//! ```
//!
//! * [`analytic`]: closed-form sector energies, level crossings, envelope and
//!   finite-size scaling.
//! * [`statevector`]: ground states as Slater determinants on the `2^N`
//!   product basis.
//! * [`oracle`]: dense Pauli and Jordan-Wigner matrices with a dense
//!   eigensolver, used to check everything above.
//! * [`entanglement`]: purity over balanced bipartitions and its statistics.
//! * [`cli`]: table builders behind the `xxring` binary.
//!
//! Basis states follow the bit convention documented in [`basis`].

pub mod analytic;
pub mod basis;
pub mod cli;
pub mod entanglement;
pub mod error;
pub mod oracle;
pub mod statevector;

pub use error::{Error, Result};

/// Smallest ring handled; with two sites the closing bond would repeat the
/// only other bond.
pub const MIN_SITES: usize = 3;
