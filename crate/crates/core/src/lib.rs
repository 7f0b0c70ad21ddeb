//! Quantum optics of a mirrored Maxwell fish-eye lens: Green's functions,
//! atom–atom coupling rates with loss, two-atom entanglement dynamics, a
//! parity-reduced Schrödinger simulator and a plasmonic realization estimate.
//!
//! Units: `c = 1` and the atomic vacuum wavelength is 1, so `omega0 = 2 pi`.
//! Rates are reported as multiples of the free-space decay rate `Gamma0`.

pub mod cli;
pub mod error;
pub mod greens;
pub mod lens;
pub mod plasmon;
pub mod qed;
pub mod schrodinger;
pub(crate) mod quad;
pub mod specfun;

pub use error::{Error, Result};
