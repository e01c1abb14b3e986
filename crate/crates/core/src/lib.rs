//! One-term Cox-Thompson inverse scattering at fixed energy.
//!
//! Given a single phase shift `delta_l`, the library maps it onto the family
//! of shifted parameters `L`, picks the branch whose potential is free of
//! poles, builds the transformation kernel and potential in closed form, and
//! checks the result: Wronskian root scans, Bessel-zero interlacing, the
//! Regge-Newton residual and a forward phase-shift solve.
//!
//! Module map:
//!
//! - [`specfun`]: `J_nu`, `Y_nu`, derivatives, Riccati-Bessel `u_l`, `v_l`.
//! - [`zeros`]: zeros of `J_nu`, `Y_nu`, `J'_nu` and interlacing checks.
//! - [`wronskian`]: `W_Ll`, its limits and root search.
//! - [`oneterm`]: branches, kernels, potential tables, integral residual.
//! - [`verify`]: forward radial solver, pole-order fit, integrability proxy.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exec;
pub mod oneterm;
pub mod quadrature;
pub mod roots;
pub mod specfun;
pub mod verify;
pub mod wronskian;
pub mod zeros;

pub use error::{Error, Result};
pub use exec::Execution;
pub use oneterm::{BranchChoice, BranchParams, GridSpec, PhaseShiftSpec, PotentialTable};
pub use wronskian::{PairParams, WronskianProfile};
