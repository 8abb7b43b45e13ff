//! Exact local computations behind integrality bounds for Fourier coefficients of newforms at
//! the cusps of `X_0(N)`, and the resulting divisibility constraints on Manin constants.
//!
//! The layers, bottom up:
//!
//! * [`cyclotomic`] and [`padic`]: exact arithmetic in `Q(ζ_M)` and a fixed embedding into a
//!   ramified extension of `Z_p`, which is how every valuation is measured.
//! * [`characters`] and [`gauss`]: characters of `Q_p^×` and of finite fields, Gauss sums and
//!   GL(1) epsilon factors.
//! * [`reps`] and [`whittaker`]: GL(2) representation descriptors, local Fourier coefficients
//!   of the Whittaker newform and the local valuation bounds.
//! * [`modcurve`] and [`manin`]: cusp combinatorics of `X_0(N)` and the global bound tables.
//! * [`dataset`]: measured-valuation records and the verification pipeline used by the CLI.

pub mod arith;
pub mod characters;
pub mod cyclotomic;
pub mod dataset;
pub mod error;
pub mod ext;
pub mod finite_field;
pub mod gauss;
pub mod manin;
pub mod modcurve;
pub mod padic;
pub mod reps;
pub mod whittaker;

pub use cyclotomic::{CycNum, ScaledCyclotomic};
pub use error::{Error, Result};
pub use ext::{ExtRational, Q};
