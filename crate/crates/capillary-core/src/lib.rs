//! Equilibrium and dynamical properties of diffuse liquid-vapour interfaces.
//!
//! The fluid is a compressible van der Waals fluid whose free energy carries a
//! square-gradient (internal capillarity) term `(lambda/2) |grad rho|^2`. The
//! crate computes, with independent cross-checks for every quadrature and
//! root-finding result:
//!
//! - phase coexistence (binodal) through the Maxwell equal-area rule and its
//!   dynamic generalization ([`coexistence`]),
//! - the continuous density profile across the capillary layer and the static
//!   surface tension by quadrature ([`interface`]),
//! - the viscous dynamical surface tension, the extended Laplace pressure jump
//!   under mass transfer, and the Marangoni tangential balance ([`dynamics`]),
//! - curvilinear-coordinate operators and the integral identities used to
//!   reduce the layer equations to jump conditions ([`geometry`]).
//!
//! All quantities are plain `f64` in a consistent unit system, either c.g.s.
//! or reduced units where the critical point sits at `(1, 1, 1)`; see
//! [`eos::FluidParams`].
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command-line
//! front end live in the companion `capillary` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod coexistence;
pub mod dynamics;
pub mod eos;
pub mod error;
pub mod geometry;
pub mod interface;
mod math;
pub mod numerics;

pub use coexistence::CoexistenceState;
pub use dynamics::{JumpInputs, JumpResult};
pub use eos::{FluidParams, ThermoPoint, Units};
pub use error::{Error, Result};
pub use interface::{InterfaceProfile, TensionResult};
