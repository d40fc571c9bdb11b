//! Topological characteristics of two-level Hamiltonians `H = d·σ`.
//!
//! The crate covers two base manifolds:
//!
//! - the parameter sphere S² of a generic two-level system, with the
//!   north/south chart atlas, the U(1) transition function, closed-form
//!   Berry connection and curvature, and the Chern number;
//! - the Brillouin zone of the Su-Schrieffer-Heeger (SSH) chain, with the
//!   Bloch vector `d(k)`, the Zak phase, the winding number, the phase
//!   classifier and the finite real-space chain used to look at edge modes.
//!
//! Every analytic quantity has a gauge-invariant discrete counterpart in
//! [`numerics`] (link overlaps, Wilson loops, plaquette fluxes), so the two
//! routes can be checked against each other.

pub mod error;
pub mod figures;
pub mod invariants;
pub mod numerics;
pub mod sphere;
pub mod ssh;
pub mod tolerances;
pub mod two_level;

pub use error::{Result, TopoError};
pub use tolerances::Tolerances;
pub use two_level::{Band, BlochVector3, Chart, SphericalCoords, StateVector};
