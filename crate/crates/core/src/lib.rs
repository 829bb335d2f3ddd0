//! Exact solutions of the octahedron recurrence attached to Young diagrams.
//!
//! Four independent engines compute the same Laurent polynomials: the
//! recurrence itself, U/V transfer matrices, paths on networks and dimer
//! partition functions.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bessenrodt_stanley;
pub mod det;
pub mod diagrams;
pub mod dimer;
pub mod error;
pub mod laurent;
pub mod network;
pub mod octahedron;
pub mod surfaces;

pub use diagrams::{Cell, FccPoint, Frame, Partition};
pub use error::{AlgebraError, DiagramError, EngineError};
pub use laurent::{LaurentPoly, Monomial, VarId, VarTable};
pub use num_bigint;
