//! Exact combinatorics of consistent dimer models on the torus.
//!
//! Starting from a dimer file the crate computes zigzag cycles, perfect
//! matchings and the matching polytope, the Jacobi algebra with its central
//! elements, the Koszul Hochschild complex, the symplectic cohomology model of
//! the mirror punctured curve, and a graded comparison of the two sides.
//!
//! Coefficients are generic over [`Coeff`]; [`JElem`], [`Cochain`] and
//! [`ShElem`] fix the integer and rational defaults.

pub mod cli;
pub mod coeff;
pub mod consistency;
pub mod dimer;
pub mod dual;
pub mod e2;
pub mod hochschild;
pub mod io;
pub mod jacobi;
pub mod ks;
pub mod lattice;
pub mod matching;
pub mod model;
pub mod sh;
pub mod zigzag;

pub use coeff::Coeff;
pub use consistency::{is_zigzag_consistent, ConsistencyReport, ConsistencyViolation};
pub use dimer::{validate_dimer, Dimer, DimerFile, Sign, ValidationReport, Violation, Word};
pub use dual::{dual_dimer, surface_invariants, SurfaceInvariants};
pub use io::{builtin, parse_dimer, read_dimer, serialize_dimer, ParseError};
pub use lattice::Z2;
pub use zigzag::{anti_zigzag, StructureError, ZigzagCycle, ZigzagSystem};

/// Rational coefficients.
pub type Q = num_rational::Rational64;

/// Jacobi algebra elements with integer coefficients.
pub type JElem = jacobi::JElement<i64>;
/// Koszul Hochschild cochains with integer coefficients.
pub type Cochain = hochschild::CochainElement<i64>;
/// Symplectic cohomology elements with rational coefficients.
pub type ShElem = sh::ShElement<Q>;
