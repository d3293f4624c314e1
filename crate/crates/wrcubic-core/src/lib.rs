//! Exact-arithmetic toolkit for deciding whether a basis of an ideal lattice
//! in a real cyclic cubic field yields a well-rounded twist.
//!
//! Everything geometric in this crate is computed over the rationals: Gram
//! matrices of twisted bases are traces of field elements, shortest vectors
//! are found by exact lattice-point enumeration, and the only place real
//! numbers appear at all is in certified interval approximations of the
//! three real embeddings (used for sign decisions, each of which is either
//! verified exactly afterwards or certified by interval separation).
//!
//! Module map:
//! - [`field`]: cyclic cubic fields, conductor parametrization, Galois
//!   action, traces/norms, certified embeddings.
//! - [`lattice`]: rank-3 Gram machinery, the well-rounded criterion, twist
//!   coefficients and the exact shortest-vector oracle.
//! - [`twist`]: the good-basis test, unit transport, randomized search,
//!   principal-ideal links and orthogonal twists from the different ideal.
//! - [`ramified`]: bases and WR status of ideals whose norm divides the
//!   field discriminant.
//! - [`families`]: the Shanks, Washington and Kishi families with their
//!   integral bases, published good bases and squarefree gates.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod families;
pub mod field;
pub mod lattice;
pub mod ramified;
pub mod rat;
pub mod rng;
pub mod twist;

pub mod poly;

pub use field::{ConductorData, CubicField, FieldElement, FieldError};
pub use lattice::{GramMatrix3, LatticeBasis3, LatticeError, ShortVector};
pub use poly::Cubic;
pub use rat::Rat;
pub use twist::{OrthoTwistCertificate, PrincipalLink, TwistError, TwistReport};
