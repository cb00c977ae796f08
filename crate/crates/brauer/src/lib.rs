//! Exact-arithmetic block theory for the Brauer algebra `B_n(delta)`.
//!
//! The crate computes, over the rationals:
//!
//! * partition combinatorics and the delta-balanced condition ([`partition`]),
//! * the weight space with its shifted alcove geometry for the infinite
//!   type-D reflection group ([`weight`]),
//! * block membership, block enumeration and translation combinatorics
//!   ([`block`]),
//! * the graded block graphs and their isomorphisms ([`graphs`]),
//! * parabolic Kazhdan-Lusztig polynomials via the wall-crossing recursion
//!   and the decomposition-number predictor ([`kl`]),
//! * Brauer diagram arithmetic, cell modules with exact Specht actions, Gram
//!   matrices and simple-module dimensions via exact rank ([`diagram`]).
//!
//! Everything is exact: half-integers are kept in doubled integer
//! coordinates, module arithmetic uses arbitrary-precision rationals.

pub mod block;
pub mod diagram;
pub mod graphs;
pub mod kl;
pub mod linalg;
pub mod partition;
pub mod specht;
pub mod weight;
