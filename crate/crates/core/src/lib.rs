//! Combinatorial small covers and their complexity-one quotients.
//!
//! A small cover `X(P, λ)` over a simple polytope `P` is built here as a
//! regular cell complex with one cell per pair (face, coset of the face
//! stabilizer). Everything is computed with mod-2 coefficients, so homology
//! reduces to ranks of bit-packed matrices over GF(2).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, fixtures and
//! the command-line front end live in the companion `smallcover` crate.
//!
//! Module map:
//!
//! - [`gf2`]: vectors and matrices over the two-element field.
//! - [`polytope`]: vertex–facet incidence, face lattices, f- and h-vectors.
//! - [`charfun`]: characteristic functions, the independence condition at
//!   vertices, tangent weights and the index-two subgroup in general position.
//! - [`standard_action`]: sign subgroups of `Z₂ⁿ` acting on `ℝⁿ` and on the
//!   boundary of the cross-polytope.
//! - [`chain`]: cell complexes with mod-2 boundaries, relative homology and
//!   quotients by cellular group actions.
//! - [`small_cover`]: the construction of `X(P, λ)`, fixed sets, face
//!   submanifolds, the orbit space `X/G` and its doubling model.

#![no_std]

extern crate alloc;

pub mod chain;
pub mod charfun;
pub mod gf2;
pub mod polytope;
pub mod small_cover;
pub mod standard_action;

pub use chain::{CellAction, CellComplex, ChainError, Subcomplex};
pub use charfun::{CharError, CharacteristicFunction, Subtorus, TangentWeights};
pub use gf2::{Gf2Error, Gf2Matrix, Gf2Vector};
pub use polytope::{Face, FaceLattice, PolytopeError, SimplePolytope};
pub use small_cover::{OrbitSpaceComplex, SmallCoverComplex, SmallCoverError};
pub use standard_action::{SignSubgroup, StandardActionError};
