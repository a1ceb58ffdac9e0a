//! Exact intersection calculus for monomial subspaces of rational functions on
//! the algebraic torus.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice_geometry`]: convex hulls, Minkowski sums, exact volumes and the
//!   mixed-volume engine, plus normal-fan refinement for `n <= 3`.
//! - [`subspaces`]: the semigroup of monomial subspaces (products, completion,
//!   integrality certificates, equivalence, lattice index of the Kodaira map).
//! - [`grothendieck`]: virtual polytopes as formal quotients and the
//!   multilinear intersection index on them.
//! - [`toric_bdiv`]: projective toric models, Cartier divisors as integral
//!   support functions, pull-back, b-divisors and the maps between subspaces
//!   and divisors.
//! - [`chow_formal`]: the truncated intersection ring of a product of
//!   projective spaces and the Segre pull-back.
//! - [`oracle`]: a brute-force root counter over finite fields that checks the
//!   mixed volume against actual solution counts.
//! - [`cli`]: JSON job files and reports.

pub mod chow_formal;
pub mod cli;
pub mod error;
pub mod grothendieck;
pub mod lattice_geometry;
pub mod oracle;
pub mod subspaces;
pub mod toric_bdiv;

pub use error::{Error, Result};
pub use lattice_geometry::{LatticePoint, LatticePolytope, VolumeValue};
pub use grothendieck::VirtualClass;
pub use subspaces::MonomialSubspace;
pub use toric_bdiv::{BDivisor, ToricDivisor, ToricModel};
