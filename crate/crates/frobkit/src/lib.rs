//! Frobenius-theoretic invariants of normal toric rings, computably.
//!
//! The library works with normal affine semigroup rings `R = k[C /\ Z^n]`
//! over `F_p`, presented by the inner facet normals of a pointed
//! full-dimensional rational cone. On top of that presentation it computes:
//!
//! - the divisor class group `Cl(R)` and the arithmetic of divisorial
//!   (rank-1 reflexive) module classes ([`toric`]);
//! - Frobenius pushforward decompositions `F^e_*(M_a)` into divisorial
//!   summands, splitting numbers, finite-F-type decisions, and abundance
//!   verdicts ([`frobenius`]);
//! - the analogous decompositions for monomial ideals over polynomial
//!   rings ([`monomial`]);
//! - depth and Cohen-Macaulayness verdicts through combinatorial local
//!   cohomology over the face lattice of the cone ([`depth`]).
//!
//! The complete local rings these invariants are usually stated for are
//! modeled by their graded toric avatars, which is faithful for every
//! class-group, decomposition, and depth computation performed here.
//!
//! The heavy loops (residue scans, degree-window scans) are data-parallel
//! and run on rayon by default; build with `--no-default-features` for the
//! sequential fallback. Both paths produce identical results.

pub mod cone;
pub mod depth;
pub mod frobenius;
pub mod lattice;
pub mod monomial;
pub mod registry;
pub mod toric;
pub mod verify;

mod ratlin;
mod simplex;

pub use cone::{Cone, ConeError, FaceLattice, Window};
pub use frobenius::{DecompositionMultiset, FrobError, FrobeniusLevel, DEFAULT_CAP};
pub use lattice::{CokernelInvariants, IntMatrix, LatticeError, SmithForm};
pub use toric::{DivClass, ToricError, ToricRing};
