//! Exact arithmetic for the Kronecker–Hurwitz class number relation, its
//! refinement over right cosets of matrices of determinant `n`, and the
//! triangulation of `{y >= 1}` indexed by PSL2(Z).

pub mod class_numbers;
pub mod cosets;
pub mod error;
pub mod fundamental_domain;
pub mod modular_group;
pub mod rational;
pub mod tessellation;
pub mod verify;

pub use class_numbers::{hurwitz_class_number, ClassNumberCache, ClassNumberValue, QuadForm};
pub use cosets::{CosetLabel, IntMatrix, RelationSides, WeightedMatrix};
pub use error::{Error, Result};
pub use fundamental_domain::{DomainPosition, MatrixKind, MatrixQ};
pub use modular_group::{Class, GroupElement, Letter, Word};
pub use rational::Rational;
pub use tessellation::{Containment, RatPoint, Triangle};
