//! Exact computations with semi-invariants of parabolic, Borel and unipotent
//! conjugation actions on nilpotent matrices.
//!
//! Everything works over the rationals with arbitrary precision; no result is
//! ever rounded. The modules build on each other roughly in declaration order:
//!
//! * [`matrix`], [`poly`], [`rational`]: exact linear algebra.
//! * [`groups`]: group patterns, characters, sampling.
//! * [`semiinv`]: block-determinantal semi-invariants and their weights.
//! * [`quiver`]: the same functions expressed through quiver representations.
//! * [`normalform`]: genericity and normal forms with conjugacy certificates.
//! * [`toric`]: toric invariants, exponent vectors, cones and semigroups.
//! * [`quotients`]: explicit quotient maps and ring relations in small rank.

pub mod error;
pub mod groups;
pub mod matrix;
pub mod normalform;
pub mod poly;
pub mod quiver;
pub mod quotients;
pub mod rational;
pub mod semiinv;
pub mod toric;

pub use error::{Error, Result};
pub use groups::{Character, GroupKind, ParabolicShape};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use rational::Rational;
pub use semiinv::{SemiInvariantDatum, WeightedInvariant};
