//! Finite, exactly computable models of ample étale groupoids.
//!
//! The unit space is a depth-truncated word space with the prefix ultrametric
//! ([`unitspace`]). Groupoids are explicit arrow tables ([`groupoid`]) built from
//! permutation actions, Bratteli diagrams or a few canonical families. On top of
//! that sit word-length growth ([`growth`]), invariant measures and Banach
//! densities ([`measure`]), subequivalence witnesses and the comparison
//! algorithms ([`comparison`]), and the convolution algebra ([`convolution`]).
//!
//! Everything that feeds a pass/fail decision is exact rational or integer
//! arithmetic. Floating point appears only in growth-order regression and in
//! operator-norm estimation.

pub mod comparison;
pub mod convolution;
pub mod error;
pub mod groupoid;
pub mod growth;
pub mod measure;
pub mod rational;
pub mod unitspace;

pub use error::{Error, Result};
pub use groupoid::{ArrowId, ArrowSet, Bisection, FiniteGroupoid, Limits};
pub use rational::Rational;
pub use unitspace::{ClopenSet, DyadicRadius, UnitSpace, Word};
