//! Exact computation with conditionally free (c-free) random variables.
//!
//! The crate has three independent ways to get at the moments of `X + Y` and
//! `XY` for a c-free pair `(X, Y)`:
//!
//! * [`transform`]: the `R`/`cR` and `T`/`cT` transforms, which add
//!   (respectively multiply) under c-free convolution;
//! * [`axioms`]: direct expansion of mixed moments from the defining
//!   centering relations;
//! * [`two_level`]: explicit creation/annihilation operators on a two-level
//!   Fock space, where c-free pairs are built from disjoint letters.
//!
//! All arithmetic is exact over the rationals.

pub mod axioms;
pub mod convolution;
pub mod error;
pub mod fock;
pub mod law;
pub mod random;
pub mod scalar;
pub mod series;
pub mod structure;
pub mod transform;
pub mod two_level;
pub mod verify;

pub use axioms::{convolve_axiomatic, expectation_of_word, AlternatingWord, ConvolutionKind, Side, State};
pub use convolution::{cfree_convolve, cross_check, realize_law, ConvolutionPath, CrossCheckReport};
pub use error::{Error, Result};
pub use fock::{haagerup_operator, FockOperator, FockSpace, FockVector, Letter, ModelKind, Word};
pub use law::TwoStateLaw;
pub use scalar::Scalar;
pub use series::{Poly, TruncatedSeries};
pub use transform::{moments_from_transform, transform_from_moments, TransformKind};
pub use two_level::{construct_model, simulate_law, EBasis, EOperator, EVector, TwoLevelSpace};
