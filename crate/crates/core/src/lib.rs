//! Computational finite geometry for Hermitian varieties in PG(s, q²).
//!
//! The crate builds the projective space PG(s, q²) over an exactly
//! represented GF(q²), constructs Hermitian varieties and their tangency
//! structure, computes intersection spectra against hyperplanes and
//! codimension-2 subspaces, builds pivoted-set counterexamples, and verifies
//! combinatorial hyperplane-family characterizations by exhaustive
//! enumeration.

pub mod error;
pub mod files;
pub mod galois;
pub mod hermitian;
pub mod projective;
pub mod quasi;
pub mod sets;
pub mod verifier;

pub use error::{Error, Result};
pub use galois::{factor_prime_power, Field, FieldElement};
pub use hermitian::{ExpectedCounts, HermitianForm, IncidenceCache, Tangency};
pub use projective::{CodimTwoSubspace, Hyperplane, ProjectivePoint, ProjectiveSpace};
pub use sets::{DenseBitSet, HyperplaneFamily, PointSet, SpectrumReport};
