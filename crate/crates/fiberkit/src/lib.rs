//! Frames, multiplication-invariant operators, and Zak/fiberization
//! analysis at desk scale: finite abelian groups, discrete weighted measure
//! spaces, finite-dimensional fibers.
//!
//! The crate revolves around one correspondence: closed subspaces of
//! `L2(X; C^d)` stable under multiplication by bounded functions are exactly
//! the spaces cut out by a field of fibers `x -> J(x)`, and the operators
//! commuting with multiplications are exactly the fields of blocks
//! `x -> R(x): J(x) -> J'(x)` acting fiberwise. Global questions (norms,
//! spectra, frame bounds, duality, unitary equivalence) reduce to fiber
//! questions, which is what [`range`], [`frames`], [`rep`], and [`zak`]
//! compute.

pub mod descriptor;
pub mod error;
pub mod frames;
pub mod group;
pub(crate) mod linalg;
pub mod range;
pub mod rep;
pub mod sidemo;
pub mod space;
pub mod tol;
pub mod zak;

pub use error::{Error, Result};
pub use frames::{FrameReport, GeneratorSystem, GramianField, Verdict};
pub use group::{CosetTransversal, DualData, FiniteAbelianGroup, FiniteGroupTable, SubgroupEmbedding};
pub use range::{MIOperator, RangeFunction, RangeOperator};
pub use space::{DeterminingSet, MeasureSpace, VectorField};

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;

/// Matrix alias used throughout the public API.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Vector alias used throughout the public API.
pub type CVector = nalgebra::DVector<Complex64>;
