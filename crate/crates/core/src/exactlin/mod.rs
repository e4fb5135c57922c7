//! Exact rational arithmetic and graded linear algebra.
//!
//! Everything downstream reduces to this module: arbitrary-precision
//! rationals, sparse matrices with exact Gaussian elimination, graded vector
//! spaces with canonical string basis labels, degree-homogeneous maps stored
//! as per-degree blocks, and cochain complexes with homology.
//!
//! Grading is cohomological (upper) throughout.  A degree-`d` map `f`
//! "commutes with differentials" in the graded sense, `d ∘ f = (−1)^d f ∘ d`;
//! [`DegreeMap::chain_defect`] measures the failure of that identity.

mod complex;
mod matrix;
mod scalar;
mod space;

pub use complex::{homology, Complex, Homology};
pub use matrix::{kernel_basis, rank, solve, Elimination, SparseMatrix, SparseVec};
pub use scalar::{
    factorial, format_scalar, int, parse_scalar, ratio, sv_add_scaled, sv_scale, Scalar,
};
pub use space::{DegreeMap, GradedSpace};

pub use num_traits::Zero;
