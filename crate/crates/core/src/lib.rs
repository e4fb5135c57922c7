//! Exact-arithmetic string topology for closed 1-connected manifolds.
//!
//! Given a finite-dimensional Poincaré duality CDGA model of a manifold, this
//! crate computes the Hochschild chain complex with its loop product, BV
//! operator and Gerstenhaber bracket, entirely over ℚ.  A second, independent
//! pipeline computes the free loop space cohomology and its Hodge
//! decomposition from a Sullivan model.  Every identity the library relies on
//! (square-zero differentials, chain maps, BV axioms, the cup-product
//! transport, Betti agreement between the pipelines) is checkable exactly,
//! with no tolerances.
//!
//! Module map:
//! - [`exactlin`]: rationals, sparse matrices, graded spaces, complexes.
//! - [`cdga`]: commutative differential graded algebras and Poincaré duality
//!   models, with the duality map θ and the diagonal bimodule map.
//! - [`hochschild`]: normalized Hochschild chains/cochains, Connes operator,
//!   cup product and Gerstenhaber bracket.
//! - [`stringtop`]: the loop coproduct Φ, the loop algebra ℍ with its BV
//!   structure, and the duality transport onto Hochschild cohomology.
//! - [`sullivan`]: Sullivan models, the free loop model, the circle-action
//!   derivation and the Hodge table.
//! - [`models`]: built-in example models and the JSON schema.

pub mod cdga;
pub mod exactlin;
pub mod hochschild;
pub mod models;
pub mod stringtop;
pub mod sullivan;

pub use cdga::{Cdga, PdModel, ValidationReport};
pub use exactlin::{
    homology, kernel_basis, rank, Complex, DegreeMap, GradedSpace, Homology, Scalar, SparseMatrix,
    SparseVec,
};
pub use hochschild::{CochainComplex, HochschildComplex, Word};
pub use models::{builtin, load_model, BuiltinModel, LoadedModel};
pub use stringtop::{loop_algebra, transport_to_hh, LoopAlgebra};
pub use sullivan::{FreeLoopModel, HodgeTable, SullivanModel};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degree {degree} outside stored range [{lo}, {hi}]")]
    DegreeRange { degree: i64, lo: i64, hi: i64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("not a Poincaré duality model: degenerate pairing in degree {0}")]
    DegeneratePairing(i64),
    #[error("inconsistent model: {0}")]
    Inconsistent(String),
    #[error("mismatched models: {0}")]
    Mismatch(String),
    #[error("unknown builtin model `{0}`")]
    UnknownBuiltin(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
