//! Normalized Hochschild chains and cochains of a CDGA.
//!
//! Chains are words `a₀⊗[a₁|…|a_k]` with head in `A` and letters in the
//! positive-degree part `Ā`; the (upper) degree is `|a₀| + Σ(|a_i|−1)`.
//! Suspension degrees `|sa| = |a|−1` drive every Koszul sign.
//!
//! Sign conventions, fixed once here and used everywhere:
//!
//! - `ε_i = |a₀| + Σ_{j<i} |sa_j|`.
//! - Internal part of the differential:
//!   `d₀(w) = d(a₀)⊗[…] − Σ_i (−1)^{ε_i} a₀⊗[…|d(a_i)|…]`.
//! - Merging part:
//!   `d₁(w) = (−1)^{|a₀|} (a₀a₁)⊗[a₂|…] + Σ_{i≥2} (−1)^{ε_i} a₀⊗[…|a_{i−1}a_i|…]
//!    − (−1)^{ε_k(1+|a_k|)} (a_k a₀)⊗[a₁|…|a_{k−1}]`.
//!   The cyclic (wrap-around) sign is the two-sided bar sign composed with
//!   the Koszul cost of carrying `a_k` around past everything before it;
//!   it is pinned by `∂² = 0`, `B∂ + ∂B = 0` and `H^*` of the sphere models.
//! - Rotation operator (degree −1):
//!   `B(a₀⊗[a₁|…|a_n]) = Σ_i (−1)^{ε̄_i} 1⊗[a_i|…|a_n|a₀|…|a_{i−1}]` for
//!   `|a₀| > 0` and `0` otherwise, with
//!   `ε̄_i = (|sa₀|+…+|sa_{i−1}|)(|sa_i|+…+|sa_n|)`.
//!
//! A degree-`d` map is a chain map when `∂∘f = (−1)^d f∘∂`.

mod chain;
mod cochain;

pub use chain::{
    boundary_terms, chain_word_basis, connes_terms, filtration_level, letter_words,
    verify_chain_identities, HochschildComplex, Word,
};
pub use cochain::{verify_cochain_identities, CochainComplex, CochainElt};
