//! Exact computer algebra on truncated Hida Fock spaces.
//!
//! Coefficients live in ℚ(i) ([`Scalar`]). Basis vectors are indexed by finite
//! multi-indices ([`MultiIndex`]); all computations are carried out inside a
//! [`TruncationCaps`] window of modes `< K` and degree `≤ N`.

pub mod check;
pub mod error;
pub mod expansion;
pub mod fock;
pub mod hochschild;
pub mod json;
pub mod linalg;
pub mod multiindex;
pub mod operators;
mod par;
pub mod sample;
pub mod scalar;
pub mod symbol;

pub use error::{Error, Result};
pub use expansion::{block_is_reliable, expand, extract_kernels, reconstruct, Expansion};
pub use fock::{
    coherent, norm_squared, pairing, s_transform, wick_power, wick_product, FockVector, TestVector,
    TruncationCaps,
};
pub use hochschild::{
    coboundary, coboundary_kernel, coboundary_table, cohomology_dims, Cochain, CohomologyReport,
    Route, SignRule,
};
pub use multiindex::MultiIndex;
pub use operators::{
    apply_kernel, apply_table, table_from_kernel, BasisActionTable, BlockId, KernelFamily,
    KernelKey, LadderConstants,
};
pub use scalar::Scalar;
pub use symbol::{reduced_symbol, symbol_numeric, symbol_poly, Monomial, SymbolPolynomial};

/// Whether the data-parallel backend is compiled in.
pub const fn is_parallel() -> bool {
    par::is_parallel()
}
