//! Fock expansion of truncated multilinear operators.
//!
//! The kernel `K_{l,M}` is read off the reduced symbol monomial by monomial:
//! the coefficient of `∏_j (x^{(j)})^{J_j} y^I` is `λ_{I,J}`. On a table with
//! caps `(K, N)` every block with `l ≤ N` and `M_j ≤ N` for all `j` is exact,
//! and those are the only blocks a table can see (a created pattern of degree
//! `> N` is truncated away, an annihilated pattern of degree `> N` kills every
//! admissible argument). Hence `extract_kernels` and `reconstruct` are mutually
//! inverse linear bijections between tables and in-cap kernel families.

use crate::fock::TruncationCaps;
use crate::operators::{table_from_kernel, BasisActionTable, BlockId, KernelFamily};
use crate::symbol::{reduced_symbol, symbol_poly};

/// Whether block `(l, M)` is determined exactly by a table with `caps`.
pub fn block_is_reliable(block: &BlockId, caps: &TruncationCaps) -> bool {
    block.l <= caps.max_degree && block.m.iter().all(|&m| m <= caps.max_degree)
}

/// An extracted family together with the caps it was read at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub family: KernelFamily,
    pub caps: TruncationCaps,
}

impl Expansion {
    /// Blocks paired with their reliability flag.
    pub fn blocks(&self) -> Vec<(BlockId, bool)> {
        self.family
            .blocks()
            .into_keys()
            .map(|b| {
                let ok = block_is_reliable(&b, &self.caps);
                (b, ok)
            })
            .collect()
    }

    /// Only the reliable blocks.
    pub fn reliable(&self) -> KernelFamily {
        let caps = self.caps;
        self.family.filter(|k| block_is_reliable(&k.block(), &caps))
    }
}

/// Kernel family of a table, read from its reduced symbol.
pub fn extract_kernels(t: &BasisActionTable) -> KernelFamily {
    reduced_symbol(&symbol_poly(t)).to_kernel()
}

/// Like [`extract_kernels`], keeping the caps for reliability reporting.
pub fn expand(t: &BasisActionTable) -> Expansion {
    Expansion { family: extract_kernels(t), caps: t.caps() }
}

/// `Ξ = Σ_{l,M} Ξ_{l,M}(K_{l,M})` tabulated within `caps`.
pub fn reconstruct(k: &KernelFamily, caps: TruncationCaps) -> BasisActionTable {
    table_from_kernel(k, caps)
}
