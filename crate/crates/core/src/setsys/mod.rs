//! Labeled hypergraphs and digraphs on `{1, ..., n}`, subset streams, shadows
//! and isomorphism keys.

mod canonical;
mod digraph;
mod hypergraph;
mod subsets;

pub use canonical::{CanonicalForm, Canonize, DEFAULT_CANON_LIMIT};
pub use digraph::{make_digraph, Digraph};
pub use hypergraph::{make_hypergraph, Hypergraph};
pub use subsets::{
    binomial, bit, full_mask, k_subsets, mask_of, mask_subsets, vertices_of, KSubsets,
};

/// Largest supported vertex count; every vertex set fits a `u64` mask.
pub const MAX_VERTICES: u32 = 64;

/// Shadow of `h`: all `(r-1)`-sets contained in some edge.
pub fn shadow(h: &Hypergraph) -> Hypergraph {
    h.shadow()
}

pub fn degree_sequence(h: &Hypergraph) -> Vec<u64> {
    h.degree_sequence()
}
