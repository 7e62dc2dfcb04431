//! Covering hypergraphs and `S_k` digraphs: data types, cover checks,
//! explicit constructions, closed-form bounds and exact small-case search.
//!
//! Vertices are `1..=n`; sets are also handled as `u64` bitmasks with vertex
//! `v` at bit `v - 1`.

pub mod bounds;
pub mod constructions;
pub mod coverage;
pub mod error;
pub mod io;
pub mod setsys;
pub mod solver;

pub use bounds::{
    covering_lb, erdos_moser_f, fractional_binomial, g_steiner, g_value, inner_size, kk_shadow_lb,
    loomis_whitney_check, lovasz_x, FractionalDegree, LoomisWhitney, SteinerValue,
};
pub use constructions::{
    build_a, build_g, build_g_detailed, duplicate_vertex, em_graph, greedy_covering,
    inner_covering, modular_covering, BuiltG, CoveringStrategy,
};
pub use coverage::{
    audit, audit_exhaustive, cover_multiplicity, covering_vertices, covers, has_property_sk,
    shadow_contains, CoverIndex, CoverReport, SkReport,
};
pub use error::{Error, Result};
pub use setsys::{
    make_digraph, make_hypergraph, CanonicalForm, Canonize, Digraph, Hypergraph, MAX_VERTICES,
};
pub use solver::{
    enumerate_digraph_optima, enumerate_extremal, is_member_a, is_member_g, solve_d,
    solve_digraph_min, solve_f, solve_oriented_min_vertices, Certificate, OrientedSearch,
    ProofState, SearchBudget, SolveResult,
};
