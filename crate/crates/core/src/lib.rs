//! Finite square avoidance.
//!
//! Words that avoid squares `vv` with `|v|` in a finite length set `s`, the orbit
//! partition `o(s)` that every dead-end of the sequential method must coarsen, the
//! minimal alphabet size `minA(s)` (predicted in closed form and searched exactly),
//! and the avoidance digraph `G(s)` with dead-end detection, trimming and random walks.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod graph;
pub mod partition;
pub mod solver;
pub mod structure;
pub mod word;

pub use error::{Error, Result};
pub use graph::{
    dead_ends, dead_starts, explore_sequential, prune_core, random_walk, sequential_simulate,
    sequential_simulate_from, AvoidanceGraph, Exploration, SimKind, SimOutcome, Walk,
};
pub use partition::{
    coarsenings_with_k_blocks, generic_word_of, orbit_closure, partition_has_square,
    primary_conditions_ok, refines, tau_apply, GenericWord, SetPartition,
};
pub use solver::{
    chromatic_number, dead_end_words_from, min_a_exact, primary_difference_graph, DifferenceGraph,
    MinAResult, MinAValue, SolverConfig,
};
pub use structure::{
    condition_c, condition_d, generic_word_recursive, is_geometric_doubling, m_value,
    predict_min_a, theorem1_predict, DeadEndRule, DeadEndVerdict, DeadEnds, MinAVerdict,
};
pub use word::{
    has_square_at, is_s_squarefree, reverse, square_created_by_append, Alphabet, LengthSeq, Square,
    Word,
};
