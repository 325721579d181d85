//! Graph products of finite groups.
//!
//! A simple graph with a finite group attached to each vertex presents a
//! group: the free product of the vertex groups, with elements of adjacent
//! vertex groups forced to commute. This crate implements the toolkit
//! around that construction:
//!
//! - [`graph`] — cliques, modules, modular quotients, T0/T1 machinery;
//! - [`group`] — multiplication-table groups, isomorphism search,
//!   normal subgroups, Remak factorization, canonical tables;
//! - [`word`] — elements as words in normal form: word problem,
//!   retractions, parabolic membership;
//! - [`lattice`] — the poset of conjugacy classes of parabolic subgroups
//!   with complete carrier, with meet and join;
//! - [`rigidity`] — Remak refinement of a graph of groups, canonical
//!   certificates, and the isomorphism decision for graph-product
//!   presentations;
//! - [`oracle`] — a breadth-first rewrite oracle used as an independent
//!   reference for the word problem;
//! - [`selfcheck`] — runnable suites that exercise the structure theorems
//!   on exhaustive and seeded-random instances.

pub mod graph;
pub mod group;
pub mod lattice;
pub mod oracle;
pub mod rigidity;
pub mod selfcheck;
pub mod word;

pub use graph::{Graph, GraphError, Partition};
pub use group::{FiniteGroup, GroupError, Subgroup};
pub use lattice::{LatticeError, SphericalClass};
pub use rigidity::{Certificate, GogIsomorphism, RigidityError};
pub use word::{GraphOfGroups, Syllable, Word, WordError};

/// Search bounds for the exhaustive algorithms. All caps are configurable;
/// the defaults keep worst cases at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order admitted by subgroup enumeration and Remak
    /// factorization (hard ceiling 128).
    pub search_order: usize,
    /// Largest group order admitted by canonical-table search.
    pub canonical_order: usize,
    /// Largest refined vertex count admitted by certificate labeling.
    pub canonical_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            search_order: 64,
            canonical_order: 24,
            canonical_vertices: 12,
        }
    }
}

/// Mixes a base seed with a trial index into an independent stream seed
/// (splitmix64), so randomized suites can fan out deterministically.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(index.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
