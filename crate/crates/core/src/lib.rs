//! Rectangular diagrams of Legendrian and transverse links.
//!
//! A diagram is a pair of permutations on an `n x n` torus grid. This crate
//! provides canonical keys, the elementary moves, classical invariants,
//! exchange classes and bounded equivalence search.

#![allow(clippy::needless_range_loop)]

pub mod atlas;
pub mod canon;
pub mod census;
pub mod cert;
pub mod exchange;
pub mod grid;
pub mod invariants;
pub mod moves;
pub mod search;
pub mod text;

pub use canon::{CanonicalKey, KeyError, Shift};
pub use grid::{Diagram, GridError, RawDiagram, Sign, Vertex, MAX_GRID_SIZE};
pub use moves::{
    apply, apply_record, classify, classify_aligned, enumerate_moves, is_local, ContactSign,
    Move, MoveCategory, MoveFilter, MoveKind, MoveRecord, NotAnElementaryMove, OrientedType,
    Quadrant, StabType,
};
pub use cert::Certificate;
pub use search::{SearchCaps, Verdict};
