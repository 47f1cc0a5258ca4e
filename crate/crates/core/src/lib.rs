//! Conflict-aware reviewer assignment and strategyproof rank
//! aggregation for peer review.
//!
//! The pipeline, end to end:
//!
//! 1. [`ingest`] parses conflict graphs, assignments, profiles, and
//!    rankings from CSV/JSON and writes them back canonically.
//! 2. [`analysis`] reports connected components and the effect of
//!    pruning high-degree reviewers.
//! 3. [`partition`] splits reviewers and papers into two sides so that
//!    nobody reviews a side containing her own conflicts, minimizing
//!    the review-load ratio exactly.
//! 4. [`assign`] builds a cross-review assignment (each side reviews
//!    the other) under per-reviewer and per-paper load bounds.
//! 5. [`aggregate`] contracts each side's preference cycles, sorts the
//!    condensation, and interleaves the two sides into one ranking.
//! 6. [`verify`] checks group/pairwise unanimity and
//!    strategyproofness, and constructs impossibility witnesses.
//! 7. [`lab`] exhaustively certifies the small-instance impossibility
//!    results and runs the misplacement Monte-Carlo experiment.
//!
//! Everything is deterministic: identical inputs (and seeds, where
//! sampling is involved) produce byte-identical outputs.

pub mod aggregate;
pub mod analysis;
pub mod assign;
pub mod error;
pub mod ingest;
pub mod lab;
pub mod model;
pub mod partition;
pub mod perm;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    AggregateRanking, AssignmentParams, ConflictGraph, Profile, Ranking, ReviewGraph,
};
