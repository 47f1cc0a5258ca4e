//! Paper assignment across a partition: each side's papers go to the
//! other side's reviewers, so nobody can review a paper from their own
//! conflict component.

use crate::error::{Error, Result};
use crate::model::{AssignmentParams, ConflictGraph, ReviewGraph};
use crate::partition::{partition, PartitionResult};
use serde::{Deserialize, Serialize};

/// How one side's papers are spread over the opposite side's
/// reviewers. Implementations never see the conflict graph; conflict
/// avoidance is already guaranteed by the partition.
pub trait AssignStrategy {
    fn name(&self) -> &str;

    /// Returns one paper list per reviewer, parallel to `reviewers`.
    /// Must give every paper at least `lambda` distinct reviewers and
    /// no reviewer more than `mu` papers.
    fn assign(
        &self,
        reviewers: &[usize],
        papers: &[usize],
        params: &AssignmentParams,
    ) -> Result<Vec<Vec<usize>>>;
}

/// Deals each paper's `lambda` copies to consecutive reviewers in one
/// cyclic pass, papers and reviewers ascending. Consecutive deals hit
/// distinct reviewers whenever lambda does not exceed the reviewer
/// count, and the cyclic pass keeps loads within one of each other, so
/// the two up-front checks make the deal itself infallible.
pub struct BalancedRoundRobin;

impl AssignStrategy for BalancedRoundRobin {
    fn name(&self) -> &str {
        "balanced-round-robin"
    }

    fn assign(
        &self,
        reviewers: &[usize],
        papers: &[usize],
        params: &AssignmentParams,
    ) -> Result<Vec<Vec<usize>>> {
        let mut order: Vec<usize> = (0..reviewers.len()).collect();
        order.sort_by_key(|&i| reviewers[i]);
        let mut papers_sorted = papers.to_vec();
        papers_sorted.sort_unstable();

        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); reviewers.len()];
        if papers_sorted.is_empty() {
            return Ok(sets);
        }
        let q = order.len();
        if q < params.lambda {
            return Err(Error::Contract(format!(
                "strategy {}: every paper needs lambda = {} distinct reviewers, \
                 but only {q} are on the opposite side",
                self.name(),
                params.lambda
            )));
        }
        // Max load is ceil(lambda * papers / q); within mu iff the
        // total demand fits.
        let demand = params.lambda as u128 * papers_sorted.len() as u128;
        if demand > params.mu as u128 * q as u128 {
            return Err(Error::Contract(format!(
                "strategy {}: {demand} reviews over {q} reviewers exceed mu = {}",
                self.name(),
                params.mu
            )));
        }

        let mut deal = 0usize;
        for &paper in &papers_sorted {
            for _ in 0..params.lambda {
                sets[order[deal % q]].push(paper);
                deal += 1;
            }
        }
        Ok(sets)
    }
}

/// Why a review assignment is invalid for the given graph and
/// parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AssignmentViolation {
    SizeMismatch { detail: String },
    ConflictViolated { reviewer: usize, paper: usize },
    ReviewerOverloaded { reviewer: usize, load: usize, mu: usize },
    PaperUnderReviewed { paper: usize, reviews: usize, lambda: usize },
}

impl std::fmt::Display for AssignmentViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::SizeMismatch { detail } => write!(f, "{detail}"),
            Self::ConflictViolated { reviewer, paper } => {
                write!(f, "reviewer {reviewer} is assigned conflicted paper {paper}")
            }
            Self::ReviewerOverloaded { reviewer, load, mu } => {
                write!(f, "reviewer {reviewer} holds {load} papers, above mu = {mu}")
            }
            Self::PaperUnderReviewed { paper, reviews, lambda } => {
                write!(f, "paper {paper} has {reviews} reviews, below lambda = {lambda}")
            }
        }
    }
}

/// First violated clause of the assignment contract, if any:
/// conflict-freedom, the mu cap per reviewer, the lambda floor per
/// paper.
pub fn validate_assignment(
    rg: &ReviewGraph,
    graph: &ConflictGraph,
    params: &AssignmentParams,
) -> std::result::Result<(), AssignmentViolation> {
    if rg.num_reviewers() != graph.num_reviewers() || rg.num_papers() != graph.num_papers() {
        return Err(AssignmentViolation::SizeMismatch {
            detail: format!(
                "assignment covers {} reviewers / {} papers, graph has {} / {}",
                rg.num_reviewers(),
                rg.num_papers(),
                graph.num_reviewers(),
                graph.num_papers()
            ),
        });
    }
    for reviewer in 0..rg.num_reviewers() {
        for &paper in rg.review_set(reviewer) {
            if graph.has_conflict(reviewer, paper) {
                return Err(AssignmentViolation::ConflictViolated { reviewer, paper });
            }
        }
        let load = rg.review_set(reviewer).len();
        if load > params.mu {
            return Err(AssignmentViolation::ReviewerOverloaded {
                reviewer,
                load,
                mu: params.mu,
            });
        }
    }
    for paper in 0..rg.num_papers() {
        let reviews = rg.paper_review_count(paper);
        if reviews < params.lambda {
            return Err(AssignmentViolation::PaperUnderReviewed {
                paper,
                reviews,
                lambda: params.lambda,
            });
        }
    }
    Ok(())
}

/// Partition the graph, then hand each side's papers to the other
/// side's reviewers via the strategy. The returned assignment is
/// re-validated; a strategy that breaks the contract is reported by
/// name.
pub fn divide_and_rank_assign(
    graph: &ConflictGraph,
    params: &AssignmentParams,
    strategy: &dyn AssignStrategy,
) -> Result<(ReviewGraph, PartitionResult)> {
    let part = partition(graph, params)?;
    let rg = assign_across(graph, params, &part, strategy)?;
    Ok((rg, part))
}

/// The assignment half of the pipeline, for a partition already in
/// hand.
pub fn assign_across(
    graph: &ConflictGraph,
    params: &AssignmentParams,
    part: &PartitionResult,
    strategy: &dyn AssignStrategy,
) -> Result<ReviewGraph> {
    let mut review_sets: Vec<Vec<usize>> = vec![Vec::new(); graph.num_reviewers()];

    for (reviewers, papers) in [
        (&part.side_c.reviewers, &part.side_cbar.papers),
        (&part.side_cbar.reviewers, &part.side_c.papers),
    ] {
        let sets = strategy.assign(reviewers, papers, params)?;
        if sets.len() != reviewers.len() {
            return Err(Error::Contract(format!(
                "strategy {} returned {} review sets for {} reviewers",
                strategy.name(),
                sets.len(),
                reviewers.len()
            )));
        }
        for (&reviewer, set) in reviewers.iter().zip(sets) {
            review_sets[reviewer] = set;
        }
    }

    let rg = ReviewGraph::new(review_sets, graph.num_papers())
        .map_err(|e| Error::Contract(format!("strategy {}: {e}", strategy.name())))?;
    if let Err(violation) = validate_assignment(&rg, graph, params) {
        return Err(Error::Contract(format!(
            "strategy {} produced an invalid assignment: {violation}",
            strategy.name()
        )));
    }
    Ok(rg)
}
