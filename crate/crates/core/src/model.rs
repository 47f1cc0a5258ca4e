//! Core domain types: conflict graphs, review assignments, rankings.
//!
//! Reviewers and papers are dense 0-based indices throughout. External
//! string identifiers live in [`crate::ingest::SymbolTable`] and are
//! translated at the I/O boundary only. Ranking positions are 1-based
//! with position 1 the best.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bipartite conflict graph: an edge (reviewer, paper) means the
/// reviewer must not review the paper (authorship or other conflict).
/// Isolated vertices on either side are permitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictGraph {
    num_reviewers: usize,
    num_papers: usize,
    conflicts: BTreeSet<(usize, usize)>,
}

impl ConflictGraph {
    pub fn new(
        num_reviewers: usize,
        num_papers: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut conflicts = BTreeSet::new();
        for (r, p) in pairs {
            if r >= num_reviewers {
                return Err(Error::Precondition(format!(
                    "conflict references reviewer {r} but there are {num_reviewers} reviewers"
                )));
            }
            if p >= num_papers {
                return Err(Error::Precondition(format!(
                    "conflict references paper {p} but there are {num_papers} papers"
                )));
            }
            conflicts.insert((r, p));
        }
        Ok(Self { num_reviewers, num_papers, conflicts })
    }

    pub fn num_reviewers(&self) -> usize {
        self.num_reviewers
    }

    pub fn num_papers(&self) -> usize {
        self.num_papers
    }

    pub fn num_conflicts(&self) -> usize {
        self.conflicts.len()
    }

    pub fn has_conflict(&self, reviewer: usize, paper: usize) -> bool {
        self.conflicts.contains(&(reviewer, paper))
    }

    /// Edges in sorted order.
    pub fn conflicts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.conflicts.iter().copied()
    }

    /// Papers the reviewer is conflicted with, ascending.
    pub fn reviewer_conflicts(&self, reviewer: usize) -> Vec<usize> {
        self.conflicts
            .range((reviewer, 0)..=(reviewer, usize::MAX))
            .map(|&(_, p)| p)
            .collect()
    }

    pub fn reviewer_degree(&self, reviewer: usize) -> usize {
        self.conflicts.range((reviewer, 0)..=(reviewer, usize::MAX)).count()
    }
}

/// Review-load parameters: each reviewer gets at most `mu` papers and
/// each paper needs at least `lambda` reviews.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentParams {
    pub mu: usize,
    pub lambda: usize,
}

impl AssignmentParams {
    pub fn new(mu: usize, lambda: usize) -> Result<Self> {
        if mu == 0 || lambda == 0 {
            return Err(Error::Precondition(
                "mu and lambda must both be at least 1".into(),
            ));
        }
        Ok(Self { mu, lambda })
    }

    /// `mu` may not exceed the number of papers a reviewer could see.
    pub fn check_against(&self, num_papers: usize) -> Result<()> {
        if self.mu > num_papers {
            return Err(Error::Precondition(format!(
                "mu = {} exceeds the number of papers {num_papers}",
                self.mu
            )));
        }
        Ok(())
    }
}

/// Who reviews what: one ordered paper list per reviewer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewGraph {
    review_sets: Vec<Vec<usize>>,
    num_papers: usize,
}

impl ReviewGraph {
    pub fn new(review_sets: Vec<Vec<usize>>, num_papers: usize) -> Result<Self> {
        for (i, set) in review_sets.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &p in set {
                if p >= num_papers {
                    return Err(Error::Precondition(format!(
                        "reviewer {i} assigned paper {p} but there are {num_papers} papers"
                    )));
                }
                if !seen.insert(p) {
                    return Err(Error::Precondition(format!(
                        "reviewer {i} assigned paper {p} more than once"
                    )));
                }
            }
        }
        Ok(Self { review_sets, num_papers })
    }

    pub fn num_reviewers(&self) -> usize {
        self.review_sets.len()
    }

    pub fn num_papers(&self) -> usize {
        self.num_papers
    }

    pub fn review_set(&self, reviewer: usize) -> &[usize] {
        &self.review_sets[reviewer]
    }

    pub fn review_sets(&self) -> &[Vec<usize>] {
        &self.review_sets
    }

    /// Number of review sets containing the paper.
    pub fn paper_review_count(&self, paper: usize) -> usize {
        self.review_sets.iter().filter(|s| s.contains(&paper)).count()
    }

    /// Reviewers whose sets contain both papers.
    pub fn common_reviewers(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.num_reviewers())
            .filter(|&i| self.review_sets[i].contains(&a) && self.review_sets[i].contains(&b))
            .collect()
    }
}

/// A strict ranking over a subset of papers, best first. Ties are not
/// representable; duplicates are rejected on construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &p in &order {
            if !seen.insert(p) {
                return Err(Error::Parse {
                    line: None,
                    msg: format!("paper {p} appears twice in a ranking; ties and repeats are not allowed"),
                });
            }
        }
        Ok(Self(order))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn papers(&self) -> &[usize] {
        &self.0
    }

    /// 1-based position of the paper, if ranked.
    pub fn position(&self, paper: usize) -> Option<usize> {
        self.0.iter().position(|&p| p == paper).map(|i| i + 1)
    }

    /// True when `a` is ranked and `b` is either below it or absent.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(pa), Some(pb)) => pa < pb,
            (Some(_), None) => true,
            _ => false,
        }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.0.iter().copied().collect()
    }

    /// Sub-ranking over the given papers, preserving order.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Ranking {
        Ranking(self.0.iter().copied().filter(|p| keep.contains(p)).collect())
    }

    pub fn reversed(&self) -> Ranking {
        Ranking(self.0.iter().rev().copied().collect())
    }
}

/// One ranking per reviewer. Reviewer `i`'s ranking is expected to
/// cover exactly her review set; [`Profile::matches_assignment`]
/// checks that alignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile(Vec<Ranking>);

impl Profile {
    pub fn new(rankings: Vec<Ranking>) -> Self {
        Self(rankings)
    }

    pub fn num_reviewers(&self) -> usize {
        self.0.len()
    }

    pub fn ranking(&self, reviewer: usize) -> &Ranking {
        &self.0[reviewer]
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.0
    }

    /// Replace one reviewer's ranking, leaving the rest untouched.
    pub fn with_ranking(&self, reviewer: usize, ranking: Ranking) -> Profile {
        let mut rankings = self.0.clone();
        rankings[reviewer] = ranking;
        Profile(rankings)
    }

    /// Every reviewer must rank exactly the papers assigned to her.
    pub fn matches_assignment(&self, rg: &ReviewGraph) -> Result<()> {
        if self.num_reviewers() != rg.num_reviewers() {
            return Err(Error::Contract(format!(
                "profile has {} rankings but the assignment has {} reviewers",
                self.num_reviewers(),
                rg.num_reviewers()
            )));
        }
        for (i, ranking) in self.0.iter().enumerate() {
            let expected: BTreeSet<usize> = rg.review_set(i).iter().copied().collect();
            if ranking.support() != expected {
                return Err(Error::Contract(format!(
                    "reviewer {i} ranks papers {:?} but was assigned {:?}",
                    ranking.papers(),
                    rg.review_set(i)
                )));
            }
        }
        Ok(())
    }
}

/// A total ranking of all papers: a bijection between positions 1..=n
/// and papers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateRanking {
    order: Vec<usize>,    // order[k] = paper at position k+1
    position: Vec<usize>, // position[paper] = 1-based position
}

impl AggregateRanking {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![0usize; n];
        for (k, &p) in order.iter().enumerate() {
            if p >= n {
                return Err(Error::Contract(format!(
                    "aggregate ranking mentions paper {p} but covers {n} papers"
                )));
            }
            if position[p] != 0 {
                return Err(Error::Contract(format!(
                    "aggregate ranking places paper {p} at two positions"
                )));
            }
            position[p] = k + 1;
        }
        Ok(Self { order, position })
    }

    pub fn num_papers(&self) -> usize {
        self.order.len()
    }

    /// Papers from best to worst.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 1-based position of the paper; position 1 is best.
    pub fn position(&self, paper: usize) -> usize {
        self.position[paper]
    }

    pub fn ranks_above(&self, a: usize, b: usize) -> bool {
        self.position[a] < self.position[b]
    }
}
