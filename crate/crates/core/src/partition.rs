//! Splitting a conflict graph into two review-compatible sides.
//!
//! Connected components are atomic: every component goes wholly to one
//! side. A side split (r reviewers, p papers on side C) is workable
//! when reviewers of each side can cover the other side's papers, i.e.
//! max{p/(m-r), (n-p)/r} <= mu/lambda. Reachable (r, p) pairs are found
//! with a layered subset-sum table over the components.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::analysis::{connected_components, Components};
use crate::error::{Error, Result};
use crate::model::{AssignmentParams, ConflictGraph};

/// Layer k records which (reviewer, paper) totals are achievable by
/// taking a subset of the first k components. Layer 1 holds exactly
/// (0, 0) and the first component's size; layer k is the union of
/// layer k-1 and its translate by component k's size.
pub struct ReachabilityTable {
    rows: usize,
    cols: usize,
    layers: Vec<BitGrid>,
    /// Component sizes in discovery order, parallel to the layers.
    pub component_sizes: Vec<(usize, usize)>,
    /// Cell-fill operations performed, for complexity checks.
    pub cells_filled: u64,
}

impl ReachabilityTable {
    pub fn build(graph: &ConflictGraph) -> (Self, Components) {
        let m = graph.num_reviewers();
        let n = graph.num_papers();
        let comps = connected_components(graph);
        let sizes: Vec<(usize, usize)> =
            comps.members.iter().map(|(rs, ps)| (rs.len(), ps.len())).collect();

        let rows = m + 1;
        let cols = n + 1;
        let mut layers: Vec<BitGrid> = Vec::with_capacity(sizes.len());
        let mut cells: u64 = 0;

        for (k, &(rk, pk)) in sizes.iter().enumerate() {
            let mut grid = BitGrid::new(rows, cols);
            if k == 0 {
                grid.set(0, 0);
                grid.set(rk, pk);
                cells += 2;
            } else {
                let prev = &layers[k - 1];
                for r in 0..rows {
                    for p in 0..cols {
                        let reachable = prev.get(r, p)
                            || (r >= rk && p >= pk && prev.get(r - rk, p - pk));
                        if reachable {
                            grid.set(r, p);
                        }
                        cells += 1;
                    }
                }
            }
            layers.push(grid);
        }

        (
            Self { rows, cols, layers, component_sizes: sizes, cells_filled: cells },
            comps,
        )
    }

    pub fn num_components(&self) -> usize {
        self.layers.len()
    }

    /// Is (r, p) achievable with a subset of the first k components?
    /// k is 1-based.
    pub fn reachable(&self, k: usize, r: usize, p: usize) -> bool {
        r < self.rows && p < self.cols && self.layers[k - 1].get(r, p)
    }
}

struct BitGrid {
    cols: usize,
    words: Vec<u64>,
}

impl BitGrid {
    fn new(rows: usize, cols: usize) -> Self {
        Self { cols, words: vec![0; (rows * cols).div_ceil(64)] }
    }

    fn get(&self, r: usize, c: usize) -> bool {
        let bit = r * self.cols + c;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    fn set(&mut self, r: usize, c: usize) {
        let bit = r * self.cols + c;
        self.words[bit / 64] |= 1 << (bit % 64);
    }
}

/// Exact nonnegative rational, for comparing review-load ratios
/// without rounding. Always stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadRatio {
    num: u64,
    den: u64,
}

impl LoadRatio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "load ratio denominator must be positive");
        let g = gcd(num, den);
        Self { num: num / g, den: den / g }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl PartialOrd for LoadRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LoadRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

/// Worst per-reviewer load implied by putting r reviewers and p papers
/// on side C: max{p/(m-r), (n-p)/r}. `None` when a side has papers but
/// no reviewers to cover them (zero denominator with nonzero
/// numerator).
pub fn side_load_ratio(m: usize, n: usize, r: usize, p: usize) -> Option<LoadRatio> {
    let t1 = if r == m {
        if p == 0 {
            LoadRatio::new(0, 1)
        } else {
            return None;
        }
    } else {
        LoadRatio::new(p as u64, (m - r) as u64)
    };
    let t2 = if r == 0 {
        if n == p {
            LoadRatio::new(0, 1)
        } else {
            return None;
        }
    } else {
        LoadRatio::new((n - p) as u64, r as u64)
    };
    Some(t1.max(t2))
}

fn ratio_within(ratio: LoadRatio, params: &AssignmentParams) -> bool {
    ratio.num() as u128 * params.lambda as u128 <= params.mu as u128 * ratio.den() as u128
}

/// Each paper needs `lambda` distinct reviewers, so any side holding
/// papers needs at least that many reviewers across from it. The load
/// ratio alone misses this when mu exceeds lambda.
fn enough_opposite_reviewers(
    m: usize,
    n: usize,
    r: usize,
    p: usize,
    params: &AssignmentParams,
) -> bool {
    (p == 0 || m - r >= params.lambda) && (n - p == 0 || r >= params.lambda)
}

/// One side of a partition. Members are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSide {
    pub reviewers: Vec<usize>,
    pub papers: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub side_c: PartitionSide,
    pub side_cbar: PartitionSide,
}

impl PartitionResult {
    /// Validates that the two sides partition both vertex sets.
    pub fn new(
        num_reviewers: usize,
        num_papers: usize,
        mut side_c: PartitionSide,
        mut side_cbar: PartitionSide,
    ) -> Result<Self> {
        side_c.reviewers.sort_unstable();
        side_c.papers.sort_unstable();
        side_cbar.reviewers.sort_unstable();
        side_cbar.papers.sort_unstable();
        check_partition_of(num_reviewers, &side_c.reviewers, &side_cbar.reviewers, "reviewer")?;
        check_partition_of(num_papers, &side_c.papers, &side_cbar.papers, "paper")?;
        Ok(Self { side_c, side_cbar })
    }

    pub fn reviewer_on_side_c(&self, r: usize) -> bool {
        self.side_c.reviewers.binary_search(&r).is_ok()
    }

    pub fn paper_on_side_c(&self, p: usize) -> bool {
        self.side_c.papers.binary_search(&p).is_ok()
    }
}

fn check_partition_of(
    total: usize,
    a: &[usize],
    b: &[usize],
    what: &str,
) -> Result<()> {
    let mut seen = vec![false; total];
    for &x in a.iter().chain(b) {
        if x >= total {
            return Err(Error::Precondition(format!("{what} {x} out of range")));
        }
        if seen[x] {
            return Err(Error::Precondition(format!("{what} {x} appears on both sides")));
        }
        seen[x] = true;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(Error::Precondition(format!("{what} {missing} is on neither side")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionStats {
    pub num_components: usize,
    pub cells_filled: u64,
    pub chosen_ratio: LoadRatio,
}

/// Picks a feasible side split, or fails with the best achievable
/// ratio. A cell is feasible when its load ratio is within mu/lambda
/// and each side with papers faces at least lambda opposite reviewers.
/// Among feasible (r, p) cells the one minimizing the load ratio wins,
/// ties broken by smaller r then smaller p; backtracking prefers
/// putting a component on side C when both choices work.
pub fn partition(graph: &ConflictGraph, params: &AssignmentParams) -> Result<PartitionResult> {
    partition_with_stats(graph, params).map(|(result, _)| result)
}

pub fn partition_with_stats(
    graph: &ConflictGraph,
    params: &AssignmentParams,
) -> Result<(PartitionResult, PartitionStats)> {
    let m = graph.num_reviewers();
    let n = graph.num_papers();
    if m < 2 {
        return Err(Error::Precondition(format!(
            "partitioning needs at least 2 reviewers, found {m}"
        )));
    }
    params.check_against(n)?;

    let (table, comps) = ReachabilityTable::build(graph);
    let k_last = table.num_components();

    let mut best_feasible: Option<(LoadRatio, usize, usize)> = None;
    let mut best_any: Option<LoadRatio> = None;
    for r in 0..=m {
        for p in 0..=n {
            if !table.reachable(k_last, r, p) {
                continue;
            }
            let Some(ratio) = side_load_ratio(m, n, r, p) else { continue };
            best_any = Some(match best_any {
                Some(b) => b.min(ratio),
                None => ratio,
            });
            if !ratio_within(ratio, params) || !enough_opposite_reviewers(m, n, r, p, params) {
                continue;
            }
            let candidate = (ratio, r, p);
            if best_feasible.is_none_or(|b| candidate < b) {
                best_feasible = Some(candidate);
            }
        }
    }

    let Some((ratio, mut r, mut p)) = best_feasible else {
        return Err(Error::InfeasiblePartition {
            best_ratio: best_any.map(|b| b.as_f64()),
        });
    };

    // Walk the layers back down, preferring to include each component.
    let mut in_c = vec![false; k_last];
    for k in (2..=k_last).rev() {
        let (rk, pk) = table.component_sizes[k - 1];
        if r >= rk && p >= pk && table.reachable(k - 1, r - rk, p - pk) {
            in_c[k - 1] = true;
            r -= rk;
            p -= pk;
        }
        debug_assert!(table.reachable(k - 1, r, p));
    }
    if (r, p) == table.component_sizes[0] {
        in_c[0] = true;
    } else {
        debug_assert_eq!((r, p), (0, 0));
    }

    let mut side_c = PartitionSide { reviewers: Vec::new(), papers: Vec::new() };
    let mut side_cbar = PartitionSide { reviewers: Vec::new(), papers: Vec::new() };
    for (k, (reviewers, papers)) in comps.members.iter().enumerate() {
        let side = if in_c[k] { &mut side_c } else { &mut side_cbar };
        side.reviewers.extend(reviewers);
        side.papers.extend(papers);
    }

    let result = PartitionResult::new(m, n, side_c, side_cbar)?;
    let stats = PartitionStats {
        num_components: k_last,
        cells_filled: table.cells_filled,
        chosen_ratio: ratio,
    };
    Ok((result, stats))
}

/// Why a claimed partition is not acceptable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PartitionViolation {
    /// A vertex is missing, out of range, or on both sides.
    NotAPartition { detail: String },
    /// A conflict edge connects a reviewer to a paper on the other
    /// side, so that reviewer would be asked to review it.
    CrossingConflict { reviewer: usize, paper: usize },
    /// The split passes structure but fails the load test.
    RatioExceeded { ratio: f64, limit: f64 },
    /// A side has papers but no reviewers on the other side to cover
    /// them.
    UncoverableSide { papers_side_c: bool },
    /// A side's papers face fewer opposite reviewers than the lambda
    /// distinct reviews each paper needs.
    TooFewReviewers { papers_side_c: bool, available: usize, lambda: usize },
}

impl std::fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotAPartition { detail } => write!(f, "sides do not partition the graph: {detail}"),
            Self::CrossingConflict { reviewer, paper } => write!(
                f,
                "conflict edge ({reviewer}, {paper}) crosses between the sides"
            ),
            Self::RatioExceeded { ratio, limit } => {
                write!(f, "load ratio {ratio} exceeds mu/lambda = {limit}")
            }
            Self::UncoverableSide { papers_side_c } => write!(
                f,
                "papers on side {} have no reviewers on the opposite side",
                if *papers_side_c { "C" } else { "Cbar" }
            ),
            Self::TooFewReviewers { papers_side_c, available, lambda } => write!(
                f,
                "papers on side {} face {available} opposite reviewers but each needs \
                 lambda = {lambda} distinct reviews",
                if *papers_side_c { "C" } else { "Cbar" }
            ),
        }
    }
}

/// Checks every partition invariant against the graph and parameters,
/// reporting the first violated clause with a witness.
pub fn verify_partition(
    result: &PartitionResult,
    graph: &ConflictGraph,
    params: &AssignmentParams,
) -> std::result::Result<(), PartitionViolation> {
    let m = graph.num_reviewers();
    let n = graph.num_papers();
    let structural = PartitionResult::new(
        m,
        n,
        result.side_c.clone(),
        result.side_cbar.clone(),
    );
    if let Err(e) = structural {
        return Err(PartitionViolation::NotAPartition { detail: e.to_string() });
    }

    for (reviewer, paper) in graph.conflicts() {
        if result.reviewer_on_side_c(reviewer) != result.paper_on_side_c(paper) {
            return Err(PartitionViolation::CrossingConflict { reviewer, paper });
        }
    }

    let r = result.side_c.reviewers.len();
    let p = result.side_c.papers.len();
    match side_load_ratio(m, n, r, p) {
        None => Err(PartitionViolation::UncoverableSide {
            papers_side_c: r == m,
        }),
        Some(ratio) if !ratio_within(ratio, params) => Err(PartitionViolation::RatioExceeded {
            ratio: ratio.as_f64(),
            limit: params.mu as f64 / params.lambda as f64,
        }),
        Some(_) if !enough_opposite_reviewers(m, n, r, p, params) => {
            let starved_c = p > 0 && m - r < params.lambda;
            Err(PartitionViolation::TooFewReviewers {
                papers_side_c: starved_c,
                available: if starved_c { m - r } else { r },
                lambda: params.lambda,
            })
        }
        Some(_) => Ok(()),
    }
}
