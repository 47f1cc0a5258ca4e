//! Connected-component statistics of conflict graphs and the
//! remove-the-busiest-reviewers pruning heuristic.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ConflictGraph;

/// Per-component sizes, largest first: sorted by paper count
/// descending, then reviewer count descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub count: usize,
    /// (reviewers, papers) per component.
    pub sizes: Vec<(usize, usize)>,
}

/// Component membership in BFS discovery order (reviewers scanned
/// before papers, neighbors visited in ascending index order), so the
/// labeling is deterministic and independent of edge input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// members[k] = (reviewer indices, paper indices), both ascending.
    pub members: Vec<(Vec<usize>, Vec<usize>)>,
    /// reviewer_label[r] = component index, usize::MAX for removed reviewers.
    pub reviewer_label: Vec<usize>,
    pub paper_label: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn stats(&self) -> ComponentStats {
        let mut sizes: Vec<(usize, usize)> =
            self.members.iter().map(|(rs, ps)| (rs.len(), ps.len())).collect();
        sizes.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        ComponentStats { count: sizes.len(), sizes }
    }
}

pub fn connected_components(graph: &ConflictGraph) -> Components {
    components_excluding(graph, &vec![false; graph.num_reviewers()])
}

/// Components of the graph with the flagged reviewers (and their
/// edges) deleted. Papers are never deleted; a paper whose every
/// conflicting reviewer is gone becomes a (0 reviewers, 1 paper)
/// component.
fn components_excluding(graph: &ConflictGraph, removed: &[bool]) -> Components {
    let m = graph.num_reviewers();
    let n = graph.num_papers();

    let mut reviewer_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut paper_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, p) in graph.conflicts() {
        if removed[r] {
            continue;
        }
        reviewer_adj[r].push(p);
        paper_adj[p].push(r);
    }

    let mut reviewer_label = vec![usize::MAX; m];
    let mut paper_label = vec![usize::MAX; n];
    let mut members = Vec::new();

    // Vertices are encoded as (is_paper, index) for the shared queue.
    let mut bfs = |start_paper: bool, start: usize,
                   reviewer_label: &mut Vec<usize>,
                   paper_label: &mut Vec<usize>| {
        let label = members.len();
        let mut reviewers = Vec::new();
        let mut papers = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back((start_paper, start));
        if start_paper {
            paper_label[start] = label;
        } else {
            reviewer_label[start] = label;
        }
        while let Some((is_paper, v)) = queue.pop_front() {
            if is_paper {
                papers.push(v);
                for &r in &paper_adj[v] {
                    if reviewer_label[r] == usize::MAX {
                        reviewer_label[r] = label;
                        queue.push_back((false, r));
                    }
                }
            } else {
                reviewers.push(v);
                for &p in &reviewer_adj[v] {
                    if paper_label[p] == usize::MAX {
                        paper_label[p] = label;
                        queue.push_back((true, p));
                    }
                }
            }
        }
        reviewers.sort_unstable();
        papers.sort_unstable();
        members.push((reviewers, papers));
    };

    for r in 0..m {
        if !removed[r] && reviewer_label[r] == usize::MAX {
            bfs(false, r, &mut reviewer_label, &mut paper_label);
        }
    }
    for p in 0..n {
        if paper_label[p] == usize::MAX {
            bfs(true, p, &mut reviewer_label, &mut paper_label);
        }
    }

    Components { members, reviewer_label, paper_label }
}

/// How reviewer degrees are ranked during pruning. Degrees of the
/// surviving reviewers are unchanged by removing other reviewers (the
/// graph is bipartite), so both modes remove the same sequence; the
/// flag exists so that can be checked rather than assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeMode {
    #[default]
    Adaptive,
    Initial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneSnapshot {
    pub removed_count: usize,
    pub stats: ComponentStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneTrace {
    /// Reviewers in removal order.
    pub removed: Vec<usize>,
    /// Component statistics of the residual graph at each requested
    /// checkpoint, ascending.
    pub snapshots: Vec<PruneSnapshot>,
}

/// Iteratively removes the reviewer with the highest conflict degree
/// (ties: lowest index), recording residual component statistics at
/// each checkpoint. Checkpoint 0 is the untouched graph.
pub fn prune_top_degree(
    graph: &ConflictGraph,
    num_remove: usize,
    checkpoints: &[usize],
    mode: DegreeMode,
) -> Result<PruneTrace> {
    let m = graph.num_reviewers();
    if num_remove > m {
        return Err(Error::Precondition(format!(
            "cannot remove {num_remove} of {m} reviewers"
        )));
    }
    for &c in checkpoints {
        if c > num_remove {
            return Err(Error::Precondition(format!(
                "checkpoint {c} exceeds the {num_remove} removals requested"
            )));
        }
    }

    let mut wanted: Vec<usize> = checkpoints.to_vec();
    wanted.sort_unstable();
    wanted.dedup();

    let initial_degrees: Vec<usize> =
        (0..m).map(|r| graph.reviewer_degree(r)).collect();
    let mut removed = vec![false; m];
    let mut order = Vec::new();
    let mut snapshots = Vec::new();

    let snap = |count: usize, removed: &[bool], snapshots: &mut Vec<PruneSnapshot>| {
        snapshots.push(PruneSnapshot {
            removed_count: count,
            stats: components_excluding(graph, removed).stats(),
        });
    };

    if wanted.first() == Some(&0) {
        snap(0, &removed, &mut snapshots);
    }

    for step in 1..=num_remove {
        let victim = match mode {
            // Removing a reviewer deletes only her own edges, so a
            // survivor's residual degree equals her original degree.
            DegreeMode::Adaptive => (0..m)
                .filter(|&r| !removed[r])
                .max_by(|&a, &b| {
                    graph.reviewer_degree(a).cmp(&graph.reviewer_degree(b)).then(b.cmp(&a))
                })
                .expect("survivors remain"),
            DegreeMode::Initial => (0..m)
                .filter(|&r| !removed[r])
                .max_by(|&a, &b| initial_degrees[a].cmp(&initial_degrees[b]).then(b.cmp(&a)))
                .expect("survivors remain"),
        };
        removed[victim] = true;
        order.push(victim);
        if wanted.binary_search(&step).is_ok() {
            snap(step, &removed, &mut snapshots);
        }
    }

    Ok(PruneTrace { removed: order, snapshots })
}
