//! Rank aggregation: contract each side's preference graph to its
//! strongly connected groups, sort the groups topologically, order
//! within groups, then interleave the two sides into one ranking.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::model::{AggregateRanking, Profile, Ranking};
use crate::partition::PartitionResult;

/// Directed preference graph of one side: vertices are the side's
/// papers that appear in at least one ranking, and each ranking
/// contributes an edge per consecutive pair (deduplicated).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileGraph {
    pub vertices: Vec<usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

impl ProfileGraph {
    pub fn from_rankings(rankings: &[Ranking]) -> Self {
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for ranking in rankings {
            let papers = ranking.papers();
            vertices.extend(papers.iter().copied());
            for pair in papers.windows(2) {
                edges.insert((pair[0], pair[1]));
            }
        }
        Self { vertices: vertices.into_iter().collect(), edges }
    }
}

/// Strongly connected components of a `ProfileGraph`, with the
/// condensation edges. Component membership is what matters;
/// `component_of` maps each vertex (by original paper index) to its
/// component id.
#[derive(Debug, Clone)]
pub struct Condensation {
    pub components: Vec<Vec<usize>>,
    pub component_of: BTreeMap<usize, usize>,
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn condense(graph: &ProfileGraph) -> Condensation {
    let verts = &graph.vertices;
    let index_of: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for &(a, b) in &graph.edges {
        adj[index_of[&a]].push(index_of[&b]);
    }

    let scc_of = tarjan(&adj);
    let num_sccs = scc_of.iter().copied().max().map_or(0, |x| x + 1);

    let mut components: Vec<Vec<usize>> = vec![Vec::new(); num_sccs];
    let mut component_of = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        components[scc_of[i]].push(v);
        component_of.insert(v, scc_of[i]);
    }
    let mut edges = BTreeSet::new();
    for &(a, b) in &graph.edges {
        let (ca, cb) = (component_of[&a], component_of[&b]);
        if ca != cb {
            edges.insert((ca, cb));
        }
    }
    Condensation { components, component_of, edges }
}

/// Iterative Tarjan; returns the component id of each vertex.
fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut scc_of = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut next_scc = 0usize;

    for start in 0..n {
        if index[start] != UNSET {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = next_index;
        lowlink[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                call.pop();
                if lowlink[v] == index[v] {
                    // v roots a component.
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        scc_of[w] = next_scc;
                        if w == v {
                            break;
                        }
                    }
                    next_scc += 1;
                }
                if let Some(&mut (parent, _)) = call.last_mut() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
            }
        }
    }
    scc_of
}

/// Orders the papers of one strongly connected group.
pub trait GroupOrdering {
    fn name(&self) -> &str;

    /// `restricted` holds each reviewer's ranking cut down to the
    /// group's members (nonempty lists only). Must return a
    /// permutation of `members`.
    fn order_group(&self, members: &[usize], restricted: &[Vec<usize>]) -> Vec<usize>;
}

/// Borda count on the restricted rankings: a list of length s awards
/// s - k points to its k-th paper (1-based k). Ties break on ascending
/// paper index.
pub struct BordaGroupOrdering;

impl GroupOrdering for BordaGroupOrdering {
    fn name(&self) -> &str {
        "borda"
    }

    fn order_group(&self, members: &[usize], restricted: &[Vec<usize>]) -> Vec<usize> {
        let mut points: BTreeMap<usize, u64> = members.iter().map(|&p| (p, 0)).collect();
        for list in restricted {
            let s = list.len();
            for (k, &paper) in list.iter().enumerate() {
                *points.get_mut(&paper).expect("group member") += (s - 1 - k) as u64;
            }
        }
        let mut ordered: Vec<usize> = members.to_vec();
        ordered.sort_by(|&a, &b| points[&b].cmp(&points[&a]).then(a.cmp(&b)));
        ordered
    }
}

/// Ranks one side's papers from the rankings over that side.
///
/// Groups are emitted in topological order of the condensation; when
/// several groups are simultaneously available the one containing the
/// lowest paper index goes first. Papers no ranking mentions come
/// last, ascending.
pub fn contract_and_sort(
    side_papers: &[usize],
    rankings: &[Ranking],
    strategy: &dyn GroupOrdering,
) -> Result<Ranking> {
    let side: BTreeSet<usize> = side_papers.iter().copied().collect();
    for (i, ranking) in rankings.iter().enumerate() {
        if let Some(&stray) = ranking.support().difference(&side).next() {
            return Err(Error::Contract(format!(
                "ranking {i} mentions paper {stray}, which is not on this side"
            )));
        }
    }

    let graph = ProfileGraph::from_rankings(rankings);
    let cond = condense(&graph);
    let num = cond.components.len();

    let mut indegree = vec![0usize; num];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); num];
    for &(a, b) in &cond.edges {
        out[a].push(b);
        indegree[b] += 1;
    }
    let group_key: Vec<usize> = cond
        .components
        .iter()
        .map(|members| *members.iter().min().expect("nonempty component"))
        .collect();

    // Min-heap over (lowest member index, component id).
    let mut ready: BinaryHeap<std::cmp::Reverse<(usize, usize)>> = (0..num)
        .filter(|&c| indegree[c] == 0)
        .map(|c| std::cmp::Reverse((group_key[c], c)))
        .collect();

    let mut order = Vec::with_capacity(side_papers.len());
    let mut emitted = 0;
    while let Some(std::cmp::Reverse((_, c))) = ready.pop() {
        emitted += 1;
        let mut members = cond.components[c].clone();
        members.sort_unstable();
        let ordered = if members.len() == 1 {
            members.clone()
        } else {
            let restricted: Vec<Vec<usize>> = rankings
                .iter()
                .filter_map(|ranking| {
                    let cut: Vec<usize> = ranking
                        .papers()
                        .iter()
                        .copied()
                        .filter(|p| cond.component_of.get(p) == Some(&c))
                        .collect();
                    (!cut.is_empty()).then_some(cut)
                })
                .collect();
            let ordered = strategy.order_group(&members, &restricted);
            let check: BTreeSet<usize> = ordered.iter().copied().collect();
            if check != members.iter().copied().collect() {
                return Err(Error::Contract(format!(
                    "group ordering {} did not return a permutation of the group",
                    strategy.name()
                )));
            }
            ordered
        };
        order.extend(ordered);
        for &next in &out[c] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                ready.push(std::cmp::Reverse((group_key[next], next)));
            }
        }
    }
    debug_assert_eq!(emitted, num, "preference graph condensation must be acyclic");

    let mentioned: BTreeSet<usize> = graph.vertices.iter().copied().collect();
    order.extend(side.difference(&mentioned));

    Ranking::new(order)
}

/// 1-based output slots for the two sides. The larger side (size n1)
/// takes slots floor(k * n / n1), k = 1..=n1; the smaller side (size
/// n2) takes the largest integer strictly below k * n / n2 for
/// k = 1..=n2. The two sets are disjoint and cover 1..=n.
pub fn interleaving_plan(n: usize, n1: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let n2 = n
        .checked_sub(n1)
        .ok_or_else(|| Error::Precondition(format!("side size {n1} exceeds total {n}")))?;
    if n1 < n2 {
        return Err(Error::Precondition(format!(
            "the first side must not be smaller: {n1} < {n2}"
        )));
    }
    let slots_large: Vec<usize> = (1..=n1).map(|k| k * n / n1).collect();
    let slots_small: Vec<usize> = (1..=n2).map(|k| (k * n).div_ceil(n2) - 1).collect();
    Ok((slots_large, slots_small))
}

/// Merges two side rankings into one total ranking over all papers.
/// Sides are swapped internally if the first is smaller, so the larger
/// side always gets the slot set that includes the last position.
pub fn interleave(side_a: &Ranking, side_b: &Ranking) -> Result<AggregateRanking> {
    let n = side_a.len() + side_b.len();
    let (large, small) = if side_a.len() >= side_b.len() {
        (side_a, side_b)
    } else {
        (side_b, side_a)
    };
    if small.is_empty() {
        return AggregateRanking::new(large.papers().to_vec());
    }
    let (slots_large, slots_small) = interleaving_plan(n, large.len())?;
    let mut order = vec![usize::MAX; n];
    for (&paper, &slot) in large.papers().iter().zip(&slots_large) {
        order[slot - 1] = paper;
    }
    for (&paper, &slot) in small.papers().iter().zip(&slots_small) {
        order[slot - 1] = paper;
    }
    AggregateRanking::new(order)
}

/// Full aggregation across a partition: restrict the profile to each
/// side, contract-and-sort both, then interleave. Rankings must not
/// straddle the sides.
pub fn divide_and_rank_aggregate(
    profile: &Profile,
    part: &PartitionResult,
    strategy: &dyn GroupOrdering,
) -> Result<AggregateRanking> {
    let side_c: BTreeSet<usize> = part.side_c.papers.iter().copied().collect();
    let side_cbar: BTreeSet<usize> = part.side_cbar.papers.iter().copied().collect();

    for (i, ranking) in profile.rankings().iter().enumerate() {
        let support = ranking.support();
        if let Some(&stray) =
            support.difference(&side_c).find(|p| !side_cbar.contains(p))
        {
            return Err(Error::Contract(format!(
                "reviewer {i} ranks paper {stray}, which is not in the partition"
            )));
        }
        let in_c = support.intersection(&side_c).count();
        if in_c != 0 && in_c != support.len() {
            return Err(Error::Contract(format!(
                "reviewer {i}'s ranking straddles both sides of the partition"
            )));
        }
    }

    let restrict = |side: &BTreeSet<usize>| -> Vec<Ranking> {
        profile
            .rankings()
            .iter()
            .map(|ranking| ranking.restrict(side))
            .filter(|r| !r.is_empty())
            .collect()
    };

    let ranked_c = contract_and_sort(&part.side_c.papers, &restrict(&side_c), strategy)?;
    let ranked_cbar = contract_and_sort(&part.side_cbar.papers, &restrict(&side_cbar), strategy)?;
    interleave(&ranked_c, &ranked_cbar)
}
