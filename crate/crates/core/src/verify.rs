//! Property verifiers for aggregation rules, plus the structural
//! obstructions that rule properties out for a given assignment.
//!
//! Properties, for an assignment `rg`, profile, and output ranking:
//!
//! - Group unanimity (GU): whenever every reviewer ranks all her papers
//!   from a set P' above her papers outside P', every co-reviewed pair
//!   across that cut keeps the same orientation in the output.
//! - Pairwise unanimity (PU): every pair whose common reviewers all
//!   agree keeps that orientation in the output. PU implies GU.
//! - Strategyproofness (SP): no reviewer can move the output position
//!   of any paper she is conflicted with by changing her own ranking.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregate::{condense, ProfileGraph};
use crate::error::{Error, Result};
use crate::model::{AggregateRanking, ConflictGraph, Profile, Ranking, ReviewGraph};
use crate::perm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    GroupUnanimity,
    PairwiseUnanimity,
    Strategyproofness,
    WeakStrategyproofness,
}

/// A counterexample precise enough to replay by hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// The output ranks `loser` above `winner` although unanimity
    /// demands the opposite.
    OrderedPair { winner: usize, loser: usize },
    /// Reviewer moved a conflicted paper by swapping her ranking.
    Deviation {
        reviewer: usize,
        paper: usize,
        profile: Profile,
        deviation: Ranking,
        position_before: usize,
        position_after: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: bool,
    pub witness: Option<Witness>,
    /// Number of sampled trials, for randomized checks only. A verdict
    /// of true with `Some(0)` is vacuous.
    pub trials: Option<u64>,
}

impl PropertyReport {
    fn holds(property: Property) -> Self {
        Self { property, verdict: true, witness: None, trials: None }
    }

    fn fails(property: Property, witness: Witness) -> Self {
        Self { property, verdict: false, witness: Some(witness), trials: None }
    }
}

fn check_dimensions(rg: &ReviewGraph, profile: &Profile, output: &AggregateRanking) -> Result<()> {
    profile.matches_assignment(rg)?;
    if output.num_papers() != rg.num_papers() {
        return Err(Error::Contract(format!(
            "output ranks {} papers, assignment has {}",
            output.num_papers(),
            rg.num_papers()
        )));
    }
    Ok(())
}

/// Unordered co-reviewed pairs (a < b).
fn co_reviewed_pairs(rg: &ReviewGraph) -> BTreeSet<(usize, usize)> {
    let mut pairs = BTreeSet::new();
    for i in 0..rg.num_reviewers() {
        let set = rg.review_set(i);
        for (xi, &x) in set.iter().enumerate() {
            for &y in &set[xi + 1..] {
                pairs.insert((x.min(y), x.max(y)));
            }
        }
    }
    pairs
}

/// Reachability oracle over the condensation of the full preference
/// graph of a profile.
struct Reach {
    component_of: std::collections::BTreeMap<usize, usize>,
    closure: Vec<Vec<bool>>,
}

impl Reach {
    fn build(profile: &Profile) -> Self {
        let graph = ProfileGraph::from_rankings(profile.rankings());
        let cond = condense(&graph);
        let k = cond.components.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); k];
        let mut indegree = vec![0usize; k];
        for &(a, b) in &cond.edges {
            succ[a].push(b);
            indegree[b] += 1;
        }
        // Reverse topological accumulation of reachable sets.
        let mut order: Vec<usize> = Vec::with_capacity(k);
        let mut queue: Vec<usize> = (0..k).filter(|&c| indegree[c] == 0).collect();
        let mut indeg = indegree;
        while let Some(c) = queue.pop() {
            order.push(c);
            for &s in &succ[c] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    queue.push(s);
                }
            }
        }
        let mut closure = vec![vec![false; k]; k];
        for &c in order.iter().rev() {
            for &s in &succ[c] {
                closure[c][s] = true;
                // Successors were finished first, so their rows are
                // complete.
                let via = closure[s].clone();
                for (dst, reached) in closure[c].iter_mut().zip(via) {
                    *dst |= reached;
                }
            }
        }
        Self { component_of: cond.component_of, closure }
    }

    fn same_component(&self, x: usize, y: usize) -> bool {
        self.component_of.get(&x) == self.component_of.get(&y)
    }

    fn reaches(&self, x: usize, y: usize) -> bool {
        match (self.component_of.get(&x), self.component_of.get(&y)) {
            (Some(&cx), Some(&cy)) => cx != cy && self.closure[cx][cy],
            _ => false,
        }
    }
}

/// Group-unanimity check. A co-reviewed pair is constrained exactly
/// when its papers sit in different strongly connected components of
/// the full preference graph; the reachable one must then come first.
/// This matches checking every unanimous cut directly.
pub fn check_gu(
    rg: &ReviewGraph,
    profile: &Profile,
    output: &AggregateRanking,
) -> Result<PropertyReport> {
    check_dimensions(rg, profile, output)?;
    let reach = Reach::build(profile);
    for &(x, y) in &co_reviewed_pairs(rg) {
        if reach.same_component(x, y) {
            continue;
        }
        let (winner, loser) = if reach.reaches(x, y) {
            (x, y)
        } else if reach.reaches(y, x) {
            (y, x)
        } else {
            // Co-reviewed papers share a ranking, hence a path.
            continue;
        };
        if !output.ranks_above(winner, loser) {
            return Ok(PropertyReport::fails(
                Property::GroupUnanimity,
                Witness::OrderedPair { winner, loser },
            ));
        }
    }
    Ok(PropertyReport::holds(Property::GroupUnanimity))
}

/// Pairwise-unanimity check: common reviewers that all agree on a pair
/// pin its orientation.
pub fn check_pu(
    rg: &ReviewGraph,
    profile: &Profile,
    output: &AggregateRanking,
) -> Result<PropertyReport> {
    check_dimensions(rg, profile, output)?;
    for &(x, y) in &co_reviewed_pairs(rg) {
        let common = rg.common_reviewers(x, y);
        let prefer_x = common.iter().all(|&i| profile.ranking(i).prefers(x, y));
        let prefer_y = common.iter().all(|&i| profile.ranking(i).prefers(y, x));
        let (winner, loser) = if prefer_x {
            (x, y)
        } else if prefer_y {
            (y, x)
        } else {
            continue;
        };
        if !output.ranks_above(winner, loser) {
            return Ok(PropertyReport::fails(
                Property::PairwiseUnanimity,
                Witness::OrderedPair { winner, loser },
            ));
        }
    }
    Ok(PropertyReport::holds(Property::PairwiseUnanimity))
}

pub type Aggregator<'a> = dyn Fn(&Profile) -> Result<AggregateRanking> + 'a;

/// Per reviewer: every report she could submit, and the conflicted
/// papers worth watching.
type DeviationSpace = Vec<(Vec<Vec<usize>>, Vec<usize>)>;

fn deviation_space(rg: &ReviewGraph, cg: &ConflictGraph) -> Result<DeviationSpace> {
    if rg.num_reviewers() != cg.num_reviewers() || rg.num_papers() != cg.num_papers() {
        return Err(Error::Contract(format!(
            "assignment covers {} reviewers / {} papers, conflict graph has {} / {}",
            rg.num_reviewers(),
            rg.num_papers(),
            cg.num_reviewers(),
            cg.num_papers()
        )));
    }
    Ok((0..rg.num_reviewers())
        .map(|i| {
            let mut sorted = rg.review_set(i).to_vec();
            sorted.sort_unstable();
            (perm::permutations_of(&sorted), cg.reviewer_conflicts(i))
        })
        .collect())
}

/// Exhaustive strategyproofness check: every profile, every unilateral
/// deviation, every conflicted paper of the deviator. Refuses instead
/// of starting when the number of aggregator evaluations would exceed
/// `budget`.
pub fn check_sp_exhaustive(
    rg: &ReviewGraph,
    cg: &ConflictGraph,
    aggregate: &Aggregator,
    budget: u64,
) -> Result<PropertyReport> {
    let space = deviation_space(rg, cg)?;
    let num_profiles: u128 = space.iter().map(|(perms, _)| perms.len() as u128).product();
    let deviations_per_profile: u128 = space
        .iter()
        .filter(|(perms, conflicts)| !conflicts.is_empty() && perms.len() > 1)
        .map(|(perms, _)| perms.len() as u128 - 1)
        .sum();
    let required = num_profiles.saturating_mul(1 + deviations_per_profile);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: budget as u128 });
    }

    let m = rg.num_reviewers();
    let mut choice = vec![0usize; m];
    loop {
        let rankings: Vec<Ranking> = (0..m)
            .map(|i| Ranking::new(space[i].0[choice[i]].clone()).expect("permutation is duplicate-free"))
            .collect();
        let profile = Profile::new(rankings);
        let base = aggregate(&profile)?;

        for (i, (perms, conflicts)) in space.iter().enumerate() {
            if conflicts.is_empty() || perms.len() < 2 {
                continue;
            }
            for (alt_idx, alt) in perms.iter().enumerate() {
                if alt_idx == choice[i] {
                    continue;
                }
                let deviation = Ranking::new(alt.clone()).expect("permutation is duplicate-free");
                let deviated = aggregate(&profile.with_ranking(i, deviation.clone()))?;
                for &paper in conflicts {
                    if base.position(paper) != deviated.position(paper) {
                        return Ok(PropertyReport::fails(
                            Property::Strategyproofness,
                            Witness::Deviation {
                                reviewer: i,
                                paper,
                                profile: profile.clone(),
                                deviation,
                                position_before: base.position(paper),
                                position_after: deviated.position(paper),
                            },
                        ));
                    }
                }
            }
        }

        // Odometer step over the profile space.
        let mut i = 0;
        loop {
            if i == m {
                return Ok(PropertyReport::holds(Property::Strategyproofness));
            }
            choice[i] += 1;
            if choice[i] < space[i].0.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Sampled strategyproofness check: random profile, random deviator,
/// random deviation per trial. Deterministic for a fixed seed
/// (ChaCha8, one sequential stream).
pub fn check_sp_randomized(
    rg: &ReviewGraph,
    cg: &ConflictGraph,
    aggregate: &Aggregator,
    trials: u64,
    seed: u64,
) -> Result<PropertyReport> {
    let space = deviation_space(rg, cg)?;
    let eligible: Vec<usize> = (0..rg.num_reviewers())
        .filter(|&i| !space[i].1.is_empty() && space[i].0.len() > 1)
        .collect();

    let mut report = PropertyReport::holds(Property::Strategyproofness);
    report.trials = Some(if eligible.is_empty() { 0 } else { trials });
    if eligible.is_empty() || trials == 0 {
        return Ok(report);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let rankings: Vec<Ranking> = space
            .iter()
            .map(|(perms, _)| {
                let pick = rand::Rng::gen_range(&mut rng, 0..perms.len());
                Ranking::new(perms[pick].clone()).expect("permutation is duplicate-free")
            })
            .collect();
        let profile = Profile::new(rankings);
        let i = eligible[rand::Rng::gen_range(&mut rng, 0..eligible.len())];
        let (perms, conflicts) = &space[i];
        let current = profile.ranking(i);
        let deviation = loop {
            let pick = rand::Rng::gen_range(&mut rng, 0..perms.len());
            if perms[pick] != current.papers() {
                break Ranking::new(perms[pick].clone()).expect("permutation is duplicate-free");
            }
        };

        let base = aggregate(&profile)?;
        let deviated = aggregate(&profile.with_ranking(i, deviation.clone()))?;
        for &paper in conflicts {
            if base.position(paper) != deviated.position(paper) {
                report.verdict = false;
                report.witness = Some(Witness::Deviation {
                    reviewer: i,
                    paper,
                    profile,
                    deviation,
                    position_before: base.position(paper),
                    position_after: deviated.position(paper),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Papers are adjacent when some reviewer reviews both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewRelationGraph {
    pub adj: Vec<BTreeSet<usize>>,
}

pub fn review_relation_graph(rg: &ReviewGraph) -> ReviewRelationGraph {
    let mut adj = vec![BTreeSet::new(); rg.num_papers()];
    for &(x, y) in &co_reviewed_pairs(rg) {
        adj[x].insert(y);
        adj[y].insert(x);
    }
    ReviewRelationGraph { adj }
}

/// The distinct review sets, with an edge between two sets when they
/// share at least one paper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewSetGraph {
    pub sets: Vec<Vec<usize>>,
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn review_set_graph(rg: &ReviewGraph) -> ReviewSetGraph {
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for i in 0..rg.num_reviewers() {
        let mut set = rg.review_set(i).to_vec();
        set.sort_unstable();
        if !sets.contains(&set) {
            sets.push(set);
        }
    }
    let mut edges = BTreeSet::new();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if sets[a].iter().any(|p| sets[b].binary_search(p).is_ok()) {
                edges.insert((a, b));
            }
        }
    }
    ReviewSetGraph { sets, edges }
}

impl ReviewSetGraph {
    /// First cycle of distinct review sets found, as set indices.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let k = self.sets.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![usize::MAX; k];
        let mut visited = vec![false; k];
        for start in 0..k {
            if visited[start] {
                continue;
            }
            let mut stack = vec![(start, usize::MAX)];
            while let Some((v, from)) = stack.pop() {
                if visited[v] {
                    continue;
                }
                visited[v] = true;
                parent[v] = from;
                for &w in &adj[v] {
                    if w == from {
                        continue;
                    }
                    if visited[w] {
                        // Back edge: walk v up to w.
                        let mut cycle = vec![v];
                        let mut cur = v;
                        while cur != w {
                            cur = parent[cur];
                            if cur == usize::MAX {
                                break;
                            }
                            cycle.push(cur);
                        }
                        if cycle.last() == Some(&w) {
                            return Some(cycle);
                        }
                    } else {
                        stack.push((w, v));
                    }
                }
            }
        }
        None
    }
}

/// A full profile on which pairwise unanimity cannot be satisfied: for
/// each consecutive pair of the cycle, every common reviewer ranks the
/// earlier paper above the later one, so the forced pair orientations
/// close a cycle and admit no total order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub profile: Profile,
    /// The cycle papers, in order; pair k is (cycle[k], cycle[k+1]),
    /// wrapping at the end.
    pub cycle: Vec<usize>,
    /// Common reviewers per consecutive pair, parallel to `cycle`.
    pub pair_reviewers: Vec<Vec<usize>>,
}

/// Builds the witness profile for a co-review cycle. Fails if the
/// cycle is shorter than 3, a consecutive pair is not co-reviewed, or
/// one reviewer reviews every cycle paper (her constraints would then
/// be cyclic and no ranking could satisfy them).
pub fn cycle_witness_profile(rg: &ReviewGraph, cycle: &[usize]) -> Result<CycleWitness> {
    let len = cycle.len();
    if len < 3 {
        return Err(Error::Precondition(format!(
            "cycle must have at least 3 papers, found {len}"
        )));
    }
    let distinct: BTreeSet<usize> = cycle.iter().copied().collect();
    if distinct.len() != len {
        return Err(Error::Precondition("cycle papers must be distinct".into()));
    }
    if let Some(&p) = cycle.iter().find(|&&p| p >= rg.num_papers()) {
        return Err(Error::Precondition(format!("paper {p} out of range")));
    }
    for k in 0..len {
        let (a, b) = (cycle[k], cycle[(k + 1) % len]);
        if rg.common_reviewers(a, b).is_empty() {
            return Err(Error::Precondition(format!(
                "papers {a} and {b} are consecutive on the cycle but share no reviewer"
            )));
        }
    }
    for i in 0..rg.num_reviewers() {
        let set: BTreeSet<usize> = rg.review_set(i).iter().copied().collect();
        if distinct.is_subset(&set) {
            return Err(Error::Precondition(format!(
                "reviewer {i} reviews every cycle paper; the cycle must not be covered by one reviewer"
            )));
        }
    }

    let mut pair_reviewers = Vec::with_capacity(len);
    let mut rankings = Vec::with_capacity(rg.num_reviewers());
    for i in 0..rg.num_reviewers() {
        // Constraint edges: the cycle pairs this reviewer sees both of.
        let set: BTreeSet<usize> = rg.review_set(i).iter().copied().collect();
        let mut before: Vec<(usize, usize)> = Vec::new();
        for k in 0..len {
            let (a, b) = (cycle[k], cycle[(k + 1) % len]);
            if set.contains(&a) && set.contains(&b) {
                before.push((a, b));
            }
        }
        rankings.push(topological_ranking(rg.review_set(i), &before)?);
    }
    for k in 0..len {
        pair_reviewers.push(rg.common_reviewers(cycle[k], cycle[(k + 1) % len]));
    }

    Ok(CycleWitness {
        profile: Profile::new(rankings),
        cycle: cycle.to_vec(),
        pair_reviewers,
    })
}

/// A ranking of `papers` respecting every (before, after) constraint,
/// taking the lowest-index available paper first.
fn topological_ranking(papers: &[usize], constraints: &[(usize, usize)]) -> Result<Ranking> {
    let mut indegree: std::collections::BTreeMap<usize, usize> =
        papers.iter().map(|&p| (p, 0)).collect();
    let mut succ: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &(a, b) in constraints {
        succ.entry(a).or_default().push(b);
        *indegree.get_mut(&b).expect("constraint within paper set") += 1;
    }
    let mut ready: BTreeSet<usize> = indegree
        .iter()
        .filter_map(|(&p, &d)| (d == 0).then_some(p))
        .collect();
    let mut order = Vec::with_capacity(papers.len());
    while let Some(&p) = ready.iter().next() {
        ready.remove(&p);
        order.push(p);
        for &q in succ.get(&p).map(Vec::as_slice).unwrap_or(&[]) {
            let d = indegree.get_mut(&q).expect("constraint within paper set");
            *d -= 1;
            if *d == 0 {
                ready.insert(q);
            }
        }
    }
    if order.len() != papers.len() {
        return Err(Error::Contract(
            "pair constraints are cyclic within one review set".into(),
        ));
    }
    Ranking::new(order)
}

/// A 4-cycle induced by two size-mu review sets sharing 2..=mu-1
/// papers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapWitness {
    pub reviewer_a: usize,
    pub reviewer_b: usize,
    pub shared: Vec<usize>,
    /// A qualifying co-review cycle (a, x, b, y) with a only in A's
    /// set, b only in B's, x and y shared; `None` if every such cycle
    /// happens to be covered by some third reviewer.
    pub cycle: Option<[usize; 4]>,
}

/// Feasibility conditions for pairwise unanimity when every reviewer
/// has the same set size mu >= 2. Any violation makes PU unattainable
/// on this assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformSetsReport {
    pub mu: usize,
    pub distinct_sets: usize,
    /// A simple co-review cycle longer than mu, searched up to length
    /// mu + 3.
    pub long_cycle: Option<Vec<usize>>,
    /// Two review sets sharing more than one but fewer than mu papers.
    pub overlap_violation: Option<OverlapWitness>,
    /// distinct_sets <= (n - 1) / (mu - 1), exactly.
    pub set_count_ok: bool,
    /// A cycle among distinct review sets (sharing-a-paper relation);
    /// that relation must be a forest.
    pub set_graph_cycle: Option<Vec<usize>>,
}

impl UniformSetsReport {
    pub fn pu_impossible(&self) -> bool {
        self.long_cycle.is_some()
            || self.overlap_violation.is_some()
            || !self.set_count_ok
            || self.set_graph_cycle.is_some()
    }
}

pub fn uniform_sets_report(rg: &ReviewGraph) -> Result<UniformSetsReport> {
    let m = rg.num_reviewers();
    if m == 0 {
        return Err(Error::Precondition("no reviewers".into()));
    }
    let mu = rg.review_set(0).len();
    if rg.review_sets().iter().any(|s| s.len() != mu) {
        return Err(Error::Precondition(
            "review sets are not all the same size".into(),
        ));
    }
    if mu < 2 {
        return Err(Error::Precondition(format!(
            "uniform set size must be at least 2, found {mu}"
        )));
    }

    let relation = review_relation_graph(rg);
    let long_cycle = find_simple_cycle(&relation, mu + 1, mu + 3);

    let set_graph = review_set_graph(rg);
    let distinct_sets = set_graph.sets.len();

    let mut overlap_violation = None;
    'outer: for a in 0..distinct_sets {
        for b in a + 1..distinct_sets {
            let sa: BTreeSet<usize> = set_graph.sets[a].iter().copied().collect();
            let sb: BTreeSet<usize> = set_graph.sets[b].iter().copied().collect();
            let shared: Vec<usize> = sa.intersection(&sb).copied().collect();
            if shared.len() < 2 || shared.len() == mu {
                continue;
            }
            let only_a: Vec<usize> = sa.difference(&sb).copied().collect();
            let only_b: Vec<usize> = sb.difference(&sa).copied().collect();
            let mut cycle = None;
            'cycles: for &pa in &only_a {
                for &pb in &only_b {
                    let candidate = [pa, shared[0], pb, shared[1]];
                    let covered = (0..m).any(|i| {
                        let set: BTreeSet<usize> =
                            rg.review_set(i).iter().copied().collect();
                        candidate.iter().all(|p| set.contains(p))
                    });
                    if !covered {
                        cycle = Some(candidate);
                        break 'cycles;
                    }
                }
            }
            let reviewer_a = (0..m)
                .find(|&i| {
                    let mut s = rg.review_set(i).to_vec();
                    s.sort_unstable();
                    s == set_graph.sets[a]
                })
                .expect("set came from a reviewer");
            let reviewer_b = (0..m)
                .find(|&i| {
                    let mut s = rg.review_set(i).to_vec();
                    s.sort_unstable();
                    s == set_graph.sets[b]
                })
                .expect("set came from a reviewer");
            overlap_violation = Some(OverlapWitness {
                reviewer_a,
                reviewer_b,
                shared,
                cycle,
            });
            break 'outer;
        }
    }

    let set_count_ok =
        distinct_sets.saturating_mul(mu - 1) <= rg.num_papers().saturating_sub(1);

    Ok(UniformSetsReport {
        mu,
        distinct_sets,
        long_cycle,
        overlap_violation,
        set_count_ok,
        set_graph_cycle: set_graph.find_cycle(),
    })
}

/// First simple cycle with length in [min_len, max_len], found by
/// depth-limited DFS anchored at the cycle's smallest vertex.
fn find_simple_cycle(
    graph: &ReviewRelationGraph,
    min_len: usize,
    max_len: usize,
) -> Option<Vec<usize>> {
    let n = graph.adj.len();
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];

    fn dfs(
        graph: &ReviewRelationGraph,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        min_len: usize,
        max_len: usize,
    ) -> bool {
        let v = *path.last().expect("path nonempty");
        for &w in &graph.adj[v] {
            if w == start && path.len() >= min_len {
                return true;
            }
            // Anchoring at the smallest vertex avoids re-finding cycles.
            if w <= start || on_path[w] || path.len() >= max_len {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            if dfs(graph, start, path, on_path, min_len, max_len) {
                return true;
            }
            on_path[w] = false;
            path.pop();
        }
        false
    }

    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        if dfs(graph, start, &mut path, &mut on_path, min_len, max_len) {
            return Some(path);
        }
        on_path[start] = false;
        path.pop();
    }
    None
}
