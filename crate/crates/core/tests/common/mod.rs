//! Brute-force oracles and instance generators shared by the
//! integration tests. The oracles trade speed for obviousness: they
//! enumerate the definition directly so the optimized library code can
//! be checked against them.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use splitrank::analysis::connected_components;
use splitrank::model::{
    AggregateRanking, AssignmentParams, ConflictGraph, Profile, Ranking, ReviewGraph,
};
use splitrank::perm;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Group-unanimity oracle straight from the definition: every subset
/// of papers that all reviewers unanimously rank on top must be
/// respected by the output for co-reviewed cross pairs.
pub fn gu_cut_oracle(rg: &ReviewGraph, profile: &Profile, output: &AggregateRanking) -> bool {
    let n = rg.num_papers();
    for cut in 0u32..(1 << n) {
        let inside = |p: usize| cut & (1 << p) != 0;

        let unanimous = (0..rg.num_reviewers()).all(|i| {
            let ranking = profile.ranking(i);
            rg.review_set(i).iter().all(|&top| {
                !inside(top)
                    || rg
                        .review_set(i)
                        .iter()
                        .all(|&rest| inside(rest) || ranking.prefers(top, rest))
            })
        });
        if !unanimous {
            continue;
        }

        for i in 0..rg.num_reviewers() {
            let set = rg.review_set(i);
            for &x in set {
                for &y in set {
                    if inside(x) && !inside(y) && !output.ranks_above(x, y) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Outcome of the exhaustive subset-enumeration partitioner. Ratios
/// are kept as raw fractions and compared by cross-multiplication.
#[derive(Debug, Clone, PartialEq)]
pub enum BruteForcePartition {
    Feasible { num: u64, den: u64, r: usize, p: usize },
    Infeasible { best: Option<(u64, u64)> },
}

fn ratio_le(a: (u64, u64), b: (u64, u64)) -> bool {
    (a.0 as u128) * (b.1 as u128) <= (b.0 as u128) * (a.1 as u128)
}

fn ratio_lt(a: (u64, u64), b: (u64, u64)) -> bool {
    (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128)
}

/// Enumerates every subset of connected components as a candidate side
/// C, keeping the exact best ratio with ties broken by smaller r then
/// smaller p.
pub fn brute_force_partition(
    graph: &ConflictGraph,
    params: &AssignmentParams,
) -> BruteForcePartition {
    let m = graph.num_reviewers();
    let n = graph.num_papers();
    let comps = connected_components(graph);
    let sizes: Vec<(usize, usize)> = comps
        .members
        .iter()
        .map(|(rs, ps)| (rs.len(), ps.len()))
        .collect();
    assert!(sizes.len() <= 20, "oracle is exponential in component count");

    let mut best_feasible: Option<((u64, u64), usize, usize)> = None;
    let mut best_any: Option<(u64, u64)> = None;
    for mask in 0u32..(1 << sizes.len()) {
        let (mut r, mut p) = (0usize, 0usize);
        for (k, &(rk, pk)) in sizes.iter().enumerate() {
            if mask & (1 << k) != 0 {
                r += rk;
                p += pk;
            }
        }
        // Side C's p papers go to the m - r outside reviewers and the
        // n - p outside papers go to the r inside reviewers.
        if (r == m && p > 0) || (r == 0 && p < n) {
            continue;
        }
        let t1 = if r == m { (0, 1) } else { (p as u64, (m - r) as u64) };
        let t2 = if r == 0 { (0, 1) } else { ((n - p) as u64, r as u64) };
        let ratio = if ratio_le(t2, t1) { t1 } else { t2 };

        best_any = Some(match best_any {
            Some(b) if ratio_le(b, ratio) => b,
            _ => ratio,
        });
        if ratio.0 as u128 * params.lambda as u128 > params.mu as u128 * ratio.1 as u128 {
            continue;
        }
        // Each paper needs lambda distinct opposite-side reviewers.
        if (p > 0 && m - r < params.lambda) || (n - p > 0 && r < params.lambda) {
            continue;
        }
        let better = match best_feasible {
            None => true,
            Some((b, br, bp)) => {
                ratio_lt(ratio, b)
                    || (!ratio_lt(b, ratio) && (r, p) < (br, bp))
            }
        };
        if better {
            best_feasible = Some((ratio, r, p));
        }
    }

    match best_feasible {
        Some(((num, den), r, p)) => BruteForcePartition::Feasible { num, den, r, p },
        None => BruteForcePartition::Infeasible { best: best_any },
    }
}

/// All profiles over an assignment: the cartesian product of each
/// reviewer's permutations of her review set.
pub fn all_profiles(rg: &ReviewGraph) -> Vec<Profile> {
    let per_reviewer: Vec<Vec<Vec<usize>>> = (0..rg.num_reviewers())
        .map(|i| {
            let mut set = rg.review_set(i).to_vec();
            set.sort_unstable();
            perm::permutations_of(&set)
        })
        .collect();
    let total: usize = per_reviewer.iter().map(Vec::len).product();
    let mut profiles = Vec::with_capacity(total);
    let mut choice = vec![0usize; per_reviewer.len()];
    for _ in 0..total {
        let rankings = per_reviewer
            .iter()
            .zip(&choice)
            .map(|(perms, &c)| Ranking::new(perms[c].clone()).unwrap())
            .collect();
        profiles.push(Profile::new(rankings));
        for i in 0..choice.len() {
            choice[i] += 1;
            if choice[i] < per_reviewer[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
    profiles
}

pub fn profile_space_size(rg: &ReviewGraph) -> u128 {
    (0..rg.num_reviewers())
        .map(|i| perm::factorial(rg.review_set(i).len()))
        .product()
}

/// Deterministic battery of conflict graphs for one (m, n) point:
/// hand-built shapes plus seeded random densities.
pub fn conflict_graph_family(m: usize, n: usize) -> Vec<ConflictGraph> {
    let mut graphs = Vec::new();
    let graph = |pairs: Vec<(usize, usize)>| ConflictGraph::new(m, n, pairs).unwrap();

    graphs.push(graph(Vec::new()));
    graphs.push(graph((0..m.min(n)).map(|i| (i, i)).collect()));
    graphs.push(graph((0..n).map(|p| (0, p)).collect()));
    // Two blocks: first half of reviewers x first half of papers, rest x rest.
    let mut blocks = Vec::new();
    for r in 0..m {
        for p in 0..n {
            if (r < m / 2) == (p < n / 2) {
                blocks.push((r, p));
            }
        }
    }
    graphs.push(graph(blocks));

    for (seed, density) in [(1, 0.15), (2, 0.3), (3, 0.5), (4, 0.3)] {
        let mut rng = rng(seed * 1000 + (m * 10 + n) as u64);
        let pairs = (0..m)
            .flat_map(|r| (0..n).map(move |p| (r, p)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        graphs.push(graph(pairs));
    }
    graphs
}

/// A random assignment, not necessarily one the pipeline would build:
/// each reviewer gets a distinct random set of 1..=max_set papers.
pub fn random_review_graph(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
    max_set: usize,
) -> ReviewGraph {
    let sets = (0..m)
        .map(|_| {
            let size = rng.gen_range(1..=max_set.min(n));
            let mut papers: Vec<usize> = (0..n).collect();
            perm::shuffle(rng, &mut papers);
            let mut set: Vec<usize> = papers.into_iter().take(size).collect();
            set.sort_unstable();
            set
        })
        .collect();
    ReviewGraph::new(sets, n).unwrap()
}

/// A uniformly random profile over the review sets.
pub fn random_profile(rng: &mut ChaCha8Rng, rg: &ReviewGraph) -> Profile {
    let rankings = (0..rg.num_reviewers())
        .map(|i| {
            let mut set = rg.review_set(i).to_vec();
            perm::shuffle(rng, &mut set);
            Ranking::new(set).unwrap()
        })
        .collect();
    Profile::new(rankings)
}

/// True when no strict total order of `papers` satisfies every
/// (above, below) constraint; exhaustive over all permutations.
pub fn no_total_order_consistent(papers: &[usize], constraints: &[(usize, usize)]) -> bool {
    assert!(papers.len() <= 8, "exhaustive order search is factorial");
    let mut sorted = papers.to_vec();
    sorted.sort_unstable();
    for order in perm::permutations_of(&sorted) {
        let position = |p: usize| order.iter().position(|&q| q == p).unwrap();
        if constraints.iter().all(|&(a, b)| position(a) < position(b)) {
            return false;
        }
    }
    true
}

/// The unanimous-pair constraints a profile imposes: co-reviewed pairs
/// whose common reviewers all agree, oriented winner first.
pub fn unanimous_pair_constraints(rg: &ReviewGraph, profile: &Profile) -> Vec<(usize, usize)> {
    let mut pairs = BTreeSet::new();
    for i in 0..rg.num_reviewers() {
        let set = rg.review_set(i);
        for (xi, &x) in set.iter().enumerate() {
            for &y in &set[xi + 1..] {
                pairs.insert((x.min(y), x.max(y)));
            }
        }
    }
    let mut constraints = Vec::new();
    for (x, y) in pairs {
        let common = rg.common_reviewers(x, y);
        if common.iter().all(|&i| profile.ranking(i).prefers(x, y)) {
            constraints.push((x, y));
        } else if common.iter().all(|&i| profile.ranking(i).prefers(y, x)) {
            constraints.push((y, x));
        }
    }
    constraints
}
