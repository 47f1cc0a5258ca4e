//! Randomized invariants over the serialization, partitioning,
//! assignment, and aggregation layers.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use common::brute_force_partition;
use splitrank::aggregate::{contract_and_sort, interleave, BordaGroupOrdering};
use splitrank::assign::{AssignStrategy, BalancedRoundRobin};
use splitrank::ingest::{
    graph_json, pairs_csv, parse_graph_json, parse_pairs_csv, SymbolTable,
};
use splitrank::model::{AssignmentParams, ConflictGraph, Ranking};
use splitrank::partition::{partition_with_stats, verify_partition};
use splitrank::perm;
use splitrank::Error;

fn arb_graph(max_m: usize, max_n: usize) -> impl Strategy<Value = ConflictGraph> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        proptest::collection::btree_set((0..m, 0..n), 0..=(m * n).min(24))
            .prop_map(move |edges| ConflictGraph::new(m, n, edges).unwrap())
    })
}

/// Distinct papers, each carrying a strict ranking subset for some
/// reviewers: (side papers, rankings over subsets of them).
fn arb_side_profile() -> impl Strategy<Value = (Vec<usize>, Vec<Ranking>)> {
    (1..=8usize, any::<u64>(), 0..=5usize).prop_map(|(width, seed, k)| {
        let mut rng = common::rng(seed);
        let mut pool: Vec<usize> = (0..12).collect();
        perm::shuffle(&mut rng, &mut pool);
        let papers: Vec<usize> = pool.into_iter().take(width).collect();
        let rankings = (0..k)
            .map(|_| {
                let size = rng.gen_range(1..=papers.len());
                let mut subset = papers.clone();
                perm::shuffle(&mut rng, &mut subset);
                subset.truncate(size);
                Ranking::new(subset).unwrap()
            })
            .collect();
        (papers, rankings)
    })
}

proptest! {
    #[test]
    fn graph_json_round_trips_exactly(graph in arb_graph(8, 8)) {
        let symbols = SymbolTable::numbered(graph.num_reviewers(), graph.num_papers());
        let parsed = parse_graph_json(&graph_json(&graph, &symbols)).unwrap();
        prop_assert_eq!(&parsed.graph, &graph);
        for i in 0..graph.num_reviewers() {
            prop_assert_eq!(parsed.symbols.reviewer_id(i), symbols.reviewer_id(i));
        }
        for j in 0..graph.num_papers() {
            prop_assert_eq!(parsed.symbols.paper_id(j), symbols.paper_id(j));
        }
    }

    #[test]
    fn pairs_csv_round_trips_every_edge(graph in arb_graph(8, 8)) {
        let symbols = SymbolTable::numbered(graph.num_reviewers(), graph.num_papers());
        let parsed = parse_pairs_csv(&pairs_csv(&graph, &symbols)).unwrap();
        // Index assignment may differ, so compare edges by id string.
        let original: BTreeSet<(String, String)> = graph
            .conflicts()
            .map(|(r, p)| {
                (symbols.reviewer_id(r).to_string(), symbols.paper_id(p).to_string())
            })
            .collect();
        let reparsed: BTreeSet<(String, String)> = parsed
            .graph
            .conflicts()
            .map(|(r, p)| {
                (
                    parsed.symbols.reviewer_id(r).to_string(),
                    parsed.symbols.paper_id(p).to_string(),
                )
            })
            .collect();
        prop_assert_eq!(reparsed, original);
        prop_assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn feasible_partitions_always_verify(
        graph in arb_graph(7, 7),
        mu in 1..=3usize,
        lambda in 1..=3usize,
    ) {
        prop_assume!(mu <= graph.num_papers());
        prop_assume!(graph.num_reviewers() >= 2);
        let params = AssignmentParams::new(mu, lambda).unwrap();
        match partition_with_stats(&graph, &params) {
            Ok((part, stats)) => {
                prop_assert!(verify_partition(&part, &graph, &params).is_ok());
                let r = part.side_c.reviewers.len();
                let p = part.side_c.papers.len();
                // The reported ratio is the chosen cell's.
                let expect = splitrank::partition::side_load_ratio(
                    graph.num_reviewers(),
                    graph.num_papers(),
                    r,
                    p,
                )
                .unwrap();
                prop_assert_eq!(stats.chosen_ratio, expect);
            }
            Err(Error::InfeasiblePartition { .. }) => {
                // The oracle agrees there is nothing to find.
                let oracle = brute_force_partition(&graph, &params);
                let oracle_infeasible =
                    matches!(oracle, common::BruteForcePartition::Infeasible { .. });
                prop_assert!(oracle_infeasible, "oracle found {:?}", oracle);
            }
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error: {e}"))),
        }
    }

    #[test]
    fn round_robin_meets_its_contract_under_the_preconditions(
        q in 1..=6usize,
        p in 0..=8usize,
        mu in 1..=4usize,
        lambda in 1..=3usize,
    ) {
        prop_assume!(p == 0 || lambda <= q);
        prop_assume!(lambda * p <= mu * q);
        let reviewers: Vec<usize> = (0..q).collect();
        let papers: Vec<usize> = (100..100 + p).collect();
        let params = AssignmentParams::new(mu, lambda).unwrap();
        let sets = BalancedRoundRobin.assign(&reviewers, &papers, &params).unwrap();
        prop_assert_eq!(sets.len(), q);
        for set in &sets {
            prop_assert!(set.len() <= mu);
            let distinct: BTreeSet<usize> = set.iter().copied().collect();
            prop_assert_eq!(distinct.len(), set.len());
        }
        for &paper in &papers {
            let holders = sets.iter().filter(|s| s.contains(&paper)).count();
            prop_assert_eq!(holders, lambda);
        }
        let loads: Vec<usize> = sets.iter().map(Vec::len).collect();
        let spread = loads.iter().max().unwrap() - loads.iter().min().unwrap();
        prop_assert!(spread <= 1);
    }

    #[test]
    fn contract_and_sort_emits_each_side_paper_exactly_once(
        (papers, rankings) in arb_side_profile(),
    ) {
        let out = contract_and_sort(&papers, &rankings, &BordaGroupOrdering).unwrap();
        let expected: BTreeSet<usize> = papers.iter().copied().collect();
        let got: BTreeSet<usize> = out.papers().iter().copied().collect();
        prop_assert_eq!(out.len(), papers.len());
        prop_assert_eq!(got, expected);

        // Reviewer order cannot matter.
        let mut reversed = rankings.clone();
        reversed.reverse();
        let again = contract_and_sort(&papers, &reversed, &BordaGroupOrdering).unwrap();
        prop_assert_eq!(again, out);
    }

    #[test]
    fn interleave_keeps_each_side_in_its_own_order(
        sizes in (0..=9usize, 0..=9usize),
    ) {
        let (a_len, b_len) = sizes;
        prop_assume!(a_len + b_len > 0);
        let side_a = Ranking::new((0..a_len).collect()).unwrap();
        let side_b = Ranking::new((a_len..a_len + b_len).collect()).unwrap();
        let merged = interleave(&side_a, &side_b).unwrap();
        prop_assert_eq!(merged.num_papers(), a_len + b_len);
        for pair in side_a.papers().windows(2) {
            prop_assert!(merged.ranks_above(pair[0], pair[1]));
        }
        for pair in side_b.papers().windows(2) {
            prop_assert!(merged.ranks_above(pair[0], pair[1]));
        }
    }

    #[test]
    fn permutation_indexing_round_trips(n in 0..=9usize, seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let total = perm::factorial(n) as u64;
        let index = rng.gen_range(0..total);
        let p = perm::nth_permutation(n, index);
        prop_assert_eq!(perm::permutation_index(&p), index);

        let random = perm::random_permutation(&mut rng, n);
        let back = perm::nth_permutation(n, perm::permutation_index(&random));
        prop_assert_eq!(back, random);
    }
}
