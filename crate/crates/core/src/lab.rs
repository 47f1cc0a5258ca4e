//! Finite enumeration harnesses for the negative results, plus the
//! Monte-Carlo misplacement experiment.
//!
//! Everything here is exact and deterministic: rule spaces are
//! enumerated in full (refusing when a budget would be exceeded), the
//! chain-instance search backtracks over every assignment, and random
//! trials derive from a caller-supplied seed.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregate::interleave;
use crate::error::{Error, Result};
use crate::model::{AggregateRanking, Profile, Ranking, ReviewGraph};
use crate::perm;
use crate::verify::{check_gu, check_pu};

/// An aggregation rule for the total-ranking setting (every reviewer
/// ranks every paper), stored as an explicit table: one output
/// permutation per profile.
///
/// Profiles are indexed in mixed radix with reviewer 0 most
/// significant; each reviewer's digit is the lexicographic index of
/// her permutation of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleTable {
    num_papers: usize,
    num_reviewers: usize,
    /// Per profile index, the lexicographic index of the output.
    outputs: Vec<usize>,
}

fn table_dimensions(n: usize, m: usize) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "the total-ranking setting needs at least 2 papers, found {n}; \
             with fewer the only rule is constant, which is trivially \
             weakly strategyproof and vacuously pairwise-unanimous"
        )));
    }
    if m == 0 {
        return Err(Error::Precondition("at least one reviewer is required".into()));
    }
    let num_perms = perm::factorial(n);
    let num_profiles = num_perms
        .checked_pow(m as u32)
        .filter(|&p| p <= usize::MAX as u128)
        .ok_or_else(|| Error::Precondition(format!(
            "profile space for n = {n}, m = {m} does not fit in memory"
        )))?;
    Ok((num_perms as usize, num_profiles as usize))
}

impl RuleTable {
    pub fn new(n: usize, m: usize, outputs: Vec<usize>) -> Result<Self> {
        let (num_perms, num_profiles) = table_dimensions(n, m)?;
        if outputs.len() != num_profiles {
            return Err(Error::Precondition(format!(
                "rule table needs {num_profiles} entries, found {}",
                outputs.len()
            )));
        }
        if let Some(&bad) = outputs.iter().find(|&&o| o >= num_perms) {
            return Err(Error::Precondition(format!(
                "output index {bad} out of range; there are {num_perms} permutations"
            )));
        }
        Ok(Self { num_papers: n, num_reviewers: m, outputs })
    }

    /// Builds the table by evaluating `f` on every profile.
    pub fn from_fn(
        n: usize,
        m: usize,
        budget: u64,
        f: impl Fn(&Profile) -> Result<Vec<usize>>,
    ) -> Result<Self> {
        let (_, num_profiles) = table_dimensions(n, m)?;
        if num_profiles as u128 > budget as u128 {
            return Err(Error::BudgetExceeded {
                required: num_profiles as u128,
                budget: budget as u128,
            });
        }
        let mut outputs = Vec::with_capacity(num_profiles);
        let mut table = Self { num_papers: n, num_reviewers: m, outputs: Vec::new() };
        for index in 0..num_profiles {
            let order = f(&table.profile(index))?;
            let position_check = AggregateRanking::new(order.clone())?;
            debug_assert_eq!(position_check.num_papers(), n);
            outputs.push(perm::permutation_index(&order) as usize);
        }
        table.outputs = outputs;
        Ok(table)
    }

    pub fn constant(n: usize, m: usize, order: Vec<usize>) -> Result<Self> {
        let output = AggregateRanking::new(order)?;
        Self::from_fn(n, m, u64::MAX, |_| Ok(output.order().to_vec()))
    }

    /// The dictatorship rule: the output always equals the named
    /// reviewer's own ranking.
    pub fn dictatorship(n: usize, m: usize, reviewer: usize) -> Result<Self> {
        if reviewer >= m {
            return Err(Error::Precondition(format!(
                "dictator {reviewer} out of range for {m} reviewers"
            )));
        }
        Self::from_fn(n, m, u64::MAX, |profile| {
            Ok(profile.ranking(reviewer).papers().to_vec())
        })
    }

    /// Borda count over full rankings, ties broken by paper index.
    pub fn borda_index_tiebreak(n: usize, m: usize) -> Result<Self> {
        Self::from_fn(n, m, u64::MAX, |profile| {
            let mut scored: Vec<(usize, usize)> = (0..n)
                .map(|p| {
                    let score: usize = profile
                        .rankings()
                        .iter()
                        .map(|r| n - r.position(p).expect("total ranking"))
                        .sum();
                    (p, score)
                })
                .collect();
            scored.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
            Ok(scored.into_iter().map(|(p, _)| p).collect())
        })
    }

    pub fn num_papers(&self) -> usize {
        self.num_papers
    }

    pub fn num_reviewers(&self) -> usize {
        self.num_reviewers
    }

    pub fn num_permutations(&self) -> usize {
        perm::factorial(self.num_papers) as usize
    }

    pub fn num_profiles(&self) -> usize {
        self.outputs.len()
    }

    /// Mixed-radix digits (per-reviewer permutation indices) of a
    /// profile index.
    pub fn profile_digits(&self, mut index: usize) -> Vec<usize> {
        let k = self.num_permutations();
        let mut digits = vec![0; self.num_reviewers];
        for d in digits.iter_mut().rev() {
            *d = index % k;
            index /= k;
        }
        debug_assert_eq!(index, 0, "profile index out of range");
        digits
    }

    pub fn profile_index(&self, digits: &[usize]) -> usize {
        let k = self.num_permutations();
        digits.iter().fold(0, |acc, &d| acc * k + d)
    }

    pub fn profile(&self, index: usize) -> Profile {
        let rankings = self
            .profile_digits(index)
            .into_iter()
            .map(|d| {
                Ranking::new(perm::nth_permutation(self.num_papers, d as u64))
                    .expect("permutation is duplicate-free")
            })
            .collect();
        Profile::new(rankings)
    }

    pub fn output(&self, index: usize) -> Vec<usize> {
        perm::nth_permutation(self.num_papers, self.outputs[index] as u64)
    }
}

/// Bipartite reviewer/paper graph: an edge means some unilateral
/// deviation by the reviewer changes that paper's output position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfluenceGraph {
    pub num_reviewers: usize,
    pub num_papers: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl InfluenceGraph {
    pub fn reviewer_degree(&self, reviewer: usize) -> usize {
        self.edges
            .range((reviewer, 0)..=(reviewer, usize::MAX))
            .count()
    }

    pub fn influences(&self, reviewer: usize, paper: usize) -> bool {
        self.edges.contains(&(reviewer, paper))
    }

    /// Weak strategyproofness: every reviewer leaves at least one
    /// paper's position untouched under all her deviations.
    pub fn is_wsp(&self) -> bool {
        (0..self.num_reviewers).all(|i| self.reviewer_degree(i) < self.num_papers)
    }
}

/// Exact influence graph of a rule table, by enumerating every profile
/// and every unilateral deviation. Refuses when the number of output
/// comparisons would exceed `budget`.
pub fn influence_graph(rule: &RuleTable, budget: u64) -> Result<InfluenceGraph> {
    let m = rule.num_reviewers();
    let n = rule.num_papers();
    let k = rule.num_permutations();
    let num_profiles = rule.num_profiles();
    let required = (num_profiles as u128)
        .saturating_mul(m as u128)
        .saturating_mul(k as u128 - 1);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: budget as u128 });
    }

    let positions: Vec<Vec<usize>> = (0..k)
        .map(|d| {
            let order = perm::nth_permutation(n, d as u64);
            let mut pos = vec![0; n];
            for (at, &p) in order.iter().enumerate() {
                pos[p] = at;
            }
            pos
        })
        .collect();

    // Strides of each reviewer digit in the profile index.
    let mut stride = vec![1usize; m];
    for i in (0..m.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * k;
    }

    let mut edges = BTreeSet::new();
    for index in 0..num_profiles {
        let digits = rule.profile_digits(index);
        let base = &positions[rule.outputs[index]];
        for i in 0..m {
            for alt in 0..k {
                if alt == digits[i] {
                    continue;
                }
                let deviated = index - digits[i] * stride[i] + alt * stride[i];
                debug_assert_eq!(
                    {
                        let mut d = digits.clone();
                        d[i] = alt;
                        rule.profile_index(&d)
                    },
                    deviated
                );
                let moved = &positions[rule.outputs[deviated]];
                for p in 0..n {
                    if base[p] != moved[p] {
                        edges.insert((i, p));
                    }
                }
            }
        }
    }
    Ok(InfluenceGraph { num_reviewers: m, num_papers: n, edges })
}

/// Census of every aggregation rule on the total-ranking instance
/// with `n` papers and `m` reviewers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub m: usize,
    pub total_rules: u128,
    pub pu_rules: u64,
    pub pu_and_wsp_rules: u64,
}

/// Enumerates all rule tables, counting the pairwise-unanimous ones
/// and those that are also weakly strategyproof. Refuses when the
/// number of rule evaluations (tables times profiles) would exceed
/// `budget`.
pub fn total_ranking_census(n: usize, m: usize, budget: u64) -> Result<CensusReport> {
    let (num_perms, num_profiles) = table_dimensions(n, m)?;
    let total_rules = (num_perms as u128)
        .checked_pow(num_profiles as u32)
        .ok_or(Error::BudgetExceeded { required: u128::MAX, budget: budget as u128 })?;
    let required = total_rules.saturating_mul(num_profiles as u128);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget: budget as u128 });
    }

    let rg = ReviewGraph::new(vec![(0..n).collect(); m], n)?;
    let probe = RuleTable::new(n, m, vec![0; num_profiles])?;
    let profiles: Vec<Profile> = (0..num_profiles).map(|i| probe.profile(i)).collect();
    let outputs_as_rankings: Vec<AggregateRanking> = (0..num_perms)
        .map(|d| AggregateRanking::new(perm::nth_permutation(n, d as u64)))
        .collect::<Result<_>>()?;

    let mut pu_rules = 0u64;
    let mut pu_and_wsp_rules = 0u64;
    let mut outputs = vec![0usize; num_profiles];
    loop {
        let pu = (0..num_profiles).try_fold(true, |ok, i| {
            if !ok {
                return Ok::<_, Error>(false);
            }
            Ok(check_pu(&rg, &profiles[i], &outputs_as_rankings[outputs[i]])?.verdict)
        })?;
        if pu {
            pu_rules += 1;
            let rule = RuleTable::new(n, m, outputs.clone())?;
            if influence_graph(&rule, u64::MAX)?.is_wsp() {
                pu_and_wsp_rules += 1;
            }
        }

        // Odometer step over the rule space.
        let mut i = 0;
        loop {
            if i == num_profiles {
                return Ok(CensusReport { n, m, total_rules, pu_rules, pu_and_wsp_rules });
            }
            outputs[i] += 1;
            if outputs[i] < num_perms {
                break;
            }
            outputs[i] = 0;
            i += 1;
        }
    }
}

/// The fixed four-paper chain instance: reviewer 0 ranks {0,1},
/// reviewer 1 ranks {1,2}, reviewer 2 ranks {2,3}.
pub fn chain_review_graph() -> ReviewGraph {
    ReviewGraph::new(vec![vec![0, 1], vec![1, 2], vec![2, 3]], 4)
        .expect("fixed instance is valid")
}

const CHAIN_REVIEWERS: usize = 3;
const CHAIN_PAPERS: usize = 4;
const CHAIN_PROFILES: usize = 8;

/// Reviewer i's ranking flips when bit (2 - i) of the profile index
/// flips; reviewer 0 is the most significant bit.
fn chain_bit(reviewer: usize) -> usize {
    1 << (CHAIN_REVIEWERS - 1 - reviewer)
}

/// Profile of the chain instance: bit set means the reviewer reverses
/// her two papers.
pub fn chain_profile(index: usize) -> Profile {
    assert!(index < CHAIN_PROFILES, "chain profile index out of range");
    let rg = chain_review_graph();
    let rankings = (0..CHAIN_REVIEWERS)
        .map(|i| {
            let natural = Ranking::new(rg.review_set(i).to_vec())
                .expect("review set is duplicate-free");
            if index & chain_bit(i) != 0 {
                natural.reversed()
            } else {
                natural
            }
        })
        .collect();
    Profile::new(rankings)
}

/// A rule for the chain instance: one output order per profile index.
pub type ChainRule = Vec<Vec<usize>>;

pub fn chain_rule_is_gu(rule: &ChainRule) -> Result<bool> {
    let rg = chain_review_graph();
    for (index, order) in rule.iter().enumerate() {
        let output = AggregateRanking::new(order.clone())?;
        if !check_gu(&rg, &chain_profile(index), &output)?.verdict {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn chain_rule_is_wsp(rule: &ChainRule) -> Result<bool> {
    if rule.len() != CHAIN_PROFILES {
        return Err(Error::Precondition(format!(
            "chain rule needs {CHAIN_PROFILES} outputs, found {}",
            rule.len()
        )));
    }
    let positions: Vec<Vec<usize>> = rule
        .iter()
        .map(|order| {
            let output = AggregateRanking::new(order.clone())?;
            Ok((0..CHAIN_PAPERS).map(|p| output.position(p)).collect())
        })
        .collect::<Result<_>>()?;
    for i in 0..CHAIN_REVIEWERS {
        let mut safe = (1u8 << CHAIN_PAPERS) - 1;
        for index in 0..CHAIN_PROFILES {
            let partner = index ^ chain_bit(i);
            if partner < index {
                safe &= unchanged_mask(&positions[partner], &positions[index]);
            }
        }
        if safe == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bit p set iff paper p sits at the same position in both outputs.
fn unchanged_mask(a: &[usize], b: &[usize]) -> u8 {
    let mut mask = 0u8;
    for p in 0..a.len() {
        if a[p] == b[p] {
            mask |= 1 << p;
        }
    }
    mask
}

/// A dead end hit by the chain search: after assigning an output to
/// `later_profile`, the reviewer had no paper left whose position
/// stays fixed across all her assigned deviation pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConflictEvent {
    pub reviewer: usize,
    pub earlier_profile: usize,
    pub later_profile: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainOutcome {
    /// No rule satisfies the requested constraints; the search
    /// exhausted every assignment.
    Unsat,
    /// A satisfying rule, one output order per profile index.
    Sat { rule: ChainRule },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSearchReport {
    pub require_gu: bool,
    pub require_wsp: bool,
    pub outcome: ChainOutcome,
    /// Candidate outputs tried across the whole search.
    pub nodes_explored: u64,
    /// Distinct dead ends, in first-discovery order.
    pub conflicts: Vec<ConflictEvent>,
    pub total_conflicts: u64,
}

/// Backtracking search for a chain-instance rule satisfying the
/// requested constraints. Profiles are assigned in index order; the
/// candidates for each profile are its constraint-respecting outputs
/// in lexicographic order. Satisfying rules are re-verified before
/// being returned.
pub fn chain_search(require_gu: bool, require_wsp: bool) -> Result<ChainSearchReport> {
    let rg = chain_review_graph();
    let all_orders = perm::permutations_of(&[0, 1, 2, 3]);
    let positions: Vec<Vec<usize>> = all_orders
        .iter()
        .map(|order| {
            let mut pos = vec![0; CHAIN_PAPERS];
            for (at, &p) in order.iter().enumerate() {
                pos[p] = at;
            }
            pos
        })
        .collect();

    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(CHAIN_PROFILES);
    for index in 0..CHAIN_PROFILES {
        let profile = chain_profile(index);
        let mut allowed = Vec::new();
        for (o, order) in all_orders.iter().enumerate() {
            let output = AggregateRanking::new(order.clone())?;
            if !require_gu || check_gu(&rg, &profile, &output)?.verdict {
                allowed.push(o);
            }
        }
        candidates.push(allowed);
    }

    struct Search<'a> {
        candidates: &'a [Vec<usize>],
        positions: &'a [Vec<usize>],
        require_wsp: bool,
        chosen: [usize; CHAIN_PROFILES],
        nodes_explored: u64,
        conflicts: Vec<ConflictEvent>,
        seen_conflicts: BTreeSet<ConflictEvent>,
        total_conflicts: u64,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize, masks: [u8; CHAIN_REVIEWERS]) -> bool {
            if depth == CHAIN_PROFILES {
                return true;
            }
            'candidates: for &cand in &self.candidates[depth] {
                self.nodes_explored += 1;
                let mut next = masks;
                if self.require_wsp {
                    for (i, mask) in next.iter_mut().enumerate() {
                        let partner = depth ^ chain_bit(i);
                        if partner >= depth {
                            continue;
                        }
                        *mask &= unchanged_mask(
                            &self.positions[self.chosen[partner]],
                            &self.positions[cand],
                        );
                        if *mask == 0 {
                            let event = ConflictEvent {
                                reviewer: i,
                                earlier_profile: partner,
                                later_profile: depth,
                            };
                            self.total_conflicts += 1;
                            if self.seen_conflicts.insert(event) {
                                self.conflicts.push(event);
                            }
                            continue 'candidates;
                        }
                    }
                }
                self.chosen[depth] = cand;
                if self.run(depth + 1, next) {
                    return true;
                }
            }
            false
        }
    }

    let mut search = Search {
        candidates: &candidates,
        positions: &positions,
        require_wsp,
        chosen: [0; CHAIN_PROFILES],
        nodes_explored: 0,
        conflicts: Vec::new(),
        seen_conflicts: BTreeSet::new(),
        total_conflicts: 0,
    };
    let full_mask = (1u8 << CHAIN_PAPERS) - 1;
    let sat = search.run(0, [full_mask; CHAIN_REVIEWERS]);

    let outcome = if sat {
        let rule: ChainRule = search
            .chosen
            .iter()
            .map(|&o| all_orders[o].clone())
            .collect();
        if require_gu && !chain_rule_is_gu(&rule)? {
            return Err(Error::Contract(
                "chain search produced a rule violating group unanimity".into(),
            ));
        }
        if require_wsp && !chain_rule_is_wsp(&rule)? {
            return Err(Error::Contract(
                "chain search produced a rule violating weak strategyproofness".into(),
            ));
        }
        ChainOutcome::Sat { rule }
    } else {
        ChainOutcome::Unsat
    };

    Ok(ChainSearchReport {
        require_gu,
        require_wsp,
        outcome,
        nodes_explored: search.nodes_explored,
        conflicts: search.conflicts,
        total_conflicts: search.total_conflicts,
    })
}

/// Configuration of the misplacement experiment: papers split into
/// sides of n1 and n - n1, each side sorted by the true ranking, the
/// two sides interleaved, displacement measured against the truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisplacementConfig {
    pub n: usize,
    pub n1: usize,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisplacementReport {
    pub config: MisplacementConfig,
    /// max(n/n1, n/(n - n1)).
    pub c: f64,
    /// 2 * sqrt(n * c * ln(2n / delta)).
    pub bound: f64,
    pub max_observed: usize,
    pub violations: u64,
    pub violation_rate: f64,
}

/// Positions every paper ends up at when each side is sorted by
/// `true_position` and the sides are interleaved. Papers `0..n1` form
/// one side, the rest the other. Returns the output position of each
/// paper, 1-based like the input.
pub fn interleaved_positions(true_position: &[usize], n1: usize) -> Result<Vec<usize>> {
    let n = true_position.len();
    let by_truth = |side: Vec<usize>| -> Result<Ranking> {
        let mut side = side;
        side.sort_by_key(|&p| true_position[p]);
        Ranking::new(side)
    };
    let side_c = by_truth((0..n1).collect())?;
    let side_cbar = by_truth((n1..n).collect())?;
    let merged = interleave(&side_c, &side_cbar)?;
    Ok((0..n).map(|p| merged.position(p)).collect())
}

pub fn misplacement_monte_carlo(config: MisplacementConfig) -> Result<MisplacementReport> {
    let MisplacementConfig { n, n1, delta, trials, seed } = config;
    if n1 == 0 || n1 >= n {
        return Err(Error::Precondition(format!(
            "both sides must be nonempty: n = {n}, n1 = {n1}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Precondition(format!(
            "delta must lie strictly between 0 and 1, found {delta}"
        )));
    }
    if trials == 0 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let n2 = n - n1;
    let c = (n as f64 / n1 as f64).max(n as f64 / n2 as f64);
    let floor = 4.0 * c / std::f64::consts::LN_2;
    if (n as f64) < floor {
        return Err(Error::Precondition(format!(
            "n = {n} is below the guarantee threshold 4c/ln 2 = {floor:.2} for c = {c}"
        )));
    }
    let bound = 2.0 * (n as f64 * c * (2.0 * n as f64 / delta).ln()).sqrt();

    let mut max_observed = 0usize;
    let mut violations = 0u64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        // paper -> 1-based true position.
        let order = perm::random_permutation(&mut rng, n);
        let mut true_position = vec![0usize; n];
        for (at, &p) in order.iter().enumerate() {
            true_position[p] = at + 1;
        }
        let out_position = interleaved_positions(&true_position, n1)?;
        let displacement = (0..n)
            .map(|p| true_position[p].abs_diff(out_position[p]))
            .max()
            .unwrap_or(0);
        max_observed = max_observed.max(displacement);
        if displacement as f64 > bound {
            violations += 1;
        }
    }

    Ok(MisplacementReport {
        config,
        c,
        bound,
        max_observed,
        violations,
        violation_rate: violations as f64 / trials as f64,
    })
}
