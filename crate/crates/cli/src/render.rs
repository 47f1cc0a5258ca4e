//! Human-readable tables and summaries. Output is plain text with
//! stable formatting so golden tests can compare bytes.

use splitrank::analysis::{ComponentStats, PruneTrace};
use splitrank::ingest::SymbolTable;
use splitrank::model::{AggregateRanking, AssignmentParams, ConflictGraph, ReviewGraph};
use splitrank::partition::PartitionResult;
use splitrank::verify::{Property, PropertyReport, Witness};

struct StatsRows {
    papers: usize,
    reviewers: usize,
    conflicts: usize,
    avg_degree: f64,
    max_degree: usize,
    components: usize,
    largest: (usize, usize),
}

fn stats_rows(graph: &ConflictGraph, stats: &ComponentStats) -> StatsRows {
    let m = graph.num_reviewers();
    StatsRows {
        papers: graph.num_papers(),
        reviewers: m,
        conflicts: graph.num_conflicts(),
        avg_degree: if m == 0 { 0.0 } else { graph.num_conflicts() as f64 / m as f64 },
        max_degree: (0..m).map(|r| graph.reviewer_degree(r)).max().unwrap_or(0),
        components: stats.count,
        largest: stats.sizes.first().copied().unwrap_or((0, 0)),
    }
}

pub fn stats_table(graph: &ConflictGraph, stats: &ComponentStats) -> String {
    let r = stats_rows(graph, stats);
    format!(
        "papers                       {}\n\
         reviewers                    {}\n\
         conflict pairs               {}\n\
         avg conflicts per reviewer   {:.2}\n\
         max conflicts per reviewer   {}\n\
         components                   {}\n\
         largest component            {} reviewers, {} papers\n",
        r.papers, r.reviewers, r.conflicts, r.avg_degree, r.max_degree, r.components,
        r.largest.0, r.largest.1
    )
}

pub fn stats_tsv(graph: &ConflictGraph, stats: &ComponentStats) -> String {
    let r = stats_rows(graph, stats);
    format!(
        "papers\t{}\nreviewers\t{}\nconflict_pairs\t{}\navg_conflicts_per_reviewer\t{:.4}\n\
         max_conflicts_per_reviewer\t{}\ncomponents\t{}\nlargest_component_reviewers\t{}\n\
         largest_component_papers\t{}\n",
        r.papers, r.reviewers, r.conflicts, r.avg_degree, r.max_degree, r.components,
        r.largest.0, r.largest.1
    )
}

pub fn prune_table(trace: &PruneTrace) -> String {
    let mut out = String::from("removed  components  largest component\n");
    for snap in &trace.snapshots {
        let largest = snap.stats.sizes.first().copied().unwrap_or((0, 0));
        out.push_str(&format!(
            "{:<7}  {:<10}  {} reviewers, {} papers\n",
            snap.removed_count, snap.stats.count, largest.0, largest.1
        ));
    }
    out
}

pub fn prune_tsv(trace: &PruneTrace) -> String {
    let mut out = String::from("removed\tcomponents\tlargest_reviewers\tlargest_papers\n");
    for snap in &trace.snapshots {
        let largest = snap.stats.sizes.first().copied().unwrap_or((0, 0));
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            snap.removed_count, snap.stats.count, largest.0, largest.1
        ));
    }
    out
}

fn id_list(ids: &[usize], name: impl Fn(usize) -> String) -> String {
    ids.iter().map(|&i| name(i)).collect::<Vec<_>>().join(", ")
}

pub fn partition_summary(part: &PartitionResult, symbols: &SymbolTable) -> String {
    let reviewer = |i| symbols.reviewer_id(i).to_string();
    let paper = |j| symbols.paper_id(j).to_string();
    format!(
        "side C     {} reviewers: {}\n           {} papers: {}\n\
         side Cbar  {} reviewers: {}\n           {} papers: {}\n",
        part.side_c.reviewers.len(),
        id_list(&part.side_c.reviewers, reviewer),
        part.side_c.papers.len(),
        id_list(&part.side_c.papers, paper),
        part.side_cbar.reviewers.len(),
        id_list(&part.side_cbar.reviewers, reviewer),
        part.side_cbar.papers.len(),
        id_list(&part.side_cbar.papers, paper),
    )
}

pub fn assignment_summary(
    rg: &ReviewGraph,
    params: &AssignmentParams,
    symbols: &SymbolTable,
) -> String {
    let mut out = format!("mu = {}, lambda = {}\n", params.mu, params.lambda);
    for reviewer in 0..rg.num_reviewers() {
        let papers = id_list(rg.review_set(reviewer), |j| symbols.paper_id(j).to_string());
        out.push_str(&format!("{}: {}\n", symbols.reviewer_id(reviewer), papers));
    }
    out
}

pub fn ranking_summary(ranking: &AggregateRanking, symbols: &SymbolTable) -> String {
    let mut out = String::new();
    for (pos, &paper) in ranking.order().iter().enumerate() {
        out.push_str(&format!("{:>4}. {}\n", pos + 1, symbols.paper_id(paper)));
    }
    out
}

pub fn property_name(property: Property) -> &'static str {
    match property {
        Property::GroupUnanimity => "group unanimity",
        Property::PairwiseUnanimity => "pairwise unanimity",
        Property::Strategyproofness => "strategyproofness",
        Property::WeakStrategyproofness => "weak strategyproofness",
    }
}

pub fn verdict(report: &PropertyReport) -> &'static str {
    if report.verdict {
        "holds"
    } else {
        "violated"
    }
}

pub fn property_summary(report: &PropertyReport) -> String {
    let mut out = format!("{}: {}", property_name(report.property), verdict(report));
    if let Some(trials) = report.trials {
        out.push_str(&format!(" ({trials} trials)"));
    }
    out.push('\n');
    match &report.witness {
        None => {}
        Some(Witness::OrderedPair { winner, loser }) => {
            out.push_str(&format!(
                "  witness: paper {loser} is ranked above paper {winner}\n"
            ));
        }
        Some(Witness::Deviation { reviewer, paper, position_before, position_after, .. }) => {
            out.push_str(&format!(
                "  witness: reviewer {reviewer} moves paper {paper} from position \
                 {position_before} to {position_after}\n"
            ));
        }
    }
    out
}
