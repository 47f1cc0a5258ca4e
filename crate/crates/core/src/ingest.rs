//! Parsing and canonical serialization of the interchange formats.
//!
//! Formats (all UTF-8):
//! - pairs-csv: header `author_id,paper_id`, one conflict edge per row.
//! - graph-json: `{"conflicts": [[r_id, p_id], ...], "papers": [ids], "reviewers": [ids]}`.
//! - assignment-json: `{"params": {"lambda": .., "mu": ..}, "review_sets": {r_id: [p_ids]}}`.
//! - profile-json: `{r_id: [p_ids best-first]}`.
//! - ranking-json: `[p_ids best-first]`.
//! - partition-json: `{"C": {"papers": [..], "reviewers": [..]}, "Cbar": {..}}`.
//!
//! Serialization is canonical: keys sorted, two-space indent, LF line
//! endings, trailing newline. `parse(serialize(x)) == x` for every
//! domain type. Indices are assigned to identifiers in first-appearance
//! order (pairs-csv) or array order (graph-json) and kept in a
//! [`SymbolTable`] so artifacts can be mapped back to external ids.

use std::collections::HashMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{AggregateRanking, AssignmentParams, ConflictGraph, Profile, Ranking, ReviewGraph};
use crate::partition::{PartitionResult, PartitionSide};

/// Bidirectional map between dense indices and external string ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolTable {
    reviewers: Vec<String>,
    papers: Vec<String>,
    reviewer_index: HashMap<String, usize>,
    paper_index: HashMap<String, usize>,
}

impl SymbolTable {
    pub fn empty() -> Self {
        Self {
            reviewers: Vec::new(),
            papers: Vec::new(),
            reviewer_index: HashMap::new(),
            paper_index: HashMap::new(),
        }
    }

    /// Synthetic ids `r0..` / `p0..` for graphs built in code.
    pub fn numbered(num_reviewers: usize, num_papers: usize) -> Self {
        let mut t = Self::empty();
        for i in 0..num_reviewers {
            t.intern_reviewer(&format!("r{i}"));
        }
        for j in 0..num_papers {
            t.intern_paper(&format!("p{j}"));
        }
        t
    }

    pub fn num_reviewers(&self) -> usize {
        self.reviewers.len()
    }

    pub fn num_papers(&self) -> usize {
        self.papers.len()
    }

    pub fn intern_reviewer(&mut self, id: &str) -> usize {
        if let Some(&i) = self.reviewer_index.get(id) {
            return i;
        }
        let i = self.reviewers.len();
        self.reviewers.push(id.to_string());
        self.reviewer_index.insert(id.to_string(), i);
        i
    }

    pub fn intern_paper(&mut self, id: &str) -> usize {
        if let Some(&j) = self.paper_index.get(id) {
            return j;
        }
        let j = self.papers.len();
        self.papers.push(id.to_string());
        self.paper_index.insert(id.to_string(), j);
        j
    }

    pub fn reviewer_id(&self, index: usize) -> &str {
        &self.reviewers[index]
    }

    pub fn paper_id(&self, index: usize) -> &str {
        &self.papers[index]
    }

    pub fn reviewer_index(&self, id: &str) -> Option<usize> {
        self.reviewer_index.get(id).copied()
    }

    pub fn paper_index(&self, id: &str) -> Option<usize> {
        self.paper_index.get(id).copied()
    }
}

/// A parsed conflict graph plus the id table and any non-fatal notes
/// (currently: deduplicated conflict pairs).
#[derive(Debug)]
pub struct ParsedConflicts {
    pub graph: ConflictGraph,
    pub symbols: SymbolTable,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictFormat {
    PairsCsv,
    GraphJson,
}

pub fn parse_conflicts(text: &str, format: ConflictFormat) -> Result<ParsedConflicts> {
    match format {
        ConflictFormat::PairsCsv => parse_pairs_csv(text),
        ConflictFormat::GraphJson => parse_graph_json(text),
    }
}

pub fn parse_pairs_csv(text: &str) -> Result<ParsedConflicts> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut symbols = SymbolTable::empty();
    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut warnings = Vec::new();
    let mut first = true;

    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: csv_error_line(&e),
            msg: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line());
        if first {
            first = false;
            let fields: Vec<&str> = record.iter().collect();
            if fields != ["author_id", "paper_id"] {
                return Err(Error::Parse {
                    line,
                    msg: format!(
                        "expected header `author_id,paper_id`, found {:?}",
                        fields.join(",")
                    ),
                });
            }
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let (author, paper) = (&record[0], &record[1]);
        if author.is_empty() || paper.is_empty() {
            return Err(Error::Parse { line, msg: "empty identifier".into() });
        }
        let r = symbols.intern_reviewer(author);
        let p = symbols.intern_paper(paper);
        if !seen.insert((r, p)) {
            warnings.push(format!(
                "duplicate conflict pair ({author}, {paper}){} ignored",
                line.map(|l| format!(" at line {l}")).unwrap_or_default()
            ));
            continue;
        }
        pairs.push((r, p));
    }

    let graph = ConflictGraph::new(symbols.num_reviewers(), symbols.num_papers(), pairs)?;
    Ok(ParsedConflicts { graph, symbols, warnings })
}

fn csv_error_line(e: &csv::Error) -> Option<u64> {
    match e.kind() {
        csv::ErrorKind::Utf8 { pos, .. } => pos.as_ref().map(|p| p.line()),
        csv::ErrorKind::UnequalLengths { pos, .. } => pos.as_ref().map(|p| p.line()),
        _ => None,
    }
}

pub fn parse_graph_json(text: &str) -> Result<ParsedConflicts> {
    let value = parse_json(text)?;
    let obj = as_object(&value, "graph document")?;
    expect_keys(obj, &["conflicts", "papers", "reviewers"], "graph document")?;

    let mut symbols = SymbolTable::empty();
    for id in string_array(obj, "reviewers")? {
        if symbols.reviewer_index(&id).is_some() {
            return Err(parse_err(format!("duplicate reviewer id {id:?}")));
        }
        symbols.intern_reviewer(&id);
    }
    for id in string_array(obj, "papers")? {
        if symbols.paper_index(&id).is_some() {
            return Err(parse_err(format!("duplicate paper id {id:?}")));
        }
        symbols.intern_paper(&id);
    }

    let conflicts_value = obj
        .get("conflicts")
        .ok_or_else(|| parse_err("missing `conflicts`".into()))?;
    let entries = conflicts_value
        .as_array()
        .ok_or_else(|| parse_err("`conflicts` must be an array".into()))?;

    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let mut warnings = Vec::new();
    for entry in entries {
        let pair = entry
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| parse_err("each conflict must be a [reviewer, paper] pair".into()))?;
        let rid = pair[0]
            .as_str()
            .ok_or_else(|| parse_err("conflict reviewer id must be a string".into()))?;
        let pid = pair[1]
            .as_str()
            .ok_or_else(|| parse_err("conflict paper id must be a string".into()))?;
        let r = symbols
            .reviewer_index(rid)
            .ok_or_else(|| parse_err(format!("unknown reviewer id {rid:?} in conflicts")))?;
        let p = symbols
            .paper_index(pid)
            .ok_or_else(|| parse_err(format!("unknown paper id {pid:?} in conflicts")))?;
        if !seen.insert((r, p)) {
            warnings.push(format!("duplicate conflict pair ({rid}, {pid}) ignored"));
            continue;
        }
        pairs.push((r, p));
    }

    let graph = ConflictGraph::new(symbols.num_reviewers(), symbols.num_papers(), pairs)?;
    Ok(ParsedConflicts { graph, symbols, warnings })
}

/// Canonical graph-json.
pub fn graph_json(graph: &ConflictGraph, symbols: &SymbolTable) -> String {
    let reviewers: Vec<Value> =
        (0..graph.num_reviewers()).map(|i| json!(symbols.reviewer_id(i))).collect();
    let papers: Vec<Value> =
        (0..graph.num_papers()).map(|j| json!(symbols.paper_id(j))).collect();
    let conflicts: Vec<Value> = graph
        .conflicts()
        .map(|(r, p)| json!([symbols.reviewer_id(r), symbols.paper_id(p)]))
        .collect();
    render(json!({
        "conflicts": conflicts,
        "papers": papers,
        "reviewers": reviewers,
    }))
}

/// Canonical pairs-csv, rows sorted by index. Only conflict edges are
/// representable, so isolated reviewers and papers are lost; use
/// graph-json when that matters.
pub fn pairs_csv(graph: &ConflictGraph, symbols: &SymbolTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["author_id", "paper_id"]).expect("csv write");
    for (r, p) in graph.conflicts() {
        w.write_record([symbols.reviewer_id(r), symbols.paper_id(p)]).expect("csv write");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

/// Canonical assignment-json.
pub fn assignment_json(rg: &ReviewGraph, params: &AssignmentParams, symbols: &SymbolTable) -> String {
    let mut sets = Map::new();
    for i in 0..rg.num_reviewers() {
        let papers: Vec<Value> =
            rg.review_set(i).iter().map(|&p| json!(symbols.paper_id(p))).collect();
        sets.insert(symbols.reviewer_id(i).to_string(), Value::Array(papers));
    }
    render(json!({
        "params": {"lambda": params.lambda, "mu": params.mu},
        "review_sets": Value::Object(sets),
    }))
}

pub fn parse_assignment_json(
    text: &str,
    symbols: &SymbolTable,
) -> Result<(ReviewGraph, AssignmentParams)> {
    let value = parse_json(text)?;
    let obj = as_object(&value, "assignment document")?;
    expect_keys(obj, &["params", "review_sets"], "assignment document")?;

    let params_obj = as_object(
        obj.get("params").ok_or_else(|| parse_err("missing `params`".into()))?,
        "`params`",
    )?;
    let mu = uint_field(params_obj, "mu")?;
    let lambda = uint_field(params_obj, "lambda")?;
    let params = AssignmentParams::new(mu, lambda)
        .map_err(|e| parse_err(e.to_string()))?;

    let sets_obj = as_object(
        obj.get("review_sets").ok_or_else(|| parse_err("missing `review_sets`".into()))?,
        "`review_sets`",
    )?;
    let mut review_sets = vec![Vec::new(); symbols.num_reviewers()];
    for (rid, papers_value) in sets_obj {
        let i = symbols
            .reviewer_index(rid)
            .ok_or_else(|| parse_err(format!("unknown reviewer id {rid:?}")))?;
        review_sets[i] = paper_id_list(papers_value, symbols)?;
    }
    let rg = ReviewGraph::new(review_sets, symbols.num_papers())
        .map_err(|e| parse_err(e.to_string()))?;
    Ok((rg, params))
}

/// Canonical profile-json. Every reviewer appears, empty-handed ones
/// with an empty list.
pub fn profile_json(profile: &Profile, symbols: &SymbolTable) -> String {
    let mut map = Map::new();
    for i in 0..profile.num_reviewers() {
        let papers: Vec<Value> = profile
            .ranking(i)
            .papers()
            .iter()
            .map(|&p| json!(symbols.paper_id(p)))
            .collect();
        map.insert(symbols.reviewer_id(i).to_string(), Value::Array(papers));
    }
    render(Value::Object(map))
}

pub fn parse_profile_json(text: &str, symbols: &SymbolTable) -> Result<Profile> {
    let value = parse_json(text)?;
    let obj = as_object(&value, "profile document")?;
    let mut rankings = vec![Ranking::empty(); symbols.num_reviewers()];
    for (rid, papers_value) in obj {
        let i = symbols
            .reviewer_index(rid)
            .ok_or_else(|| parse_err(format!("unknown reviewer id {rid:?}")))?;
        rankings[i] = Ranking::new(paper_id_list(papers_value, symbols)?)?;
    }
    Ok(Profile::new(rankings))
}

/// Canonical ranking-json: papers best first.
pub fn ranking_json(ranking: &AggregateRanking, symbols: &SymbolTable) -> String {
    let papers: Vec<Value> =
        ranking.order().iter().map(|&p| json!(symbols.paper_id(p))).collect();
    render(Value::Array(papers))
}

pub fn parse_ranking_json(text: &str, symbols: &SymbolTable) -> Result<AggregateRanking> {
    let value = parse_json(text)?;
    let papers = paper_id_list(&value, symbols)?;
    if papers.len() != symbols.num_papers() {
        return Err(parse_err(format!(
            "ranking covers {} of {} papers",
            papers.len(),
            symbols.num_papers()
        )));
    }
    AggregateRanking::new(papers).map_err(|e| parse_err(e.to_string()))
}

/// Canonical partition-json.
pub fn partition_json(partition: &PartitionResult, symbols: &SymbolTable) -> String {
    let side = |s: &PartitionSide| {
        json!({
            "papers": s.papers.iter().map(|&p| json!(symbols.paper_id(p))).collect::<Vec<_>>(),
            "reviewers": s.reviewers.iter().map(|&r| json!(symbols.reviewer_id(r))).collect::<Vec<_>>(),
        })
    };
    render(json!({
        "C": side(&partition.side_c),
        "Cbar": side(&partition.side_cbar),
    }))
}

pub fn parse_partition_json(text: &str, symbols: &SymbolTable) -> Result<PartitionResult> {
    let value = parse_json(text)?;
    let obj = as_object(&value, "partition document")?;
    expect_keys(obj, &["C", "Cbar"], "partition document")?;
    let side = |key: &str| -> Result<PartitionSide> {
        let side_obj = as_object(
            obj.get(key).ok_or_else(|| parse_err(format!("missing `{key}`")))?,
            key,
        )?;
        expect_keys(side_obj, &["papers", "reviewers"], key)?;
        let mut reviewers = Vec::new();
        for id in string_array(side_obj, "reviewers")? {
            reviewers.push(
                symbols
                    .reviewer_index(&id)
                    .ok_or_else(|| parse_err(format!("unknown reviewer id {id:?}")))?,
            );
        }
        let papers = paper_id_list(
            side_obj.get("papers").ok_or_else(|| parse_err("missing `papers`".into()))?,
            symbols,
        )?;
        Ok(PartitionSide { reviewers, papers })
    };
    PartitionResult::new(
        symbols.num_reviewers(),
        symbols.num_papers(),
        side("C")?,
        side("Cbar")?,
    )
    .map_err(|e| parse_err(e.to_string()))
}

fn render(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("json render");
    text.push('\n');
    text
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: Some(e.line() as u64),
        msg: e.to_string(),
    })
}

fn parse_err(msg: String) -> Error {
    Error::Parse { line: None, msg }
}

fn as_object<'a>(value: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| parse_err(format!("{what} must be a JSON object")))
}

fn expect_keys(obj: &Map<String, Value>, keys: &[&str], what: &str) -> Result<()> {
    for key in obj.keys() {
        if !keys.contains(&key.as_str()) {
            return Err(parse_err(format!("unexpected key {key:?} in {what}")));
        }
    }
    Ok(())
}

fn string_array(obj: &Map<String, Value>, key: &str) -> Result<Vec<String>> {
    let value = obj.get(key).ok_or_else(|| parse_err(format!("missing `{key}`")))?;
    let array = value
        .as_array()
        .ok_or_else(|| parse_err(format!("`{key}` must be an array")))?;
    array
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| parse_err(format!("`{key}` entries must be strings")))
        })
        .collect()
}

fn uint_field(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| parse_err(format!("`{key}` must be a non-negative integer")))
}

fn paper_id_list(value: &Value, symbols: &SymbolTable) -> Result<Vec<usize>> {
    let array = value
        .as_array()
        .ok_or_else(|| parse_err("expected an array of paper ids".into()))?;
    array
        .iter()
        .map(|v| {
            let id = v.as_str().ok_or_else(|| parse_err("paper ids must be strings".into()))?;
            symbols.paper_index(id).ok_or_else(|| parse_err(format!("unknown paper id {id:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_gives_empty_graph() {
        for text in ["", "author_id,paper_id\n"] {
            let parsed = parse_pairs_csv(text).unwrap();
            assert_eq!(parsed.graph.num_reviewers(), 0);
            assert_eq!(parsed.graph.num_papers(), 0);
            assert_eq!(parsed.graph.num_conflicts(), 0);
            assert!(parsed.warnings.is_empty());
        }
    }

    #[test]
    fn csv_indices_follow_first_appearance() {
        let text = "author_id,paper_id\na1,p1\na1,p2\na2,p2\n";
        let parsed = parse_pairs_csv(text).unwrap();
        assert_eq!(parsed.graph.num_reviewers(), 2);
        assert_eq!(parsed.graph.num_papers(), 2);
        let edges: Vec<_> = parsed.graph.conflicts().collect();
        assert_eq!(edges, vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(parsed.symbols.reviewer_id(0), "a1");
        assert_eq!(parsed.symbols.paper_id(1), "p2");
    }

    #[test]
    fn csv_duplicate_pair_warns_and_dedups() {
        let text = "author_id,paper_id\na1,p1\na1,p1\n";
        let parsed = parse_pairs_csv(text).unwrap();
        assert_eq!(parsed.graph.num_conflicts(), 1);
        assert_eq!(parsed.warnings.len(), 1);
        assert!(parsed.warnings[0].contains("duplicate"));
        assert!(parsed.warnings[0].contains("line 3"));
    }

    #[test]
    fn csv_malformed_row_reports_line() {
        let text = "author_id,paper_id\na1,p1\na2\n";
        match parse_pairs_csv(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, Some(3)),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_bad_header_rejected() {
        let text = "reviewer,paper\na1,p1\n";
        assert!(matches!(parse_pairs_csv(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn empty_graph_serializes_canonically() {
        let g = ConflictGraph::new(0, 0, []).unwrap();
        let text = graph_json(&g, &SymbolTable::empty());
        assert_eq!(text, "{\n  \"conflicts\": [],\n  \"papers\": [],\n  \"reviewers\": []\n}\n");
    }

    #[test]
    fn graph_json_round_trips() {
        let text = "author_id,paper_id\na1,p1\na1,p2\na2,p2\n";
        let parsed = parse_pairs_csv(text).unwrap();
        let rendered = graph_json(&parsed.graph, &parsed.symbols);
        let reparsed = parse_graph_json(&rendered).unwrap();
        assert_eq!(reparsed.graph, parsed.graph);
        assert_eq!(reparsed.symbols, parsed.symbols);
        assert_eq!(graph_json(&reparsed.graph, &reparsed.symbols), rendered);
    }

    #[test]
    fn pairs_csv_round_trips_when_every_vertex_has_an_edge() {
        let text = "author_id,paper_id\na1,p1\na1,p2\na2,p2\n";
        let parsed = parse_pairs_csv(text).unwrap();
        let rendered = pairs_csv(&parsed.graph, &parsed.symbols);
        assert_eq!(rendered, text);
    }

    #[test]
    fn graph_json_rejects_unknown_and_duplicate_ids() {
        let bad_ref = r#"{"conflicts": [["a", "qq"]], "papers": ["p"], "reviewers": ["a"]}"#;
        assert!(matches!(parse_graph_json(bad_ref), Err(Error::Parse { .. })));
        let dup = r#"{"conflicts": [], "papers": ["p"], "reviewers": ["a", "a"]}"#;
        assert!(matches!(parse_graph_json(dup), Err(Error::Parse { .. })));
    }

    #[test]
    fn assignment_json_round_trips() {
        let symbols = SymbolTable::numbered(2, 3);
        let rg = ReviewGraph::new(vec![vec![2, 0], vec![1]], 3).unwrap();
        let params = AssignmentParams::new(2, 1).unwrap();
        let text = assignment_json(&rg, &params, &symbols);
        let (rg2, params2) = parse_assignment_json(&text, &symbols).unwrap();
        assert_eq!(rg2, rg);
        assert_eq!(params2, params);
        assert_eq!(assignment_json(&rg2, &params2, &symbols), text);
    }

    #[test]
    fn profile_json_round_trips_and_rejects_repeats() {
        let symbols = SymbolTable::numbered(2, 3);
        let profile = Profile::new(vec![
            Ranking::new(vec![2, 0]).unwrap(),
            Ranking::empty(),
        ]);
        let text = profile_json(&profile, &symbols);
        let parsed = parse_profile_json(&text, &symbols).unwrap();
        assert_eq!(parsed, profile);

        let tied = r#"{"r0": ["p1", "p1"]}"#;
        assert!(matches!(parse_profile_json(tied, &symbols), Err(Error::Parse { .. })));
    }

    #[test]
    fn ranking_json_requires_full_coverage() {
        let symbols = SymbolTable::numbered(1, 3);
        let short = r#"["p0", "p1"]"#;
        assert!(matches!(parse_ranking_json(short, &symbols), Err(Error::Parse { .. })));
        let full = AggregateRanking::new(vec![2, 0, 1]).unwrap();
        let text = ranking_json(&full, &symbols);
        assert_eq!(parse_ranking_json(&text, &symbols).unwrap(), full);
    }
}
