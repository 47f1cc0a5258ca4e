//! End-to-end tests against the compiled binary: golden outputs for
//! the stable text formats, exit-code contract, stdin ingestion, and
//! byte-identical reruns.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_splitrank");

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .expect("fixture path is utf-8")
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("stdout is utf-8")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child.stdin.take().expect("stdin piped").write_all(input.as_bytes()).expect("write stdin");
    child.wait_with_output().expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Fresh per-test scratch directory under the system temp dir.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("splitrank-cli-{name}-{}", std::process::id()));
    if dir.exists() {
        fs::remove_dir_all(&dir).expect("clear scratch dir");
    }
    fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

#[test]
fn stats_table_matches_golden() {
    let stdout = run_ok(&["stats", "--input", &fixture("six.json")]);
    let expected = "\
papers                       6
reviewers                    6
conflict pairs               9
avg conflicts per reviewer   1.50
max conflicts per reviewer   2
components                   3
largest component            2 reviewers, 2 papers
";
    assert_eq!(stdout, expected);
}

#[test]
fn stats_tsv_matches_golden() {
    let stdout = run_ok(&["stats", "--input", &fixture("authorship.csv"), "--tsv"]);
    let expected = "\
papers\t7
reviewers\t8
conflict_pairs\t12
avg_conflicts_per_reviewer\t1.5000
max_conflicts_per_reviewer\t3
components\t4
largest_component_reviewers\t4
largest_component_papers\t3
";
    assert_eq!(stdout, expected);
}

#[test]
fn stats_reads_csv_from_stdin() {
    let out = run_stdin(&["stats", "--input", "-"], "author_id,paper_id\nann,P1\nbob,P2\n");
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(stdout.contains("papers                       2"), "stdout: {stdout}");
    assert!(stdout.contains("components                   2"), "stdout: {stdout}");
}

#[test]
fn stats_of_empty_graph_is_all_zero() {
    let out = run_stdin(
        &["stats", "--input", "-", "--format", "graph-json"],
        "{\"conflicts\": [], \"papers\": [], \"reviewers\": []}\n",
    );
    assert_eq!(exit_code(&out), 0);
    let expected = "\
papers                       0
reviewers                    0
conflict pairs               0
avg conflicts per reviewer   0.00
max conflicts per reviewer   0
components                   0
largest component            0 reviewers, 0 papers
";
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected);
}

#[test]
fn partition_assign_aggregate_chain_matches_golden() {
    let dir = scratch("chain");
    let part = dir.join("part.json").to_str().unwrap().to_string();
    let ranking = dir.join("ranking.json").to_str().unwrap().to_string();
    let six = fixture("six.json");

    run_ok(&["partition", "--input", &six, "--mu", "2", "--lambda", "1", "--out", &part]);
    let part_text = fs::read_to_string(&part).unwrap();
    let expected_part = r#"{
  "C": {
    "papers": [
      "p4",
      "p5"
    ],
    "reviewers": [
      "r4",
      "r5"
    ]
  },
  "Cbar": {
    "papers": [
      "p0",
      "p1",
      "p2",
      "p3"
    ],
    "reviewers": [
      "r0",
      "r1",
      "r2",
      "r3"
    ]
  }
}
"#;
    assert_eq!(part_text, expected_part);

    let assignment = run_ok(&["assign", "--input", &six, "--mu", "2", "--lambda", "1"]);
    let expected_assignment = r#"{
  "params": {
    "lambda": 1,
    "mu": 2
  },
  "review_sets": {
    "r0": [
      "p4"
    ],
    "r1": [
      "p5"
    ],
    "r2": [],
    "r3": [],
    "r4": [
      "p0",
      "p2"
    ],
    "r5": [
      "p1",
      "p3"
    ]
  }
}
"#;
    assert_eq!(assignment, expected_assignment);

    run_ok(&[
        "aggregate",
        "--input",
        &six,
        "--partition",
        &part,
        "--profile",
        &fixture("six_profile.json"),
        "--out",
        &ranking,
    ]);
    let ranking_text = fs::read_to_string(&ranking).unwrap();
    let expected_ranking = r#"[
  "p0",
  "p4",
  "p1",
  "p2",
  "p5",
  "p3"
]
"#;
    assert_eq!(ranking_text, expected_ranking);
}

#[test]
fn checks_hold_on_the_honest_pipeline_output() {
    let dir = scratch("checks");
    let part = dir.join("part.json").to_str().unwrap().to_string();
    let assignment = dir.join("assignment.json").to_str().unwrap().to_string();
    let ranking = dir.join("ranking.json").to_str().unwrap().to_string();
    let six = fixture("six.json");
    let profile = fixture("six_profile.json");

    run_ok(&["partition", "--input", &six, "--mu", "2", "--lambda", "1", "--out", &part]);
    run_ok(&["assign", "--input", &six, "--mu", "2", "--lambda", "1", "--out", &assignment]);
    run_ok(&[
        "aggregate", "--input", &six, "--partition", &part, "--profile", &profile, "--out",
        &ranking,
    ]);

    for property in ["gu", "pu"] {
        let report = run_ok(&[
            "check", property, "--input", &six, "--assignment", &assignment, "--profile",
            &profile, "--ranking", &ranking,
        ]);
        assert!(report.contains("\"verdict\": true"), "{property}: {report}");
    }

    let sp = run_ok(&[
        "check",
        "sp",
        "--input",
        &six,
        "--assignment",
        &assignment,
        "--partition",
        &part,
        "--exhaustive",
    ]);
    assert!(sp.contains("\"verdict\": true"), "sp: {sp}");
}

#[test]
fn mismatched_partition_breaks_strategyproofness() {
    let report = run_ok(&[
        "check",
        "sp",
        "--input",
        &fixture("skew_graph.json"),
        "--assignment",
        &fixture("skew_assignment.json"),
        "--partition",
        &fixture("skew_partition.json"),
        "--exhaustive",
    ]);
    assert!(report.contains("\"verdict\": false"), "report: {report}");
    assert!(report.contains("\"reviewer\": 0"), "report: {report}");
    assert!(report.contains("\"paper\": 0"), "report: {report}");
}

#[test]
fn pipeline_writes_artifacts_and_reruns_are_byte_identical() {
    let dir = scratch("pipeline");
    let out1 = dir.join("run1");
    let out2 = dir.join("run2");
    let six = fixture("six.json");
    let profile = fixture("six_profile.json");

    let mut summaries = Vec::new();
    for out in [&out1, &out2] {
        summaries.push(run_ok(&[
            "pipeline",
            "--input",
            &six,
            "--mu",
            "2",
            "--lambda",
            "1",
            "--profile",
            &profile,
            "--seed",
            "11",
            "--trials",
            "300",
            "--out-dir",
            out.to_str().unwrap(),
        ]));
    }
    assert_eq!(
        summaries[0].replace("run1", "run"),
        summaries[1].replace("run2", "run"),
        "pipeline summaries differ between reruns"
    );

    let names =
        ["partition.json", "assignment.json", "ranking.json", "gu_report.json", "sp_report.json"];
    for name in names {
        let a = fs::read(out1.join(name)).unwrap_or_else(|_| panic!("{name} missing"));
        let b = fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }

    let gu = fs::read_to_string(out1.join("gu_report.json")).unwrap();
    let sp = fs::read_to_string(out1.join("sp_report.json")).unwrap();
    assert!(gu.contains("\"verdict\": true"), "gu: {gu}");
    assert!(sp.contains("\"verdict\": true"), "sp: {sp}");
    assert!(sp.contains("\"trials\": 300"), "sp: {sp}");
}

#[test]
fn fully_connected_graph_refuses_with_pruning_hint() {
    let out = run(&[
        "partition", "--input", &fixture("full.json"), "--mu", "2", "--lambda", "1",
    ]);
    assert_eq!(exit_code(&out), 3);
    let err = stderr(&out);
    assert!(err.contains("no feasible partition"), "stderr: {err}");
    assert!(err.contains("removing high-degree reviewers"), "stderr: {err}");
}

#[test]
fn parse_errors_exit_two() {
    let out = run_stdin(&["stats", "--input", "-", "--format", "graph-json"], "not json");
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("parse error"), "stderr: {}", stderr(&out));
}

#[test]
fn budget_refusal_exits_five() {
    let out = run(&[
        "verify-impossibility", "total-ranking", "--n", "3", "--m", "2", "--budget", "10",
    ]);
    assert_eq!(exit_code(&out), 5);
    assert!(stderr(&out).contains("budget"), "stderr: {}", stderr(&out));
}

#[test]
fn sp_check_without_a_mode_exits_four() {
    let out = run(&[
        "check",
        "sp",
        "--input",
        &fixture("six.json"),
        "--assignment",
        &fixture("skew_assignment.json"),
        "--partition",
        &fixture("skew_partition.json"),
    ]);
    assert_eq!(exit_code(&out), 4);
    assert!(stderr(&out).contains("--exhaustive"), "stderr: {}", stderr(&out));
}

#[test]
fn pipeline_with_profile_requires_a_seed() {
    let dir = scratch("seedless");
    let out = run(&[
        "pipeline",
        "--input",
        &fixture("six.json"),
        "--mu",
        "2",
        "--lambda",
        "1",
        "--profile",
        &fixture("six_profile.json"),
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 4);
    assert!(stderr(&out).contains("--seed"), "stderr: {}", stderr(&out));
}

#[test]
fn prune_table_and_tsv_match_golden() {
    let csv = fixture("authorship.csv");
    let table = run_ok(&["prune", "--input", &csv, "--remove", "2", "--checkpoints", "0,1,2"]);
    let expected_table = "\
removed  components  largest component
0        4           4 reviewers, 3 papers
1        5           2 reviewers, 2 papers
2        6           2 reviewers, 2 papers
";
    assert_eq!(table, expected_table);

    let tsv = run_ok(&[
        "prune", "--input", &csv, "--remove", "2", "--checkpoints", "0,1,2", "--tsv",
    ]);
    let expected_tsv = "\
removed\tcomponents\tlargest_reviewers\tlargest_papers
0\t4\t4\t3
1\t5\t2\t2
2\t6\t2\t2
";
    assert_eq!(tsv, expected_tsv);
}

#[test]
fn report_renders_every_supplied_artifact() {
    let dir = scratch("report");
    let six = fixture("six.json");
    let part = dir.join("part.json").to_str().unwrap().to_string();
    let assignment = dir.join("assignment.json").to_str().unwrap().to_string();
    let ranking = dir.join("ranking.json").to_str().unwrap().to_string();
    let trace = dir.join("trace.json").to_str().unwrap().to_string();
    let gu_report = dir.join("gu.json").to_str().unwrap().to_string();

    run_ok(&["partition", "--input", &six, "--mu", "2", "--lambda", "1", "--out", &part]);
    run_ok(&["assign", "--input", &six, "--mu", "2", "--lambda", "1", "--out", &assignment]);
    run_ok(&[
        "aggregate",
        "--input",
        &six,
        "--partition",
        &part,
        "--profile",
        &fixture("six_profile.json"),
        "--out",
        &ranking,
    ]);
    let trace_json = run_ok(&["prune", "--input", &six, "--remove", "1", "--json"]);
    fs::write(&trace, trace_json).unwrap();
    run_ok(&[
        "check",
        "gu",
        "--input",
        &six,
        "--assignment",
        &assignment,
        "--profile",
        &fixture("six_profile.json"),
        "--ranking",
        &ranking,
        "--out",
        &gu_report,
    ]);

    let report = run_ok(&[
        "report",
        "--input",
        &six,
        "--prune-trace",
        &trace,
        "--partition",
        &part,
        "--assignment",
        &assignment,
        "--ranking",
        &ranking,
        "--property",
        &gu_report,
    ]);
    assert!(report.contains("conflict pairs               9"), "report: {report}");
    assert!(report.contains("removed  components  largest component"), "report: {report}");
    assert!(report.contains("side C     2 reviewers: r4, r5"), "report: {report}");
    assert!(report.contains("r4: p0, p2"), "report: {report}");
    assert!(report.contains("   1. p0"), "report: {report}");
    assert!(report.contains("group unanimity: holds"), "report: {report}");
}

#[test]
fn report_without_artifacts_exits_four() {
    let out = run(&["report"]);
    assert_eq!(exit_code(&out), 4);
    assert!(stderr(&out).contains("nothing to report"), "stderr: {}", stderr(&out));
}

#[test]
fn round_robin_deals_sorted_papers_cyclically() {
    // Two components, (2 reviewers, 2 papers) and (2, 4); the (2, 2)
    // cell wins the smaller-p tie-break, so r1 and r2 take the four
    // opposite papers two apiece.
    let graph = r#"{
  "conflicts": [["r1", "p1"], ["r1", "p2"], ["r2", "p1"], ["r2", "p2"],
                ["r3", "p3"], ["r3", "p4"], ["r3", "p5"], ["r4", "p5"], ["r4", "p6"]],
  "papers": ["p1", "p2", "p3", "p4", "p5", "p6"],
  "reviewers": ["r1", "r2", "r3", "r4"]
}"#;
    let out = run_stdin(
        &["assign", "--input", "-", "--format", "graph-json", "--mu", "2", "--lambda", "1"],
        graph,
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let sets = &json["review_sets"];
    assert_eq!(sets["r1"], serde_json::json!(["p3", "p5"]), "assignment: {text}");
    assert_eq!(sets["r2"], serde_json::json!(["p4", "p6"]), "assignment: {text}");
}
