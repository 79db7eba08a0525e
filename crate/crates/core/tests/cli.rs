//! End-to-end runs of the `twdeg` binary.

use std::process::{Command, Output};

use twdeg::verify::{Report, Status};

fn twdeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twdeg"))
        .args(args)
        .env_remove("TWDEG_WORKERS")
        .output()
        .expect("run twdeg")
}

fn report_of(out: &Output) -> Report {
    Report::from_json(&String::from_utf8_lossy(&out.stdout)).expect("json report")
}

#[test]
fn table1_small_run_passes() {
    let out = twdeg(&["table1", "--q", "7", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report_of(&out);
    assert_eq!(r.version, twdeg::verify::REPORT_VERSION);
    assert!(r.results.iter().all(|c| c.status == Status::Pass));
    let row2 = r
        .results
        .iter()
        .find(|c| c.check_id == "table1.row2.q7.m2")
        .unwrap();
    assert_eq!(row2.actual, "441");
    let ids: Vec<&str> = r.results.iter().map(|c| c.check_id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort_by(|a, b| twdeg::verify::natural_cmp(a, b));
    assert_eq!(ids, sorted);
}

#[test]
fn csv_output_has_fixed_columns() {
    let out = twdeg(&["lemma", "coset-involution", "--q", "7,8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("check_id,status,expected,actual,runtime_ms")
    );
    assert!(lines
        .next()
        .unwrap()
        .starts_with("coset-involution.q7,pass,true,true,"));
    assert!(lines
        .next()
        .unwrap()
        .starts_with("coset-involution.q8,pass,"));
}

#[test]
fn long_checks_skip_without_failing() {
    let out = twdeg(&["table4", "--q", "29"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report_of(&out);
    assert_eq!(r.count(Status::SkippedLong), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 skipped"));
}

#[test]
fn failing_check_sets_exit_code() {
    let out = twdeg(&["lemma", "dickson-census", "--q", "11"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report_of(&out);
    let failed: Vec<&str> = r.failures().map(|c| c.check_id.as_str()).collect();
    assert_eq!(failed, ["dickson-census.q11.d5"]);
}

#[test]
fn q5_runs_as_q4() {
    let out = twdeg(&["lemma", "alpha-action", "--q", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report_of(&out);
    assert_eq!(r.config.aliases, vec![(5, 4)]);
    assert!(r
        .results
        .iter()
        .all(|c| c.check_id.starts_with("alpha-action.q4")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q = 5 ran as q = 4"));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(twdeg(&["lemma", "no-such-lemma"]).status.code(), Some(2));
    assert_eq!(twdeg(&["table1", "--q", "6"]).status.code(), Some(2));
    assert_eq!(twdeg(&["table1", "--m", "7"]).status.code(), Some(2));
}

#[test]
fn certificates_replay_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let certs = dir.path().join("certs.json");
    let report = dir.path().join("report.json");
    let out = twdeg(&[
        "table2",
        "--q",
        "7,8",
        "--certs",
        certs.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    for file in [&certs, &report] {
        let out = twdeg(&["replay", file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let r = report_of(&out);
        assert!(!r.results.is_empty());
        assert!(r
            .results
            .iter()
            .all(|c| c.status == Status::Pass && c.check_id.starts_with("replay.")));
    }
}

#[test]
fn witness_cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let args = [
        "lemma",
        "s4-pairwise",
        "--q",
        "23",
        "--cache",
        cache.to_str().unwrap(),
    ];
    assert_eq!(twdeg(&args).status.code(), Some(0));
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.contains("\"q\": 23"));
    let second = twdeg(&args);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), text);
}

#[test]
fn workers_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_twdeg"))
        .args(["lemma", "obstruction", "--q", "7"])
        .env("TWDEG_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report_of(&out).config.workers, Some(2));
}

#[test]
fn lemma_list_names_every_lemma() {
    let out = twdeg(&["lemma", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().collect();
    assert_eq!(names, twdeg::verify::LEMMA_IDS);
}

#[test]
fn table2_matches_golden_csv() {
    let out = twdeg(&["table2", "--q", "7", "--m", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let mut got = String::from("check_id,status,expected,actual\n");
    for rec in rdr.records() {
        let rec = rec.unwrap();
        got.push_str(&format!(
            "{},{},{},{}\n",
            &rec[0], &rec[1], &rec[2], &rec[3]
        ));
    }
    let golden = include_str!("golden/table2_q7_m2.csv");
    assert_eq!(got, golden);
}
