use std::path::Path;
use std::process::{Command, Output};

fn drsrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drsrd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn strip_timing(csv: &str) -> Vec<String> {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_owned()).collect()
}

#[test]
fn simulate_is_repeatable_and_reaches_full_precision_at_full_certainty() {
    let args = [
        "simulate", "--resources", "1000", "--certainty", "1.0", "--queries", "50", "--seed", "7", "--algos",
        "drsrd,exact",
    ];
    let first = stdout(&drsrd(&args));
    let second = stdout(&drsrd(&args));
    assert_eq!(strip_timing(&first), strip_timing(&second));
    let all: Vec<&str> = first.lines().filter(|l| l.contains(",ALL,")).collect();
    assert_eq!(all.len(), 2);
    for line in all {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[6], "1.000000", "{line}");
        assert!(fields[7].parse::<u64>().unwrap() > 0);
    }
    assert_eq!(first.lines().count(), 1 + 50 * 2 + 2);
}

#[test]
fn bench_writes_one_summary_row_per_size_and_algorithm() {
    let out = stdout(&drsrd(&["bench", "--resources", "50,80", "--queries", "3", "--certainty", "0.5"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "algorithm,certainty,resources,query_id,retrieved,correct,precision,match_time_ns");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1..].iter().all(|l| l.contains(",ALL,")));
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        vec!["match", "--repo", "r.tsv"],
        vec!["simulate", "--bogus"],
        vec!["frobnicate"],
        vec!["simulate", "--algos", "fuzzy"],
        vec![],
    ] {
        let o = drsrd(&args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn runtime_errors_exit_nonzero() {
    let o = drsrd(&["simulate", "--certainty", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("certainty"));
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn register_match_and_deregister_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let repo = dir.path().join("repo.tsv");
    let repo_s = repo.to_str().unwrap();
    for (id, values) in [
        ("n1", vec!["cpu_speed=2.0", "operating_system=linux", "main_memory=1024"]),
        ("n2", vec!["cpu_speed=1.0", "operating_system=", "main_memory=4096"]),
        ("n3", vec!["cpu_speed=3.0", "operating_system=bsd"]),
    ] {
        let mut args = vec!["register", "--repo", repo_s, "--id", id];
        for v in &values {
            args.extend(["--value", v]);
        }
        stdout(&drsrd(&args));
    }
    assert!(!drsrd(&["register", "--repo", repo_s, "--id", "n1"]).status.success());
    assert!(!drsrd(&["register", "--repo", repo_s, "--id", "n4", "--value", "cpu_speed=fast"]).status.success());

    let request = dir.path().join("request.txt");
    write(&request, "# a sample request\ncpu_speed weight 0.9 value 2.0\noperating_system weight 0.6\n");
    let out_path = dir.path().join("out.csv");
    stdout(&drsrd(&[
        "match", "--repo", repo_s, "--request", request.to_str().unwrap(), "--algo", "exact", "--threshold", "0",
        "--out", out_path.to_str().unwrap(),
    ]));
    let out = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "rank,resource,degree");
    // n2 lacks its operating system, so the exact baseline drops it
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1,"));

    stdout(&drsrd(&["deregister", "--repo", repo_s, "--id", "n2"]));
    assert!(!drsrd(&["deregister", "--repo", repo_s, "--id", "n2"]).status.success());
    let stored = std::fs::read_to_string(&repo).unwrap();
    assert_eq!(stored.lines().count(), 2);
    assert!(!stored.contains("n2"));
}

#[test]
fn custom_taxonomy_files_are_used() {
    let dir = tempfile::tempdir().unwrap();
    let tax = dir.path().join("t.taxonomy");
    write(&tax, "class R\nproperty colour type text class R\n");
    let out = stdout(&drsrd(&[
        "simulate", "--taxonomy", tax.to_str().unwrap(), "--resources", "20", "--queries", "2", "--certainty", "0.5",
    ]));
    assert!(out.lines().count() > 1);
}
