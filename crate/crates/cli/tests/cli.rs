use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn permpat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permpat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn analyze_prints_one_record_per_quantity() {
    let o = permpat(&["analyze", "4,1,2,5,6,3", "--format", "json-lines"]);
    assert!(o.status.success());
    let recs: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let get = |q: &str| recs.iter().find(|r| r["quantity"] == q).unwrap()["value"].clone();
    assert_eq!(get("k"), 6);
    assert_eq!(get("u"), 4);
    assert_eq!(get("d"), 3);
    assert_eq!(get("m"), 3);
    assert_eq!(get("extremes_adjacent"), false);
}

#[test]
fn analyze_reports_caps() {
    let o = permpat(&["analyze", "1,2,3,4,5,6,7,8,9,10,11", "--format", "json-lines"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("capped"));
}

#[test]
fn bad_permutation_is_an_error() {
    let o = permpat(&["analyze", "1,1,2"]);
    assert!(!o.status.success());
}

#[test]
fn far_free_and_test_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let far = dir.path().join("far.seq");
    let free = dir.path().join("free.seq");
    let o = permpat(&["gen", "far", "--perm", "1,3,2", "--n", "100", "--eps", "0.1", "--out", p(&far)]);
    assert_eq!(o.status.code(), Some(2));
    let o = permpat(&["gen", "far", "--perm", "1,3,2", "--n", "90", "--eps", "0.1", "--seed", "4", "--out", p(&far)]);
    assert!(o.status.success());
    let o = permpat(&["gen", "free", "--perm", "1,3,2", "--n", "90", "--out", p(&free)]);
    assert!(o.status.success());

    let transcript = dir.path().join("t.csv");
    let o = permpat(&[
        "test", p(&far), "--perm", "1,3,2", "--eps", "0.1", "--tester", "sampler", "--seed", "1", "--budget", "90",
        "--emit-transcript", p(&transcript),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let csv = fs::read_to_string(&transcript).unwrap();
    assert!(csv.starts_with("round,position,value\n"));
    assert_eq!(csv.lines().count(), 91);

    for tester in ["sampler", "interval"] {
        let o = permpat(&["test", p(&free), "--perm", "1,3,2", "--eps", "0.1", "--tester", tester]);
        assert_eq!(o.status.code(), Some(0), "{tester}");
    }
}

#[test]
fn dist_reports_bounds_and_exact() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.seq");
    fs::write(&f, "# demo\n1\n3\n2\n4\n6\n5\n").unwrap();
    let o = permpat(&["dist", p(&f), "1,3,2", "--exact", "--format", "json-lines"]);
    assert!(o.status.success());
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["exact"], 2);
    assert!(rec["lower"].as_u64().unwrap() <= 2 && rec["upper"].as_u64().unwrap() >= 2);
    fs::write(&f, "1\nnan\n").unwrap();
    assert_eq!(permpat(&["dist", p(&f), "1,3,2"]).status.code(), Some(2));
}

#[test]
fn template_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tpl");
    assert!(permpat(&["gen", "template", "--m", "500", "--seed", "9", "--out", p(&out)]).status.success());
    for args in [vec!["--algo", "binary"], vec!["--algo", "grid", "--rounds", "3", "--budget", "3000"]] {
        let mut all = vec!["template", "solve", p(&out), "--verify"];
        all.extend(args);
        let o = permpat(&all);
        assert!(o.status.success());
        let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(rec["correct"], true);
    }
}

#[test]
fn reduction_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("red");
    assert!(permpat(&["gen", "reduction", "--m", "5", "--out", p(&out)]).status.success());
    let o = permpat(&["dist", p(&out.join("no.seq")), "1,3,2", "--exact", "--format", "json-lines"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["exact"], 5);
    let o = permpat(&["dist", p(&out.join("yes.seq")), "1,3,2", "--exact", "--format", "json-lines"]);
    let rec: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec["exact"], 0);
}

#[test]
fn bench_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "pattern = 1,3,2\nfamily = far\ntester = interval\nn_grid = 300, 600, 1200\neps = 0.1\ntrials = 20\nseed = 1\nout_dir = {}\n",
            out.display()
        ),
    )
    .unwrap();
    let o = permpat(&["bench", "--config", p(&cfg), "--gnuplot"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["sweep.csv", "summary.jsonl", "plot.gp"] {
        assert!(out.join(f).exists(), "{f}");
    }
    fs::write(&cfg, "family = far\n").unwrap();
    assert_eq!(permpat(&["bench", "--config", p(&cfg)]).status.code(), Some(2));
}
