use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn steklov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steklov"))
        .args(args)
        .env_remove("STEKLOV_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_family(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path = path.to_str().unwrap().to_string();
    let mut full = vec!["family"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let o = steklov(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    path
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

#[test]
fn spectrum_of_short_path() {
    let dir = TempDir::new().unwrap();
    let p = write_family(dir.path(), "p2.json", &["path", "--n", "2"]);
    let o = steklov(&["spectrum", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sigma: 0, 1\n"), "{}", stdout(&o));

    let v = json(&steklov(&["spectrum", &p, "--format", "json"]));
    let sigmas = v["sigmas"].as_array().unwrap();
    assert!(sigmas[0].as_f64().unwrap().abs() < 1e-12);
    assert!((sigmas[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn spectrum_of_h_6_5() {
    let dir = TempDir::new().unwrap();
    let p = write_family(dir.path(), "h.json", &["h", "--b", "6", "--dB", "5"]);
    let v = json(&steklov(&["spectrum", &p, "--format", "json"]));
    let s1 = v["sigmas"][1].as_f64().unwrap();
    assert!((s1 - 2.0 / 11.0).abs() < 1e-12);
    assert!(stdout(&steklov(&["spectrum", &p])).contains("0.181818181818"));
}

#[test]
fn edge_inside_boundary_is_a_validation_failure() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"n":3,"edges":[[0,1],[1,2],[0,2]],"boundary":[0,1]}"#,
    )
    .unwrap();
    let o = steklov(&["spectrum", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E(B,B) ≠ ∅"), "{}", stderr(&o));
    let o = steklov(&["bounds", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"n\": 3, \"edges\": [[0,1]").unwrap();
    assert_eq!(
        steklov(&["spectrum", p.to_str().unwrap()]).status.code(),
        Some(1)
    );
    std::fs::write(&p, r#"{"n":2,"edges":[[0,5]],"boundary":[0]}"#).unwrap();
    assert_eq!(
        steklov(&["spectrum", p.to_str().unwrap()]).status.code(),
        Some(1)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        steklov(&["spectrum", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn disconnected_graph_exits_2() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("split.json");
    std::fs::write(
        &p,
        r#"{"n":6,"edges":[[0,2],[1,2],[3,5],[4,5]],"boundary":[0,1,3,4]}"#,
    )
    .unwrap();
    let o = steklov(&["bounds", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not connected"), "{}", stderr(&o));
}

#[test]
fn bounds_on_extremal_families() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[&str], f64, f64, f64); 3] = [
        (&["path", "--n", "10"], 0.2, 0.2, 0.2),
        (&["d", "--n", "20"], 1.0, 1.0, 1.0),
        (
            &["h", "--b", "7", "--dB", "10"],
            7.0 / 103.0,
            7.0 / 120.0,
            7.0 / 360.0,
        ),
    ];
    for (i, (args, sigma1, thm2, thm1)) in cases.iter().enumerate() {
        let p = write_family(dir.path(), &format!("g{i}.json"), args);
        let o = steklov(&["bounds", &p, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert!(
            (v["sigma1"].as_f64().unwrap() - sigma1).abs() < 1e-9,
            "{args:?}"
        );
        assert!(
            (v["thm2"].as_f64().unwrap() - thm2).abs() < 1e-12,
            "{args:?}"
        );
        assert!(
            (v["thm1"].as_f64().unwrap() - thm1).abs() < 1e-12,
            "{args:?}"
        );
        assert!(v["violations"].as_array().unwrap().is_empty());
    }
}

#[test]
fn bounds_csv_and_measure_mode() {
    let dir = TempDir::new().unwrap();
    let p = write_family(dir.path(), "h.json", &["h", "--b", "6", "--dB", "5"]);
    let o = steklov(&["bounds", &p, "--format", "csv", "--norm", "measure"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = r.headers().unwrap().clone();
    assert_eq!(&headers[0], "normalization");
    let row = r.records().next().unwrap().unwrap();
    assert_eq!(&row[0], "measure");
    let weighted: f64 = row[6].parse().unwrap();
    assert!((weighted - 1.0 / 30.0).abs() < 1e-12);
}

#[test]
fn family_sizes_and_round_trip() {
    let o = steklov(&["family", "h", "--b", "6", "--dB", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["n"], 10);
    assert_eq!(v["boundary"].as_array().unwrap().len(), 6);

    let v = json(&steklov(&["family", "path", "--n", "10"]));
    assert_eq!(v["n"], 11);

    let dir = TempDir::new().unwrap();
    let p = write_family(
        dir.path(),
        "r.json",
        &[
            "random",
            "--n-interior",
            "8",
            "--b",
            "4",
            "--seed",
            "3",
            "--weighted",
        ],
    );
    let text = std::fs::read_to_string(&p).unwrap();
    let g = steklov_core::GraphWithBoundary::from_json_str(&text).unwrap();
    g.ensure_valid().unwrap();
    assert_eq!(format!("{}\n", g.to_json_string()), text);
}

#[test]
fn family_parameter_errors_exit_4() {
    assert_eq!(
        steklov(&["family", "h", "--b", "3", "--dB", "2"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        steklov(&["family", "path", "--n", "1"]).status.code(),
        Some(4)
    );
    assert_eq!(steklov(&["family", "path"]).status.code(), Some(4));
    assert_eq!(steklov(&["family", "triangle"]).status.code(), Some(4));
    let o = steklov(&["family", "random", "--n-interior", "5", "--b", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("--seed"));
}

fn sweep_rows(args: &[&str]) -> Vec<csv::StringRecord> {
    let mut full = vec!["sweep"];
    full.extend_from_slice(args);
    let o = steklov(&full);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "family",
            "b",
            "d_B",
            "n",
            "sigma1",
            "thm1",
            "thm2",
            "weighted",
            "closed_form",
            "slack"
        ]
    );
    r.records().map(Result::unwrap).collect()
}

#[test]
fn h_sweep_slack_shrinks_and_scaled_sigma_tends_to_limit() {
    let rows = sweep_rows(&["h", "--b", "6", "--dB", "5..=100"]);
    assert_eq!(rows.len(), 96);
    let mut last_slack = f64::INFINITY;
    let mut last_gap = f64::INFINITY;
    for (row, d_b) in rows.iter().zip(5..) {
        assert_eq!(&row[0], "h");
        assert_eq!(row[2].parse::<usize>().unwrap(), d_b);
        assert_eq!(&row[7], "");
        let sigma1: f64 = row[4].parse().unwrap();
        let closed: f64 = row[8].parse().unwrap();
        assert!((sigma1 - closed).abs() < 1e-9);
        let slack: f64 = row[9].parse().unwrap();
        assert!(slack < last_slack);
        last_slack = slack;
        let gap = (d_b as f64 * sigma1 - 6.0 / 9.0).abs();
        assert!(gap < last_gap);
        last_gap = gap;
    }
    assert!(last_gap < 0.01);
}

#[test]
fn path_sweep_is_tight() {
    let rows = sweep_rows(&["path", "--n", "2..=50"]);
    assert_eq!(rows.len(), 49);
    for row in rows {
        let slack: f64 = row[9].parse().unwrap();
        assert!(slack.abs() <= 1e-9, "{row:?}");
        let n: usize = row[3].parse().unwrap();
        let d_b: usize = row[2].parse().unwrap();
        assert_eq!(n, d_b + 1);
    }
}

#[test]
fn random_sweep_is_reproducible() {
    let args = [
        "random",
        "--n-interior",
        "3..=12",
        "--b",
        "2,3,5",
        "--count",
        "2",
        "--seed",
        "42",
    ];
    let a = steklov(&[&["sweep"], &args[..]].concat());
    let b = steklov(&[&["sweep"], &args[..]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = sweep_rows(&args);
    assert_eq!(rows.len(), 10 * 3 * 2);
    for row in rows {
        assert!(row[9].parse::<f64>().unwrap() >= -1e-8);
    }
    let other = steklov(&[
        "sweep",
        "random",
        "--n-interior",
        "3..=12",
        "--b",
        "2,3,5",
        "--count",
        "2",
        "--seed",
        "43",
    ]);
    assert_ne!(a.stdout, other.stdout);
    assert_eq!(
        steklov(&["sweep", "random", "--n-interior", "3", "--b", "2"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn weighted_random_sweep_in_measure_mode() {
    let rows = sweep_rows(&[
        "random",
        "--n-interior",
        "2..=20",
        "--b",
        "2..=6",
        "--seed",
        "11",
        "--weighted",
        "--norm",
        "measure",
    ]);
    for row in rows {
        let sigma1: f64 = row[4].parse().unwrap();
        let weighted: f64 = row[7].parse().unwrap();
        assert!(sigma1 >= weighted - 1e-8);
        assert!(row[9].parse::<f64>().unwrap() >= -1e-8);
    }
}

#[test]
fn sweep_rejects_bad_ranges() {
    assert_eq!(
        steklov(&["sweep", "h", "--b", "6", "--dB", "9..=5"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(steklov(&["sweep", "h", "--b", "6"]).status.code(), Some(4));
    assert_eq!(
        steklov(&["sweep", "h", "--b", "6", "--dB", "2..=5"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn sweep_writes_out_file() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("sweep.csv");
    let o = steklov(&["sweep", "d", "--n", "0..=5", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().skip(1).all(|l| l.starts_with("d,2,2,")));
}

#[test]
fn verify_passes_and_tolerance_hook_fails_it() {
    let o = steklov(&["verify"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(!out.contains("[FAIL]"));
    for b in 2..=8 {
        assert!(out.contains(&format!("spread oracle b = {b}:")), "{out}");
    }

    let o = Command::new(env!("CARGO_BIN_EXE_steklov"))
        .arg("verify")
        .env("STEKLOV_TOL", "1e-40")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL]"));
}

#[test]
fn search_examples() {
    let v = json(&steklov(&[
        "search",
        "--b",
        "2",
        "--dB",
        "3",
        "--max-vertices",
        "6",
        "--format",
        "json",
    ]));
    assert!((v["min_sigma1"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    assert!(v["minimizer_count"].as_u64().unwrap() > 1);
    assert_eq!(v["reference_is_minimizer"], true);

    let v = json(&steklov(&[
        "search",
        "--b",
        "2",
        "--dB",
        "2",
        "--max-vertices",
        "5",
        "--format",
        "json",
    ]));
    assert!((v["min_sigma1"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let o = steklov(&["search", "--b", "3", "--dB", "3", "--max-vertices", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("min sigma1:"));
}

#[test]
fn search_budget_exits_4() {
    assert_eq!(
        steklov(&["search", "--b", "2", "--dB", "3", "--max-vertices", "11"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &[
            "family",
            "random",
            "--n-interior",
            "15",
            "--b",
            "5",
            "--seed",
            "8",
        ][..],
        &["search", "--b", "2", "--dB", "3", "--max-vertices", "6"][..],
        &["sweep", "h", "--b", "2..=9", "--dB", "3..=12"][..],
    ] {
        assert_eq!(steklov(args).stdout, steklov(args).stdout, "{args:?}");
    }
}
