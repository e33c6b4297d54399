use std::path::Path;
use std::process::{Command, Output};

use lehmer_cli::record::read_jsonl;

const GOLDEN: &str = include_str!("data/solutions_r2_6.jsonl");

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spoof-lehmer"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write_temp(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn enumerate_four_odd_jsonl() {
    let out = run(&[
        "enumerate",
        "--r",
        "4",
        "--parity",
        "odd",
        "--format",
        "jsonl",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        concat!(
            "{\"r\":4,\"k\":2,\"parity\":\"odd\",\"bases\":[3,5,17,255],\"families\":[\"diff_squares_1(s=3)\"]}\n",
            "{\"r\":4,\"k\":5,\"parity\":\"odd\",\"bases\":[3,3,3,3],\"families\":[]}\n",
        )
    );
}

#[test]
fn enumerate_two_gives_two_records() {
    let out = run(&["enumerate", "--r", "2", "--format", "jsonl"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn enumerate_single_k_table() {
    let out = run(&[
        "enumerate",
        "--r",
        "6",
        "--parity",
        "even",
        "--k",
        "13",
        "--format",
        "table",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].contains("2 · 2 · 2 · 4 · 8 · 16"), "{text}");
}

#[test]
fn enumerate_matches_golden_per_r() {
    for r in 2..=6 {
        let out = run(&[
            "enumerate",
            "--r",
            &r.to_string(),
            "--format",
            "jsonl",
            "--threads",
            "3",
        ]);
        assert_eq!(code(&out), 0);
        let prefix = format!("{{\"r\":{r},");
        let expected: String = GOLDEN
            .lines()
            .filter(|l| l.starts_with(&prefix))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(stdout(&out), expected, "r = {r}");
    }
}

#[test]
fn enumerate_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r5.csv");
    let out = run(&[
        "enumerate",
        "--r",
        "5",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let records = lehmer_cli::record::read_csv(text.as_bytes()).unwrap();
    assert_eq!(records.len(), 16);
}

#[test]
fn enumerate_flag_misuse() {
    for args in [
        &["enumerate"][..],
        &["enumerate", "--r", "1"],
        &["enumerate", "--r", "x"],
        &["enumerate", "--r", "3", "--parity", "prime"],
        &["enumerate", "--r", "3", "--format", "xml"],
        &["enumerate", "--r", "3", "--threads", "0"],
        &["enumerate", "--r", "3", "--k", "8"],
        &["enumerate", "--r", "6", "--parity", "odd", "--k", "13"],
        &[
            "enumerate",
            "--r",
            "3",
            "--output",
            "/nonexistent/dir/out.jsonl",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["enumerate", "--help"])), 0);
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_temp(
        dir.path(),
        "good.jsonl",
        "{\"bases\":[-3,5],\"k\":1}\n{\"bases\":[2,4,10,112,290],\"k\":3}\n\n{\"bases\":[2,2,2,2,6,6],\"exponents\":[1,1,1,1,1,1],\"k\":23}\n",
    );
    let out = run(&["verify", "--input", &good]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("3 of 3 claims hold"));

    let bad = write_temp(
        dir.path(),
        "bad.jsonl",
        "{\"bases\":[2,4,10,112,290],\"k\":3}\n{\"bases\":[3,3,3,3],\"k\":4}\n",
    );
    let out = run(&["verify", "--input", &bad]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL  2: 3 · 3 · 3 · 3  k = 4  (equation gives k = 5)"));
}

#[test]
fn verify_rejects_higher_exponents_and_primes() {
    let dir = tempfile::tempdir().unwrap();
    for claim in [
        "{\"bases\":[3],\"exponents\":[2],\"k\":4}",
        "{\"bases\":[7],\"k\":1}",
    ] {
        let path = write_temp(dir.path(), "c.jsonl", claim);
        assert_eq!(code(&run(&["verify", "--input", &path])), 1, "{claim}");
    }
}

#[test]
fn verify_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "{\"bases\":[3,3]}",
        "{\"bases\":[3,0],\"k\":2}",
        "{\"bases\":[3,3],\"exponents\":[1],\"k\":2}",
        "{\"bases\":[3,3],\"exponents\":[1,0],\"k\":2}",
        "{\"bases\":[3,3],\"k\":2,\"note\":1}",
        "[3,3]",
    ] {
        let path = write_temp(dir.path(), "m.jsonl", text);
        assert_eq!(code(&run(&["verify", "--input", &path])), 2, "{text}");
    }
    assert_eq!(code(&run(&["verify", "--input", "/nonexistent.jsonl"])), 2);
}

fn family_records(args: &[&str]) -> Vec<(i64, Vec<i64>)> {
    let out = run(args);
    assert_eq!(code(&out), 0);
    read_jsonl(out.stdout.as_slice())
        .unwrap()
        .into_iter()
        .map(|rec| {
            let k = i64::try_from(&rec.k).unwrap();
            (
                k,
                rec.bases
                    .iter()
                    .map(|b| i64::try_from(b).unwrap())
                    .collect(),
            )
        })
        .collect()
}

#[test]
fn families_powers_of_two() {
    let got = family_records(&[
        "families",
        "--max-factors",
        "3",
        "--family",
        "powers_of_two",
        "--format",
        "jsonl",
    ]);
    assert_eq!(got, vec![(3, vec![2, 2]), (7, vec![2, 2, 2])]);
}

#[test]
fn families_appended() {
    let got = family_records(&[
        "families",
        "--max-factors",
        "5",
        "--family",
        "appended_powers_of_two",
        "--format",
        "jsonl",
    ]);
    assert!(got.contains(&(21, vec![2, 2, 2, 2, 4])));
    assert!(got.contains(&(19, vec![2, 2, 2, 2, 6])));
}

#[test]
fn families_anomalies() {
    let out = run(&[
        "families",
        "--max-factors",
        "6",
        "--anomalies",
        "--format",
        "jsonl",
    ]);
    assert_eq!(code(&out), 0);
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let descriptors: Vec<&str> = lines
        .iter()
        .filter(|v| v["kind"] == "anomaly")
        .map(|v| v["descriptor"].as_str().unwrap())
        .collect();
    assert!(descriptors.contains(&"diff_squares_7(s=0)"));
    let repaired: Vec<&str> = lines
        .iter()
        .filter(|v| v["kind"] == "repair")
        .map(|v| v["family"].as_str().unwrap())
        .collect();
    assert_eq!(
        repaired,
        ["diff_squares_7", "diff_squares_9", "diff_squares_10"]
    );

    assert_eq!(
        code(&run(&["families", "--max-factors", "6", "--anomalies"])),
        0
    );
    assert_eq!(
        code(&run(&[
            "families",
            "--max-factors",
            "6",
            "--anomalies",
            "--format",
            "csv"
        ])),
        2
    );
}

#[test]
fn families_misuse() {
    assert_eq!(
        code(&run(&[
            "families",
            "--max-factors",
            "4",
            "--family",
            "primes"
        ])),
        2
    );
    assert_eq!(code(&run(&["families", "--max-factors", "99"])), 2);
    assert_eq!(code(&run(&["families"])), 2);
}

#[test]
fn classify_golden_input() {
    let dir = tempfile::tempdir().unwrap();
    let unlabeled: String = read_jsonl(GOLDEN.as_bytes())
        .unwrap()
        .into_iter()
        .map(|mut rec| {
            rec.families.clear();
            format!("{}\n", serde_json::to_string(&rec).unwrap())
        })
        .collect();
    let path = write_temp(dir.path(), "in.jsonl", &unlabeled);
    let out = run(&["classify", "--input", &path, "--format", "jsonl"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), GOLDEN);
    assert_eq!(
        stderr(&out).trim(),
        "76 total; odd 31 (7 family, 24 sporadic); even 45 (27 family, 18 sporadic)"
    );
}

#[test]
fn classify_enumerates_when_given_r() {
    let out = run(&[
        "classify",
        "--r",
        "6",
        "--format",
        "jsonl",
        "--threads",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), GOLDEN);
}

#[test]
fn classify_small_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        dir.path(),
        "two.jsonl",
        "{\"r\":4,\"k\":5,\"parity\":\"odd\",\"bases\":[3,3,3,3],\"families\":[]}\n\
         {\"r\":3,\"k\":5,\"parity\":\"even\",\"bases\":[2,2,4],\"families\":[]}\n",
    );
    let out = run(&["classify", "--input", &path, "--format", "jsonl"]);
    assert_eq!(code(&out), 0);
    let recs = read_jsonl(out.stdout.as_slice()).unwrap();
    assert!(recs[0].families.is_empty());
    assert!(recs[1].families.contains(&"diff_squares_3(s=0)".to_owned()));
    assert!(recs[1]
        .families
        .contains(&"augmented_powers_of_two(s=2)".to_owned()));

    let out = run(&["classify", "--input", &path, "--sporadic-only"]);
    let text = stdout(&out);
    assert!(
        text.contains("3 · 3 · 3 · 3") && !text.contains("2 · 2 · 4"),
        "{text}"
    );
    assert!(text.contains("2 total; odd 1 (0 family, 1 sporadic); even 1 (1 family, 0 sporadic)"));
}

#[test]
fn classify_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    for text in [
        "{\"r\":4,\"k\":4,\"parity\":\"odd\",\"bases\":[3,3,3,3],\"families\":[]}",
        "{\"r\":2,\"k\":1,\"parity\":\"odd\",\"bases\":[-3,5],\"families\":[]}",
        "{\"bases\":[3,3],\"k\":2}",
    ] {
        let path = write_temp(dir.path(), "bad.jsonl", text);
        assert_eq!(code(&run(&["classify", "--input", &path])), 2, "{text}");
    }
    assert_eq!(code(&run(&["classify"])), 2);
    assert_eq!(code(&run(&["classify", "--r", "3", "--input", "x"])), 2);
}

#[test]
fn crosscheck_exit_codes() {
    assert_eq!(
        code(&run(&["crosscheck", "--r", "3", "--base-cap", "200"])),
        0
    );
    assert_eq!(
        code(&run(&["crosscheck", "--r", "2", "--base-cap", "100"])),
        0
    );
    assert_eq!(
        code(&run(&["crosscheck", "--r", "4", "--base-cap", "50000"])),
        2
    );
    assert_eq!(
        code(&run(&["crosscheck", "--r", "5", "--base-cap", "10"])),
        2
    );
    assert_eq!(
        code(&run(&["crosscheck", "--r", "1", "--base-cap", "10"])),
        2
    );
    assert_eq!(code(&run(&["crosscheck", "--r", "3"])), 2);
}
