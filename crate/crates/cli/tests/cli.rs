use std::path::PathBuf;
use std::process::{Command, Output};

use conifold_cli::{EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn conifold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conifold"))
        .args(args)
        .output()
        .unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn surgery_reports_quintic_row() {
    let o = conifold(&[
        "--format", "json", "surgery", "--b2", "1", "--b3", "204", "--n", "102", "--r", "101",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let v = json(&o);
    let after = &v["result"]["after"];
    assert_eq!(
        (
            after["b2"].as_u64(),
            after["b3"].as_u64(),
            after["euler"].as_i64()
        ),
        (Some(2), Some(2), Some(4))
    );
    assert_eq!(v["summary"]["passed"], true);
}

#[test]
fn exit_codes() {
    let refused = conifold(&[
        "surgery",
        "--b2",
        "1",
        "--b3",
        "204",
        "--n",
        "2",
        "--r",
        "1",
        "--not-good",
    ]);
    assert_eq!(refused.status.code(), Some(EXIT_VERIFICATION));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("error"));
    assert_eq!(
        conifold(&["no-such-command"]).status.code(),
        Some(EXIT_USAGE)
    );
    assert_eq!(
        conifold(&["rank", "/nonexistent/file.json"]).status.code(),
        Some(EXIT_USAGE)
    );
    assert_eq!(
        conifold(&["surgery", "--b2", "1", "--b3", "3", "--n", "1", "--r", "0"])
            .status
            .code(),
        Some(EXIT_USAGE)
    );
    assert_eq!(conifold(&["--help"]).status.code(), Some(EXIT_OK));
}

#[test]
fn malformed_input_names_the_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\n  \"schema_version\": 1,\n  \"labels\": [\"a\",\n}").unwrap();
    let o = conifold(&["rank", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn text_and_json_agree() {
    let small = data("small_config.json");
    let j = json(&conifold(&["--format", "json", "snf", &small]));
    let t = conifold(&["--format", "text", "snf", &small]);
    let text = String::from_utf8(t.stdout).unwrap();
    assert!(text.starts_with("PASS"));
    let rank = j["result"]["rank"].as_u64().unwrap();
    assert!(
        text.lines().any(|l| l == format!("result.rank: {rank}")),
        "{text}"
    );
}

#[test]
fn good_relation_by_labels_and_search() {
    let small = data("small_config.json");
    let v = json(&conifold(&[
        "--format",
        "json",
        "good-relation",
        &small,
        "--labels",
        "a,b,c",
    ]));
    assert_eq!(v["result"]["good"], true);
    let coeffs: Vec<i64> = v["result"]["relation"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().parse().unwrap())
        .collect();
    assert!(coeffs.iter().all(|&c| c != 0));
    let v = json(&conifold(&[
        "--format",
        "json",
        "good-relation",
        &small,
        "--subset",
        "0,3",
    ]));
    assert_eq!(v["result"]["good"], false);
    let o = conifold(&[
        "--format",
        "json",
        "search",
        &small,
        "--min-size",
        "1",
        "--max-size",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
}

#[test]
fn preset_output_feeds_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("product.json");
    let o = conifold(&[
        "--format",
        "json",
        "preset",
        "product",
        "--m",
        "4",
        "--ambient",
        "p1xp2",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let v = json(&o);
    assert_eq!(v["command"][2], "preset");
    let rank = json(&conifold(&[
        "--format",
        "json",
        "rank",
        p.to_str().unwrap(),
    ]));
    assert_eq!(rank["result"]["rank"], 0);
    let good = json(&conifold(&[
        "--format",
        "json",
        "good-relation",
        p.to_str().unwrap(),
        "--subset",
        "0",
    ]));
    assert_eq!(good["result"]["good"], true);
}

#[test]
fn fibered_example() {
    let v = json(&conifold(&[
        "--format",
        "json",
        "fibered",
        &data("fibered_pair.json"),
    ]));
    assert_eq!(v["summary"]["passed"], true);
    let flags: Vec<bool> = v["result"]["spheres"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["null_homologous"].as_bool().unwrap())
        .collect();
    assert_eq!(flags, [false, false, true]);
    assert_eq!(v["result"]["pairing"]["entries"][0][1], "-1");
}
