// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lawecse"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tree_args<'a>(sub: &'a str, t1: &'a str, t2: &'a str, w: &'a str) -> Vec<&'a str> {
    vec![sub, "--tree1", t1, "--tree2", t2, "--weights", w]
}

#[test]
fn unrooted_split() {
    let (t1, t2, w) = (
        data("split_t1.tree"),
        data("split_t2.tree"),
        data("split.weights"),
    );
    let out = run(&tree_args("unrooted", &t1, &t2, &w), None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weight"], 3.6);
    assert_eq!(v["mode"], "unrooted");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["mapping"].as_array().unwrap().len(), 2);
    assert_eq!(
        v["skipped_by_tree"]["tree1"],
        serde_json::json!(["u", "u2"])
    );
    assert!(v["stats"]["table_entries"].as_u64().unwrap() > 0);

    let naive = run(
        &[tree_args("unrooted", &t1, &t2, &w), vec!["--naive"]].concat(),
        None,
    );
    assert_eq!(json(&naive)["weight"], 3.6);
}

#[test]
fn rooted_split() {
    let (t1, t2, w) = (
        data("split_t1.tree"),
        data("split_t2.tree"),
        data("split.weights"),
    );
    let mut args = tree_args("rooted", &t1, &t2, &w);
    args.extend(["--root1", "r", "--root2", "v"]);
    let v = json(&run(&args, None));
    assert_eq!(v["weight"], 2.8);
    assert_eq!(v["roots"]["tree1"], "r");
    assert_eq!(v["skipped"], serde_json::json!(["u"]));

    args[0] = "root-to-root";
    let v = json(&run(&args, None));
    assert_eq!(v["weight"], 2.8);
    assert_eq!(v["mapping"][0], serde_json::json!(["r", "v"]));
}

#[test]
fn oracle_agrees() {
    let (t1, t2, w) = (
        data("split_t1.tree"),
        data("split_t2.tree"),
        data("split.weights"),
    );
    let v = json(&run(&tree_args("oracle", &t1, &t2, &w), None));
    assert_eq!(v["weight"], 3.6);
    let mut args = tree_args("oracle", &t1, &t2, &w);
    args.extend(["--mode", "rooted", "--root1", "r", "--root2", "v"]);
    assert_eq!(json(&run(&args, None))["weight"], 2.8);
}

#[test]
fn bonus_files() {
    let (t1, t2, w) = (
        data("bonus_t1.tree"),
        data("bonus_t2.tree"),
        data("bonus.weights"),
    );
    let v = json(&run(&tree_args("rooted", &t1, &t2, &w), None));
    assert_eq!(v["weight"], 5.0);
}

#[test]
fn infeasible_and_min_weight() {
    let (t1, t2) = (data("split_t1.tree"), data("split_t2.tree"));
    let w = data("forbidden.weights");
    let out = run(&tree_args("unrooted", &t1, &t2, &w), None);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["weight"], "-inf");
    assert_eq!(v["status"], "infeasible");

    let w = data("split.weights");
    let mut args = tree_args("unrooted", &t1, &t2, &w);
    args.extend(["--min-weight", "4"]);
    let out = run(&args, None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "below-min-weight");
    assert_eq!(json(&out)["weight"], 3.6);
}

#[test]
fn no_mapping_keeps_weight() {
    let (t1, t2, w) = (
        data("split_t1.tree"),
        data("split_t2.tree"),
        data("split.weights"),
    );
    let mut args = tree_args("unrooted", &t1, &t2, &w);
    let full = json(&run(&args, None));
    args.push("--no-mapping");
    let bare = json(&run(&args, None));
    assert_eq!(full["weight"], bare["weight"]);
    assert!(bare.get("mapping").is_none());
    assert!(bare.get("skipped").is_none());
}

#[test]
fn input_errors() {
    let out = run(
        &tree_args("unrooted", "/nonexistent", "/nonexistent", "/nonexistent"),
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tree");
    std::fs::write(&bad, "v a A\nv b B\ne a c\n").unwrap();
    let bad = bad.display().to_string();
    let w = data("split.weights");
    let out = run(&tree_args("unrooted", &bad, &bad, &w), None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let t = data("split_t1.tree");
    let mut args = tree_args("rooted", &t, &t, &w);
    args.extend(["--root1", "nope"]);
    assert_eq!(run(&args, None).status.code(), Some(1));
}

#[test]
fn matching_from_stdin() {
    let matrix = std::fs::read_to_string(data("small.matrix")).unwrap();
    let out = run(&["matching", "--deletions", "right"], Some(&matrix));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["weight"], 5.0);
    assert_eq!(v["pairs"], serde_json::json!([[0, 1], [1, 2]]));
    assert_eq!(v["deletions"], serde_json::json!([5.0, 3.0, 4.0]));
    let v = json(&run(&["matching", "--deletions", "left"], Some(&matrix)));
    assert_eq!(v["deletions"], serde_json::json!([2.0, 4.0]));
    assert_eq!(run(&["matching"], Some("1 2\n3\n")).status.code(), Some(1));
}

#[test]
fn bench_is_reproducible() {
    let args = [
        "bench",
        "--sizes",
        "1,20",
        "--max-degree",
        "3",
        "--trials",
        "2",
        "--seed",
        "9",
        "--no-timing",
    ];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(
        lines[0],
        "size_T,size_T2,degree_cap,algo,trial,weight,work,matching_solves,wall_ms"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("1,1,3,opt,0,"));

    let mut naive = args.to_vec();
    naive.extend(["--algo", "naive"]);
    let c = String::from_utf8(run(&naive, None).stdout).unwrap();
    let weights = |t: &str| -> Vec<String> {
        t.lines()
            .skip(1)
            .map(|l| l.split(',').nth(5).unwrap().to_string())
            .collect()
    };
    assert_eq!(weights(&text), weights(&c));
}

#[test]
fn bad_flags() {
    assert_eq!(
        run(&["bench", "--max-degree", "1"], None).status.code(),
        Some(1)
    );
    assert_eq!(run(&["bench", "--sizes", "0"], None).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(1));
}
