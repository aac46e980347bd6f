use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn stablereg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablereg")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const TWO_BLOCKS: &str = "8 8\n11110000\n11110000\n11110000\n11110000\n00001111\n00001111\n00001111\n00001111\n";

#[test]
fn complete_graph_report() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k44.txt", "4 4\n1111\n1111\n1111\n1111\n");
    let out = stablereg(&["decompose", "--input", s(&g), "--epsilon", "1/10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["parts_left"].as_array().unwrap().len(), 1);
    assert_eq!(r["parts_right"].as_array().unwrap().len(), 1);
    assert_eq!(r["verdicts"][0][0]["case"], "dense");
    assert_eq!(r["verdicts"][0][0]["exc_left_mass"], "0/1");
    assert_eq!(r["verdicts"][0][0]["exc_right_mass"], "0/1");
    assert_eq!(r["iterations"], 0);
    assert_eq!(r["epsilon"], "1/10");
}

#[test]
fn decompose_then_verify_and_canonical_bytes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "blocks.txt", TWO_BLOCKS);
    let report = dir.path().join("report.json");
    let first = stablereg(&["decompose", "--input", s(&g), "--epsilon", "1/10", "--output", s(&report)]);
    assert_eq!(first.status.code(), Some(0));
    let again = stablereg(&["decompose", "--input", s(&g), "--epsilon", "1/10"]);
    assert_eq!(std::fs::read(&report).unwrap(), again.stdout);

    let out = stablereg(&["verify", "--input", s(&g), "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["delta_regularity"]["violation_count"], 0);
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "blocks.txt", TWO_BLOCKS);
    let garbage = write(&dir, "bad.txt", "2 2\n1x\n00\n");
    let code = |args: &[&str]| stablereg(args).status.code();

    assert_eq!(code(&["decompose", "--input", s(&garbage), "--epsilon", "1/10"]), Some(2));
    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "one tenth"]), Some(2));
    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "3/5"]), Some(3));
    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "2/5"]), Some(3));
    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "2/5", "--eps-policy", "permissive"]), Some(0));

    let bad_sum = write(&dir, "mu.json", &serde_json::to_string(&vec!["1/9"; 8]).unwrap());
    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "1/10", "--mu", s(&bad_sum)]), Some(4));
    let mut neg = vec!["1/4"; 8];
    neg[0] = "-1/4";
    neg[1] = "0";
    neg[2] = "1/4";
    let neg = write(&dir, "neg.json", &serde_json::to_string(&neg).unwrap());
    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "1/10", "--nu", s(&neg)]), Some(4));

    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "1/10", "--max-iterations", "1"]), Some(5));

    let report = dir.path().join("r.json");
    assert_eq!(code(&["decompose", "--input", s(&g), "--epsilon", "1/10", "--output", s(&report)]), Some(0));
    let small = write(&dir, "small.txt", "2 2\n11\n11\n");
    assert_eq!(code(&["verify", "--input", s(&small), "--report", s(&report)]), Some(6));
}

#[test]
fn corrupted_part_fails_verification() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "blocks.txt", TWO_BLOCKS);
    let out = stablereg(&["decompose", "--input", s(&g), "--epsilon", "1/10"]);
    let mut r = stdout_json(&out);
    // move a vertex between parts without touching the formulas
    let moved = r["parts_left"][0]["members"].as_array_mut().unwrap().pop().unwrap();
    let target = r["parts_left"][1]["members"].as_array_mut().unwrap();
    target.push(moved);
    target.sort_by_key(|v| v.as_u64());
    let report = write(&dir, "bad.json", &serde_json::to_string(&r).unwrap());
    let out = stablereg(&["verify", "--input", s(&g), "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["all_pass"], false);
    assert_eq!(v["formula_faithful"], false);
    let failures: Vec<&str> = v["failures"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert!(failures.iter().any(|f| f.contains("left part 0")), "{failures:?}");
}

#[test]
fn exhaustive_delta_on_large_parts_is_rejected() {
    let dir = TempDir::new().unwrap();
    let dense: String = std::iter::once("20 20\n".to_string()).chain((0..20).map(|_| "1".repeat(20) + "\n")).collect();
    let g = write(&dir, "k20.txt", &dense);
    let report = dir.path().join("r.json");
    stablereg(&["decompose", "--input", s(&g), "--epsilon", "1/10", "--output", s(&report)]);
    let out = stablereg(&["verify", "--input", s(&g), "--report", s(&report), "--delta-mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(7));
    let sampled = stablereg(&["verify", "--input", s(&g), "--report", s(&report), "--budget", "500", "--seed", "3"]);
    assert_eq!(sampled.status.code(), Some(0));
    let v = stdout_json(&sampled);
    assert_eq!(v["delta_regularity"]["mode"]["kind"], "sampled");
    assert_eq!(v["delta_regularity"]["mode"]["seed"], 3);
}

#[test]
fn weighted_measures_round_trip() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "blocks.txt", TWO_BLOCKS);
    let mu = write(&dir, "mu.json", r#"["1/4","1/8","1/8","0","1/8","1/8","1/8","1/8"]"#);
    let report = dir.path().join("r.json");
    let args = ["decompose", "--input", s(&g), "--epsilon", "1/20", "--mu", s(&mu), "--output", s(&report)];
    assert_eq!(stablereg(&args).status.code(), Some(0));
    let ok = stablereg(&["verify", "--input", s(&g), "--report", s(&report), "--mu", s(&mu)]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn ladder_rank_and_gen() {
    let dir = TempDir::new().unwrap();
    let h5 = dir.path().join("h5.json");
    let meta = stablereg(&["gen", "--spec", r#"{"family":"half_graph","k":5}"#, "--output", s(&h5)]);
    assert_eq!(meta.status.code(), Some(0));
    let m = stdout_json(&meta);
    assert_eq!(m["prng"], "splitmix64");
    assert_eq!(m["spec"]["family"], "half_graph");

    let l = stdout_json(&stablereg(&["ladder", "--input", s(&h5), "--max-k", "8"]));
    assert_eq!(l["k"], 5);
    assert_eq!(l["capped"], false);
    assert_eq!(l["certificate"]["a_seq"].as_array().unwrap().len(), 5);

    let k = write(&dir, "k.txt", "3 3\n111\n111\n111\n");
    let r = stdout_json(&stablereg(&["rank", "--input", s(&k)]));
    assert_eq!(r["value"], 0);
    let r = stdout_json(&stablereg(&["rank", "--input", s(&h5), "--side", "right"]));
    assert_eq!(r["side"], "right");

    let h3 = stablereg(&["gen", "--spec", r#"{"family":"half_graph","k":3}"#]);
    assert_eq!(
        String::from_utf8(h3.stdout).unwrap(),
        "{\"num_left\":3,\"num_right\":3,\"edges\":[[0,0],[0,1],[0,2],[1,1],[1,2],[2,2]]}\n"
    );
    assert_eq!(stablereg(&["gen", "--spec", r#"{"family":"half_graph","k":0}"#]).status.code(), Some(2));
}

#[test]
fn gen_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let spec =
        write(&dir, "spec.json", r#"{"family":"random_bipartite","n_left":9,"n_right":7,"density":"1/3","seed":12}"#);
    let first = stablereg(&["gen", "--spec", s(&spec)]);
    let path = write(&dir, "g.json", std::str::from_utf8(&first.stdout).unwrap());
    let graph = stablereg_cli::io::parse_graph(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stablereg_cli::io::graph_to_json(&graph).as_bytes(), &first.stdout[..]);
    assert_eq!(stablereg(&["gen", "--spec", s(&spec)]).stdout, first.stdout);
}

#[test]
fn thread_count_is_respected_and_validated() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "blocks.txt", TWO_BLOCKS);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_stablereg"))
            .env("STABLEREG_THREADS", threads)
            .args(["decompose", "--input", s(&g), "--epsilon", "1/10"])
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(run("4").stdout, one.stdout);
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}
