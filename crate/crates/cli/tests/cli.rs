use std::io::Write;
use std::process::{Command, Output, Stdio};

use dga_core::fixtures;
use dga_core::graph::{enumerate_graphs, is_connected, is_undirected};
use dga_core::{accepts, Alphabet};
use serde_json::Value;

fn dga(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dga"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("write stdin");
        }
    }
    child.wait_with_output().expect("binary finishes")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn temp_file(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("dga-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn three_coloring_accepts_the_triangle() {
    let k3 = temp_file("k3.json", &fixtures::k3().to_json_string());
    let o = dga(&["accept", "fixtures:A_3color", k3.to_str().unwrap()], None);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["accepted"], true);
    let o = dga(&["accept", "fixtures:A_3color", "fixtures:self_loop"], None);
    assert_eq!(code(&o), 1);
}

#[test]
fn dual_pipes_into_equivalence() {
    let dual = dga(&["transform", "dual", "fixtures:A_3color"], None);
    assert_eq!(code(&dual), 0);
    let text = String::from_utf8(dual.stdout).unwrap();
    let o = dga(&["equiv", "-", "fixtures:A_not3color", "--n", "3"], Some(&text));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["equal"], true);
    let o = dga(&["equiv", "-", "fixtures:A_3color", "--n", "2"], Some(&text));
    assert_eq!(code(&o), 1);
    assert!(json(&o)["counterexample"]["graph"].is_object());
}

#[test]
fn emptiness_reports_a_three_node_witness() {
    let o = dga(&["empty", "fixtures:A_min3", "--cap", "4"], None);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["status"], "nonempty");
    assert_eq!(v["witness"]["nodes"].as_array().unwrap().len(), 3);
    let o = dga(&["empty", "fixtures:A_max2"], None);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("undecidable"));
}

#[test]
fn restriction_flags_match_post_filtering() {
    let blank = Alphabet::blank();
    let a = fixtures::a_3color();
    for g in enumerate_graphs(3, &blank, &blank) {
        let path = temp_file("g.json", &g.to_json_string());
        let inside = accepts(&a, &g).unwrap();
        for (flag, admits) in [("conn", is_connected(&g)), ("undir", is_undirected(&g))] {
            let o = dga(&["accept", "fixtures:A_3color", path.to_str().unwrap(), "--restrict", flag], None);
            assert_eq!(code(&o) == 0, inside && admits, "{flag} on {}", g.to_json_string());
        }
    }
}

#[test]
fn projection_map_and_products() {
    let o = dga(&["transform", "project", "fixtures:A_occur", "--map", r#"{"map": {"a": "_", "b": "_", "c": "_"}}"#], None);
    assert_eq!(code(&o), 0);
    let projected = String::from_utf8(o.stdout.clone()).unwrap();
    let report = &json(&o)["report"];
    assert_eq!(report["output_len"], report["normalized_len"][0].as_u64().unwrap() + 1);
    let o = dga(&["equiv", "-", "fixtures:A_min3", "--n", "4"], Some(&projected));
    assert_eq!(code(&o), 0);

    let comp = String::from_utf8(dga(&["transform", "complement-ddga", "fixtures:A_occur"], None).stdout).unwrap();
    let comp_file = temp_file("comp.json", &comp);
    let o = dga(&["transform", "product-and", "fixtures:A_occur", comp_file.to_str().unwrap()], None);
    assert_eq!(code(&o), 0);
    let prod = String::from_utf8(o.stdout).unwrap();
    let o = dga(&["empty", "-", "--cap", "4"], Some(&prod));
    assert_ne!(json(&o)["status"], "nonempty");

    let o = dga(&["transform", "union", "fixtures:A_3color"], None);
    assert_eq!(code(&o), 3);
    let o = dga(&["transform", "project", "fixtures:A_occur", "--map", r#"{"map": {"a": "_"}}"#], None);
    assert_eq!(code(&o), 3);
}

#[test]
fn mso_commands() {
    let o = dga(&["mso", "eval", "fixtures:phi_3color", "fixtures:K3"], None);
    assert_eq!((code(&o), json(&o)["holds"].clone()), (0, Value::Bool(true)));
    let o = dga(&["mso", "eval", "exists x (x -> x)", "fixtures:K3"], None);
    assert_eq!(code(&o), 1);
    let o = dga(&["mso", "compile", "forall x (lab[a](x))", "--sigma", "a,b"], None);
    assert_eq!(code(&o), 0);
    let compiled = String::from_utf8(o.stdout).unwrap();
    let o = dga(&["validate", "-"], Some(&compiled));
    assert_eq!(code(&o), 0);
    let o = dga(&["mso", "from-automaton", "fixtures:A_occur"], None);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["sentence"].as_str().unwrap().contains("lab[a]"));
    let o = dga(&["mso", "eval", "exists x (", "fixtures:K3"], None);
    assert_eq!(code(&o), 3);
}

#[test]
fn exit_codes_for_usage_input_and_caps() {
    assert_eq!(code(&dga(&["frobnicate"], None)), 2);
    assert_eq!(code(&dga(&["empty", "fixtures:A_min3", "--cap", "0"], None)), 2);
    assert_eq!(code(&dga(&["validate", "fixtures:A_nothing"], None)), 3);
    let bad = dga(&["validate", "-"], Some(r#"{"sigma":["_"],"gamma":["_"],"states":[{"name":"q","kind":"E"}],"init":{"_":"q"},"rules":[],"accepting":{"sets":[]}}"#));
    assert_eq!(code(&bad), 3);
    assert_eq!(json(&bad)["diagnostics"][0]["code"], "no-permanent-states");
    let o = dga(&["--position-cap", "2", "accept", "fixtures:A_3color", "fixtures:K3"], None);
    assert_eq!(code(&o), 4);
}

#[test]
fn dot_exports_and_determinism() {
    let dir = std::env::temp_dir().join(format!("dga-cli-dot-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (run, game) = (dir.join("run.dot"), dir.join("game.dot"));
    let args = ["accept", "fixtures:A_centric", "fixtures:centric_in", "--run-dot", run.to_str().unwrap(), "--game-dot", game.to_str().unwrap()];
    let first = dga(&args, None);
    assert_eq!(code(&first), 0);
    assert!(std::fs::read_to_string(&run).unwrap().starts_with("digraph"));
    let game_text = std::fs::read_to_string(&game).unwrap();
    assert!(game_text.starts_with("digraph"));
    let second = dga(&args, None);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(game_text, std::fs::read_to_string(&game).unwrap());
}

#[test]
fn fixtures_listing_and_enumeration() {
    let list = json(&dga(&["fixtures", "list"], None));
    assert!(list.as_array().unwrap().iter().any(|f| f["name"] == "A_centric"));
    let o = dga(&["fixtures", "dump", "A_centric"], None);
    assert_eq!(json(&o)["states"].as_array().unwrap().len(), 10);
    let o = dga(&["enumerate", "--n", "2", "--sigma", "a,b"], None);
    let lines = String::from_utf8(o.stdout).unwrap();
    let blank = Alphabet::blank();
    let ab = Alphabet::new(["a", "b"]).unwrap();
    assert_eq!(lines.lines().count(), enumerate_graphs(2, &ab, &blank).count());
}
