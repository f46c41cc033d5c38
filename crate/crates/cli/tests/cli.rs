use std::collections::{HashSet, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use coarsekit::ccomplex::build_exact;
use coarsekit::presentation::Presentation;
use coarsekit::stallings::CoreGraph;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarsekit"))
        .arg("--out")
        .arg(dir)
        .args(args)
        .env_remove("COARSEKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let text = fs::read_to_string(root().join("schemas").join(format!("{name}.schema.json"))).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
}

fn assert_valid(schema_name: &str, doc: &Value) {
    let s = schema(schema_name);
    let msgs: Vec<String> = match s.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{schema_name}: {}", msgs.join("; "));
}

/// Reduced words of length at most `r` in rank 2, by breadth-first search.
fn free_ball_size(r: usize) -> usize {
    let mut seen: HashSet<Vec<i8>> = HashSet::from([vec![]]);
    let mut queue = VecDeque::from([vec![]]);
    while let Some(w) = queue.pop_front() {
        if w.len() == r {
            continue;
        }
        for g in [1i8, -1, 2, -2] {
            if w.last() == Some(&-g) {
                continue;
            }
            let mut next = w.clone();
            next.push(g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.len()
}

#[test]
fn ball_matches_breadth_first_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let grp = root().join("data/F2.grp");
    for r in 1..=4 {
        ok(dir.path(), &["ball", "--presentation", grp.to_str().unwrap(), "--radius", &r.to_string()]);
        let doc = load(&dir.path().join("ball.json"));
        assert_eq!(doc["result"]["vertex_count"], free_ball_size(r) as u64, "radius {r}");
        assert_eq!(doc["result"]["vertices"].as_array().unwrap().len(), free_ball_size(r));
    }
    assert_eq!(free_ball_size(2), 17);
}

#[test]
fn lattice_ball_is_a_diamond() {
    let dir = tempfile::tempdir().unwrap();
    let grp = root().join("data/Z2.grp");
    ok(dir.path(), &["ball", "--presentation", grp.to_str().unwrap(), "--radius", "4"]);
    assert_eq!(load(&dir.path().join("ball.json"))["result"]["vertex_count"], 41);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    assert_eq!(run(dir.path(), &["ball"]).status.code(), Some(2), "missing --radius");
    assert_eq!(run(dir.path(), &["ccx"]).status.code(), Some(2), "missing subgroup");
    assert_eq!(run(dir.path(), &["ball", "--radius", "30", "--vertex-cap", "100"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["ccx", "--kernel", "--mode", "exact"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["subgroup", "--generator", "z"]).status.code(), Some(1));
    assert_eq!(run(dir.path(), &["--help"]).status.code(), Some(0));

    let threads = Command::new(env!("CARGO_BIN_EXE_coarsekit"))
        .args(["--out", dir.path().to_str().unwrap(), "ball", "--radius", "1"])
        .env("COARSEKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn exact_complex_of_cyclic_subgroup_has_no_edges() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["ccx", "--mode", "exact", "--generator", "a"]);
    let dot = fs::read_to_string(dir.path().join("ccx.dot")).unwrap();
    let (manifest, body) = dot.split_once('\n').unwrap();
    assert!(manifest.starts_with("// manifest: {"));
    assert!(!body.contains("--"));

    let p = Presentation::free(2);
    let h = CoreGraph::fold(2, &[p.parse_word("a").unwrap()]).unwrap();
    let expected = build_exact(&h, 2).unwrap();
    assert_eq!(body, expected.to_dot(&p));
    assert_eq!(body.matches("label=").count(), expected.vertices().len());
}

#[test]
fn translation_pairing_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["ccx", "--generator", "a", "--generator", "b^2", "--translate", "b"]);
    let doc = load(&dir.path().join("ccx.json"));
    assert_eq!(doc["result"]["translation"]["check"]["isomorphic"], true);
    assert_eq!(run(dir.path(), &["ccx", "--generator", "a", "--mode", "coarse", "--translate", "b"]).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["rigidity", "--generator", "a", "--translate", "b", "--meet", "0,1,2"];
    ok(dir.path(), &args);
    let first = fs::read(dir.path().join("rigidity.json")).unwrap();
    let threaded = Command::new(env!("CARGO_BIN_EXE_coarsekit"))
        .arg("--out")
        .arg(dir.path())
        .args(args)
        .env("COARSEKIT_THREADS", "3")
        .output()
        .unwrap();
    assert!(threaded.status.success());
    assert_eq!(first, fs::read(dir.path().join("rigidity.json")).unwrap());
}

#[test]
fn manifest_records_inputs_and_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let grp = root().join("data/F2.grp");
    ok(dir.path(), &["ball", "--presentation", grp.to_str().unwrap(), "--radius", "2", "--delta", "--seed", "7"]);
    let m = &load(&dir.path().join("ball.json"))["manifest"];
    assert_eq!(m["seeds"], serde_json::json!([7]));
    assert_eq!(m["config"]["inputs"].as_object().unwrap().len(), 1);
    assert_eq!(m["frozen"]["table"]["version"], coarsekit::frozen::frozen().version);
    assert_eq!(m["command_line"][0], "--out");
}

#[test]
fn core_graphs_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["subgroup", "--generator", "a^2", "--generator", "b a b^-1", "--contains", "b a^2 b^-1"]);
    let first = load(&dir.path().join("subgroup.json"));
    assert_eq!(first["result"]["membership"][0]["contains"], true);
    let saved = dir.path().join("h.json");
    fs::copy(dir.path().join("subgroup.json"), &saved).unwrap();
    ok(dir.path(), &["subgroup", "--core", saved.to_str().unwrap()]);
    let second = load(&dir.path().join("subgroup.json"));
    assert_eq!(first["result"]["core"], second["result"]["core"]);
    assert_eq!(first["result"]["width"], second["result"]["width"]);
}

#[test]
fn cross_ratio_of_separated_cylinders() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("K.json");
    let l = dir.path().join("L.json");
    fs::write(&k, r#"["a a a"]"#).unwrap();
    fs::write(&l, r#"{"words": ["b b b"]}"#).unwrap();
    let (ks, ls) = (k.to_str().unwrap(), l.to_str().unwrap());
    ok(dir.path(), &["boundary", "--depth", "6", "--shadows", "1,2,3", "--crossratio", ks, ls]);
    let r = &load(&dir.path().join("boundary.json"))["result"]["cross_ratio"];
    assert_eq!(r["certified"], true);
    let n = r["value"]["finite"].as_u64().unwrap();
    assert!(n > 0);
    assert_eq!(r["chain"].as_array().unwrap().len() as u64, n);

    fs::write(&l, r#"["a a"]"#).unwrap();
    ok(dir.path(), &["boundary", "--depth", "6", "--shadows", "1,2,3", "--crossratio", ks, ls]);
    let r = &load(&dir.path().join("boundary.json"))["result"]["cross_ratio"];
    assert_eq!(r["value"]["finite"], 0);
}

#[test]
fn report_asserts_all_conclusions() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["report", "--generator", "a"]);
    let c = &load(&dir.path().join("report.json"))["result"]["conclusions"];
    assert_eq!(c, &serde_json::json!({"quasi_isometry": true, "bounded_distance": true, "complex_isomorphism": true}));
}

#[test]
fn outputs_validate_against_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let k = d.join("K.json");
    fs::write(&k, r#"["a b"]"#).unwrap();
    let kk = k.to_str().unwrap();
    let runs: Vec<(&str, &str, Vec<&str>)> = vec![
        ("ball.json", "ball", vec!["ball", "--radius", "2", "--delta"]),
        ("subgroup.json", "subgroup", vec!["subgroup", "--generator", "a^2", "--contains", "a"]),
        ("subgroup.json", "subgroup", vec!["subgroup", "--kernel", "--contains", "a b a^-1 b^-1"]),
        ("pattern.json", "pattern", vec!["pattern", "--generator", "a", "--window", "2", "--projection", "--profile-radii", "4,5"]),
        ("ccx.json", "complex", vec!["ccx", "--generator", "a^2", "--translate", "b"]),
        ("ccx.json", "complex", vec!["ccx", "--generator", "a b", "--mode", "coarse", "--radius", "6"]),
        ("rigidity.json", "pairing", vec!["rigidity", "--generator", "a", "--swap", "0,1", "--meet", "0,1"]),
        ("boundary.json", "boundary", vec!["boundary", "--depth", "5", "--shadows", "1,2", "--shadow-ball-radius", "4", "--crossratio", kk, kk, "--generator", "a"]),
        ("axioms.json", "axioms", vec!["axioms", "--grid", "10", "--duplicate", "2"]),
        ("axioms.json", "axioms", vec!["axioms", "--generator", "a"]),
        ("report.json", "report", vec!["report", "--generator", "a"]),
    ];
    for (file, name, args) in runs {
        ok(d, &args);
        assert_valid(name, &load(&d.join(file)));
    }
    let mut broken = load(&d.join("report.json"));
    broken["result"]["qi"]["lambda"] = serde_json::json!(1.5);
    assert!(!schema("report").is_valid(&broken));
}
