use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn stabrbm(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stabrbm")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_construct_verify_toric() {
    let dir = tempfile::tempdir().unwrap();
    let (b, c, v) = (dir.path().join("b"), dir.path().join("c"), dir.path().join("v"));
    assert_eq!(stabrbm(&["build", "--preset", "toric", "2x2", "-o", s(&b)]).0, 0);
    assert!(b.join("geometry.json").exists());
    let (code, _) = stabrbm(&["construct", "--group", s(&b.join("group.json")), "--emit-recipe", "-o", s(&c)]);
    assert_eq!(code, 0);
    assert_eq!(json(&c.join("recipe.json"))["class"], "X+Z");
    let (code, err) = stabrbm(&["verify", "--group", s(&b.join("group.json")), "--rbm", s(&c.join("rbm.json")), "-o", s(&v)]);
    assert_eq!(code, 0, "{err}");
    let report = json(&v.join("report.json"));
    assert!((report["overlap"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let manifest = json(&v.join("manifest.json"));
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn excited_state_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let (b, c, e, v) = (dir.path().join("b"), dir.path().join("c"), dir.path().join("e"), dir.path().join("v"));
    stabrbm(&["build", "--preset", "toric", "2x2", "-o", s(&b)]);
    stabrbm(&["construct", "--group", s(&b.join("group.json")), "-o", s(&c)]);
    assert_eq!(stabrbm(&["excite", "--rbm", s(&c.join("rbm.json")), "--string", "z", "--path", "0", "-o", s(&e)]).0, 0);
    let (code, _) = stabrbm(&["verify", "--group", s(&b.join("group.json")), "--rbm", s(&e.join("rbm.json")), "-o", s(&v)]);
    assert_eq!(code, 1);
    let flipped = json(&v.join("report.json"))["expectations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["value"][0].as_f64().unwrap() < -0.5)
        .count();
    // one of the two flipped stars is the dropped dependent one
    assert!((1..=2).contains(&flipped));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b");
    assert_eq!(stabrbm(&["build", "--preset", "twist", "-o", s(&b)]).0, 0);
    let (code, err) = stabrbm(&["construct", "--group", s(&b.join("group.json")), "-o", s(&dir.path().join("c"))]);
    assert_eq!(code, 3, "{err}");
    assert_eq!(stabrbm(&["build", "--preset", "hexagon", "-o", s(&b)]).0, 2);
    assert_eq!(stabrbm(&["frobnicate"]).0, 2);
    assert_eq!(stabrbm(&["--help"]).0, 0);
    let t = dir.path().join("t");
    stabrbm(&["build", "--preset", "toric", "3x3", "-o", s(&t)]);
    stabrbm(&["construct", "--group", s(&t.join("group.json")), "-o", s(&t)]);
    let (code, _) =
        stabrbm(&["--cap", "1024", "verify", "--group", s(&t.join("group.json")), "--rbm", s(&t.join("rbm.json")), "-o", s(&t)]);
    assert_eq!(code, 4);
}

#[test]
fn y_basis_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let group = r#"{"n":2,"d":2,"generators":[
        {"label":"A","x":[1,1],"z":[0,0],"phase":0},
        {"label":"B","x":[1,1],"z":[1,1],"phase":2}]}"#;
    let g = dir.path().join("g.json");
    std::fs::write(&g, group).unwrap();
    let c = dir.path().join("c");
    let (code, err) = stabrbm(&["construct", "--group", s(&g), "-o", s(&c)]);
    assert_eq!(code, 0, "{err}");
    let v = dir.path().join("v");
    let rbm = c.join("rbm.json");
    let args = ["verify", "--group", s(&g), "--rbm", s(&rbm), "--basis", "y", "-o", s(&v)];
    assert_eq!(stabrbm(&args).0, 0);
}

#[test]
fn optimize_subsystem_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b");
    stabrbm(&["build", "--preset", "shor", "-o", s(&b)]);
    let group = b.join("group.json");
    let run = |name: &str| {
        let o = dir.path().join(name);
        let trace = o.join("trace.csv");
        std::fs::create_dir_all(&o).unwrap();
        let args = [
            "optimize", "--group", s(&group), "--spins", "0,1,2", "--stabs", "T_1,T_2", "--seed", "5",
            "--restarts", "2", "--max-iterations", "300", "--trace", s(&trace), "-o", s(&o),
        ];
        let (code, err) = stabrbm(&args);
        assert_eq!(code, 0, "{err}");
        (std::fs::read(o.join("rbm.json")).unwrap(), std::fs::read(&trace).unwrap())
    };
    let first = run("o1");
    assert_eq!(first, run("o2"));
    let report = json(&dir.path().join("o1").join("fit_report.json"));
    assert!(report["final_distance"].as_f64().unwrap() < 0.01);
    assert_eq!(json(&dir.path().join("o1").join("manifest.json"))["seed"], 5);
}
