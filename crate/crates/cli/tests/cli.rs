use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_stieltjes-star");

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN).args(args).current_dir(cwd).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, v: &Value) {
    fs::write(dir.join(name), serde_json::to_vec(v).unwrap()).unwrap();
}

fn roots(pairs: &[(&str, u32)]) -> Value {
    json!(pairs.iter().map(|(v, m)| json!({"value": v, "mult": m})).collect::<Vec<_>>())
}

fn pendant_inputs(dir: &Path) {
    write(
        dir,
        "spectra.json",
        &json!({
            "neumann_squared": roots(&[("0.5", 1), ("3/2", 1), ("2", 1)]),
            "dirichlet_squared": roots(&[("1", 1), ("2", 2)]),
        }),
    );
    write(dir, "plan.json", &json!({"residue_split": {"2": ["2/3", "1/3"]}}));
}

fn center_graph(dir: &Path, name: &str, mass: &str) {
    write(
        dir,
        name,
        &json!({
            "root": "center",
            "central_mass": mass,
            "edges": [
                {"lengths": ["1", "1/2"], "masses": ["3"]},
                {"lengths": ["2", "1", "1"], "masses": ["1/2", "1"]},
                {"lengths": ["3/4"], "masses": []},
            ],
        }),
    );
}

#[test]
fn inverse_pendant_then_forward() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    pendant_inputs(dir);
    let o = run(
        &["inverse-pendant", "--spectra", "spectra.json", "--main-length", "2", "--lengths", "2,1", "--plan", "plan.json", "--out", "g.json"],
        dir,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let g: Value = serde_json::from_slice(&fs::read(dir.join("g.json")).unwrap()).unwrap();
    assert_eq!(g["main_edge"], json!({"lengths": ["1", "1"], "masses": ["1"]}));
    assert_eq!(g["central_mass"], "0");
    assert_eq!(g["edges"][0], json!({"lengths": ["4/3", "2/3"], "masses": ["9/8"]}));
    assert_eq!(g["edges"][1], json!({"lengths": ["1/3", "2/3"], "masses": ["9/4"]}));
    assert_eq!(g["reconstruction"]["gamma"], "8/3");

    let o = run(&["forward", "--graph", "g.json"], dir);
    assert!(o.status.success());
    let s = stdout_json(&o);
    assert_eq!(s["neumann_squared"], roots(&[("1/2", 1), ("3/2", 1), ("2", 1)]));
    assert_eq!(s["dirichlet_squared"], roots(&[("1", 1), ("2", 2)]));
}

#[test]
fn forward_emits_polynomials_and_approximations() {
    let tmp = tempfile::tempdir().unwrap();
    center_graph(tmp.path(), "c.json", "1");
    let o = run(&["forward", "--graph", "c.json", "--emit-polys"], tmp.path());
    assert!(o.status.success());
    let s = stdout_json(&o);
    assert!(s["polynomials"]["phi_N"].is_array());
    assert!(s["polynomials"]["phi_D"].is_array());
    assert!(s.get("approximate").is_none());

    let o = run(&["forward", "--graph", "c.json", "--digits", "8", "--as-frequencies"], tmp.path());
    let s = stdout_json(&o);
    assert_eq!(s["approximate"], true);
    let f = &s["neumann_frequencies"][0]["frequencies"];
    assert_eq!(f[0].as_str().unwrap().trim_start_matches('-'), f[1].as_str().unwrap());
}

#[test]
fn interlacing_violation_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "s.json",
        &json!({
            "neumann_squared": roots(&[("1", 1), ("3", 1)]),
            "dirichlet_squared": roots(&[("1/2", 1), ("2", 1)]),
        }),
    );
    let o = run(&["validate", "--spectra", "s.json", "--lengths", "1,2"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let r = stdout_json(&o);
    assert_eq!(r["valid"], false);
    assert!(r["violations"].as_array().unwrap().iter().any(|v| v["condition"] == "interlacing"));

    let o = run(&["inverse-center", "--spectra", "s.json", "--lengths", "1,2"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pendant_root_validation() {
    let tmp = tempfile::tempdir().unwrap();
    pendant_inputs(tmp.path());
    let o = run(&["validate", "--spectra", "spectra.json", "--lengths", "2,1", "--main-length", "2"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["validate", "--spectra", "spectra.json", "--lengths", "2,1", "--main-length", "3/2"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn errors_are_json_on_stderr() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["forward", "--graph", "missing.json"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["code"], "E_SCHEMA");

    let o = run(&["forward", "--nonsense"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["code"], "E_USAGE");

    assert_eq!(run(&["--help"], tmp.path()).status.code(), Some(0));
}

#[test]
fn roundtrip_and_matrix() {
    let tmp = tempfile::tempdir().unwrap();
    center_graph(tmp.path(), "c.json", "2");
    let o = run(&["verify-roundtrip", "--graph", "c.json"], tmp.path());
    assert!(o.status.success());
    assert_eq!(stdout_json(&o)["verdict"], "pass");

    let o = run(&["matrix", "--graph", "c.json"], tmp.path());
    assert!(o.status.success());
    let m = stdout_json(&o);
    assert_eq!(m["dim"], 4);
    assert_eq!(m["pattern"]["valid"], true);

    center_graph(tmp.path(), "z.json", "0");
    let o = run(&["matrix", "--graph", "z.json"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    pendant_inputs(tmp.path());
    let args = ["inverse-pendant", "--spectra", "spectra.json", "--main-length", "2", "--lengths", "2,1", "--enumerate"];
    let a = run(&args, tmp.path());
    let b = run(&args, tmp.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout_json(&a)["reconstruction"]["constraints"].is_object());
}

#[test]
fn batch_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    fs::create_dir(&input).unwrap();
    center_graph(&input, "a.json", "0");
    center_graph(&input, "b.json", "1/3");
    fs::write(input.join("notes.txt"), "skipped").unwrap();

    let o = run(&["forward", "--graph", "in"], tmp.path());
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["forward", "--graph", "in", "--out", "out"], tmp.path());
    assert!(o.status.success());
    let mut names: Vec<_> = fs::read_dir(tmp.path().join("out")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["a.json", "b.json"]);

    fs::write(input.join("c.json"), "{").unwrap();
    let o = run(&["forward", "--graph", "in", "--out", "out2"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(tmp.path().join("out2/a.json").exists());
}
