use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn stdgr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stdgr"))
        .args(args)
        .env_remove("STDGR_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn text_models() {
    let o = stdgr(&[
        "model", "-p", "17", "-n", "2", "-m", "3", "--format", "text",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x^3+286x+214\n");
    let o = stdgr(&["model", "-p", "5", "-n", "3", "-m", "1", "--format", "text"]);
    assert_eq!(stdout(&o), "x+124\n");
    let o = stdgr(&[
        "model",
        "-p",
        "17",
        "-n",
        "1",
        "-m",
        "3",
        "--format",
        "text",
        "--precision",
        "10",
    ]);
    assert_eq!(stdout(&o), "x^3+14x+10\nx^3-3x+907573721136\n");
}

#[test]
fn json_schema() {
    let o = stdgr(&["model", "-p", "2", "-n", "2", "-m", "6", "--format", "json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let keys = [
        "\"p\"",
        "\"n\"",
        "\"m\"",
        "\"basis\"",
        "\"defining_poly\"",
        "\"structure_constants\"",
        "\"provenance\"",
    ];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "field order");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(
        v["basis"],
        serde_json::json!(["0", "1/6", "1/3", "1/2", "2/3", "5/6"])
    );
    let sc = v["structure_constants"].as_array().unwrap();
    assert_eq!(sc.len(), 6);
    assert!(sc.iter().all(|row| row.as_array().unwrap().iter().all(|c| c
        .as_array()
        .unwrap()
        .len()
        == 6)));
    match &v["defining_poly"] {
        serde_json::Value::Null => {}
        serde_json::Value::Array(c) => assert_eq!(c.len(), 7),
        other => panic!("defining_poly {other}"),
    }
    let prov = &v["provenance"];
    for key in ["route", "r_components", "seed", "version"] {
        assert!(prov.get(key).is_some(), "{key}");
    }
    let comps = prov["r_components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[1]["r"], 3);
    assert!(comps[1].get("descriptor").is_some());
    assert!(comps[1].get("omega").is_some());
}

#[test]
fn tables() {
    let o = stdgr(&[
        "table",
        "-p",
        "17",
        "-r",
        "3",
        "--k-max",
        "1",
        "--n-max",
        "3",
        "--precision",
        "10",
    ]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(
        lines[1],
        "k=1: x^3+14x+10 | x^3+286x+214 | x^3+4910x+1659 | x^3-3x+907573721136"
    );
    let o = stdgr(&[
        "table", "-p", "3", "-r", "3", "--k-max", "1", "--n-max", "1",
    ]);
    assert_eq!(stdout(&o), "k=1: x^3+2x^2+2x+2\n");
    let o = stdgr(&[
        "table",
        "-p",
        "7",
        "-r",
        "5",
        "--k-max",
        "0",
        "--n-max",
        "3",
        "--precision",
        "10",
    ]);
    assert_eq!(stdout(&o), "k=0: x+6 | x+27 | x+223 | x+89288611\n");
}

#[test]
fn verify_fresh_and_corrupted() {
    let o = stdgr(&["verify", "-p", "17", "-n", "2", "-m", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = stdgr(&["verify", "-p", "2", "-n", "2", "-m", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("units=4032"));

    let dir = tempfile::tempdir().unwrap();
    let good = stdout(&stdgr(&["model", "-p", "17", "-n", "2", "-m", "3"]));
    let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
    let c = v["structure_constants"][1][1][1].as_u64().unwrap();
    v["structure_constants"][1][1][1] = ((c + 1) % 289).into();
    let path = dir.path().join("bad.json");
    fs::write(&path, v.to_string()).unwrap();
    let o = stdgr(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"associativity"), "{failed:?}");

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{\"p\": 17").unwrap();
    assert_eq!(
        stdgr(&["verify", garbage.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        stdgr(&["verify", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn exit_codes() {
    assert_eq!(
        stdgr(&["model", "-p", "4", "-n", "1", "-m", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        stdgr(&["model", "-p", "2", "-n", "1", "-m", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        stdgr(&["model", "-p", "2", "-n", "1", "-m", "300"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        stdgr(&["model", "-p", "17", "-n", "1", "-m", "9", "--caps", "243:4:16"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        stdgr(&["model", "-p", "2", "-n", "1", "-m", "2", "--caps", "1:2"])
            .status
            .code(),
        Some(2)
    );
}

fn entries(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    v.sort();
    v
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cold = stdgr(&["model", "-p", "3", "-n", "2", "-m", "4", "--cache", d]);
    assert!(cold.status.success());
    let files = entries(dir.path());
    assert_eq!(files.len(), 2, "{files:?}");
    assert!(files[0].ends_with(".json") && files[1].ends_with(".sha256"));
    let warm = stdgr(&["model", "-p", "3", "-n", "2", "-m", "4", "--cache", d]);
    assert_eq!(cold.stdout, warm.stdout);
    let uncached = stdgr(&[
        "model",
        "-p",
        "3",
        "-n",
        "2",
        "-m",
        "4",
        "--no-cache",
        "--cache",
        d,
    ]);
    assert_eq!(cold.stdout, uncached.stdout);

    // the cached body is what verify reads back
    let body = dir.path().join(&files[0]);
    let o = stdgr(&["verify", body.to_str().unwrap()]);
    assert!(o.status.success());

    // a tampered entry fails its digest and is rebuilt
    fs::write(&body, "{}").unwrap();
    let again = stdgr(&["model", "-p", "3", "-n", "2", "-m", "4", "--cache", d]);
    assert_eq!(again.stdout, cold.stdout);
    assert!(String::from_utf8_lossy(&again.stderr).contains("digest"));
    assert_eq!(fs::read(&body).unwrap(), {
        let mut s = cold.stdout.clone();
        s.pop();
        s
    });
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_stdgr"))
        .args(["model", "-p", "2", "-n", "2", "-m", "2"])
        .env("STDGR_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(entries(dir.path()).len(), 2);
}
