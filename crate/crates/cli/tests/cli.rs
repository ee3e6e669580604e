use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn linepack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linepack")).args(args).env_remove("LINEPACK_OUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn build_n3(dir: &Path) {
    let o = linepack(&["build", "--n", "3", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn build_writes_every_listed_file() {
    let dir = tempfile::tempdir().unwrap();
    build_n3(dir.path());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest_n3.json")).unwrap()).unwrap();
    assert_eq!(manifest["certificate"]["verdict"], "OPTIMAL");
    assert_eq!(manifest["frame"]["m"], 28);
    for f in manifest["files"].as_array().unwrap() {
        let name = f["name"].as_str().unwrap();
        let body = fs::read_to_string(dir.path().join(name)).unwrap();
        if name.ends_with(".json") {
            serde_json::from_str::<serde_json::Value>(&body).unwrap();
        } else {
            assert!(body.starts_with("LINEPACK-MATRIX v1 "));
            let o = linepack(&["verify", "--input", dir.path().join(name).to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        }
    }
    assert!(dir.path().join("timing_n3.json").exists());
}

#[test]
fn even_or_out_of_range_n_is_a_usage_error() {
    let o = linepack(&["build", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n must be odd"));
    assert_eq!(linepack(&["build", "--n", "11"]).status.code(), Some(2));
    assert_eq!(linepack(&["gram", "--n", "7"]).status.code(), Some(2));
    assert_eq!(linepack(&["verify", "--n", "7", "--mode", "full"]).status.code(), Some(2));
    assert_eq!(linepack(&["build"]).status.code(), Some(2));
    assert_eq!(linepack(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_errors_are_machine_readable() {
    let o = linepack(&["--json-errors", "build", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(v["error"], "usage");
    assert_eq!(v["exit_code"], 2);
    let o = linepack(&["--json-errors", "search", "--max-order", "x"]);
    let v: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn tampered_frame_fails_with_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    build_n3(dir.path());
    let path = dir.path().join("frame_n3.lpm");
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let mut cells: Vec<String> = lines[1].split(' ').map(str::to_string).collect();
    let c = cells.iter().position(|c| c != "0;0").unwrap();
    let (re, im) = cells[c].split_once(';').unwrap();
    let neg = |s: &str| (-s.parse::<i64>().unwrap()).to_string();
    cells[c] = format!("{};{}", neg(re), neg(im));
    lines[1] = cells.join(" ");
    let bad = dir.path().join("bad.lpm");
    fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = linepack(&["verify", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at row pair (0, "), "{}", stderr(&o));
    assert!(stdout(&o).contains("NOT_ETF"));
}

#[test]
fn unparseable_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("junk.lpm");
    fs::write(&p, "LINEPACK-MATRIX v1 rows=2 cols=2 scale_log2_num=0 scale_log2_den=1\n1;0 0;0\n").unwrap();
    assert_eq!(linepack(&["verify", "--input", p.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.lpm");
    assert_eq!(linepack(&["verify", "--input", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_modes() {
    let o = linepack(&["verify", "--n", "3", "--mode", "full"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["verdict"], "OPTIMAL");
    assert_eq!(cert["agreement"], true);
    let o = linepack(&["verify", "--n", "5", "--mode", "sample", "--samples", "500"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["mismatches"], 0);
    assert_eq!(rep["status"], "NO_VIOLATION");
}

#[test]
fn search_outputs() {
    let o = linepack(&["search", "--max-order", "64"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("64,7,2,28,")));
    assert!(stderr(&o).starts_with("4 tuples"));
    let o = linepack(&["search", "--max-order", "2"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stderr(&o).starts_with("0 tuples"));
    assert_eq!(linepack(&["search", "--max-order", "1"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let o = linepack(&["search", "--max-order", "100", "--out", csv.to_str().unwrap()]);
    assert!(stdout(&o).is_empty());
    assert!(fs::read_to_string(csv).unwrap().starts_with("n,k,l,m,lambda,"));
}

#[test]
fn chartab_gram_and_srg() {
    let dir = tempfile::tempdir().unwrap();
    let o = linepack(&["chartab", "--n", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let t: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("chartab_n3.json")).unwrap()).unwrap();
    assert_eq!(t["characters"], 22);
    assert_eq!(t["table"]["characters"].as_array().unwrap().len(), 22);
    assert_eq!(t["orthogonality"]["ok"], true);

    let o = linepack(&["gram", "--n", "3", "--method", "closed-form,character"]);
    assert_eq!(stdout(&o).trim(), "AGREE (4096 entries)");
    let o = linepack(&["gram", "--n", "3", "--method", "bogus"]);
    assert_eq!(o.status.code(), Some(2));

    let o = linepack(&["srg", "--v", "16", "--k", "6", "--lambda", "2", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["certificate"]["m"], 6);
    assert_eq!(v["certificate"]["numVectors"], 16);
    assert_eq!(v["certificate"]["offDiagModulusSquared"], "1/64");
    let o = linepack(&["srg", "--v", "13", "--k", "6", "--lambda", "2", "--mu", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_dir_falls_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_linepack"))
        .args(["chartab", "--n", "3"])
        .env("LINEPACK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("chartab_n3.json").exists());
}
