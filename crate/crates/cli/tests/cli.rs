use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FIG1_DAG: &str = "vertices: U T W Y Z\nW -> Z\nU -> Y\nU -> W\nW -> T\nT -> Z\n";

fn lmarvel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmarvel"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn project_running_example() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("dag.txt"), FIG1_DAG).unwrap();
    let o = lmarvel(
        &[
            "project",
            "--dag",
            "dag.txt",
            "--observed",
            "T,W,Y,Z",
            "--selection",
            "",
            "--out",
            "mag.txt",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let mag = fs::read_to_string(dir.path().join("mag.txt")).unwrap();
    let expected =
        lmarvel::Mag::parse("vertices: T W Y Z\nY <-> W\nW -> Z\nW -> T\nT -> Z\n").unwrap();
    assert_eq!(lmarvel::Mag::parse(&mag).unwrap(), expected);
}

#[test]
fn oracle_learn_writes_pag_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("dag.txt"), FIG1_DAG).unwrap();
    let o = lmarvel(
        &[
            "oracle-learn",
            "--dag",
            "dag.txt",
            "--latent",
            "U",
            "--selection",
            "",
            "--out",
            "pag.txt",
            "--trace",
            "t.json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let pag =
        lmarvel::Pag::parse(&fs::read_to_string(dir.path().join("pag.txt")).unwrap()).unwrap();
    assert_eq!(pag.edge_count(), 4);
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(trace["removal_order"].as_array().unwrap().len(), 4);
    assert_eq!(trace["fallbacks"], 0);
}

#[test]
fn removable_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("mag.txt"),
        "vertices: T W Y Z\nY <-> W\nW -> Z\nW -> T\nT -> Z\n",
    )
    .unwrap();
    let o = lmarvel(
        &["removable", "--mag", "mag.txt", "--vertex", "W"],
        dir.path(),
    );
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["removable"], false);
    assert_eq!(v["witness"]["adjacent"], "Y");
    assert_eq!(v["witness"]["other"], "T");
    let o = lmarvel(
        &["removable", "--mag", "mag.txt", "--vertex", "Z"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["removable"], true);
}

#[test]
fn simulate_then_learn() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("sc.json"),
        r#"{"generator": {"kind": "er", "n": 10, "p": 0.3}, "latent": {"count": 2}, "seed": 7}"#,
    )
    .unwrap();
    let o = lmarvel(
        &["simulate", "--config", "sc.json", "--out-dir", "out"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["dag.txt", "mag.txt", "roles.json", "data.csv"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
    let first = fs::read(dir.path().join("out/data.csv")).unwrap();
    lmarvel(
        &["simulate", "--config", "sc.json", "--out-dir", "out"],
        dir.path(),
    );
    assert_eq!(fs::read(dir.path().join("out/data.csv")).unwrap(), first);

    let o = lmarvel(
        &[
            "learn",
            "--data",
            "out/data.csv",
            "--alpha",
            "0.01",
            "--tc-alpha",
            "auto",
            "--out",
            "pag.txt",
            "--trace",
            "t.json",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let pag =
        lmarvel::Pag::parse(&fs::read_to_string(dir.path().join("pag.txt")).unwrap()).unwrap();
    let mag = lmarvel::Mag::read(&dir.path().join("out/mag.txt")).unwrap();
    assert_eq!(pag.labels(), mag.labels());
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("b.json"),
        r#"{"scenarios": [{"generator": {"kind": "er", "n": 8, "p": 0.3}, "latent": {"count": 1}}],
            "repetitions": 3, "algorithms": ["lmarvel-oracle", "lmarvel-fisherz"]}"#,
    )
    .unwrap();
    let o = lmarvel(
        &[
            "bench",
            "--config",
            "b.json",
            "--out",
            "r.csv",
            "--workers",
            "2",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let records = lmarvel::bench::read_records(&dir.path().join("r.csv")).unwrap();
    assert_eq!(records.len(), 6);
    assert!(records
        .iter()
        .filter(|r| r.algorithm == "lmarvel-oracle")
        .all(|r| r.f1 == 1.0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lmarvel(&["learn"], dir.path()).status.code(), Some(2));
    assert_eq!(lmarvel(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        lmarvel(
            &["learn", "--data", "missing.csv", "--out", "p.txt"],
            dir.path()
        )
        .status
        .code(),
        Some(3)
    );
    fs::write(dir.path().join("d.csv"), "A,B\n1,2\n2,4\n").unwrap();
    let o = lmarvel(
        &[
            "learn",
            "--data",
            "d.csv",
            "--tc-alpha",
            "often",
            "--out",
            "p.txt",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    fs::write(
        dir.path().join("cyc.txt"),
        "vertices: A B\nA -> B\nB -> A\n",
    )
    .unwrap();
    let o = lmarvel(
        &[
            "project",
            "--dag",
            "cyc.txt",
            "--observed",
            "A,B",
            "--out",
            "m.txt",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    fs::write(dir.path().join("mag.txt"), "vertices: A B\nA -> B\n").unwrap();
    assert_eq!(
        lmarvel(
            &["removable", "--mag", "mag.txt", "--vertex", "Q"],
            dir.path()
        )
        .status
        .code(),
        Some(3)
    );
}
