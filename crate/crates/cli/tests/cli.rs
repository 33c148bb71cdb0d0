//! End-to-end CLI checks: exit codes, output determinism, and the manifest.

use std::fs;
use std::process::Command;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hochbar"))
}

fn fixtures(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn same_input_twice_gives_identical_bytes() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let status = cli()
            .args([
                "hh",
                "--algebra",
                &fixtures("q_z2_algebra.json"),
                "--output",
                "csv",
                "--out-dir",
            ])
            .arg(d.path())
            .status()
            .unwrap();
        assert!(status.success());
    }
    for name in ["hh.json", "hh.csv", "manifest.json"] {
        let a = fs::read(d1.path().join(name)).unwrap();
        let b = fs::read(d2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn manifest_lists_inputs_with_hashes() {
    let d = tempfile::tempdir().unwrap();
    let status = cli()
        .args([
            "sl2z-orbits",
            "--group",
            &fixtures("z2.json"),
            "--out-dir",
        ])
        .arg(d.path())
        .status()
        .unwrap();
    assert!(status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "sl2z-orbits");
    let inputs = manifest["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 1);
    assert_eq!(inputs[0]["sha256"].as_str().unwrap().len(), 64);
    let outputs = manifest["outputs"].as_array().unwrap();
    assert!(outputs.iter().any(|o| o == "sl2z-orbits.csv"));
}

#[test]
fn validation_failure_names_axiom_and_exits_2() {
    // Corrupt the group table so that associativity breaks.
    let text = fs::read_to_string(fixtures("s3.json")).unwrap();
    let mut schema: serde_json::Value = serde_json::from_str(&text).unwrap();
    schema["table"][1][1] = serde_json::json!(1);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad_group.json");
    fs::write(&bad, serde_json::to_string(&schema).unwrap()).unwrap();
    let out = cli()
        .args(["double", "--group"])
        .arg(&bad)
        .args(["--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("associativity") || err.contains("identity") || err.contains("inverses"),
        "stderr does not name the violated axiom: {err}"
    );
}

#[test]
fn budget_overflow_exits_3_and_names_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli()
        .args([
            "double",
            "--group",
            &fixtures("s3.json"),
            "--max-degree",
            "3",
            "--budget",
            "20000",
            "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("level 2"), "stderr does not name the level: {err}");
}

#[test]
fn hm_on_one_object_category_matches_hh() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let status = cli()
        .args([
            "hm",
            "--category",
            &fixtures("q_z2_category.json"),
            "--max-degree",
            "4",
            "--out-dir",
        ])
        .arg(d1.path())
        .status()
        .unwrap();
    assert!(status.success());
    let status = cli()
        .args([
            "hh",
            "--algebra",
            &fixtures("q_z2_algebra.json"),
            "--max-degree",
            "4",
            "--out-dir",
        ])
        .arg(d2.path())
        .status()
        .unwrap();
    assert!(status.success());
    let hm: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d1.path().join("hm.json")).unwrap()).unwrap();
    let hh: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d2.path().join("hh.json")).unwrap()).unwrap();
    assert_eq!(hm["rows"], hh["rows"]);
}

#[test]
fn sectors_with_z_scalar_reports_twisted_h0() {
    let dir = tempfile::tempdir().unwrap();
    let cat = serde_json::json!({
        "field": "q",
        "group": {
            "elements": ["0", "1", "2", "3"],
            "table": [[0,1,2,3],[1,2,3,0],[2,3,0,1],[3,0,1,2]]
        },
        "crossed": true
    });
    let path = dir.path().join("z4_crossed.json");
    fs::write(&path, serde_json::to_string(&cat).unwrap()).unwrap();
    let run = |scalar: Option<&str>| -> serde_json::Value {
        let out = tempfile::tempdir().unwrap();
        let mut cmd = cli();
        cmd.args(["sectors", "--category"])
            .arg(&path)
            .args(["--z", "2"]);
        if let Some(s) = scalar {
            cmd.arg(format!("--z-scalar={s}"));
        }
        cmd.args(["--out-dir"]).arg(out.path());
        assert!(cmd.status().unwrap().success());
        serde_json::from_str(&fs::read_to_string(out.path().join("sectors.json")).unwrap())
            .unwrap()
    };
    // z = g^2 acting trivially: every sector H_0 is 1; acting by -1: 0.
    let plain = run(None);
    assert!(plain["sector_h0"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r[1] == 1));
    let twisted = run(Some("-1"));
    assert!(twisted["sector_h0"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r[1] == 0));
}

#[test]
fn loopgpd_accepts_groupoid_files() {
    let dir = tempfile::tempdir().unwrap();
    let status = cli()
        .args([
            "loopgpd",
            "--groupoid",
            &fixtures("z3z3_groupoid.json"),
            "--max-degree",
            "4",
            "--budget",
            "1000000",
            "--out-dir",
        ])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("loopgpd.json")).unwrap())
            .unwrap();
    assert_eq!(report["iso_failures"], 0);
    // Lambda(Z/3 // Z/3) has 9 objects.
    assert_eq!(
        report["loop_groupoid"]["objects"].as_array().unwrap().len(),
        9
    );
}
