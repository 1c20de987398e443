use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

const SCENARIO: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/default.json");
const SUBCOMMANDS: [&str; 7] = ["geometry", "geodesic", "dewitt", "density", "oracle", "compare", "hydrogen"];

fn maupertuis(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_maupertuis"));
    cmd.args(args).env_remove("MAUPERTUIS_OUT");
    if let Some(o) = out {
        cmd.arg("--out").arg(o);
    }
    cmd.output().expect("binary runs")
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn scenario_with(edit: impl FnOnce(&mut serde_json::Value)) -> (tempfile::TempDir, std::path::PathBuf) {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(SCENARIO).unwrap()).unwrap();
    edit(&mut v);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    (dir, path)
}

#[test]
fn every_subcommand_passes_and_reruns_byte_identically() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for sub in SUBCOMMANDS {
        let o = maupertuis(&[sub, "--scenario", SCENARIO], Some(a.path()));
        assert!(o.status.success(), "{sub}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
        let o = maupertuis(&[sub, "--scenario", SCENARIO, "--threads", "1"], Some(b.path()));
        assert!(o.status.success(), "{sub} single-threaded");
    }
    let (fa, fb) = (files(a.path()), files(b.path()));
    for sub in SUBCOMMANDS {
        assert!(fa.contains_key(&format!("{sub}_summary.json")), "{sub}");
        assert!(fa.contains_key(&format!("{sub}_criteria.csv")), "{sub}");
    }
    assert_eq!(fa.keys().collect::<Vec<_>>(), fb.keys().collect::<Vec<_>>());
    for (name, bytes) in &fa {
        assert!(bytes == &fb[name], "{name} differs between runs");
    }
}

#[test]
fn summary_layout() {
    let dir = tempfile::tempdir().unwrap();
    assert!(maupertuis(&["hydrogen", "--scenario", SCENARIO], Some(dir.path())).status.success());
    let text = std::fs::read_to_string(dir.path().join("hydrogen_summary.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["scenario"], "default");
    assert!(v["version"].as_str().unwrap().starts_with('v'));
    let c = &v["criteria"][0];
    for key in ["id", "value", "tolerance", "pass"] {
        assert!(c.get(key).is_some(), "{key}");
    }
    // 17 significant digits: one leading digit and sixteen after the point
    assert!(text.contains("\"tolerance\": 1.0000000000000001e-5"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("hydrogen_criteria.csv")).unwrap();
    assert!(csv.starts_with("id,title,value,tolerance,pass\n"));
}

#[test]
fn schema_violation_names_the_key() {
    let (_d, path) = scenario_with(|v| v["density"]["order"] = serde_json::json!("two"));
    let o = maupertuis(&["density", "--scenario", path.to_str().unwrap()], Some(_d.path()));
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "config");
    assert_eq!(err["path"], "density.order");
}

#[test]
fn missing_block_and_bad_version() {
    let (d, path) = scenario_with(|v| {
        v.as_object_mut().unwrap().remove("hydrogen");
    });
    let o = maupertuis(&["hydrogen", "--scenario", path.to_str().unwrap()], Some(d.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"path\":\"hydrogen\""));

    let (d, path) = scenario_with(|v| v["schema_version"] = serde_json::json!(2));
    let o = maupertuis(&["validate", "--scenario", path.to_str().unwrap()], Some(d.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema_version"));
}

#[test]
fn tolerance_failure_exits_nonzero_with_failure_list() {
    let (d, path) = scenario_with(|v| v["hydrogen"]["tolerance"] = serde_json::json!(1e-15));
    let o = maupertuis(&["hydrogen", "--scenario", path.to_str().unwrap()], Some(d.path()));
    assert_eq!(o.status.code(), Some(1));
    let fails: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(fails[0]["id"], "hydrogen.curvature");
    assert_eq!(fails[0]["pass"], false);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_maupertuis"))
        .args(["geodesic", "--scenario", SCENARIO])
        .env("MAUPERTUIS_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("geodesic_deviation.json").exists());
    assert!(dir.path().join("geodesic_newton.csv").exists());
}

#[test]
fn zero_threads_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = maupertuis(&["dewitt", "--scenario", SCENARIO, "--threads", "0"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(2));
}
