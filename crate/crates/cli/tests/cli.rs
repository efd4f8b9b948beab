use std::fs;
use std::process::{Command, Output};

fn hgd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgd"))
        .args(args)
        .env_remove("HGD_CACHE_DIR")
        .output()
        .expect("hgd runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap().trim_end().to_string()
}

fn ok(args: &[&str]) -> String {
    let out = hgd(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

const E11: &str = r#"["2","22","160","424","416"]"#;

#[test]
fn dist_json_for_every_engine() {
    for engine in ["recurrence", "matrix", "embedding", "genfun"] {
        assert_eq!(ok(&["dist", "--m", "1,1", "--engine", engine, "--format", "json"]), E11, "{engine}");
    }
    assert_eq!(ok(&["dist", "--m", "1,1"]), E11);
}

#[test]
fn dist_csv_and_text() {
    assert_eq!(ok(&["dist", "--m", "1,1", "--format", "csv"]), "genus,count\n0,2\n1,22\n2,160\n3,424\n4,416");
    assert_eq!(ok(&["dist", "--m", "1,1", "--format", "text"]), "2 + 22 z + 160 z^2 + 424 z^3 + 416 z^4");
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["dist", "--m", "0"][..],
        &["dist", "--m", "1,x"],
        &["dist", "--m", "1,1", "--engine", "abacus"],
        &["closed", "--m", "1,1"],
        &["canon", "--m", ""],
    ] {
        assert_eq!(hgd(args).status.code(), Some(2), "{args:?}");
    }
    // a genfun box smaller than the target tuple
    assert_eq!(hgd(&["dist", "--m", "3,3", "--engine", "genfun", "--trunc", "2"]).status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_3() {
    let out = hgd(&["dist", "--m", "2,2", "--engine", "matrix", "--budget-bits", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    assert_eq!(hgd(&["dist", "--m", "4,4,4", "--engine", "embedding"]).status.code(), Some(3));
}

#[test]
fn closed_forms() {
    assert_eq!(ok(&["closed", "--m", "2,2,2", "--genus", "1"]), "62");
    assert_eq!(ok(&["closed", "--m", "1,2,3", "--genus", "2"]), "1400");
    assert_eq!(ok(&["closed", "--m", "1,1", "--genus", "0"]), "2");
    assert_eq!(hgd(&["closed", "--m", "3", "--genus", "2"]).status.code(), Some(4));
    assert_eq!(hgd(&["closed", "--m", "2,2", "--genus", "3"]).status.code(), Some(4));
}

#[test]
fn canon() {
    assert_eq!(ok(&["canon", "--m", "2,2,3,0"]), "2,2,4");
    assert_eq!(ok(&["canon", "--m", "2,2,2,1"]), "2,2,4");
    // H_{1,1} is the ladder R_2
    assert_eq!(ok(&["canon", "--m", "1,1"]), "2");
    assert_eq!(ok(&["canon", "--m", "4,2,1"]), "4,4");
    assert_eq!(ok(&["canon", "--m", "4,2,3"]), "3,2,4");
}

#[test]
fn crosscheck_matches() {
    let out = ok(&["crosscheck", "--m", "1,1,1", "--engines", "recurrence,matrix,embedding"]);
    assert!(out.starts_with("MATCH"), "{out}");
    let out = ok(&["crosscheck", "--m", "2,4", "--engines", "recurrence,genfun"]);
    assert!(out.starts_with("MATCH"), "{out}");
    let json: serde_json::Value =
        serde_json::from_str(&ok(&["crosscheck", "--m", "1,2", "--format", "json"])).unwrap();
    assert_eq!(json["match"], true);
    assert_eq!(json["results"].as_object().unwrap().len(), 4);
}

#[test]
fn crosscheck_reports_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    ok(&["dist", "--m", "1,1", "--engine", "matrix", "--cache-dir", cache]);
    // tamper with the cached matrix result for genus 3
    let path = dir.path().join("H_2.json");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replace("\"424\"", "\"425\"")).unwrap();

    let out = hgd(&["crosscheck", "--m", "1,1", "--engines", "recurrence,matrix", "--cache-dir", cache]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout(&out);
    assert!(report.starts_with("MISMATCH H(1,1) first differing genus 3"), "{report}");
    assert!(report.contains("3,424,425 *"), "{report}");

    let json = hgd(&["crosscheck", "--m", "1,1", "--engines", "recurrence,matrix", "--cache-dir", cache, "--format", "json"]);
    assert_eq!(json.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["first_difference"], 3);
}

#[test]
fn cache_hits_equal_fresh_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    for m in ["1,2", "2,1", "1,1,1", "1,1,2,0"] {
        for engine in ["recurrence", "matrix", "genfun"] {
            let fresh = ok(&["dist", "--m", m, "--engine", engine]);
            let miss = ok(&["dist", "--m", m, "--engine", engine, "--cache-dir", cache]);
            let hit = ok(&["dist", "--m", m, "--engine", engine, "--cache-dir", cache]);
            assert_eq!(fresh, miss);
            assert_eq!(fresh, hit);
        }
    }
    // 1,2 and 2,1 are both the ladder R_3; 1,1,2,0 reduces to 3,3
    assert!(dir.path().join("H_3.json").exists());
    assert!(dir.path().join("H_4.json").exists());
    assert!(dir.path().join("H_3_3.json").exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hgd"))
        .args(["dist", "--m", "1,1"])
        .env("HGD_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("H_2.json").exists());
}

#[test]
fn output_is_identical_across_thread_counts() {
    for engine in ["matrix", "embedding"] {
        let runs: Vec<String> = ["1", "2", "8"]
            .iter()
            .map(|t| ok(&["dist", "--m", "1,2", "--engine", engine, "--threads", t]))
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "{engine}: {runs:?}");
    }
}

#[test]
fn series_table() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["series", "--m", "1,1"])).unwrap();
    let rows = v.as_array().unwrap();
    let at_11: Vec<&str> = rows
        .iter()
        .filter(|r| r["t"] == serde_json::json!([1, 1]))
        .map(|r| r["c"].as_str().unwrap())
        .collect();
    assert_eq!(at_11, ["2", "22", "160", "424", "416"]);
    let wider: serde_json::Value = serde_json::from_str(&ok(&["series", "--m", "1,1", "--trunc", "2"])).unwrap();
    assert!(wider.as_array().unwrap().len() > rows.len());
    assert_eq!(hgd(&["series", "--m", "3"]).status.code(), Some(4));
}

#[test]
fn graph_dump() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["graph", "--m", "1,1"])).unwrap();
    // ladder with two pendant spine vertices: 6 vertices, 9 edges
    assert_eq!(v["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(v["edges"].as_array().unwrap().len(), 9);
    let tree = |v: &serde_json::Value| -> Vec<bool> {
        v["edges"].as_array().unwrap().iter().map(|e| e["tree"].as_bool().unwrap()).collect()
    };
    let dfs: serde_json::Value = serde_json::from_str(&ok(&["graph", "--m", "1,1", "--tree", "dfs"])).unwrap();
    assert_eq!(tree(&v).iter().filter(|&&t| t).count(), 5);
    assert_eq!(tree(&dfs).iter().filter(|&&t| t).count(), 5);
    assert_ne!(tree(&v), tree(&dfs));
}
