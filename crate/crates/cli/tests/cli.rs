use std::path::Path;
use std::process::{Command, Output};

use g2_instantons::clarke_closed_form;
use serde_json::Value;

fn g2lab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2lab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(dir: &Path, name: &str) -> Value {
    let text = std::fs::read_to_string(dir.join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn csv_rows(dir: &Path, name: &str) -> (String, Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(dir.join(name)).unwrap();
    let mut lines = text.lines();
    let stamp = lines.next().unwrap().to_string();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (stamp, header, rows)
}

#[test]
fn verify_passes_and_perturbation_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let clean = tmp.path().join("clean");
    let out = g2lab(&["verify"], &clean);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&clean, "verify.json");
    let checks = r["result"]["checks"].as_array().unwrap();
    assert!(checks.len() >= 30);
    for c in checks {
        assert_eq!(c["passed"], Value::Bool(true), "{c}");
        assert!(!c["statement"].as_str().unwrap().is_empty());
        assert!(c["margin"].as_f64().unwrap() >= 0.0);
    }

    let bumped = tmp.path().join("bumped");
    let out = g2lab(&["verify", "--perturb"], &bumped);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&bumped, "verify.json");
    let failed: Vec<&str> = r["result"]["failed"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(failed.contains(&"clarke_x1_1") && failed.contains(&"spin_connection_s4"));
    // identities do not involve connections
    assert!(!failed.iter().any(|f| f.starts_with("d2_") || f.starts_with("se_")));
    assert_ne!(
        report(&clean, "verify.json")["config_sha256"],
        r["config_sha256"],
        "perturbation is part of the config"
    );
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        &["shoot", "--metric", "bggg"][..],
        &["energy", "--set", "x1=100,1000"][..],
        &["scan", "--metric", "bggg", "--grid", "3", "--threads", "2"][..],
    ] {
        let (a, b) = (tmp.path().join(format!("{}a", args[0])), tmp.path().join(format!("{}b", args[0])));
        assert_eq!(g2lab(args, &a).status.code(), Some(0));
        assert_eq!(g2lab(args, &b).status.code(), Some(0));
        let manifest = report(&a, "manifest.json");
        let names: Vec<&str> = manifest["artifacts"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
        assert!(names.len() >= 2);
        for n in names {
            let (x, y) = (std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap());
            assert_eq!(x, y, "{n} differs between runs");
            let text = String::from_utf8(x).unwrap();
            assert!(text.contains(manifest["config_sha256"].as_str().unwrap()), "{n} lacks the config hash");
        }
        // only the manifest records time
        assert!(manifest["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn usage_errors_name_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let out = g2lab(&["flow", "--set", "colour=red"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "# flow settings\ntol = abc\n").unwrap();
    let out = g2lab(&["flow", "--config", cfg.to_str().unwrap()], &tmp.path().join("x"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tol"));
    assert!(!tmp.path().join("x").exists(), "nothing is written for a bad config");

    let out = g2lab(&["scan", "--metric", "bggg", "--set", "f1p=2:1"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("f1p"));
    let out = g2lab(&["shoot", "--metric", "nope"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let out = g2lab(&["energy", "--set", "x1=10"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let out = g2lab(&["flow", "--config", "/nonexistent/run.cfg"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/run.cfg"));
}

#[test]
fn flags_override_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(&cfg, "samples = 7\ntmax = 4 # end\nmetric = bggg\n").unwrap();
    let dir = tmp.path().join("out");
    let out = g2lab(&["export", "--config", cfg.to_str().unwrap(), "--tmax", "2"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let (stamp, header, rows) = csv_rows(&dir, "profile.csv");
    assert!(stamp.starts_with("# g2lab "));
    assert_eq!(header[0], "t [length]");
    assert_eq!(header.len(), 8);
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[6][0].parse::<f64>().unwrap(), 2.0);
    let m = report(&dir, "manifest.json");
    assert_eq!(m["config"]["tmax"], "2");
    assert_eq!(m["config"]["metric"], "bggg");
}

#[test]
fn shoot_bs_p1_matches_the_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let out = g2lab(&["shoot", "--metric", "bs-spinor", "--bundle", "p1", "--set", "params=1"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let (_, header, rows) = csv_rows(tmp.path(), "shoot.csv");
    assert_eq!(&header[..3], ["t [length]", "r [1]", "x [1]"]);
    assert!(rows.len() > 100);
    for row in &rows {
        let r: f64 = row[1].parse().unwrap();
        let x: f64 = row[2].parse().unwrap();
        let want = clarke_closed_form(1.0, r).unwrap();
        assert!((x - want).abs() < 1e-7, "r = {r}: {x} vs {want}");
    }
    let j = report(tmp.path(), "shoot.json");
    assert_eq!(j["result"]["verdict"], "GlobalBounded");
    let slope = j["result"]["connection_slope"].as_f64().unwrap();
    assert!((slope + 3.0).abs() < 0.2);
}

#[test]
fn scan_report_separates_the_open_region() {
    let tmp = tempfile::tempdir().unwrap();
    let out = g2lab(
        &["scan", "--metric", "bggg", "--grid", "4", "--set", "f1p=0.9:1.5", "--set", "g1p=0.2:0.8"],
        tmp.path(),
    );
    let j = report(tmp.path(), "scan.json");
    let r = &j["result"];
    assert_eq!(r["cells"], 16);
    let open = r["open_region"]["cells"].as_u64().unwrap();
    assert!(open > 0);
    assert_eq!(r["open_region"]["cells_detail"].as_array().unwrap().len() as u64, open);
    for u in r["undetermined"].as_array().unwrap() {
        assert!(!u["reason"].as_str().unwrap().is_empty());
    }
    let undetermined = !r["undetermined"].as_array().unwrap().is_empty();
    assert_eq!(out.status.code(), Some(if undetermined { 3 } else { 0 }));
    let (_, header, rows) = csv_rows(tmp.path(), "scan.csv");
    assert_eq!(header[3], "verdict [-]");
    assert_eq!(rows.len(), 16);
}

#[test]
fn energy_sweep_approaches_the_target() {
    let tmp = tempfile::tempdir().unwrap();
    let out = g2lab(&["energy"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let r = &report(tmp.path(), "energy.json")["result"];
    assert_eq!(r["monotone"], true);
    let last = r["ratio_to_target"].as_array().unwrap().last().unwrap().as_f64().unwrap();
    assert!((last - 1.0).abs() < 0.01);
    let (_, header, rows) = csv_rows(tmp.path(), "energy.csv");
    assert_eq!(header, ["x1 [1]", "sup_distance [1]", "delta [length]", "energy_value [1]"]);
    assert_eq!(rows.len(), 3);
}

#[test]
fn flow_and_bubble_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = g2lab(&["flow", "--metric", "bggg", "--tol", "1e-12"], &tmp.path().join("flow"));
    assert_eq!(out.status.code(), Some(0));
    let r = &report(&tmp.path().join("flow"), "flow.json")["result"];
    assert!(r["max_rel_dev_from_closed_form"].as_f64().unwrap() <= 1e-8);
    let out = g2lab(&["bubble", "--set", "x1=1000,100"], &tmp.path().join("bubble"));
    assert_eq!(out.status.code(), Some(0));
    let (_, _, rows) = csv_rows(&tmp.path().join("bubble"), "bubble.csv");
    assert_eq!(rows[0][0].parse::<f64>().unwrap(), 100.0, "sorted by x1");
    let (_, _, prof) = csv_rows(&tmp.path().join("bubble"), "bubble_profiles.csv");
    assert_eq!(prof.len(), 400);
}
