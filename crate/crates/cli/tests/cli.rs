use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn splitblur(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitblur"))
        .args(args)
        .env("SPLITBLUR_OUTPUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn certify_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = splitblur(&["certify", "--construction", "blur", "--I", "6"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cert = dir.path().join("certificate.json");
    assert!(cert.exists());
    let o = splitblur(&["check-certificate", cert.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("valid: true"));
}

#[test]
fn corrupted_certificates_fail_distinctly() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&splitblur(&["certify", "--construction", "alpha", "--N", "3", "--n", "3"], dir.path())), 0);
    let path = dir.path().join("certificate.json");
    let text = fs::read_to_string(&path).unwrap();

    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["mono_zero"][0]["zero"] = false.into();
    fs::write(&path, doc.to_string()).unwrap();
    let o = splitblur(&["check-certificate", path.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr).to_string();
    assert!(err.contains("reverification") && err.contains("block 1"), "{err}");

    fs::write(&path, &text[..text.len() / 3]).unwrap();
    let o = splitblur(&["check-certificate", path.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed"));

    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["tool_version"] = "9.9.9".into();
    fs::write(&path, doc.to_string()).unwrap();
    let o = splitblur(&["check-certificate", path.to_str().unwrap()], dir.path());
    assert!(String::from_utf8_lossy(&o.stderr).contains("version_mismatch"));
}

#[test]
fn represent_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for out in [&a, &b] {
        let o = splitblur(
            &["represent", "--I", "6", "--steps", "300", "--seed", "0", "--out", out.to_str().unwrap()],
            dir.path(),
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    }
    let log = fs::read(&a).unwrap();
    assert_eq!(log, fs::read(&b).unwrap());
    assert_eq!(log.iter().filter(|&&c| c == b'\n').count(), 300);
}

#[test]
fn blur_check_fails_without_complex_blur() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&splitblur(&["blur-check", "--I", "3", "--n", "3"], dir.path())), 2);
    let o = splitblur(&["blur-check", "--I", "6", "--n", "3", "--format", "json"], dir.path());
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["violations"], 0);
    assert_eq!(report["n_complex_blur"], true);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&splitblur(&["no-such-command"], dir.path())), 1);
    assert_eq!(code(&splitblur(&["certify", "--I", "4"], dir.path())), 1);
    assert_eq!(code(&splitblur(&["certify", "--construction", "flmu", "--I", "5"], dir.path())), 1);
    assert_eq!(code(&splitblur(&["check-certificate", "/nonexistent/cert.json"], dir.path())), 1);
    assert_eq!(code(&splitblur(&["--help"], dir.path())), 0);
}

#[test]
fn other_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = splitblur(&["graph", "--cliques", "4", "--size", "5", "--format", "json"], dir.path());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["chromatic_number"], 5);
    assert_eq!(report["girth"], 3);

    assert_eq!(code(&splitblur(&["ra-check", "--construction", "m", "--I", "4"], dir.path())), 0);
    assert_eq!(code(&splitblur(&["ra-check", "--I", "6", "--D", "3"], dir.path())), 0);

    let o = splitblur(&["blur-build", "--construction", "flmu", "--I", "6"], dir.path());
    assert_eq!(code(&o), 0);
    let spec: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("spec.json")).unwrap()).unwrap();
    assert_eq!(spec["kind"], "f_l_mu");

    let o = splitblur(&["matrices", "--I", "4", "--n", "3", "--format", "json"], dir.path());
    assert_eq!(code(&o), 0);

    let o = splitblur(&["monk", "--n", "3", "--count", "2", "--format", "json"], dir.path());
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["members"][1]["chromatic_number"], 4);
    assert!(dir.path().join("monk_4.json").exists());
}
