//! Exit-code contract and artifact checks for the binary.

use std::process::Command;

use cayley_factor::catalog;
use cayley_factor::group::element_order;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cayley-factor"))
}

#[test]
fn factorize_z4_exits_zero_with_two_classes() {
    let out = bin().args(["factorize", "--spec", "Z4", "--gens", "1"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["version"], "cayley-factor/1");
    assert_eq!(doc["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn factorize_tuple_generators() {
    let out = bin()
        .args(["factorize", "--spec", "Z4*Z3", "--gens", "(1,1),(0,1)"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["classes"].as_array().unwrap().len(), 4);
}

#[test]
fn out_of_scope_exits_two_and_exact_rescues() {
    let s3 = catalog::sym3();
    let t = s3.elements().find(|&x| element_order(&s3, x) == 2).unwrap();
    let r = s3.elements().find(|&x| element_order(&s3, x) == 3).unwrap();
    let gens = format!("{},{}", t, r);
    let out = bin().args(["factorize", "--spec", "S3", "--gens", &gens]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // escape hatch: this graph is K_{3,3}, which the exact solver factorizes
    let out = bin()
        .args(["factorize", "--spec", "S3", "--gens", &gens, "--exact"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn budget_exhaustion_exits_three() {
    let out = bin()
        .args(["factorize", "--spec", "Q8*Z3", "--gens", "7,12", "--exact", "--budget", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fact = dir.path().join("f.json");
    let graph = dir.path().join("g.json");
    let st = bin()
        .args(["factorize", "--spec", "Z4*Z3", "--gens", "4,1"])
        .arg("--out")
        .arg(&fact)
        .status()
        .unwrap();
    assert!(st.success());
    let st = bin()
        .args(["export", "--spec", "Z4*Z3", "--gens", "4,1"])
        .arg("--out")
        .arg(&graph)
        .status()
        .unwrap();
    assert!(st.success());

    // matching pair
    let st = bin().arg("verify").arg(&graph).arg(&fact).status().unwrap();
    assert_eq!(st.code(), Some(0));

    // tampered class
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&fact).unwrap()).unwrap();
    let classes = doc["classes"].as_array_mut().unwrap();
    classes[0].as_array_mut().unwrap().pop();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string(&doc).unwrap()).unwrap();
    let st = bin().arg("verify").arg(&graph).arg(&tampered).status().unwrap();
    assert_eq!(st.code(), Some(1));

    // truncated file
    let truncated = dir.path().join("truncated.json");
    std::fs::write(&truncated, &std::fs::read_to_string(&fact).unwrap()[..40]).unwrap();
    let st = bin().arg("verify").arg(&graph).arg(&truncated).status().unwrap();
    assert_eq!(st.code(), Some(4));
}

#[test]
fn dot_output_has_colored_edges() {
    let out = bin()
        .args(["factorize", "--spec", "Z4", "--gens", "1", "--format", "dot"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph"));
    assert_eq!(dot.matches("color=c0").count(), 2);
    assert_eq!(dot.matches("color=c1").count(), 2);
}

#[test]
fn components_flag_handles_disconnected_sets() {
    // <2> in Z4 spans a proper subgroup; refused without the flag
    let out = bin().args(["factorize", "--spec", "Z4", "--gens", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["factorize", "--spec", "Z4", "--gens", "2", "--components"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["classes"].as_array().unwrap().len(), 1);
    assert_eq!(doc["classes"][0].as_array().unwrap().len(), 2);
}

#[test]
fn bad_spec_exits_one() {
    let out = bin().args(["factorize", "--spec", "Z4*huh", "--gens", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 3"));
}

#[test]
fn bench_header_only_when_filter_misses() {
    let out = bin()
        .args(["bench", "--filter", "nope", "--trials", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1);
}
