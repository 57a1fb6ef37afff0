use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn lietab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lietab"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// The generic SL2 fixture with one field changed.
fn mutated(dir: &tempfile::TempDir, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let text = std::fs::read_to_string(data("sl2_generic.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    edit(&mut v);
    let p = dir.path().join("model.json");
    std::fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    p
}

#[test]
fn validate_reports_counts() {
    let o = lietab(&["validate", path(&data("b2_f4.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("ok: 3 groups"));
}

#[test]
fn malformed_json_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"format\":").unwrap();
    let o = lietab(&["validate", path(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: malformed input at line"));
}

#[test]
fn unknown_class_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = mutated(&dir, |v| {
        let theta = v["characters"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|c| c["name"] == "theta")
            .unwrap();
        let u = theta["values"]
            .as_object_mut()
            .unwrap()
            .remove("u")
            .unwrap();
        theta["values"]["zz"] = u;
    });
    let o = lietab(&["validate", path(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("SL2 has no class zz"));
}

#[test]
fn flipped_induction_sign_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = mutated(&dir, |v| {
        for c in v["characters"].as_array_mut().unwrap() {
            if c["name"] == "theta" {
                c["sign"] = 1.into();
            }
        }
    });
    let o = lietab(&["run", path(&p), "--plan", "chain"]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(
        e.contains("sign mismatch") && e.contains("SL2/theta"),
        "{e}"
    );
}

#[test]
fn missing_plan_exits_with_1() {
    let o = lietab(&["run", path(&data("sl2_generic.json")), "--plan", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no plan named nope"));
}

#[test]
fn induced_values_on_regular_class() {
    let o = lietab(&["run", path(&data("b2_f4.json")), "--plan", "step4-exp33"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let e = &v["evaluations"][0];
    assert_eq!(e["character"], "F4^II[1]");
    assert_eq!(e["classes"][1], "h53.A2");
    assert_eq!(e["values"][1], "-1/2*q^2 + 1/2*q");
    assert_eq!(e["classes"][5], "h53.A42");
    assert_eq!(e["values"][5], "-1/2*q");

    let o = lietab(&[
        "run",
        path(&data("b2_f4.json")),
        "--plan",
        "step4-exp33",
        "--format",
        "text",
    ]);
    assert!(stdout(&o).contains("h53.A1   1/2*q^3 - q^2 + 1/2*q\n"));
}

#[test]
fn run_writes_artifacts_that_export_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let o = lietab(&[
        "run",
        path(&data("sl2_generic.json")),
        "--plan",
        "chain",
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let first = std::fs::read_to_string(&out).unwrap();
    let o = lietab(&["export", "--format", "json", path(&out), "-"]);
    assert_eq!(stdout(&o), first);
    let o = lietab(&["export", path(&out), "-"]);
    assert!(stdout(&o).starts_with("== plan chain\n"));
}

#[test]
fn json_export_reproduces_fixtures() {
    for f in ["b2_f4.json", "sl2_generic.json", "sl2_q2.json"] {
        let o = lietab(&["export", "--format", "json", path(&data(f)), "-"]);
        assert_eq!(stdout(&o), std::fs::read_to_string(data(f)).unwrap(), "{f}");
    }
}

#[test]
fn verify_passes_on_fixtures() {
    let o = lietab(&["verify", path(&data("b2_f4.json")), "--at", "q=2,4,8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
    assert!(out.contains("psi-determinant"));
}

#[test]
fn verify_flags_a_wrong_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let p = mutated(&dir, |v| {
        let rows = &mut v["oracles"][0]["rows"];
        let key = rows.as_object().unwrap().keys().next().unwrap().clone();
        rows[&key][0] = "7".into();
    });
    let o = lietab(&["verify", path(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL oracle")));
}

#[test]
fn bad_specialisation_list_exits_with_2() {
    let o = lietab(&["verify", path(&data("b2_f4.json")), "--at", "q=2,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inner_products() {
    let o = lietab(&[
        "inner",
        path(&data("sl2_q4.json")),
        "--left",
        "St",
        "--right",
        "St",
    ]);
    assert_eq!(stdout(&o), "<St, St>_SL2(4) = 1\n");
    let o = lietab(&[
        "inner",
        path(&data("sl2_generic.json")),
        "--left",
        "St",
        "--right",
        "St",
        "--support",
        "unipotent",
    ]);
    assert_eq!(stdout(&o), "<St, St>_SL2 = q/(q^2 - 1)  (partial sum)\n");
}
