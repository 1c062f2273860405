use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_closedrange"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn disc_scene(dir: &Path) -> String {
    let p = dir.join("disc.json");
    fs::write(
        &p,
        r#"{"mode":"complement","obstacles":[{"kind":"disc","center":[0,0],"radius":1}]}"#,
    )
    .unwrap();
    p.display().to_string()
}

#[test]
fn cap_of_disc() {
    let dir = tempfile::tempdir().unwrap();
    let scene = disc_scene(dir.path());
    let v = json(&run(&[
        "cap", "--scene", &scene, "--center", "0,0", "--radius", "3",
    ]));
    assert_eq!(v["schema_version"], 1);
    assert!((v["capacity"]["estimate"].as_f64().unwrap() - 1.0).abs() < 1e-2);
}

#[test]
fn cap_missing_scene_is_a_validation_error() {
    let out = run(&[
        "cap",
        "--scene",
        "/definitely/not/here.json",
        "--radius",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not/here.json"));
}

#[test]
fn cap_of_empty_clip_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let scene = disc_scene(dir.path());
    let v = json(&run(&[
        "cap", "--scene", &scene, "--center", "-10,0", "--radius", "1",
    ]));
    assert_eq!(v["capacity"]["estimate"], 0.0);
    assert_eq!(v["pieces"], 0);
}

#[test]
fn lambda1_of_unit_disc_with_eigvector() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("v.csv");
    let v = json(&run(&[
        "lambda1",
        "--named",
        "unit_disc",
        "--emit-eigvector",
        csv.to_str().unwrap(),
    ]));
    let r = v["spectral"]["richardson"].as_f64().unwrap();
    assert!((r - 5.7832).abs() / 5.7832 < 1e-2, "{r}");
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,value"));
    assert_eq!(lines.count(), 129 * 129);
}

#[test]
fn lambda1_on_empty_interior_is_a_numeric_failure() {
    let out = run(&[
        "lambda1",
        "--named",
        "unit_disc",
        "--box",
        "0.99,0.99,1,1",
        "--h",
        "0.1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn classify_verdicts() {
    let v = json(&run(&["classify", "--named", "arctan_lattice"]));
    assert_eq!(v["verdict"], "not_closed_range");
    let v = json(&run(&[
        "classify",
        "--named",
        "lattice_discs(0.1,1)",
        "--shells",
        "3",
        "--samples",
        "16",
    ]));
    assert_eq!(v["verdict"], "closed_range");
    assert_eq!(v["condition4"]["certificate"]["pass"], true);
}

#[test]
fn classify_as_csv() {
    let out = run(&[
        "classify",
        "--named",
        "integer_lattice_points",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("verdict,not_closed_range"));
}

#[test]
fn classify_bounded_scene_is_unsupported() {
    assert_eq!(
        run(&["classify", "--named", "unit_disc"]).status.code(),
        Some(2)
    );
}

#[test]
fn bergman_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let plane = dir.path().join("plane.json");
    fs::write(&plane, r#"{"mode":"complement"}"#).unwrap();
    assert_eq!(
        json(&run(&["bergman", "--scene", plane.to_str().unwrap()]))["dimension"],
        "zero"
    );
    let v = json(&run(&["bergman", "--scene", &disc_scene(dir.path())]));
    assert_eq!(v["dimension"], "infinite");
    assert_eq!(v["witness"]["pass"], true);
}

#[test]
fn sweep_presets() {
    let out = run(&["sweep", "--preset", "arctan_ladder"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("m,cap_clip,lambda1_truncation\n"));
    assert_eq!(text.lines().count(), 5);
    let out = run(&["sweep", "--preset", "slit_shrink", "--h", "1/32"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("slit_len,cap,lambda1\n"));
}

#[test]
fn unknown_preset_exits_2() {
    assert_eq!(run(&["sweep", "--preset", "bogus"]).status.code(), Some(2));
}

#[test]
fn outputs_are_reproducible_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (p, threads) in [(&a, "1"), (&b, "4")] {
        let out = run(&[
            "--threads",
            threads,
            "--out",
            p.to_str().unwrap(),
            "classify",
            "--named",
            "arctan_lattice",
        ]);
        assert!(out.status.success());
    }
    let (ta, tb) = (
        fs::read_to_string(&a).unwrap(),
        fs::read_to_string(&b).unwrap(),
    );
    // the config hash covers the output path, so compare bodies
    let strip = |t: &str| {
        t.lines()
            .filter(|l| !l.contains("config_hash"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&ta), strip(&tb));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["config_hash"].as_str().unwrap().len(), 64);
    assert!(meta["wall_time_s"].as_f64().unwrap() >= 0.0);
    let again = run(&[
        "--out",
        a.to_str().unwrap(),
        "classify",
        "--named",
        "arctan_lattice",
    ]);
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(&a).unwrap(), ta);
}
