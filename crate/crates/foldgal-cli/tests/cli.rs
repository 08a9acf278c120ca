use std::path::Path;
use std::process::{Command, Output};

fn foldgal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foldgal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn newton_of_three_varpi_two_in_c2() {
    let o = foldgal(&["newton", "C", "2", "t^[0,3]"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("nu = [0,3]"), "{out}");
    assert!(out.contains("integral = true"), "{out}");
}

#[test]
fn malformed_input_exits_with_usage_code() {
    assert_eq!(code(&foldgal(&["newton", "A", "2", "t^[oops]"])), 2);
    assert_eq!(code(&foldgal(&["newton", "Q", "2", "id"])), 2);
    assert_eq!(code(&foldgal(&["newton", "A", "2"])), 2);
    assert_eq!(code(&foldgal(&["construct", "--type", "A", "--rank", "2", "--lambda", "3", "--i", "1"])), 2);
}

#[test]
fn newton_json_output() {
    let o = foldgal(&["--format", "json", "newton", "C", "2", "t^[0,3]"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nu"], "[0,3]");
    assert_eq!(v["integral"], true);
}

#[test]
fn construct_then_verify_round_trip() {
    let o = foldgal(&["construct", "--type", "A", "--rank", "2", "--lambda", "3,3", "--i", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["y"], "t^[-2,1]*s1s2");
    assert_eq!(v["nu_prime"], serde_json::json!(["0", "3/2"]));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    std::fs::write(&path, stdout(&o)).unwrap();
    let checked = foldgal(&["verify", "--replay", path.to_str().unwrap()]);
    assert_eq!(code(&checked), 0, "{}", stdout(&checked));
    assert!(stdout(&checked).starts_with("PASS"));

    let mut tampered = v.clone();
    tampered["gallery"]["mask"] = "000000000".into();
    std::fs::write(&path, tampered.to_string()).unwrap();
    assert_eq!(code(&foldgal(&["verify", path.to_str().unwrap()])), 1);
}

#[test]
fn construct_all_lower_targets() {
    let o = foldgal(&["construct", "--type", "A", "--rank", "2", "--lambda", "4,5", "--i", "2", "--all"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().is_some_and(|a| a.len() > 1));
}

#[test]
fn invalid_lower_target_is_reported() {
    let o = foldgal(&["construct", "--type", "A", "--rank", "2", "--lambda", "3,3", "--i", "1", "--nu-prime", "1/2,0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn builtin_checks_pass() {
    let o = foldgal(&["verify"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn enumerate_lists_the_unfolded_gallery() {
    let o = foldgal(&["enumerate", "A", "2", "--type-vec", "0,1,2", "--chimney", "1:id"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.starts_with("000 ")));
}

#[test]
fn enumerate_respects_the_configured_cap() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("foldgal.toml");
    std::fs::write(&cfg, "cap = 4\nworkers = 2\n").unwrap();
    let o = foldgal(&["--config", cfg.to_str().unwrap(), "enumerate", "A", "2", "--type-vec", "0,1,2,0,1", "--chimney", ":w0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));

    std::fs::write(&cfg, "radius = 4\n").unwrap();
    assert_eq!(code(&foldgal(&["--config", cfg.to_str().unwrap(), "verify"])), 2);
}

#[test]
fn nonempty_translation_case_as_csv() {
    let o = foldgal(&["--format", "csv", "nonempty", "A", "2", "t^[3,3]*w0", "t^[1,1]", "--y", "w0"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("x,b,verdict,best_dim,y,witness_mask"), "{out}");
    assert!(out.contains("NONEMPTY"));
}

#[test]
fn nonempty_kottwitz_mismatch() {
    let o = foldgal(&["nonempty", "A", "2", "t^[3,3]*w0", "t^[1,0]"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("EMPTY-on-sheet"));
}

fn render(args: &[&str], out: &Path) -> (i32, String) {
    let mut all = vec!["render"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", out.to_str().unwrap()]);
    let o = foldgal(&all);
    (code(&o), std::fs::read_to_string(out).unwrap_or_default())
}

#[test]
fn render_empty_scene() {
    let dir = tempfile::tempdir().unwrap();
    let (c, svg) = render(&["A", "2"], &dir.path().join("a.svg"));
    assert_eq!(c, 0);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.matches("<line").count() > 10);
    assert!(!svg.contains("polyline"));
}

#[test]
fn render_first_target_gallery_has_two_cusps() {
    let dir = tempfile::tempdir().unwrap();
    let gallery = "id | 0,1,2,1,0,1,2,1,0 | 011000000";
    let args = ["A", "2", "--gallery", gallery, "--chimney", "1:t^[-2,1]*s1s2", "--signs"];
    let (c, svg) = render(&args, &dir.path().join("g.svg"));
    assert_eq!(c, 0);
    assert_eq!(svg.matches(r#"class="fold""#).count(), 2);
    assert!(svg.contains(r#"class="chimney""#));
    let (_, again) = render(&args, &dir.path().join("h.svg"));
    assert_eq!(svg, again);
}

#[test]
fn render_scene_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let scene = serde_json::json!({
        "kind": "B", "rank": 2, "radius": 3,
        "gallery": "id | 1,2,1 | 010",
        "chimney": { "parabolic": [], "y": "w0" },
        "signs": true
    });
    let path = dir.path().join("scene.json");
    std::fs::write(&path, scene.to_string()).unwrap();
    let (c1, from_file) = render(&["B", "2", "--scene", path.to_str().unwrap()], &dir.path().join("a.svg"));
    let (c2, from_flags) = render(
        &["B", "2", "--radius", "3", "--gallery", "id | 1,2,1 | 010", "--chimney", ":w0", "--signs"],
        &dir.path().join("b.svg"),
    );
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(from_file, from_flags);
}

#[test]
fn render_refuses_rank_three() {
    let dir = tempfile::tempdir().unwrap();
    let (c, _) = render(&["A", "3"], &dir.path().join("a.svg"));
    assert_eq!(c, 2);
}
