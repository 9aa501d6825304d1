use std::path::{Path, PathBuf};

use meshplace::cli::run;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("meshplace").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn place_square_reaches_centre() {
    let (code, out, _) = call(&["place", "--patch", &fixture("square.json"), "--criterion", "min-angle"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let p = v["point"].as_array().unwrap();
    assert!(p.iter().all(|c| c.as_f64().unwrap().abs() < 1e-6), "{out}");
    assert!((v["objective"].as_f64().unwrap() + std::f64::consts::FRAC_PI_4).abs() < 1e-8);
}

#[test]
fn quality_equilateral() {
    let (code, out, _) = call(&[
        "quality",
        "--node",
        &fixture("equilateral.node"),
        "--ele",
        &fixture("equilateral.ele"),
        "--criterion",
        "min-angle",
    ]);
    assert_eq!(code, 0);
    let min = json(&out)["criteria"][0]["min"].as_f64().unwrap();
    assert!((min - std::f64::consts::FRAC_PI_3).abs() < 1e-4);
}

#[test]
fn quality_csv() {
    let (code, out, _) = call(&[
        "quality",
        "--node",
        &fixture("unit_square.node"),
        "--ele",
        &fixture("unit_square.ele"),
        "--criterion",
        "min-angle,inradius",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().nth(1).unwrap().starts_with("min-angle,maximize_min,2,"));
}

fn smooth_args(tmp: &Path, criterion: &str) -> Vec<String> {
    vec![
        "smooth".into(),
        "--node".into(),
        fixture("grid_perturbed.node"),
        "--ele".into(),
        fixture("grid_perturbed.ele"),
        "--criterion".into(),
        criterion.into(),
        "--out".into(),
        tmp.join("out").display().to_string(),
    ]
}

fn call_owned(args: &[String]) -> (i32, String, String) {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    call(&refs)
}

#[test]
fn smooth_writes_mesh_and_stats() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, out, err) = call_owned(&smooth_args(tmp.path(), "min-angle"));
    assert_eq!(code, 0, "{err}");
    let stats = json(&out);
    assert!(stats["moves_accepted"].as_u64().unwrap() > 0);
    let saved = std::fs::read_to_string(tmp.path().join("out.stats.json")).unwrap();
    assert_eq!(saved, out);
    let node: PathBuf = tmp.path().join("out.node");
    let ele: PathBuf = tmp.path().join("out.ele");
    let m = meshplace::io::read_mesh(&node, &ele).unwrap();
    assert!(meshplace::mesh::validate(&m).is_valid());
}

#[test]
fn smooth_max_angle_routes_to_special_solver() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, err) = call_owned(&smooth_args(tmp.path(), "max-angle"));
    assert_eq!(code, 0, "{err}");
}

#[test]
fn smooth_mixed_convexity_is_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let (code, _, err) = call_owned(&smooth_args(tmp.path(), "max-angle,min-angle"));
    assert_eq!(code, 2);
    assert!(err.contains("max-angle"), "{err}");
}

#[test]
fn laplacian_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let mut a = smooth_args(tmp.path(), "min-angle");
    a.push("--laplacian".into());
    assert_eq!(call_owned(&a).0, 0);
    a.push("--unguarded-laplacian".into());
    assert_eq!(call_owned(&a).0, 2);
}

#[test]
fn unknown_criterion_lists_names() {
    let (code, _, err) = call(&["place", "--patch", &fixture("square.json"), "--criterion", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("min-angle") && err.contains("solid-angle-exterior"), "{err}");
}

#[test]
fn validate_exit_codes() {
    let (code, out, _) =
        call(&["validate", "--node", &fixture("octahedron.node"), "--ele", &fixture("octahedron.ele")]);
    assert_eq!(code, 0);
    assert!(json(&out)["violations"].as_array().unwrap().is_empty());
    let (code, out, _) = call(&["validate", "--node", &fixture("tangled.node"), "--ele", &fixture("tangled.ele")]);
    assert_eq!(code, 1);
    assert!(!json(&out)["violations"].as_array().unwrap().is_empty());
}

#[test]
fn parse_failure_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let node = tmp.path().join("bad.node");
    std::fs::write(&node, "2 2 0 0\n1 0 0\n").unwrap();
    let (code, _, err) = call(&["validate", "--node", &node.display().to_string(), "--ele", &fixture("unit_square.ele")]);
    assert_eq!(code, 1);
    assert!(err.contains("bad.node"), "{err}");
    let (code, _, _) = call(&["validate", "--node", "/nonexistent.node", "--ele", "/nonexistent.ele"]);
    assert_eq!(code, 1);
}

#[test]
fn missing_subcommand_is_usage_error() {
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn place_agrees_with_oracle_on_fixtures() {
    let cases = [
        ("square.json", "min-angle"),
        ("hexagon.json", "min-angle"),
        ("arrow.json", "min-angle"),
        ("arrow.json", "inradius"),
        ("quad_star.json", "quad-containing-circle"),
        ("quad_star.json", "min-angle"),
        ("octahedron.json", "volume-max"),
        ("octahedron.json", "containing-sphere"),
    ];
    for (f, c) in cases {
        let (code, place, _) = call(&["place", "--patch", &fixture(f), "--criterion", c]);
        assert_eq!(code, 0);
        let (code, oracle, _) = call(&["oracle", "--patch", &fixture(f), "--criterion", c, "--levels", "6"]);
        assert_eq!(code, 0);
        let (p, o) = (json(&place)["objective"].as_f64().unwrap(), json(&oracle)["objective"].as_f64().unwrap());
        assert!(p <= o + 1e-6 * (1.0 + o.abs()), "{f} {c}: place {p} oracle {o}");
        assert!(o - p < 1e-4 * (1.0 + o.abs()), "{f} {c}: place {p} oracle {o}");
    }
}

#[test]
fn expected_blocks_hold() {
    for f in ["square.json", "hexagon.json", "octahedron.json"] {
        let fx = meshplace::io::PatchFixture::load(Path::new(&fixture(f))).unwrap();
        let e = fx.expected.clone().unwrap();
        let (code, out, _) = call(&["place", "--patch", &fixture(f), "--criterion", &e.criterion]);
        assert_eq!(code, 0);
        let v = json(&out);
        assert!((v["objective"].as_f64().unwrap() - e.objective).abs() < e.tol, "{f}");
        for (a, b) in v["point"].as_array().unwrap().iter().zip(e.point.coords()) {
            assert!((a.as_f64().unwrap() - b).abs() < e.tol, "{f}");
        }
    }
}

#[test]
fn outputs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let mut a = smooth_args(tmp.path(), "min-angle");
    a.extend(["--seed".to_string(), "3".to_string()]);
    let first = call_owned(&a);
    let node1 = std::fs::read(tmp.path().join("out.node")).unwrap();
    let second = call_owned(&a);
    let node2 = std::fs::read(tmp.path().join("out.node")).unwrap();
    assert_eq!(first, second);
    assert_eq!(node1, node2);
}
