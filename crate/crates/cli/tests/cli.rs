use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use ttdesign_tools::format::{self, ReportDoc};
use ttdesign_tools::run;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ttdesign").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--output", "json"]);
    let (code, out, err) = call(&a);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn constants_for_the_315_vector_design() {
    let v = json(&[
        "constants",
        "--field",
        "H",
        "--dim",
        "3",
        "--t",
        "5",
        "--n",
        "315",
    ]);
    assert_eq!(v["c_t_fraction"], "1/42");
    assert!((v["bound"].as_f64().unwrap() - 2362.5).abs() < 1e-9);
    assert_eq!(v["b"], "88473600");
}

#[test]
fn verify_mub_fixture() {
    let path = fixture("mub_h2.json");
    let p = path.to_str().unwrap();
    let v = json(&["verify", p, "--t", "3"]);
    assert_eq!(v["is_design"], true);
    let (code, _, _) = call(&["verify", p, "--t", "4", "--expect-design"]);
    assert_eq!(code, 2);
    let (code, _, _) = call(&["verify", p, "--t", "4"]);
    assert_eq!(code, 0);
}

#[test]
fn catalog_matches_fixture() {
    let (code, out, _) = call(&["catalog", "mub", "--field", "H", "--dim", "2"]);
    assert_eq!(code, 0);
    let stored = format::read_configuration(&fixture("mub_h2.json")).unwrap();
    assert_eq!(format::parse_configuration(&out).unwrap(), stored);
}

#[test]
fn hoggar_example_with_decimals_and_tokens() {
    for angles in [
        "0,0.0954915028,0.25,0.5,0.6545084972",
        "0,g-,0.25,0.5,g+",
        "0,g\u{2212},0.25,0.5,g+",
    ] {
        let v = json(&[
            "hoggar",
            "--n",
            "315",
            "--dim",
            "3",
            "--field",
            "H",
            "--t",
            "5",
            "--angles",
            angles,
            "--counts",
            "10,32,160,80,32",
        ]);
        assert_eq!(v["pass"], true);
        let last = &v["checks"][4];
        assert!((last["lhs"].as_f64().unwrap() - 7.5).abs() < 1e-9);
        assert!((last["rhs"].as_f64().unwrap() - 7.5).abs() < 1e-12);
    }
}

#[test]
fn hoggar_rejects_inconsistent_counts() {
    let (code, _, err) = call(&[
        "hoggar", "--n", "10", "--dim", "3", "--field", "H", "--t", "2", "--angles", "0,0.5",
        "--counts", "1,2",
    ]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn validation_errors_exit_one() {
    assert_eq!(
        call(&["constants", "--field", "O", "--dim", "2", "--t", "1"]).0,
        1
    );
    assert_eq!(
        call(&["constants", "--field", "H", "--dim", "2", "--t", "0"]).0,
        1
    );
    assert_eq!(call(&["verify", "/nonexistent.json", "--t", "2"]).0, 1);
    assert_eq!(call(&["frobnicate"]).0, 1);
    assert_eq!(
        call(&[
            "constants",
            "--field",
            "H",
            "--dim",
            "2",
            "--t",
            "1",
            "--bogus"
        ])
        .0,
        1
    );
    let (code, _, err) = call(&["kernel-test", "--field", "H", "--dim", "4", "--t", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("envelope"), "{err}");
    assert_eq!(call(&["catalog", "mub", "--field", "H", "--dim", "3"]).0, 1);
}

#[test]
fn malformed_config_exits_one() {
    let dir = std::env::temp_dir().join(format!("ttdesign-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"field\":\"H\",\"dim\":2,\"vectors\":[[[1,0,0]]]}").unwrap();
    let (code, _, err) = call(&["verify", path.to_str().unwrap(), "--t", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("malformed"), "{err}");
}

#[test]
fn searched_fixtures_verify() {
    let six = format::read_configuration(&fixture("h2_six_lines.json")).unwrap();
    let r = ttdesign::designs::verify(&six, 2, ttdesign::designs::SEARCH_TOL).unwrap();
    assert!(r.is_design && r.bessel_pass && r.hoggar_pass);
    assert!((r.potential - 10.8).abs() < 1e-6);
    let eq = ttdesign::designs::equiangular_check(&six, 1e-5);
    assert!(eq.is_equiangular && eq.meets_sic_bound);

    let seven = format::read_configuration(&fixture("h2_seven.json")).unwrap();
    let r = ttdesign::designs::verify(&seven, 2, ttdesign::designs::SEARCH_TOL).unwrap();
    assert!(!r.is_design);
    assert!(r.potential <= 353.0 / 24.0 + 1e-4);
}

#[test]
fn search_round_trips_through_verify() {
    let dir = std::env::temp_dir().join(format!("ttdesign-search-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("best.json");
    let traj = dir.join("traj.csv");
    let args = [
        "search",
        "--field",
        "C",
        "--dim",
        "2",
        "--n",
        "4",
        "--t",
        "2",
        "--restarts",
        "3",
        "--seed",
        "5",
        "--save",
        cfg.to_str().unwrap(),
        "--emit-trajectory",
        traj.to_str().unwrap(),
    ];
    let a = json(&args);
    let b = json(&args);
    assert_eq!(a, b, "identical invocations must give identical output");
    let report: ReportDoc = serde_json::from_value(a["report"].clone()).unwrap();
    let v = json(&["verify", cfg.to_str().unwrap(), "--t", "2", "--tol", "1e-6"]);
    assert!((v["potential"].as_f64().unwrap() - report.potential).abs() < 1e-12);
    let csv = std::fs::read_to_string(&traj).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("iteration,potential"));
    let values: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn json_schema_is_stable() {
    let p = fixture("mub_h2.json");
    let a = json(&["verify", p.to_str().unwrap(), "--t", "2"]);
    let keys: Vec<&str> = a.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "is_design",
        "potential",
        "bound",
        "per_r",
        "spectrum",
        "bessel_pass",
        "hoggar_pass",
    ] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert_eq!(a, json(&["verify", p.to_str().unwrap(), "--t", "2"]));
}

#[test]
fn kernel_and_dim_commands() {
    let v = json(&[
        "kernel-test",
        "--field",
        "C",
        "--dim",
        "2",
        "--t",
        "2",
        "--pairs",
        "20",
    ]);
    assert!(v["apolar_max_relative_error"].as_f64().unwrap() < 1e-9);
    assert!(v["plane_wave_max_coefficient_error"].as_f64().unwrap() < 1e-10);
    let v = json(&["dim", "--field", "H", "--dim", "2", "--t", "2", "--by-rank"]);
    assert_eq!(v["dim_homtt"], "20");
    assert_eq!(v["rank"], 20);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ttdesign");
    let p = fixture("mub_h2.json");
    let ok = Command::new(bin)
        .args(["verify", p.to_str().unwrap(), "--t", "3", "--expect-design"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let fail = Command::new(bin)
        .args(["verify", p.to_str().unwrap(), "--t", "4", "--expect-design"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(2));
    let bad = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
