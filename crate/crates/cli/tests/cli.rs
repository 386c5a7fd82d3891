use std::path::Path;
use std::process::{Command, Output};

fn entgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entgeo")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_run_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("hull");
    let o = entgeo(&["--seed", "7", "gen", "hull", "--n", "300", "--blocks", "5", "--out", s(&inst)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let meta = inst.join("instance.meta");

    let o = entgeo(&["verify", "--problem", "hull", s(&meta)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("\"respectful\":true"));

    let result = dir.path().join("hull.json");
    let o = entgeo(&["run", "--algo", "hull2d", s(&meta), "--out", s(&result), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    assert!(csv.starts_with("instance,algorithm,n,"));
    assert!(csv.lines().nth(1).unwrap().contains(",hull2d,300,"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
    assert!(v["vertices"].as_array().unwrap().len() >= 3);
}

#[test]
fn wrong_certificate_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("m");
    assert_eq!(code(&entgeo(&["gen", "maxima", "--n", "64", "--blocks", "4", "--out", s(&inst)])), 0);
    let o = entgeo(&["verify", "--problem", "hull", s(&inst.join("instance.meta"))]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bad_input_exits_two_and_precondition_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2\n3 x\n").unwrap();
    let o = entgeo(&["run", "--algo", "maxima2d", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    // one chain crossing another
    let chains = dir.path().join("chains.txt");
    std::fs::write(&chains, "0 0\n10 10\n\n0 10\n10 0\n").unwrap();
    assert_eq!(code(&entgeo(&["run", "--algo", "envelope", s(&chains)])), 3);

    assert_eq!(code(&entgeo(&["gen", "chains", "--rho", "9", "--n", "4", "--out", s(dir.path())])), 3);
}

#[test]
fn every_generator_feeds_its_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, algo, extra) in [
        ("circle", "hull2d", vec!["--n", "100"]),
        ("chains", "envelope", vec!["--n", "200", "--rho", "6"]),
        ("scene", "visibility", vec!["--holes", "5"]),
        ("sequence", "sort", vec!["--n", "100", "--blocks", "3"]),
        ("ball", "hull3d", vec!["--n", "300"]),
        ("dome", "hull3d", vec!["--n", "50", "--clusters", "100,100"]),
    ] {
        let out = dir.path().join(kind);
        let mut args = vec!["gen", kind, "--out", s(&out)];
        args.extend(extra);
        let o = entgeo(&args);
        assert_eq!(code(&o), 0, "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let o = entgeo(&["run", "--algo", algo, s(&out.join("instance.meta"))]);
        assert_eq!(code(&o), 0, "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["record"]["work"].as_u64().unwrap() > 0, "{kind}");
    }
}

#[test]
fn bench_csv_is_byte_stable() {
    let args = ["--seed", "2", "bench", "--suite", "sorted", "--algo", "maxima2d", "--format", "csv"];
    let a = entgeo(&args);
    let b = entgeo(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(String::from_utf8_lossy(&a.stderr).contains("maxima2d: 7 cases"));
}
