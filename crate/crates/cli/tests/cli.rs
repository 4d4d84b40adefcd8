use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn cmx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmx"))
        .args(args)
        .env_remove("CMX_TOL")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tempdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cmx-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn info_reports_cross_betti_vector() {
    let o = cmx(&[
        "info",
        &fixture("fixture_a.json"),
        "--pair",
        "1,2",
        "--class",
        "0,0",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("beta[1-2](0,0)=[1, 0]"), "{out}");
    assert!(out.contains("beta_0=1"));
}

#[test]
fn filling_the_cone_clears_the_cross_betti_number() {
    let o = cmx(&[
        "info",
        &fixture("fixture_a_filled.json"),
        "--pair",
        "1,2",
        "--class",
        "0,0",
    ]);
    assert!(
        stdout(&o).contains("beta[1-2](0,0)=[0, 0]"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn validation_failure_names_the_cell() {
    let o = cmx(&["validate", &fixture("broken_dangling.json")]);
    assert_eq!(o.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["status"], "invalid");
    assert_eq!(report["error"], "dangling_face");
    assert_eq!(report["cell"], "X1-2/c1,0/0");
}

#[test]
fn valid_complex_passes() {
    let o = cmx(&["validate", &fixture("fig1.json")]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["status"], "ok");
    assert_eq!(report["layers"], 3);
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let args = [
        "sweep",
        "--snr",
        "0:10:20",
        "--trials",
        "100",
        "--seed",
        "7",
        "--cfg-seed",
        "7",
    ];
    let a = cmx(&args);
    let b = cmx(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "snr_db,mean_nmse,std_nmse,trials");
    assert_eq!(lines.len(), 4);
    let means: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(means[0] > means[1] && means[1] > means[2]);
}

#[test]
fn exit_codes() {
    assert_eq!(
        cmx(&["info", &fixture("fixture_a.json"), "--bogus"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        cmx(&["info", "/nonexistent/complex.json"]).status.code(),
        Some(66)
    );
    assert_eq!(
        cmx(&["info", &fixture("fixture_a.json"), "--pair", "1,3"])
            .status
            .code(),
        Some(65)
    );
    assert_eq!(
        cmx(&[
            "boundary",
            &fixture("fig1.json"),
            "--pair",
            "2,3",
            "--class",
            "2,0"
        ])
        .status
        .code(),
        Some(65)
    );
    assert_eq!(
        cmx(&[
            "spectrum",
            &fixture("fixture_a.json"),
            "--pair",
            "1,2",
            "--view",
            "3"
        ])
        .status
        .code(),
        Some(65)
    );
    assert_eq!(cmx(&["--help"]).status.code(), Some(0));
    let bad_tol = Command::new(env!("CARGO_BIN_EXE_cmx"))
        .args(["info", &fixture("fixture_a.json")])
        .env("CMX_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(bad_tol.status.code(), Some(64));
}

#[test]
fn tolerance_flag_beats_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cmx"))
        .args([
            "spectrum",
            &fixture("fixture_a.json"),
            "--pair",
            "1,2",
            "--tol",
            "1e-8",
            "--format",
            "json",
        ])
        .env("CMX_TOL", "10")
        .output()
        .unwrap();
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["tolerance"], 1e-8);
    assert_eq!(report["kernel_dimension"], 1);
}

#[test]
fn synth_filter_and_hubs_pipeline() {
    let d = tempdir("pipeline");
    let complex = d.join("c.json").display().to_string();
    let truth = d.join("t.csv").display().to_string();
    let signal = d.join("y.csv").display().to_string();
    let o = cmx(&[
        "synth",
        "--cfg-seed",
        "3",
        "--seed",
        "5",
        "--out",
        &complex,
        "--truth",
        &truth,
        "--snr",
        "10",
        "--signal",
        &signal,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(cmx(&["validate", &complex]).status.success());

    let out = d.join("filtered");
    let o = cmx(&[
        "filter",
        &complex,
        "--signal",
        &truth,
        "--truth",
        &truth,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let nmse: f64 = stdout(&o)
        .lines()
        .find_map(|l| l.strip_prefix("nmse="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(nmse <= 1e-10);
    for name in ["gradient.csv", "curl.csv", "harmonic.csv", "summary.json"] {
        assert!(out.join(name).exists(), "{name}");
    }

    let o = cmx(&["hubs", &complex, "--signal", &signal]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = text.lines();
    assert!(rows
        .next()
        .unwrap()
        .starts_with("rank,node_id,label,harmonic_energy"));
    let energies: Vec<f64> = rows
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(!energies.is_empty());
    assert!(energies.windows(2).all(|w| w[0] >= w[1]));

    // a signal from another complex is a selector mismatch
    let o = cmx(&[
        "hubs",
        &fixture("fixture_a.json"),
        "--pair",
        "1,2",
        "--signal",
        &signal,
    ]);
    assert_eq!(o.status.code(), Some(65));
    std::fs::remove_dir_all(d).unwrap();
}

#[test]
fn boundary_triplets_quote_ids() {
    let o = cmx(&[
        "boundary",
        &fixture("fixture_a_filled.json"),
        "--pair",
        "1,2",
        "--class",
        "1,0",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut signs = Vec::new();
    for rec in r.records() {
        let rec = rec.unwrap();
        assert!(rec[0].starts_with("X1-2/c0,0/"));
        assert_eq!(&rec[1], "X1-2/c1,0/0");
        signs.push(rec[2].parse::<i8>().unwrap());
    }
    signs.sort();
    assert_eq!(signs, [-1, 1]);
}
