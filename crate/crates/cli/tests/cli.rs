use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qtherm_cli::config;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qtherm"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Header comment lines and the parsed records of a CSV file.
fn read_csv(text: &str) -> (Vec<String>, Vec<String>, Vec<csv::StringRecord>) {
    let comments = text.lines().take_while(|l| l.starts_with('#')).map(|l| l.to_string()).collect();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(|s| s.to_string()).collect();
    let recs = rdr.records().map(|r| r.unwrap()).collect();
    (comments, header, recs)
}

fn num(r: &csv::StringRecord, i: usize) -> f64 {
    r[i].parse().unwrap()
}

fn header_hash(comments: &[String]) -> String {
    let first = &comments[0];
    first.split("config_hash=").nth(1).unwrap().trim().to_string()
}

const OTTO: &str = r#"
command = "otto"
[otto]
t_h = 1.0
t_c = 0.5
spec_h = { kind = "harmonic", omega = 1.0 }
spec_c = { kind = "harmonic", omega = 0.6 }
"#;

#[test]
fn otto_row_has_efficiency_one_minus_q() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "otto.toml", OTTO);
    let out = dir.path().join("otto.csv");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let (comments, header, recs) = read_csv(&text);
    assert_eq!(header, ["W", "Q_h", "Q_c", "eta", "mode"]);
    assert_eq!(recs.len(), 1);
    let r = &recs[0];
    assert!((num(r, 0) + num(r, 1) + num(r, 2)).abs() < 1e-10);
    assert!((num(r, 3) - 0.4).abs() < 1e-9);
    assert_eq!(&r[4], "engine");
    assert!(comments[0].starts_with("# qtherm otto config_hash="));
}

#[test]
fn header_hash_matches_canonical_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "otto.toml", OTTO);
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--set", "otto.t_h=1.25"]);
    assert!(o.status.success());
    let (comments, _, _) = read_csv(&String::from_utf8(o.stdout).unwrap());
    let parsed = config::parse(OTTO, &["otto.t_h=1.25".to_string()]).unwrap();
    assert_eq!(header_hash(&comments), parsed.hash());
    // The output table does not enter the hash.
    let moved = config::parse(OTTO, &["otto.t_h=1.25".into(), "output.format=\"json\"".into()]).unwrap();
    assert_eq!(moved.hash(), parsed.hash());
    let other = config::parse(OTTO, &[]).unwrap();
    assert_ne!(other.hash(), parsed.hash());
}

#[test]
fn override_reaches_the_computation() {
    let o = |set: &str| {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write(dir.path(), "otto.toml", OTTO);
        let o = run(&["run", "--config", cfg.to_str().unwrap(), "--set", set]);
        assert!(o.status.success());
        let (_, _, recs) = read_csv(&String::from_utf8(o.stdout).unwrap());
        num(&recs[0], 3)
    };
    // Homogeneous scaling: the efficiency only sees the frequency ratio.
    assert!((o("otto.spec_c.omega=0.8") - 0.2).abs() < 1e-9);
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("corr.toml");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["run", "--config", cfg.to_str().unwrap(), "--out", p.to_str().unwrap(), "--threads", "2"]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "command = \"otto\"\n[otto\nt_h = 1");
    let out = dir.path().join("never.csv");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn unknown_key_exits_2_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "otto.toml", OTTO);
    let out = dir.path().join("never.csv");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--set", "otto.t_hot=2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("t_hot"));
    assert!(!out.exists());

    let foreign = write(dir.path(), "mixed.toml", &format!("{OTTO}\n[corr]\nchi_points = 3\n"));
    let o = run(&["run", "--config", foreign.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corr"));
}

#[test]
fn invalid_parameter_exits_3_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "otto.toml", OTTO);
    let out = dir.path().join("never.csv");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--set", "otto.t_h=0.2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("t_h") && err.contains("otto"), "{err}");
    assert!(!out.exists());
}

#[test]
fn non_convergence_exits_4() {
    // A truncation budget of two levels cannot hold the Boltzmann tail.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "otto.toml", OTTO);
    let o = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "otto.truncation={ tail_tol = 1e-12, max_levels = 2 }",
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "otto.toml", OTTO);
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["command"], "otto");
    let parsed = config::parse(OTTO, &[]).unwrap();
    assert_eq!(v["meta"]["config_hash"], parsed.hash());
    let eta = v["rows"][0]["eta"].as_f64().unwrap();
    assert!((eta - 0.4).abs() < 1e-9);
}

#[test]
fn every_sample_config_runs_and_reparses() {
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        // The map is shrunk to keep this quick; the sweeps run at their sample sizes.
        let sets: Vec<String> = if p.ends_with("map2d.toml") { vec!["map2d.n=8".into()] } else { vec![] };
        let mut args = vec!["run".to_string(), "--config".into(), p.to_str().unwrap().into()];
        for s in &sets {
            args.extend(["--set".to_string(), s.clone()]);
        }
        let o = bin().args(&args).output().unwrap();
        assert!(o.status.success(), "{}: {}", p.display(), String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(!text.contains('\r'));
        let (comments, header, recs) = read_csv(&text);
        assert!(!recs.is_empty(), "{}", p.display());
        assert!(recs.iter().all(|r| r.len() == header.len()));
        let cfg = config::load(&p, &sets).unwrap();
        assert_eq!(header_hash(&comments), cfg.hash(), "{}", p.display());
    }
}

#[test]
fn signature_flags_small_action_only_when_coherent() {
    let cfg = configs_dir().join("signature_nv.toml");
    let o = run(&["run", "--config", cfg.to_str().unwrap(), "--set", "signature.points=10"]);
    assert!(o.status.success());
    let (_, header, recs) = read_csv(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(
        header,
        [
            "tau_cyc",
            "s_bar",
            "P_cont",
            "P_2st",
            "P_4st",
            "P_stoch_bound",
            "violation_flag",
            "P_2st_dephased",
            "dephased_violation_flag"
        ]
    );
    let s_bar: Vec<f64> = recs.iter().map(|r| num(r, 1)).collect();
    let smallest = s_bar.iter().cloned().fold(f64::INFINITY, f64::min);
    let small = recs.iter().find(|r| num(r, 1) == smallest).unwrap();
    assert_eq!(&small[6], "1");
    assert!(recs.iter().all(|r| &r[8] == "0"));
}

#[test]
fn figures_write_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    for id in ["fig1", "fig4-hc", "fig5b"] {
        let o = run(&["figure", id, "--out", d]);
        assert!(o.status.success(), "{id}");
    }
    let read = |name: &str| read_csv(&std::fs::read_to_string(dir.path().join(name)).unwrap());

    let (c, h, recs) = read("fig1.csv");
    assert!(c[0].starts_with("# qtherm figure fig1 config_hash="));
    assert!(c.iter().any(|l| l.starts_with("# units:")));
    assert_eq!(h, ["x", "P_classical_low_T", "P_quantum_low_T", "P_classical_high_T", "P_quantum_high_T"]);
    // The quantum marginal is wider at low temperature and close to the classical one at high.
    let mid = &recs[recs.len() / 2];
    assert!(num(mid, 1) > num(mid, 2));
    assert!((num(mid, 3) - num(mid, 4)).abs() / num(mid, 3) < 0.02);

    let (_, h, recs) = read("fig4_hc.csv");
    assert_eq!(h, ["T", "Cv_HO_quantum", "Cv_HO_classical", "Cv_box_quantum", "Cv_box_classical"]);
    assert!(recs.iter().all(|r| num(r, 1) <= 1.0 + 1e-12));

    let (_, h, recs) = read("fig5b.csv");
    assert_eq!(h, ["tau_cyc", "s_bar", "P_cont", "P_2st", "P_4st"]);
    let first = &recs[0];
    assert!(((num(first, 3) - num(first, 2)) / num(first, 2)).abs() < 1e-6);
}

#[test]
fn fig3_writes_maps_and_lines() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figure", "fig3", "--out", dir.path().to_str().unwrap(), "--grid", "12"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("fig3_maps.csv")).unwrap();
    let (_, h, recs) = read_csv(&text);
    assert_eq!(h, ["lx_h", "ly_h", "eta_ratio_quantum", "eta_ratio_classical_limit", "eta_ratio_ideal_gas"]);
    assert_eq!(recs.len(), 144);
    let text = std::fs::read_to_string(dir.path().join("fig3_lines.csv")).unwrap();
    let (_, _, recs) = read_csv(&text);
    let best =
        recs.iter().filter(|r| &r[0] == "area_preserving" && &r[4] != "NA").map(|r| num(r, 4)).fold(0.0, f64::max);
    assert!(best > 0.9);
}

#[test]
fn unknown_figure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figure", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_without_baseline_reports_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.json");
    let missing = dir.path().join("nope.json");
    let o = run(&[
        "bench",
        "--filter",
        "nv",
        "--reps",
        "5",
        "--baseline",
        missing.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["cases"][0]["name"], "expm_nv_liouville");
    assert!(v["comparisons"].is_null());

    // Against itself the report passes the gate unless timing noise exceeds it.
    let o = run(&["bench", "--filter", "nv", "--reps", "5", "--baseline", out.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0) | Some(5)));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["comparisons"].as_array().unwrap().len(), 1);
}

#[test]
fn too_few_bench_reps_is_a_validation_error() {
    let o = run(&["bench", "--filter", "nv", "--reps", "2"]);
    assert_eq!(o.status.code(), Some(3));
}
