mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{data_dir, mutate, random_record, Mutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn narrowline(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_narrowline"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = data_dir().join("nu3_synthetic.par");
    let ok = narrowline(
        &["validate", "--linelist", fixture.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("101 lines, 0 fatal"));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut records: Vec<String> = (0..5).map(|_| random_record(&mut rng)).collect();
    records[2] = mutate(&records[2], Mutation::NonNumeric, &mut rng);
    let bad = dir.path().join("bad.par");
    std::fs::write(&bad, records.join("\n")).unwrap();
    let one_bad = narrowline(&["validate", "--linelist", "bad.par"], dir.path());
    assert_eq!(one_bad.status.code(), Some(1));
    assert!(
        stderr(&one_bad).contains("record 3: fatal"),
        "{}",
        stderr(&one_bad)
    );
    assert!(stdout(&one_bad).contains("4 lines, 1 fatal"));

    let missing = narrowline(&["validate", "--linelist", "nope.par"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn compute_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(&["compute", "comb_demo", "--cutoff", "600"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("comb_demo.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(
        rows.next().unwrap(),
        "omega,alpha_lorentz,alpha_narrowed,alpha_effective,gamma_factor"
    );
    // 2300..2400 step 0.05
    assert_eq!(rows.count(), 2001);

    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("comb_demo.params.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["scenario"]["engine"]["cutoff"], 600.0);
    assert_eq!(sidecar["overrides"][0], "cutoff=600");
    assert_eq!(
        sidecar["scenario"]["conditions"]["broadener"]["partial_pressure"],
        135.8
    );
}

#[test]
fn thread_count_does_not_change_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "2", "8"] {
        let name = format!("t{threads}.csv");
        let o = narrowline(
            &["compute", "comb_demo", "--threads", threads, "-o", &name],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push(std::fs::read(dir.path().join(&name)).unwrap());
        let sidecar = std::fs::read(dir.path().join(format!("t{threads}.params.json"))).unwrap();
        outputs.push(sidecar);
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[0], outputs[4]);
    // Identical sidecars for identical outputs.
    assert_eq!(outputs[1], outputs[3]);
    assert_eq!(outputs[1], outputs[5]);
}

#[test]
fn rerunning_a_sidecar_scenario_reproduces_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(
        &[
            "compute",
            "comb_demo",
            "--set",
            "pressure=300",
            "--grid-step",
            "0.1",
            "-o",
            "a.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.params.json")).unwrap())
            .unwrap();
    std::fs::write(
        dir.path().join("echo.json"),
        sidecar["scenario"].to_string(),
    )
    .unwrap();
    let again = narrowline(&["compute", "echo.json", "-o", "b.csv"], dir.path());
    assert_eq!(again.status.code(), Some(0), "{}", stderr(&again));
    assert_eq!(
        std::fs::read(dir.path().join("a.csv")).unwrap(),
        std::fs::read(dir.path().join("b.csv")).unwrap()
    );
}

#[test]
fn unknown_override_lists_valid_keys() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(&["compute", "comb_demo", "--set", "presure=10"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("presure"), "{err}");
    assert!(
        err.contains("valid keys") && err.contains("pressure") && err.contains("cutoff"),
        "{err}"
    );
}

#[test]
fn external_scenario_needs_a_linelist() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(&["compute", "nu3_135atm"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--linelist"));

    let fixture = data_dir().join("nu3_synthetic.par");
    let o = narrowline(
        &[
            "compute",
            "nu3_135atm",
            "--linelist",
            fixture.to_str().unwrap(),
            "--format",
            "json",
            "-o",
            "nu3.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("nu3.json")).unwrap())
            .unwrap();
    assert_eq!(v["omega"].as_array().unwrap().len(), 3001);
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("nu3.params.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["linelist"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn sweep_writes_one_file_per_pressure_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(
        &[
            "sweep",
            "comb_demo",
            "--pressures",
            "50,300",
            "--grid-step",
            "0.5",
            "-o",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert!(out.join("comb_demo_p50.csv").exists());
    assert!(out.join("comb_demo_p300.csv").exists());
    assert!(out.join("comb_demo_p300.params.json").exists());
    let summary = std::fs::read_to_string(out.join("comb_demo_sweep.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);

    // A one-point sweep is the same computation as `compute`.
    let one = narrowline(
        &["sweep", "comb_demo", "--pressures", "300", "-o", "single"],
        dir.path(),
    );
    assert_eq!(one.status.code(), Some(0));
    let c = narrowline(
        &[
            "compute",
            "comb_demo",
            "--set",
            "pressure=300",
            "-o",
            "direct.csv",
        ],
        dir.path(),
    );
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(
        std::fs::read(dir.path().join("single/comb_demo_p300.csv")).unwrap(),
        std::fs::read(dir.path().join("direct.csv")).unwrap()
    );
}

#[test]
fn relative_sweep_ratio_rises_through_critical_pressure() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(
        &["sweep", "comb_demo", "--pressures", "0.5,1,2", "--relative"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = std::fs::read_to_string(dir.path().join("comb_demo_sweep.csv")).unwrap();
    let ratios: Vec<f64> = summary
        .lines()
        .skip(1)
        .map(|r| r.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 3);
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]), "{ratios:?}");
}

#[test]
fn compare_reports_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(&["compute", "comb_demo", "-o", "ref.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("ref.csv")).unwrap();
    let two_col: String = csv
        .lines()
        .map(|r| r.split(',').take(3).collect::<Vec<_>>())
        .map(|f| format!("{},{}\n", f[0], f[2]))
        .collect();
    std::fs::write(dir.path().join("narrowed.csv"), two_col).unwrap();
    let c = narrowline(
        &["compare", "comb_demo", "--reference", "narrowed.csv"],
        dir.path(),
    );
    assert_eq!(c.status.code(), Some(0), "{}", stderr(&c));
    assert!(stdout(&c).contains("max |rel dev| = 0e0"), "{}", stdout(&c));
}

#[test]
fn scenario_dump_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = narrowline(
        &[
            "scenario",
            "dump",
            "3nu3_645atm",
            "--set",
            "temperature=300",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(dir.path().join("s.toml"), stdout(&o)).unwrap();
    let again = narrowline(&["scenario", "dump", "s.toml"], dir.path());
    assert_eq!(stdout(&again), stdout(&o));
    assert!(stdout(&o).contains("temperature = 300.0"));

    let list = narrowline(&["scenario", "list"], dir.path());
    for name in [
        "nu3_135atm",
        "nu3_657atm",
        "nu2Q_49atm",
        "nu2Q_9.85atm",
        "3nu3_131atm",
        "3nu3_645atm",
        "comb_demo",
    ] {
        assert!(stdout(&list).contains(name), "{name}");
    }
}

#[test]
fn bad_flag_values_are_parameter_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["compute", "comb_demo", "--regime", "sideways"],
        vec!["compute", "comb_demo", "--window", "2400:2300"],
        vec!["compute", "comb_demo", "--cutoff", "-1"],
        vec!["compute", "no_such_scenario"],
        vec!["sweep", "comb_demo", "--pressures", "0"],
    ] {
        let o = narrowline(&args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
}
