use std::path::Path;
use std::process::{Command, Output};

use noisy_grover::analysis::grid_threshold;
use noisy_grover::analysis::SweepPoint;
use noisy_grover::cli::{
    cmd_sweep, cmd_threshold, exit, CliError, ExperimentConfig, QubitRange,
};
use noisy_grover::channel::NoiseKind;
use noisy_grover::error::Error;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_noisy-grover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn pmin_csv_golden() {
    assert_eq!(stdout(&["pmin", "--qubits", "3..8"]), golden("pmin_3_8.csv"));
}

#[test]
fn pmin_json_golden() {
    assert_eq!(
        stdout(&["pmin", "--qubits", "1..4", "--format", "json"]),
        golden("pmin_1_4.json")
    );
}

#[test]
fn threshold_three_qubits_golden() {
    assert_eq!(stdout(&["threshold", "--qubits", "3"]), golden("threshold_3.csv"));
}

#[test]
fn pmin_single_size_and_custom_confidence() {
    let text = stdout(&["pmin", "--qubits", "3"]);
    assert_eq!(text.lines().nth(1), Some("3,8,,,,0.950000,1,0.950000"));
    let text = stdout(&["pmin", "--qubits", "8", "--confidence", "0.99"]);
    assert_eq!(text.lines().nth(1), Some("8,256,,,,0.369043,10,0.990000"));
}

#[test]
fn sweep_six_qubits_all_families() {
    let mut config = ExperimentConfig::new(QubitRange { min: 6, max: 6 }, NoiseKind::ALL.to_vec());
    config.grid = "0:1:0.01".parse().unwrap();
    let table = cmd_sweep(&config).unwrap();
    assert_eq!(table.rows.len(), 606);
    for row in &table.rows {
        let p = row.p.unwrap();
        assert!((0.0..=1.0).contains(&p));
        assert!((0.0..=1.0).contains(&row.alpha.unwrap()));
        if row.alpha == Some(0.0) {
            assert!((p - 0.996_586).abs() < 5e-7);
        }
    }
}

#[test]
fn sweep_two_qubits_is_exact_without_noise() {
    let text = stdout(&["sweep", "--qubits", "2", "--alpha-grid", "0:0:0.1"]);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[3], "0.00000");
        assert_eq!(fields[4], "1.00000");
    }
}

#[test]
fn sweep_writes_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let out = run(&[
            "sweep", "--qubits", "3..4", "--alpha-grid", "0:1:0.1", "--output",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 2 * 6 * 11);
}

#[test]
fn marked_override_is_used() {
    let default = stdout(&["sweep", "--qubits", "4", "--family", "depolarizing", "--alpha-grid", "0.2:0.2:1"]);
    let moved = stdout(&[
        "sweep", "--qubits", "4", "--family", "depolarizing", "--alpha-grid", "0.2:0.2:1",
        "--marked", "3",
    ]);
    // Depolarizing noise is covariant under relabelling, so the outcome is unchanged.
    assert_eq!(default, moved);
    let amp = |marked: &str| {
        stdout(&[
            "sweep", "--qubits", "4", "--family", "amplitude-damping", "--alpha-grid",
            "0.2:0.2:1", "--marked", marked,
        ])
    };
    // 3 and 12 differ only by a qubit permutation; 0 and 15 differ in excitation count.
    assert_eq!(amp("3"), amp("12"));
    assert_ne!(amp("0"), amp("15"));
}

#[test]
fn invalid_configuration_exits_with_two() {
    let cases: &[&[&str]] = &[
        &["pmin", "--qubits", "0..3"],
        &["pmin", "--qubits", "3..13"],
        &["pmin", "--confidence", "1.5"],
        &["sweep", "--family", "depolarising"],
        &["sweep", "--alpha-grid", "0:1:0"],
        &["sweep", "--alpha-grid", "0:1"],
        &["sweep", "--qubits", "3", "--marked", "8"],
        &["threshold", "--resolution", "0"],
        &["bogus"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(exit::INVALID_CONFIG as i32), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn numerical_failures_map_to_exit_three() {
    let err = CliError::Numerical(Error::NotHermitian { deviation: 1.0 });
    assert_eq!(err.exit_code(), exit::NUMERICAL);
    assert_eq!(CliError::Config(Error::InvalidConfig("x".into())).exit_code(), exit::INVALID_CONFIG);
}

#[test]
fn json_sweep_mirrors_csv_columns() {
    let text = stdout(&[
        "sweep", "--qubits", "4", "--family", "phase-flip", "--alpha-grid", "0:0.02:0.01",
        "--format", "json",
    ]);
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["family"], "phase-flip");
    assert_eq!(rows[1]["alpha"], 0.01);
    assert_eq!(rows[1]["k"], 2);
    assert!(rows[1].get("status").is_none());
}

#[test]
fn sweep_output_reproduces_threshold_at_grid_resolution() {
    let step = 0.01;
    let qubits = QubitRange { min: 5, max: 5 };
    let mut config = ExperimentConfig::new(qubits, NoiseKind::ALL.to_vec());
    config.grid = format!("0:0.3:{step}").parse().unwrap();

    let mut csv_bytes = Vec::new();
    noisy_grover::cli::write_table(&cmd_sweep(&config).unwrap(), config.format, &mut csv_bytes).unwrap();
    let mut reader = csv::Reader::from_reader(csv_bytes.as_slice());
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();

    let thresholds = cmd_threshold(&config).unwrap();
    for row in &thresholds.rows {
        let family = row.family.unwrap().name();
        let points: Vec<SweepPoint> = records
            .iter()
            .filter(|r| &r[2] == family)
            .map(|r| SweepPoint {
                alpha: r[3].parse().unwrap(),
                success: r[4].parse().unwrap(),
            })
            .collect();
        let p_min: f64 = records.iter().find(|r| &r[2] == family).unwrap()[5].parse().unwrap();
        let from_sweep = grid_threshold(&points, p_min).unwrap();
        let alpha = row.alpha.unwrap();
        assert!(
            from_sweep <= alpha + 1e-12 && alpha < from_sweep + step,
            "{family}: sweep {from_sweep} vs threshold {alpha}"
        );
    }
}
