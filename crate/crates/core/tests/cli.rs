use std::collections::BTreeSet;
use std::process::{Command, Output};

use serde_json::Value;
use xxring::analytic;

fn xxring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = xxring(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header and data rows of a CSV document, metadata lines dropped.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn metadata(text: &str, key: &str) -> String {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in output"))
        .to_owned()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn json_output_matches_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/output.schema.json")).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let runs: &[&[&str]] = &[
        &[
            "spectrum", "--sites", "5", "--steps", "7", "--single", "--modes",
        ],
        &["critical-points", "--sites", "6"],
        &["envelope", "--sites", "9", "--steps", "5"],
        &["envelope", "--sites", "5,9,45", "--steps", "5"],
        &["entanglement", "--sites", "4,5,6", "--steps", "7"],
        &["envelope", "--sites", "12", "--finite-size"],
        &["ground-state", "--sites", "4", "--g", "0.3"],
        &["entanglement", "--sites", "6", "--steps", "9", "--detail"],
        &["verify", "--sites", "4", "--steps", "9"],
    ];
    for args in runs {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let doc: Value = serde_json::from_str(&stdout(&full)).unwrap();
        if let Err(errors) = compiled.validate(&doc) {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{args:?}: {msgs:?}");
        }
        let width = doc["columns"].as_array().unwrap().len();
        assert!(doc["rows"]
            .as_array()
            .unwrap()
            .iter()
            .all(|r| r.as_array().unwrap().len() == width));
    }
    let broken = serde_json::json!({"command": "verify", "sites": [4], "metadata": {}, "columns": ["x"], "rows": []});
    assert!(!compiled.is_valid(&broken));
}

#[test]
fn output_is_identical_across_worker_counts() {
    for args in [
        vec!["entanglement", "--sites", "8", "--steps", "31", "--detail"],
        vec!["verify", "--sites", "6", "--steps", "11"],
        vec!["ground-state", "--sites", "10", "--g", "0.1"],
    ] {
        let reference = stdout(&[args.as_slice(), &["--workers", "1"]].concat());
        for w in ["2", "5"] {
            assert_eq!(
                stdout(&[args.as_slice(), &["--workers", w]].concat()),
                reference,
                "{args:?}"
            );
        }
        assert_eq!(stdout(&args), reference);
    }
}

#[test]
fn csv_dialect() {
    let text = stdout(&["envelope", "--sites", "7", "--steps", "3"]);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["sites", "g", "eps_gs", "eps_env", "eps_inf"]);
    for row in &rows {
        assert_eq!(row[0], "7");
        for cell in &row[1..] {
            let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.len(), 18, "{cell}: 17 significant digits");
        }
    }
    assert_eq!(
        num(&metadata(&text, "chi_n")),
        analytic::finite_size_parameter(7)
    );
    assert_eq!(
        num(&metadata(&text, "relative_error")),
        analytic::relative_error(7)
    );
}

#[test]
fn spectrum_rows() {
    let text = stdout(&[
        "spectrum", "--sites", "8", "--g-min", "-2", "--g-max", "2", "--steps", "9",
    ]);
    let (header, rows) = csv_rows(&text);
    let (kind, index, g, value) = (
        column(&header, "kind"),
        column(&header, "index"),
        column(&header, "g"),
        column(&header, "value"),
    );
    let level = |n: &str, at: f64| {
        rows.iter()
            .find(|r| r[kind] == "level" && r[index] == n && num(&r[g]) == at)
            .map(|r| num(&r[value]))
            .unwrap()
    };
    for r in rows
        .iter()
        .filter(|r| r[kind] == "level" && r[index] == "0")
    {
        assert_eq!(num(&r[g]), num(&r[value]));
    }
    assert!((level("0", -1.0) - level("1", -1.0)).abs() < 1e-15);
    assert!(level("0", -1.5) < level("1", -1.5));
    assert!(level("0", -0.5) > level("1", -0.5));

    let text = stdout(&["spectrum", "--sites", "9", "--steps", "5", "--single"]);
    let (header, rows) = csv_rows(&text);
    let (kind, index) = (column(&header, "kind"), column(&header, "index"));
    let lines: BTreeSet<&str> = rows
        .iter()
        .filter(|r| r[kind] == "single")
        .map(|r| r[index].as_str())
        .collect();
    assert_eq!(lines.len(), 9);
}

#[test]
fn mode_cosines() {
    let text = stdout(&["spectrum", "--sites", "5", "--g", "0", "--modes"]);
    let (header, rows) = csv_rows(&text);
    let (kind, index, alpha, g, value) = (
        column(&header, "kind"),
        column(&header, "index"),
        column(&header, "alpha"),
        column(&header, "g"),
        column(&header, "value"),
    );
    let modes: Vec<&Vec<String>> = rows.iter().filter(|r| r[kind] == "mode").collect();
    assert_eq!(modes.len(), 10);
    for r in modes {
        let k: f64 = num(&r[index]);
        let a = num(&r[alpha]);
        let expected = (2.0 * std::f64::consts::PI * (k + a) / 5.0).cos();
        assert!((num(&r[value]) - expected).abs() < 1e-15);
        assert!(r[g].is_empty());
    }
}

#[test]
fn envelope_examples() {
    let at = |n: &str, g: &str| {
        let (header, rows) = csv_rows(&stdout(&["envelope", "--sites", n, "--g", g]));
        (
            num(&rows[0][column(&header, "eps_env")]),
            num(&rows[0][column(&header, "eps_inf")]),
        )
    };
    let (env45, inf) = at("45", "0");
    assert!((inf + 2.0 / std::f64::consts::PI).abs() < 1e-15);
    assert!((env45 - inf).abs() < 1e-3);
    let (env5, _) = at("5", "0");
    let (env9, _) = at("9", "0");
    assert!((env5 - inf).abs() > (env9 - inf).abs());
    for n in ["3", "8", "31"] {
        assert_eq!(at(n, "2").0, -2.0);
    }
}

#[test]
fn finite_size_table() {
    let text = stdout(&["envelope", "--sites", "50", "--finite-size"]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(rows.len(), 48);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "50");
    let scaled = num(&last[column(&header, "scaled_error")]);
    assert!((scaled + 1.0).abs() < 0.01, "{scaled}");
}

#[test]
fn critical_points_table() {
    let (header, rows) = csv_rows(&stdout(&["critical-points", "--sites", "7"]));
    assert_eq!(header, ["sites", "n", "g_c"]);
    assert_eq!(rows.len(), 8);
    assert_eq!(num(&rows[0][2]), -1.0);
    assert!((num(&rows[7][2]) - 1.0).abs() < 1e-14);
    assert!(num(&rows[3][2]).abs() < 1e-15);
}

#[test]
fn entanglement_examples() {
    let one = |g: &str| {
        let (_, rows) = csv_rows(&stdout(&["entanglement", "--sites", "8", "--g", g]));
        rows[0].iter().map(|c| num(c)).collect::<Vec<f64>>()
    };
    assert_eq!(one("1.5"), vec![8.0, 1.5, 8.0, 1.0, 0.0]);
    let r = one("-0.95");
    assert_eq!(r[2], 1.0);
    assert!((r[3] - 0.5).abs() < 1e-12);
    assert!(r[4].abs() < 1e-12);

    // N = 5 sweep: mu changes only where a crossing separates neighbours
    let (_, rows) = csv_rows(&stdout(&["entanglement", "--sites", "5", "--steps", "121"]));
    let crossings: Vec<f64> = analytic::critical_points(5).iter().map(|c| c.g_c).collect();
    for pair in rows.windows(2) {
        let (g0, g1) = (num(&pair[0][1]), num(&pair[1][1]));
        let separated = crossings.iter().any(|&c| g0 < c && c <= g1);
        let jump = (num(&pair[0][3]) - num(&pair[1][3])).abs();
        if !separated {
            assert!(jump < 1e-12, "jump {jump} between {g0} and {g1}");
        }
    }
}

#[test]
fn entanglement_detail_rows() {
    let text = stdout(&["entanglement", "--sites", "6", "--g", "0.1", "--detail"]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["sites", "g", "n", "mu", "sigma", "mask", "pi"]);
    assert_eq!(rows.len(), 10);
    let pis: Vec<f64> = rows.iter().map(|r| num(&r[6])).collect();
    let mu = pis.iter().sum::<f64>() / pis.len() as f64;
    assert!((mu - num(&rows[0][3])).abs() < 1e-15);
    assert!(rows.iter().all(|r| r[5].parse::<usize>().unwrap() & 1 == 1));
}

#[test]
fn ring_lists_concatenate_single_runs() {
    let joint = stdout(&["entanglement", "--sites", "4,5,6", "--steps", "13"]);
    let (_, joint_rows) = csv_rows(&joint);
    let mut separate = Vec::new();
    for n in ["4", "5", "6"] {
        separate.extend(csv_rows(&stdout(&["entanglement", "--sites", n, "--steps", "13"])).1);
    }
    assert_eq!(joint_rows, separate);
    assert_eq!(metadata(&joint, "bipartitions_5"), "10");
}

#[test]
fn ground_state_dump() {
    let text = stdout(&["ground-state", "--sites", "5", "--g", "-0.8"]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["index", "re", "im"]);
    assert_eq!(rows.len(), 32);
    let norm: f64 = rows
        .iter()
        .map(|r| num(&r[1]).powi(2) + num(&r[2]).powi(2))
        .sum();
    assert!((norm - 1.0).abs() < 1e-12);
    assert_eq!(metadata(&text, "n"), "1");
}

#[test]
fn verify_passes_and_reports() {
    let out = xxring(&["verify", "--sites", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(metadata(&text, "passed"), "true");

    let doc: Value = serde_json::from_str(&stdout(&[
        "verify", "--sites", "6", "--steps", "41", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(doc["passed"], Value::Bool(true));
    let energy = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r[0] == "energy_oracle")
        .unwrap();
    assert!(energy[1].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_catches_corrupted_hamiltonian() {
    for n in ["3", "4"] {
        let out = xxring(&["verify", "--sites", n, "--steps", "11", "--inject-fault"]);
        assert_eq!(out.status.code(), Some(1));
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains("energy_oracle"), "{err}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(xxring(&["spectrum"]).status.code(), Some(2));
    assert_eq!(xxring(&["spectrum", "--sites", "2"]).status.code(), Some(2));
    assert_eq!(
        xxring(&["envelope", "--sites", "5", "--steps", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        xxring(&["ground-state", "--sites", "4", "--g", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        xxring(&["ground-state", "--sites", "15", "--g", "0.2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        xxring(&["entanglement", "--sites", "13", "--g", "0.2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(xxring(&["verify", "--sites", "11"]).status.code(), Some(3));
    assert_eq!(xxring(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("xxring-cli-{}.csv", std::process::id()));
    let out = xxring(&[
        "critical-points",
        "--sites",
        "6",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(written, stdout(&["critical-points", "--sites", "6"]));
}
