use std::f64::consts::PI;
use std::fs;
use std::process::{Command, Output};

use plateball_cli::{cmd_bounds, cmd_crossings, cmd_eval, cmd_root, EvalFn, Figure, OutputRecord, RootKind};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plateball"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_record(out: &Output) -> OutputRecord {
    OutputRecord::from_csv(&String::from_utf8(out.stdout.clone()).unwrap()).unwrap()
}

#[test]
fn root_p1_near_one_third() {
    let out = run(&["root", "p1", "--m", "0.3333333333"]);
    assert!(out.status.success());
    let rec = stdout_record(&out);
    assert_eq!(rec.schema, "root.p1");
    let v = rec.column("value").unwrap()[0];
    assert!((v - PI / 2.0).abs() < 1e-9, "{v}");
    let (lo, hi) = (rec.column("bracket_lo").unwrap()[0], rec.column("bracket_hi").unwrap()[0]);
    assert!(lo <= v && v <= hi);
}

#[test]
fn eval_g1_at_origin() {
    let out = run(&["eval", "g1", "--p", "0", "--m", "0.5"]);
    assert!(out.status.success());
    assert_eq!(stdout_record(&out).rows, vec![vec![0.0, 0.5, 0.0]]);
}

#[test]
fn crossings_first_row() {
    let out = run(&["crossings", "--kmax", "1"]);
    assert!(out.status.success());
    let rec = stdout_record(&out);
    let row = &rec.rows[0];
    assert_eq!((row[0], row[1]), (1.0, 0.5));
    assert!((row[2] - PI).abs() < 1e-12);
    let ms = rec.column("m").unwrap();
    assert!(ms.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn json_matches_csv() {
    let csv = stdout_record(&run(&["root", "x2", "--s", "7.5"]));
    let out = run(&["root", "x2", "--s", "7.5", "--format", "json"]);
    let json: OutputRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(csv, json);
}

#[test]
fn csv_round_trip_is_byte_identical() {
    for fig in [Figure::P1, Figure::X1, Figure::P2, Figure::X1x2, Figure::P1p2] {
        let (a, b) = fig.default_range();
        let text = cmd_bounds(fig, a, b, 150, 1e-6).unwrap().to_csv().unwrap();
        let again = OutputRecord::from_csv(&text).unwrap().to_csv().unwrap();
        assert_eq!(text, again);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p1.csv");
    let out = run(&["bounds", "p1", "--count", "40", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(OutputRecord::from_csv(&text).unwrap().to_csv().unwrap(), text);
}

#[test]
fn bounds_sweep_skips_excluded_band() {
    let rec = cmd_bounds(Figure::P1p2, 0.9, 1.1, 3, 1e-6).unwrap();
    assert_eq!(rec.column("m").unwrap(), vec![0.9, 1.1]);
    assert!(cmd_bounds(Figure::P1, 1.0, 0.5, 10, 1e-6).is_err());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["root", "p1", "--m", "1.0"]).status.code(), Some(2));
    assert_eq!(run(&["root", "x1", "--s", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "g1", "--p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "F", "--x", "3.141592653589793"]).status.code(), Some(2));
    assert_eq!(run(&["crossings", "--kmax", "2"]).status.code(), Some(0));
}

#[test]
fn eps_sing_flag_and_config() {
    assert_eq!(run(&["root", "p1", "--m", "1.01", "--eps-sing", "0.05"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "eps_sing = 0.05\n").unwrap();
    let c = cfg.to_str().unwrap();
    assert_eq!(run(&["root", "p1", "--m", "1.01", "--config", c]).status.code(), Some(2));
    // the flag wins over the file
    let out = run(&["root", "p1", "--m", "1.01", "--config", c, "--eps-sing", "1e-3"]);
    assert!(out.status.success());
    fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(run(&["root", "p1", "--m", "0.5", "--config", c]).status.code(), Some(2));
}

#[test]
fn verify_exit_status_tracks_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let r = report.to_str().unwrap();
    let small = ["--m-points", "200", "--s-points", "60", "--kmax", "2"];

    let mut args = vec!["verify", "--out", r];
    args.extend(small);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["clauses"].as_array().unwrap().len(), plateball::verify::REGISTRY.len());

    // a negative slack turns every exactly-met inequality into a failure
    args.extend(["--slack", "-1"]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["clauses"].as_array().unwrap().iter().any(|c| c["failures"].as_u64() > Some(0)));
}

#[test]
fn trajectory_warns_on_large_amplitude() {
    let out = run(&["trajectory", "--theta0", "0.1", "--d0", "-0.2", "--m", "0.6", "--rho0", "0.3", "--count", "4"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho0"));
    let rec = stdout_record(&out);
    assert_eq!(rec.rows.len(), 5);
    assert_eq!(rec.rows[0][3], 1.0);
    let quiet = run(&["trajectory", "--theta0", "0.1", "--d0", "0.0", "--m", "0.6", "--count", "4"]);
    assert!(quiet.stderr.is_empty());
}

#[test]
fn library_commands() {
    let rec = cmd_eval(EvalFn::Gtilde, &[PI, 3.0]).unwrap();
    assert_eq!(rec.columns, ["x", "s", "value"]);
    assert!(rec.rows[0][2].abs() < 1e-15);
    assert!(cmd_eval(EvalFn::G1, &[1.0]).is_err());
    let r = cmd_root(RootKind::X1, 4.0, 1e-12, 1e-6).unwrap();
    assert!((r.rows[0][1] - PI).abs() < 1e-10);
    assert!(cmd_root(RootKind::P2, 0.4, 0.0, 1e-6).is_err());
    let c = cmd_crossings(3).unwrap();
    assert_eq!(c.rows.iter().filter(|r| r[6] == 0.0).count(), 6);
}
