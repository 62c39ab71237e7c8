use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bessel-bounds")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Column `name` of the single data row of a tabulate run.
fn column(csv: &str, name: &str) -> f64 {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(lines.next().is_none());
    row[header.iter().position(|h| *h == name).unwrap()].parse().unwrap()
}

#[test]
fn every_subcommand_has_help() {
    for cmd in ["tabulate", "verify", "sharpness", "conjecture", "explore"] {
        let o = run(&[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        assert!(stdout(&o).contains("Usage"));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["tabulate", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["tabulate", "--nu-step", "0"]).status.code(), Some(2));
    assert_eq!(run(&["explore", "--nu", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--corrupt", "no-such-claim", "--x-points", "0"]).status.code(), Some(2));
}

#[test]
fn tabulate_half_order_closed_forms() {
    let o = run(&["tabulate", "--nu", "0.5", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!((column(&csv, "i_ratio") - 1.0 / 1f64.tanh()).abs() < 1e-10);
    assert_eq!(column(&csv, "k_ratio"), -1.0);
    assert!((column(&csv, "product") - (1.0 - (-2f64).exp()) / 2.0).abs() < 1e-10);
}

#[test]
fn tabulate_order_zero_roots() {
    let csv = stdout(&run(&["tabulate", "--nu", "0", "--x", "1"]));
    assert!((column(&csv, "lambda_I") - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-10);
    assert_eq!(column(&csv, "lambda_O"), 0.0);
}

#[test]
fn empty_grid_is_header_only() {
    let o = run(&["tabulate", "--nu-min", "1", "--nu-max", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stderr(&o).contains("0 points"));
}

#[test]
fn unsupported_orders_exceed_the_failure_threshold() {
    let o = run(&["tabulate", "--nu", "-3", "--x-points", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn verify_passes_on_a_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let o = run(&[
        "verify", "--nu-min", "-1", "--nu-max", "5", "--nu-step", "0.5", "--x-points", "25",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("[FAIL]"));
    let report = std::fs::read_to_string(out.join("trig-upper-I.csv")).unwrap();
    assert!(report.starts_with("claim_id,nu,x,bound,oracle,margin\n"));
    assert!(out.join("P-decreasing.csv").exists());
}

#[test]
fn corrupted_claim_fails_by_name() {
    let o = run(&["verify", "--nu-min", "1", "--nu-max", "2", "--x-points", "9", "--corrupt", "psi-K-upper"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("psi-K-upper"));
    assert!(stdout(&o).contains("[FAIL] psi-K-upper"));
}

#[test]
fn verify_on_an_empty_grid_warns_per_claim() {
    let o = run(&["verify", "--x-points", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.contains("0 points")).count() > 30);
}

#[test]
fn explore_half_order_fixed_line() {
    let o = run(&["explore", "--a", "0", "--nu", "0.5", "--x0", "1", "--y0", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.lines().count() > 3);
    for line in csv.lines().skip(1) {
        assert_eq!(line.rsplit(',').next().unwrap().parse::<f64>().unwrap(), -1.0);
    }
}

#[test]
fn explore_below_second_kind_blows_up() {
    // −K_1(1)/K_2(1) ≈ −0.3725
    let o = run(&["explore", "--a", "0", "--nu", "2", "--x0", "1", "--y0", "-0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("blow-up at x"), "{}", stderr(&o));
}

#[test]
fn explore_samples_are_seeded() {
    let args = ["explore", "--nu", "2", "--samples", "4", "--seed", "11"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stderr(&a).matches("has-interior-extremum").count(), 4);
    let c = run(&["explore", "--nu", "2", "--samples", "4", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# orders\nnu = 0.5\nx = 2\n").unwrap();
    let from_file = stdout(&run(&["tabulate", "--config", cfg.to_str().unwrap()]));
    assert_eq!(column(&from_file, "x"), 2.0);
    let overridden = stdout(&run(&["tabulate", "--config", cfg.to_str().unwrap(), "--x", "3"]));
    assert_eq!((column(&overridden, "nu"), column(&overridden, "x")), (0.5, 3.0));

    std::fs::write(&cfg, "speed = 1\n").unwrap();
    let o = run(&["tabulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key"));
}

#[test]
fn saved_config_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("saved.cfg");
    let args = ["tabulate", "--nu-min", "0", "--nu-max", "1", "--x-points", "4"];
    let first = run(&[&args[..], &["--save-config", saved.to_str().unwrap()]].concat());
    let again = run(&["tabulate", "--config", saved.to_str().unwrap()]);
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn csv_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for path in [&a, &b] {
        let o = run(&["conjecture", "--nu-min", "-1", "--nu-max", "3", "--x-points", "30", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(!bytes.contains(&b'\r'));
}

#[test]
fn conjecture_reports_both_margins() {
    let o = run(&["conjecture", "--nu-min", "0", "--nu-max", "4", "--x-points", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("margin to 1/3") && text.contains("margin to 1/5"));
}
