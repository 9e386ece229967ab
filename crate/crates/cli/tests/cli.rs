//! End-to-end tests of the binary: output shapes, parse-back, determinism,
//! and exit codes.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use hilbjack::io::{self, Document};
use hilbjack::rational::{rat, ratio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hilbjack"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn run_with_stdin(args: &[&str], input: &str) -> String {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn parse_back(text: &str) -> Document {
    io::parse(text.trim_end()).expect("CLI output parses")
}

#[test]
fn jack_expansion_matches_expected_coefficients() {
    let out = run_ok(&["jack", "--lambda", "[2]", "--param", "1/2"]);
    match parse_back(&out) {
        Document::SymPoly(f) => {
            let two = hilbjack::partition::Partition::new(vec![2]).unwrap();
            let ones = hilbjack::partition::Partition::new(vec![1, 1]).unwrap();
            assert_eq!(f.coeff(&two), rat(1));
            assert_eq!(f.coeff(&ones), ratio(4, 3));
        }
        other => panic!("expected a symmetric-function document, got {other:?}"),
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["jack", "--lambda", "[3,1]", "--param", "2"];
    assert_eq!(run_ok(&args), run_ok(&args));
    let table = [
        "structconsts",
        "--model",
        "linebundle",
        "--gamma",
        "2",
        "--n",
        "2",
    ];
    assert_eq!(run_ok(&table), run_ok(&table));
}

#[test]
fn convert_round_trips_through_power_basis() {
    let jack = run_ok(&["jack", "--lambda", "[2,1]", "--param", "1/3"]);
    let power = run_with_stdin(&["convert", "--target", "p"], &jack);
    let back = run_with_stdin(&["convert", "--target", "m"], &power);
    assert_eq!(back, jack);
}

#[test]
fn pair_of_symmetric_functions_needs_param() {
    let dir = std::env::temp_dir().join(format!("hilbjack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m1.json");
    std::fs::write(
        &path,
        r#"{"schema":"1","kind":"sympoly","degree":1,"basis":"m","coeffs":{"[1]":"1"}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();

    let out = run_ok(&["pair", "--left", p, "--right", p, "--param", "3/4"]);
    match parse_back(&out) {
        Document::Scalar(x) => assert_eq!(x, ratio(3, 4)),
        other => panic!("expected a scalar document, got {other:?}"),
    }

    let missing = run(&["pair", "--left", p, "--right", p]);
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn star_multiplies_fixed_point_classes() {
    let dir = std::env::temp_dir().join(format!("hilbjack-star-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("class.json");
    std::fs::write(
        &path,
        r#"{"schema":"1","kind":"equivclass","model":{"alpha":1,"beta":2},"n":1,"basis":"fixedpoint","coeffs":{"[1]":"1"}}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = run_ok(&["star", "--left", p, "--right", p]);
    match parse_back(&out) {
        Document::EquivClass(c) => {
            let key = hilbjack::hilb::ClassKey::Single(
                hilbjack::partition::Partition::new(vec![1]).unwrap(),
            );
            assert_eq!(c.coeff(&key), rat(2)); // the constant is β
        }
        other => panic!("expected a class document, got {other:?}"),
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cup_section_square_is_zero_at_one_point() {
    let out = run_ok(&[
        "cup", "--q1", "[[],[1]]", "--q2", "[[],[1]]", "--gamma", "2",
    ]);
    match parse_back(&out) {
        Document::HeisCombo(c) => assert!(c.is_zero()),
        other => panic!("expected a monomial combination, got {other:?}"),
    }
}

#[test]
fn structconsts_csv_and_json_parse_back() {
    let csv = run_ok(&[
        "structconsts",
        "--model",
        "plane",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--n",
        "2",
        "--format",
        "csv",
    ]);
    assert!(csv.starts_with("# schema=1 kind=table model=plane"));
    match parse_back(&csv) {
        Document::Table(t) => assert_eq!(t.rows.len(), 2),
        other => panic!("expected a table, got {other:?}"),
    }
    let json = run_ok(&[
        "structconsts",
        "--model",
        "linebundle",
        "--gamma",
        "3",
        "--n",
        "1",
        "--basis",
        "qgraded",
    ]);
    assert!(matches!(parse_back(&json), Document::Table(_)));
}

#[test]
fn parallel_jobs_do_not_change_table_bytes() {
    let serial = run_ok(&[
        "structconsts",
        "--model",
        "linebundle",
        "--gamma",
        "2",
        "--n",
        "2",
        "--basis",
        "qgraded",
    ]);
    let parallel = run_ok(&[
        "structconsts",
        "--model",
        "linebundle",
        "--gamma",
        "2",
        "--n",
        "2",
        "--basis",
        "qgraded",
        "--jobs",
        "3",
    ]);
    assert_eq!(serial, parallel);
}

#[test]
fn heis_check_reports_success() {
    let out = run_ok(&[
        "heis-check",
        "--model",
        "linebundle",
        "--gamma",
        "2",
        "--maxdeg",
        "4",
    ]);
    match parse_back(&out) {
        Document::Report(r) => {
            assert!(r.passed);
            assert_eq!(r.message, "all commutators match");
        }
        other => panic!("expected a report, got {other:?}"),
    }
    let plane = run_ok(&[
        "heis-check",
        "--model",
        "plane",
        "--alpha",
        "2",
        "--beta",
        "3",
        "--maxdeg",
        "3",
    ]);
    match parse_back(&plane) {
        Document::Report(r) => assert!(r.passed),
        other => panic!("expected a report, got {other:?}"),
    }
}

#[test]
fn exit_codes_distinguish_usage_and_domain_errors() {
    // unknown flag: usage error from the argument parser
    let usage = run(&["jack", "--nope"]);
    assert_eq!(usage.status.code(), Some(2));
    // missing model option: usage error
    let usage = run(&["structconsts", "--model", "plane", "--n", "1"]);
    assert_eq!(usage.status.code(), Some(2));
    // invalid line-bundle parameter: domain error
    let domain = run(&[
        "cup", "--q1", "[[],[1]]", "--q2", "[[],[1]]", "--gamma", "1",
    ]);
    assert_eq!(domain.status.code(), Some(1));
    // mismatched point counts: domain error
    let domain = run(&[
        "cup",
        "--q1",
        "[[1],[]]",
        "--q2",
        "[[1,1],[]]",
        "--gamma",
        "2",
    ]);
    assert_eq!(domain.status.code(), Some(1));
    // graded table for the plane model: domain error
    let domain = run(&[
        "structconsts",
        "--model",
        "plane",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--n",
        "1",
        "--basis",
        "qgraded",
    ]);
    assert_eq!(domain.status.code(), Some(1));
}
