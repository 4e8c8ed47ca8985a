use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn autgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autgeo"))
        .args(args)
        .env_remove("AUTGEO_CAP_PROFILE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(": "))
}

#[test]
fn check_domain_on_a5_and_s3() {
    let a5 = autgeo(&["check-domain", "--group", &data("a5.grp"), "--verify"]);
    assert_eq!(a5.status.code(), Some(0), "{}", stderr(&a5));
    let text = stdout(&a5);
    assert_eq!(field(&text, "is_domain"), Some("true"));
    assert_eq!(field(&text, "cross_size"), Some("119"));

    let s3 = autgeo(&["check-domain", "--group", &data("s3.grp")]);
    let text = stdout(&s3);
    assert_eq!(field(&text, "is_domain"), Some("false"));
    assert_eq!(field(&text, "zero_divisor_pair"), Some("(1,2,3) (1,2,3)"));
}

#[test]
fn solve_counts_the_s3_certificate() {
    let o = autgeo(&["solve", "--group", "builtin:S3", "--system", &data("sed_s3.eqs")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(field(&stdout(&o), "cardinality"), Some("15"));
}

#[test]
fn parse_errors_exit_2_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.eqs");
    std::fs::write(&path, "x1 * @(1,2 = 1\n").unwrap();
    let o = autgeo(&["solve", "--group", "builtin:S3", "--system", path.to_str().unwrap(), "--arity", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at 1:6"), "{}", stderr(&o));

    let o = autgeo(&["solve", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn caps_exit_3_under_the_small_profile() {
    let o = autgeo(&["--cap-profile", "small", "check-domain", "--group", &data("a5.grp")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("size limit exceeded"));

    let o = Command::new(env!("CARGO_BIN_EXE_autgeo"))
        .args(["check-domain", "--group", &data("a5.grp")])
        .env("AUTGEO_CAP_PROFILE", "small")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dry_run_stops_before_solving() {
    let o = autgeo(&["--dry-run", "solve", "--group", "builtin:S3", "--system", &data("sed_s3.eqs")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(field(&text, "dry_run"), Some("true"));
    assert_eq!(field(&text, "tuple_space"), Some("36"));
    assert_eq!(field(&text, "cardinality"), None);
}

#[test]
fn json_twin_carries_the_same_fields() {
    let args = ["f2-check", "--max-len", "2"];
    let text = stdout(&autgeo(&args));
    let json: serde_json::Value = serde_json::from_str(&stdout(&autgeo(&[&["--json"], &args[..]].concat()))).unwrap();
    assert_eq!(json["commuting_pairs"], 48);
    assert_eq!(field(&text, "commuting_pairs"), Some("48"));
    assert_eq!(json["counterexamples"].as_array().unwrap().len(), 8);
    assert_eq!(json["seed"], 0x5eed);
}

#[test]
fn reports_are_deterministic_and_can_go_to_a_file() {
    let args = ["gamma", "--system", &data("ex.eqs"), "--window", "-3..3"];
    let first = autgeo(&args);
    let second = autgeo(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let single = stdout(&autgeo(&[&["--workers", "1"], &args[..]].concat()));
    assert_eq!(single.replace("workers: 1\n", "workers: 0\n"), stdout(&first));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = autgeo(&[&["--report", path.to_str().unwrap()], &args[..]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
}

#[test]
fn power_build_and_free_group_examples() {
    let o = autgeo(&["power", "build", "--group", &data("a5.grp"), "--mode", "cyclic:2", "--check-domain"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(field(&text, "power_order"), Some("3600"));
    assert_eq!(field(&text, "is_domain"), Some("true"));

    let o = autgeo(&["f2-check", "--max-len", "6"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compactness_commands_run() {
    let o = autgeo(&["ucompact-witness", "--group", &data("a5.grp"), "--subsystem", &data("commutation.eqs"), "--g", "(1,2,3)"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("target.eqs");
    std::fs::write(&target, "[x1, a1(x2)] = 1\n").unwrap();
    let o = autgeo(&[
        "qcompact-test",
        "--group",
        "builtin:S3",
        "--system",
        &data("commutation.eqs"),
        "--target",
        target.to_str().unwrap(),
        "--support",
        "1",
        "--window",
        "-3..3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(field(&text, "inclusion_holds"), Some("true"));
    assert_eq!(field(&text, "s_prime_size"), Some("3"));
}
