//! End-to-end checks of the command-line front end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cwt-asymptotics"))
        .args(args)
        .output()
        .expect("spawn binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn list_names_wavelets_inputs_and_worked_examples() {
    let o = cli(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in [
        "mexican-hat",
        "delta",
        "delta-derivative",
        "mexican-hat-large-a",
        "mexican-hat-small-a",
        "fourier-pairing",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
    assert_eq!(text, stdout(&cli(&["list"])));
}

#[test]
fn delta_scenario_passes_and_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cli(&["run", "delta", "--out-dir", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let remainders = fs::read_to_string(dir.path().join("delta_remainders.csv")).unwrap();
    let mut lines = remainders.lines();
    assert_eq!(lines.next(), Some("a,N,reference,partial_sum,remainder"));
    for line in lines {
        let r: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(r.abs() < 1e-12, "{line}");
    }
    let terms = fs::read_to_string(dir.path().join("delta_terms.csv")).unwrap();
    assert!(terms.starts_with("a,alpha,term,partial_sum\n"));
    assert!(dir.path().join("delta_fit.csv").exists());
}

#[test]
fn worked_examples_pass() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "mexican-hat-large-a",
        "mexican-hat-small-a",
        "fourier-pairing",
    ] {
        let o = cli(&["run", name, "--out-dir", dir.path().to_str().unwrap()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}{}",
            stdout(&o),
            stderr(&o)
        );
    }
}

#[test]
fn truncation_violation_exits_2_citing_the_rule() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "gamma.scn",
        "[scenario]\nname = g\nmode = large_a\nN = 2\nb = 1\n\n[input]\nkind = power-tail\ngamma = 0.5\n\n[grid]\nstart = 16\nratio = 2\ncount = 4\n",
    );
    let o = cli(&["run", &path, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("[[gamma]] - 1"), "{err}");
    assert!(err.contains("gamma.scn:4:"), "{err}");
}

#[test]
fn malformed_scenario_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.scn",
        "[scenario]\nname = bad\nmode = large_a\nb = one\n",
    );
    let o = cli(&["run", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.scn:4:"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        cli(&["moments", "nonsense:x=1", "--up-to", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cli(&["cwt", "delta", "--a", "0", "--b", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(cli(&["run", "/no/such/file.scn"]).status.code(), Some(2));
}

#[test]
fn unmet_assertion_exits_1_with_failure_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "strict.scn",
        "[scenario]\nname = strict\nmode = large_a\nN = 0\nb = 1\n\n[input]\nkind = bump\ncenter = 0.3\n\n[grid]\nstart = 16\nratio = 2\ncount = 4\n\n[assert]\nmax_abs_remainder = 1e-30\n",
    );
    let o = cli(&["run", &path, "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(
        err.contains("assertion failures") && err.contains("max |remainder| N=0"),
        "{err}"
    );
}

#[test]
fn moments_prints_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&[
        "moments",
        "delta-derivative:at=2",
        "--up-to",
        "3",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // <delta'_2, x^alpha> = -alpha 2^(alpha - 1)
    assert!(text.contains("\n0,0.0,"), "{text}");
    assert!(text.contains("\n1,-1.0,"), "{text}");
    assert!(text.contains("\n3,-12.0,"), "{text}");
    assert_eq!(
        fs::read_to_string(dir.path().join("moments.csv")).unwrap(),
        text
    );
}

#[test]
fn cwt_methods_agree_on_delta_derivative() {
    let o = cli(&[
        "cwt",
        "delta-derivative",
        "--a",
        "1",
        "--b",
        "1",
        "--method",
        "both",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let values: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 2);
    let expected = -2.0 * (-0.5f64).exp();
    for v in values {
        assert!((v - expected).abs() < 1e-12, "{v}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (x, y) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&x, &y] {
        let o = cli(&[
            "run",
            "mexican-hat-small-a",
            "--out-dir",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(x.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for n in names {
        assert_eq!(
            fs::read(x.path().join(&n)).unwrap(),
            fs::read(y.path().join(&n)).unwrap(),
            "{n:?}"
        );
    }
}
