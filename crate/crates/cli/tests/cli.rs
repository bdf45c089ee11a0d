use std::process::{Command, Output};

fn wbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbc"))
        .args(args)
        .output()
        .expect("run wbc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn products() {
    let o = wbc(&["mul", "-e", "e1", "e1"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "0"));
    let o = wbc(&["--algebra", "affine", "--format", "word", "mul", "-e", "e1*x1", "e1"]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "w1 * e1"));
    let o = wbc(&["-r", "2", "-t", "2", "--format", "word", "mul", "-e", "1", "s1*c2*eb1"]);
    let again = wbc(&[
        "-r",
        "2",
        "-t",
        "2",
        "--format",
        "word",
        "mul",
        "-e",
        stdout(&o).trim(),
        "1",
    ]);
    assert_eq!(stdout(&o), stdout(&again));
}

#[test]
fn operands_from_files() {
    let dir = std::env::temp_dir().join(format!("wbc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a"), dir.join("b"));
    std::fs::write(&a, "x1^3\n").unwrap();
    std::fs::write(&b, "e1\n").unwrap();
    let o = wbc(&[
        "--algebra",
        "cyclotomic",
        "--format",
        "word",
        "mul",
        a.to_str().unwrap(),
        b.to_str().unwrap(),
    ]);
    assert_eq!((code(&o), stdout(&o).trim()), (0, "6 * x1*e1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn basis_counts_come_last() {
    for (args, last) in [
        (vec!["basis"], "count 8 (even 4, odd 4)"),
        (vec!["-r", "2", "-t", "2", "basis"], "count 384 (even 192, odd 192)"),
        (vec!["--algebra", "cyclotomic", "basis"], "count 32"),
    ] {
        let o = wbc(&args);
        assert_eq!(code(&o), 0);
        let out = stdout(&o);
        assert_eq!(out.lines().last().unwrap(), last);
        let n: usize = last.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert_eq!(out.lines().count(), n + 1);
    }
}

#[test]
fn verify_suites_pass_and_are_deterministic() {
    for args in [
        vec!["-r", "2", "-t", "2", "verify", "relations"],
        vec!["-r", "2", "-t", "2", "verify", "jm"],
        vec!["-r", "2", "-t", "1", "--seed", "4", "verify", "assoc"],
        vec!["-r", "2", "-t", "1", "--seed", "4", "verify", "oracle"],
        vec!["--algebra", "affine", "verify", "phi", "--k", "2"],
        vec![
            "--algebra",
            "affine",
            "--seed",
            "1",
            "--samples",
            "50",
            "verify",
            "relations",
        ],
        vec!["--algebra", "cyclotomic", "--seed", "1", "verify", "cyclo"],
        vec!["verify", "params"],
    ] {
        let first = wbc(&args);
        assert_eq!(code(&first), 0, "{args:?}: {}", stdout(&first));
        assert!(stdout(&first).lines().all(|l| !l.contains("\tFAIL\t")));
        assert_eq!(first.stdout, wbc(&args).stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&wbc(&["mul", "-e", "e1 +", "e1"])), 2);
    assert_eq!(code(&wbc(&["verify", "assoc"])), 2, "seed is mandatory");
    assert_eq!(code(&wbc(&["mul", "-e", "D{1:1'; 2:2'; 1b:1b'}", "e1"])), 3);
    assert_eq!(
        code(&wbc(&[
            "--algebra",
            "affine",
            "--fuel",
            "2",
            "mul",
            "-e",
            "x1^3*e1",
            "xb1^3*e1"
        ])),
        4
    );
    let dir = std::env::temp_dir().join(format!("wbc-spec-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec = dir.join("bad.spec");
    std::fs::write(&spec, "k=0\nu2=6\nw1=-6\nw3=-35\n").unwrap();
    let o = wbc(&["admissible", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("b3\t1"));
    assert_eq!(
        code(&wbc(&[
            "--algebra",
            "cyclotomic",
            "--spec",
            spec.to_str().unwrap(),
            "basis"
        ])),
        5
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parameter_conversion() {
    let o = wbc(&["convert-params", "--order", "3"]);
    assert_eq!(
        stdout(&o),
        "delta1\t-w1\ndeltabar1\t-w1\ndelta2\t0\ndeltabar2\t0\ndelta3\tw1^2 - w3\ndeltabar3\t-w3\n"
    );
    let o = wbc(&["convert-params", "--from", "delta", "-6,0,36"]);
    assert_eq!(stdout(&o), "w1\t6\nw2\t0\nw3\t0\n");
}

#[test]
fn reduction_and_oracle_rank() {
    let o = wbc(&[
        "--algebra",
        "cyclotomic",
        "--format",
        "word",
        "reduce",
        "-e",
        "x1^2 + e1*x1^3*e1",
    ]);
    assert_eq!(stdout(&o).trim(), "-36 * e1 + 6");
    let o = wbc(&["oracle-rank", "-r", "2", "-t", "1"]);
    assert_eq!(stdout(&o), "dim 216\nbasis 48\nrank 48\n");
}
