use std::process::{Command, Output};

use balword::cli::read_pgm;
use serde_json::Value;

fn balword(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balword"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = balword(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn gen_half_rows_are_rotations_of_the_period() {
    let text = stdout(&["gen", "--density", "1/2", "--width", "12", "--height", "12"]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 12);
    let doubled = "..###.#.#.#...###.#.#.#.";
    for (n, row) in rows.iter().enumerate() {
        // row n starts on diagonal n, and diagonal 0 mirrors diagonal 12
        let shift = (n + 11) % 12;
        assert_eq!(*row, &doubled[shift..shift + 12], "row {n}");
    }
}

#[test]
fn gen_endpoints_and_bad_density() {
    let text = stdout(&["gen", "--density", "1", "--width", "5", "--height", "2"]);
    assert_eq!(text, "#####\n#####\n");
    let text = stdout(&["gen", "--density", "0", "--width", "3", "--height", "1"]);
    assert_eq!(text, "...\n");
    assert_eq!(balword(&["gen", "--density", "2/1"]).status.code(), Some(2));
    assert_eq!(balword(&["gen", "--density", "abc"]).status.code(), Some(2));
    assert_eq!(
        balword(&["gen", "--density", "(0+1*sqrt(4))/3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn orbit_prefix_for_half() {
    let text = stdout(&["orbit", "--density", "1/2", "--steps", "13"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,x,y,h");
    assert_eq!(lines.len(), 14);
    assert_eq!(lines[1], "1,0,0,a");
    assert_eq!(lines[13], "13,0,0,a");
    assert_eq!(
        balword(&["orbit", "--density", "0", "--steps", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn check_reports() {
    let r = json(&[
        "check",
        "--density",
        "1",
        "--max-shape",
        "4",
        "--elongated",
        "0",
        "--diag-range",
        "10",
    ]);
    assert_eq!(r["overall_k"], 0);

    let r = json(&[
        "check",
        "--density",
        "1/2",
        "--max-shape",
        "12",
        "--elongated",
        "0",
        "--diag-range",
        "24",
    ]);
    let s = r["shapes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["p"] == 12 && s["q"] == 1)
        .expect("shape (12, 1) present");
    assert_eq!(s["discrepancy"], 0);
    assert_eq!(r["theoretical_bound"], 32);

    let r = json(&[
        "check",
        "--density",
        "(0+1*sqrt(2))/3",
        "--max-shape",
        "16",
        "--elongated",
        "256",
        "--diag-range",
        "20000",
        "--diag-start",
        "-10000",
    ]);
    assert!(r["overall_k"].as_u64().unwrap() <= 32);
    assert_eq!(r["theoretical_bound"], 32);
    assert!(r.get("generated_at").is_none());
}

#[test]
fn sturmian_prefixes() {
    assert_eq!(
        stdout(&["sturmian", "--density", "1/2", "--length", "6"]).trim(),
        "010101"
    );
    assert_eq!(
        stdout(&["sturmian", "--density", "0", "--length", "4"]).trim(),
        "0000"
    );
    let golden = stdout(&[
        "sturmian",
        "--density",
        "(-1+1*sqrt(5))/2",
        "--length",
        "8",
        "--start",
        "1",
    ]);
    assert_eq!(golden.trim(), "10110101");
}

#[test]
fn density_and_bound_commands() {
    let r = json(&["density", "--density", "(0+1*sqrt(2))/3", "--size", "200"]);
    assert_eq!(r["within_bound"], true);
    let r = json(&["bound", "--density", "1/2"]);
    assert_eq!(r["balance_bound"], 32);
    assert_eq!(r["alpha"].as_str().unwrap().parse::<f64>().unwrap(), 4.0);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "check",
        "--density",
        "(-1+1*sqrt(5))/2",
        "--max-shape",
        "8",
        "--elongated",
        "64",
        "--diag-range",
        "3000",
    ];
    let first = balword(&args).stdout;
    assert_eq!(first, balword(&args).stdout);
    let threaded = |n: &str| {
        Command::new(env!("CARGO_BIN_EXE_balword"))
            .args(args)
            .env("BALWORD_THREADS", n)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(threaded("1"), threaded("2"));
    assert_eq!(first, threaded("1"));
}

#[test]
fn pgm_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.pgm");
    let path_s = path.to_str().unwrap();
    stdout(&[
        "gen",
        "--density",
        "(0+1*sqrt(2))/3",
        "--width",
        "30",
        "--height",
        "17",
        "--origin",
        "-5,9",
        "--format",
        "pgm",
        "--out",
        path_s,
    ]);
    let ascii = stdout(&[
        "gen",
        "--density",
        "(0+1*sqrt(2))/3",
        "--width",
        "30",
        "--height",
        "17",
        "--origin",
        "-5,9",
    ]);
    let (w, h, pixels) = read_pgm(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!((w, h), (30, 17));
    let from_ascii: Vec<u8> = ascii
        .lines()
        .flat_map(|l| l.bytes().map(|c| (c == b'#') as u8))
        .collect();
    assert_eq!(pixels, from_ascii);
}
