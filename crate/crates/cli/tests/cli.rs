use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn tripknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tripknot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tripknot-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn jones_of_figure_eight() {
    let out = tripknot(&["jones", "--knot", "figure8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "t^-2 - t^-1 + 1 - t + t^2\n");
}

#[test]
fn jones_json_matches_text() {
    let text = stdout(&tripknot(&["jones", "--knot", "5_2"]));
    let out = tripknot(&["jones", "--knot", "5_2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["n"], 5);
    assert_eq!(v["writhe"], 5);
    assert_eq!(v["variable"], "t");
    assert_eq!(v["input"], "O1+ U2+ O3+ U1+ O4+ U5+ O2+ U3+ O5+ U4+");
    let terms = serde_json::to_string(&v["jones"]).unwrap();
    let poly = tripknot::laurent_poly::LaurentPoly::from_json(&terms).unwrap();
    assert_eq!(format!("{poly}\n"), text);
}

#[test]
fn matrix_of_figure_eight() {
    let out = tripknot(&["matrix", "--knot", "figure8"]);
    assert_eq!(stdout(&out), "0011\n0011\n1110\n1101\n");
}

#[test]
fn bracket_in_q() {
    let out = tripknot(&["bracket", "--gauss", "O1+ U2+ O3+ U1+ O2+ U3+"]);
    assert_eq!(stdout(&out), "q^-7 - q^-3 - q^5\n");
}

#[test]
fn delta_eq_reports_witness() {
    let a = scratch("a.txt", "0011\n0011\n1110\n1101\n");
    let b = scratch("b.txt", "1 1 1 0\n1 0 0 1\n1 0 0 1\n0 1 1 1\n");
    let c = scratch("c.txt", "1111\n1111\n1111\n1111\n");
    let out = tripknot(&["delta-eq", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(stdout(&out), "true\n(1 3)\n");
    let out = tripknot(&["delta-eq", a.to_str().unwrap(), c.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn verify_mult_trefoils() {
    let out = tripknot(&["verify-mult", "--knot", "trefoil+", "--knot", "trefoil+"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("equal; 64 states paired\n"));
}

#[test]
fn consum_keeps_argument_order() {
    let out = tripknot(&[
        "consum",
        "--gauss",
        "O1- U2- O3- U1- O2- U3-",
        "--knot",
        "trefoil+",
        "--at",
        "6",
    ]);
    assert_eq!(
        stdout(&out),
        "O1- U2- O3- U1- O2- U3- O4+ U5+ O6+ U4+ O5+ U6+\n"
    );
}

#[test]
fn file_input_and_threads() {
    let path = scratch(
        "code.txt",
        "# figure eight\nO1- U2- O3+ U4+\nO2- U1- O4+ U3+\n",
    );
    let out = tripknot(&["jones", "--file", path.to_str().unwrap(), "--threads", "3"]);
    assert_eq!(stdout(&out), "t^-2 - t^-1 + 1 - t + t^2\n");
}

#[test]
fn table_lists_every_entry() {
    let out = stdout(&tripknot(&["table"]));
    assert_eq!(
        out.lines().count(),
        tripknot::knot_table::all_entries().len()
    );
    assert!(out.starts_with("unknot "));
}

#[test]
fn output_is_deterministic() {
    let a = tripknot(&["verify-mult", "--knot", "figure8", "--knot", "5_1"]);
    let b = tripknot(&["verify-mult", "--knot", "figure8", "--knot", "5_1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(
        tripknot(&["jones", "--gauss", "O1+ X1+"]).status.code(),
        Some(2)
    );
    assert_eq!(tripknot(&["jones"]).status.code(), Some(2));
    assert_eq!(
        tripknot(&["jones", "--knot", "figure8", "--knot", "5_1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tripknot(&["jones", "--gauss", "O1+ O1+"]).status.code(),
        Some(3)
    );
    assert_eq!(
        tripknot(&["jones", "--knot", "nope"]).status.code(),
        Some(3)
    );
    let nonsym = scratch("nonsym.txt", "01\n00\n");
    let out = tripknot(&[
        "delta-eq",
        nonsym.to_str().unwrap(),
        nonsym.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    let big: Vec<String> = (1..=17)
        .flat_map(|i| [format!("O{i}+"), format!("U{i}+")])
        .collect();
    let big = big.join(" ");
    assert_eq!(
        tripknot(&["bracket", "--gauss", &big]).status.code(),
        Some(4)
    );
}
