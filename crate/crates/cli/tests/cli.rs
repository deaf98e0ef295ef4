use std::path::Path;
use std::process::Command;

const TOY: &str = "2 2 6 2
0 100
0 100
1 10 0 0 10 1 1 1
2 12 2 0 20 1 1 1
3 0 10 0 30 1 1 1
4 -10 0 0 15 1 1 1
5 -12 -3 0 25 1 1 1
6 0 -10 0 10 1 1 1
7 0 0 0 0 0 0
8 5 5 0 0 0 0
";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdfiha"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const FAST: [&str; 8] = [
    "--generations",
    "20",
    "--pop-size",
    "4",
    "--depth",
    "50",
    "--time-limit",
    "10",
];

#[test]
fn solve_writes_a_solution() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = write(tmp.path(), "toy", TOY);
    let out = tmp.path().join("toy.sol");
    let status = bin()
        .args(["solve", "--variant", "mdvrp", "--instance"])
        .arg(&inst)
        .arg("--out")
        .arg(&out)
        .args(FAST)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let cost: f64 = text.lines().next().unwrap().parse().unwrap();
    assert!(cost > 0.0);
    let listed: usize = text
        .lines()
        .skip(1)
        .map(|l| l.split(':').nth(1).unwrap().split_whitespace().count())
        .sum();
    assert_eq!(listed, 6);
}

#[test]
fn malformed_instance_exits_with_1() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = write(tmp.path(), "bad", &TOY.replace("3 0 10", "3 zero 10"));
    let out = bin()
        .args(["solve", "--variant", "mdvrp", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 6"), "{err}");
}

#[test]
fn wrong_variant_exits_with_1() {
    let tmp = tempfile::tempdir().unwrap();
    let inst = write(tmp.path(), "toy", TOY);
    let out = bin()
        .args(["solve", "--variant", "mdvrptw", "--instance"])
        .arg(&inst)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 6"));
}

#[test]
fn infeasible_only_exits_with_2() {
    // Two vehicles of capacity 50 cannot carry the total demand of 110.
    let tmp = tempfile::tempdir().unwrap();
    let text = TOY.replacen("2 2 6 2", "2 1 6 2", 1).replace("0 100", "0 50");
    let inst = write(tmp.path(), "tight", &text);
    let status = bin()
        .args(["solve", "--variant", "mdvrp", "--instance"])
        .arg(&inst)
        .args(FAST)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn bench_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("set");
    std::fs::create_dir(&dir).unwrap();
    write(&dir, "toy", TOY);
    write(&dir, "open", TOY);
    let bks = write(tmp.path(), "bks.csv", "name,cost,optimal_flag\ntoy,1,false\n");
    let report = tmp.path().join("report.csv");
    let out = bin()
        .args(["bench", "--variant", "mdovrp", "--runs", "2", "--dir"])
        .arg(&dir)
        .arg("--bks")
        .arg(&bks)
        .arg("--report")
        .arg(&report)
        .args(FAST)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("open,6,2,2,2,"));
    assert!(lines[1].ends_with(",,"), "no bks entry for `open`: {}", lines[1]);
    assert!(lines[2].starts_with("toy,"));
    assert!(!lines[2].ends_with(','));
    assert!(lines[3].starts_with("mean,"));
}
