use std::path::PathBuf;
use std::process::{Command, Output};

fn raidlay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raidlay"))
        .args(args)
        .output()
        .expect("run raidlay")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn three_failure_marks_from_binary() {
    let o = raidlay(&[
        "ft",
        "--scheme",
        "RR,PP1,RP1",
        "--n",
        "5",
        "--failures",
        "3",
        "--format",
        "table",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let marks: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .take(10)
        .map(|l| l.split_whitespace().skip(2).collect())
        .collect();
    let rr: String = marks.iter().map(|m| m[0]).collect();
    let pp1: String = marks.iter().map(|m| m[1]).collect();
    assert_eq!(rr, "x✓✓xx✓✓x✓x");
    assert_eq!(pp1, "✓xx✓✓xx✓x✓");
}

#[test]
fn curves_put_pp2_above_pp1() {
    let o = raidlay(&[
        "rel",
        "--scheme",
        "PP1,PP2",
        "--n",
        "5",
        "--lambda",
        "1e-4",
        "--t",
        "0:10000:100",
        "--mode",
        "exact",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<(f64, f64)> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("t_hours"))
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (v[1], v[2])
        })
        .collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|(pp1, pp2)| pp2 >= pp1));
}

#[test]
fn json_coverage_schema() {
    let o = raidlay(&[
        "ft",
        "--scheme",
        "RR",
        "--failures",
        "3",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &doc[0];
    assert_eq!(r["layout"], "RR");
    assert_eq!(r["n"], 5);
    assert_eq!(r["f"], 3);
    assert_eq!(r["total"], 10);
    assert_eq!(r["recovered"], 5);
    assert_eq!(r["failing"].as_array().unwrap().len(), 5);
}

#[test]
fn layout_file_round_trip_and_warnings() {
    let path = scratch("rr.layout");
    let o = raidlay(&["layout", "--scheme", "RR", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let back = raidlay(&["layout", "--file", path.to_str().unwrap()]);
    assert!(back.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&back));

    let odd = scratch("odd.layout");
    std::fs::write(
        &odd,
        "name = odd\ndisks = 2\nblocks = 2\ndisk 0: B0\ndisk 1: X(0,1)\n",
    )
    .unwrap();
    let o = raidlay(&["ft", "--file", odd.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("never stored"));

    let bad = scratch("bad.layout");
    std::fs::write(&bad, "name = bad\ndisks = 1\nblocks = 3\ndisk 0: X(2,2)\n").unwrap();
    let o = raidlay(&["layout", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(
        raidlay(&["ft", "--scheme", "RR", "--n", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(raidlay(&["ft", "--scheme", "XX"]).status.code(), Some(1));
    assert_eq!(
        raidlay(&["mc", "--scheme", "RR", "--p", "0.5", "--trials", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        raidlay(&["rel", "--scheme", "RR", "--n", "30"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(raidlay(&["--help"]).status.code(), Some(0));

    let o = Command::new(env!("CARGO_BIN_EXE_raidlay"))
        .args(["ft", "--scheme", "RR", "--n", "6"])
        .env("RAIDLAY_MAX_EXACT_DISKS", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
