use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn scaling(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scaling")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn synth(dir: &Path, extra: &[&str]) {
    let mut args = vec!["synth", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = scaling(&args);
    assert!(out.status.success(), "{}", stderr(&out));
}

fn report_row<'a>(csv: &'a str, series: &str) -> Vec<&'a str> {
    csv.lines().find(|l| l.starts_with(&format!("{series},"))).expect("row present").split(',').collect()
}

#[test]
fn synthetic_fgn_report_recovers_hurst() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth(&data, &["--kind", "fgn", "--hurst", "0.7", "--length", "8192", "--seed", "3", "--label", "fgn"]);
    let out_dir = dir.path().join("out");
    let out =
        scaling(&["report", "--input", data.join("fgn.csv").to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("fgn"));
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    let row = report_row(&csv, "fgn");
    for column in [3, 4, 5, 7] {
        let value: f64 = row[column].parse().unwrap();
        assert!((0.65..=0.75).contains(&value), "column {column}: {value} in {row:?}");
    }
    for file in ["dfa2.csv", "cdma.csv", "scalegram_dog10.csv", "tddma.csv", "cycles.csv"] {
        assert!(out_dir.join("fgn").join(file).exists(), "{file}");
    }
}

#[test]
fn two_row_file_yields_one_return() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.csv");
    fs::write(&path, "date,close\n2020-01-02,100\n2020-01-03,110\n").unwrap();
    let out = scaling(&["returns", "--input", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: Vec<String> = stdout(&out).lines().filter(|l| !l.starts_with('#')).map(str::to_owned).collect();
    let last = rows.last().unwrap();
    let value: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!((value - 1.1f64.ln()).abs() < 1e-12, "{rows:?}");
    assert_eq!(rows.len(), 2, "header plus one return: {rows:?}");
}

#[test]
fn zero_close_is_reported_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.csv");
    let mut body = String::from("date,close\n");
    for (day, close) in [(2, "100"), (3, "101"), (4, "102"), (5, "103"), (6, "104"), (7, "0"), (8, "105")] {
        body.push_str(&format!("2020-01-{day:02},{close}\n"));
    }
    fs::write(&path, body).unwrap();
    let out = scaling(&["returns", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 7"), "{}", stderr(&out));
}

#[test]
fn descending_dates_fail_the_series() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("back.csv");
    fs::write(&path, "2020-01-03,100\n2020-01-02,101\n2020-01-04,102\n").unwrap();
    let out = scaling(&["returns", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("ascending"), "{}", stderr(&out));
}

#[test]
fn failed_series_does_not_stop_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth(&data, &["--kind", "white", "--length", "4000", "--label", "good"]);
    fs::write(data.join("bad.csv"), "2020-01-02,100\n2020-01-01,100\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = scaling(&[
        "report",
        "--input",
        data.join("good.csv").to_str().unwrap(),
        "--input",
        data.join("bad.csv").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let csv = fs::read_to_string(out_dir.join("report.csv")).unwrap();
    report_row(&csv, "good");
    assert!(csv.contains("# failed bad"), "{csv}");
}

#[test]
fn report_without_inputs_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = scaling(&["report", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1, "{csv}");
}

#[test]
fn inverted_fit_range_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &["--kind", "white", "--length", "2000", "--label", "w"]);
    let out =
        scaling(&["dfa", "--input", dir.path().join("w.csv").to_str().unwrap(), "--fit-min", "200", "--fit-max", "20"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    synth(&data, &["--kind", "sine", "--length", "4000", "--seed", "5", "--label", "sine"]);
    let run = |name: &str| {
        let out_dir = dir.path().join(name);
        let out = scaling(&[
            "report",
            "--input",
            data.join("sine.csv").to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let mut files: Vec<(String, Vec<u8>)> = Vec::new();
        for path in [out_dir.join("report.csv")]
            .into_iter()
            .chain(fs::read_dir(out_dir.join("sine")).unwrap().map(|e| e.unwrap().path()))
        {
            files.push((path.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&path).unwrap()));
        }
        files.sort();
        (stdout(&out), files)
    };
    assert_eq!(run("a"), run("b"));
}
