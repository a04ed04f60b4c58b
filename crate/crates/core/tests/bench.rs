use std::fs;

use mmct::bench::{run_benchmark, summary_csv, BenchConfig, RunRecord, SUMMARY_HEADER};
use mmct::io::write_canonical;
use mmct::model::Instance;
use mmct::solve::{Backend, ServeBackend};

const CONFIG: &str = r#"
time_limit = 30.0
workers = 1
cross_check = true

[[dataset]]
name = "toy"
paths = ["toy"]

[[dataset]]
name = "toy_d2"
paths = ["toy"]
scale = 2

[[model]]
name = "SEE+MC"
kind = "see"
mc = "full"

[[model]]
name = "FCT-W"
kind = "fct-w"
"#;

fn make() -> Result<Box<dyn Backend>, String> {
    ServeBackend::from_env().map(|b| Box::new(b) as Box<dyn Backend>).map_err(|e| e.to_string())
}

fn read_log(path: &std::path::Path) -> Vec<RunRecord> {
    csv::Reader::from_path(path).unwrap().deserialize().map(|r| r.unwrap()).collect()
}

#[test]
fn toy_benchmark_runs_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("toy")).unwrap();
    fs::write(dir.path().join("toy/example1.txt"), write_canonical(&Instance::example1())).unwrap();
    fs::write(dir.path().join("toy/remark.txt"), write_canonical(&Instance::remark())).unwrap();
    let cfg = BenchConfig::from_toml(CONFIG).unwrap();
    let log = dir.path().join("log.csv");

    let rows = run_benchmark(&cfg, dir.path(), &log, make).unwrap();
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!((r.instances, r.feas, r.opt, r.best), (2, 2, 2, 2), "{r:?}");
        assert_eq!(r.dz, None);
    }
    let records = read_log(&log);
    assert_eq!(records.len(), 8);
    for r in &records {
        let expected = if r.instance.contains("example1") { 2.0 } else { 4.0 };
        assert_eq!(r.objective, Some(expected), "{r:?}");
        assert_eq!(r.oracle, Some(expected as i64), "{r:?}");
    }

    // A second run reads everything back from the log.
    let again = run_benchmark(&cfg, dir.path(), &log, || Err("no backend needed".into())).unwrap();
    assert_eq!(again, rows);
    assert_eq!(read_log(&log).len(), 8);

    // Dropping log lines makes exactly those runs happen again.
    let text = fs::read_to_string(&log).unwrap();
    let kept: Vec<&str> = text.lines().take(5).collect();
    fs::write(&log, kept.join("\n") + "\n").unwrap();
    let resumed = run_benchmark(&cfg, dir.path(), &log, make).unwrap();
    assert_eq!(resumed.len(), 4);
    assert_eq!(read_log(&log).len(), 8);

    let csv = summary_csv(&resumed);
    assert_eq!(csv.lines().nth(1), Some(SUMMARY_HEADER));
    assert_eq!(csv.lines().count(), 6);
}
