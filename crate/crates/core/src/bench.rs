//! Batch runs over data sets × models with a resumable per-instance log and
//! table-style aggregates.
//!
//! Configuration is TOML:
//!
//! ```toml
//! time_limit = 10.0      # seconds per solve
//! workers = 1
//! cross_check = true     # compare proven optima with the exact oracle when in reach
//!
//! [[dataset]]
//! name = "c15"
//! paths = ["data/c15"]   # files or directories, relative to the config file
//! scale = 1              # multiply renewable data by this factor
//! strip_renewables = false
//!
//! [[dataset]]
//! name = "tiny"
//! generate = { shape = "c15", count = 5, seed = 1 }
//!
//! [[model]]
//! name = "SEE-TW-VF"
//! kind = "see"
//! mc = "full"
//! tw = true
//! vf = true
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulations::{build, FormulationOptions, ModeConsistency, ModelKind, StrongFlowRows};
use crate::generate::{corpus_instance, CorpusShape};
use crate::io::{load_instance, scale_renewables, strip_renewables};
use crate::milp::stats;
use crate::model::Instance;
use crate::oracle::{solve_exact, OracleLimits, OracleStatus};
use crate::preprocess::Preprocessed;
use crate::solve::{solve, Backend, SolveRequest, SolveStatus};

const BEST_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("i/o on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("log {path}: {source}")]
    Log { path: PathBuf, source: csv::Error },
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GenerateSpec {
    pub shape: String,
    pub count: u64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub name: String,
    #[serde(default)]
    pub paths: Vec<PathBuf>,
    #[serde(default)]
    pub generate: Option<GenerateSpec>,
    #[serde(default = "one")]
    pub scale: i64,
    #[serde(default)]
    pub strip_renewables: bool,
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    pub kind: String,
    #[serde(default)]
    pub mc: Option<String>,
    #[serde(default)]
    pub tw: bool,
    #[serde(default)]
    pub vf: bool,
    #[serde(default)]
    pub rc: bool,
    #[serde(default)]
    pub strong_event_time: bool,
    #[serde(default)]
    pub auxiliary_flow_rows: bool,
}

impl ModelConfig {
    pub fn resolve(&self) -> Result<(ModelKind, FormulationOptions), BenchError> {
        let kind: ModelKind = self.kind.parse().map_err(|e| BenchError::Config(format!("model {}: {e}", self.name)))?;
        let mut opts = FormulationOptions {
            time_windows: self.tw,
            variable_fixing: self.vf,
            incompatible_pairs: self.rc,
            strong_event_time: self.strong_event_time,
            ..Default::default()
        };
        if self.auxiliary_flow_rows {
            opts.strong_flow_rows = StrongFlowRows::Auxiliary;
        }
        if let Some(mc) = &self.mc {
            let mc: ModeConsistency = mc.parse().map_err(|e| BenchError::Config(format!("model {}: {e}", self.name)))?;
            opts.mode_consistency = Some(mc);
        }
        Ok((kind, opts))
    }
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub time_limit: f64,
    #[serde(default = "one_worker")]
    pub workers: usize,
    #[serde(default)]
    pub cross_check: bool,
    #[serde(default, rename = "dataset")]
    pub datasets: Vec<DatasetConfig>,
    #[serde(default, rename = "model")]
    pub models: Vec<ModelConfig>,
}

fn one_worker() -> usize {
    1
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        let cfg: BenchConfig = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    fn check(&self) -> Result<(), BenchError> {
        if !(self.time_limit > 0.0) {
            return Err(BenchError::Config("time_limit must be positive".into()));
        }
        if self.workers == 0 {
            return Err(BenchError::Config("workers must be at least 1".into()));
        }
        let mut names = HashSet::new();
        for m in &self.models {
            m.resolve()?;
            if !names.insert(&m.name) {
                return Err(BenchError::Config(format!("duplicate model name {}", m.name)));
            }
        }
        for d in &self.datasets {
            if d.scale < 1 {
                return Err(BenchError::Config(format!("dataset {}: scale must be at least 1", d.name)));
            }
            if let Some(g) = &d.generate {
                g.shape.parse::<CorpusShape>().map_err(BenchError::Config)?;
            }
        }
        Ok(())
    }
}

/// One (instance, model) run as persisted in the log.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub dataset: String,
    pub instance: String,
    pub model: String,
    pub status: String,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    pub cpu: f64,
    pub build: f64,
    pub vars: Option<usize>,
    pub cons: Option<usize>,
    pub seed: Option<u64>,
    pub options: String,
    pub backend: String,
    pub oracle: Option<i64>,
    pub message: String,
}

impl RunRecord {
    fn status(&self) -> Option<SolveStatus> {
        self.status.parse().ok()
    }

    fn has_solution(&self) -> bool {
        self.status().is_some_and(SolveStatus::has_solution) && self.objective.is_some()
    }
}

/// One aggregated table row.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchmarkRecord {
    pub dataset: String,
    pub model: String,
    pub instances: usize,
    pub feas: usize,
    pub opt: usize,
    pub best: usize,
    pub dz: Option<f64>,
    pub cpu: f64,
    pub vars: f64,
    pub cons: f64,
    /// Smallest generation seed in the group; `None` for file datasets.
    pub seed: Option<u64>,
    pub options: String,
    pub backend: String,
}

struct Job {
    dataset: usize,
    instance: String,
    seed: Option<u64>,
    source: JobSource,
}

enum JobSource {
    File(PathBuf),
    Generated(CorpusShape, u64),
}

fn expand_dataset(d: &DatasetConfig, idx: usize, base: &Path) -> Result<Vec<Job>, BenchError> {
    let mut jobs = Vec::new();
    for p in &d.paths {
        let path = if p.is_absolute() { p.clone() } else { base.join(p) };
        let io = |source| BenchError::Io { path: path.clone(), source };
        if path.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(&path)
                .map_err(io)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            for f in files {
                let name = f.file_name().unwrap().to_string_lossy().into_owned();
                jobs.push(Job { dataset: idx, instance: name, seed: None, source: JobSource::File(f) });
            }
        } else {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            jobs.push(Job { dataset: idx, instance: name, seed: None, source: JobSource::File(path) });
        }
    }
    if let Some(g) = &d.generate {
        let shape: CorpusShape = g.shape.parse().map_err(BenchError::Config)?;
        for n in 0..g.count {
            let seed = g.seed + n;
            jobs.push(Job {
                dataset: idx,
                instance: format!("{}_{seed}", shape.name()),
                seed: Some(seed),
                source: JobSource::Generated(shape, seed),
            });
        }
    }
    Ok(jobs)
}

fn read_log(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let err = |source| BenchError::Log { path: path.to_path_buf(), source };
    let mut reader = csv::Reader::from_path(path).map_err(err)?;
    let mut out = Vec::new();
    for row in reader.deserialize() {
        match row {
            Ok(r) => out.push(r),
            // a run killed mid-write leaves a truncated last line; it is simply redone
            Err(e) => log::warn!("skipping unreadable log row in {}: {e}", path.display()),
        }
    }
    Ok(out)
}

struct LogWriter {
    path: PathBuf,
    writer: csv::Writer<fs::File>,
}

impl LogWriter {
    fn open(path: &Path) -> Result<Self, BenchError> {
        let fresh = !path.exists() || fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
        let writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
        Ok(LogWriter { path: path.to_path_buf(), writer })
    }

    fn append(&mut self, record: &RunRecord) -> Result<(), BenchError> {
        let err = |source| BenchError::Log { path: self.path.clone(), source };
        self.writer.serialize(record).map_err(err)?;
        self.writer.flush().map_err(|source| BenchError::Io { path: self.path.clone(), source })
    }
}

fn load_job(d: &DatasetConfig, job: &Job) -> Result<Instance, String> {
    let inst = match &job.source {
        JobSource::File(p) => load_instance(p).map_err(|e| e.to_string())?.instance,
        JobSource::Generated(shape, seed) => corpus_instance(*shape, *seed),
    };
    let inst = if d.scale > 1 { scale_renewables(&inst, d.scale) } else { inst };
    Ok(if d.strip_renewables { strip_renewables(&inst) } else { inst })
}

fn run_job(
    cfg: &BenchConfig,
    job: &Job,
    todo: &[usize],
    backend: &mut dyn Backend,
    workdir: &Path,
    sink: &mut dyn FnMut(RunRecord) -> Result<(), BenchError>,
) -> Result<(), BenchError> {
    let d = &cfg.datasets[job.dataset];
    let backend_id = backend.id();
    let blank = |model: &ModelConfig| RunRecord {
        dataset: d.name.clone(),
        instance: job.instance.clone(),
        model: model.name.clone(),
        status: SolveStatus::Error.to_string(),
        objective: None,
        bound: None,
        cpu: 0.0,
        build: 0.0,
        vars: None,
        cons: None,
        seed: job.seed,
        options: String::new(),
        backend: backend_id.clone(),
        oracle: None,
        message: String::new(),
    };
    let inst = match load_job(d, job) {
        Ok(i) => i,
        Err(e) => {
            for &m in todo {
                let mut r = blank(&cfg.models[m]);
                r.message = e.clone();
                sink(r)?;
            }
            return Ok(());
        }
    };
    let oracle = if cfg.cross_check {
        let limits = OracleLimits { node_limit: 1_000_000, ..Default::default() };
        solve_exact(&inst, limits).ok().filter(|r| r.status == OracleStatus::Optimal).and_then(|r| r.makespan)
    } else {
        None
    };
    let pre = Preprocessed::new(&inst);
    for &mi in todo {
        let mc = &cfg.models[mi];
        let mut rec = blank(mc);
        rec.oracle = oracle;
        let (kind, opts) = mc.resolve()?;
        rec.options = opts.tag();
        let started = Instant::now();
        let model = match build(kind, &inst, &pre, &opts) {
            Ok(m) => m,
            Err(e) => {
                rec.message = e.to_string();
                sink(rec)?;
                continue;
            }
        };
        rec.build = started.elapsed().as_secs_f64();
        let s = stats(&model);
        rec.vars = Some(s.variables);
        rec.cons = Some(s.constraints);
        let tag = format!("{}-{}-{}", d.name, job.instance, mc.name);
        match solve(backend, &SolveRequest::new(&model, cfg.time_limit).tagged(tag), workdir) {
            Ok(out) => {
                rec.status = out.status.to_string();
                rec.objective = out.objective.filter(|_| out.status.has_solution());
                rec.bound = out.bound;
                rec.cpu = out.wall_time.as_secs_f64();
                rec.message = out.verification.unwrap_or_default();
                if let (Some(z), Some(o), SolveStatus::Optimal) = (rec.objective, oracle, out.status) {
                    if (z - o as f64).abs() > BEST_TOL {
                        log::error!("{} on {}: optimum {z} differs from oracle {o}", mc.name, job.instance);
                        rec.message = format!("oracle mismatch: {o}");
                    }
                }
            }
            Err(e) => rec.message = e.to_string(),
        }
        sink(rec)?;
    }
    Ok(())
}

/// Runs every (instance, model) pair not already present in `log_path`, then
/// aggregates the whole log. `make_backend` is called once per worker.
pub fn run_benchmark<F>(cfg: &BenchConfig, base_dir: &Path, log_path: &Path, make_backend: F) -> Result<Vec<BenchmarkRecord>, BenchError>
where
    F: Fn() -> Result<Box<dyn Backend>, String> + Sync,
{
    let mut jobs = Vec::new();
    for (i, d) in cfg.datasets.iter().enumerate() {
        jobs.extend(expand_dataset(d, i, base_dir)?);
    }
    let done: HashSet<(String, String, String)> =
        read_log(log_path)?.into_iter().map(|r| (r.dataset, r.instance, r.model)).collect();
    let pending: Vec<(Job, Vec<usize>)> = jobs
        .into_iter()
        .filter_map(|job| {
            let dname = &cfg.datasets[job.dataset].name;
            let todo: Vec<usize> = (0..cfg.models.len())
                .filter(|&m| !done.contains(&(dname.clone(), job.instance.clone(), cfg.models[m].name.clone())))
                .collect();
            (!todo.is_empty()).then_some((job, todo))
        })
        .collect();

    if !pending.is_empty() {
        let writer = Mutex::new(LogWriter::open(log_path)?);
        let queue = Mutex::new(pending.iter());
        let failure: Mutex<Option<BenchError>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for _ in 0..cfg.workers.min(pending.len()) {
                scope.spawn(|| {
                    let workdir = match tempfile::tempdir() {
                        Ok(d) => d,
                        Err(source) => {
                            *failure.lock().unwrap() = Some(BenchError::Io { path: std::env::temp_dir(), source });
                            return;
                        }
                    };
                    let mut backend = match make_backend() {
                        Ok(b) => b,
                        Err(e) => {
                            *failure.lock().unwrap() = Some(BenchError::Config(format!("backend: {e}")));
                            return;
                        }
                    };
                    loop {
                        if failure.lock().unwrap().is_some() {
                            return;
                        }
                        let Some((job, todo)) = queue.lock().unwrap().next() else { return };
                        let mut sink = |r: RunRecord| writer.lock().unwrap().append(&r);
                        if let Err(e) = run_job(cfg, job, todo, backend.as_mut(), workdir.path(), &mut sink) {
                            *failure.lock().unwrap() = Some(e);
                            return;
                        }
                    }
                });
            }
        });
        if let Some(e) = failure.into_inner().unwrap() {
            return Err(e);
        }
    }

    let wanted: HashSet<(&str, &str)> =
        cfg.datasets.iter().flat_map(|d| cfg.models.iter().map(move |m| (d.name.as_str(), m.name.as_str()))).collect();
    let mut records = read_log(log_path)?;
    records.retain(|r| wanted.contains(&(r.dataset.as_str(), r.model.as_str())));
    Ok(aggregate(&records))
}

/// Aggregates per (data set, model). Best counts every model reaching the
/// least makespan found on an instance; Δz averages `100 (z - best) / best`
/// over solutions that are not proven optimal.
pub fn aggregate(records: &[RunRecord]) -> Vec<BenchmarkRecord> {
    let mut best: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    for r in records.iter().filter(|r| r.has_solution()) {
        let z = r.objective.unwrap();
        best.entry((&r.dataset, &r.instance)).and_modify(|b| *b = b.min(z)).or_insert(z);
    }
    let mut groups: BTreeMap<(&str, &str), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((&r.dataset, &r.model)).or_default().push(r);
    }
    let mut out: Vec<BenchmarkRecord> = groups
        .into_iter()
        .map(|((dataset, model), rows)| {
            let n = rows.len();
            let mut feas = 0;
            let mut opt = 0;
            let mut nbest = 0;
            let mut gaps = Vec::new();
            for r in &rows {
                if !r.has_solution() {
                    continue;
                }
                feas += 1;
                let z = r.objective.unwrap();
                let b = best[&(r.dataset.as_str(), r.instance.as_str())];
                if z <= b + BEST_TOL {
                    nbest += 1;
                }
                if r.status() == Some(SolveStatus::Optimal) {
                    opt += 1;
                } else if b > 0.0 {
                    gaps.push(100.0 * (z - b) / b);
                }
            }
            let mean = |xs: &mut dyn Iterator<Item = f64>| {
                let v: Vec<f64> = xs.collect();
                if v.is_empty() {
                    0.0
                } else {
                    v.iter().sum::<f64>() / v.len() as f64
                }
            };
            BenchmarkRecord {
                dataset: dataset.to_string(),
                model: model.to_string(),
                instances: n,
                feas,
                opt,
                best: nbest,
                dz: (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64),
                cpu: mean(&mut rows.iter().map(|r| r.cpu)),
                vars: mean(&mut rows.iter().filter_map(|r| r.vars.map(|v| v as f64))),
                cons: mean(&mut rows.iter().filter_map(|r| r.cons.map(|v| v as f64))),
                seed: rows.iter().filter_map(|r| r.seed).min(),
                options: rows[0].options.clone(),
                backend: rows[0].backend.clone(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.dataset
            .cmp(&b.dataset)
            .then((b.feas, b.opt, b.best).cmp(&(a.feas, a.opt, a.best)))
            .then(a.model.cmp(&b.model))
    });
    out
}

pub const SUMMARY_HEADER: &str = "dataset,model,feas,opt,best,dz,cpu,vars,cons,instances,seed,options,backend";

/// Summary CSV. The first line is a comment stating how Δz treats missing solutions.
pub fn summary_csv(records: &[BenchmarkRecord]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in records {
        let dz = r.dz.map(|d| format!("{d:.2}")).unwrap_or_default();
        w.write_record([
            r.dataset.as_str(),
            r.model.as_str(),
            &r.feas.to_string(),
            &r.opt.to_string(),
            &r.best.to_string(),
            &dz,
            &format!("{:.3}", r.cpu),
            &format!("{:.1}", r.vars),
            &format!("{:.1}", r.cons),
            &r.instances.to_string(),
            &r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.options.as_str(),
            r.backend.as_str(),
        ])
        .expect("writing to memory");
    }
    let body = String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv is utf-8");
    format!("# dz: mean over solutions not proven optimal; instances where a model found no solution are excluded\n{SUMMARY_HEADER}\n{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(dataset: &str, instance: &str, model: &str, status: SolveStatus, z: Option<f64>) -> RunRecord {
        RunRecord {
            dataset: dataset.into(),
            instance: instance.into(),
            model: model.into(),
            status: status.to_string(),
            objective: z,
            bound: None,
            cpu: 1.0,
            build: 0.0,
            vars: Some(10),
            cons: Some(20),
            seed: None,
            options: String::new(),
            backend: "test".into(),
            oracle: None,
            message: String::new(),
        }
    }

    #[test]
    fn aggregate_counts_and_ranking() {
        use SolveStatus::*;
        let rows = vec![
            rec("d", "a", "X", Optimal, Some(10.0)),
            rec("d", "b", "X", Feasible, Some(12.0)),
            rec("d", "a", "Y", Optimal, Some(10.0)),
            rec("d", "b", "Y", Optimal, Some(11.0)),
            rec("d", "a", "Z", Timeout, None),
            rec("d", "b", "Z", Feasible, Some(11.0)),
        ];
        let agg = aggregate(&rows);
        let names: Vec<&str> = agg.iter().map(|r| r.model.as_str()).collect();
        assert_eq!(names, ["Y", "X", "Z"]);
        let x = &agg[1];
        assert_eq!((x.feas, x.opt, x.best), (2, 1, 1));
        assert!((x.dz.unwrap() - 100.0 / 11.0).abs() < 1e-9);
        let y = &agg[0];
        assert_eq!((y.feas, y.opt, y.best, y.dz), (2, 2, 2, None));
        let z = &agg[2];
        assert_eq!((z.feas, z.opt, z.best), (1, 0, 1));
        assert_eq!(z.dz, Some(0.0));
        for r in &agg {
            assert!(r.opt <= r.feas && r.feas <= r.instances && r.best <= r.feas);
        }
    }

    #[test]
    fn config_parsing() {
        let cfg = BenchConfig::from_toml(
            r#"
time_limit = 5.0
[[dataset]]
name = "tiny"
generate = { shape = "c15", count = 2, seed = 3 }
[[model]]
name = "SEE"
kind = "see"
mc = "full"
[[model]]
name = "FCT-W-RC"
kind = "fct-w"
rc = true
"#,
        )
        .unwrap();
        assert_eq!(cfg.workers, 1);
        assert_eq!(cfg.datasets[0].scale, 1);
        let (kind, opts) = cfg.models[1].resolve().unwrap();
        assert_eq!(kind, ModelKind::FctW);
        assert!(opts.incompatible_pairs);
        assert!(BenchConfig::from_toml("time_limit = 0.0").is_err());
        assert!(BenchConfig::from_toml("time_limit = 1.0\n[[model]]\nname='a'\nkind='nope'").is_err());
        assert!(BenchConfig::from_toml("time_limit = 1.0\nbogus = 1").is_err());
    }

    #[test]
    fn empty_config_yields_no_rows() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = BenchConfig::from_toml("time_limit = 1.0").unwrap();
        let rows = run_benchmark(&cfg, dir.path(), &dir.path().join("log.csv"), || Err("unused".into())).unwrap();
        assert!(rows.is_empty());
        assert!(summary_csv(&rows).lines().nth(1) == Some(SUMMARY_HEADER));
    }
}
