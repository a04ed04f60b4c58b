//! External MIP/LP backends.
//!
//! A backend reads a free-format MPS file and writes a solution file:
//!
//! ```text
//! #status optimal
//! #objective 2
//! #bound 2
//! x_1_1_0 1
//! s_1 1
//! ```
//!
//! `#status` is one of `optimal`, `feasible`, `infeasible`, `timeout`,
//! `unknown`, `error`. Header lines other than `#status`, `#objective` and
//! `#bound` are ignored, as are blank lines. Every returned point is checked
//! against the model before it is reported.

use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::milp::{column_names, eval_point, relax, write_mps, MilpModel, MpsFlavor, PointAssignment, WriteError};

/// Environment variable overriding the one-shot command template.
pub const SOLVER_CMD_ENV: &str = "MMCT_SOLVER_CMD";
/// Environment variable overriding the persistent (serve) command.
pub const SOLVER_SERVE_ENV: &str = "MMCT_SOLVER_SERVE";
pub const GAP_TOL: f64 = 1e-6;
pub const VERIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    Timeout,
    Unknown,
    Error,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Timeout => "timeout",
            SolveStatus::Unknown => "unknown",
            SolveStatus::Error => "error",
        }
    }

    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::Feasible)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolveStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "optimal" => SolveStatus::Optimal,
            "feasible" => SolveStatus::Feasible,
            "infeasible" => SolveStatus::Infeasible,
            "timeout" => SolveStatus::Timeout,
            "unknown" => SolveStatus::Unknown,
            "error" => SolveStatus::Error,
            other => return Err(format!("unknown status {other:?}")),
        })
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Write(#[from] WriteError),
    #[error("i/o on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("backend process failed: {0}")]
    Process(String),
    #[error("solution file line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SolveError + '_ {
    move |source| SolveError::Io { path: path.to_path_buf(), source }
}

/// Contents of a neutral solution file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSolution {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    pub values: Vec<(String, f64)>,
}

pub fn parse_solution(text: &str) -> Result<RawSolution, SolveError> {
    let mut status = None;
    let mut objective = None;
    let mut bound = None;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| SolveError::Parse { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        let key = tok.next().unwrap_or_default();
        let val = tok.next();
        let number = |v: Option<&str>| -> Result<f64, SolveError> {
            let v = v.ok_or_else(|| err(format!("{key} needs a value")))?;
            v.parse::<f64>().map_err(|_| err(format!("{v:?} is not a number")))
        };
        match key {
            "#status" => status = Some(val.ok_or_else(|| err("#status needs a value".into()))?.parse().map_err(err)?),
            "#objective" => objective = Some(number(val)?),
            "#bound" => bound = Some(number(val)?),
            k if k.starts_with('#') => {}
            name => {
                let v = number(val)?;
                if tok.next().is_some() {
                    return Err(err("trailing tokens".into()));
                }
                values.push((name.to_string(), v));
            }
        }
    }
    let status = status.ok_or(SolveError::Parse { line: 0, message: "missing #status".into() })?;
    Ok(RawSolution { status, objective, bound, values })
}

pub trait Backend {
    /// Identifier recorded in benchmark logs.
    fn id(&self) -> String;
    /// Solves the MPS file at `model`, leaving a solution file at `solution`.
    fn run(&mut self, model: &Path, solution: &Path, time_limit: f64) -> Result<(), SolveError>;
}

fn default_shim() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scripts/highs_shim.py")
}

fn split_template(template: &str) -> Vec<String> {
    template.split_whitespace().map(str::to_string).collect()
}

/// Runs one process per solve from a command template with the placeholders
/// `{model}`, `{solution}` and `{time_limit}`.
#[derive(Debug, Clone)]
pub struct ProcessBackend {
    template: Vec<String>,
}

impl ProcessBackend {
    pub fn new(template: &str) -> Result<Self, SolveError> {
        let template = split_template(template);
        if template.is_empty() {
            return Err(SolveError::InvalidRequest("empty command template".into()));
        }
        for p in ["{model}", "{solution}"] {
            if !template.iter().any(|t| t.contains(p)) {
                return Err(SolveError::InvalidRequest(format!("command template lacks {p}")));
            }
        }
        Ok(ProcessBackend { template })
    }

    /// The template from the environment, or the bundled HiGHS shim.
    pub fn from_env() -> Result<Self, SolveError> {
        match std::env::var(SOLVER_CMD_ENV) {
            Ok(t) if !t.trim().is_empty() => Self::new(&t),
            _ => Self::new(&format!("python3 {} {{model}} {{solution}} {{time_limit}}", default_shim().display())),
        }
    }
}

impl Backend for ProcessBackend {
    fn id(&self) -> String {
        self.template.join(" ")
    }

    fn run(&mut self, model: &Path, solution: &Path, time_limit: f64) -> Result<(), SolveError> {
        let args: Vec<String> = self
            .template
            .iter()
            .map(|t| {
                t.replace("{model}", &model.display().to_string())
                    .replace("{solution}", &solution.display().to_string())
                    .replace("{time_limit}", &time_limit.to_string())
            })
            .collect();
        let out = Command::new(&args[0])
            .args(&args[1..])
            .stdin(Stdio::null())
            .output()
            .map_err(|e| SolveError::Process(format!("cannot start {}: {e}", args[0])))?;
        if !out.status.success() {
            return Err(SolveError::Process(format!(
                "{} exited with {}: {}",
                args[0],
                out.status,
                String::from_utf8_lossy(&out.stderr).trim()
            )));
        }
        Ok(())
    }
}

/// Keeps one backend process alive and sends it `MODEL SOLUTION TIME_LIMIT`
/// lines; the process answers each with a line starting with `done`.
pub struct ServeBackend {
    command: Vec<String>,
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl ServeBackend {
    pub fn spawn(command: &str) -> Result<Self, SolveError> {
        let command = split_template(command);
        if command.is_empty() {
            return Err(SolveError::InvalidRequest("empty serve command".into()));
        }
        let mut child = Command::new(&command[0])
            .args(&command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .map_err(|e| SolveError::Process(format!("cannot start {}: {e}", command[0])))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(ServeBackend { command, child, stdin, stdout })
    }

    /// The serve command from the environment, or the bundled HiGHS shim.
    pub fn from_env() -> Result<Self, SolveError> {
        match std::env::var(SOLVER_SERVE_ENV) {
            Ok(t) if !t.trim().is_empty() => Self::spawn(&t),
            _ => Self::spawn(&format!("python3 {} --serve", default_shim().display())),
        }
    }
}

impl Backend for ServeBackend {
    fn id(&self) -> String {
        self.command.join(" ")
    }

    fn run(&mut self, model: &Path, solution: &Path, time_limit: f64) -> Result<(), SolveError> {
        for p in [model, solution] {
            if p.to_string_lossy().contains(char::is_whitespace) {
                return Err(SolveError::InvalidRequest(format!("path {} contains whitespace", p.display())));
            }
        }
        writeln!(self.stdin, "{} {} {}", model.display(), solution.display(), time_limit)
            .and_then(|_| self.stdin.flush())
            .map_err(|e| SolveError::Process(format!("backend stdin: {e}")))?;
        let mut reply = String::new();
        let n = self.stdout.read_line(&mut reply).map_err(|e| SolveError::Process(format!("backend stdout: {e}")))?;
        if n == 0 {
            return Err(SolveError::Process("backend process exited".into()));
        }
        if !reply.starts_with("done") {
            return Err(SolveError::Process(format!("unexpected reply {:?}", reply.trim())));
        }
        Ok(())
    }
}

impl Drop for ServeBackend {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest<'a> {
    pub model: &'a MilpModel,
    pub time_limit: f64,
    /// Solve the LP relaxation instead.
    pub relax: bool,
    /// File stem for the model and solution files.
    pub tag: String,
}

impl<'a> SolveRequest<'a> {
    pub fn new(model: &'a MilpModel, time_limit: f64) -> Self {
        SolveRequest { model, time_limit, relax: false, tag: model.name.clone() }
    }

    pub fn relaxed(mut self) -> Self {
        self.relax = true;
        self
    }

    pub fn tagged(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub bound: Option<f64>,
    pub point: Option<PointAssignment>,
    pub wall_time: Duration,
    /// Why a returned point was rejected, when it was.
    pub verification: Option<String>,
}

fn file_stem(tag: &str) -> String {
    tag.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect()
}

/// Writes the model into `workdir`, runs `backend`, and verifies its answer.
pub fn solve(backend: &mut dyn Backend, request: &SolveRequest<'_>, workdir: &Path) -> Result<SolveOutcome, SolveError> {
    if !(request.time_limit > 0.0) {
        return Err(SolveError::InvalidRequest(format!("time limit {} is not positive", request.time_limit)));
    }
    let relaxed;
    let model = if request.relax {
        relaxed = relax(request.model);
        &relaxed
    } else {
        request.model
    };
    let stem = file_stem(&request.tag);
    let model_path = workdir.join(format!("{stem}.mps"));
    let solution_path = workdir.join(format!("{stem}.sol"));
    fs::write(&model_path, write_mps(model, MpsFlavor::Free)?).map_err(io_err(&model_path))?;
    let _ = fs::remove_file(&solution_path);

    let started = Instant::now();
    backend.run(&model_path, &solution_path, request.time_limit)?;
    let wall_time = started.elapsed();
    let text = fs::read_to_string(&solution_path).map_err(io_err(&solution_path))?;
    let raw = parse_solution(&text)?;
    interpret(model, raw, wall_time)
}

/// Maps a raw solution onto `model` and checks it.
pub fn interpret(model: &MilpModel, raw: RawSolution, wall_time: Duration) -> Result<SolveOutcome, SolveError> {
    let mut outcome = SolveOutcome {
        status: raw.status,
        objective: raw.objective,
        bound: raw.bound,
        point: None,
        wall_time,
        verification: None,
    };
    if !raw.status.has_solution() {
        if !raw.values.is_empty() {
            log::debug!("ignoring {} values reported with status {}", raw.values.len(), raw.status);
        }
        return Ok(outcome);
    }

    let names = column_names(model, MpsFlavor::Free)?;
    let index: std::collections::HashMap<&str, usize> = names.iter().enumerate().map(|(j, n)| (n.as_str(), j)).collect();
    let mut values: Vec<Option<f64>> = vec![None; names.len()];
    for (name, v) in &raw.values {
        match index.get(name.as_str()) {
            Some(&j) => values[j] = Some(*v),
            None => return Err(SolveError::Parse { line: 0, message: format!("unknown column {name:?}") }),
        }
    }
    let mut point = PointAssignment::new();
    for (var, value) in model.variables().iter().zip(values) {
        match value {
            Some(v) if v.is_finite() => point.set_f64(var.name.clone(), v),
            Some(v) => {
                outcome.status = SolveStatus::Error;
                outcome.verification = Some(format!("{} = {v}", var.name));
                return Ok(outcome);
            }
            None => {
                outcome.status = SolveStatus::Error;
                outcome.verification = Some(format!("no value for {}", var.name));
                return Ok(outcome);
            }
        }
    }

    let report = eval_point(model, &point, VERIFY_TOL).expect("every column is assigned");
    let evaluated = report.objective_f64();
    if !report.is_feasible() {
        let first: Vec<String> = report.violations.iter().take(3).map(|v| format!("{} by {}", v.name, v.amount_f64())).collect();
        outcome.status = SolveStatus::Error;
        outcome.verification = Some(format!("{} violations, e.g. {}", report.violations.len(), first.join(", ")));
        outcome.point = Some(point);
        return Ok(outcome);
    }
    if let Some(reported) = raw.objective {
        if (reported - evaluated).abs() > VERIFY_TOL * reported.abs().max(1.0) {
            outcome.status = SolveStatus::Error;
            outcome.verification = Some(format!("reported objective {reported} but the point evaluates to {evaluated}"));
            outcome.point = Some(point);
            return Ok(outcome);
        }
    }
    outcome.objective = Some(evaluated);
    if outcome.status == SolveStatus::Optimal {
        let proven = outcome.bound.is_some_and(|b| (evaluated - b).abs() <= GAP_TOL * evaluated.abs().max(1.0));
        if !proven {
            outcome.status = SolveStatus::Feasible;
        }
    }
    outcome.point = Some(point);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{int, LinExpr, Sense};
    use num_traits::Zero;

    const GOLDEN: &str = "#status optimal\n#objective 2\n#bound 2\n#time 0.01\n\nx 1\ny 0.5\n";

    fn tiny() -> MilpModel {
        let mut m = MilpModel::new("tiny");
        let x = m.binary("x", &[]);
        let y = m.continuous("y", &[], Coef::zero(), Some(int(1)));
        let mut obj = LinExpr::var(x);
        obj.add(y, int(2));
        m.set_objective(obj);
        m.add_constraint("c", LinExpr::var(x), Sense::Ge, LinExpr::constant(int(1)));
        m
    }

    use crate::milp::Coef;

    #[test]
    fn golden_solution_file() {
        let raw = parse_solution(GOLDEN).unwrap();
        assert_eq!(raw.status, SolveStatus::Optimal);
        assert_eq!(raw.objective, Some(2.0));
        assert_eq!(raw.bound, Some(2.0));
        assert_eq!(raw.values, vec![("x".to_string(), 1.0), ("y".to_string(), 0.5)]);
    }

    #[test]
    fn malformed_solution_files() {
        assert!(matches!(parse_solution("x 1\n"), Err(SolveError::Parse { line: 0, .. })));
        assert!(matches!(parse_solution("#status optimal\nx one\n"), Err(SolveError::Parse { line: 2, .. })));
        assert!(matches!(parse_solution("#status great\n"), Err(SolveError::Parse { line: 1, .. })));
    }

    #[test]
    fn verification_accepts_and_rejects() {
        let m = tiny();
        let ok = interpret(&m, parse_solution(GOLDEN).unwrap(), Duration::ZERO).unwrap();
        assert_eq!(ok.status, SolveStatus::Optimal);
        assert_eq!(ok.objective, Some(2.0));

        let bad = interpret(&m, parse_solution("#status optimal\n#objective 0\n#bound 0\nx 0\ny 0\n").unwrap(), Duration::ZERO)
            .unwrap();
        assert_eq!(bad.status, SolveStatus::Error);
        assert!(bad.verification.unwrap().contains('c'));

        let lying = interpret(&m, parse_solution("#status optimal\n#objective 1\n#bound 1\nx 1\ny 0.5\n").unwrap(), Duration::ZERO)
            .unwrap();
        assert_eq!(lying.status, SolveStatus::Error);

        let gap = interpret(&m, parse_solution("#status optimal\n#objective 2\n#bound 1\nx 1\ny 0.5\n").unwrap(), Duration::ZERO)
            .unwrap();
        assert_eq!(gap.status, SolveStatus::Feasible);

        let missing = interpret(&m, parse_solution("#status feasible\nx 1\n").unwrap(), Duration::ZERO).unwrap();
        assert_eq!(missing.status, SolveStatus::Error);
    }

    #[test]
    fn process_backend_with_fake_solver() {
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("fake.sh");
        fs::write(&script, format!("#!/bin/sh\nprintf '{}' > \"$2\"\n", GOLDEN.replace('\n', "\\n"))).unwrap();
        let mut backend = ProcessBackend::new(&format!("sh {} {{model}} {{solution}}", script.display())).unwrap();
        let m = tiny();
        let out = solve(&mut backend, &SolveRequest::new(&m, 1.0), dir.path()).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert!(dir.path().join("tiny.mps").exists());

        let mut broken = ProcessBackend::new("false {model} {solution}").unwrap();
        assert!(matches!(solve(&mut broken, &SolveRequest::new(&m, 1.0), dir.path()), Err(SolveError::Process(_))));
        assert!(matches!(
            solve(&mut backend, &SolveRequest::new(&m, 0.0), dir.path()),
            Err(SolveError::InvalidRequest(_))
        ));
        assert!(ProcessBackend::new("solver {model}").is_err());
    }
}
