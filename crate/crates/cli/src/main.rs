use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mmct::bench::{run_benchmark, summary_csv, BenchConfig};
use mmct::formulations::{
    self, build, decode, remark_zero_point, solution_a, solution_b, FormulationOptions, ModeConsistency, ModelKind,
    StrongFlowRows,
};
use mmct::generate::{corpus_instance, CorpusShape};
use mmct::io::{load_instance, scale_renewables, strip_renewables, write_canonical, write_psplib_mm, ParsedInstance};
use mmct::milp::{eval_point, relax, stats, write_lp, write_mps, MpsFlavor};
use mmct::model::{validate_schedule, Instance, Schedule, DEFAULT_TOL};
use mmct::oracle::{solve_exact, OracleLimits, OracleStatus};
use mmct::preprocess::{resource_strength, serial_horizon, Preprocessed};
use mmct::solve::{solve, Backend, ProcessBackend, ServeBackend, SolveRequest, SolveStatus};

/// Exit code for proven infeasibility (or an invalid schedule).
const EXIT_INFEASIBLE: u8 = 3;
/// Exit code when no answer was obtained within the limits.
const EXIT_UNDECIDED: u8 = 4;

static CSV_HEADER_DONE: AtomicBool = AtomicBool::new(false);

#[derive(Parser)]
#[command(name = "mmct", version, about = "Continuous-time MILP formulations for multi-mode project scheduling")]
struct Cli {
    /// Output format for results.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize an instance file.
    Parse { instance: String },
    /// Write a derived instance (scaled or without renewable resources).
    Derive {
        instance: String,
        #[arg(long, conflicts_with = "strip_renewables")]
        scale: Option<i64>,
        #[arg(long)]
        strip_renewables: bool,
        /// Output file format.
        #[arg(long, value_enum, default_value_t = InstanceFormat::Psplib)]
        to: InstanceFormat,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Compile an instance into a model file.
    Build {
        instance: String,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = FileFormat::Mps)]
        file: FileFormat,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Print model statistics instead of the model.
        #[arg(long)]
        stats: bool,
    },
    /// Build, solve through the external backend, decode and validate.
    Solve {
        instance: String,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 300.0)]
        time_limit: f64,
        /// Backend command template; overrides MMCT_SOLVER_CMD.
        #[arg(long)]
        backend: Option<String>,
        /// Keep model and solution files here.
        #[arg(long)]
        workdir: Option<PathBuf>,
        /// Write the decoded schedule here.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Check a schedule file (`i S_i m(i)` per line) against an instance.
    Validate {
        instance: String,
        schedule: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Solve a small instance exactly.
    Oracle {
        instance: String,
        #[arg(long, default_value_t = mmct::oracle::DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        force: bool,
    },
    /// Run a benchmark configuration.
    Bench {
        config: PathBuf,
        /// Per-instance log; rerunning with the same log resumes.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Start a fresh backend process per solve instead of a persistent one.
        #[arg(long)]
        one_shot: bool,
    },
    /// Reproduce the mode-consistency counterexamples.
    Counterexample {
        /// Skip the external solver; report the certificates and the exact optimum only.
        #[arg(long)]
        offline: bool,
    },
    /// Write benchmark-shaped instances.
    Generate {
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InstanceFormat {
    Psplib,
    Canonical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    Mps,
    FixedMps,
    Lp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    See,
    SeeA,
    Rsee,
    Ooe,
    OoeA,
    FctW,
    FctS,
}

impl From<KindArg> for ModelKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::See => ModelKind::See,
            KindArg::SeeA => ModelKind::SeeA,
            KindArg::Rsee => ModelKind::Rsee,
            KindArg::Ooe => ModelKind::Ooe,
            KindArg::OoeA => ModelKind::OoeA,
            KindArg::FctW => ModelKind::FctW,
            KindArg::FctS => ModelKind::FctS,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McArg {
    None,
    Full,
    Agg,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: KindArg,
    #[arg(long, value_enum)]
    mc: Option<McArg>,
    #[arg(long)]
    tw: bool,
    #[arg(long)]
    vf: bool,
    #[arg(long)]
    rc: bool,
    /// Add the dominating event-time rows (OOE family).
    #[arg(long)]
    strong_event_time: bool,
    /// Linearize the FCT-S flow bound with auxiliary variables.
    #[arg(long)]
    aux_flow: bool,
    /// Allow option combinations without a published counterpart.
    #[arg(long)]
    experimental: bool,
    /// Use the LP relaxation.
    #[arg(long)]
    relax: bool,
}

impl ModelArgs {
    fn options(&self) -> FormulationOptions {
        FormulationOptions {
            mode_consistency: self.mc.map(|m| match m {
                McArg::None => ModeConsistency::None,
                McArg::Full => ModeConsistency::Full,
                McArg::Agg => ModeConsistency::Aggregate,
            }),
            time_windows: self.tw,
            variable_fixing: self.vf,
            incompatible_pairs: self.rc,
            strong_event_time: self.strong_event_time,
            strong_flow_rows: if self.aux_flow { StrongFlowRows::Auxiliary } else { StrongFlowRows::Triple },
            experimental: self.experimental,
        }
    }

    fn build(&self, inst: &Instance) -> Result<(ModelKind, mmct::milp::MilpModel)> {
        let kind: ModelKind = self.model.into();
        let model = build(kind, inst, &Preprocessed::new(inst), &self.options())?;
        Ok((kind, if self.relax { relax(&model) } else { model }))
    }
}

/// Loads a file, or one of the built-in instances `example1` and `remark`.
fn load(spec: &str) -> Result<ParsedInstance> {
    let builtin = match spec {
        "example1" => Some(Instance::example1()),
        "remark" => Some(Instance::remark()),
        _ => None,
    };
    if let Some(instance) = builtin {
        return Ok(ParsedInstance {
            instance,
            source: mmct::io::InstanceSource {
                format: mmct::io::SourceFormat::Canonical,
                origin: spec.to_string(),
                horizon: None,
                file_jobs: None,
                dummy_jobs: None,
            },
        });
    }
    load_instance(spec).with_context(|| format!("loading {spec}"))
}

fn emit(out: &mut dyn Write, format: Format, text: &str, row: &impl Serialize) -> Result<()> {
    match format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => writeln!(out, "{}", serde_json::to_string(row)?)?,
        Format::Csv => {
            let first = !CSV_HEADER_DONE.swap(true, Ordering::Relaxed);
            let mut w = csv::WriterBuilder::new().has_headers(first).from_writer(Vec::new());
            w.serialize(row)?;
            out.write_all(&w.into_inner().map_err(|e| anyhow::anyhow!(e.to_string()))?)?;
        }
    }
    Ok(())
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Summary {
    origin: String,
    format: String,
    activities: usize,
    modes_min: usize,
    modes_max: usize,
    renewable: usize,
    nonrenewable: usize,
    arcs: usize,
    horizon: i64,
    rs: String,
}

fn cmd_parse(spec: &str, format: Format) -> Result<u8> {
    let parsed = load(spec)?;
    let inst = &parsed.instance;
    let pre = Preprocessed::new(inst);
    let modes: Vec<usize> = (0..inst.activity_count()).map(|i| inst.mode_count(i)).collect();
    let rs: Vec<String> = (0..inst.renewable_count())
        .map(|k| resource_strength(inst, &pre.graph, k).map_or("-".into(), |r| format!("{:.3}", *r.numer() as f64 / *r.denom() as f64)))
        .collect();
    let row = Summary {
        origin: parsed.source.origin.clone(),
        format: parsed.source.format.tag().to_string(),
        activities: inst.activity_count(),
        modes_min: *modes.iter().min().unwrap(),
        modes_max: *modes.iter().max().unwrap(),
        renewable: inst.renewable_count(),
        nonrenewable: inst.nonrenewable_count(),
        arcs: inst.precedence().len(),
        horizon: serial_horizon(inst),
        rs: rs.join(" "),
    };
    let mode_text = if row.modes_min == row.modes_max { row.modes_min.to_string() } else { format!("{}-{}", row.modes_min, row.modes_max) };
    let text = format!(
        "{} ({}): A={} |M_i|={} |R|={} |N|={} arcs={} horizon={} RS=[{}]",
        row.origin, row.format, row.activities, mode_text, row.renewable, row.nonrenewable, row.arcs, row.horizon, row.rs
    );
    emit(&mut std::io::stdout(), format, &text, &row)?;
    Ok(0)
}

fn cmd_derive(spec: &str, scale: Option<i64>, strip: bool, to: InstanceFormat, out: Option<&Path>) -> Result<u8> {
    let inst = load(spec)?.instance;
    let derived = match (scale, strip) {
        (Some(d), _) if d < 1 => bail!("--scale must be at least 1"),
        (Some(d), _) => scale_renewables(&inst, d),
        (None, true) => strip_renewables(&inst),
        (None, false) => bail!("derive needs --scale or --strip-renewables"),
    };
    let text = match to {
        InstanceFormat::Psplib => write_psplib_mm(&derived, serial_horizon(&derived)),
        InstanceFormat::Canonical => write_canonical(&derived),
    };
    write_output(out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct StatsRow {
    model: String,
    variables: usize,
    binaries: usize,
    constraints: usize,
    nonzeros: usize,
}

fn cmd_build(spec: &str, args: &ModelArgs, file: FileFormat, out: Option<&Path>, show_stats: bool, format: Format) -> Result<u8> {
    let inst = load(spec)?.instance;
    let (_, model) = args.build(&inst)?;
    if show_stats {
        let s = stats(&model);
        let row = StatsRow { model: model.name.clone(), variables: s.variables, binaries: s.binaries, constraints: s.constraints, nonzeros: s.nonzeros };
        let text = format!("{}: {} variables ({} binary), {} constraints, {} nonzeros", row.model, row.variables, row.binaries, row.constraints, row.nonzeros);
        emit(&mut std::io::stdout(), format, &text, &row)?;
        return Ok(0);
    }
    let text = match file {
        FileFormat::Mps => write_mps(&model, MpsFlavor::Free)?,
        FileFormat::FixedMps => write_mps(&model, MpsFlavor::Fixed)?,
        FileFormat::Lp => write_lp(&model)?,
    };
    write_output(out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct SolveRow {
    instance: String,
    model: String,
    status: String,
    objective: Option<f64>,
    bound: Option<f64>,
    seconds: f64,
    schedule_valid: Option<bool>,
    message: String,
}

fn write_schedule(sched: &Schedule) -> String {
    let mut s = String::from("# activity start mode\n");
    for (i, (start, m)) in sched.start.iter().zip(&sched.mode).enumerate() {
        s.push_str(&format!("{} {} {}\n", i + 1, start, m + 1));
    }
    s
}

fn read_schedule(inst: &Instance, path: &Path) -> Result<Schedule> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let a = inst.activity_count();
    let mut start = vec![None; a];
    let mut mode = vec![0usize; a];
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        if tok.len() != 3 {
            bail!("{}:{}: expected `activity start mode`", path.display(), n + 1);
        }
        let i: usize = tok[0].parse().with_context(|| format!("{}:{}", path.display(), n + 1))?;
        let s: f64 = tok[1].parse().with_context(|| format!("{}:{}", path.display(), n + 1))?;
        let m: usize = tok[2].parse().with_context(|| format!("{}:{}", path.display(), n + 1))?;
        if i == 0 || i > a || m == 0 {
            bail!("{}:{}: activity {i} mode {m} out of range", path.display(), n + 1);
        }
        start[i - 1] = Some(s);
        mode[i - 1] = m - 1;
    }
    let start: Vec<f64> = start
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.with_context(|| format!("no line for activity {}", i + 1)))
        .collect::<Result<_>>()?;
    Ok(Schedule::new(inst, start, mode)?)
}

fn process_backend(cmd: Option<&str>) -> Result<ProcessBackend> {
    Ok(match cmd {
        Some(c) => ProcessBackend::new(c)?,
        None => ProcessBackend::from_env()?,
    })
}

fn cmd_solve(
    spec: &str,
    args: &ModelArgs,
    time_limit: f64,
    backend_cmd: Option<&str>,
    workdir: Option<&Path>,
    schedule_out: Option<&Path>,
    format: Format,
) -> Result<u8> {
    let inst = load(spec)?.instance;
    let (kind, model) = args.build(&inst)?;
    let mut backend = process_backend(backend_cmd)?;
    let tmp = tempfile::tempdir()?;
    let dir = workdir.unwrap_or(tmp.path());
    let outcome = solve(&mut backend, &SolveRequest::new(&model, time_limit), dir)?;
    let mut row = SolveRow {
        instance: spec.to_string(),
        model: model.name.clone(),
        status: outcome.status.to_string(),
        objective: outcome.objective,
        bound: outcome.bound,
        seconds: outcome.wall_time.as_secs_f64(),
        schedule_valid: None,
        message: outcome.verification.clone().unwrap_or_default(),
    };
    if outcome.status.has_solution() && !args.relax {
        match decode(kind, &inst, outcome.point.as_ref().unwrap(), DEFAULT_TOL) {
            Ok(sched) => {
                let report = validate_schedule(&inst, &sched, DEFAULT_TOL)?;
                row.schedule_valid = Some(report.is_feasible());
                if !report.is_feasible() {
                    row.message = report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ");
                }
                if let Some(p) = schedule_out {
                    fs::write(p, write_schedule(&sched)).with_context(|| format!("writing {}", p.display()))?;
                }
            }
            Err(e) => row.message = format!("decode: {e}"),
        }
    }
    let obj = row.objective.map_or("-".to_string(), |z| format!("{z}"));
    let mut text = format!("{} on {}: {} objective {} ({:.2}s)", row.model, row.instance, row.status, obj, row.seconds);
    if let Some(v) = row.schedule_valid {
        text.push_str(if v { ", schedule valid" } else { ", schedule INVALID" });
    }
    if !row.message.is_empty() {
        text.push_str(&format!(" [{}]", row.message));
    }
    emit(&mut std::io::stdout(), format, &text, &row)?;
    Ok(match outcome.status {
        SolveStatus::Optimal | SolveStatus::Feasible => 0,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::Timeout | SolveStatus::Unknown => EXIT_UNDECIDED,
        SolveStatus::Error => 1,
    })
}

#[derive(Serialize)]
struct ValidateRow {
    feasible: bool,
    makespan: f64,
    precedence_ok: bool,
    renewable_ok: bool,
    nonrenewable_ok: bool,
    violations: Vec<String>,
}

fn cmd_validate(spec: &str, path: &Path, tol: f64, format: Format) -> Result<u8> {
    let inst = load(spec)?.instance;
    let sched = read_schedule(&inst, path)?;
    let report = validate_schedule(&inst, &sched, tol)?;
    let row = ValidateRow {
        feasible: report.is_feasible(),
        makespan: report.recomputed_makespan,
        precedence_ok: report.precedence_ok,
        renewable_ok: report.renewable_ok,
        nonrenewable_ok: report.nonrenewable_ok,
        violations: report.violations.iter().map(|v| v.to_string()).collect(),
    };
    let mut text = format!("{} makespan {}", if row.feasible { "feasible" } else { "INFEASIBLE" }, row.makespan);
    for v in &row.violations {
        text.push_str(&format!("\n  {v}"));
    }
    emit(&mut std::io::stdout(), format, &text, &row)?;
    Ok(if row.feasible { 0 } else { EXIT_INFEASIBLE })
}

#[derive(Serialize)]
struct OracleRow {
    status: String,
    makespan: Option<i64>,
    modes: String,
    starts: String,
    nodes: u64,
    seconds: f64,
}

fn cmd_oracle(spec: &str, node_limit: u64, time_limit: Option<f64>, force: bool, format: Format) -> Result<u8> {
    let inst = load(spec)?.instance;
    let limits = OracleLimits { node_limit, time_limit: time_limit.map(std::time::Duration::from_secs_f64), force };
    let res = solve_exact(&inst, limits)?;
    let (modes, starts) = match &res.schedule {
        Some(s) => (
            s.mode.iter().map(|m| (m + 1).to_string()).collect::<Vec<_>>().join(" "),
            s.start.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
        ),
        None => (String::new(), String::new()),
    };
    let status = match res.status {
        OracleStatus::Optimal => "optimal",
        OracleStatus::Infeasible => "infeasible",
        OracleStatus::Unknown => "unknown",
    };
    let row = OracleRow { status: status.into(), makespan: res.makespan, modes, starts, nodes: res.nodes, seconds: res.elapsed.as_secs_f64() };
    let text = match (res.status, &res.schedule) {
        (OracleStatus::Optimal, Some(s)) => format!("{}\n{}", res.makespan.unwrap(), write_schedule(s).trim_end()),
        (OracleStatus::Infeasible, _) => "infeasible".to_string(),
        _ => format!("unknown (incumbent {:?}, {} nodes)", res.makespan, res.nodes),
    };
    emit(&mut std::io::stdout(), format, &text, &row)?;
    Ok(match res.status {
        OracleStatus::Optimal => 0,
        OracleStatus::Infeasible => EXIT_INFEASIBLE,
        OracleStatus::Unknown => EXIT_UNDECIDED,
    })
}

fn cmd_bench(config: &Path, log: Option<&Path>, out: Option<&Path>, one_shot: bool) -> Result<u8> {
    let cfg = BenchConfig::load(config)?;
    let base = config.parent().unwrap_or(Path::new(".")).to_path_buf();
    let log_path = log.map(Path::to_path_buf).unwrap_or_else(|| config.with_extension("log.csv"));
    let make = || -> std::result::Result<Box<dyn Backend>, String> {
        if one_shot {
            ProcessBackend::from_env().map(|b| Box::new(b) as Box<dyn Backend>).map_err(|e| e.to_string())
        } else {
            ServeBackend::from_env().map(|b| Box::new(b) as Box<dyn Backend>).map_err(|e| e.to_string())
        }
    };
    let rows = run_benchmark(&cfg, &base, &log_path, make)?;
    write_output(out, &summary_csv(&rows))?;
    Ok(0)
}

fn cmd_generate(shape: &str, count: u64, seed: u64, out_dir: &Path) -> Result<u8> {
    let shape: CorpusShape = shape.parse().map_err(anyhow::Error::msg)?;
    fs::create_dir_all(out_dir)?;
    for n in 0..count {
        let s = seed + n;
        let inst = corpus_instance(shape, s);
        let path = out_dir.join(format!("{}_{s}.mm", shape.name()));
        fs::write(&path, write_psplib_mm(&inst, serial_horizon(&inst))).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct CounterRow {
    instance: String,
    without_mc: f64,
    with_mc: i64,
    certificate_feasible: bool,
    violated_row: String,
}

fn see_value(inst: &Instance, mc: ModeConsistency, backend: Option<&mut ServeBackend>) -> Result<Option<f64>> {
    let Some(backend) = backend else { return Ok(None) };
    let model = build(ModelKind::See, inst, &Preprocessed::new(inst), &FormulationOptions::default().with_mc(mc))?;
    let dir = tempfile::tempdir()?;
    let out = solve(backend, &SolveRequest::new(&model, 60.0), dir.path())?;
    if out.status != SolveStatus::Optimal {
        bail!("backend returned {} for SEE on the counterexample", out.status);
    }
    Ok(out.objective)
}

fn cmd_counterexample(use_backend: bool, format: Format) -> Result<u8> {
    let mut backend = if use_backend { Some(ServeBackend::from_env()?) } else { None };
    let cases: [(&str, Instance, mmct::milp::PointAssignment); 2] =
        [("example1", Instance::example1(), solution_a()), ("remark", Instance::remark(), remark_zero_point())];
    let mut stdout = std::io::stdout();
    for (name, inst, certificate) in cases {
        let pre = Preprocessed::new(&inst);
        let loose = formulations::build_see(&inst, &pre, &FormulationOptions::default().with_mc(ModeConsistency::None))?;
        let tight = formulations::build_see(&inst, &pre, &FormulationOptions::default())?;
        let loose_rep = eval_point(&loose, &certificate, 0.0)?;
        let tight_rep = eval_point(&tight, &certificate, 0.0)?;
        let violated = tight_rep.violations.first().map(|v| v.name.clone()).unwrap_or_default();
        let optimum = solve_exact(&inst, OracleLimits::default())?.makespan.context("oracle found no schedule")?;
        let mut without = loose_rep.objective_f64();
        if let Some(z) = see_value(&inst, ModeConsistency::None, backend.as_mut())? {
            without = z;
        }
        if let Some(z) = see_value(&inst, ModeConsistency::Full, backend.as_mut())? {
            if (z - optimum as f64).abs() > 1e-6 {
                bail!("SEE with MC gave {z}, oracle {optimum}");
            }
        }
        if format == Format::Text {
            writeln!(stdout, "{name}:")?;
            writeln!(
                stdout,
                "  certificate without MC: {} with objective {}",
                if loose_rep.is_feasible() { "feasible" } else { "infeasible" },
                loose_rep.objective_f64()
            )?;
            writeln!(stdout, "  certificate with MC: violates {violated}")?;
            if name == "example1" {
                let b = eval_point(&tight, &solution_b(), 0.0)?;
                writeln!(stdout, "  solution B with MC: {} with objective {}", if b.is_feasible() { "feasible" } else { "infeasible" }, b.objective_f64())?;
            }
        }
        let row = CounterRow {
            instance: name.into(),
            without_mc: without,
            with_mc: optimum,
            certificate_feasible: loose_rep.is_feasible(),
            violated_row: violated,
        };
        let text = format!("SEE without MC: makespan {without} (INVALID); SEE with MC: makespan {optimum}");
        emit(&mut stdout, format, &text, &row)?;
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    let format = cli.format;
    match cli.command {
        Command::Parse { instance } => cmd_parse(&instance, format),
        Command::Derive { instance, scale, strip_renewables, to, out } => {
            cmd_derive(&instance, scale, strip_renewables, to, out.as_deref())
        }
        Command::Build { instance, model, file, out, stats } => cmd_build(&instance, &model, file, out.as_deref(), stats, format),
        Command::Solve { instance, model, time_limit, backend, workdir, schedule } => cmd_solve(
            &instance,
            &model,
            time_limit,
            backend.as_deref(),
            workdir.as_deref(),
            schedule.as_deref(),
            format,
        ),
        Command::Validate { instance, schedule, tol } => cmd_validate(&instance, &schedule, tol, format),
        Command::Oracle { instance, node_limit, time_limit, force } => cmd_oracle(&instance, node_limit, time_limit, force, format),
        Command::Bench { config, log, out, one_shot } => cmd_bench(&config, log.as_deref(), out.as_deref(), one_shot),
        Command::Counterexample { offline } => cmd_counterexample(!offline, format),
        Command::Generate { shape, count, seed, out_dir } => cmd_generate(&shape, count, seed, &out_dir),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
