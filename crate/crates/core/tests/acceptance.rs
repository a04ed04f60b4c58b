//! Acceptance suite (custom harness). Prints one PASS/FAIL line per criterion.
//! Exits non-zero on any wrong answer; a criterion that fails only because the
//! solver hit a time limit is reported as `FAIL (solver limit)`. Backend
//! criteria use the persistent solver process (`MMCT_SOLVER_SERVE`, default:
//! the bundled HiGHS shim).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mmct::bench::{aggregate, summary_csv, RunRecord, SUMMARY_HEADER};
use mmct::formulations::{
    build, decode, solution_a, zero_makespan_point, FormulationOptions, ModeConsistency, ModelKind, StrongFlowRows,
};
use mmct::generate::{random_instance, RandomSpec};
use mmct::io::{load_instance, scale_renewables};
use mmct::milp::{eval_point, relax, stats, MilpModel};
use mmct::model::{validate_schedule, Instance};
use mmct::oracle::{solve_exact, OracleLimits, OracleStatus};
use mmct::preprocess::{resource_strength, Preprocessed};
use mmct::solve::{solve, Backend, ServeBackend, SolveOutcome, SolveRequest, SolveStatus};

/// Integer optima are compared after the solver's float output; anything
/// farther than this from the oracle value counts as a mismatch.
const OBJ_TOL: f64 = 1e-6;
const CERT_TOL: f64 = 1e-9;
const LP_TOL: f64 = 1e-6;
const SCHEDULE_TOL: f64 = 1e-6;
const RANDOM_INSTANCES: usize = 200;
const SOLVE_LIMIT: f64 = 120.0;

#[derive(Clone, Copy, PartialEq)]
enum Verdict {
    Pass,
    Fail,
    /// Every answer obtained was right, but the solver ran out of time or
    /// the run exceeded its budget.
    SolverLimit,
}

impl Verdict {
    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::SolverLimit => "FAIL (solver limit)",
        }
    }
}

struct Report {
    lines: Vec<(usize, Verdict)>,
}

impl Report {
    fn record(&mut self, n: usize, ok: bool, detail: String) {
        self.record_verdict(n, if ok { Verdict::Pass } else { Verdict::Fail }, detail);
    }

    fn record_verdict(&mut self, n: usize, verdict: Verdict, detail: String) {
        println!("criterion {n}: {} {detail}", verdict.label());
        self.lines.push((n, verdict));
    }
}

/// Outcome of one MILP solve compared against a known optimum.
enum Answer {
    Proven(f64),
    /// Stopped at a limit; carries the incumbent, if any.
    Unproven(Option<f64>, String),
}

fn corpus() -> Vec<(String, Instance)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus");
    let mut paths: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), load_instance(&p).unwrap().instance))
        .collect()
}

fn rebuilt(inst: &Instance) -> Result<Instance, String> {
    Instance::new(
        inst.activities().to_vec(),
        inst.renewable_capacity().to_vec(),
        inst.nonrenewable_capacity().to_vec(),
        inst.precedence().to_vec(),
    )
    .map_err(|e| e.to_string())
}

fn opts(mc: Option<ModeConsistency>) -> FormulationOptions {
    FormulationOptions { mode_consistency: mc, ..FormulationOptions::default() }
}

fn run(backend: &mut dyn Backend, model: &MilpModel, relaxed: bool) -> Result<SolveOutcome, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut req = SolveRequest::new(model, SOLVE_LIMIT);
    if relaxed {
        req = req.relaxed();
    }
    solve(backend, &req, dir.path()).map_err(|e| e.to_string())
}

/// Solves to optimality; when `check_schedule` is set any returned point is
/// also decoded and validated. Errors are wrong answers, not limits.
fn optimum(backend: &mut dyn Backend, kind: ModelKind, inst: &Instance, o: &FormulationOptions, check_schedule: bool) -> Result<Answer, String> {
    let model = build(kind, inst, &Preprocessed::new(inst), o).map_err(|e| e.to_string())?;
    let out = run(backend, &model, false)?;
    let limited = matches!(out.status, SolveStatus::Feasible | SolveStatus::Timeout | SolveStatus::Unknown);
    if out.status != SolveStatus::Optimal && !limited {
        return Err(format!("{}: status {} {:?}", model.name, out.status, out.verification));
    }
    if check_schedule {
        if let Some(point) = out.point.as_ref() {
            let sched = decode(kind, inst, point, SCHEDULE_TOL).map_err(|e| format!("{}: {e}", model.name))?;
            let rep = validate_schedule(inst, &sched, SCHEDULE_TOL).map_err(|e| e.to_string())?;
            if !rep.is_feasible() {
                return Err(format!("{}: decoded schedule invalid: {:?}", model.name, rep.violations));
            }
        }
    }
    if limited {
        return Ok(Answer::Unproven(out.objective, format!("{}: status {}", model.name, out.status)));
    }
    out.objective.map(Answer::Proven).ok_or_else(|| format!("{}: no objective", model.name))
}

/// Sorts one answer into `wrong` or `limits`.
fn compare(answer: Result<Answer, String>, expected: f64, tag: &str, wrong: &mut Vec<String>, limits: &mut Vec<String>) {
    match answer {
        Ok(Answer::Proven(z)) if (z - expected).abs() <= OBJ_TOL => {}
        Ok(Answer::Proven(z)) => wrong.push(format!("{tag}: {z} vs {expected}")),
        Ok(Answer::Unproven(Some(z), msg)) if z < expected - OBJ_TOL => {
            wrong.push(format!("{tag}: {msg}, incumbent {z} below optimum {expected}"))
        }
        Ok(Answer::Unproven(z, msg)) => limits.push(format!("{tag}: {msg}, incumbent {z:?}")),
        Err(e) => wrong.push(format!("{tag}: {e}")),
    }
}

fn criterion_1(report: &mut Report) {
    let t = Instant::now();
    let inst = Instance::example1();
    let pre = Preprocessed::new(&inst);
    let loose = build(ModelKind::See, &inst, &pre, &opts(Some(ModeConsistency::None))).unwrap();
    let tight = build(ModelKind::See, &inst, &pre, &opts(Some(ModeConsistency::Full))).unwrap();
    let a = solution_a();
    let lr = eval_point(&loose, &a, CERT_TOL).unwrap();
    let tr = eval_point(&tight, &a, CERT_TOL).unwrap();
    let names: Vec<&str> = tr.violations.iter().map(|v| v.name.as_str()).collect();
    let ok = lr.is_feasible()
        && lr.objective_f64() == 0.0
        && names.contains(&"mc_1_2_0")
        && names.iter().all(|n| n.starts_with("mc_"))
        && t.elapsed() < Duration::from_secs(1);
    report.record(
        1,
        ok,
        format!(
            "solution A without MC feasible={} objective={}; with MC violated rows {:?} ({:.3}s)",
            lr.is_feasible(),
            lr.objective_f64(),
            names,
            t.elapsed().as_secs_f64()
        ),
    );
}

fn criterion_2(report: &mut Report, backend: Option<&mut ServeBackend>) {
    let Some(backend) = backend else {
        report.record(2, false, "no solver backend available".into());
        return;
    };
    let t = Instant::now();
    let mut problems = Vec::new();
    for (name, inst, expected) in [("example1", Instance::example1(), 2), ("remark", Instance::remark(), 4)] {
        let oracle = solve_exact(&inst, OracleLimits::default()).unwrap();
        if oracle.makespan != Some(expected) {
            problems.push(format!("{name}: oracle {:?}", oracle.makespan));
        }
        for kind in ModelKind::ALL {
            let o = if kind == ModelKind::Ooe { opts(Some(ModeConsistency::Full)) } else { FormulationOptions::default() };
            let mut limits = Vec::new();
            compare(optimum(backend, kind, &inst, &o, true), expected as f64, &format!("{name} {kind}"), &mut problems, &mut limits);
            problems.extend(limits);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let ok = problems.is_empty() && secs < 10.0;
    report.record(2, ok, format!("7 models x 2 instances, optima 2 and 4 ({secs:.2}s) {problems:?}"));
}

fn criterion_3(report: &mut Report, corpus: &[(String, Instance)]) {
    let t = Instant::now();
    let mut checked = 0;
    let mut problems = Vec::new();
    let mut instances: Vec<(&str, &Instance)> = vec![("example1", &EXAMPLE1)];
    instances.extend(corpus.iter().filter(|(_, i)| i.activity_count() <= 20).map(|(n, i)| (n.as_str(), i)));
    for (name, inst) in instances {
        let pre = Preprocessed::new(inst);
        let point = zero_makespan_point(inst);
        for mc in [ModeConsistency::None, ModeConsistency::Full] {
            let model = relax(&build(ModelKind::Ooe, inst, &pre, &opts(Some(mc))).unwrap());
            let rep = eval_point(&model, &point, CERT_TOL).unwrap();
            if !rep.is_feasible() || rep.objective_f64() != 0.0 {
                problems.push(format!("{name} {mc:?}"));
            }
        }
        if name != "example1" {
            checked += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let ok = problems.is_empty() && checked >= 20 && secs < 5.0;
    report.record(3, ok, format!("fractional zero-makespan point feasible in relax(OOE), relax(OOE+MC) on example1 + {checked} corpus instances ({secs:.2}s) {problems:?}"));
}

static EXAMPLE1: std::sync::LazyLock<Instance> = std::sync::LazyLock::new(Instance::example1);

/// Random-suite variants: (label, kind, options, decode and validate).
fn base_variants() -> Vec<(&'static str, ModelKind, FormulationOptions, bool)> {
    let full = opts(Some(ModeConsistency::Full));
    let mut aux = FormulationOptions::default();
    aux.strong_flow_rows = StrongFlowRows::Auxiliary;
    vec![
        ("SEE+MC", ModelKind::See, FormulationOptions::default(), true),
        ("SEE-A", ModelKind::SeeA, FormulationOptions::default(), true),
        ("RSEE", ModelKind::Rsee, FormulationOptions::default(), true),
        ("OOE", ModelKind::Ooe, opts(Some(ModeConsistency::None)), false),
        ("OOE+MC", ModelKind::Ooe, full, true),
        ("OOE-A", ModelKind::OoeA, FormulationOptions::default(), true),
        ("FCT-W", ModelKind::FctW, FormulationOptions::default(), true),
        ("FCT-S", ModelKind::FctS, FormulationOptions::default(), true),
        ("FCT-S aux", ModelKind::FctS, aux, true),
    ]
}

fn enhanced_variants() -> Vec<(&'static str, ModelKind, FormulationOptions)> {
    let d = FormulationOptions::default;
    let full = || opts(Some(ModeConsistency::Full));
    vec![
        ("SEE+MC TW", ModelKind::See, d().with_tw()),
        ("SEE+MC VF", ModelKind::See, d().with_vf()),
        ("SEE+MC TW VF", ModelKind::See, d().with_tw().with_vf()),
        ("SEE-A TW VF", ModelKind::SeeA, d().with_tw().with_vf()),
        ("OOE+MC TW", ModelKind::Ooe, full().with_tw()),
        ("OOE+MC TW VF", ModelKind::Ooe, full().with_tw().with_vf()),
        ("OOE-A TW", ModelKind::OoeA, d().with_tw()),
        ("OOE-A VF", ModelKind::OoeA, d().with_vf()),
        ("FCT-W TW", ModelKind::FctW, d().with_tw()),
        ("FCT-W RC", ModelKind::FctW, d().with_rc()),
        ("FCT-S TW", ModelKind::FctS, d().with_tw()),
    ]
}

fn verdict(wrong: &[String], limits: &[String], complete: bool, in_budget: bool) -> Verdict {
    if !wrong.is_empty() || !complete {
        Verdict::Fail
    } else if !limits.is_empty() || !in_budget {
        Verdict::SolverLimit
    } else {
        Verdict::Pass
    }
}

fn criteria_4_to_6(report: &mut Report, backend: Option<&mut ServeBackend>) {
    let Some(backend) = backend else {
        for n in 4..=6 {
            report.record(n, false, "no solver backend available".into());
        }
        return;
    };
    let spec = RandomSpec::default();
    let base = base_variants();
    let enhanced = enhanced_variants();
    let t = Instant::now();
    let (mut p4, mut p5, mut p6) = (Vec::new(), Vec::new(), Vec::new());
    let (mut l4, mut l5) = (Vec::new(), Vec::new());
    let (mut solves4, mut solves5) = (0usize, 0usize);
    let mut t5 = Duration::ZERO;
    let mut lp_checked = 0;

    // Example 1 also enters the dominance check.
    let mut lp_instances = vec![("example1".to_string(), Instance::example1())];
    let mut decided = 0;
    let mut seed = 0u64;
    while decided < RANDOM_INSTANCES {
        seed += 1;
        let inst = random_instance(seed, &spec);
        let oracle = solve_exact(&inst, OracleLimits::default()).unwrap();
        let expected = match oracle.status {
            OracleStatus::Optimal => oracle.makespan.unwrap() as f64,
            OracleStatus::Infeasible | OracleStatus::Unknown => continue,
        };
        decided += 1;
        for (label, kind, o, check) in &base {
            solves4 += 1;
            compare(optimum(backend, *kind, &inst, o, *check), expected, &format!("seed {seed} {label}"), &mut p4, &mut l4);
        }
        let s5 = Instant::now();
        for (label, kind, o) in &enhanced {
            solves5 += 1;
            compare(optimum(backend, *kind, &inst, o, true), expected, &format!("seed {seed} {label}"), &mut p5, &mut l5);
        }
        t5 += s5.elapsed();
        lp_instances.push((format!("seed {seed}"), inst));
        if decided % 20 == 0 {
            eprintln!("  random suite: {decided}/{RANDOM_INSTANCES} instances, {:.0}s", t.elapsed().as_secs_f64());
        }
    }
    let t4 = t.elapsed() - t5;

    let t6 = Instant::now();
    for (name, inst) in &lp_instances {
        let pre = Preprocessed::new(inst);
        let mut bounds = Vec::new();
        for kind in [ModelKind::FctW, ModelKind::FctS] {
            let model = build(kind, inst, &pre, &FormulationOptions::default()).unwrap();
            match run(backend, &model, true) {
                Ok(out) if out.status == SolveStatus::Optimal => bounds.push(out.objective.unwrap()),
                Ok(out) => p6.push(format!("{name} {kind}: LP status {}", out.status)),
                Err(e) => p6.push(format!("{name} {kind}: {e}")),
            }
        }
        if let [w, s] = bounds[..] {
            lp_checked += 1;
            if s < w - LP_TOL {
                p6.push(format!("{name}: FCT-S LP {s} < FCT-W LP {w}"));
            }
        }
    }
    let secs6 = t6.elapsed().as_secs_f64();

    let budget = Duration::from_secs(30 * 60);
    let verdict4 = verdict(&p4, &l4, decided >= RANDOM_INSTANCES, t4 <= budget);
    report.record_verdict(
        4,
        verdict4,
        format!(
            "{decided} random instances (seeds 1..={seed}), {} variants, {solves4} solves: {} wrong, {} stopped at the {SOLVE_LIMIT} s limit; {:.0}s of a {}s budget {:?} {:?}",
            base.len(),
            p4.len(),
            l4.len(),
            t4.as_secs_f64(),
            budget.as_secs(),
            &p4[..p4.len().min(5)],
            &l4[..l4.len().min(5)]
        ),
    );
    report.record_verdict(
        5,
        verdict(&p5, &l5, true, true),
        format!(
            "{} enhanced variants, {solves5} solves: {} wrong, {} stopped at the {SOLVE_LIMIT} s limit ({:.0}s) {:?} {:?}",
            enhanced.len(),
            p5.len(),
            l5.len(),
            t5.as_secs_f64(),
            &p5[..p5.len().min(5)],
            &l5[..l5.len().min(5)]
        ),
    );
    report.record(
        6,
        p6.is_empty() && lp_checked == lp_instances.len(),
        format!("LP(FCT-S) >= LP(FCT-W) - {LP_TOL} on {lp_checked} instances ({secs6:.0}s) {:?}", &p6[..p6.len().min(5)]),
    );
}

fn criterion_7(report: &mut Report, corpus: &[(String, Instance)]) {
    let mut problems = Vec::new();
    let mut defined = 0;
    for (name, inst) in corpus {
        let pre = Preprocessed::new(inst);
        for d in [2, 10] {
            let scaled = scale_renewables(inst, d);
            if let Err(e) = rebuilt(&scaled) {
                problems.push(format!("{name} x{d}: {e}"));
            }
            let spre = Preprocessed::new(&scaled);
            for k in 0..inst.renewable_count() {
                let before = resource_strength(inst, &pre.graph, k);
                let after = resource_strength(&scaled, &spre.graph, k);
                if before.is_some() {
                    defined += 1;
                }
                if before != after {
                    problems.push(format!("{name} x{d} k={k}: {before:?} -> {after:?}"));
                }
            }
        }
    }
    report.record(7, problems.is_empty() && defined > 0, format!("RS unchanged for delta in {{2, 10}} ({defined} defined cases over {} instances) {problems:?}", corpus.len()));
}

/// Closed-form variable counts. `m` is the total number of modes.
fn expected_variables(kind: ModelKind, inst: &Instance) -> usize {
    let a = inst.activity_count();
    let m = inst.total_mode_count();
    let (r, n) = (inst.renewable_count(), inst.nonrenewable_count());
    let v = a + 2;
    match kind {
        ModelKind::See | ModelKind::SeeA => 2 * m * a + (a + 1) + a * r,
        ModelKind::Rsee => 2 * m * a + (a + 1),
        ModelKind::Ooe | ModelKind::OoeA => m * a + (a + 1) + a * n,
        ModelKind::FctW | ModelKind::FctS => v * v + v * v * r + (m + 2) + v,
    }
}

/// Closed-form constraint counts for SEE with full mode consistency and FCT-W.
fn expected_constraints(kind: ModelKind, inst: &Instance) -> Option<usize> {
    let a = inst.activity_count();
    let m = inst.total_mode_count();
    let (r, n, p) = (inst.renewable_count(), inst.nonrenewable_count(), inst.precedence().len());
    let v = a + 2;
    match kind {
        ModelKind::See => Some(1 + 3 * a + a * (a - 1) + m * a * (a + 1) / 2 + p * a + a * r + n + m * a),
        ModelKind::FctW => Some(1 + v * (v - 1) + v * (v - 1) * (v - 2) + v * (v - 1) / 2 + r * ((v - 1) * (v - 1) - (v - 2)) + 2 * v * r + v + n),
        _ => None,
    }
}

fn criterion_8(report: &mut Report, corpus: &[(String, Instance)]) {
    let mut problems = Vec::new();
    let inst = Instance::example1();
    let pre = Preprocessed::new(&inst);
    let see = stats(&build(ModelKind::See, &inst, &pre, &opts(Some(ModeConsistency::None))).unwrap());
    let ooe = stats(&build(ModelKind::Ooe, &inst, &pre, &FormulationOptions::default()).unwrap());
    let fct = build(ModelKind::FctW, &inst, &pre, &FormulationOptions::default()).unwrap();
    let fct_y = fct.variables().iter().filter(|v| v.symbol.family == "y").count();
    let fct_x = fct.variables().iter().filter(|v| v.symbol.family == "x").count();
    for (label, got, want) in [
        ("SEE vars", see.variables, 21),
        ("OOE vars", ooe.variables, expected_variables(ModelKind::Ooe, &inst)),
        ("FCT-W vars", stats(&fct).variables, expected_variables(ModelKind::FctW, &inst)),
        ("FCT-W y", fct_y, 16),
        ("FCT-W x", fct_x, 6),
    ] {
        if got != want {
            problems.push(format!("{label}: {got} != {want}"));
        }
    }
    let mut compared = 0;
    let mut instances = vec![Instance::example1(), Instance::remark()];
    instances.extend(corpus.iter().filter(|(_, i)| i.activity_count() <= 20).map(|(_, i)| i.clone()));
    for inst in instances.iter().filter(|i| (0..i.activity_count()).any(|j| i.mode_count(j) >= 2)) {
        let pre = Preprocessed::new(inst);
        let agg = stats(&build(ModelKind::OoeA, inst, &pre, &FormulationOptions::default()).unwrap()).constraints;
        let full = stats(&build(ModelKind::Ooe, inst, &pre, &opts(Some(ModeConsistency::Full))).unwrap()).constraints;
        compared += 1;
        if agg >= full {
            problems.push(format!("OOE-A {agg} >= OOE+MC {full}"));
        }
    }
    report.record(
        8,
        problems.is_empty(),
        format!("Example 1 counts SEE {} / OOE {} / FCT-W {} variables; OOE-A < OOE+MC rows on {compared} instances {problems:?}", see.variables, ooe.variables, stats(&fct).variables),
    );
}

fn criterion_9(report: &mut Report, corpus: &[(String, Instance)]) {
    println!(
        "  note: wall-clock Feas/Opt/Best/CPU values from a 300 s, multi-thousand-instance benchmark are not targets; \
         only the summary schema, the ranking rule and model sizes are checked"
    );
    let mut problems = Vec::new();
    let sampled: Vec<&(String, Instance)> = corpus.iter().filter(|(n, _)| n.starts_with("c15") || n.starts_with("j20")).collect();
    for (name, inst) in &sampled {
        let pre = Preprocessed::new(inst);
        for kind in ModelKind::ALL {
            let s = stats(&build(kind, inst, &pre, &FormulationOptions::default()).unwrap());
            if s.variables != expected_variables(kind, inst) {
                problems.push(format!("{name} {kind}: {} vars vs {}", s.variables, expected_variables(kind, inst)));
            }
            if let Some(c) = expected_constraints(kind, inst) {
                if s.constraints != c {
                    problems.push(format!("{name} {kind}: {} rows vs {c}", s.constraints));
                }
            }
        }
    }

    let columns: Vec<&str> = SUMMARY_HEADER.split(',').collect();
    if columns[..9] != ["dataset", "model", "feas", "opt", "best", "dz", "cpu", "vars", "cons"] {
        problems.push(format!("summary columns {columns:?}"));
    }
    for provenance in ["seed", "options", "backend"] {
        if !columns.contains(&provenance) {
            problems.push(format!("missing {provenance} column"));
        }
    }
    let rec = |model: &str, instance: &str, status: &str, z: Option<f64>| RunRecord {
        dataset: "d".into(),
        instance: instance.into(),
        model: model.into(),
        status: status.into(),
        objective: z,
        bound: None,
        cpu: 1.0,
        build: 0.0,
        vars: Some(10),
        cons: Some(10),
        seed: Some(1),
        options: String::new(),
        backend: "test".into(),
        oracle: None,
        message: String::new(),
    };
    // A: 2 feasible, 1 optimal. B: 2 feasible, 2 optimal. C: 1 feasible. D: 2 feasible, 1 optimal, more best.
    let records = vec![
        rec("A", "i1", "optimal", Some(10.0)),
        rec("A", "i2", "feasible", Some(12.0)),
        rec("B", "i1", "optimal", Some(10.0)),
        rec("B", "i2", "optimal", Some(11.0)),
        rec("C", "i1", "optimal", Some(10.0)),
        rec("C", "i2", "timeout", None),
        rec("D", "i1", "feasible", Some(10.0)),
        rec("D", "i2", "optimal", Some(11.0)),
    ];
    let rows = aggregate(&records);
    let order: Vec<&str> = rows.iter().map(|r| r.model.as_str()).collect();
    if order != ["B", "D", "A", "C"] {
        problems.push(format!("ranking {order:?}"));
    }
    let a = rows.iter().find(|r| r.model == "A").unwrap();
    if a.dz.map_or(true, |d| (d - 100.0 / 11.0).abs() > 1e-9) {
        problems.push(format!("dz {:?}", a.dz));
    }
    if summary_csv(&rows).lines().nth(1) != Some(SUMMARY_HEADER) {
        problems.push("summary header".into());
    }
    report.record(
        9,
        problems.is_empty() && !sampled.is_empty(),
        format!("closed-form sizes on {} sampled c15/j20 instances, summary schema and Feas>Opt>Best ranking {problems:?}", sampled.len()),
    );
}

fn main() -> ExitCode {
    let mut report = Report { lines: Vec::new() };
    let corpus = corpus();
    let mut backend = match ServeBackend::from_env() {
        Ok(b) => Some(b),
        Err(e) => {
            eprintln!("solver backend unavailable: {e}");
            None
        }
    };
    criterion_1(&mut report);
    criterion_2(&mut report, backend.as_mut());
    criterion_3(&mut report, &corpus);
    criteria_4_to_6(&mut report, backend.as_mut());
    criterion_7(&mut report, &corpus);
    criterion_8(&mut report, &corpus);
    criterion_9(&mut report, &corpus);

    report.lines.sort_by_key(|l| l.0);
    println!("acceptance summary:");
    for (n, v) in &report.lines {
        println!("  {n}: {}", v.label());
    }
    let failed: Vec<usize> = report.lines.iter().filter(|l| l.1 == Verdict::Fail).map(|l| l.0).collect();
    let limited: Vec<usize> = report.lines.iter().filter(|l| l.1 == Verdict::SolverLimit).map(|l| l.0).collect();
    if !limited.is_empty() {
        println!("criteria failed only on solver time limits (no wrong answer): {limited:?}");
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
