use mmct::formulations::{build, decode, FormulationOptions, ModeConsistency, ModelKind};
use mmct::generate::{random_instance, RandomSpec};
use mmct::oracle::{solve_exact, OracleLimits};
use mmct::milp::relax;
use mmct::model::{validate_schedule, Instance};
use mmct::preprocess::Preprocessed;
use mmct::solve::{solve, ProcessBackend, ServeBackend, SolveRequest, SolveStatus};

fn optimum(backend: &mut dyn mmct::solve::Backend, kind: ModelKind, inst: &Instance, opts: &FormulationOptions) -> f64 {
    let pre = Preprocessed::new(inst);
    let model = build(kind, inst, &pre, opts).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = solve(backend, &SolveRequest::new(&model, 30.0), dir.path()).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal, "{kind} {:?}", out.verification);
    if kind != ModelKind::Ooe || opts.mode_consistency == Some(ModeConsistency::Full) {
        let sched = decode(kind, inst, out.point.as_ref().unwrap(), 1e-6).unwrap();
        assert!(validate_schedule(inst, &sched, 1e-6).unwrap().is_feasible(), "{kind}");
    }
    out.objective.unwrap()
}

#[test]
fn every_model_finds_the_known_optima() {
    let mut backend = ServeBackend::from_env().unwrap();
    for (inst, expected) in [(Instance::example1(), 2.0), (Instance::remark(), 4.0)] {
        for kind in ModelKind::ALL {
            let z = optimum(&mut backend, kind, &inst, &FormulationOptions::default());
            assert_eq!(z, expected, "{kind}");
        }
    }
}

#[test]
fn see_without_mode_consistency_undercuts() {
    let mut backend = ProcessBackend::from_env().unwrap();
    let opts = FormulationOptions::default().with_mc(ModeConsistency::None);
    let pre = Preprocessed::new(&Instance::example1());
    let model = build(ModelKind::See, &Instance::example1(), &pre, &opts).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = solve(&mut backend, &SolveRequest::new(&model, 30.0), dir.path()).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal);
    assert_eq!(out.objective, Some(0.0));
}

#[test]
fn ooe_relaxation_is_zero() {
    let mut backend = ServeBackend::from_env().unwrap();
    let inst = Instance::example1();
    let pre = Preprocessed::new(&inst);
    let model = build(ModelKind::Ooe, &inst, &pre, &FormulationOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = solve(&mut backend, &SolveRequest::new(&model, 30.0).relaxed(), dir.path()).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal);
    assert!(out.objective.unwrap().abs() < 1e-9);
    let _ = relax(&model);
}

#[test]
fn strong_event_rows_keep_the_optimum() {
    let mut backend = ServeBackend::from_env().unwrap();
    let mut opts = FormulationOptions::default().with_mc(ModeConsistency::Full);
    opts.strong_event_time = true;
    for seed in 1..=15 {
        let inst = random_instance(seed, &RandomSpec::default());
        let expected = solve_exact(&inst, OracleLimits::default()).unwrap().makespan.unwrap();
        assert_eq!(optimum(&mut backend, ModelKind::Ooe, &inst, &opts), expected as f64, "seed {seed}");
    }
}
