//! Multi-mode project instances and schedules.
//!
//! Activities are stored 0-based internally. Everything user-facing (file
//! formats, variable names, schedule files) numbers activities and modes from
//! 1, so `activity 0` here is activity 1 in a PSPLIB file.

use std::fmt;

use thiserror::Error;

/// Default feasibility tolerance for solver-produced values.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("project has no activities")]
    Empty,
    #[error("activity {activity} has no feasible mode")]
    NoFeasibleMode { activity: usize },
    #[error("activity {activity} mode {mode}: expected {expected} {kind} demands, got {got}")]
    DemandArity { activity: usize, mode: usize, kind: &'static str, expected: usize, got: usize },
    #[error("negative value in activity {activity} mode {mode}")]
    Negative { activity: usize, mode: usize },
    #[error("negative resource capacity")]
    NegativeCapacity,
    #[error("precedence ({0}, {1}) references an unknown activity")]
    PrecedenceOutOfRange(usize, usize),
    #[error("activity {0} precedes itself")]
    SelfLoop(usize),
    #[error("precedence relation contains a cycle through activities {0:?}")]
    Cycle(Vec<usize>),
}

/// One execution mode: duration plus per-resource demands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mode {
    pub duration: i64,
    pub renewable: Vec<i64>,
    pub nonrenewable: Vec<i64>,
}

impl Mode {
    pub fn new(duration: i64, renewable: Vec<i64>, nonrenewable: Vec<i64>) -> Self {
        Mode { duration, renewable, nonrenewable }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Activity {
    pub modes: Vec<Mode>,
}

/// A multi-mode resource-constrained project.
///
/// Construction filters out modes whose demand exceeds a capacity, so every
/// stored triple satisfies `b_imk <= B_k` and `w_imk <= W_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    activities: Vec<Activity>,
    renewable_capacity: Vec<i64>,
    nonrenewable_capacity: Vec<i64>,
    precedence: Vec<(usize, usize)>,
}

impl Instance {
    pub fn new(
        activities: Vec<Activity>,
        renewable_capacity: Vec<i64>,
        nonrenewable_capacity: Vec<i64>,
        precedence: Vec<(usize, usize)>,
    ) -> Result<Self, ModelError> {
        if activities.is_empty() {
            return Err(ModelError::Empty);
        }
        if renewable_capacity.iter().chain(&nonrenewable_capacity).any(|&c| c < 0) {
            return Err(ModelError::NegativeCapacity);
        }
        let n = activities.len();
        let mut kept = Vec::with_capacity(n);
        for (i, act) in activities.into_iter().enumerate() {
            let mut modes = Vec::with_capacity(act.modes.len());
            for (m, mode) in act.modes.into_iter().enumerate() {
                if mode.renewable.len() != renewable_capacity.len() {
                    return Err(ModelError::DemandArity {
                        activity: i + 1,
                        mode: m + 1,
                        kind: "renewable",
                        expected: renewable_capacity.len(),
                        got: mode.renewable.len(),
                    });
                }
                if mode.nonrenewable.len() != nonrenewable_capacity.len() {
                    return Err(ModelError::DemandArity {
                        activity: i + 1,
                        mode: m + 1,
                        kind: "non-renewable",
                        expected: nonrenewable_capacity.len(),
                        got: mode.nonrenewable.len(),
                    });
                }
                if mode.duration < 0 || mode.renewable.iter().chain(&mode.nonrenewable).any(|&v| v < 0) {
                    return Err(ModelError::Negative { activity: i + 1, mode: m + 1 });
                }
                let fits = mode.renewable.iter().zip(&renewable_capacity).all(|(b, cap)| b <= cap)
                    && mode.nonrenewable.iter().zip(&nonrenewable_capacity).all(|(w, cap)| w <= cap);
                if fits {
                    modes.push(mode);
                } else {
                    log::warn!("dropping activity {} mode {}: demand exceeds capacity", i + 1, m + 1);
                }
            }
            if modes.is_empty() {
                return Err(ModelError::NoFeasibleMode { activity: i + 1 });
            }
            kept.push(Activity { modes });
        }

        let mut precedence = precedence;
        for &(i, j) in &precedence {
            if i >= n || j >= n {
                return Err(ModelError::PrecedenceOutOfRange(i + 1, j + 1));
            }
            if i == j {
                return Err(ModelError::SelfLoop(i + 1));
            }
        }
        precedence.sort_unstable();
        precedence.dedup();
        if let Some(cycle) = find_cycle(n, &precedence) {
            return Err(ModelError::Cycle(cycle.into_iter().map(|i| i + 1).collect()));
        }

        Ok(Instance { activities: kept, renewable_capacity, nonrenewable_capacity, precedence })
    }

    /// Number of non-dummy activities `A`.
    pub fn activity_count(&self) -> usize {
        self.activities.len()
    }

    pub fn activities(&self) -> &[Activity] {
        &self.activities
    }

    pub fn modes(&self, activity: usize) -> &[Mode] {
        &self.activities[activity].modes
    }

    pub fn mode(&self, activity: usize, mode: usize) -> &Mode {
        &self.activities[activity].modes[mode]
    }

    pub fn mode_count(&self, activity: usize) -> usize {
        self.activities[activity].modes.len()
    }

    pub fn total_mode_count(&self) -> usize {
        self.activities.iter().map(|a| a.modes.len()).sum()
    }

    pub fn renewable_capacity(&self) -> &[i64] {
        &self.renewable_capacity
    }

    pub fn nonrenewable_capacity(&self) -> &[i64] {
        &self.nonrenewable_capacity
    }

    pub fn renewable_count(&self) -> usize {
        self.renewable_capacity.len()
    }

    pub fn nonrenewable_count(&self) -> usize {
        self.nonrenewable_capacity.len()
    }

    /// Precedence pairs `(i, j)`, sorted and deduplicated, 0-based.
    pub fn precedence(&self) -> &[(usize, usize)] {
        &self.precedence
    }

    pub fn duration(&self, activity: usize, mode: usize) -> i64 {
        self.activities[activity].modes[mode].duration
    }

    pub fn min_duration(&self, activity: usize) -> i64 {
        self.activities[activity].modes.iter().map(|m| m.duration).min().unwrap_or(0)
    }

    pub fn max_duration(&self, activity: usize) -> i64 {
        self.activities[activity].modes.iter().map(|m| m.duration).max().unwrap_or(0)
    }

    /// Largest renewable demand of `activity` on resource `k` over its modes.
    pub fn max_renewable_demand(&self, activity: usize, k: usize) -> i64 {
        self.activities[activity].modes.iter().map(|m| m.renewable[k]).max().unwrap_or(0)
    }

    /// Same project with different resource data. Used by the derivations in `io`.
    pub(crate) fn map_resources(
        &self,
        renewable_capacity: Vec<i64>,
        nonrenewable_capacity: Vec<i64>,
        mut f: impl FnMut(&Mode) -> Mode,
    ) -> Result<Instance, ModelError> {
        let activities = self
            .activities
            .iter()
            .map(|a| Activity { modes: a.modes.iter().map(&mut f).collect() })
            .collect();
        Instance::new(activities, renewable_capacity, nonrenewable_capacity, self.precedence.clone())
    }

    /// Example 1: two double-mode activities, `1 -> 2`, one unit-capacity resource.
    pub fn example1() -> Instance {
        let act = || Activity {
            modes: vec![Mode::new(1, vec![1], vec![]), Mode::new(2, vec![1], vec![])],
        };
        Instance::new(vec![act(), act()], vec![1], vec![], vec![(0, 1)]).expect("example 1 is well formed")
    }

    /// Example 1 extended by a second chain `3 -> 4` of the same kind.
    pub fn remark() -> Instance {
        let act = || Activity {
            modes: vec![Mode::new(1, vec![1], vec![]), Mode::new(2, vec![1], vec![])],
        };
        Instance::new(vec![act(), act(), act(), act()], vec![1], vec![], vec![(0, 1), (2, 3)])
            .expect("remark instance is well formed")
    }
}

fn find_cycle(n: usize, arcs: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut succ = vec![Vec::new(); n];
    for &(i, j) in arcs {
        succ[i].push(j);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < succ[node].len() {
                let child = succ[node][*next];
                *next += 1;
                match state[child] {
                    0 => {
                        state[child] = 1;
                        parent[child] = node;
                        stack.push((child, 0));
                    }
                    1 => {
                        let mut cycle = vec![child];
                        let mut cur = node;
                        while cur != child {
                            cycle.push(cur);
                            cur = parent[cur];
                        }
                        cycle.reverse();
                        cycle.rotate_right(1);
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[node] = 2;
                stack.pop();
            }
        }
    }
    None
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("schedule covers {got} activities, instance has {expected}")]
    Length { expected: usize, got: usize },
    #[error("activity {activity} uses mode {mode}, which does not exist")]
    UnknownMode { activity: usize, mode: usize },
}

/// Start time and mode per activity. Mode indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub start: Vec<f64>,
    pub mode: Vec<usize>,
    pub makespan: f64,
}

impl Schedule {
    /// Builds a schedule and derives the makespan from the instance durations.
    pub fn new(instance: &Instance, start: Vec<f64>, mode: Vec<usize>) -> Result<Self, ScheduleError> {
        let mut s = Schedule { start, mode, makespan: 0.0 };
        s.check_shape(instance)?;
        s.makespan = s.completion_times(instance).into_iter().fold(0.0, f64::max);
        Ok(s)
    }

    /// Schedule with an externally reported makespan (e.g. a solver objective).
    pub fn with_makespan(start: Vec<f64>, mode: Vec<usize>, makespan: f64) -> Self {
        Schedule { start, mode, makespan }
    }

    pub fn check_shape(&self, instance: &Instance) -> Result<(), ScheduleError> {
        let n = instance.activity_count();
        if self.start.len() != n || self.mode.len() != n {
            return Err(ScheduleError::Length { expected: n, got: self.start.len().min(self.mode.len()) });
        }
        for (i, &m) in self.mode.iter().enumerate() {
            if m >= instance.mode_count(i) {
                return Err(ScheduleError::UnknownMode { activity: i + 1, mode: m + 1 });
            }
        }
        Ok(())
    }

    pub fn completion_times(&self, instance: &Instance) -> Vec<f64> {
        self.start
            .iter()
            .zip(&self.mode)
            .enumerate()
            .map(|(i, (&s, &m))| s + instance.duration(i, m) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NegativeStart { activity: usize, start: f64 },
    Precedence { pred: usize, succ: usize, slack: f64 },
    Renewable { resource: usize, time: f64, usage: i64, capacity: i64 },
    Nonrenewable { resource: usize, usage: i64, capacity: i64 },
    Makespan { reported: f64, recomputed: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeStart { activity, start } => {
                write!(f, "activity {activity} starts at negative time {start}")
            }
            Violation::Precedence { pred, succ, slack } => {
                write!(f, "precedence {pred} -> {succ} violated by {slack}")
            }
            Violation::Renewable { resource, time, usage, capacity } => {
                write!(f, "renewable resource {resource} at t={time}: usage {usage} > capacity {capacity}")
            }
            Violation::Nonrenewable { resource, usage, capacity } => {
                write!(f, "non-renewable resource {resource}: usage {usage} > capacity {capacity}")
            }
            Violation::Makespan { reported, recomputed } => {
                write!(f, "reported makespan {reported} differs from recomputed {recomputed}")
            }
        }
    }
}

/// Outcome of [`validate_schedule`]. Activity and resource numbers in
/// violations are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub tol: f64,
    pub well_formed: bool,
    pub precedence_ok: bool,
    pub renewable_ok: bool,
    pub nonrenewable_ok: bool,
    pub makespan_ok: bool,
    pub recomputed_makespan: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks precedence, renewable capacity at every start event, non-renewable
/// budgets and the reported makespan.
pub fn validate_schedule(
    instance: &Instance,
    schedule: &Schedule,
    tol: f64,
) -> Result<ValidationReport, ScheduleError> {
    schedule.check_shape(instance)?;
    let completion = schedule.completion_times(instance);
    let mut violations = Vec::new();

    for (i, &s) in schedule.start.iter().enumerate() {
        if s < -tol || !s.is_finite() {
            violations.push(Violation::NegativeStart { activity: i + 1, start: s });
        }
    }
    let well_formed = violations.is_empty();

    let before = violations.len();
    for &(i, j) in instance.precedence() {
        let slack = completion[i] - schedule.start[j];
        if slack > tol {
            violations.push(Violation::Precedence { pred: i + 1, succ: j + 1, slack });
        }
    }
    let precedence_ok = violations.len() == before;

    // Usage is piecewise constant and only increases at start times.
    let before = violations.len();
    for k in 0..instance.renewable_count() {
        let cap = instance.renewable_capacity()[k];
        let mut times: Vec<f64> = schedule.start.clone();
        times.sort_by(f64::total_cmp);
        times.dedup();
        for &t in &times {
            let usage: i64 = (0..instance.activity_count())
                .filter(|&i| schedule.start[i] <= t && t < completion[i])
                .map(|i| instance.mode(i, schedule.mode[i]).renewable[k])
                .sum();
            if usage as f64 > cap as f64 + tol {
                violations.push(Violation::Renewable { resource: k + 1, time: t, usage, capacity: cap });
            }
        }
    }
    let renewable_ok = violations.len() == before;

    let before = violations.len();
    for k in 0..instance.nonrenewable_count() {
        let cap = instance.nonrenewable_capacity()[k];
        let usage: i64 =
            (0..instance.activity_count()).map(|i| instance.mode(i, schedule.mode[i]).nonrenewable[k]).sum();
        if usage as f64 > cap as f64 + tol {
            violations.push(Violation::Nonrenewable { resource: k + 1, usage, capacity: cap });
        }
    }
    let nonrenewable_ok = violations.len() == before;

    let recomputed = completion.iter().copied().fold(0.0, f64::max);
    let makespan_ok = (schedule.makespan - recomputed).abs() <= tol;
    if !makespan_ok {
        violations.push(Violation::Makespan { reported: schedule.makespan, recomputed });
    }

    Ok(ValidationReport {
        tol,
        well_formed,
        precedence_ok,
        renewable_ok,
        nonrenewable_ok,
        makespan_ok,
        recomputed_makespan: recomputed,
        violations,
    })
}
