//! Exact reference solver for tiny instances.
//!
//! Mode vectors are enumerated in lexicographic order with budget pruning.
//! Each surviving vector is solved by a depth-first serial schedule
//! generation over activity lists restricted to canonical order (start time,
//! then topological rank), which still reaches every active schedule.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::model::{Instance, Schedule};
use crate::preprocess::build_aon;

pub type ModeVector = Vec<usize>;

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;
pub const MAX_ACTIVITIES: usize = 10;
pub const MAX_MODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub node_limit: u64,
    pub time_limit: Option<Duration>,
    /// Solve instances above the size guard anyway.
    pub force: bool,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { node_limit: DEFAULT_NODE_LIMIT, time_limit: None, force: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Optimal,
    Infeasible,
    /// A limit was hit; any schedule carried is an incumbent, not a proof.
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub status: OracleStatus,
    pub makespan: Option<i64>,
    pub schedule: Option<Schedule>,
    pub mode_vectors: u64,
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for the exact oracle ({activities} activities, up to {modes} modes); force to override")]
    TooLarge { activities: usize, modes: usize },
    #[error("mode vector has {got} entries for {expected} activities")]
    Arity { expected: usize, got: usize },
}

/// Whether the mode vector respects every non-renewable budget.
pub fn ma_feasible(inst: &Instance, modes: &[usize]) -> bool {
    (0..inst.nonrenewable_count()).all(|k| {
        let used: i64 = modes.iter().enumerate().map(|(i, &m)| inst.mode(i, m).nonrenewable[k]).sum();
        used <= inst.nonrenewable_capacity()[k]
    })
}

/// Longest path through the precedence network with the given modes.
pub fn cpm_makespan(inst: &Instance, modes: &[usize]) -> i64 {
    let graph = build_aon(inst);
    let mut finish = vec![0i64; inst.activity_count()];
    for &node in graph.topological_order() {
        if node == graph.source() || node == graph.sink() {
            continue;
        }
        let a = node - 1;
        let release = graph
            .predecessors(node)
            .iter()
            .filter(|&&p| p != graph.source())
            .map(|&p| finish[p - 1])
            .max()
            .unwrap_or(0);
        finish[a] = release + inst.duration(a, modes[a]);
    }
    finish.into_iter().max().unwrap_or(0)
}

struct Search<'a> {
    inst: &'a Instance,
    limits: OracleLimits,
    started: Instant,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    rank: Vec<usize>,
    nodes: u64,
    aborted: bool,
    best: Option<(i64, ModeVector, Vec<i64>)>,
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if self.nodes >= self.limits.node_limit || self.limits.time_limit.is_some_and(|t| self.started.elapsed() >= t) {
            self.aborted = true;
        }
        self.aborted
    }

    fn incumbent(&self) -> Option<i64> {
        self.best.as_ref().map(|b| b.0)
    }

    fn mode_lower_bound(&self, modes: &[usize]) -> i64 {
        let mut lb = cpm_makespan(self.inst, modes);
        for (k, &cap) in self.inst.renewable_capacity().iter().enumerate() {
            let energy: i64 = modes.iter().enumerate().map(|(i, &m)| {
                let mode = self.inst.mode(i, m);
                mode.duration * mode.renewable[k]
            }).sum();
            if cap > 0 {
                lb = lb.max((energy + cap - 1) / cap);
            }
        }
        lb
    }

    fn enumerate_modes(&mut self, vector: &mut ModeVector, used: &mut [i64], min_rest: &[Vec<i64>], count: &mut u64) {
        let inst = self.inst;
        let i = vector.len();
        if i == inst.activity_count() {
            *count += 1;
            let lb = self.mode_lower_bound(vector);
            if self.incumbent().is_some_and(|z| lb >= z) {
                return;
            }
            self.solve_single_mode(vector.clone(), lb);
            return;
        }
        for m in 0..inst.mode_count(i) {
            if self.out_of_budget() {
                return;
            }
            let mode = inst.mode(i, m);
            let fits = (0..inst.nonrenewable_count())
                .all(|k| used[k] + mode.nonrenewable[k] + min_rest[i + 1][k] <= inst.nonrenewable_capacity()[k]);
            if !fits {
                continue;
            }
            for k in 0..inst.nonrenewable_count() {
                used[k] += mode.nonrenewable[k];
            }
            vector.push(m);
            self.enumerate_modes(vector, used, min_rest, count);
            vector.pop();
            for k in 0..inst.nonrenewable_count() {
                used[k] -= mode.nonrenewable[k];
            }
        }
    }

    fn solve_single_mode(&mut self, modes: ModeVector, lb: i64) {
        let a = self.inst.activity_count();
        let dur: Vec<i64> = (0..a).map(|i| self.inst.duration(i, modes[i])).collect();
        let dem: Vec<&[i64]> = (0..a).map(|i| self.inst.mode(i, modes[i]).renewable.as_slice()).collect();
        // tail_i: longest path from the start of i to the project end
        let mut tail = vec![0i64; a];
        let mut order: Vec<usize> = (0..a).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rank[i]));
        for &i in &order {
            tail[i] = dur[i] + self.succs[i].iter().map(|&j| tail[j]).max().unwrap_or(0);
        }
        let mut state = ListState {
            start: vec![None; a],
            finish_max: 0,
            last: None,
            modes: &modes,
            dur: &dur,
            dem: &dem,
            tail: &tail,
        };
        self.dfs(&mut state, 0, lb);
    }

    fn dfs(&mut self, st: &mut ListState<'_>, placed: usize, lb: i64) {
        let a = self.inst.activity_count();
        if placed == a {
            let z = st.finish_max;
            if self.incumbent().is_none_or(|best| z < best) {
                let starts = st.start.iter().map(|s| s.unwrap()).collect();
                self.best = Some((z, st.modes.to_vec(), starts));
            }
            return;
        }
        if self.incumbent().is_some_and(|best| best <= lb) {
            return;
        }
        let mut eligible: Vec<usize> = (0..a)
            .filter(|&j| st.start[j].is_none() && self.preds[j].iter().all(|&p| st.start[p].is_some()))
            .collect();
        eligible.sort_by_key(|&j| self.rank[j]);
        for j in eligible {
            self.nodes += 1;
            if self.out_of_budget() {
                return;
            }
            let release = self.preds[j].iter().map(|&p| st.start[p].unwrap() + st.dur[p]).max().unwrap_or(0);
            let t = self.earliest_fit(st, j, release);
            if let Some((lt, lj)) = st.last {
                if (t, self.rank[j]) < (lt, self.rank[lj]) {
                    continue;
                }
            }
            let bound = (t + st.tail[j]).max(st.finish_max).max(self.open_bound(st, j, t));
            if self.incumbent().is_some_and(|best| bound >= best) {
                continue;
            }
            let saved = (st.finish_max, st.last);
            st.start[j] = Some(t);
            st.finish_max = st.finish_max.max(t + st.dur[j]);
            st.last = Some((t, j));
            self.dfs(st, placed + 1, lb.max(bound));
            st.start[j] = None;
            (st.finish_max, st.last) = saved;
            if self.aborted {
                return;
            }
        }
    }

    /// Canonical order forces every later activity to start no earlier than `t`.
    fn open_bound(&self, st: &ListState<'_>, j: usize, t: i64) -> i64 {
        (0..self.inst.activity_count())
            .filter(|&i| i != j && st.start[i].is_none())
            .map(|i| t + st.tail[i])
            .max()
            .unwrap_or(0)
    }

    fn earliest_fit(&self, st: &ListState<'_>, j: usize, release: i64) -> i64 {
        let mut candidates: Vec<i64> = vec![release];
        for (i, s) in st.start.iter().enumerate() {
            if let Some(s) = *s {
                let f = s + st.dur[i];
                if f > release {
                    candidates.push(f);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        candidates.into_iter().find(|&t| self.fits(st, j, t)).expect("the end of the schedule always fits")
    }

    fn fits(&self, st: &ListState<'_>, j: usize, t: i64) -> bool {
        let p = st.dur[j];
        if p == 0 {
            return true;
        }
        let caps = self.inst.renewable_capacity();
        // usage is piecewise constant; check at t and at every start inside (t, t + p)
        let mut probes = vec![t];
        for s in st.start.iter().flatten() {
            if *s > t && *s < t + p {
                probes.push(*s);
            }
        }
        probes.into_iter().all(|tau| {
            (0..caps.len()).all(|k| {
                let used: i64 = st
                    .start
                    .iter()
                    .enumerate()
                    .filter_map(|(i, s)| s.map(|s| (i, s)))
                    .filter(|&(i, s)| s <= tau && tau < s + st.dur[i])
                    .map(|(i, _)| st.dem[i][k])
                    .sum();
                used + st.dem[j][k] <= caps[k]
            })
        })
    }
}

struct ListState<'a> {
    start: Vec<Option<i64>>,
    finish_max: i64,
    last: Option<(i64, usize)>,
    modes: &'a [usize],
    dur: &'a [i64],
    dem: &'a [&'a [i64]],
    tail: &'a [i64],
}

/// Minimum makespan over all budget-feasible mode vectors.
///
/// Among optimal solutions the lexicographically smallest mode vector wins;
/// within it, the first canonical list reaching the optimum.
pub fn solve_exact(inst: &Instance, limits: OracleLimits) -> Result<OracleResult, OracleError> {
    let a = inst.activity_count();
    let max_modes = (0..a).map(|i| inst.mode_count(i)).max().unwrap_or(0);
    if !limits.force && (a > MAX_ACTIVITIES || max_modes > MAX_MODES) {
        return Err(OracleError::TooLarge { activities: a, modes: max_modes });
    }
    let graph = build_aon(inst);
    let mut rank = vec![0usize; a];
    for (pos, &node) in graph.topological_order().iter().filter(|&&n| n != graph.source() && n != graph.sink()).enumerate() {
        rank[node - 1] = pos;
    }
    let mut preds = vec![Vec::new(); a];
    let mut succs = vec![Vec::new(); a];
    for &(i, j) in inst.precedence() {
        preds[j].push(i);
        succs[i].push(j);
    }
    let nk = inst.nonrenewable_count();
    let mut min_rest = vec![vec![0i64; nk]; a + 1];
    for i in (0..a).rev() {
        for k in 0..nk {
            let least = inst.modes(i).iter().map(|m| m.nonrenewable[k]).min().unwrap_or(0);
            min_rest[i][k] = min_rest[i + 1][k] + least;
        }
    }

    let mut search = Search {
        inst,
        limits,
        started: Instant::now(),
        preds,
        succs,
        rank,
        nodes: 0,
        aborted: false,
        best: None,
    };
    let mut vectors = 0;
    search.enumerate_modes(&mut Vec::with_capacity(a), &mut vec![0; nk], &min_rest, &mut vectors);

    let schedule = search.best.as_ref().map(|(z, modes, starts)| {
        Schedule::with_makespan(starts.iter().map(|&s| s as f64).collect(), modes.clone(), *z as f64)
    });
    let status = match (&search.best, search.aborted) {
        (_, true) => OracleStatus::Unknown,
        (Some(_), false) => OracleStatus::Optimal,
        (None, false) => OracleStatus::Infeasible,
    };
    Ok(OracleResult {
        status,
        makespan: search.best.as_ref().map(|b| b.0),
        schedule,
        mode_vectors: vectors,
        nodes: search.nodes,
        elapsed: search.started.elapsed(),
    })
}

/// Finds an activity that could start at an earlier integer time with
/// everything else unchanged. `None` means the schedule is left-shifted.
pub fn left_shift_witness(inst: &Instance, schedule: &Schedule) -> Option<(usize, i64)> {
    let a = inst.activity_count();
    let starts: Vec<i64> = schedule.start.iter().map(|s| s.round() as i64).collect();
    for j in 0..a {
        for t in 0..starts[j] {
            let mut moved = starts.clone();
            moved[j] = t;
            let Ok(trial) = Schedule::new(inst, moved.iter().map(|&s| s as f64).collect(), schedule.mode.clone()) else {
                return None;
            };
            if crate::model::validate_schedule(inst, &trial, 0.0).is_ok_and(|r| r.is_feasible()) {
                return Some((j, t));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_schedule, Activity, Mode};

    fn exact(inst: &Instance) -> OracleResult {
        solve_exact(inst, OracleLimits::default()).unwrap()
    }

    #[test]
    fn example_optima() {
        let r = exact(&Instance::example1());
        assert_eq!((r.status, r.makespan), (OracleStatus::Optimal, Some(2)));
        let s = r.schedule.unwrap();
        assert_eq!(s.mode, vec![0, 0]);
        assert!(validate_schedule(&Instance::example1(), &s, 0.0).unwrap().is_feasible());

        let rem = Instance::remark();
        let r = exact(&rem);
        assert_eq!(r.makespan, Some(4));
        let s = r.schedule.unwrap();
        assert!(validate_schedule(&rem, &s, 0.0).unwrap().is_feasible());
        assert_eq!(left_shift_witness(&rem, &s), None);
    }

    #[test]
    fn budget_check() {
        assert!(ma_feasible(&Instance::example1(), &[1, 0]));
        let act = || Activity { modes: vec![Mode::new(1, vec![], vec![3])] };
        let inst = Instance::new(vec![act(), act()], vec![], vec![5], vec![]).unwrap();
        assert!(!ma_feasible(&inst, &[0, 0]));
        assert_eq!(exact(&inst).status, OracleStatus::Infeasible);
    }

    #[test]
    fn nonrenewable_only_is_cpm() {
        let inst = Instance::new(
            vec![
                Activity { modes: vec![Mode::new(2, vec![], vec![1]), Mode::new(5, vec![], vec![0])] },
                Activity { modes: vec![Mode::new(1, vec![], vec![1]), Mode::new(4, vec![], vec![0])] },
                Activity { modes: vec![Mode::new(3, vec![], vec![0])] },
            ],
            vec![],
            vec![1],
            vec![(0, 1)],
        )
        .unwrap();
        // budget allows one fast mode: 2 + 4 = 6 or 5 + 1 = 6; 3 in parallel
        assert_eq!(exact(&inst).makespan, Some(6));
        assert_eq!(cpm_makespan(&inst, &[0, 1, 0]), 6);
    }

    #[test]
    fn node_limit_gives_unknown() {
        let limits = OracleLimits { node_limit: 1, ..Default::default() };
        assert_eq!(solve_exact(&Instance::remark(), limits).unwrap().status, OracleStatus::Unknown);
    }

    #[test]
    fn size_guard() {
        let act = || Activity { modes: vec![Mode::new(1, vec![], vec![])] };
        let inst = Instance::new((0..11).map(|_| act()).collect(), vec![], vec![], vec![]).unwrap();
        assert!(matches!(solve_exact(&inst, OracleLimits::default()), Err(OracleError::TooLarge { .. })));
        let forced = OracleLimits { force: true, ..Default::default() };
        assert_eq!(solve_exact(&inst, forced).unwrap().makespan, Some(1));
    }

    #[test]
    fn zero_duration_activities() {
        let inst = Instance::new(
            vec![
                Activity { modes: vec![Mode::new(0, vec![1], vec![])] },
                Activity { modes: vec![Mode::new(2, vec![1], vec![])] },
            ],
            vec![1],
            vec![],
            vec![(0, 1)],
        )
        .unwrap();
        assert_eq!(exact(&inst).makespan, Some(2));
    }
}
