//! Graph machinery and model enhancement data.
//!
//! Node numbering of the activity-on-node graph: `0` is the dummy source,
//! activity `a` (0-based in [`Instance`]) is node `a + 1`, and the dummy sink
//! is node `A + 1`.

use std::collections::BTreeSet;

use num_rational::Rational64;

use crate::model::Instance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AonGraph {
    activity_count: usize,
    arcs: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    /// `reach[i][j]`: a non-empty path from `i` to `j` exists.
    reach: Vec<Vec<bool>>,
    ancestors: Vec<usize>,
    descendants: Vec<usize>,
    topo: Vec<usize>,
}

impl AonGraph {
    pub fn node_count(&self) -> usize {
        self.activity_count + 2
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.activity_count + 1
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.succ[node]
    }

    pub fn predecessors(&self, node: usize) -> &[usize] {
        &self.pred[node]
    }

    /// Whether `(i, j)` is in the transitive hull (node indices).
    pub fn related(&self, i: usize, j: usize) -> bool {
        self.reach[i][j]
    }

    /// Either activity (0-based) precedes the other.
    pub fn activities_related(&self, a: usize, b: usize) -> bool {
        self.reach[a + 1][b + 1] || self.reach[b + 1][a + 1]
    }

    /// Hull pairs over all nodes, dummies included.
    pub fn hull(&self) -> BTreeSet<(usize, usize)> {
        let n = self.node_count();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.reach[i][j]).collect()
    }

    /// Number of ancestors of activity `a` (0-based) among the activities.
    pub fn ancestors(&self, a: usize) -> usize {
        self.ancestors[a]
    }

    pub fn descendants(&self, a: usize) -> usize {
        self.descendants[a]
    }

    /// Nodes in topological order.
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }
}

/// Builds the AON graph with dummy source and sink.
///
/// Instances are acyclic by construction, so this cannot fail.
pub fn build_aon(instance: &Instance) -> AonGraph {
    let a = instance.activity_count();
    let n = a + 2;
    let sink = a + 1;
    let mut arcs: Vec<(usize, usize)> = instance.precedence().iter().map(|&(i, j)| (i + 1, j + 1)).collect();
    let mut has_pred = vec![false; n];
    let mut has_succ = vec![false; n];
    for &(i, j) in &arcs {
        has_succ[i] = true;
        has_pred[j] = true;
    }
    for v in 1..=a {
        if !has_pred[v] {
            arcs.push((0, v));
        }
        if !has_succ[v] {
            arcs.push((v, sink));
        }
    }
    arcs.sort_unstable();

    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for &(i, j) in &arcs {
        succ[i].push(j);
        pred[j].push(i);
    }

    // Kahn
    let mut indeg: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    ready.reverse();
    let mut topo = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        topo.push(v);
        for &w in succ[v].iter().rev() {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(w);
            }
        }
    }
    assert_eq!(topo.len(), n, "instance precedence must be acyclic");

    let mut reach = vec![vec![false; n]; n];
    for &v in topo.iter().rev() {
        let mut row = vec![false; n];
        for &w in &succ[v] {
            row[w] = true;
            for (x, r) in reach[w].iter().enumerate() {
                if *r {
                    row[x] = true;
                }
            }
        }
        reach[v] = row;
    }

    let ancestors = (1..=a).map(|v| (1..=a).filter(|&u| reach[u][v]).count()).collect();
    let descendants = (1..=a).map(|v| (1..=a).filter(|&u| reach[v][u]).count()).collect();

    AonGraph { activity_count: a, arcs, succ, pred, reach, ancestors, descendants, topo }
}

/// Earliest and latest start per node plus the horizon `T = L_sink`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeWindows {
    pub earliest: Vec<i64>,
    pub latest: Vec<i64>,
    pub horizon: i64,
}

/// Upper bound on the optimal makespan: every activity in its longest mode, one after another.
pub fn serial_horizon(instance: &Instance) -> i64 {
    (0..instance.activity_count()).map(|i| instance.max_duration(i)).sum()
}

fn node_min_duration(instance: &Instance, node: usize) -> i64 {
    if node == 0 || node > instance.activity_count() {
        0
    } else {
        instance.min_duration(node - 1)
    }
}

/// Multi-mode CPM with minimum durations in both passes.
pub fn time_windows(instance: &Instance, graph: &AonGraph) -> TimeWindows {
    time_windows_with_horizon(instance, graph, serial_horizon(instance))
}

pub fn time_windows_with_horizon(instance: &Instance, graph: &AonGraph, horizon: i64) -> TimeWindows {
    let n = graph.node_count();
    let mut earliest = vec![0i64; n];
    for &v in graph.topological_order() {
        let p = node_min_duration(instance, v);
        for &w in graph.successors(v) {
            earliest[w] = earliest[w].max(earliest[v] + p);
        }
    }
    let horizon = horizon.max(earliest[graph.sink()]);
    let mut latest = vec![horizon; n];
    for &v in graph.topological_order().iter().rev() {
        let p = node_min_duration(instance, v);
        for &w in graph.successors(v) {
            latest[v] = latest[v].min(latest[w] - p);
        }
    }
    // the project starts at time zero
    latest[0] = 0;
    TimeWindows { earliest, latest, horizon }
}

/// An activity-mode combination, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivityMode {
    pub activity: usize,
    pub mode: usize,
}

/// Two activity-mode combinations that cannot run in parallel. Stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IncompatiblePair {
    pub u: ActivityMode,
    pub v: ActivityMode,
}

/// Activity-mode pairs on distinct activities whose joint demand exceeds some
/// renewable capacity. Pairs of hull-related activities are skipped unless
/// `include_related` is set, since they never overlap anyway.
pub fn incompatible_pairs(instance: &Instance, graph: &AonGraph, include_related: bool) -> BTreeSet<IncompatiblePair> {
    let a = instance.activity_count();
    let caps = instance.renewable_capacity();
    let mut out = BTreeSet::new();
    for i in 0..a {
        for j in i + 1..a {
            if !include_related && graph.activities_related(i, j) {
                continue;
            }
            for (mi, x) in instance.modes(i).iter().enumerate() {
                for (mj, y) in instance.modes(j).iter().enumerate() {
                    if (0..caps.len()).any(|k| x.renewable[k] + y.renewable[k] > caps[k]) {
                        out.insert(IncompatiblePair {
                            u: ActivityMode { activity: i, mode: mi },
                            v: ActivityMode { activity: j, mode: mj },
                        });
                    }
                }
            }
        }
    }
    out
}

/// Resource strength of renewable resource `k`.
///
/// `RS = (B - bmin) / (bmax - bmin)` where `bmin` is the largest minimal
/// single-activity demand and `bmax` the peak demand of the precedence-only
/// earliest start schedule with every activity in its highest-demand mode.
/// Returns `None` when `bmax == bmin`.
pub fn resource_strength(instance: &Instance, graph: &AonGraph, k: usize) -> Option<Rational64> {
    let a = instance.activity_count();
    let bmin = (0..a).map(|i| instance.modes(i).iter().map(|m| m.renewable[k]).min().unwrap_or(0)).max()?;
    // first mode with maximal demand on k
    let chosen: Vec<usize> = (0..a)
        .map(|i| {
            let modes = instance.modes(i);
            let best = modes.iter().map(|m| m.renewable[k]).max().unwrap_or(0);
            modes.iter().position(|m| m.renewable[k] == best).unwrap_or(0)
        })
        .collect();
    let dur = |node: usize| if node == 0 || node > a { 0 } else { instance.duration(node - 1, chosen[node - 1]) };
    let mut est = vec![0i64; graph.node_count()];
    for &v in graph.topological_order() {
        for &w in graph.successors(v) {
            est[w] = est[w].max(est[v] + dur(v));
        }
    }
    let bmax = (0..a)
        .map(|t| est[t + 1])
        .map(|t| {
            (0..a)
                .filter(|&i| est[i + 1] <= t && t < est[i + 1] + dur(i + 1))
                .map(|i| instance.mode(i, chosen[i]).renewable[k])
                .sum::<i64>()
        })
        .max()
        .unwrap_or(0);
    if bmax == bmin {
        return None;
    }
    Some(Rational64::new(instance.renewable_capacity()[k] - bmin, bmax - bmin))
}

/// Everything the formulation builders need besides the instance.
#[derive(Debug, Clone)]
pub struct Preprocessed {
    pub graph: AonGraph,
    pub windows: TimeWindows,
    pub pairs: BTreeSet<IncompatiblePair>,
}

impl Preprocessed {
    pub fn new(instance: &Instance) -> Self {
        let graph = build_aon(instance);
        let windows = time_windows(instance, &graph);
        let pairs = incompatible_pairs(instance, &graph, false);
        Preprocessed { graph, windows, pairs }
    }
}
