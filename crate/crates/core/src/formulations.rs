//! Compilation of an [`Instance`] into the continuous-time MILP models.
//!
//! Index conventions in variable names: activities and modes are 1-based,
//! events are 0-based, and network nodes use `0` for the source and `A + 1`
//! for the sink (so node `i` is activity `i`). Dummy nodes run in mode `0`.
//!
//! | kind  | variables |
//! |-------|-----------|
//! | SEE, SEE-A | `x_i_m_e` (e < A), `y_i_m_e` (e > 0), `s_e`, `r_e_k` (e < A) |
//! | RSEE  | `xt_i_m_e` (e < A), `yt_i_m_e` (e > 0), `s_e` |
//! | OOE, OOE-A | `z_i_m_e` (e < A), `s_e` (e ≤ A), `r_i_k` (non-renewable) |
//! | FCT-W, FCT-S | `x_i_m`, `y_i_j`, `f_i_j_k`, `s_i` over all nodes |

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::milp::{int, Coef, LinExpr, MilpModel, PointAssignment, Sense, VarId};
use crate::model::{Instance, Schedule};
use crate::preprocess::Preprocessed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    See,
    SeeA,
    Rsee,
    Ooe,
    OoeA,
    FctW,
    FctS,
}

impl ModelKind {
    pub const ALL: [ModelKind; 7] =
        [ModelKind::See, ModelKind::SeeA, ModelKind::Rsee, ModelKind::Ooe, ModelKind::OoeA, ModelKind::FctW, ModelKind::FctS];

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::See => "SEE",
            ModelKind::SeeA => "SEE-A",
            ModelKind::Rsee => "RSEE",
            ModelKind::Ooe => "OOE",
            ModelKind::OoeA => "OOE-A",
            ModelKind::FctW => "FCT-W",
            ModelKind::FctS => "FCT-S",
        }
    }

    pub fn is_flow(self) -> bool {
        matches!(self, ModelKind::FctW | ModelKind::FctS)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelKind {
    type Err = FormulationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "see" => Ok(ModelKind::See),
            "see-a" | "sea" => Ok(ModelKind::SeeA),
            "rsee" => Ok(ModelKind::Rsee),
            "ooe" => Ok(ModelKind::Ooe),
            "ooe-a" | "ooa" => Ok(ModelKind::OoeA),
            "fct-w" | "fctw" => Ok(ModelKind::FctW),
            "fct-s" | "fcts" => Ok(ModelKind::FctS),
            other => Err(FormulationError::UnknownModel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeConsistency {
    None,
    Full,
    Aggregate,
}

impl FromStr for ModeConsistency {
    type Err = FormulationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(ModeConsistency::None),
            "full" => Ok(ModeConsistency::Full),
            "agg" | "aggregate" => Ok(ModeConsistency::Aggregate),
            other => Err(FormulationError::UnknownOption(format!("mode consistency {other:?}"))),
        }
    }
}

/// How FCT-S bounds arc flows by the smaller of the two endpoint demands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StrongFlowRows {
    /// `f <= M y`, `f <= sum_m b_i x_i`, `f <= sum_m b_j x_j`.
    #[default]
    Triple,
    /// Product/min linearization with auxiliary `u_i_j_k` and `w_i_j_k`.
    Auxiliary,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FormulationOptions {
    /// `None` picks the model default: full for SEE, aggregate for SEE-A,
    /// none for OOE, full for OOE-A. Ignored by RSEE and FCT.
    pub mode_consistency: Option<ModeConsistency>,
    pub time_windows: bool,
    pub variable_fixing: bool,
    /// FCT-W only.
    pub incompatible_pairs: bool,
    /// OOE family: add the dominating event-time rows.
    pub strong_event_time: bool,
    pub strong_flow_rows: StrongFlowRows,
    /// Allow option combinations that have no counterpart in the literature
    /// (currently: variable fixing for RSEE).
    pub experimental: bool,
}

impl FormulationOptions {
    pub fn with_mc(mut self, mc: ModeConsistency) -> Self {
        self.mode_consistency = Some(mc);
        self
    }

    pub fn with_tw(mut self) -> Self {
        self.time_windows = true;
        self
    }

    pub fn with_vf(mut self) -> Self {
        self.variable_fixing = true;
        self
    }

    pub fn with_rc(mut self) -> Self {
        self.incompatible_pairs = true;
        self
    }

    /// Short tag such as `TW-VF`, used in model names.
    pub fn tag(&self) -> String {
        let mut parts = Vec::new();
        match self.mode_consistency {
            Some(ModeConsistency::None) => parts.push("noMC"),
            Some(ModeConsistency::Full) => parts.push("MC"),
            Some(ModeConsistency::Aggregate) => parts.push("MCA"),
            None => {}
        }
        if self.time_windows {
            parts.push("TW");
        }
        if self.variable_fixing {
            parts.push("VF");
        }
        if self.incompatible_pairs {
            parts.push("RC");
        }
        if self.strong_event_time {
            parts.push("SET");
        }
        if self.strong_flow_rows == StrongFlowRows::Auxiliary {
            parts.push("AUX");
        }
        parts.join("-")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulationError {
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("unknown option {0}")]
    UnknownOption(String),
    #[error("{kind} does not support {what}")]
    Unsupported { kind: ModelKind, what: &'static str },
}

/// Builds `kind` for `instance`.
pub fn build(
    kind: ModelKind,
    instance: &Instance,
    pre: &Preprocessed,
    opts: &FormulationOptions,
) -> Result<MilpModel, FormulationError> {
    match kind {
        ModelKind::See => build_see(instance, pre, opts),
        ModelKind::SeeA => {
            if opts.mode_consistency.is_some_and(|mc| mc != ModeConsistency::Aggregate) {
                return Err(FormulationError::Unsupported { kind, what: "a mode-consistency setting other than aggregate" });
            }
            build_see(instance, pre, &opts.clone().with_mc(ModeConsistency::Aggregate))
        }
        ModelKind::Rsee => build_rsee(instance, pre, opts),
        ModelKind::Ooe => build_ooe(instance, pre, opts),
        ModelKind::OoeA => build_ooe_a(instance, pre, opts),
        ModelKind::FctW | ModelKind::FctS => build_fct(kind, instance, pre, opts),
    }
}

fn model_name(kind: ModelKind, opts: &FormulationOptions) -> String {
    let tag = opts.tag();
    if tag.is_empty() {
        kind.label().to_string()
    } else {
        format!("{}-{}", kind.label(), tag)
    }
}

fn ex() -> LinExpr {
    LinExpr::new()
}

fn c(v: i64) -> LinExpr {
    LinExpr::constant(int(v))
}

fn v(id: VarId) -> LinExpr {
    LinExpr::var(id)
}

/// Event-indexed binaries `[activity][mode][event]`, `None` where the event is outside the family's range.
type EventVars = Vec<Vec<Vec<Option<VarId>>>>;

fn event_vars(model: &mut MilpModel, inst: &Instance, family: &'static str, events: std::ops::Range<usize>, total: usize) -> EventVars {
    (0..inst.activity_count())
        .map(|i| {
            (0..inst.mode_count(i))
                .map(|m| {
                    (0..total)
                        .map(|e| events.contains(&e).then(|| model.binary(family, &[i + 1, m + 1, e])))
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn ev(vars: &EventVars, i: usize, m: usize, e: i64) -> Option<VarId> {
    if e < 0 {
        return None;
    }
    vars[i][m].get(e as usize).copied().flatten()
}

// ---------------------------------------------------------------------------
// start/end events

/// Start/end event model. Events `0..=A`; `x` lives on `0..A`, `y` on `1..=A`.
pub fn build_see(inst: &Instance, pre: &Preprocessed, opts: &FormulationOptions) -> Result<MilpModel, FormulationError> {
    let a = inst.activity_count();
    let mc = opts.mode_consistency.unwrap_or(ModeConsistency::Full);
    let kind = if mc == ModeConsistency::Aggregate { ModelKind::SeeA } else { ModelKind::See };
    if opts.incompatible_pairs {
        return Err(FormulationError::Unsupported { kind, what: "incompatible-pair rows" });
    }
    let mut m = MilpModel::new(model_name(kind, &opts.clone().with_mc(mc)));
    let tw = &pre.windows;
    let sink = pre.graph.sink();

    let x = event_vars(&mut m, inst, "x", 0..a, a + 1);
    let y = event_vars(&mut m, inst, "y", 1..a + 1, a + 1);
    let s: Vec<VarId> = (0..=a).map(|e| m.continuous("s", &[e], Coef::zero(), None)).collect();
    let r: Vec<Vec<VarId>> = (0..a)
        .map(|e| {
            (0..inst.renewable_count())
                .map(|k| m.continuous("r", &[e, k + 1], Coef::zero(), Some(int(inst.renewable_capacity()[k]))))
                .collect()
        })
        .collect();

    m.set_objective(v(s[a]));
    m.add_constraint("first", v(s[0]), Sense::Eq, c(0));
    for e in 0..a {
        m.add_constraint(format!("order_{e}"), v(s[e]), Sense::Le, v(s[e + 1]));
    }
    for i in 0..a {
        for mm in 0..inst.mode_count(i) {
            let p = int(inst.duration(i, mm));
            for e in 0..a {
                for f in e + 1..=a {
                    let mut rhs = v(s[e]);
                    rhs.add_opt(x[i][mm][e], p).add_opt(y[i][mm][f], p).add_const(-p);
                    m.add_constraint(format!("evt_{}_{}_{e}_{f}", i + 1, mm + 1), v(s[f]), Sense::Ge, rhs);
                }
            }
        }
    }
    for i in 0..a {
        let mut starts = ex();
        let mut ends = ex();
        for mm in 0..inst.mode_count(i) {
            for e in 0..=a {
                starts.add_opt(x[i][mm][e], Coef::one());
                ends.add_opt(y[i][mm][e], Coef::one());
            }
        }
        m.add_constraint(format!("start_{}", i + 1), starts, Sense::Eq, c(1));
        m.add_constraint(format!("end_{}", i + 1), ends, Sense::Eq, c(1));
    }
    for i in 0..a {
        for e in 1..a {
            let mut lhs = ex();
            for mm in 0..inst.mode_count(i) {
                for e2 in 1..=e {
                    lhs.add_opt(y[i][mm][e2], Coef::one());
                }
                for e2 in e..a {
                    lhs.add_opt(x[i][mm][e2], Coef::one());
                }
            }
            m.add_constraint(format!("endafter_{}_{e}", i + 1), lhs, Sense::Le, c(1));
        }
    }
    for &(i, j) in inst.precedence() {
        for e in 1..=a {
            let mut lhs = ex();
            for mm in 0..inst.mode_count(i) {
                for e2 in e..=a {
                    lhs.add_opt(y[i][mm][e2], Coef::one());
                }
            }
            for mm in 0..inst.mode_count(j) {
                for e2 in 0..e {
                    lhs.add_opt(x[j][mm][e2], Coef::one());
                }
            }
            m.add_constraint(format!("prec_{}_{}_{e}", i + 1, j + 1), lhs, Sense::Le, c(1));
        }
    }
    for k in 0..inst.renewable_count() {
        for e in 0..a {
            let mut rhs = ex();
            if e > 0 {
                rhs.add(r[e - 1][k], Coef::one());
            }
            for i in 0..a {
                for (mm, mode) in inst.modes(i).iter().enumerate() {
                    let b = int(mode.renewable[k]);
                    rhs.add_opt(x[i][mm][e], b).add_opt(y[i][mm][e], -b);
                }
            }
            m.add_constraint(format!("res_{e}_{}", k + 1), v(r[e][k]), Sense::Eq, rhs);
        }
    }
    for k in 0..inst.nonrenewable_count() {
        let mut lhs = ex();
        for i in 0..a {
            for (mm, mode) in inst.modes(i).iter().enumerate() {
                for e in 0..a {
                    lhs.add_opt(x[i][mm][e], int(mode.nonrenewable[k]));
                }
            }
        }
        m.add_constraint(format!("nres_{}", k + 1), lhs, Sense::Le, c(inst.nonrenewable_capacity()[k]));
    }

    match mc {
        ModeConsistency::None => {}
        ModeConsistency::Full => {
            for i in 0..a {
                for mm in 0..inst.mode_count(i) {
                    for e in 0..a {
                        let mut rhs = ex();
                        for m2 in (0..inst.mode_count(i)).filter(|&m2| m2 != mm) {
                            for f in 1..=a {
                                rhs.add_opt(y[i][m2][f], Coef::one());
                            }
                        }
                        let mut lhs = c(1);
                        lhs.add_opt(x[i][mm][e], -Coef::one());
                        m.add_constraint(format!("mc_{}_{}_{e}", i + 1, mm + 1), lhs, Sense::Ge, rhs);
                    }
                }
            }
        }
        ModeConsistency::Aggregate => {
            for i in 0..a {
                for mm in 0..inst.mode_count(i) {
                    let mut lhs = ex();
                    for e in 0..a {
                        lhs.add_opt(x[i][mm][e], Coef::one());
                    }
                    for m2 in (0..inst.mode_count(i)).filter(|&m2| m2 != mm) {
                        for f in 1..=a {
                            lhs.add_opt(y[i][m2][f], Coef::one());
                        }
                    }
                    m.add_constraint(format!("mca_{}_{}", i + 1, mm + 1), lhs, Sense::Le, c(1));
                }
            }
        }
    }

    if opts.time_windows {
        let l_sink = tw.latest[sink];
        for i in 0..a {
            let (e_i, l_i) = (tw.earliest[i + 1], tw.latest[i + 1]);
            for e in 1..a {
                let mut lo = ex();
                let mut hi = c(l_sink);
                for mm in 0..inst.mode_count(i) {
                    for e2 in 0..=e {
                        lo.add_opt(x[i][mm][e2], int(e_i));
                    }
                    hi.add_opt(x[i][mm][e], int(l_i - l_sink));
                }
                m.add_constraint(format!("tws_lo_{}_{e}", i + 1), lo, Sense::Le, v(s[e]));
                m.add_constraint(format!("tws_up_{}_{e}", i + 1), v(s[e]), Sense::Le, hi);
            }
            for e in 1..=a {
                let mut lo = ex();
                let mut hi = c(l_sink);
                for (mm, mode) in inst.modes(i).iter().enumerate() {
                    for e2 in 1..=e {
                        lo.add_opt(y[i][mm][e2], int(e_i + mode.duration));
                    }
                    hi.add_opt(y[i][mm][e], int(l_i + mode.duration - l_sink));
                }
                m.add_constraint(format!("twe_lo_{}_{e}", i + 1), lo, Sense::Le, v(s[e]));
                m.add_constraint(format!("twe_up_{}_{e}", i + 1), v(s[e]), Sense::Le, hi);
            }
        }
        m.add_constraint("tw_ms_lo", v(s[a]), Sense::Ge, c(tw.earliest[sink]));
        m.add_constraint("tw_ms_up", v(s[a]), Sense::Le, c(l_sink));
    }

    if opts.variable_fixing {
        for i in 0..a {
            let (anc, desc) = (pre.graph.ancestors(i), pre.graph.descendants(i));
            for mm in 0..inst.mode_count(i) {
                for e in 0..=a {
                    if let Some(id) = x[i][mm][e] {
                        if e < anc || e >= a - desc {
                            m.fix(id, Coef::zero());
                        }
                    }
                    if let Some(id) = y[i][mm][e] {
                        if e <= anc || e > a - desc {
                            m.fix(id, Coef::zero());
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// revised start/end events

/// Cumulative start/end event model. Mode consistency is built in.
pub fn build_rsee(inst: &Instance, pre: &Preprocessed, opts: &FormulationOptions) -> Result<MilpModel, FormulationError> {
    let kind = ModelKind::Rsee;
    if opts.time_windows {
        return Err(FormulationError::Unsupported { kind, what: "time windows" });
    }
    if opts.variable_fixing && !opts.experimental {
        return Err(FormulationError::Unsupported { kind, what: "variable fixing (pass experimental to force it)" });
    }
    if opts.incompatible_pairs {
        return Err(FormulationError::Unsupported { kind, what: "incompatible-pair rows" });
    }
    let a = inst.activity_count() as i64;
    let au = inst.activity_count();
    let mut name_opts = opts.clone();
    name_opts.mode_consistency = None;
    let mut m = MilpModel::new(model_name(kind, &name_opts));

    let xt = event_vars(&mut m, inst, "xt", 0..au, au + 1);
    let yt = event_vars(&mut m, inst, "yt", 1..au + 1, au + 1);
    let s: Vec<VarId> = (0..=au).map(|e| m.continuous("s", &[e], Coef::zero(), None)).collect();

    m.set_objective(v(s[au]));
    m.add_constraint("first", v(s[0]), Sense::Eq, c(0));
    for e in 0..au {
        m.add_constraint(format!("order_{e}"), v(s[e]), Sense::Le, v(s[e + 1]));
    }
    for i in 0..au {
        for mm in 0..inst.mode_count(i) {
            let p = int(inst.duration(i, mm));
            for e in 0..a {
                for f in e + 1..=a {
                    let mut rhs = v(s[e as usize]);
                    rhs.add_opt(ev(&yt, i, mm, f), p).add_opt(ev(&xt, i, mm, e - 1), -p);
                    m.add_constraint(format!("evt_{}_{}_{e}_{f}", i + 1, mm + 1), v(s[f as usize]), Sense::Ge, rhs);
                }
            }
        }
    }
    for i in 0..au {
        let mut starts = ex();
        let mut ends = ex();
        for mm in 0..inst.mode_count(i) {
            starts.add_opt(ev(&xt, i, mm, a - 1), Coef::one());
            ends.add_opt(ev(&yt, i, mm, a), Coef::one());
        }
        m.add_constraint(format!("start_{}", i + 1), starts, Sense::Eq, c(1));
        m.add_constraint(format!("end_{}", i + 1), ends, Sense::Eq, c(1));
    }
    for i in 0..au {
        for mm in 0..inst.mode_count(i) {
            for e in 0..a - 1 {
                let (cur, next) = (ev(&xt, i, mm, e).unwrap(), ev(&xt, i, mm, e + 1).unwrap());
                m.add_constraint(format!("monox_{}_{}_{e}", i + 1, mm + 1), v(cur), Sense::Le, v(next));
            }
            for e in 1..a {
                let (cur, next) = (ev(&yt, i, mm, e).unwrap(), ev(&yt, i, mm, e + 1).unwrap());
                m.add_constraint(format!("monoy_{}_{}_{e}", i + 1, mm + 1), v(cur), Sense::Le, v(next));
            }
            for e in 1..=a {
                let mut rhs = ex();
                rhs.add_opt(ev(&xt, i, mm, e - 1), Coef::one());
                m.add_constraint(format!("startfirst_{}_{}_{e}", i + 1, mm + 1), v(ev(&yt, i, mm, e).unwrap()), Sense::Le, rhs);
            }
        }
    }
    for &(i, j) in inst.precedence() {
        for e in 0..a {
            let mut lhs = ex();
            for mm in 0..inst.mode_count(j) {
                lhs.add_opt(ev(&xt, j, mm, e), Coef::one());
            }
            let mut rhs = ex();
            for mm in 0..inst.mode_count(i) {
                rhs.add_opt(ev(&yt, i, mm, e), Coef::one());
            }
            m.add_constraint(format!("prec_{}_{}_{e}", i + 1, j + 1), lhs, Sense::Le, rhs);
        }
    }
    for k in 0..inst.renewable_count() {
        for e in 0..a {
            let mut lhs = ex();
            for i in 0..au {
                for (mm, mode) in inst.modes(i).iter().enumerate() {
                    let b = int(mode.renewable[k]);
                    lhs.add_opt(ev(&xt, i, mm, e), b).add_opt(ev(&yt, i, mm, e), -b);
                }
            }
            m.add_constraint(format!("res_{e}_{}", k + 1), lhs, Sense::Le, c(inst.renewable_capacity()[k]));
        }
    }
    for k in 0..inst.nonrenewable_count() {
        let mut lhs = ex();
        for i in 0..au {
            for (mm, mode) in inst.modes(i).iter().enumerate() {
                lhs.add_opt(ev(&xt, i, mm, a - 1), int(mode.nonrenewable[k]));
            }
        }
        m.add_constraint(format!("nres_{}", k + 1), lhs, Sense::Le, c(inst.nonrenewable_capacity()[k]));
    }
    for i in 0..au {
        for mm in 0..inst.mode_count(i) {
            let mut lhs = ex();
            for m2 in (0..inst.mode_count(i)).filter(|&m2| m2 != mm) {
                lhs.add_opt(ev(&yt, i, m2, a), Coef::one());
            }
            lhs.add_opt(ev(&xt, i, mm, a - 1), Coef::one());
            m.add_constraint(format!("mc_{}_{}", i + 1, mm + 1), lhs, Sense::Le, c(1));
        }
    }
    if opts.variable_fixing {
        // Only the "not yet started / finished" side translates to the cumulative variables.
        for i in 0..au {
            let anc = pre.graph.ancestors(i) as i64;
            for mm in 0..inst.mode_count(i) {
                for e in 0..=a {
                    if e < anc {
                        if let Some(id) = ev(&xt, i, mm, e) {
                            m.fix(id, Coef::zero());
                        }
                    }
                    if e <= anc {
                        if let Some(id) = ev(&yt, i, mm, e) {
                            m.fix(id, Coef::zero());
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// on/off events

struct OoeVars {
    z: EventVars,
    s: Vec<VarId>,
}

fn ooe_common(m: &mut MilpModel, inst: &Instance, opts: &FormulationOptions) -> OoeVars {
    let au = inst.activity_count();
    let a = au as i64;
    let z = event_vars(m, inst, "z", 0..au, au);
    let s: Vec<VarId> = (0..=au).map(|e| m.continuous("s", &[e], Coef::zero(), None)).collect();
    let r: Vec<Vec<VarId>> = (0..au)
        .map(|i| (0..inst.nonrenewable_count()).map(|k| m.continuous("r", &[i + 1, k + 1], Coef::zero(), None)).collect())
        .collect();

    m.set_objective(v(s[au]));
    m.add_constraint("first", v(s[0]), Sense::Eq, c(0));
    for e in 0..au {
        m.add_constraint(format!("order_{e}"), v(s[e + 1]), Sense::Ge, v(s[e]));
    }
    for i in 0..au {
        for mm in 0..inst.mode_count(i) {
            let p = int(inst.duration(i, mm));
            for e in 0..a {
                for f in e + 1..=a {
                    let mut rhs = v(s[e as usize]);
                    rhs.add_opt(ev(&z, i, mm, e), p)
                        .add_opt(ev(&z, i, mm, e - 1), -p)
                        .add_opt(ev(&z, i, mm, f - 1), p)
                        .add_opt(ev(&z, i, mm, f), -p)
                        .add_const(-p);
                    m.add_constraint(format!("evt_{}_{}_{e}_{f}", i + 1, mm + 1), v(s[f as usize]), Sense::Ge, rhs);
                }
            }
            if opts.strong_event_time {
                for e in 0..a {
                    for f in e + 1..a {
                        for g in f + 1..=a {
                            let mut rhs = v(s[e as usize]);
                            rhs.add_opt(ev(&z, i, mm, f), p).add_opt(ev(&z, i, mm, e), -p).add_opt(ev(&z, i, mm, g), -p);
                            m.add_constraint(
                                format!("sevt_{}_{}_{e}_{f}_{g}", i + 1, mm + 1),
                                v(s[g as usize]),
                                Sense::Ge,
                                rhs,
                            );
                        }
                    }
                }
            }
        }
    }
    for i in 0..au {
        let mut lhs = ex();
        for mm in 0..inst.mode_count(i) {
            for e in 0..a {
                lhs.add_opt(ev(&z, i, mm, e), Coef::one());
            }
        }
        m.add_constraint(format!("active_{}", i + 1), lhs, Sense::Ge, c(1));
    }
    for k in 0..inst.renewable_count() {
        for e in 0..a {
            let mut lhs = ex();
            for i in 0..au {
                for (mm, mode) in inst.modes(i).iter().enumerate() {
                    lhs.add_opt(ev(&z, i, mm, e), int(mode.renewable[k]));
                }
            }
            m.add_constraint(format!("res_{e}_{}", k + 1), lhs, Sense::Le, c(inst.renewable_capacity()[k]));
        }
    }
    for k in 0..inst.nonrenewable_count() {
        for i in 0..au {
            for e in 0..a {
                let mut lhs = ex();
                for (mm, mode) in inst.modes(i).iter().enumerate() {
                    lhs.add_opt(ev(&z, i, mm, e), int(mode.nonrenewable[k]));
                }
                m.add_constraint(format!("nuse_{}_{e}_{}", i + 1, k + 1), lhs, Sense::Le, v(r[i][k]));
            }
        }
        let mut total = ex();
        for row in &r {
            total.add(row[k], Coef::one());
        }
        m.add_constraint(format!("nres_{}", k + 1), total, Sense::Le, c(inst.nonrenewable_capacity()[k]));
    }
    OoeVars { z, s }
}

fn ooe_mode_consistency(m: &mut MilpModel, inst: &Instance, z: &EventVars) {
    let au = inst.activity_count();
    let a = au as i64;
    for i in 0..au {
        for mm in 0..inst.mode_count(i) {
            for e in 0..a {
                let mut lhs = ex();
                for m2 in (0..inst.mode_count(i)).filter(|&m2| m2 != mm) {
                    for f in 0..a {
                        lhs.add_opt(ev(z, i, m2, f), Coef::one());
                    }
                }
                let mut rhs = c(a);
                rhs.add_opt(ev(z, i, mm, e), -int(a));
                m.add_constraint(format!("mc_{}_{}_{e}", i + 1, mm + 1), lhs, Sense::Le, rhs);
            }
        }
    }
}

fn ooe_enhancements(m: &mut MilpModel, inst: &Instance, pre: &Preprocessed, opts: &FormulationOptions, vars: &OoeVars) {
    let au = inst.activity_count();
    let a = au as i64;
    let (z, s) = (&vars.z, &vars.s);
    if opts.time_windows {
        let tw = &pre.windows;
        let sink = pre.graph.sink();
        let l_sink = tw.latest[sink];
        for i in 0..au {
            let (e_i, l_i) = (tw.earliest[i + 1], tw.latest[i + 1]);
            for e in 1..a {
                let mut lo = ex();
                let mut hi = c(l_sink);
                for mm in 0..inst.mode_count(i) {
                    lo.add_opt(ev(z, i, mm, e), int(e_i));
                    hi.add_opt(ev(z, i, mm, e), int(l_i - l_sink));
                }
                m.add_constraint(format!("twa_lo_{}_{e}", i + 1), lo, Sense::Le, v(s[e as usize]));
                m.add_constraint(format!("twa_up_{}_{e}", i + 1), v(s[e as usize]), Sense::Le, hi);
            }
            for e in 2..a {
                let mut lo = ex();
                let mut hi = c(l_sink);
                for (mm, mode) in inst.modes(i).iter().enumerate() {
                    let (low, up) = (int(e_i + mode.duration), int(l_i + mode.duration - l_sink));
                    lo.add_opt(ev(z, i, mm, e - 1), low).add_opt(ev(z, i, mm, e), -low);
                    hi.add_opt(ev(z, i, mm, e - 1), up).add_opt(ev(z, i, mm, e), -up);
                }
                m.add_constraint(format!("twe_lo_{}_{e}", i + 1), lo, Sense::Le, v(s[e as usize]));
                m.add_constraint(format!("twe_up_{}_{e}", i + 1), v(s[e as usize]), Sense::Le, hi);
            }
        }
        m.add_constraint("tw_ms_lo", v(s[au]), Sense::Ge, c(tw.earliest[sink]));
        m.add_constraint("tw_ms_up", v(s[au]), Sense::Le, c(l_sink));
    }
    if opts.variable_fixing {
        for i in 0..au {
            let (anc, desc) = (pre.graph.ancestors(i) as i64, pre.graph.descendants(i) as i64);
            for mm in 0..inst.mode_count(i) {
                for e in 0..a {
                    if e < anc || e >= a - desc {
                        m.fix(ev(z, i, mm, e).unwrap(), Coef::zero());
                    }
                }
            }
        }
    }
}

/// On/off event model with per-mode contiguity rows.
pub fn build_ooe(inst: &Instance, pre: &Preprocessed, opts: &FormulationOptions) -> Result<MilpModel, FormulationError> {
    let mc = opts.mode_consistency.unwrap_or(ModeConsistency::None);
    if mc == ModeConsistency::Aggregate {
        return Err(FormulationError::Unsupported { kind: ModelKind::Ooe, what: "aggregate mode consistency" });
    }
    if opts.incompatible_pairs {
        return Err(FormulationError::Unsupported { kind: ModelKind::Ooe, what: "incompatible-pair rows" });
    }
    let au = inst.activity_count();
    let a = au as i64;
    let mut m = MilpModel::new(model_name(ModelKind::Ooe, &opts.clone().with_mc(mc)));
    let vars = ooe_common(&mut m, inst, opts);
    let z = &vars.z;

    for i in 0..au {
        for mm in 0..inst.mode_count(i) {
            for e in 1..a {
                // sum_{m', e' < e} z + e z_ime - e z_im,e-1 <= e
                let mut lhs = ex();
                for m2 in 0..inst.mode_count(i) {
                    for e2 in 0..e {
                        lhs.add_opt(ev(z, i, m2, e2), Coef::one());
                    }
                }
                lhs.add_opt(ev(z, i, mm, e), int(e)).add_opt(ev(z, i, mm, e - 1), -int(e));
                m.add_constraint(format!("cbw_{}_{}_{e}", i + 1, mm + 1), lhs, Sense::Le, c(e));

                let mut lhs = ex();
                for m2 in 0..inst.mode_count(i) {
                    for e2 in e..a {
                        lhs.add_opt(ev(z, i, m2, e2), Coef::one());
                    }
                }
                lhs.add_opt(ev(z, i, mm, e - 1), int(a - e)).add_opt(ev(z, i, mm, e), -int(a - e));
                m.add_constraint(format!("cfw_{}_{}_{e}", i + 1, mm + 1), lhs, Sense::Le, c(a - e));
            }
        }
    }
    for &(i, j) in inst.precedence() {
        for mm in 0..inst.mode_count(i) {
            for e in 0..a {
                let mut lhs = ex();
                for m2 in 0..inst.mode_count(j) {
                    for e2 in 0..=e {
                        lhs.add_opt(ev(z, j, m2, e2), Coef::one());
                    }
                }
                lhs.add_opt(ev(z, i, mm, e), int(e + 1));
                m.add_constraint(format!("prec_{}_{}_{}_{e}", i + 1, j + 1, mm + 1), lhs, Sense::Le, c(e + 1));
            }
        }
    }
    if mc == ModeConsistency::Full {
        ooe_mode_consistency(&mut m, inst, z);
    }
    ooe_enhancements(&mut m, inst, pre, opts, &vars);
    Ok(m)
}

/// On/off event model with activity-level (aggregate) contiguity and precedence rows.
/// Mode consistency rows are always present.
pub fn build_ooe_a(inst: &Instance, pre: &Preprocessed, opts: &FormulationOptions) -> Result<MilpModel, FormulationError> {
    build_ooe_aggregate(inst, pre, opts, true)
}

/// OOE-A with or without its mode consistency rows; the variant without them
/// is not a valid formulation and only exists to demonstrate why.
pub fn build_ooe_aggregate(
    inst: &Instance,
    pre: &Preprocessed,
    opts: &FormulationOptions,
    with_mc: bool,
) -> Result<MilpModel, FormulationError> {
    if opts.incompatible_pairs {
        return Err(FormulationError::Unsupported { kind: ModelKind::OoeA, what: "incompatible-pair rows" });
    }
    if opts.mode_consistency.is_some_and(|mc| mc != ModeConsistency::Full) {
        return Err(FormulationError::Unsupported { kind: ModelKind::OoeA, what: "dropping or aggregating mode consistency" });
    }
    let au = inst.activity_count();
    let a = au as i64;
    let mut name_opts = opts.clone();
    name_opts.mode_consistency = None;
    let mut m = MilpModel::new(model_name(ModelKind::OoeA, &name_opts));
    let vars = ooe_common(&mut m, inst, opts);
    let z = &vars.z;

    for i in 0..au {
        let modes = inst.mode_count(i);
        for e in 1..a {
            let mut lhs = ex();
            for mm in 0..modes {
                for e2 in 0..e {
                    lhs.add_opt(ev(z, i, mm, e2), Coef::one());
                }
                lhs.add_opt(ev(z, i, mm, e), int(e)).add_opt(ev(z, i, mm, e - 1), -int(e));
            }
            m.add_constraint(format!("cbw_{}_{e}", i + 1), lhs, Sense::Le, c(e));
        }
        for e in 0..a {
            let mut lhs = ex();
            for mm in 0..modes {
                for e2 in e..a {
                    lhs.add_opt(ev(z, i, mm, e2), Coef::one());
                }
                lhs.add_opt(ev(z, i, mm, e - 1), int(a - e)).add_opt(ev(z, i, mm, e), -int(a - e));
            }
            m.add_constraint(format!("cfw_{}_{e}", i + 1), lhs, Sense::Le, c(a - e));
        }
    }
    for &(i, j) in inst.precedence() {
        for e in 0..a {
            let mut lhs = ex();
            for m2 in 0..inst.mode_count(j) {
                for e2 in 0..=e {
                    lhs.add_opt(ev(z, j, m2, e2), Coef::one());
                }
            }
            for mm in 0..inst.mode_count(i) {
                lhs.add_opt(ev(z, i, mm, e), int(e + 1));
            }
            m.add_constraint(format!("prec_{}_{}_{e}", i + 1, j + 1), lhs, Sense::Le, c(e + 1));
        }
    }
    if with_mc {
        ooe_mode_consistency(&mut m, inst, z);
    }
    ooe_enhancements(&mut m, inst, pre, opts, &vars);
    Ok(m)
}

// ---------------------------------------------------------------------------
// resource flows

/// `b~_imk`: the demand for activities, the full capacity for the dummies.
fn flow_demand(inst: &Instance, node: usize, mode: usize, k: usize) -> i64 {
    let a = inst.activity_count();
    if node == 0 || node == a + 1 {
        inst.renewable_capacity()[k]
    } else {
        inst.mode(node - 1, mode).renewable[k]
    }
}

fn node_modes(inst: &Instance, node: usize) -> usize {
    if node == 0 || node == inst.activity_count() + 1 {
        1
    } else {
        inst.mode_count(node - 1)
    }
}

fn node_duration(inst: &Instance, node: usize, mode: usize) -> i64 {
    if node == 0 || node == inst.activity_count() + 1 {
        0
    } else {
        inst.duration(node - 1, mode)
    }
}

fn mode_label(inst: &Instance, node: usize, mode: usize) -> usize {
    if node == 0 || node == inst.activity_count() + 1 {
        0
    } else {
        mode + 1
    }
}

/// Big-M of the start-time coupling rows: `L_i + p_i^max - E_j`.
pub fn start_time_big_m(inst: &Instance, pre: &Preprocessed, i: usize, j: usize) -> i64 {
    let pmax = (0..node_modes(inst, i)).map(|m| node_duration(inst, i, m)).max().unwrap_or(0);
    pre.windows.latest[i] + pmax - pre.windows.earliest[j]
}

/// Big-M of the flow bounds: `min(b~max_ik, b~max_jk)`.
pub fn flow_big_m(inst: &Instance, i: usize, j: usize, k: usize) -> i64 {
    let bmax = |n: usize| (0..node_modes(inst, n)).map(|m| flow_demand(inst, n, m, k)).max().unwrap_or(0);
    bmax(i).min(bmax(j))
}

/// Resource-flow model, weak (FCT-W) or strong (FCT-S) flow bounds.
pub fn build_fct(kind: ModelKind, inst: &Instance, pre: &Preprocessed, opts: &FormulationOptions) -> Result<MilpModel, FormulationError> {
    let strong = match kind {
        ModelKind::FctW => false,
        ModelKind::FctS => true,
        other => return Err(FormulationError::Unsupported { kind: other, what: "the flow builder" }),
    };
    if strong && opts.incompatible_pairs {
        return Err(FormulationError::Unsupported { kind, what: "incompatible-pair rows" });
    }
    if opts.variable_fixing {
        return Err(FormulationError::Unsupported { kind, what: "event variable fixing" });
    }
    if opts.strong_event_time {
        return Err(FormulationError::Unsupported { kind, what: "strong event-time rows" });
    }
    let au = inst.activity_count();
    let n = au + 2;
    let sink = au + 1;
    let rk = inst.renewable_count();
    let mut name_opts = opts.clone();
    name_opts.mode_consistency = None;
    if !strong {
        name_opts.strong_flow_rows = StrongFlowRows::Triple;
    }
    let mut m = MilpModel::new(model_name(kind, &name_opts));

    let x: Vec<Vec<VarId>> =
        (0..n).map(|i| (0..node_modes(inst, i)).map(|mm| m.binary("x", &[i, mode_label(inst, i, mm)])).collect()).collect();
    let y: Vec<Vec<VarId>> = (0..n).map(|i| (0..n).map(|j| m.binary("y", &[i, j])).collect()).collect();
    let f: Vec<Vec<Vec<VarId>>> = (0..n)
        .map(|i| (0..n).map(|j| (0..rk).map(|k| m.continuous("f", &[i, j, k + 1], Coef::zero(), None)).collect()).collect())
        .collect();
    let s: Vec<VarId> = (0..n).map(|i| m.continuous("s", &[i], Coef::zero(), None)).collect();

    let demand = |i: usize, k: usize| {
        let mut e = ex();
        for mm in 0..node_modes(inst, i) {
            e.add(x[i][mm], int(flow_demand(inst, i, mm, k)));
        }
        e
    };

    m.set_objective(v(s[sink]));
    for i in 0..n {
        let mut lhs = ex();
        for &id in &x[i] {
            lhs.add(id, Coef::one());
        }
        m.add_constraint(format!("onemode_{i}"), lhs, Sense::Eq, c(1));
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let big = int(start_time_big_m(inst, pre, i, j));
            let mut lhs = v(s[i]);
            for mm in 0..node_modes(inst, i) {
                lhs.add(x[i][mm], int(node_duration(inst, i, mm)));
            }
            lhs.add(y[i][j], big);
            let mut rhs = v(s[j]);
            rhs.add_const(big);
            m.add_constraint(format!("start_{i}_{j}"), lhs, Sense::Le, rhs);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut lhs = v(y[i][j]);
            lhs.add(y[j][i], Coef::one());
            m.add_constraint(format!("order_{i}_{j}"), lhs, Sense::Le, c(1));
        }
    }
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for w in (0..n).filter(|&w| w != i && w != j) {
                let mut lhs = v(y[i][j]);
                lhs.add(y[j][w], Coef::one()).add(y[i][w], -Coef::one());
                m.add_constraint(format!("trans_{i}_{j}_{w}"), lhs, Sense::Le, c(1));
            }
        }
    }
    for i in 0..=au {
        for j in (1..n).filter(|&j| j != i) {
            for k in 0..rk {
                let big = int(flow_big_m(inst, i, j, k));
                let mut rhs = ex();
                rhs.add(y[i][j], big);
                m.add_constraint(format!("fbound_{i}_{j}_{}", k + 1), v(f[i][j][k]), Sense::Le, rhs);
                if strong {
                    match opts.strong_flow_rows {
                        StrongFlowRows::Triple => {
                            m.add_constraint(format!("fsrc_{i}_{j}_{}", k + 1), v(f[i][j][k]), Sense::Le, demand(i, k));
                            m.add_constraint(format!("fdst_{i}_{j}_{}", k + 1), v(f[i][j][k]), Sense::Le, demand(j, k));
                        }
                        StrongFlowRows::Auxiliary => {
                            let w = m.continuous("w", &[i, j, k + 1], Coef::zero(), None);
                            let u = m.continuous("u", &[i, j, k + 1], Coef::zero(), None);
                            m.add_constraint(format!("wsrc_{i}_{j}_{}", k + 1), v(w), Sense::Le, demand(i, k));
                            m.add_constraint(format!("wdst_{i}_{j}_{}", k + 1), v(w), Sense::Le, demand(j, k));
                            m.add_constraint(format!("uy_{i}_{j}_{}", k + 1), v(u), Sense::Le, {
                                let mut e = ex();
                                e.add(y[i][j], big);
                                e
                            });
                            m.add_constraint(format!("uw_{i}_{j}_{}", k + 1), v(u), Sense::Le, v(w));
                            m.add_constraint(format!("fu_{i}_{j}_{}", k + 1), v(f[i][j][k]), Sense::Le, v(u));
                        }
                    }
                }
            }
        }
    }
    for k in 0..rk {
        for i in 0..n {
            let mut out = ex();
            let mut inflow = ex();
            for j in 0..n {
                out.add(f[i][j][k], Coef::one());
                inflow.add(f[j][i][k], Coef::one());
            }
            m.add_constraint(format!("fout_{i}_{}", k + 1), out, Sense::Eq, demand(i, k));
            m.add_constraint(format!("fin_{i}_{}", k + 1), inflow, Sense::Eq, demand(i, k));
        }
    }
    for k in 0..rk {
        for j in 0..=au {
            let value = if j == 0 { inst.renewable_capacity()[k] } else { 0 };
            m.fix(f[sink][j][k], int(value));
        }
        for i in 0..n {
            m.fix(f[i][i][k], Coef::zero());
        }
    }
    for i in 0..n {
        for j in 0..n {
            if pre.graph.related(i, j) {
                m.fix(y[i][j], Coef::one());
                m.fix(y[j][i], Coef::zero());
            }
        }
        m.fix(y[i][i], Coef::zero());
    }
    for k in 0..inst.nonrenewable_count() {
        let mut lhs = ex();
        for i in 0..au {
            for (mm, mode) in inst.modes(i).iter().enumerate() {
                lhs.add(x[i + 1][mm], int(mode.nonrenewable[k]));
            }
        }
        m.add_constraint(format!("nres_{}", k + 1), lhs, Sense::Le, c(inst.nonrenewable_capacity()[k]));
    }
    if opts.time_windows {
        for i in 0..n {
            m.set_bounds(s[i], int(pre.windows.earliest[i]), Some(int(pre.windows.latest[i])));
        }
    } else {
        m.add_constraint("first", v(s[0]), Sense::Eq, c(0));
    }
    if opts.incompatible_pairs {
        for p in &pre.pairs {
            let (iu, iv) = (p.u.activity + 1, p.v.activity + 1);
            let mut lhs = v(y[iu][iv]);
            lhs.add(y[iv][iu], Coef::one());
            let mut rhs = v(x[iu][p.u.mode]);
            rhs.add(x[iv][p.v.mode], Coef::one()).add_const(-Coef::one());
            m.add_constraint(format!("rc_{iu}_{}_{iv}_{}", p.u.mode + 1, p.v.mode + 1), lhs, Sense::Ge, rhs);
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// decoding

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("{name} = {value} is not integral")]
    Fractional { name: String, value: f64 },
    #[error("no value for {0}")]
    Missing(String),
    #[error("activity {activity} starts in mode {start_mode} but ends in mode {end_mode}")]
    ModeInconsistent { activity: usize, start_mode: usize, end_mode: usize },
    #[error("activity {activity} is active in several modes {modes:?}")]
    AmbiguousMode { activity: usize, modes: Vec<usize> },
    #[error("activity {activity} has no {what}")]
    Unassigned { activity: usize, what: &'static str },
}

fn value(point: &PointAssignment, name: &str) -> Result<f64, DecodeError> {
    point.get_f64(name).ok_or_else(|| DecodeError::Missing(name.to_string()))
}

fn binary_value(point: &PointAssignment, name: &str, tol: f64) -> Result<Option<bool>, DecodeError> {
    let Some(val) = point.get_f64(name) else { return Ok(None) };
    if val.abs() <= tol {
        Ok(Some(false))
    } else if (val - 1.0).abs() <= tol {
        Ok(Some(true))
    } else {
        Err(DecodeError::Fractional { name: name.to_string(), value: val })
    }
}

/// Turns an integer point of model `kind` back into a schedule.
///
/// The schedule's makespan is the model's makespan variable, so validation
/// also checks that the objective is consistent with the decoded starts.
/// Mode choices that are not unique are reported, never resolved.
pub fn decode(kind: ModelKind, inst: &Instance, point: &PointAssignment, tol: f64) -> Result<Schedule, DecodeError> {
    let a = inst.activity_count();
    let mut start = vec![0.0; a];
    let mut modes = vec![0usize; a];
    let makespan;
    match kind {
        ModelKind::See | ModelKind::SeeA => {
            for i in 0..a {
                let mut begin = None;
                let mut end_mode = None;
                for mm in 0..inst.mode_count(i) {
                    for e in 0..=a {
                        if binary_value(point, &format!("x_{}_{}_{e}", i + 1, mm + 1), tol)? == Some(true) {
                            begin = Some((mm, e));
                        }
                        if binary_value(point, &format!("y_{}_{}_{e}", i + 1, mm + 1), tol)? == Some(true) {
                            end_mode = Some(mm);
                        }
                    }
                }
                let (mm, e) = begin.ok_or(DecodeError::Unassigned { activity: i + 1, what: "start event" })?;
                let end = end_mode.ok_or(DecodeError::Unassigned { activity: i + 1, what: "end event" })?;
                if end != mm {
                    return Err(DecodeError::ModeInconsistent { activity: i + 1, start_mode: mm + 1, end_mode: end + 1 });
                }
                modes[i] = mm;
                start[i] = value(point, &format!("s_{e}"))?;
            }
            makespan = value(point, &format!("s_{a}"))?;
        }
        ModelKind::Rsee => {
            for i in 0..a {
                let mut first: Option<(usize, usize)> = None;
                let mut end_mode = None;
                for mm in 0..inst.mode_count(i) {
                    for e in 0..a {
                        if binary_value(point, &format!("xt_{}_{}_{e}", i + 1, mm + 1), tol)? == Some(true)
                            && first.is_none_or(|(_, fe)| e < fe)
                        {
                            first = Some((mm, e));
                        }
                    }
                    if binary_value(point, &format!("yt_{}_{}_{a}", i + 1, mm + 1), tol)? == Some(true) {
                        end_mode = Some(mm);
                    }
                }
                let (mm, e) = first.ok_or(DecodeError::Unassigned { activity: i + 1, what: "start event" })?;
                let end = end_mode.ok_or(DecodeError::Unassigned { activity: i + 1, what: "end event" })?;
                if end != mm {
                    return Err(DecodeError::ModeInconsistent { activity: i + 1, start_mode: mm + 1, end_mode: end + 1 });
                }
                modes[i] = mm;
                start[i] = value(point, &format!("s_{e}"))?;
            }
            makespan = value(point, &format!("s_{a}"))?;
        }
        ModelKind::Ooe | ModelKind::OoeA => {
            for i in 0..a {
                let mut active: Vec<(usize, usize)> = Vec::new();
                for mm in 0..inst.mode_count(i) {
                    if let Some(e) = (0..a)
                        .map(|e| binary_value(point, &format!("z_{}_{}_{e}", i + 1, mm + 1), tol).map(|b| (e, b)))
                        .collect::<Result<Vec<_>, _>>()?
                        .into_iter()
                        .find(|&(_, b)| b == Some(true))
                        .map(|(e, _)| e)
                    {
                        active.push((mm, e));
                    }
                }
                match active.as_slice() {
                    [] => return Err(DecodeError::Unassigned { activity: i + 1, what: "active event" }),
                    [(mm, e)] => {
                        modes[i] = *mm;
                        start[i] = value(point, &format!("s_{e}"))?;
                    }
                    many => {
                        return Err(DecodeError::AmbiguousMode {
                            activity: i + 1,
                            modes: many.iter().map(|&(mm, _)| mm + 1).collect(),
                        })
                    }
                }
            }
            makespan = value(point, &format!("s_{a}"))?;
        }
        ModelKind::FctW | ModelKind::FctS => {
            for i in 0..a {
                let chosen: Vec<usize> = (0..inst.mode_count(i))
                    .map(|mm| binary_value(point, &format!("x_{}_{}", i + 1, mm + 1), tol).map(|b| (mm, b)))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .filter(|&(_, b)| b == Some(true))
                    .map(|(mm, _)| mm)
                    .collect();
                match chosen.as_slice() {
                    [] => return Err(DecodeError::Unassigned { activity: i + 1, what: "mode" }),
                    [mm] => modes[i] = *mm,
                    many => {
                        return Err(DecodeError::AmbiguousMode {
                            activity: i + 1,
                            modes: many.iter().map(|&mm| mm + 1).collect(),
                        })
                    }
                }
                start[i] = value(point, &format!("s_{}", i + 1))?;
            }
            makespan = value(point, &format!("s_{}", a + 1))?;
        }
    }
    Ok(Schedule::with_makespan(start, modes, makespan))
}

// ---------------------------------------------------------------------------
// certificate points

fn example1_see_point(ones: &[&str], s: [i64; 3], r: [i64; 3]) -> PointAssignment {
    let mut p = PointAssignment::new();
    for i in 1..=2 {
        for mm in 1..=2 {
            for e in 0..2 {
                p.set_int(format!("x_{i}_{mm}_{e}"), 0);
            }
            for e in 1..=2 {
                p.set_int(format!("y_{i}_{mm}_{e}"), 0);
            }
        }
    }
    for name in ones {
        p.set_int(*name, 1);
    }
    for (e, val) in s.iter().enumerate() {
        p.set_int(format!("s_{e}"), *val);
    }
    // r_2_1 is listed for completeness; the model has no resource variable at the last event.
    for (e, val) in r.iter().enumerate() {
        p.set_int(format!("r_{e}_1"), *val);
    }
    p
}

/// Solution A of Example 1: zero makespan, activity 1 starts in mode 2 and ends in mode 1.
pub fn solution_a() -> PointAssignment {
    example1_see_point(&["x_1_2_0", "y_1_1_1", "x_2_2_1", "y_2_1_2"], [0, 0, 0], [1, 1, 0])
}

/// Solution B of Example 1: both activities in mode 1, back to back.
pub fn solution_b() -> PointAssignment {
    example1_see_point(&["x_1_1_0", "y_1_1_1", "x_2_1_1", "y_2_1_2"], [0, 1, 2], [1, 1, 0])
}

/// Zero-makespan SEE point for the Remark instance: both chains repeat the
/// mode switch of Solution A, the second chain on events 2 to 4.
pub fn remark_zero_point() -> PointAssignment {
    let mut p = PointAssignment::new();
    for i in 1..=4 {
        for mm in 1..=2 {
            for e in 0..4 {
                p.set_int(format!("x_{i}_{mm}_{e}"), 0);
            }
            for e in 1..=4 {
                p.set_int(format!("y_{i}_{mm}_{e}"), 0);
            }
        }
    }
    for name in ["x_1_2_0", "y_1_1_1", "x_2_2_1", "y_2_1_2", "x_3_2_2", "y_3_1_3", "x_4_2_3", "y_4_1_4"] {
        p.set_int(name, 1);
    }
    for e in 0..=4 {
        p.set_int(format!("s_{e}"), 0);
    }
    for e in 0..4 {
        p.set_int(format!("r_{e}_1"), 1);
    }
    p
}

/// The fractional OOE point with zero makespan: every `z_ime = 1 / (|M_i| A)`,
/// all event times zero and `r_ik = sum_m w_imk z_ime`.
pub fn zero_makespan_point(inst: &Instance) -> PointAssignment {
    let a = inst.activity_count();
    let mut p = PointAssignment::new();
    for i in 0..a {
        let share = Coef::new(1, (inst.mode_count(i) * a) as i64);
        for mm in 0..inst.mode_count(i) {
            for e in 0..a {
                p.set_ratio(format!("z_{}_{}_{e}", i + 1, mm + 1), share);
            }
        }
        for k in 0..inst.nonrenewable_count() {
            let total: Coef = inst.modes(i).iter().map(|mode| int(mode.nonrenewable[k]) * share).sum();
            p.set_ratio(format!("r_{}_{}", i + 1, k + 1), total);
        }
    }
    for e in 0..=a {
        p.set_int(format!("s_{e}"), 0);
    }
    p
}

/// Named certificate points for Example 1 (SEE) and the zero-makespan OOE point for `inst`.
pub fn certificate_points(inst: &Instance) -> Vec<(&'static str, PointAssignment)> {
    vec![("solution-a", solution_a()), ("solution-b", solution_b()), ("zero-makespan", zero_makespan_point(inst))]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{eval_point, relax, stats};
    use crate::model::validate_schedule;

    fn pre(inst: &Instance) -> Preprocessed {
        Preprocessed::new(inst)
    }

    #[test]
    fn see_counterexample_points() {
        let ex = Instance::example1();
        let p = pre(&ex);
        let no_mc = build_see(&ex, &p, &FormulationOptions::default().with_mc(ModeConsistency::None)).unwrap();
        let rep = eval_point(&no_mc, &solution_a(), 0.0).unwrap();
        assert!(rep.is_feasible(), "{:?}", rep.violations);
        assert_eq!(rep.objective_f64(), 0.0);

        let mc = build_see(&ex, &p, &FormulationOptions::default()).unwrap();
        let rep = eval_point(&mc, &solution_a(), 0.0).unwrap();
        assert!(rep.violated("mc_1_2_0"));
        let rep = eval_point(&mc, &solution_b(), 0.0).unwrap();
        assert!(rep.is_feasible(), "{:?}", rep.violations);
        assert_eq!(rep.objective_f64(), 2.0);
    }

    #[test]
    fn see_variable_count() {
        let ex = Instance::example1();
        let m = build_see(&ex, &pre(&ex), &FormulationOptions::default()).unwrap();
        assert_eq!(stats(&m).variables, 21);
        assert_eq!(stats(&m).binaries, 16);
    }

    #[test]
    fn fct_variable_counts() {
        let ex = Instance::example1();
        let m = build_fct(ModelKind::FctW, &ex, &pre(&ex), &FormulationOptions::default()).unwrap();
        let count = |fam: &str| m.variables().iter().filter(|v| v.symbol.family == fam).count();
        assert_eq!(count("y"), 16);
        assert_eq!(count("x"), 6);
        assert_eq!(count("f"), 16);
        assert_eq!(count("s"), 4);
        let f_sink_src = m.lookup("f", &[3, 0, 1]).unwrap();
        assert!(m.variable(f_sink_src).is_fixed());
        assert_eq!(m.variable(f_sink_src).lower, int(1));
        let f_sink_act = m.lookup("f", &[3, 1, 1]).unwrap();
        assert_eq!(m.variable(f_sink_act).upper, Some(int(0)));
    }

    #[test]
    fn decode_solution_points() {
        let ex = Instance::example1();
        let sched = decode(ModelKind::See, &ex, &solution_b(), 1e-9).unwrap();
        assert_eq!(sched.start, vec![0.0, 1.0]);
        assert_eq!(sched.mode, vec![0, 0]);
        assert_eq!(sched.makespan, 2.0);
        assert!(validate_schedule(&ex, &sched, 0.0).unwrap().is_feasible());

        assert_eq!(
            decode(ModelKind::See, &ex, &solution_a(), 1e-9),
            Err(DecodeError::ModeInconsistent { activity: 1, start_mode: 2, end_mode: 1 })
        );
    }

    #[test]
    fn remark_counterexample_point() {
        let rem = Instance::remark();
        let p = pre(&rem);
        let no_mc = build_see(&rem, &p, &FormulationOptions::default().with_mc(ModeConsistency::None)).unwrap();
        let rep = eval_point(&no_mc, &remark_zero_point(), 0.0).unwrap();
        assert!(rep.is_feasible(), "{:?}", rep.violations);
        assert_eq!(rep.objective_f64(), 0.0);
        let mc = build_see(&rem, &p, &FormulationOptions::default()).unwrap();
        assert!(eval_point(&mc, &remark_zero_point(), 0.0).unwrap().violated("mc_1_2_0"));
    }

    #[test]
    fn decode_fct_point() {
        let ex = Instance::example1();
        let m = build_fct(ModelKind::FctW, &ex, &pre(&ex), &FormulationOptions::default()).unwrap();
        let mut p = PointAssignment::new();
        p.set_int("x_1_1", 1);
        p.set_int("x_2_1", 1);
        p.set_int("y_1_2", 1);
        for (i, s) in [0, 0, 1, 2].iter().enumerate() {
            p.set_int(format!("s_{i}"), *s);
        }
        p.fill_zeros(&m);
        let sched = decode(ModelKind::FctW, &ex, &p, 1e-9).unwrap();
        assert_eq!(sched.makespan, 2.0);
        assert!(validate_schedule(&ex, &sched, 0.0).unwrap().is_feasible());
    }

    #[test]
    fn zero_makespan_point_in_ooe_relaxation() {
        let ex = Instance::example1();
        let point = zero_makespan_point(&ex);
        assert_eq!(point.get_f64("z_1_1_0"), Some(0.25));
        for mc in [ModeConsistency::None, ModeConsistency::Full] {
            let m = build_ooe(&ex, &pre(&ex), &FormulationOptions::default().with_mc(mc)).unwrap();
            let rep = eval_point(&relax(&m), &point, 1e-9).unwrap();
            assert!(rep.is_feasible(), "{mc:?}: {:?}", rep.violations);
            assert_eq!(rep.objective_f64(), 0.0);
            assert!(!eval_point(&m, &point, 1e-9).unwrap().is_feasible());
        }
    }

    #[test]
    fn strong_event_rows_alone_underconstrain_example1() {
        // Makespan 1 with activity 2 starting at event 1: satisfies every
        // dominating event-time row but violates the standard ones.
        let ex = Instance::example1();
        let opts = FormulationOptions { strong_event_time: true, ..Default::default() };
        let m = build_ooe(&ex, &pre(&ex), &opts).unwrap();
        let mut p = PointAssignment::new();
        p.set_int("z_1_1_0", 1);
        p.set_int("z_2_1_1", 1);
        p.set_int("s_0", 0);
        p.set_int("s_1", 1);
        p.set_int("s_2", 1);
        p.fill_zeros(&m);
        let rep = eval_point(&m, &p, 0.0).unwrap();
        assert!(!rep.is_feasible());
        assert!(rep.violations.iter().all(|v| v.name.starts_with("evt_")), "{:?}", rep.violations);
        assert!(rep.violated("evt_2_1_1_2"));
    }

    #[test]
    fn ooe_a_contiguity_is_weaker_without_mc() {
        // activity 1 active in mode 1 at event 0 and mode 2 at event 1
        let act = || crate::model::Activity {
            modes: vec![crate::model::Mode::new(1, vec![1], vec![]), crate::model::Mode::new(2, vec![1], vec![])],
        };
        let inst = Instance::new(vec![act(), act()], vec![2], vec![], vec![]).unwrap();
        let pr = pre(&inst);
        let loose = build_ooe_aggregate(&inst, &pr, &FormulationOptions::default(), false).unwrap();
        let tight = build_ooe_a(&inst, &pr, &FormulationOptions::default()).unwrap();
        let mut p = PointAssignment::new();
        p.set_int("z_1_1_0", 1);
        p.set_int("z_1_2_1", 1);
        p.set_int("z_2_1_0", 1);
        for (e, t) in [0, 1, 3].iter().enumerate() {
            p.set_int(format!("s_{e}"), *t);
        }
        p.fill_zeros(&tight);
        let rep = eval_point(&loose, &p, 0.0).unwrap();
        assert!(rep.is_feasible(), "{:?}", rep.violations);
        let rep = eval_point(&tight, &p, 0.0).unwrap();
        assert!(!rep.is_feasible());
        assert!(rep.violations.iter().all(|v| v.name.starts_with("mc_")), "{:?}", rep.violations);
    }

    #[test]
    fn option_refusals() {
        let ex = Instance::example1();
        let p = pre(&ex);
        assert!(matches!(
            build(ModelKind::FctS, &ex, &p, &FormulationOptions::default().with_rc()),
            Err(FormulationError::Unsupported { .. })
        ));
        assert!(build(ModelKind::Rsee, &ex, &p, &FormulationOptions::default().with_tw()).is_err());
        assert!(build(ModelKind::Rsee, &ex, &p, &FormulationOptions::default().with_vf()).is_err());
        let forced = FormulationOptions { variable_fixing: true, experimental: true, ..Default::default() };
        assert!(build(ModelKind::Rsee, &ex, &p, &forced).is_ok());
        assert!(build(ModelKind::FctW, &ex, &p, &FormulationOptions::default().with_rc()).is_ok());
    }

    #[test]
    fn rsee_monotonicity_rows() {
        let ex = Instance::example1();
        let m = build_rsee(&ex, &pre(&ex), &FormulationOptions::default()).unwrap();
        let monox = m.constraints().iter().filter(|c| c.name.starts_with("monox_")).count();
        assert_eq!(monox, 2 * 2 * 1);
    }

    #[test]
    fn ooe_a_is_smaller_than_ooe_with_mc() {
        let rem = Instance::remark();
        let p = pre(&rem);
        let ooe = build_ooe(&rem, &p, &FormulationOptions::default().with_mc(ModeConsistency::Full)).unwrap();
        let ooea = build_ooe_a(&rem, &p, &FormulationOptions::default()).unwrap();
        assert!(stats(&ooea).constraints < stats(&ooe).constraints);
    }

    #[test]
    fn single_activity_models_build() {
        let inst = Instance::new(
            vec![crate::model::Activity { modes: vec![crate::model::Mode::new(3, vec![1], vec![])] }],
            vec![1],
            vec![],
            vec![],
        )
        .unwrap();
        let p = pre(&inst);
        for kind in ModelKind::ALL {
            let m = build(kind, &inst, &p, &FormulationOptions::default()).unwrap();
            m.check().unwrap();
        }
        let ooe = build_ooe(&inst, &p, &FormulationOptions::default().with_tw()).unwrap();
        assert!(ooe.constraint("active_1").is_some());
        assert!(ooe.constraint("tw_ms_lo").is_some());
    }
}
