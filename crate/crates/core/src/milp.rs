//! Solver-agnostic sparse MILP representation.
//!
//! Coefficients, right-hand sides and bounds are exact rationals. Point
//! values are arbitrary-precision rationals so that floating point solver
//! output converts without loss. Variables carry a [`Symbol`] that names them
//! by meaning (`x[1,2,0]`, `s[3]`, ...), which is what decoders and tests use.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Coef = Rational64;

pub fn int(v: i64) -> Coef {
    Coef::from_integer(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Continuous,
}

/// Meaningful name of a variable: a family (`x`, `y`, `s`, `r`, `z`, `f`, ...) and indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub family: &'static str,
    pub index: Vec<usize>,
}

impl Symbol {
    pub fn new(family: &'static str, index: &[usize]) -> Self {
        Symbol { family, index: index.to_vec() }
    }

    /// `family_i_j_k`, the name used in exported files and point assignments.
    pub fn name(&self) -> String {
        let mut s = self.family.to_string();
        for i in &self.index {
            let _ = write!(s, "_{i}");
        }
        s
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub symbol: Symbol,
    pub kind: VarKind,
    pub lower: Coef,
    /// `None` is +infinity.
    pub upper: Option<Coef>,
}

impl Variable {
    pub fn is_fixed(&self) -> bool {
        self.upper == Some(self.lower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

/// `sum(terms) sense rhs`. Terms are sorted by variable and have nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, Coef)>,
    pub sense: Sense,
    pub rhs: Coef,
}

/// Affine expression used while building constraints.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    terms: Vec<(VarId, Coef)>,
    constant: Coef,
}

impl LinExpr {
    pub fn new() -> Self {
        LinExpr::default()
    }

    pub fn constant(c: Coef) -> Self {
        LinExpr { terms: Vec::new(), constant: c }
    }

    pub fn var(v: VarId) -> Self {
        LinExpr { terms: vec![(v, Coef::one())], constant: Coef::zero() }
    }

    pub fn add(&mut self, v: VarId, c: Coef) -> &mut Self {
        self.terms.push((v, c));
        self
    }

    /// Adds `c * v` when the variable exists; missing variables stand for
    /// constants fixed at zero.
    pub fn add_opt(&mut self, v: Option<VarId>, c: Coef) -> &mut Self {
        if let Some(v) = v {
            self.terms.push((v, c));
        }
        self
    }

    pub fn add_const(&mut self, c: Coef) -> &mut Self {
        self.constant += c;
        self
    }

    pub fn add_expr(&mut self, other: &LinExpr, factor: Coef) -> &mut Self {
        self.terms.extend(other.terms.iter().map(|&(v, c)| (v, c * factor)));
        self.constant += other.constant * factor;
        self
    }

    fn normalized(mut self) -> (Vec<(VarId, Coef)>, Coef) {
        self.terms.sort_by_key(|t| t.0);
        let mut merged: Vec<(VarId, Coef)> = Vec::with_capacity(self.terms.len());
        for (v, c) in self.terms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|t| !t.1.is_zero());
        (merged, self.constant)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MilpError {
    #[error("variable {0} declared twice")]
    DuplicateVariable(String),
    #[error("constraint {0} declared twice")]
    DuplicateConstraint(String),
    #[error("variable {name} has lower bound above upper bound")]
    EmptyDomain { name: String },
    #[error("constraint {constraint} references undeclared variable #{index}")]
    UnknownVariable { constraint: String, index: usize },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MilpModel {
    pub name: String,
    variables: Vec<Variable>,
    constraints: Vec<Constraint>,
    objective: Vec<(VarId, Coef)>,
    by_symbol: HashMap<Symbol, VarId>,
    row_names: HashSet<String>,
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        MilpModel { name: name.into(), ..Default::default() }
    }

    pub fn add_var(&mut self, symbol: Symbol, kind: VarKind, lower: Coef, upper: Option<Coef>) -> VarId {
        let name = symbol.name();
        assert!(!self.by_symbol.contains_key(&symbol), "variable {name} declared twice");
        let id = VarId(self.variables.len());
        let upper = match kind {
            VarKind::Binary => Some(upper.map_or(Coef::one(), |u| u.min(Coef::one()))),
            VarKind::Continuous => upper,
        };
        self.by_symbol.insert(symbol.clone(), id);
        self.variables.push(Variable { name, symbol, kind, lower, upper });
        id
    }

    pub fn binary(&mut self, family: &'static str, index: &[usize]) -> VarId {
        self.add_var(Symbol::new(family, index), VarKind::Binary, Coef::zero(), Some(Coef::one()))
    }

    pub fn continuous(&mut self, family: &'static str, index: &[usize], lower: Coef, upper: Option<Coef>) -> VarId {
        self.add_var(Symbol::new(family, index), VarKind::Continuous, lower, upper)
    }

    /// Fixes a variable to `value` by collapsing its bounds.
    pub fn fix(&mut self, var: VarId, value: Coef) {
        let v = &mut self.variables[var.0];
        v.lower = value;
        v.upper = Some(value);
    }

    pub fn set_bounds(&mut self, var: VarId, lower: Coef, upper: Option<Coef>) {
        let v = &mut self.variables[var.0];
        v.lower = lower;
        v.upper = upper;
    }

    /// Adds `lhs sense rhs`; both sides may contain variables.
    pub fn add_constraint(&mut self, name: impl Into<String>, lhs: LinExpr, sense: Sense, rhs: LinExpr) {
        let name = name.into();
        assert!(self.row_names.insert(name.clone()), "constraint {name} declared twice");
        let mut expr = lhs;
        expr.add_expr(&rhs, -Coef::one());
        let (terms, constant) = expr.normalized();
        self.constraints.push(Constraint { name, terms, sense, rhs: -constant });
    }

    pub fn set_objective(&mut self, expr: LinExpr) {
        let (terms, _) = expr.normalized();
        self.objective = terms;
    }

    pub fn var(&self, symbol: &Symbol) -> Option<VarId> {
        self.by_symbol.get(symbol).copied()
    }

    /// Shorthand for `var(&Symbol::new(family, index))`.
    pub fn lookup(&self, family: &'static str, index: &[usize]) -> Option<VarId> {
        self.by_symbol.get(&Symbol { family, index: index.to_vec() }).copied()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, id: VarId) -> &Variable {
        &self.variables[id.0]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn objective(&self) -> &[(VarId, Coef)] {
        &self.objective
    }

    /// Checks the structural invariants.
    pub fn check(&self) -> Result<(), MilpError> {
        let mut names = HashSet::new();
        for v in &self.variables {
            if !names.insert(v.name.as_str()) {
                return Err(MilpError::DuplicateVariable(v.name.clone()));
            }
            if v.upper.is_some_and(|u| u < v.lower) {
                return Err(MilpError::EmptyDomain { name: v.name.clone() });
            }
        }
        let mut rows = HashSet::new();
        for c in &self.constraints {
            if !rows.insert(c.name.as_str()) {
                return Err(MilpError::DuplicateConstraint(c.name.clone()));
            }
            if let Some(&(v, _)) = c.terms.iter().find(|(v, _)| v.0 >= self.variables.len()) {
                return Err(MilpError::UnknownVariable { constraint: c.name.clone(), index: v.0 });
            }
        }
        Ok(())
    }
}

/// LP relaxation: binaries become continuous on `[lb, ub] ∩ [0, 1]`.
pub fn relax(model: &MilpModel) -> MilpModel {
    let mut out = model.clone();
    for v in &mut out.variables {
        if v.kind == VarKind::Binary {
            v.kind = VarKind::Continuous;
            v.lower = v.lower.max(Coef::zero());
            v.upper = Some(v.upper.map_or(Coef::one(), |u| u.min(Coef::one())));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub constraints: usize,
    pub nonzeros: usize,
}

pub fn stats(model: &MilpModel) -> ModelStats {
    ModelStats {
        variables: model.variables.len(),
        binaries: model.variables.iter().filter(|v| v.kind == VarKind::Binary).count(),
        constraints: model.constraints.len(),
        nonzeros: model.constraints.iter().map(|c| c.terms.len()).sum(),
    }
}

/// Variable values keyed by variable name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointAssignment {
    values: BTreeMap<String, BigRational>,
}

impl PointAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: BigRational) {
        self.values.insert(name.into(), value);
    }

    pub fn set_int(&mut self, name: impl Into<String>, value: i64) {
        self.set(name, BigRational::from_integer(BigInt::from(value)));
    }

    pub fn set_ratio(&mut self, name: impl Into<String>, value: Coef) {
        self.set(name, to_big(value));
    }

    /// Exact conversion of a finite float.
    pub fn set_f64(&mut self, name: impl Into<String>, value: f64) {
        let v = BigRational::from_float(value).unwrap_or_else(BigRational::zero);
        self.set(name, v);
    }

    pub fn get(&self, name: &str) -> Option<&BigRational> {
        self.values.get(name)
    }

    pub fn get_f64(&self, name: &str) -> Option<f64> {
        self.values.get(name).and_then(|v| v.to_f64())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BigRational)> {
        self.values.iter()
    }

    /// Assigns zero to every model variable the point does not mention.
    pub fn fill_zeros(&mut self, model: &MilpModel) {
        for v in model.variables() {
            self.values.entry(v.name.clone()).or_insert_with(BigRational::zero);
        }
    }
}

pub fn to_big(c: Coef) -> BigRational {
    BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()))
}

/// Reduced `i128` fraction for the common case; every operation reports overflow.
#[derive(Debug, Clone, Copy)]
struct Small {
    num: i128,
    den: i128,
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Small {
    const ZERO: Small = Small { num: 0, den: 1 };

    fn from_big(v: &BigRational) -> Option<Small> {
        Some(Small { num: v.numer().to_i128()?, den: v.denom().to_i128()? })
    }

    /// `self + c * v`
    fn mul_add(self, c: Coef, v: Small) -> Option<Small> {
        let (cn, cd) = (*c.numer() as i128, *c.denom() as i128);
        let g1 = gcd_i128(cn, v.den).max(1);
        let g2 = gcd_i128(v.num, cd).max(1);
        let pn = (cn / g1).checked_mul(v.num / g2)?;
        let pd = (cd / g2).checked_mul(v.den / g1)?;
        let g = gcd_i128(self.den, pd);
        let den = (self.den / g).checked_mul(pd)?;
        let num = self.num.checked_mul(pd / g)?.checked_add(pn.checked_mul(self.den / g)?)?;
        let r = gcd_i128(num, den).max(1);
        Some(Small { num: num / r, den: den / r })
    }

    fn to_big(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

fn weighted_sum(terms: &[(VarId, Coef)], values: &[&BigRational], small: &[Option<Small>]) -> BigRational {
    let fast = terms.iter().try_fold(Small::ZERO, |acc, &(v, coef)| acc.mul_add(coef, small[v.0]?));
    match fast {
        Some(s) => s.to_big(),
        None => {
            let mut total = BigRational::zero();
            for &(v, coef) in terms {
                total += to_big(coef) * values[v.0];
            }
            total
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    LowerBound,
    UpperBound,
    Integrality,
    Row,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointViolation {
    pub kind: ViolationKind,
    /// Variable or constraint name.
    pub name: String,
    /// Amount by which the bound or row is violated (positive).
    pub amount: BigRational,
}

impl PointViolation {
    pub fn amount_f64(&self) -> f64 {
        self.amount.to_f64().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub objective: BigRational,
    pub violations: Vec<PointViolation>,
}

impl EvalReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn objective_f64(&self) -> f64 {
        self.objective.to_f64().unwrap_or(f64::NAN)
    }

    pub fn violated(&self, name: &str) -> bool {
        self.violations.iter().any(|v| v.name == name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("point assigns no value to {0}")]
    Missing(String),
}

/// Evaluates every bound, integrality requirement and row at `point`.
///
/// Anything violated by more than `tol` is reported. Names in the point that
/// the model does not declare are ignored.
pub fn eval_point(model: &MilpModel, point: &PointAssignment, tol: f64) -> Result<EvalReport, EvalError> {
    let tol = BigRational::from_float(tol.abs()).unwrap_or_else(BigRational::zero);
    let values: Vec<&BigRational> = model
        .variables
        .iter()
        .map(|v| point.get(&v.name).ok_or_else(|| EvalError::Missing(v.name.clone())))
        .collect::<Result<_, _>>()?;

    let mut violations = Vec::new();
    for (v, value) in model.variables.iter().zip(&values) {
        let lower = to_big(v.lower);
        if **value < lower && &lower - *value > tol {
            violations.push(PointViolation { kind: ViolationKind::LowerBound, name: v.name.clone(), amount: lower - *value });
        }
        if let Some(u) = v.upper {
            let upper = to_big(u);
            if **value > upper && *value - &upper > tol {
                violations.push(PointViolation {
                    kind: ViolationKind::UpperBound,
                    name: v.name.clone(),
                    amount: *value - upper,
                });
            }
        }
        if v.kind == VarKind::Binary {
            let nearest = value.round();
            let gap = (*value - &nearest).abs();
            if gap > tol {
                violations.push(PointViolation { kind: ViolationKind::Integrality, name: v.name.clone(), amount: gap });
            }
        }
    }

    let small: Vec<Option<Small>> = values.iter().map(|v| Small::from_big(v)).collect();
    for c in &model.constraints {
        let fast = c
            .terms
            .iter()
            .try_fold(Small { num: -*c.rhs.numer() as i128, den: *c.rhs.denom() as i128 }, |acc, &(v, coef)| {
                acc.mul_add(coef, small[v.0]?)
            });
        if let Some(d) = fast {
            let satisfied = match c.sense {
                Sense::Le => d.num <= 0,
                Sense::Ge => d.num >= 0,
                Sense::Eq => d.num == 0,
            };
            if satisfied {
                continue;
            }
        }
        let lhs = weighted_sum(&c.terms, &values, &small);
        let rhs = to_big(c.rhs);
        let excess = match c.sense {
            Sense::Le => &lhs - &rhs,
            Sense::Ge => &rhs - &lhs,
            Sense::Eq => (&lhs - &rhs).abs(),
        };
        if excess > tol {
            violations.push(PointViolation { kind: ViolationKind::Row, name: c.name.clone(), amount: excess });
        }
    }

    let objective = weighted_sum(&model.objective, &values, &small);
    Ok(EvalReport { objective, violations })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WriteError {
    #[error("names {0:?} and {1:?} collide after sanitization as {2:?}")]
    NameCollision(String, String, String),
}

/// MPS layout. Fixed format limits names to 8 characters; longer names are
/// shortened to a prefix plus a hash.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpsFlavor {
    Free,
    Fixed,
}

fn render(c: Coef) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        let v = *c.numer() as f64 / *c.denom() as f64;
        format!("{v}")
    }
}

fn render_fixed(c: Coef) -> String {
    let s = render(c);
    if s.len() <= 12 {
        return s;
    }
    let v = *c.numer() as f64 / *c.denom() as f64;
    (1..=8).rev().map(|p| format!("{v:.p$e}")).find(|t| t.len() <= 12).unwrap_or_else(|| format!("{v:.0e}"))
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn sanitize(name: &str, max_len: Option<usize>) -> String {
    let clean: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' }).collect();
    match max_len {
        Some(n) if clean.len() > n => {
            let hash = format!("{:x}", fnv1a(&clean));
            let keep = n.saturating_sub(6).max(1);
            format!("{}{}", &clean[..keep], &hash[..n - keep])
        }
        _ => clean,
    }
}

fn sanitized_names<'a>(
    names: impl Iterator<Item = &'a str>,
    max_len: Option<usize>,
    reserved: &'a str,
) -> Result<Vec<String>, WriteError> {
    let mut seen: HashMap<String, &'a str> = HashMap::new();
    seen.insert(reserved.to_string(), reserved);
    let mut out = Vec::new();
    for name in names {
        let s = sanitize(name, max_len);
        if let Some(prev) = seen.insert(s.clone(), name) {
            return Err(WriteError::NameCollision(prev.to_string(), name.to_string(), s));
        }
        out.push(s);
    }
    Ok(out)
}

/// Column names as they appear in files written with `flavor`, in declaration order.
pub fn column_names(model: &MilpModel, flavor: MpsFlavor) -> Result<Vec<String>, WriteError> {
    let limit = match flavor {
        MpsFlavor::Free => None,
        MpsFlavor::Fixed => Some(8),
    };
    sanitized_names(model.variables.iter().map(|v| v.name.as_str()), limit, "")
}

/// Writes MPS with sections NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA.
///
/// Columns appear in declaration order and rows in insertion order; binaries
/// are declared with `BV` bounds, fixed values with `FX` after them.
pub fn write_mps(model: &MilpModel, flavor: MpsFlavor) -> Result<String, WriteError> {
    let limit = match flavor {
        MpsFlavor::Free => None,
        MpsFlavor::Fixed => Some(8),
    };
    let cols = sanitized_names(model.variables.iter().map(|v| v.name.as_str()), limit, "")?;
    let rows = sanitized_names(model.constraints.iter().map(|c| c.name.as_str()), limit, "obj")?;

    let line = |out: &mut String, f1: &str, f2: &str, f3: &str, f4: &str| match flavor {
        MpsFlavor::Free => {
            let mut l = format!(" {f1} {f2}");
            for f in [f3, f4] {
                if !f.is_empty() {
                    l.push(' ');
                    l.push_str(f);
                }
            }
            let _ = writeln!(out, "{}", l.replace("  ", " "));
        }
        MpsFlavor::Fixed => {
            let l = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4:>12}");
            let _ = writeln!(out, "{}", l.trim_end());
        }
    };
    let num = |c: Coef| match flavor {
        MpsFlavor::Free => render(c),
        MpsFlavor::Fixed => render_fixed(c),
    };

    let mut out = String::new();
    let _ = writeln!(out, "NAME          {}", sanitize(&model.name, limit));
    out.push_str("ROWS\n");
    line(&mut out, "N", "obj", "", "");
    for (c, name) in model.constraints.iter().zip(&rows) {
        let s = match c.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        line(&mut out, s, name, "", "");
    }

    let mut by_col: Vec<Vec<(usize, Coef)>> = vec![Vec::new(); model.variables.len()];
    for (r, c) in model.constraints.iter().enumerate() {
        for &(v, coef) in &c.terms {
            by_col[v.0].push((r, coef));
        }
    }
    let mut obj = vec![None; model.variables.len()];
    for &(v, c) in &model.objective {
        obj[v.0] = Some(c);
    }
    out.push_str("COLUMNS\n");
    for (j, name) in cols.iter().enumerate() {
        let mut any = false;
        if let Some(c) = obj[j] {
            line(&mut out, "", name, "obj", &num(c));
            any = true;
        }
        for &(r, coef) in &by_col[j] {
            line(&mut out, "", name, &rows[r], &num(coef));
            any = true;
        }
        if !any {
            line(&mut out, "", name, "obj", "0");
        }
    }

    out.push_str("RHS\n");
    for (c, name) in model.constraints.iter().zip(&rows) {
        if !c.rhs.is_zero() {
            line(&mut out, "", "RHS", name, &num(c.rhs));
        }
    }

    out.push_str("BOUNDS\n");
    for (v, name) in model.variables.iter().zip(&cols) {
        let bound = |out: &mut String, kind: &str, value: Option<Coef>| match flavor {
            MpsFlavor::Free => {
                let tail = value.map(|x| format!(" {}", num(x))).unwrap_or_default();
                let _ = writeln!(out, " {kind} BND {name}{tail}");
            }
            MpsFlavor::Fixed => {
                let val = value.map(num).unwrap_or_default();
                let l = format!(" {kind:<2} {:<8}  {name:<8}  {val:>12}", "BND");
                let _ = writeln!(out, "{}", l.trim_end());
            }
        };
        if v.kind == VarKind::Binary {
            bound(&mut out, "BV", None);
            if v.is_fixed() {
                bound(&mut out, "FX", Some(v.lower));
            } else if !v.lower.is_zero() {
                bound(&mut out, "LO", Some(v.lower));
            }
            continue;
        }
        if v.is_fixed() {
            bound(&mut out, "FX", Some(v.lower));
            continue;
        }
        if !v.lower.is_zero() {
            bound(&mut out, "LO", Some(v.lower));
        }
        if let Some(u) = v.upper {
            bound(&mut out, "UP", Some(u));
        }
    }
    out.push_str("ENDATA\n");
    Ok(out)
}

fn lp_terms(out: &mut String, terms: &[(VarId, Coef)], cols: &[String]) {
    if terms.is_empty() {
        // LP needs at least one term per row
        let _ = write!(out, " 0 {}", cols.first().map_or("dummy", String::as_str));
    }
    for &(v, c) in terms {
        let sign = if c.is_negative() { '-' } else { '+' };
        let _ = write!(out, " {sign} {} {}", render(c.abs()), cols[v.0]);
    }
}

/// Writes CPLEX LP format.
pub fn write_lp(model: &MilpModel) -> Result<String, WriteError> {
    let cols = sanitized_names(model.variables.iter().map(|v| v.name.as_str()), Some(255), "")?;
    let rows = sanitized_names(model.constraints.iter().map(|c| c.name.as_str()), Some(255), "obj")?;
    let mut out = String::new();
    let _ = writeln!(out, "\\ model {}", model.name);
    out.push_str("Minimize\n obj:");
    lp_terms(&mut out, &model.objective, &cols);
    out.push_str("\nSubject To\n");
    for (c, name) in model.constraints.iter().zip(&rows) {
        let _ = write!(out, " {name}:");
        lp_terms(&mut out, &c.terms, &cols);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), render(c.rhs));
    }
    out.push_str("Bounds\n");
    for (v, name) in model.variables.iter().zip(&cols) {
        if v.is_fixed() {
            let _ = writeln!(out, " {name} = {}", render(v.lower));
        } else if v.kind == VarKind::Binary && v.lower.is_zero() && v.upper == Some(Coef::one()) {
            continue;
        } else {
            match v.upper {
                Some(u) => {
                    let _ = writeln!(out, " {} <= {name} <= {}", render(v.lower), render(u));
                }
                None if !v.lower.is_zero() => {
                    let _ = writeln!(out, " {name} >= {}", render(v.lower));
                }
                None => {}
            }
        }
    }
    let binaries: Vec<&String> =
        model.variables.iter().zip(&cols).filter(|(v, _)| v.kind == VarKind::Binary).map(|(_, n)| n).collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for n in binaries {
            let _ = writeln!(out, " {n}");
        }
    }
    out.push_str("End\n");
    Ok(out)
}
