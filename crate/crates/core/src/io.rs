//! Instance file formats and derived instance variants.
//!
//! Two input layouts are understood: PSPLIB multi-mode `.mm` files and the
//! MMLIB variant of the same layout (no project information block, tab
//! separated, `RESOURCE AVAILABILITIES` with a space). Both carry a dummy
//! first and last job which are stripped on parsing.
//!
//! The canonical format written by [`write_canonical`] is line oriented:
//!
//! ```text
//! MMCT 1
//! activities <A>
//! renewable <B_1> ... <B_R>
//! nonrenewable <W_1> ... <W_N>
//! mode <i> <p> <b_1> ... <b_R> <w_1> ... <w_N>
//! prec <i> <j>
//! ```
//!
//! Activities are 1-based; `mode` lines appear in mode order per activity.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::model::{Activity, Instance, Mode, ModelError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section {0}")]
    MissingSection(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    PsplibMm,
    Mmlib,
    Canonical,
}

impl SourceFormat {
    pub fn tag(self) -> &'static str {
        match self {
            SourceFormat::PsplibMm => "psplib-mm",
            SourceFormat::Mmlib => "mmlib",
            SourceFormat::Canonical => "canonical",
        }
    }
}

/// Where an instance came from, plus header metadata that is kept but not used.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSource {
    pub format: SourceFormat,
    pub origin: String,
    pub horizon: Option<i64>,
    /// Job count in the file, dummies included.
    pub file_jobs: Option<usize>,
    /// File job numbers of the stripped dummy source and sink.
    pub dummy_jobs: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub source: InstanceSource,
}

/// Parses a PSPLIB multi-mode file.
pub fn parse_psplib_mm(text: &str) -> Result<Instance, ParseError> {
    parse_job_file(text, SourceFormat::PsplibMm, "<text>").map(|p| p.instance)
}

/// Parses an MMLIB file.
pub fn parse_mmlib(text: &str) -> Result<Instance, ParseError> {
    parse_job_file(text, SourceFormat::Mmlib, "<text>").map(|p| p.instance)
}

/// Reads any supported file, picking the parser from its content.
pub fn load_instance(path: impl AsRef<Path>) -> Result<ParsedInstance, ParseError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ParseError::Io { path: path.display().to_string(), source })?;
    parse_any(&text, &path.display().to_string())
}

pub fn parse_any(text: &str, origin: &str) -> Result<ParsedInstance, ParseError> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    if first.is_some_and(|l| l.starts_with("MMCT")) {
        let instance = parse_canonical(text)?;
        return Ok(ParsedInstance {
            instance,
            source: InstanceSource {
                format: SourceFormat::Canonical,
                origin: origin.to_string(),
                horizon: None,
                file_jobs: None,
                dummy_jobs: None,
            },
        });
    }
    let psplib = text.lines().any(|l| l.trim_start().to_ascii_lowercase().starts_with("horizon"));
    let format = if psplib { SourceFormat::PsplibMm } else { SourceFormat::Mmlib };
    parse_job_file(text, format, origin)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Precedence,
    Requests,
    Availability,
    Other,
}

fn numbers(line: &str, lineno: usize) -> Result<Vec<i64>, ParseError> {
    line.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| syntax(lineno, format!("expected an integer, found {t:?}"))))
        .collect()
}

fn header_value(line: &str) -> Option<&str> {
    line.split_once(':').map(|(_, v)| v.trim())
}

fn leading_int(s: &str) -> Option<i64> {
    s.split_whitespace().next()?.parse().ok()
}

fn parse_job_file(text: &str, format: SourceFormat, origin: &str) -> Result<ParsedInstance, ParseError> {
    let mut section = Section::Header;
    let mut file_jobs: Option<usize> = None;
    let mut horizon = None;
    let mut declared = [None::<usize>; 3]; // R, N, D

    struct JobRow {
        modes: usize,
        successors: Vec<usize>,
    }
    let mut prec_rows: Vec<(usize, JobRow)> = Vec::new();
    let mut request_lines: Vec<(usize, Vec<i64>)> = Vec::new();
    let mut avail_header: Option<(usize, String)> = None;
    let mut avail_values: Option<(usize, Vec<i64>)> = None;
    let mut seen = [false; 3];

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("***") || line.starts_with("---") {
            continue;
        }
        let upper = line.to_ascii_uppercase();
        if upper.starts_with("PRECEDENCE RELATIONS") {
            section = Section::Precedence;
            seen[0] = true;
            continue;
        }
        if upper.starts_with("REQUESTS/DURATIONS") {
            section = Section::Requests;
            seen[1] = true;
            continue;
        }
        if upper.starts_with("RESOURCEAVAILABILITIES") || upper.starts_with("RESOURCE AVAILABILITIES") {
            section = Section::Availability;
            seen[2] = true;
            continue;
        }
        if upper.starts_with("PROJECT INFORMATION") {
            section = Section::Other;
            continue;
        }
        if upper.starts_with("JOBS") && upper.contains("SUPERSOURCE") {
            let v = header_value(line).and_then(leading_int).ok_or_else(|| syntax(lineno, "bad job count"))?;
            file_jobs = Some(v as usize);
            continue;
        }
        if upper.starts_with("HORIZON") {
            horizon = header_value(line).and_then(leading_int);
            continue;
        }
        if upper.starts_with("RESOURCES") {
            section = Section::Header;
            continue;
        }
        if section == Section::Header {
            let slot = if upper.contains("NONRENEWABLE") {
                Some(1)
            } else if upper.contains("RENEWABLE") {
                Some(0)
            } else if upper.contains("DOUBLY") {
                Some(2)
            } else {
                None
            };
            if let Some(slot) = slot {
                let v = header_value(line).and_then(leading_int).ok_or_else(|| syntax(lineno, "bad resource count"))?;
                declared[slot] = Some(v as usize);
            }
            continue;
        }
        match section {
            Section::Precedence => {
                if upper.starts_with("JOBNR") {
                    continue;
                }
                let v = numbers(line, lineno)?;
                if v.len() < 3 {
                    return Err(syntax(lineno, "precedence row needs job, mode count and successor count"));
                }
                let count = v[2] as usize;
                if v.len() != 3 + count {
                    return Err(syntax(lineno, format!("job {} declares {} successors but lists {}", v[0], count, v.len() - 3)));
                }
                let succ = v[3..].iter().map(|&s| s as usize).collect();
                prec_rows.push((lineno, JobRow { modes: v[1] as usize, successors: succ }));
                if v[0] as usize != prec_rows.len() {
                    return Err(syntax(lineno, format!("expected job {}, found {}", prec_rows.len(), v[0])));
                }
            }
            Section::Requests => {
                if upper.starts_with("JOBNR") {
                    continue;
                }
                request_lines.push((lineno, numbers(line, lineno)?));
            }
            Section::Availability => {
                if avail_header.is_none() {
                    avail_header = Some((lineno, upper));
                } else if avail_values.is_none() {
                    avail_values = Some((lineno, numbers(line, lineno)?));
                }
            }
            Section::Header | Section::Other => {}
        }
    }

    if !seen[0] {
        return Err(ParseError::MissingSection("PRECEDENCE RELATIONS"));
    }
    if !seen[1] {
        return Err(ParseError::MissingSection("REQUESTS/DURATIONS"));
    }
    if !seen[2] {
        return Err(ParseError::MissingSection("RESOURCEAVAILABILITIES"));
    }
    // an empty availability block means no resources at all
    let (hline, header) = avail_header.unwrap_or((0, String::new()));
    let (vline, capacities) = match avail_values {
        Some(v) => v,
        None if header.trim().is_empty() => (hline, Vec::new()),
        None => return Err(ParseError::MissingSection("RESOURCEAVAILABILITIES")),
    };

    let compact: String = header.chars().filter(|c| !c.is_whitespace()).collect();
    let r_count = compact.matches('R').count();
    let n_count = compact.matches('N').count();
    let d_count = compact.matches('D').count();
    if d_count > 0 || declared[2].unwrap_or(0) > 0 {
        return Err(syntax(hline, "doubly constrained resources are not supported"));
    }
    if declared[0].is_some_and(|r| r != r_count) || declared[1].is_some_and(|n| n != n_count) {
        return Err(syntax(hline, "resource columns disagree with the declared resource counts"));
    }
    if capacities.len() != r_count + n_count {
        return Err(syntax(vline, format!("expected {} capacities, found {}", r_count + n_count, capacities.len())));
    }

    let jobs = prec_rows.len();
    if let Some(n) = file_jobs {
        if n != jobs {
            return Err(syntax(prec_rows.last().map_or(1, |r| r.0), format!("header announces {n} jobs, found {jobs}")));
        }
    }
    if jobs < 3 {
        return Err(syntax(prec_rows.last().map_or(1, |r| r.0), "need at least one job besides the two dummies"));
    }

    // Requests: the first row of a job carries the job number.
    let width = r_count + n_count;
    let mut modes: Vec<Vec<Mode>> = Vec::with_capacity(jobs);
    let mut rows = request_lines.into_iter();
    for (job_idx, (_, row)) in prec_rows.iter().enumerate() {
        let mut list = Vec::with_capacity(row.modes);
        for m in 0..row.modes {
            let (lineno, v) = rows.next().ok_or_else(|| syntax(0, format!("missing request row for job {}", job_idx + 1)))?;
            let data = if m == 0 {
                if v.len() != 3 + width {
                    return Err(syntax(lineno, format!("expected {} fields, found {}", 3 + width, v.len())));
                }
                if v[0] as usize != job_idx + 1 {
                    return Err(syntax(lineno, format!("expected job {}, found {}", job_idx + 1, v[0])));
                }
                &v[1..]
            } else {
                if v.len() != 2 + width {
                    return Err(syntax(lineno, format!("expected {} fields, found {}", 2 + width, v.len())));
                }
                &v[..]
            };
            if data[0] as usize != m + 1 {
                return Err(syntax(lineno, format!("expected mode {}, found {}", m + 1, data[0])));
            }
            list.push(Mode::new(data[1], data[2..2 + r_count].to_vec(), data[2 + r_count..].to_vec()));
        }
        modes.push(list);
    }
    if let Some((lineno, _)) = rows.next() {
        return Err(syntax(lineno, "request rows beyond the last job"));
    }

    for (idx, dummy) in [(0usize, &modes[0]), (jobs - 1, &modes[jobs - 1])] {
        let ok = dummy.len() == 1
            && dummy[0].duration == 0
            && dummy[0].renewable.iter().chain(&dummy[0].nonrenewable).all(|&v| v == 0);
        if !ok {
            return Err(syntax(prec_rows[idx].0, format!("job {} is not a dummy job", idx + 1)));
        }
    }

    let mut precedence = Vec::new();
    for (job_idx, (lineno, row)) in prec_rows.iter().enumerate() {
        for &s in &row.successors {
            if s == 0 || s > jobs {
                return Err(syntax(*lineno, format!("successor {s} out of range")));
            }
            let (i, j) = (job_idx + 1, s);
            if i == 1 || j == jobs {
                continue;
            }
            if j == 1 || i == jobs {
                return Err(syntax(*lineno, "arc into the dummy source or out of the dummy sink"));
            }
            precedence.push((i - 2, j - 2));
        }
    }

    let activities = modes[1..jobs - 1].iter().map(|m| Activity { modes: m.clone() }).collect();
    let instance = Instance::new(
        activities,
        capacities[..r_count].to_vec(),
        capacities[r_count..].to_vec(),
        precedence,
    )?;
    Ok(ParsedInstance {
        instance,
        source: InstanceSource {
            format,
            origin: origin.to_string(),
            horizon,
            file_jobs: Some(jobs),
            dummy_jobs: Some((1, jobs)),
        },
    })
}

/// Writes an instance in PSPLIB `.mm` layout, dummies re-added.
pub fn write_psplib_mm(instance: &Instance, horizon: i64) -> String {
    let a = instance.activity_count();
    let jobs = a + 2;
    let (r, n) = (instance.renewable_count(), instance.nonrenewable_count());
    let mut succ = vec![Vec::new(); jobs];
    let mut has_pred = vec![false; a];
    let mut has_succ = vec![false; a];
    for &(i, j) in instance.precedence() {
        succ[i + 1].push(j + 2);
        has_pred[j] = true;
        has_succ[i] = true;
    }
    for i in 0..a {
        if !has_pred[i] {
            succ[0].push(i + 2);
        }
        if !has_succ[i] {
            succ[i + 1].push(jobs);
        }
    }
    let star = "*".repeat(72);
    let mut out = String::new();
    let _ = writeln!(out, "{star}");
    let _ = writeln!(out, "projects                      :  1");
    let _ = writeln!(out, "jobs (incl. supersource/sink ):  {jobs}");
    let _ = writeln!(out, "horizon                       :  {horizon}");
    let _ = writeln!(out, "RESOURCES");
    let _ = writeln!(out, "  - renewable                 :  {r}   R");
    let _ = writeln!(out, "  - nonrenewable              :  {n}   N");
    let _ = writeln!(out, "  - doubly constrained        :  0   D");
    let _ = writeln!(out, "{star}");
    let _ = writeln!(out, "PRECEDENCE RELATIONS:");
    let _ = writeln!(out, "jobnr.    #modes  #successors   successors");
    for job in 0..jobs {
        let modes = if job == 0 || job == jobs - 1 { 1 } else { instance.mode_count(job - 1) };
        let mut line = format!("{:>4}{:>10}{:>12}     ", job + 1, modes, succ[job].len());
        for s in &succ[job] {
            let _ = write!(line, "{s:>4}");
        }
        let _ = writeln!(out, "{}", line.trim_end());
    }
    let _ = writeln!(out, "{star}");
    let _ = writeln!(out, "REQUESTS/DURATIONS:");
    let mut head = String::from("jobnr. mode duration");
    for k in 0..r {
        let _ = write!(head, "  R{:>2}", k + 1);
    }
    for k in 0..n {
        let _ = write!(head, "  N{:>2}", k + 1);
    }
    let _ = writeln!(out, "{head}");
    let _ = writeln!(out, "{}", "-".repeat(72));
    let zero = Mode::new(0, vec![0; r], vec![0; n]);
    for job in 0..jobs {
        let modes: Vec<&Mode> = if job == 0 || job == jobs - 1 {
            vec![&zero]
        } else {
            instance.modes(job - 1).iter().collect()
        };
        for (m, mode) in modes.iter().enumerate() {
            let mut line = if m == 0 { format!("{:>3}", job + 1) } else { "   ".to_string() };
            let _ = write!(line, "{:>7}{:>6}", m + 1, mode.duration);
            for v in mode.renewable.iter().chain(&mode.nonrenewable) {
                let _ = write!(line, "{v:>5}");
            }
            let _ = writeln!(out, "{line}");
        }
    }
    let _ = writeln!(out, "{star}");
    let _ = writeln!(out, "RESOURCEAVAILABILITIES:");
    let mut head = String::new();
    let mut vals = String::new();
    for k in 0..r {
        let _ = write!(head, "  R{:>2}", k + 1);
        let _ = write!(vals, "{:>5}", instance.renewable_capacity()[k]);
    }
    for k in 0..n {
        let _ = write!(head, "  N{:>2}", k + 1);
        let _ = write!(vals, "{:>5}", instance.nonrenewable_capacity()[k]);
    }
    let _ = writeln!(out, "{head}");
    let _ = writeln!(out, "{vals}");
    let _ = writeln!(out, "{star}");
    out
}

/// Serializes to the canonical text format.
pub fn write_canonical(instance: &Instance) -> String {
    let mut out = String::from("MMCT 1\n");
    let _ = writeln!(out, "activities {}", instance.activity_count());
    let join = |v: &[i64]| v.iter().map(|x| format!(" {x}")).collect::<String>();
    let _ = writeln!(out, "renewable{}", join(instance.renewable_capacity()));
    let _ = writeln!(out, "nonrenewable{}", join(instance.nonrenewable_capacity()));
    for (i, act) in instance.activities().iter().enumerate() {
        for mode in &act.modes {
            let _ = writeln!(
                out,
                "mode {} {}{}{}",
                i + 1,
                mode.duration,
                join(&mode.renewable),
                join(&mode.nonrenewable)
            );
        }
    }
    for &(i, j) in instance.precedence() {
        let _ = writeln!(out, "prec {} {}", i + 1, j + 1);
    }
    out
}

pub fn parse_canonical(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, "MMCT 1")) => {}
        Some((n, other)) => return Err(syntax(n, format!("expected header `MMCT 1`, found {other:?}"))),
        None => return Err(ParseError::MissingSection("MMCT header")),
    }
    let mut count = None;
    let mut renewable = None;
    let mut nonrenewable = None;
    let mut modes: Vec<Vec<Mode>> = Vec::new();
    let mut precedence = Vec::new();
    for (lineno, line) in lines {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let vals = numbers(rest, lineno)?;
        match key {
            "activities" => {
                let [a] = vals[..] else { return Err(syntax(lineno, "activities takes one value")) };
                if a < 1 {
                    return Err(syntax(lineno, "activity count must be positive"));
                }
                count = Some(a as usize);
                modes = vec![Vec::new(); a as usize];
            }
            "renewable" => renewable = Some(vals),
            "nonrenewable" => nonrenewable = Some(vals),
            "mode" => {
                let (Some(a), Some(r), Some(n)) = (count, renewable.as_ref(), nonrenewable.as_ref()) else {
                    return Err(syntax(lineno, "mode before activities/renewable/nonrenewable"));
                };
                if vals.len() != 2 + r.len() + n.len() {
                    return Err(syntax(lineno, format!("expected {} fields", 2 + r.len() + n.len())));
                }
                let i = vals[0];
                if i < 1 || i as usize > a {
                    return Err(syntax(lineno, format!("activity {i} out of range")));
                }
                modes[i as usize - 1].push(Mode::new(
                    vals[1],
                    vals[2..2 + r.len()].to_vec(),
                    vals[2 + r.len()..].to_vec(),
                ));
            }
            "prec" => {
                let [i, j] = vals[..] else { return Err(syntax(lineno, "prec takes two values")) };
                let a = count.ok_or_else(|| syntax(lineno, "prec before activities"))? as i64;
                if i < 1 || j < 1 || i > a || j > a {
                    return Err(syntax(lineno, format!("prec ({i}, {j}) out of range")));
                }
                precedence.push((i as usize - 1, j as usize - 1));
            }
            other => return Err(syntax(lineno, format!("unknown keyword {other:?}"))),
        }
    }
    if count.is_none() {
        return Err(ParseError::MissingSection("activities"));
    }
    let activities = modes.into_iter().map(|m| Activity { modes: m }).collect();
    Ok(Instance::new(
        activities,
        renewable.ok_or(ParseError::MissingSection("renewable"))?,
        nonrenewable.ok_or(ParseError::MissingSection("nonrenewable"))?,
        precedence,
    )?)
}

/// Multiplies every renewable demand and capacity by `delta`.
pub fn scale_renewables(instance: &Instance, delta: i64) -> Instance {
    assert!(delta >= 1, "scaling factor must be at least 1");
    let caps = instance.renewable_capacity().iter().map(|b| b * delta).collect();
    instance
        .map_resources(caps, instance.nonrenewable_capacity().to_vec(), |m| {
            Mode::new(m.duration, m.renewable.iter().map(|b| b * delta).collect(), m.nonrenewable.clone())
        })
        .expect("scaling preserves instance invariants")
}

/// Drops all renewable resources (MN variant).
pub fn strip_renewables(instance: &Instance) -> Instance {
    instance
        .map_resources(Vec::new(), instance.nonrenewable_capacity().to_vec(), |m| {
            Mode::new(m.duration, Vec::new(), m.nonrenewable.clone())
        })
        .expect("dropping resources preserves instance invariants")
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
************************************************************************
jobs (incl. supersource/sink ):  3
horizon                       :  4
RESOURCES
  - renewable                 :  1   R
  - nonrenewable              :  1   N
  - doubly constrained        :  0   D
************************************************************************
PRECEDENCE RELATIONS:
jobnr.    #modes  #successors   successors
   1        1          1           2
   2        2          1           3
   3        1          0
************************************************************************
REQUESTS/DURATIONS:
jobnr. mode duration  R 1  N 1
------------------------------------------------------------------------
  1      1     0       0    0
  2      1     3       2    1
         2     1       4    2
  3      1     0       0    0
************************************************************************
RESOURCEAVAILABILITIES:
  R 1  N 1
    4    2
************************************************************************
";

    #[test]
    fn minimal_file() {
        let parsed = parse_any(MINIMAL, "minimal").unwrap();
        let inst = &parsed.instance;
        assert_eq!(parsed.source.format, SourceFormat::PsplibMm);
        assert_eq!(parsed.source.horizon, Some(4));
        assert_eq!(parsed.source.dummy_jobs, Some((1, 3)));
        assert_eq!(inst.activity_count(), 1);
        assert!(inst.precedence().is_empty());
        assert_eq!(inst.mode_count(0), 2);
        assert_eq!(inst.mode(0, 1), &Mode::new(1, vec![4], vec![2]));
        assert_eq!(inst.renewable_capacity(), &[4]);
        assert_eq!(inst.nonrenewable_capacity(), &[2]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let broken = MINIMAL.replace("         2     1       4    2", "         2     x       4    2");
        match parse_psplib_mm(&broken) {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 20),
            other => panic!("unexpected {other:?}"),
        }
        let wrong_count = MINIMAL.replace("):  3", "):  4");
        assert!(matches!(parse_psplib_mm(&wrong_count), Err(ParseError::Syntax { .. })));
        let no_prec = MINIMAL.replace("PRECEDENCE RELATIONS:", "PRECEDENCE:");
        assert!(parse_psplib_mm(&no_prec).is_err());
        let bad_header = MINIMAL.replace("renewable                 :  1", "renewable                 :  2");
        assert!(matches!(parse_psplib_mm(&bad_header), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn psplib_writer_round_trips() {
        let ex = Instance::remark();
        let text = write_psplib_mm(&ex, 8);
        assert_eq!(parse_psplib_mm(&text).unwrap(), ex);
    }

    #[test]
    fn canonical_round_trip_of_examples() {
        for inst in [Instance::example1(), Instance::remark()] {
            let text = write_canonical(&inst);
            assert_eq!(parse_canonical(&text).unwrap(), inst);
            assert_eq!(parse_any(&text, "x").unwrap().source.format, SourceFormat::Canonical);
        }
    }

    #[test]
    fn canonical_comments() {
        let text = "# example 1\nMMCT 1\nactivities 2\nrenewable 1 # B\nnonrenewable\nmode 1 1 1\nmode 1 2 1\nmode 2 1 1\nmode 2 2 1\nprec 1 2\n";
        assert_eq!(parse_canonical(text).unwrap(), Instance::example1());
    }

    #[test]
    fn scaling_example1() {
        let ex = Instance::example1();
        let scaled = scale_renewables(&ex, 10);
        assert_eq!(scaled.renewable_capacity(), &[10]);
        for i in 0..2 {
            for m in 0..2 {
                assert_eq!(scaled.mode(i, m).renewable, vec![10]);
                assert_eq!(scaled.duration(i, m), ex.duration(i, m));
            }
        }
        assert_eq!(scale_renewables(&ex, 1), ex);
    }

    #[test]
    fn stripping_is_idempotent() {
        let ex = Instance::example1();
        let stripped = strip_renewables(&ex);
        assert_eq!(stripped.renewable_count(), 0);
        assert_eq!(stripped.nonrenewable_count(), 0);
        assert_eq!(strip_renewables(&stripped), stripped);
        assert_eq!(stripped.precedence(), ex.precedence());
    }
}
