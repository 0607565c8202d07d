//! Text formats for instances and solutions.
//!
//! Instance file: one interval per line as `left right`; numbers are
//! integers, exact decimals or `p/q`; `#` starts a comment; blank lines are
//! ignored.
//!
//! Solution file: `delta <value>` followed by `<id> <new_left> <displacement>`
//! per interval, ids 1-based in input order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    find_violation, max_displacement, Configuration, Direction, Instance, ModelError, Solution,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    /// 1-based; 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    })
}

fn number(line: usize, token: &str) -> Result<Scalar, FormatError> {
    token
        .parse()
        .map_err(|e: crate::scalar::ScalarParseError| FormatError::new(line, e.to_string()))
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut raw = Vec::new();
    let mut lines = Vec::new();
    for (line, tokens) in content_lines(text) {
        if tokens.len() != 2 {
            return Err(FormatError::new(
                line,
                format!("expected `left right`, found {} fields", tokens.len()),
            ));
        }
        raw.push((number(line, tokens[0])?, number(line, tokens[1])?));
        lines.push(line);
    }
    crate::model::normalize_instance(&raw).map_err(|e| match e {
        ModelError::DegenerateInterval { id, .. } => FormatError::new(lines[id], e.to_string()),
        other => FormatError::new(0, other.to_string()),
    })
}

/// Renders in original input order; parsing the result gives back `inst`.
pub fn render_instance(inst: &Instance) -> String {
    let mut out = String::new();
    for (l, r) in inst.raw() {
        writeln!(out, "{l} {r}").expect("writing to a string");
    }
    out
}

pub fn render_solution(inst: &Instance, sol: &Solution) -> String {
    let mut out = format!("delta {}\n", sol.delta);
    for (id, (pos, disp)) in sol.by_input_order(inst).into_iter().enumerate() {
        writeln!(out, "{} {pos} {disp}", id + 1).expect("writing to a string");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionEntry {
    /// 1-based input ordinal.
    pub id: usize,
    pub new_left: Scalar,
    pub displacement: Scalar,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub delta: Scalar,
    pub entries: Vec<SolutionEntry>,
}

pub fn parse_solution(text: &str) -> Result<SolutionFile, FormatError> {
    let mut lines = content_lines(text);
    let (line, head) = lines
        .next()
        .ok_or_else(|| FormatError::new(0, "empty solution file"))?;
    if head.len() != 2 || head[0] != "delta" {
        return Err(FormatError::new(line, "expected `delta <value>`"));
    }
    let delta = number(line, head[1])?;
    let mut entries = Vec::new();
    for (line, tokens) in lines {
        if tokens.len() != 3 {
            return Err(FormatError::new(
                line,
                "expected `<id> <new_left> <displacement>`",
            ));
        }
        let id: usize = tokens[0]
            .parse()
            .ok()
            .filter(|&id| id >= 1)
            .ok_or_else(|| FormatError::new(line, format!("invalid id `{}`", tokens[0])))?;
        entries.push(SolutionEntry {
            id,
            new_left: number(line, tokens[1])?,
            displacement: number(line, tokens[2])?,
            line,
        });
    }
    Ok(SolutionFile { delta, entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("line {line}: id {id} does not name an interval of the instance")]
    UnknownId { id: usize, line: usize },
    #[error("line {line}: id {id} appears twice")]
    DuplicateId { id: usize, line: usize },
    #[error("interval {id} has no position")]
    MissingId { id: usize },
    #[error("line {line}: interval {id} states displacement {stated} but moved by {actual}")]
    InconsistentDisplacement {
        id: usize,
        line: usize,
        stated: Scalar,
        actual: Scalar,
    },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("stated delta {stated} but the max-displacement is {actual}")]
    DeltaMismatch { stated: Scalar, actual: Scalar },
}

/// Checks a parsed solution against its instance; returns the recomputed
/// max-displacement.
pub fn verify_solution(
    inst: &Instance,
    file: &SolutionFile,
    direction: Direction,
) -> Result<Scalar, VerifyError> {
    let mut config = Configuration::new(inst.len());
    for e in &file.entries {
        if e.id > inst.len() {
            return Err(VerifyError::UnknownId {
                id: e.id,
                line: e.line,
            });
        }
        let rank = inst.rank_of_id(e.id - 1);
        if config.position(rank).is_some() {
            return Err(VerifyError::DuplicateId {
                id: e.id,
                line: e.line,
            });
        }
        let actual = &e.new_left - inst[rank].left();
        if actual != e.displacement {
            return Err(VerifyError::InconsistentDisplacement {
                id: e.id,
                line: e.line,
                stated: e.displacement.clone(),
                actual,
            });
        }
        config.set(rank, e.new_left.clone());
    }
    if let Some(rank) = (0..inst.len()).find(|&r| config.position(r).is_none()) {
        return Err(VerifyError::MissingId {
            id: inst[rank].id() + 1,
        });
    }
    if let Some(v) = find_violation(&config, inst, direction) {
        return Err(VerifyError::Infeasible(v.describe(inst)));
    }
    let actual = max_displacement(&config, inst);
    if actual != file.delta {
        return Err(VerifyError::DeltaMismatch {
            stated: file.delta.clone(),
            actual,
        });
    }
    Ok(actual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fast::solve_fast_solution;
    use crate::model::to_two_direction;

    #[test]
    fn instance_round_trip() {
        let text = "# header\n0 2\n\n1.5 3 # trailing\n-1/3 7\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.len(), 3);
        assert_eq!(render_instance(&inst), "0 2\n3/2 3\n-1/3 7\n");
        assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
        assert_eq!(
            parse_instance("0.1 0.2").unwrap()[0].left(),
            &Scalar::ratio(1, 10)
        );
    }

    #[test]
    fn instance_errors_name_lines() {
        assert_eq!(parse_instance("0 1\n\n1 1\n").unwrap_err().line, 3);
        assert_eq!(parse_instance("0 1\nx 2\n").unwrap_err().line, 2);
        assert_eq!(parse_instance("0 1 2\n").unwrap_err().line, 1);
        assert_eq!(parse_instance("# nothing\n").unwrap_err().line, 0);
    }

    #[test]
    fn solution_round_trip_and_tampering() {
        let inst = parse_instance("0 2\n1 3\n").unwrap();
        let sol = solve_fast_solution(&inst);
        let text = render_solution(&inst, &sol);
        assert_eq!(text, "delta 1\n1 0 0\n2 2 1\n");
        let file = parse_solution(&text).unwrap();
        assert_eq!(
            verify_solution(&inst, &file, Direction::One),
            Ok(Scalar::from(1))
        );

        let two = render_solution(&inst, &to_two_direction(&sol));
        assert_eq!(two, "delta 1/2\n1 -1/2 -1/2\n2 3/2 1/2\n");
        let file = parse_solution(&two).unwrap();
        assert!(verify_solution(&inst, &file, Direction::Two).is_ok());
        assert!(matches!(
            verify_solution(&inst, &file, Direction::One),
            Err(VerifyError::Infeasible(_))
        ));

        let overlap = parse_solution("delta 1\n1 0 0\n2 1 0\n").unwrap();
        let err = verify_solution(&inst, &overlap, Direction::One).unwrap_err();
        assert_eq!(err.to_string(), "infeasible: intervals 1 and 2 overlap");

        let wrong = parse_solution("delta 2\n1 0 0\n2 2 1\n").unwrap();
        assert!(matches!(
            verify_solution(&inst, &wrong, Direction::One),
            Err(VerifyError::DeltaMismatch { .. })
        ));
        let missing = parse_solution("delta 0\n1 0 0\n").unwrap();
        assert_eq!(
            verify_solution(&inst, &missing, Direction::One),
            Err(VerifyError::MissingId { id: 2 })
        );
    }
}
