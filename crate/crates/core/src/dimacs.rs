//! DIMACS CNF parsing and serialization.
//!
//! Accepted input follows the usual conventions: `c` comment lines, a single
//! `p cnf <vars> <clauses>` header, then zero-terminated clauses. Clauses may
//! span lines. Duplicate literals inside a clause are collapsed and duplicate
//! clauses are merged; tautological clauses are a hard error because the
//! clause definition excludes them.

use std::fmt;

use thiserror::Error;

use crate::formula::{Clause, Formula, FormulaError, Lit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing `p cnf <vars> <clauses>` header")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: `{token}` is not a literal")]
    BadToken { line: usize, token: String },
    #[error("clause {clause}: literal {literal} exceeds the declared {declared} variables")]
    LiteralOutOfRange { clause: usize, literal: i64, declared: u32 },
    #[error("clause {clause}: tautological (contains a variable and its negation)")]
    TautologicalClause { clause: usize },
}

/// Non-fatal oddities noticed while parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// Header clause count disagrees with the body; the body wins.
    ClauseCountMismatch { header: usize, body: usize },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::ClauseCountMismatch { header, body } => write!(
                f,
                "header declares {header} clauses but the body contains {body}; using the body"
            ),
        }
    }
}

/// A parsed formula together with any warnings.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub formula: Formula,
    pub warnings: Vec<ParseWarning>,
}

/// Parses DIMACS CNF text.
pub fn parse_dimacs(input: &str) -> Result<Parsed, ParseError> {
    let mut lines = input.lines().enumerate();

    let (num_vars, header_clauses) = loop {
        let Some((idx, line)) = lines.next() else {
            return Err(ParseError::MissingHeader);
        };
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["cnf", vars, clauses] => vars
                    .parse::<u32>()
                    .ok()
                    .zip(clauses.parse::<usize>().ok()),
                _ => None,
            };
            match parsed {
                Some(header) => break header,
                None => {
                    return Err(ParseError::MalformedHeader { line: idx + 1, text: line.to_string() })
                }
            }
        }
        return Err(ParseError::MissingHeader);
    };

    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut body_count = 0usize;

    let finish_clause = |pending: &mut Vec<Lit>,
                             clauses: &mut Vec<Clause>,
                             body_count: &mut usize|
     -> Result<(), ParseError> {
        *body_count += 1;
        match Clause::new(pending.drain(..)) {
            Ok(clause) => {
                clauses.push(clause);
                Ok(())
            }
            Err(FormulaError::ComplementaryPair { .. }) => {
                Err(ParseError::TautologicalClause { clause: *body_count })
            }
            Err(_) => unreachable!("clause construction only reports tautologies"),
        }
    };

    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        for token in line.split_whitespace() {
            let code: i64 = token
                .parse()
                .map_err(|_| ParseError::BadToken { line: idx + 1, token: token.to_string() })?;
            if code == 0 {
                finish_clause(&mut pending, &mut clauses, &mut body_count)?;
                continue;
            }
            let lit = Lit::from_dimacs(code)
                .ok_or_else(|| ParseError::BadToken { line: idx + 1, token: token.to_string() })?;
            if lit.var().id() > num_vars {
                return Err(ParseError::LiteralOutOfRange {
                    clause: body_count + 1,
                    literal: code,
                    declared: num_vars,
                });
            }
            pending.push(lit);
        }
    }
    // tolerate a final clause without its terminating zero
    if !pending.is_empty() {
        finish_clause(&mut pending, &mut clauses, &mut body_count)?;
    }

    let mut warnings = Vec::new();
    if body_count != header_clauses {
        warnings.push(ParseWarning::ClauseCountMismatch { header: header_clauses, body: body_count });
    }

    let formula = Formula::new(clauses, num_vars).expect("literal range already checked");
    Ok(Parsed { formula, warnings })
}

/// Serializes a formula as DIMACS CNF. Clauses are emitted in the canonical
/// ascending literal order, so the output is deterministic and reparses to an
/// equal formula.
pub fn serialize_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    out.push_str(&format!("p cnf {} {}\n", f.num_declared_vars(), f.clause_count()));
    for clause in f.clauses() {
        out.push_str(&clause.to_string());
        out.push('\n');
    }
    out
}
