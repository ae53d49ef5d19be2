//! DIMACS-style CNF and its DNF mirror (`p dnf n m`, one 0-terminated
//! clause per conjunction).

use super::{BoolFunc, Expr};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimacsKind {
    Cnf,
    Dnf,
}

pub fn parse_dimacs(text: &str) -> Result<BoolFunc> {
    let mut header: Option<(DimacsKind, usize, usize)> = None;
    let mut clauses: Vec<Vec<Expr>> = Vec::new();
    let mut current: Vec<Expr> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate header"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let (kind, n, m) = match parts.as_slice() {
                ["p", kind, n, m] => {
                    let kind = match *kind {
                        "cnf" => DimacsKind::Cnf,
                        "dnf" => DimacsKind::Dnf,
                        other => {
                            return Err(Error::parse(line_no, format!("unknown format {other:?}")))
                        }
                    };
                    let n = n
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad variable count {n:?}")))?;
                    let m = m
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad clause count {m:?}")))?;
                    (kind, n, m)
                }
                _ => {
                    return Err(Error::parse(
                        line_no,
                        "expected 'p cnf|dnf <vars> <clauses>'",
                    ))
                }
            };
            header = Some((kind, n, m));
            continue;
        }
        let (_, n, _) = header.ok_or_else(|| Error::parse(line_no, "clause before header"))?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > n {
                return Err(Error::parse(
                    line_no,
                    format!("literal {lit} exceeds declared {n} variables"),
                ));
            }
            let v = Expr::Var(var - 1);
            current.push(if lit < 0 { Expr::not(v) } else { v });
        }
    }

    let (kind, n, m) = header.ok_or_else(|| Error::parse(last_line.max(1), "missing header"))?;
    if !current.is_empty() {
        return Err(Error::parse(last_line, "last clause is not 0-terminated"));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            last_line,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    let expr = match kind {
        DimacsKind::Cnf => Expr::and(clauses.into_iter().map(Expr::or).collect()),
        DimacsKind::Dnf => Expr::or(clauses.into_iter().map(Expr::and).collect()),
    };
    BoolFunc::new(expr, n)
}
