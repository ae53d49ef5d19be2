//! Prefix s-expression format:
//!
//! ```text
//! p sexpr 3
//! (and x1 (or x2 (not x3)))
//! ```
//!
//! The `p sexpr <n>` header is optional; without it `n` is the largest
//! variable index. `;` starts a comment, as do DIMACS-style `c` lines.
//! [`parse_formula`] also accepts DIMACS `p cnf` / `p dnf` input.

use std::fmt::Write as _;

use super::{dimacs, BoolFunc, Expr};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

/// Reads either an s-expression or a DIMACS CNF/DNF file, depending on the
/// first non-comment line.
pub fn parse_formula(text: &str) -> Result<BoolFunc> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !is_comment(l));
    match first {
        Some(l) if l.starts_with("p cnf") || l.starts_with("p dnf") => dimacs::parse_dimacs(text),
        _ => parse_sexpr(text),
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with(';') || line == "c" || line.starts_with("c ")
}

pub fn parse_sexpr(text: &str) -> Result<BoolFunc> {
    let mut declared = None;
    let mut tokens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split(';').next().unwrap_or("").trim();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["sexpr", n] if declared.is_none() && tokens.is_empty() => {
                    declared =
                        Some(n.parse::<usize>().map_err(|_| {
                            Error::parse(line_no, format!("bad variable count {n:?}"))
                        })?);
                    continue;
                }
                _ => return Err(Error::parse(line_no, format!("unexpected header {line:?}"))),
            }
        }
        tokenize(line, line_no, &mut tokens)?;
    }
    let mut pos = 0;
    let expr = parse_expr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::parse(
            tokens[pos].1,
            "trailing input after expression",
        ));
    }
    let n = match declared {
        Some(n) => n,
        None => expr.max_var().map_or(0, |v| v + 1),
    };
    BoolFunc::new(expr, n)
}

fn tokenize(line: &str, line_no: usize, out: &mut Vec<(Token, usize)>) -> Result<()> {
    let mut atom = String::new();
    let flush = |atom: &mut String, out: &mut Vec<(Token, usize)>| {
        if !atom.is_empty() {
            out.push((Token::Atom(std::mem::take(atom)), line_no));
        }
    };
    for ch in line.chars() {
        match ch {
            '(' => {
                flush(&mut atom, out);
                out.push((Token::Open, line_no));
            }
            ')' => {
                flush(&mut atom, out);
                out.push((Token::Close, line_no));
            }
            c if c.is_whitespace() => flush(&mut atom, out),
            c if c.is_ascii_alphanumeric() || c == '_' => atom.push(c),
            c => return Err(Error::parse(line_no, format!("unexpected character {c:?}"))),
        }
    }
    flush(&mut atom, out);
    Ok(())
}

fn parse_expr(tokens: &[(Token, usize)], pos: &mut usize) -> Result<Expr> {
    let last_line = tokens.last().map_or(1, |t| t.1);
    let (tok, line) = tokens
        .get(*pos)
        .cloned()
        .ok_or_else(|| Error::parse(last_line, "unexpected end of input"))?;
    *pos += 1;
    match tok {
        Token::Close => Err(Error::parse(line, "unexpected ')'")),
        Token::Atom(a) => parse_atom(&a, line),
        Token::Open => {
            let op = match tokens.get(*pos) {
                Some((Token::Atom(a), _)) => a.clone(),
                _ => return Err(Error::parse(line, "expected operator after '('")),
            };
            *pos += 1;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some((Token::Close, _)) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => args.push(parse_expr(tokens, pos)?),
                    None => return Err(Error::parse(last_line, "unclosed '('")),
                }
            }
            match op.as_str() {
                "not" if args.len() == 1 => Ok(Expr::not(args.pop().unwrap())),
                "not" => Err(Error::parse(line, "not takes exactly one argument")),
                "and" | "or" if args.len() < 2 => Err(Error::parse(
                    line,
                    format!("{op} needs at least two arguments"),
                )),
                "and" => Ok(Expr::And(args)),
                "or" => Ok(Expr::Or(args)),
                other => Err(Error::parse(line, format!("unknown operator {other:?}"))),
            }
        }
    }
}

fn parse_atom(atom: &str, line: usize) -> Result<Expr> {
    match atom {
        "0" => Ok(Expr::Const(false)),
        "1" => Ok(Expr::Const(true)),
        _ => {
            let idx = atom
                .strip_prefix('x')
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::parse(line, format!("bad atom {atom:?}")))?;
            Ok(Expr::Var(idx - 1))
        }
    }
}

/// Renders `F` with a `p sexpr <n>` header. The output parses back to an
/// identical function.
pub fn to_text(f: &BoolFunc) -> String {
    let mut out = format!("p sexpr {}\n", f.num_vars());
    write_expr(f.expr(), &mut out);
    out.push('\n');
    out
}

fn write_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Const(b) => out.push(if *b { '1' } else { '0' }),
        Expr::Var(v) => {
            let _ = write!(out, "x{}", v + 1);
        }
        Expr::Not(c) => {
            out.push_str("(not ");
            write_expr(c, out);
            out.push(')');
        }
        Expr::And(cs) | Expr::Or(cs) => {
            out.push_str(if matches!(e, Expr::And(_)) {
                "(and"
            } else {
                "(or"
            });
            for c in cs {
                out.push(' ');
                write_expr(c, out);
            }
            out.push(')');
        }
    }
}
