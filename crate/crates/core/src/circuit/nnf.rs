//! The c2d `nnf` text format.
//!
//! ```text
//! nnf V E n
//! L lit            signed literal, 1-based
//! A c i1 .. ic     conjunction of earlier lines
//! O j c i1 .. ic   disjunction, j is a decision-variable hint (ignored)
//! T | F            constants
//! ```
//!
//! Lines are numbered from 0 in order; the last line is the output. `A 0`
//! and `O j 0` are read as the constants 1 and 0. Lines starting with `c`
//! are comments.

use super::{Circuit, Gate, GateId};
use crate::error::{Error, Result};

pub fn parse_nnf(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('c'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty circuit file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "nnf" {
        return Err(Error::parse(hline, "expected header `nnf V E n`"));
    }
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::parse(hline, format!("bad header count `{s}`")))
    };
    let (v_decl, e_decl, n) = (num(h[1])?, num(h[2])?, num(h[3])?);

    let mut gates: Vec<Gate> = Vec::new();
    // line index -> gate
    let mut node_gate: Vec<GateId> = Vec::new();
    let mut edges = 0usize;
    let mut last_line = hline;

    for (lineno, line) in lines {
        last_line = lineno;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let ints = |from: usize| -> Result<Vec<i64>> {
            toks[from..]
                .iter()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::parse(lineno, format!("bad integer `{t}`")))
                })
                .collect()
        };
        let this = node_gate.len();
        let children = |ids: &[i64]| -> Result<Vec<GateId>> {
            ids.iter()
                .map(|&i| {
                    if i < 0 || i as usize >= this {
                        Err(Error::parse(
                            lineno,
                            format!("node {this} refers to node {i}; only earlier nodes may be referenced"),
                        ))
                    } else {
                        Ok(node_gate[i as usize])
                    }
                })
                .collect()
        };
        let gate = match toks[0] {
            "L" => {
                let v = ints(1)?;
                if v.len() != 1 || v[0] == 0 || v[0].unsigned_abs() as usize > n {
                    return Err(Error::parse(
                        lineno,
                        format!("literal must be a nonzero integer with |lit| <= {n}"),
                    ));
                }
                let var = v[0].unsigned_abs() as usize - 1;
                gates.push(Gate::Var(var));
                if v[0] > 0 {
                    gates.len() - 1
                } else {
                    gates.push(Gate::Not(gates.len() - 1));
                    gates.len() - 1
                }
            }
            "T" | "F" => {
                if toks.len() != 1 {
                    return Err(Error::parse(lineno, "constants take no arguments"));
                }
                gates.push(Gate::Const(toks[0] == "T"));
                gates.len() - 1
            }
            "A" | "O" => {
                let v = ints(1)?;
                let (count, ids) = if toks[0] == "A" {
                    (v.first().copied(), v.get(1..).unwrap_or(&[]))
                } else {
                    (v.get(1).copied(), v.get(2..).unwrap_or(&[]))
                };
                let count = count.ok_or_else(|| Error::parse(lineno, "missing child count"))?;
                if count < 0 || count as usize != ids.len() {
                    return Err(Error::parse(
                        lineno,
                        format!("declared {count} children, found {}", ids.len()),
                    ));
                }
                if count == 1 {
                    return Err(Error::parse(lineno, "unary connectives are not accepted"));
                }
                let cs = children(ids)?;
                edges += cs.len();
                gates.push(match (toks[0], cs.is_empty()) {
                    ("A", true) => Gate::Const(true),
                    ("O", true) => Gate::Const(false),
                    ("A", false) => Gate::And(cs),
                    _ => Gate::Or(cs),
                });
                gates.len() - 1
            }
            other => return Err(Error::parse(lineno, format!("unknown node kind `{other}`"))),
        };
        node_gate.push(gate);
    }

    if node_gate.len() != v_decl {
        return Err(Error::parse(
            last_line,
            format!("header declares {v_decl} nodes, found {}", node_gate.len()),
        ));
    }
    if edges != e_decl {
        return Err(Error::parse(
            last_line,
            format!("header declares {e_decl} edges, found {edges}"),
        ));
    }
    let output = *node_gate
        .last()
        .ok_or_else(|| Error::parse(hline, "circuit has no nodes"))?;
    Circuit::new(gates, output, n)
}

/// Writes a leaf-NNF circuit. A variable gate read only through its
/// negation is folded into the negative literal line.
pub fn write_nnf(c: &Circuit) -> Result<String> {
    if !c.is_leaf_nnf() {
        return Err(Error::input("only leaf-NNF circuits can be written as nnf"));
    }
    let gates = c.gates();
    let mut direct = vec![false; gates.len()];
    direct[c.output()] = true;
    for g in gates {
        if let Gate::And(cs) | Gate::Or(cs) = g {
            for &ch in cs {
                direct[ch] = true;
            }
        }
    }
    let mut line_of = vec![usize::MAX; gates.len()];
    let mut body = Vec::new();
    let mut edges = 0;
    let join = |cs: &[GateId], line_of: &[usize]| -> String {
        cs.iter()
            .map(|ch| line_of[*ch].to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    for (id, g) in gates.iter().enumerate() {
        let line = match g {
            Gate::Var(v) if !direct[id] => continue,
            Gate::Var(v) => format!("L {}", v + 1),
            Gate::Not(ch) => match gates[*ch] {
                Gate::Var(v) => format!("L -{}", v + 1),
                _ => unreachable!("leaf-NNF checked"),
            },
            Gate::Const(true) => "T".to_string(),
            Gate::Const(false) => "F".to_string(),
            Gate::And(cs) => {
                edges += cs.len();
                format!("A {} {}", cs.len(), join(cs, &line_of))
            }
            Gate::Or(cs) => {
                edges += cs.len();
                format!("O 0 {} {}", cs.len(), join(cs, &line_of))
            }
        };
        line_of[id] = body.len();
        body.push(line);
    }
    let mut out = format!("nnf {} {} {}\n", body.len(), edges, c.num_vars());
    for l in body {
        out.push_str(&l);
        out.push('\n');
    }
    Ok(out)
}
