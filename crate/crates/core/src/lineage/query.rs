use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{valid_name, Schema, Value};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(Value),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(value: &str) -> Self {
        Term::Const(value.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) if is_bare_constant(c) => f.write_str(c),
            Term::Const(c) if !c.contains('\'') => write!(f, "'{c}'"),
            Term::Const(c) => write!(f, "\"{c}\""),
        }
    }
}

fn is_bare_constant(c: &str) -> bool {
    c.starts_with(|ch: char| ch.is_ascii_digit()) && c.chars().all(is_bare_char)
}

fn is_bare_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '-')
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(relation: &str, args: Vec<Term>) -> Self {
        Atom {
            relation: relation.into(),
            args,
        }
    }

    /// Atom with every argument a variable.
    pub fn vars(relation: &str, vars: &[&str]) -> Self {
        Atom::new(relation, vars.iter().map(|v| Term::var(v)).collect())
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.args.iter().any(|t| t.as_var() == Some(v))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// `∃x̄ ⋀_j R_j(ȳ_j)`: a conjunction of atoms, every variable existentially
/// quantified.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    atoms: Vec<Atom>,
}

impl Query {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Query { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `|Q|`, the number of atoms.
    pub fn size(&self) -> usize {
        self.atoms.len()
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in self.atoms.iter().flat_map(|a| &a.args) {
            if let Term::Var(v) = t {
                if seen.insert(v.as_str()) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    /// `at(v)`: indices of the atoms containing `v`.
    pub fn atoms_of(&self, v: &str) -> BTreeSet<usize> {
        (0..self.atoms.len())
            .filter(|&i| self.atoms[i].contains_var(v))
            .collect()
    }

    /// Every atom names a relation of `schema` with the declared arity.
    pub fn check(&self, schema: &Schema) -> Result<()> {
        for a in &self.atoms {
            let rel = schema.get(&a.relation).ok_or_else(|| {
                Error::input(format!("atom {a}: unknown relation {}", a.relation))
            })?;
            if rel.arity != a.args.len() {
                return Err(Error::input(format!(
                    "atom {a}: relation {} has arity {}",
                    rel.name, rel.arity
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Q :- ")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Reads `Q :- R(x), S(x,y), T(y)`. The head is optional. Identifiers are
/// variables; quoted strings and tokens starting with a digit are
/// constants.
pub fn parse_query(text: &str) -> Result<Query> {
    let text = text.trim().trim_end_matches('.').trim();
    let body = match text.find(":-") {
        Some(i) => &text[i + 2..],
        None => text,
    };
    let mut p = Parser {
        chars: body.chars().collect(),
        pos: 0,
    };
    let mut atoms = Vec::new();
    loop {
        atoms.push(p.atom()?);
        p.skip_ws();
        match p.next() {
            None => break,
            Some(',') | Some('∧') => continue,
            Some(c) => return Err(p.error(format!("unexpected {c:?} between atoms"))),
        }
    }
    Ok(Query::new(atoms))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, msg: String) -> Error {
        Error::parse(1, format!("{msg} (column {})", self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied();
        self.pos += c.is_some() as usize;
        c
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.next() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(self.error(format!("expected {want:?}, found {c:?}"))),
            None => Err(self.error(format!("expected {want:?}, found end of query"))),
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| is_bare_char(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        let name = self.word();
        if !valid_name(&name) {
            return Err(self.error(format!("expected a relation name, found {name:?}")));
        }
        self.expect('(')?;
        let mut args = vec![self.term()?];
        loop {
            self.skip_ws();
            match self.next() {
                Some(',') => args.push(self.term()?),
                Some(')') => break,
                Some(c) => return Err(self.error(format!("unexpected {c:?} in atom {name}"))),
                None => return Err(self.error(format!("unterminated atom {name}"))),
            }
        }
        Ok(Atom::new(&name, args))
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.chars.get(self.pos).copied() {
            Some(q @ ('\'' | '"')) => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|&c| c != q) {
                    self.pos += 1;
                }
                if self.pos == self.chars.len() {
                    return Err(self.error("unterminated quoted constant".into()));
                }
                let value: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                Ok(Term::Const(value))
            }
            Some(c) if c.is_ascii_digit() => Ok(Term::Const(self.word())),
            _ => {
                let w = self.word();
                if valid_name(&w) {
                    Ok(Term::Var(w))
                } else {
                    Err(self.error(format!("expected a variable or constant, found {w:?}")))
                }
            }
        }
    }
}

/// The first variable pair, in order of first occurrence, whose atom sets
/// overlap without being nested; `None` if the query is hierarchical.
pub fn hierarchy_witness(q: &Query) -> Option<(String, String)> {
    let vars = q.variables();
    let at: Vec<BTreeSet<usize>> = vars.iter().map(|v| q.atoms_of(v)).collect();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            let (a, b) = (&at[i], &at[j]);
            if !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a) {
                return Some((vars[i].clone(), vars[j].clone()));
            }
        }
    }
    None
}

pub fn is_hierarchical(q: &Query) -> bool {
    hierarchy_witness(q).is_none()
}

/// No relation occurs in two atoms.
pub fn is_self_join_free(q: &Query) -> bool {
    let mut seen = HashSet::new();
    q.atoms().iter().all(|a| seen.insert(a.relation.as_str()))
}
