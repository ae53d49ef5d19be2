//! Boolean conjunctive queries over relational data and their lineage.
//!
//! A [`Database`] holds one set of constant tuples per relation of its
//! [`Schema`]. Every tuple of an endogenous relation carries a Boolean
//! variable; ids are dense and assigned relation by relation, row by row.
//! The lineage of a Boolean [`Query`] is the positive DNF over these
//! variables whose models are exactly the endogenous subsets (together with
//! all exogenous tuples) on which the query holds.

mod build;
mod compile;
mod hardness;
mod io;
mod query;
mod random;
mod stretch;

use std::collections::HashMap;
use std::fmt;

use crate::boolfunc::{BoolFunc, ClauseSet, VarId};
use crate::error::{Error, Result};

pub use build::{build_lineage, recursive_lineage};
pub use compile::{
    compile_hierarchical_lineage, hard_branch_reason, shapley_tuples, TupleShapley,
    TupleShapleyMethod,
};
pub use hardness::{
    collapse_stretched_rst, embed_nonhierarchical, pp2dnf_instance, rst_query, Embedding,
};
pub use io::{
    parse_schema, read_database_dir, write_database_dir, write_shapley_csv, write_tuple_map,
};
pub use query::{
    hierarchy_witness, is_hierarchical, is_self_join_free, parse_query, Atom, Query, Term,
};
pub use random::{random_database, random_hierarchical_query, random_query};
pub use stretch::{
    stretch_database_dummy, stretch_database_expand, stretch_query, stretch_schema,
    StretchedArtifacts,
};

/// A constant of the active domain.
pub type Value = String;

/// A row of a relation.
pub type Tuple = Vec<Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Endogenous,
    Exogenous,
}

impl RelationKind {
    pub fn is_endogenous(self) -> bool {
        self == RelationKind::Endogenous
    }

    pub fn keyword(self) -> &'static str {
        match self {
            RelationKind::Endogenous => "endo",
            RelationKind::Exogenous => "exo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSchema {
    pub name: String,
    pub arity: usize,
    pub kind: RelationKind,
}

/// Ordered relation declarations with unique names and arities ≥ 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schema {
    relations: Vec<RelationSchema>,
    index: HashMap<String, usize>,
}

impl Schema {
    pub fn new(relations: Vec<RelationSchema>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, r) in relations.iter().enumerate() {
            if r.arity == 0 {
                return Err(Error::input(format!("relation {} has arity 0", r.name)));
            }
            if !valid_name(&r.name) {
                return Err(Error::input(format!("invalid relation name {:?}", r.name)));
            }
            if index.insert(r.name.clone(), i).is_some() {
                return Err(Error::input(format!("relation {} declared twice", r.name)));
            }
        }
        Ok(Schema { relations, index })
    }

    pub fn relations(&self) -> &[RelationSchema] {
        &self.relations
    }

    pub fn relation(&self, i: usize) -> &RelationSchema {
        &self.relations[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn get(&self, name: &str) -> Option<&RelationSchema> {
        self.position(name).map(|i| &self.relations[i])
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

pub(crate) fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Position of a tuple: relation index in the schema and row index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleRef {
    pub relation: usize,
    pub row: usize,
}

/// A relational instance. Rows keep their insertion order; duplicates are
/// rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Database {
    schema: Schema,
    rows: Vec<Vec<Tuple>>,
    /// First variable id of each relation (endogenous ones only matter).
    var_offset: Vec<usize>,
    tuples: Vec<TupleRef>,
}

impl Database {
    pub fn new(schema: Schema, rows: Vec<Vec<Tuple>>) -> Result<Self> {
        if rows.len() != schema.len() {
            return Err(Error::input(format!(
                "{} row sets for {} relations",
                rows.len(),
                schema.len()
            )));
        }
        let mut var_offset = Vec::with_capacity(schema.len());
        let mut tuples = Vec::new();
        for (i, (rel, rs)) in schema.relations().iter().zip(&rows).enumerate() {
            let mut seen = std::collections::HashSet::new();
            for (j, t) in rs.iter().enumerate() {
                if t.len() != rel.arity {
                    return Err(Error::input(format!(
                        "row {j} of {} has {} values, expected {}",
                        rel.name,
                        t.len(),
                        rel.arity
                    )));
                }
                if !seen.insert(t) {
                    return Err(Error::input(format!(
                        "row {j} of {} duplicates an earlier row",
                        rel.name
                    )));
                }
            }
            var_offset.push(tuples.len());
            if rel.kind.is_endogenous() {
                tuples.extend((0..rs.len()).map(|row| TupleRef { relation: i, row }));
            }
        }
        Ok(Database {
            schema,
            rows,
            var_offset,
            tuples,
        })
    }

    pub fn empty(schema: Schema) -> Self {
        let rows = vec![Vec::new(); schema.len()];
        Database::new(schema, rows).expect("empty instance is valid")
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self, relation: usize) -> &[Tuple] {
        &self.rows[relation]
    }

    pub fn rows_of(&self, name: &str) -> Option<&[Tuple]> {
        self.schema.position(name).map(|i| self.rows(i))
    }

    pub fn tuple(&self, t: TupleRef) -> &Tuple {
        &self.rows[t.relation][t.row]
    }

    /// Number of endogenous tuples, i.e. of lineage variables.
    pub fn num_vars(&self) -> usize {
        self.tuples.len()
    }

    /// `v(t)`, or `None` for an exogenous tuple.
    pub fn var_of(&self, t: TupleRef) -> Option<VarId> {
        self.schema
            .relation(t.relation)
            .kind
            .is_endogenous()
            .then(|| self.var_offset[t.relation] + t.row)
    }

    pub fn tuple_of(&self, v: VarId) -> TupleRef {
        self.tuples[v]
    }

    /// All endogenous tuples in variable order.
    pub fn endogenous_tuples(&self) -> &[TupleRef] {
        &self.tuples
    }

    /// `relation(a,b,…)` for diagnostics and labels.
    pub fn describe(&self, t: TupleRef) -> String {
        format!(
            "{}({})",
            self.schema.relation(t.relation).name,
            self.tuple(t).join(",")
        )
    }

    /// Sorted distinct constants occurring anywhere in the instance.
    pub fn active_domain(&self) -> Vec<Value> {
        let set: std::collections::BTreeSet<&Value> =
            self.rows.iter().flatten().flatten().collect();
        set.into_iter().cloned().collect()
    }
}

impl fmt::Display for Database {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, rel) in self.schema.relations().iter().enumerate() {
            writeln!(f, "{} {} {}", rel.name, rel.arity, rel.kind.keyword())?;
            for t in self.rows(i) {
                writeln!(f, "  {}", t.join(","))?;
            }
        }
        Ok(())
    }
}

/// `F_{Q,D}` with its tuple map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lineage {
    /// Positive DNF over all endogenous tuples of the database.
    pub function: BoolFunc,
    /// Canonical clause set of `function`.
    pub clauses: ClauseSet,
    /// `tuple_map[v]` is the tuple carrying variable `v`.
    pub tuple_map: Vec<TupleRef>,
}

impl Lineage {
    pub fn num_vars(&self) -> usize {
        self.tuple_map.len()
    }
}
