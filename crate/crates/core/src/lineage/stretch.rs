use std::collections::HashSet;

use super::{Atom, Database, Query, RelationSchema, Schema, Term, Tuple, Value};
use crate::boolfunc::VariableMap;
use crate::error::{Error, Result};

/// Every endogenous relation gains a leading attribute.
pub fn stretch_schema(schema: &Schema) -> Schema {
    let relations = schema
        .relations()
        .iter()
        .map(|r| RelationSchema {
            arity: r.arity + r.kind.is_endogenous() as usize,
            ..r.clone()
        })
        .collect();
    Schema::new(relations).expect("stretching keeps names and arities valid")
}

/// `Q̃`: each endogenous atom `R(ā)` becomes `R(z_j, ā)` with a fresh
/// variable `z_j`, one per atom. Exogenous atoms are unchanged.
pub fn stretch_query(q: &Query, schema: &Schema) -> Result<Query> {
    q.check(schema)?;
    let used: HashSet<String> = q.variables().into_iter().collect();
    let mut counter = 0;
    let mut fresh = || loop {
        counter += 1;
        let name = format!("z{counter}");
        if !used.contains(&name) {
            return name;
        }
    };
    let atoms = q
        .atoms()
        .iter()
        .map(|a| {
            let rel = schema.get(&a.relation).expect("checked");
            if !rel.kind.is_endogenous() {
                return a.clone();
            }
            let mut args = Vec::with_capacity(a.args.len() + 1);
            args.push(Term::Var(fresh()));
            args.extend(a.args.iter().cloned());
            Atom::new(&a.relation, args)
        })
        .collect();
    Ok(Query::new(atoms))
}

/// A stretched query and database, with the fresh leading value of every
/// new endogenous tuple.
#[derive(Clone, Debug)]
pub struct StretchedArtifacts {
    pub query: Query,
    pub database: Database,
    /// `fresh_values[z]` is the leading value of the tuple carrying new
    /// variable `z`.
    pub fresh_values: Vec<Value>,
    /// Old variable `x` is replaced by the new variables `variable_map.group(x)`.
    pub variable_map: VariableMap,
}

/// A prefix no constant of `db` starts with.
fn fresh_prefix(db: &Database) -> String {
    let adom = db.active_domain();
    let mut prefix = String::from("z!");
    while adom.iter().any(|a| a.starts_with(&prefix)) {
        prefix.push('!');
    }
    prefix
}

/// Every endogenous tuple `t` becomes `(d, t)` for one shared fresh
/// constant `d`. The lineage of `Q̃` over the result is the lineage of `Q`
/// over `db`, variable for variable.
pub fn stretch_database_dummy(q: &Query, db: &Database) -> Result<StretchedArtifacts> {
    let dummy = format!("{}d", fresh_prefix(db));
    stretch(q, db, &vec![1; db.num_vars()], |_, _| dummy.clone())
}

/// The tuple carrying variable `x` becomes `arities[x]` tuples with fresh
/// leading values `z!<relation>!<counter>`; arity 0 deletes it. The new
/// variables are numbered as in [`VariableMap::from_arities`], so the
/// lineage of `Q̃` over the result is `F_{Q,D}[x := Z_1 ∨ … ∨ Z_ℓ]` after
/// distribution.
pub fn stretch_database_expand(
    q: &Query,
    db: &Database,
    arities: &[usize],
) -> Result<StretchedArtifacts> {
    if arities.len() != db.num_vars() {
        return Err(Error::input(format!(
            "{} arities for {} endogenous tuples",
            arities.len(),
            db.num_vars()
        )));
    }
    let prefix = fresh_prefix(db);
    let mut counters = vec![0usize; db.schema().len()];
    stretch(q, db, arities, |rel, name| {
        counters[rel] += 1;
        format!("{prefix}{name}!{}", counters[rel])
    })
}

fn stretch(
    q: &Query,
    db: &Database,
    arities: &[usize],
    mut fresh: impl FnMut(usize, &str) -> Value,
) -> Result<StretchedArtifacts> {
    let query = stretch_query(q, db.schema())?;
    let schema = stretch_schema(db.schema());
    let mut fresh_values = Vec::new();
    let mut rows: Vec<Vec<Tuple>> = Vec::with_capacity(schema.len());
    for (i, rel) in db.schema().relations().iter().enumerate() {
        if !rel.kind.is_endogenous() {
            rows.push(db.rows(i).to_vec());
            continue;
        }
        let mut out = Vec::new();
        for (row, t) in db.rows(i).iter().enumerate() {
            let x = db
                .var_of(super::TupleRef { relation: i, row })
                .expect("endogenous");
            for _ in 0..arities[x] {
                let z = fresh(i, &rel.name);
                let mut nt = Vec::with_capacity(t.len() + 1);
                nt.push(z.clone());
                nt.extend(t.iter().cloned());
                fresh_values.push(z);
                out.push(nt);
            }
        }
        rows.push(out);
    }
    let database = Database::new(schema, rows)?;
    Ok(StretchedArtifacts {
        query,
        database,
        fresh_values,
        variable_map: VariableMap::from_arities(arities),
    })
}
