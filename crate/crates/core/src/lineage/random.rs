use std::collections::HashSet;

use rand::Rng;

use super::{
    is_hierarchical, Atom, Database, Query, RelationKind, RelationSchema, Schema, Term, Tuple,
};

const VAR_NAMES: [&str; 6] = ["x", "y", "u", "v", "w", "s"];

/// A random self-join-free query with `1..=max_atoms` atoms of arity 1–3
/// over at most `max_vars` variables, and a schema for it with at least one
/// endogenous relation. Arguments are occasionally the constants `0` or `1`.
pub fn random_query(rng: &mut impl Rng, max_atoms: usize, max_vars: usize) -> (Schema, Query) {
    let vars = &VAR_NAMES[..max_vars.clamp(1, VAR_NAMES.len())];
    let k = rng.gen_range(1..=max_atoms.max(1));
    let endo_forced = rng.gen_range(0..k);
    let mut relations = Vec::with_capacity(k);
    let mut atoms = Vec::with_capacity(k);
    for i in 0..k {
        let arity = rng.gen_range(1..=3);
        let args = (0..arity)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    Term::Const(rng.gen_range(0..2).to_string())
                } else {
                    Term::var(vars[rng.gen_range(0..vars.len())])
                }
            })
            .collect();
        let name = format!("R{}", i + 1);
        relations.push(RelationSchema {
            name: name.clone(),
            arity,
            kind: if i == endo_forced || rng.gen_bool(0.5) {
                RelationKind::Endogenous
            } else {
                RelationKind::Exogenous
            },
        });
        atoms.push(Atom::new(&name, args));
    }
    let schema = Schema::new(relations).expect("generated names are distinct");
    (schema, Query::new(atoms))
}

/// [`random_query`] conditioned on being hierarchical.
pub fn random_hierarchical_query(
    rng: &mut impl Rng,
    max_atoms: usize,
    max_vars: usize,
) -> (Schema, Query) {
    loop {
        let (s, q) = random_query(rng, max_atoms, max_vars);
        if is_hierarchical(&q) {
            return (s, q);
        }
    }
}

/// A random instance over the constants `0..domain`, with at most
/// `max_endogenous` endogenous tuples in total.
pub fn random_database(
    rng: &mut impl Rng,
    schema: &Schema,
    domain: usize,
    max_endogenous: usize,
) -> Database {
    let domain = domain.max(1);
    let endo = schema
        .relations()
        .iter()
        .filter(|r| r.kind.is_endogenous())
        .count();
    let share = if endo == 0 {
        0
    } else {
        (max_endogenous / endo).max(1)
    };
    let mut budget = max_endogenous;
    let mut rows = Vec::with_capacity(schema.len());
    for rel in schema.relations() {
        let space = u32::try_from(rel.arity)
            .ok()
            .and_then(|a| domain.checked_pow(a))
            .unwrap_or(usize::MAX);
        let cap = if rel.kind.is_endogenous() {
            share.min(budget)
        } else {
            2 * domain
        };
        let target = rng.gen_range(0..=cap.min(space));
        let mut seen = HashSet::new();
        let mut out: Vec<Tuple> = Vec::with_capacity(target);
        while out.len() < target {
            let t: Tuple = (0..rel.arity)
                .map(|_| rng.gen_range(0..domain).to_string())
                .collect();
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
        if rel.kind.is_endogenous() {
            budget -= out.len();
        }
        rows.push(out);
    }
    Database::new(schema.clone(), rows).expect("generated rows are distinct and well sized")
}
