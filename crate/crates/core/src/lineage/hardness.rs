use std::collections::{BTreeSet, HashSet};

use super::{
    hierarchy_witness, is_self_join_free, parse_query, Database, Query, RelationKind,
    RelationSchema, Schema, Term, Tuple, TupleRef, Value,
};
use crate::boolfunc::VarId;
use crate::error::{Error, Result};

/// `∃x∃y R(x) ∧ S(x,y) ∧ T(y)`.
pub fn rst_query() -> Query {
    parse_query("Q :- R(x), S(x,y), T(y)").expect("fixed query parses")
}

fn rst_schema() -> Schema {
    let rel = |name: &str, arity, kind| RelationSchema {
        name: name.into(),
        arity,
        kind,
    };
    Schema::new(vec![
        rel("R", 1, RelationKind::Endogenous),
        rel("S", 2, RelationKind::Exogenous),
        rel("T", 1, RelationKind::Endogenous),
    ])
    .expect("fixed schema is valid")
}

/// A database whose RST lineage is `⋁_{(i,j)∈E} X_i ∧ Y_j`: `R` holds the
/// distinct `i` in increasing order (variables `X`), `T` the distinct `j`
/// (variables `Y`, numbered after all `X`), and exogenous `S` holds `E`.
pub fn pp2dnf_instance(edges: &[(usize, usize)]) -> Result<(Database, Query)> {
    if edges.is_empty() {
        return Err(Error::input("empty edge set"));
    }
    let xs: BTreeSet<usize> = edges.iter().map(|e| e.0).collect();
    let ys: BTreeSet<usize> = edges.iter().map(|e| e.1).collect();
    let es: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let unary = |s: &BTreeSet<usize>| s.iter().map(|i| vec![i.to_string()]).collect();
    let rows = vec![
        unary(&xs),
        es.iter()
            .map(|(i, j)| vec![i.to_string(), j.to_string()])
            .collect(),
        unary(&ys),
    ];
    Ok((Database::new(rst_schema(), rows)?, rst_query()))
}

/// Which relations of an RST database play `R`, `S` and `T`.
fn rst_roles(db: &Database) -> Result<(usize, usize, usize)> {
    let rels = db.schema().relations();
    let unary: Vec<usize> = (0..rels.len()).filter(|&i| rels[i].arity == 1).collect();
    let binary: Vec<usize> = (0..rels.len()).filter(|&i| rels[i].arity == 2).collect();
    match (unary.as_slice(), binary.as_slice()) {
        (&[r, t], &[s])
            if rels.len() == 3
                && rels[r].kind.is_endogenous()
                && rels[t].kind.is_endogenous()
                && !rels[s].kind.is_endogenous() =>
        {
            Ok((r, s, t))
        }
        _ => Err(Error::input(
            "expected an RST database: two unary endogenous relations and one binary exogenous relation",
        )),
    }
}

/// A database for a non-hierarchical query with the lineage of the RST
/// query over a given RST database.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub database: Database,
    /// Variables `x`, `y` whose atom sets overlap without nesting.
    pub witness: (String, String),
    /// Atoms of the query that carry the tuples of `R` and `T`.
    pub r_atom: usize,
    pub t_atom: usize,
    /// `variable_map[v]` is the variable of the new database standing for
    /// variable `v` of the RST database.
    pub variable_map: Vec<VarId>,
}

/// Filler for variables other than the witness pair.
const FILLER: &str = "1";

/// Builds `D′` for a non-hierarchical self-join-free query `q`: one atom
/// with `x` but not `y` becomes endogenous and holds `R`, one with `y` but
/// not `x` holds `T`. Every other atom is exogenous; atoms with both
/// variables follow `S`, atoms with one copy `R` or `T`, and positions of
/// the remaining variables hold a fixed constant.
pub fn embed_nonhierarchical(q: &Query, rst: &Database) -> Result<Embedding> {
    if !is_self_join_free(q) {
        return Err(Error::input("query has a self-join"));
    }
    let Some((x, y)) = hierarchy_witness(q) else {
        return Err(Error::refusal(
            "query is hierarchical; only non-hierarchical queries embed the RST lineage",
        ));
    };
    let (ri, si, ti) = rst_roles(rst)?;
    let col = |i: usize| -> Vec<&Value> { rst.rows(i).iter().map(|t| &t[0]).collect() };
    let (r_vals, t_vals) = (col(ri), col(ti));
    let s_rows: Vec<(&Value, &Value)> = rst.rows(si).iter().map(|t| (&t[0], &t[1])).collect();

    let atoms = q.atoms();
    let find = |with: &str, without: &str| {
        atoms
            .iter()
            .position(|a| a.contains_var(with) && !a.contains_var(without))
            .expect("non-nested atom sets")
    };
    let (r_atom, t_atom) = (find(&x, &y), find(&y, &x));

    let mut relations = Vec::with_capacity(atoms.len());
    let mut rows = Vec::with_capacity(atoms.len());
    for (k, atom) in atoms.iter().enumerate() {
        let endo = k == r_atom || k == t_atom;
        relations.push(RelationSchema {
            name: atom.relation.clone(),
            arity: atom.args.len(),
            kind: if endo {
                RelationKind::Endogenous
            } else {
                RelationKind::Exogenous
            },
        });
        let row = |a: Option<&Value>, b: Option<&Value>| -> Tuple {
            atom.args
                .iter()
                .map(|t| match t {
                    Term::Const(c) => c.clone(),
                    Term::Var(v) if *v == x => a.expect("x bound").clone(),
                    Term::Var(v) if *v == y => b.expect("y bound").clone(),
                    Term::Var(_) => FILLER.to_string(),
                })
                .collect()
        };
        let candidates: Vec<Tuple> = match (atom.contains_var(&x), atom.contains_var(&y)) {
            (true, true) => s_rows.iter().map(|(a, b)| row(Some(a), Some(b))).collect(),
            (true, false) => r_vals.iter().map(|a| row(Some(a), None)).collect(),
            (false, true) => t_vals.iter().map(|b| row(None, Some(b))).collect(),
            (false, false) => vec![row(None, None)],
        };
        let mut seen = HashSet::new();
        rows.push(
            candidates
                .into_iter()
                .filter(|t| seen.insert(t.clone()))
                .collect(),
        );
    }
    let database = Database::new(Schema::new(relations)?, rows)?;
    let mut variable_map = vec![0; rst.num_vars()];
    for (rel, atom) in [(ri, r_atom), (ti, t_atom)] {
        for row in 0..rst.rows(rel).len() {
            let old = rst
                .var_of(TupleRef { relation: rel, row })
                .expect("endogenous");
            variable_map[old] = database
                .var_of(TupleRef {
                    relation: atom,
                    row,
                })
                .expect("endogenous");
        }
    }
    Ok(Embedding {
        database,
        witness: (x, y),
        r_atom,
        t_atom,
        variable_map,
    })
}

fn composite(a: &str, b: &str) -> Value {
    format!("({a},{b})")
}

/// From a database over `R(z1,x)`, `S(x,y)`, `T(z2,y)` to one over `R(x)`,
/// `S(x,y)`, `T(y)` with the same lineage: tuples of `R` and `T` become the
/// composite values `(a′,a)`, and `S` pairs composites whose components
/// joined in the stretched database. Variables keep their ids.
pub fn collapse_stretched_rst(stretched: &Database) -> Result<Database> {
    let rels = stretched.schema().relations();
    let ok = rels.len() == 3
        && rels[0].arity == 2
        && rels[0].kind.is_endogenous()
        && rels[1].arity == 2
        && !rels[1].kind.is_endogenous()
        && rels[2].arity == 2
        && rels[2].kind.is_endogenous();
    if !ok {
        return Err(Error::input(
            "expected a stretched RST database: R(z1,x) endogenous, S(x,y) exogenous, T(z2,y) endogenous",
        ));
    }
    let schema = Schema::new(
        rels.iter()
            .map(|r| RelationSchema {
                arity: if r.kind.is_endogenous() { 1 } else { 2 },
                ..r.clone()
            })
            .collect(),
    )?;
    let unary = |i: usize| -> Vec<Tuple> {
        stretched
            .rows(i)
            .iter()
            .map(|t| vec![composite(&t[0], &t[1])])
            .collect()
    };
    let s: HashSet<(&Value, &Value)> = stretched.rows(1).iter().map(|t| (&t[0], &t[1])).collect();
    let mut s_new = Vec::new();
    for r in stretched.rows(0) {
        for t in stretched.rows(2) {
            if s.contains(&(&r[1], &t[1])) {
                s_new.push(vec![composite(&r[0], &r[1]), composite(&t[0], &t[1])]);
            }
        }
    }
    Database::new(schema, vec![unary(0), s_new, unary(2)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfunc::ClauseSet;
    use crate::brute::{brute_count, Bounds};
    use crate::generate::rng;
    use crate::lineage::tests::rst_db;
    use crate::lineage::{build_lineage, stretch_database_expand};
    use proptest::prelude::*;
    use rand::Rng;

    /// `{X_i ∧ Y_j}` numbered as [`pp2dnf_instance`] numbers them.
    fn pp2dnf_clauses(edges: &[(usize, usize)]) -> ClauseSet {
        let xs: Vec<usize> = edges
            .iter()
            .map(|e| e.0)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ys: Vec<usize> = edges
            .iter()
            .map(|e| e.1)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        edges
            .iter()
            .map(|(i, j)| {
                let xi = xs.iter().position(|v| v == i).unwrap();
                let yj = ys.iter().position(|v| v == j).unwrap();
                vec![xi, xs.len() + yj]
            })
            .collect()
    }

    fn mapped(l: &ClauseSet, map: &[VarId]) -> ClauseSet {
        l.iter()
            .map(|c| {
                let mut c: Vec<VarId> = c.iter().map(|&v| map[v]).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    #[test]
    fn pp2dnf_examples() {
        let b = Bounds::default();
        let (db, q) = pp2dnf_instance(&[(1, 1)]).unwrap();
        assert_eq!(build_lineage(&q, &db).unwrap().clauses, [vec![0, 1]].into());

        let e = [(1, 1), (2, 2)];
        let (db, q) = pp2dnf_instance(&e).unwrap();
        let l = build_lineage(&q, &db).unwrap();
        assert_eq!(l.clauses, pp2dnf_clauses(&e));
        assert_eq!(brute_count(&l.function, &b).unwrap(), 7u32.into());

        let e = [(1, 1), (1, 2), (2, 1), (2, 2)];
        let (db, q) = pp2dnf_instance(&e).unwrap();
        let l = build_lineage(&q, &db).unwrap();
        assert_eq!(l.clauses.len(), 4);
        assert_eq!(l.clauses, pp2dnf_clauses(&e));
        assert!(pp2dnf_instance(&[]).is_err());
    }

    #[test]
    fn rst_embeds_into_itself() {
        let db = rst_db();
        let e = embed_nonhierarchical(&rst_query(), &db).unwrap();
        assert_eq!(e.witness, ("x".into(), "y".into()));
        assert_eq!((e.r_atom, e.t_atom), (0, 2));
        assert_eq!(e.variable_map, [0, 1, 2, 3]);
        for i in 0..3 {
            assert_eq!(e.database.rows(i), db.rows(i));
        }
    }

    #[test]
    fn embeds_into_wider_queries() {
        let (db, _) = pp2dnf_instance(&[(1, 1), (1, 2), (3, 2)]).unwrap();
        let want = build_lineage(&rst_query(), &db).unwrap().clauses;
        for text in [
            "R(x), S(x,y), T(y), U(x,y)",
            "A(y,w), B(x,y,'k'), C(x), D(w), E(u,v)",
            "S(x,y), R(x,u), T(v,y), V(u,v)",
        ] {
            let q = parse_query(text).unwrap();
            let e = embed_nonhierarchical(&q, &db).unwrap();
            let got = build_lineage(&q, &e.database).unwrap().clauses;
            assert_eq!(got, mapped(&want, &e.variable_map), "{text}");
        }
        let hier = parse_query("R(x), S(x,y)").unwrap();
        assert!(matches!(
            embed_nonhierarchical(&hier, &db),
            Err(Error::Refusal(_))
        ));
    }

    #[test]
    fn collapse_inverts_stretching_example() {
        let (db, q) = pp2dnf_instance(&[(1, 1), (2, 2)]).unwrap();
        let s = stretch_database_expand(&q, &db, &[2, 1, 1, 2]).unwrap();
        let c = collapse_stretched_rst(&s.database).unwrap();
        assert_eq!(c.rows(0)[1], ["(z!R!2,1)"]);
        assert_eq!(c.rows(1).len(), 2 + 2);
        assert_eq!(
            build_lineage(&q, &c).unwrap().clauses,
            build_lineage(&s.query, &s.database).unwrap().clauses
        );
    }

    fn random_edges(r: &mut impl Rng) -> Vec<(usize, usize)> {
        let k = r.gen_range(1..=10);
        (0..k)
            .map(|_| (r.gen_range(1..=6), r.gen_range(1..=6)))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pp2dnf_lineage_is_the_edge_set(seed in any::<u64>()) {
            let mut r = rng(seed);
            let e = random_edges(&mut r);
            let (db, q) = pp2dnf_instance(&e).unwrap();
            prop_assert_eq!(build_lineage(&q, &db).unwrap().clauses, pp2dnf_clauses(&e));
        }

        #[test]
        fn stretched_rst_collapses(seed in any::<u64>()) {
            let mut r = rng(seed);
            let e = random_edges(&mut r);
            let (db, q) = pp2dnf_instance(&e).unwrap();
            let arities: Vec<usize> = (0..db.num_vars()).map(|_| r.gen_range(0..=2)).collect();
            let s = stretch_database_expand(&q, &db, &arities).unwrap();
            let c = collapse_stretched_rst(&s.database).unwrap();
            prop_assert_eq!(
                build_lineage(&q, &c).unwrap().clauses,
                build_lineage(&s.query, &s.database).unwrap().clauses
            );
        }

        #[test]
        fn random_non_hierarchical_queries_embed(seed in any::<u64>()) {
            let mut r = rng(seed);
            let (_, q) = crate::lineage::random_query(&mut r, 5, 4);
            prop_assume!(!crate::lineage::is_hierarchical(&q));
            let (db, rst) = pp2dnf_instance(&random_edges(&mut r)).unwrap();
            let want = build_lineage(&rst, &db).unwrap().clauses;
            let e = embed_nonhierarchical(&q, &db).unwrap();
            let got = build_lineage(&q, &e.database).unwrap().clauses;
            prop_assert_eq!(got, mapped(&want, &e.variable_map));
        }
    }
}
