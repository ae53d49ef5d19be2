use std::collections::{BTreeSet, HashMap};

use super::{Atom, Database, Lineage, Query, Term, TupleRef, Value};
use crate::boolfunc::{from_clause_set, BoolFunc, ClauseSet, Expr, VarId};
use crate::error::{Error, Result};

/// `F_{Q,D}` by enumerating the homomorphisms from the atoms of `q` into
/// `db`. Each homomorphism contributes the clause of the endogenous tuples it
/// hits; a homomorphism hitting only exogenous tuples makes the lineage `1`.
pub fn build_lineage(q: &Query, db: &Database) -> Result<Lineage> {
    q.check(db.schema())?;
    let order = join_order(q, db);
    let mut clauses = ClauseSet::new();
    let mut ctx = Join {
        q,
        db,
        order: &order,
        binding: HashMap::new(),
        hit: Vec::new(),
        clauses: &mut clauses,
    };
    ctx.extend(0);
    if clauses.contains(&Vec::new()) {
        clauses = BTreeSet::from([Vec::new()]);
    }
    let function = from_clause_set(db.num_vars(), &clauses)?;
    Ok(Lineage {
        function,
        clauses,
        tuple_map: db.endogenous_tuples().to_vec(),
    })
}

/// Atoms ordered so that each one shares as many variables as possible with
/// those before it, small relations first among equals.
fn join_order(q: &Query, db: &Database) -> Vec<usize> {
    let mut placed = Vec::with_capacity(q.size());
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    let mut left: Vec<usize> = (0..q.size()).collect();
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .map(|(pos, &i)| {
                let a = &q.atoms()[i];
                let free = a
                    .args
                    .iter()
                    .filter_map(Term::as_var)
                    .filter(|v| !bound.contains(v))
                    .count();
                let rows = db.rows_of(&a.relation).map_or(0, <[_]>::len);
                (pos, (free, rows))
            })
            .min_by_key(|(_, key)| *key)
            .expect("nonempty");
        let i = left.remove(pos);
        bound.extend(q.atoms()[i].args.iter().filter_map(Term::as_var));
        placed.push(i);
    }
    placed
}

struct Join<'a> {
    q: &'a Query,
    db: &'a Database,
    order: &'a [usize],
    binding: HashMap<&'a str, &'a Value>,
    hit: Vec<VarId>,
    clauses: &'a mut ClauseSet,
}

impl<'a> Join<'a> {
    fn extend(&mut self, depth: usize) {
        let Some(&i) = self.order.get(depth) else {
            let mut clause = self.hit.clone();
            clause.sort_unstable();
            clause.dedup();
            self.clauses.insert(clause);
            return;
        };
        let atom: &'a Atom = &self.q.atoms()[i];
        let db = self.db;
        let rel = db.schema().position(&atom.relation).expect("checked");
        for (row, t) in db.rows(rel).iter().enumerate() {
            let mut fresh: Vec<&'a str> = Vec::new();
            let ok = atom.args.iter().zip(t).all(|(term, value)| match term {
                Term::Const(c) => c == value,
                Term::Var(v) => match self.binding.get(v.as_str()) {
                    Some(b) => *b == value,
                    None => {
                        self.binding.insert(v.as_str(), value);
                        fresh.push(v.as_str());
                        true
                    }
                },
            });
            if ok {
                let var = db.var_of(TupleRef { relation: rel, row });
                self.hit.extend(var);
                self.extend(depth + 1);
                if var.is_some() {
                    self.hit.pop();
                }
            }
            for v in fresh {
                self.binding.remove(v);
            }
        }
    }
}

/// Largest number of ground instantiations [`recursive_lineage`] builds.
const RECURSIVE_LIMIT: usize = 1 << 20;

/// `F_{Q,D}` straight from the recursive rules: `F_{∃x Q} = ⋁_{a ∈ adom}
/// F_{Q[a/x]}`, `F_{Q1 ∧ Q2} = F_{Q1} ∧ F_{Q2}`, a ground atom is `v(t)`,
/// `1` or `0`. Exponential in the number of variables; a reference for
/// tests on small instances.
pub fn recursive_lineage(q: &Query, db: &Database) -> Result<BoolFunc> {
    q.check(db.schema())?;
    let vars = q.variables();
    let adom = db.active_domain();
    let work = u32::try_from(vars.len())
        .ok()
        .and_then(|k| adom.len().max(1).checked_pow(k));
    if work.map_or(true, |w| w > RECURSIVE_LIMIT) {
        return Err(Error::refusal(format!(
            "recursive lineage over {} variables and {} constants is too large",
            vars.len(),
            adom.len()
        )));
    }
    let index: Vec<HashMap<&[Value], usize>> = (0..db.schema().len())
        .map(|r| {
            db.rows(r)
                .iter()
                .enumerate()
                .map(|(i, t)| (t.as_slice(), i))
                .collect()
        })
        .collect();
    let mut binding = HashMap::new();
    let expr = recurse(q, db, &index, &vars, &adom, &mut binding);
    BoolFunc::new(expr, db.num_vars())
}

fn recurse<'a>(
    q: &Query,
    db: &Database,
    index: &[HashMap<&[Value], usize>],
    vars: &'a [String],
    adom: &'a [Value],
    binding: &mut HashMap<&'a str, &'a Value>,
) -> Expr {
    if let Some((x, rest)) = vars.split_first() {
        let mut branches = Vec::with_capacity(adom.len());
        for a in adom {
            binding.insert(x, a);
            branches.push(recurse(q, db, index, rest, adom, binding));
        }
        binding.remove(x.as_str());
        return Expr::or(branches);
    }
    let ground = q.atoms().iter().map(|atom| {
        let rel = db.schema().position(&atom.relation).expect("checked");
        let t: Vec<Value> = atom
            .args
            .iter()
            .map(|term| match term {
                Term::Const(c) => c.clone(),
                Term::Var(v) => binding[v.as_str()].clone(),
            })
            .collect();
        match index[rel].get(t.as_slice()) {
            None => Expr::Const(false),
            Some(&row) => match db.var_of(TupleRef { relation: rel, row }) {
                Some(v) => Expr::Var(v),
                None => Expr::Const(true),
            },
        }
    });
    Expr::and(ground.collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{brute_count, truth_table, Bounds};
    use crate::generate::rng;
    use crate::lineage::tests::{rel, rows, rst_db, two_unary_db};
    use crate::lineage::{parse_query, random_database, random_query, Schema};
    use proptest::prelude::*;

    fn clauses(spec: &[&[VarId]]) -> ClauseSet {
        spec.iter().map(|c| c.to_vec()).collect()
    }

    #[test]
    fn small_worked_queries() {
        let q = parse_query("R1(x), R2(x)").unwrap();
        let l = build_lineage(&q, &two_unary_db()).unwrap();
        assert_eq!(l.clauses, clauses(&[&[0, 2], &[1, 3]]));
        assert_eq!(
            brute_count(&l.function, &Bounds::default()).unwrap(),
            7u32.into()
        );

        let q = parse_query("Q :- R(x), S(x,y), T(y)").unwrap();
        let l = build_lineage(&q, &rst_db()).unwrap();
        assert_eq!(l.clauses, clauses(&[&[0, 2], &[1, 3]]));
        assert_eq!(
            l.tuple_map[2],
            TupleRef {
                relation: 2,
                row: 0
            }
        );
    }

    #[test]
    fn constants_and_degenerate_cases() {
        let schema = Schema::new(vec![rel("R", 1, true), rel("E", 2, false)]).unwrap();
        let db = Database::new(
            schema.clone(),
            vec![rows(&[&["1"], &["2"]]), rows(&[&["1", "2"]])],
        )
        .unwrap();
        let l = build_lineage(&parse_query("R(2)").unwrap(), &db).unwrap();
        assert_eq!(l.clauses, clauses(&[&[1]]));
        let l = build_lineage(&parse_query("E(x,y)").unwrap(), &db).unwrap();
        assert_eq!(l.function.expr(), &Expr::Const(true));
        assert_eq!(l.clauses, clauses(&[&[]]));
        let l = build_lineage(&parse_query("R(x), E(x,x)").unwrap(), &db).unwrap();
        assert_eq!(l.function.expr(), &Expr::Const(false));
        assert_eq!(l.num_vars(), 2);

        let empty = Database::new(schema, vec![rows(&[&["1"]]), vec![]]).unwrap();
        let l = build_lineage(&parse_query("R(x), E(x,y)").unwrap(), &empty).unwrap();
        assert_eq!(l.function.expr(), &Expr::Const(false));

        assert!(build_lineage(&parse_query("U(x)").unwrap(), &db).is_err());
        assert!(build_lineage(&parse_query("R(x,y)").unwrap(), &db).is_err());
    }

    #[test]
    fn self_joins_deduplicate_tuples() {
        let schema = Schema::new(vec![rel("R", 1, true)]).unwrap();
        let db = Database::new(schema, vec![rows(&[&["a"], &["b"]])]).unwrap();
        let l = build_lineage(&parse_query("R(x), R(y)").unwrap(), &db).unwrap();
        assert_eq!(l.clauses, clauses(&[&[0], &[0, 1], &[1]]));
    }

    #[test]
    fn recursive_matches_on_examples() {
        let q = parse_query("Q :- R(x), S(x,y), T(y)").unwrap();
        let db = rst_db();
        let b = Bounds::default();
        let rec = recursive_lineage(&q, &db).unwrap();
        let hom = build_lineage(&q, &db).unwrap().function;
        assert_eq!(
            truth_table(&rec, &b).unwrap(),
            truth_table(&hom, &b).unwrap()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn homomorphisms_match_recursive_rules(seed in any::<u64>()) {
            let mut r = rng(seed);
            let (schema, q) = random_query(&mut r, 3, 2);
            let db = random_database(&mut r, &schema, 3, 10);
            let b = Bounds::default();
            let rec = recursive_lineage(&q, &db).unwrap();
            let hom = build_lineage(&q, &db).unwrap();
            prop_assert_eq!(truth_table(&rec, &b).unwrap(), truth_table(&hom.function, &b).unwrap());
            for c in &hom.clauses {
                prop_assert!(c.len() <= q.size());
            }
        }
    }
}
