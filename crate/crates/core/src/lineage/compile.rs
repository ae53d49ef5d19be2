use std::collections::{BTreeSet, HashMap};

use super::{
    build_lineage, hierarchy_witness, is_self_join_free, Database, Query, Term, TupleRef, Value,
};
use crate::brute::{brute_shapley_subsets, Bounds};
use crate::circuit::{
    propagate_constants, shapley_circuit, Circuit, CircuitBuilder, Determinism, GateId,
    KCountMethod,
};
use crate::error::{Error, Result};
use crate::ShapleyValues;

/// An atom after some variables were replaced by constants.
#[derive(Clone)]
struct Bound<'q> {
    relation: usize,
    args: Vec<Arg<'q>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Arg<'q> {
    Var(&'q str),
    Const(&'q str),
}

impl Bound<'_> {
    fn has_var(&self, v: &str) -> bool {
        self.args.contains(&Arg::Var(v))
    }

    fn vars(&self) -> impl Iterator<Item = &str> + '_ {
        self.args.iter().filter_map(|a| match a {
            Arg::Var(v) => Some(*v),
            Arg::Const(_) => None,
        })
    }
}

struct Compiler<'d> {
    db: &'d Database,
    index: Vec<HashMap<&'d [Value], usize>>,
    b: CircuitBuilder,
}

/// A deterministic and decomposable leaf-NNF circuit for the lineage of a
/// hierarchical self-join-free query, over all endogenous tuples of `db`.
///
/// Variable-disjoint subqueries are joined by decomposable ∧-gates. A root
/// variable `x`, present in every atom of a connected subquery, is branched
/// on: `F = F_{a1} ∨ (¬F_{a1} ∧ (F_{a2} ∨ (¬F_{a2} ∧ …)))` over its
/// candidate values. Negations are compiled alongside so that every
/// ¬-gate sits on a variable.
pub fn compile_hierarchical_lineage(q: &Query, db: &Database) -> Result<Circuit> {
    q.check(db.schema())?;
    if !is_self_join_free(q) {
        return Err(Error::refusal(
            "query has a self-join; hierarchical compilation needs a self-join-free query \
             (use brute force on the lineage)",
        ));
    }
    if let Some((x, y)) = hierarchy_witness(q) {
        return Err(Error::refusal(format!(
            "query is not hierarchical (at({x}) and at({y}) overlap without nesting); \
             use brute force on the lineage"
        )));
    }
    let atoms: Vec<Bound> = q
        .atoms()
        .iter()
        .map(|a| Bound {
            relation: db.schema().position(&a.relation).expect("checked"),
            args: a
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Arg::Var(v),
                    Term::Const(c) => Arg::Const(c),
                })
                .collect(),
        })
        .collect();
    let index = (0..db.schema().len())
        .map(|r| {
            db.rows(r)
                .iter()
                .enumerate()
                .map(|(i, t)| (t.as_slice(), i))
                .collect()
        })
        .collect();
    let mut c = Compiler {
        db,
        index,
        b: CircuitBuilder::new(),
    };
    let (pos, _) = c.compile(&atoms)?;
    let circuit = c.b.finish(pos, db.num_vars())?;
    Ok(propagate_constants(
        &circuit.with_determinism(Determinism::Certified),
    ))
}

impl<'d> Compiler<'d> {
    /// Gates for the subquery and for its negation.
    fn compile(&mut self, atoms: &[Bound]) -> Result<(GateId, GateId)> {
        let components = components(atoms);
        match components.len() {
            0 => Ok((self.b.constant(true), self.b.constant(false))),
            1 => self.component(&components[0]),
            _ => {
                let parts = components
                    .iter()
                    .map(|c| self.component(c))
                    .collect::<Result<Vec<_>>>()?;
                let pos = self.b.and(parts.iter().map(|p| p.0).collect());
                // ¬(C1 ∧ … ∧ Ck) = ¬C1 ∨ (C1 ∧ ¬(C2 ∧ … ∧ Ck))
                let (mut neg, rest) = {
                    let (last, rest) = parts.split_last().expect("two or more");
                    (last.1, rest)
                };
                for &(p, n) in rest.iter().rev() {
                    let tail = self.b.and(vec![p, neg]);
                    neg = self.b.or(vec![n, tail]);
                }
                Ok((pos, neg))
            }
        }
    }

    fn component(&mut self, atoms: &[Bound]) -> Result<(GateId, GateId)> {
        if let [atom] = atoms {
            if atom.vars().next().is_none() {
                return Ok(self.ground(atom));
            }
        }
        let root = atoms[0]
            .vars()
            .find(|v| atoms.iter().all(|a| a.has_var(v)))
            .ok_or_else(|| Error::internal("connected subquery without a root variable"))?;
        let values = self.candidates(atoms, root);
        let mut branches = Vec::with_capacity(values.len());
        for a in values {
            let bound: Vec<Bound> = atoms
                .iter()
                .map(|atom| Bound {
                    relation: atom.relation,
                    args: atom
                        .args
                        .iter()
                        .map(|&arg| {
                            if arg == Arg::Var(root) {
                                Arg::Const(a)
                            } else {
                                arg
                            }
                        })
                        .collect(),
                })
                .collect();
            branches.push(self.compile(&bound)?);
        }
        let neg = self.b.and(branches.iter().map(|p| p.1).collect());
        let pos = match branches.split_last() {
            None => self.b.constant(false),
            Some((&(last, _), rest)) => {
                let mut acc = last;
                for &(p, n) in rest.iter().rev() {
                    let tail = self.b.and(vec![n, acc]);
                    acc = self.b.or(vec![p, tail]);
                }
                acc
            }
        };
        Ok((pos, neg))
    }

    fn ground(&mut self, atom: &Bound) -> (GateId, GateId) {
        let key: Vec<Value> = atom
            .args
            .iter()
            .map(|a| match a {
                Arg::Const(c) => c.to_string(),
                Arg::Var(_) => unreachable!("ground atom"),
            })
            .collect();
        match self.index[atom.relation].get(key.as_slice()) {
            None => (self.b.constant(false), self.b.constant(true)),
            Some(&row) => match self.db.var_of(TupleRef {
                relation: atom.relation,
                row,
            }) {
                Some(v) => (self.b.var(v), self.b.neg_var(v)),
                None => (self.b.constant(true), self.b.constant(false)),
            },
        }
    }

    /// Values of `x` compatible with some row of every atom, sorted.
    fn candidates(&self, atoms: &[Bound], x: &str) -> BTreeSet<&'d str> {
        let mut out: Option<BTreeSet<&'d str>> = None;
        for atom in atoms {
            let mut here = BTreeSet::new();
            for t in self.db.rows(atom.relation) {
                let mut value: Option<&'d str> = None;
                let ok = atom.args.iter().zip(t).all(|(arg, v)| match arg {
                    Arg::Const(c) => *c == v,
                    Arg::Var(w) if *w == x => *value.get_or_insert(v) == v,
                    Arg::Var(_) => true,
                });
                if ok {
                    here.insert(value.expect("root occurs in every atom"));
                }
            }
            out = Some(match out {
                None => here,
                Some(prev) => prev.intersection(&here).copied().collect(),
            });
        }
        out.unwrap_or_default()
    }
}

/// Groups atoms connected through shared variables; variable-free atoms are
/// singletons. Order follows the first atom of each group.
fn components<'q>(atoms: &[Bound<'q>]) -> Vec<Vec<Bound<'q>>> {
    let n = atoms.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if atoms[i].vars().any(|v| atoms[j].has_var(v)) {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<Bound>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, atom) in atoms.iter().enumerate() {
        let r = find(&mut group, i);
        let k = *slot.entry(r).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[k].push(atom.clone());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleShapleyMethod {
    /// Hierarchical compilation followed by the circuit pipeline.
    Circuit,
    /// Enumeration over the lineage.
    BruteForce,
}

/// Shapley values of the endogenous tuples of a database.
#[derive(Clone, Debug)]
pub struct TupleShapley {
    /// Indexed by lineage variable; see [`Database::tuple_of`].
    pub values: ShapleyValues,
    pub method: TupleShapleyMethod,
    pub warnings: Vec<String>,
}

/// Why `q` falls outside the tractable side of the dichotomy, or `None` for
/// a hierarchical self-join-free query.
pub fn hard_branch_reason(q: &Query) -> Option<String> {
    if !is_self_join_free(q) {
        return Some("query has a self-join, outside the self-join-free dichotomy".to_string());
    }
    hierarchy_witness(q).map(|(x, y)| {
        format!(
            "query is not hierarchical (variables {x} and {y}); \
             Shapley values for non-hierarchical self-join-free queries are #P-hard"
        )
    })
}

/// Dispatches on the dichotomy: hierarchical queries go through the compiled
/// circuit, other queries are enumerated within `bounds` and refused beyond.
pub fn shapley_tuples(q: &Query, db: &Database, bounds: &Bounds) -> Result<TupleShapley> {
    q.check(db.schema())?;
    let Some(reason) = hard_branch_reason(q) else {
        let c = compile_hierarchical_lineage(q, db)?;
        return Ok(TupleShapley {
            values: shapley_circuit(&c, KCountMethod::Reduction)?,
            method: TupleShapleyMethod::Circuit,
            warnings: Vec::new(),
        });
    };
    let lineage = build_lineage(q, db)?;
    let n = lineage.num_vars();
    if n > bounds.max_count_vars {
        return Err(Error::refusal(format!(
            "{reason}; {n} lineage variables exceed the enumeration bound {} (--max-vars)",
            bounds.max_count_vars
        )));
    }
    Ok(TupleShapley {
        values: brute_shapley_subsets(&lineage.function, bounds)?,
        method: TupleShapleyMethod::BruteForce,
        warnings: vec![format!(
            "{reason}; computed by enumeration over {n} variables"
        )],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::{brute_count, brute_kcounts, brute_shapley_permutations};
    use crate::circuit::{
        check_decomposable, check_deterministic_exhaustive, kcounts_circuit, model_count_dd,
    };
    use crate::generate::rng;
    use crate::lineage::tests::{rel, rows, rst_db, two_unary_db};
    use crate::lineage::{parse_query, random_database, random_hierarchical_query, Schema};
    use crate::Rational;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    fn assert_dd(c: &Circuit) {
        assert!(c.is_leaf_nnf());
        assert!(check_decomposable(c).is_empty());
        assert_eq!(check_deterministic_exhaustive(c, 20), Determinism::Verified);
    }

    #[test]
    fn two_unary_example() {
        let q = parse_query("R1(x), R2(x)").unwrap();
        let db = two_unary_db();
        let c = compile_hierarchical_lineage(&q, &db).unwrap();
        assert_dd(&c);
        assert_eq!(c.num_vars(), 4);
        assert_eq!(model_count_dd(&c).unwrap(), 7u32.into());
        let s = shapley_tuples(&q, &db, &Bounds::default()).unwrap();
        assert_eq!(s.method, TupleShapleyMethod::Circuit);
        assert!(s.warnings.is_empty());
        // symmetric, and the four values sum to F[1] - F[0] = 1
        assert_eq!(s.values.values(), &vec![r(1, 4); 4][..]);
    }

    #[test]
    fn rst_goes_to_enumeration() {
        let q = parse_query("Q :- R(x), S(x,y), T(y)").unwrap();
        let db = rst_db();
        assert!(matches!(
            compile_hierarchical_lineage(&q, &db),
            Err(Error::Refusal(_))
        ));
        let s = shapley_tuples(&q, &db, &Bounds::default()).unwrap();
        assert_eq!(s.method, TupleShapleyMethod::BruteForce);
        assert!(s.warnings[0].contains("not hierarchical"));
        assert_eq!(s.values.values(), &vec![r(1, 4); 4][..]);
        let err = shapley_tuples(&q, &db, &Bounds::with_max_vars(3)).unwrap_err();
        assert!(matches!(err, Error::Refusal(m) if m.contains("#P-hard")));
    }

    #[test]
    fn single_atom_is_a_chain() {
        let schema = Schema::new(vec![rel("R", 1, true)]).unwrap();
        let db = Database::new(schema, vec![rows(&[&["a"], &["b"], &["c"]])]).unwrap();
        let c = compile_hierarchical_lineage(&parse_query("R(x)").unwrap(), &db).unwrap();
        assert_dd(&c);
        // X1 ∨ (¬X1 ∧ (X2 ∨ (¬X2 ∧ X3)))
        assert_eq!(c.size(), 3 + 2 + 2 + 2);
        assert_eq!(model_count_dd(&c).unwrap(), 7u32.into());
    }

    #[test]
    fn empty_lineage_gives_zeros() {
        let schema = Schema::new(vec![rel("R", 1, true), rel("S", 1, true)]).unwrap();
        let db = Database::new(schema, vec![rows(&[&["a"], &["b"]]), vec![]]).unwrap();
        let q = parse_query("R(x), S(x)").unwrap();
        let s = shapley_tuples(&q, &db, &Bounds::default()).unwrap();
        assert_eq!(s.values.values(), &vec![r(0, 1); 2][..]);
        let none = Database::empty(db.schema().clone());
        assert!(shapley_tuples(&q, &none, &Bounds::default())
            .unwrap()
            .values
            .is_empty());
    }

    #[test]
    fn self_join_is_enumerated_with_a_warning() {
        let schema = Schema::new(vec![rel("R", 1, true)]).unwrap();
        let db = Database::new(schema, vec![rows(&[&["a"], &["b"]])]).unwrap();
        let q = parse_query("R(x), R(y)").unwrap();
        let s = shapley_tuples(&q, &db, &Bounds::default()).unwrap();
        assert_eq!(s.method, TupleShapleyMethod::BruteForce);
        assert!(s.warnings[0].contains("self-join"));
        assert_eq!(s.values.values(), &[r(1, 2), r(1, 2)]);
    }

    #[test]
    fn components_and_constants() {
        let schema = Schema::new(vec![
            rel("R", 2, true),
            rel("S", 1, false),
            rel("T", 1, true),
            rel("U", 1, true),
        ])
        .unwrap();
        let db = Database::new(
            schema,
            vec![
                rows(&[&["1", "a"], &["1", "b"], &["2", "a"]]),
                rows(&[&["1"]]),
                rows(&[&["a"], &["c"]]),
                rows(&[&["u"]]),
            ],
        )
        .unwrap();
        let q = parse_query("R(x,y), S(x), T(z), U('u')").unwrap();
        let c = compile_hierarchical_lineage(&q, &db).unwrap();
        assert_dd(&c);
        let f = build_lineage(&q, &db).unwrap().function;
        let b = Bounds::default();
        assert_eq!(model_count_dd(&c).unwrap(), brute_count(&f, &b).unwrap());
        for m in 0..1u64 << c.num_vars() {
            assert_eq!(c.eval_mask(m), f.expr().eval_mask(m));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn compiled_lineage_matches_enumeration(seed in any::<u64>()) {
            let mut g = rng(seed);
            let (schema, q) = random_hierarchical_query(&mut g, 4, 3);
            let db = random_database(&mut g, &schema, 3, 12);
            let c = compile_hierarchical_lineage(&q, &db).unwrap();
            let f = build_lineage(&q, &db).unwrap().function;
            let b = Bounds::default();
            prop_assert!(c.is_leaf_nnf());
            prop_assert!(check_decomposable(&c).is_empty());
            prop_assert_eq!(check_deterministic_exhaustive(&c, 20), Determinism::Verified);
            prop_assert_eq!(model_count_dd(&c).unwrap(), brute_count(&f, &b).unwrap());
            prop_assert_eq!(
                kcounts_circuit(&c, KCountMethod::Polynomial).unwrap(),
                brute_kcounts(&f, &b).unwrap()
            );
            if f.num_vars() <= 8 {
                let s = shapley_tuples(&q, &db, &b).unwrap();
                prop_assert_eq!(s.values, brute_shapley_permutations(&f, &b).unwrap());
            }
        }
    }
}
