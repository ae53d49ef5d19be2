use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;

use boolshap::boolfunc::{parse_formula, to_text};
use boolshap::brute::{
    brute_count, brute_kcounts, brute_shapley_permutations, brute_shapley_subsets, Bounds,
};
use boolshap::circuit::{
    kcounts_circuit, model_count_dd, parse_nnf, validate, CircuitOracle, Determinism, KCountMethod,
    DEFAULT_DETERMINISM_BOUND,
};
use boolshap::generate::rng;
use boolshap::lineage::{
    build_lineage, compile_hierarchical_lineage, hard_branch_reason, hierarchy_witness,
    is_self_join_free, parse_query, pp2dnf_instance, read_database_dir, shapley_tuples,
    stretch_database_dummy, stretch_database_expand, write_database_dir, write_shapley_csv,
    write_tuple_map, Database, Lineage, Query, StretchedArtifacts,
};
use boolshap::reductions::{
    count_from_shapley_oracle, kcounts_from_count_oracle, kcounts_from_count_oracle_and,
    shapley_from_kcount_oracle, CallCounter, EnumerationOracle,
};
use boolshap::scalar::format_rational;
use boolshap::{BoolFunc, Circuit, Error, KCounts, Result, ShapleyValues};

use crate::report::RunReport;
use crate::{Cli, Kind, Verb};

fn usage(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

struct LineageInput {
    query: Query,
    db: Database,
    lineage: Lineage,
}

impl LineageInput {
    fn hierarchical(&self) -> bool {
        hard_branch_reason(&self.query).is_none()
    }
}

enum Instance {
    Formula(BoolFunc),
    Circuit(Circuit),
    Lineage(LineageInput),
}

struct Ctx<'a> {
    cli: &'a Cli,
    bounds: Bounds,
    report: RunReport,
}

pub fn run(cli: &Cli) -> Result<()> {
    let mut bounds = Bounds::default();
    if let Some(m) = cli.max_vars {
        bounds.max_count_vars = m;
    }
    let verb = match &cli.verb {
        Verb::Count { .. } => "count",
        Verb::Kcount { .. } => "kcount",
        Verb::Shapley { .. } => "shapley",
        Verb::Stretch { .. } => "stretch",
        Verb::Check { .. } => "check",
        Verb::Lineage { .. } => "lineage",
        Verb::Pp2dnf { .. } => "pp2dnf",
        Verb::Compare { .. } => "compare",
    };
    let mut ctx = Ctx {
        cli,
        bounds,
        report: RunReport::new(verb),
    };
    ctx.report.method = cli.method.clone();
    let outcome = match &cli.verb {
        Verb::Count { input } => ctx.count(input),
        Verb::Kcount { input } => ctx.kcount(input),
        Verb::Shapley { input } => ctx.shapley(input),
        Verb::Stretch { input, mode } => ctx.stretch(input, mode),
        Verb::Check { input } => ctx.check(input.as_deref()),
        Verb::Lineage { input } => ctx.lineage(input),
        Verb::Pp2dnf { input } => ctx.pp2dnf(input.as_deref()),
        Verb::Compare { input } => ctx.compare(input),
    };
    for w in &ctx.report.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(path) = &cli.report {
        fs::write(path, ctx.report.to_json())?;
    }
    outcome
}

fn infer_kind(input: &Path) -> Kind {
    if input.is_dir() {
        Kind::Lineage
    } else if input.extension().is_some_and(|e| e == "nnf") {
        Kind::Circuit
    } else {
        Kind::Formula
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn join<T: Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl Ctx<'_> {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.cli.out {
            Some(p) => fs::write(p, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn out_dir(&self) -> Result<&Path> {
        self.cli
            .out
            .as_deref()
            .ok_or_else(|| usage("this verb writes a directory; pass --out <dir>"))
    }

    fn read_query(&mut self) -> Result<Query> {
        let spec = self
            .cli
            .query
            .as_deref()
            .ok_or_else(|| usage("lineage input needs --query <file or text>"))?;
        let text = if Path::new(spec).is_file() {
            fs::read_to_string(spec)?
        } else {
            spec.to_string()
        };
        self.report.digest_bytes("query", text.trim().as_bytes());
        parse_query(&text)
    }

    fn load_database(&mut self, dir: &Path) -> Result<Database> {
        self.report.digest_path(dir)?;
        read_database_dir(dir)
    }

    fn load(&mut self, input: &Path) -> Result<Instance> {
        let kind = self.cli.kind.unwrap_or_else(|| infer_kind(input));
        self.report.kind = Some(kind.name().to_string());
        let inst = match kind {
            Kind::Formula => {
                self.report.digest_path(input)?;
                Instance::Formula(parse_formula(&fs::read_to_string(input)?)?)
            }
            Kind::Circuit => {
                self.report.digest_path(input)?;
                let mut c = parse_nnf(&fs::read_to_string(input)?)?;
                let v = validate(&c, DEFAULT_DETERMINISM_BOUND);
                self.report
                    .provenance
                    .insert("decomposable".into(), v.decomposable.to_string());
                self.report
                    .provenance
                    .insert("determinism".into(), v.deterministic.label().into());
                if v.deterministic == Determinism::Assumed {
                    self.report
                        .provenance
                        .insert("assumed-deterministic".into(), "true".into());
                }
                self.report.warnings.extend(v.notes.iter().cloned());
                c.set_determinism(v.deterministic);
                Instance::Circuit(c)
            }
            Kind::Lineage => {
                let db = self.load_database(input)?;
                let query = self.read_query()?;
                let lineage = build_lineage(&query, &db)?;
                Instance::Lineage(LineageInput { query, db, lineage })
            }
        };
        self.report.num_vars = Some(match &inst {
            Instance::Formula(f) => f.num_vars(),
            Instance::Circuit(c) => c.num_vars(),
            Instance::Lineage(l) => l.db.num_vars(),
        });
        Ok(inst)
    }

    fn method<'m>(&'m self, default: &'m str, allowed: &[&str]) -> Result<&'m str> {
        let m = self.cli.method.as_deref().unwrap_or(default);
        if allowed.contains(&m) {
            Ok(m)
        } else {
            Err(usage(format!(
                "unknown method {m:?} for {}; expected one of {}",
                self.report.verb,
                allowed.join("|")
            )))
        }
    }

    /// Warns about enumeration on the hard side of the dichotomy, refusing
    /// above the enumeration bound.
    fn hard_branch(&mut self, l: &LineageInput) -> Result<()> {
        let reason = hard_branch_reason(&l.query).expect("query is on the hard branch");
        let n = l.lineage.num_vars();
        if n > self.bounds.max_count_vars {
            return Err(Error::Refusal(format!(
                "{reason}; {n} lineage variables exceed the enumeration bound {} (--max-vars)",
                self.bounds.max_count_vars
            )));
        }
        self.report.warnings.push(format!(
            "{reason}; computed by enumeration over {n} variables"
        ));
        Ok(())
    }

    fn count(&mut self, input: &Path) -> Result<()> {
        let n = match self.load(input)? {
            Instance::Formula(f) => brute_count(&f, &self.bounds)?,
            Instance::Circuit(c) => model_count_dd(&c)?,
            Instance::Lineage(l) if l.hierarchical() => {
                model_count_dd(&compile_hierarchical_lineage(&l.query, &l.db)?)?
            }
            Instance::Lineage(l) => {
                self.hard_branch(&l)?;
                brute_count(&l.lineage.function, &self.bounds)?
            }
        };
        self.report.set("count", n.to_string());
        self.emit(&format!("{n}\n"))
    }

    fn kcounts_formula(&mut self, f: &BoolFunc, method: &str) -> Result<KCounts> {
        match method {
            "paper" => {
                let mut o = CallCounter::new(EnumerationOracle::new(self.bounds));
                let k = kcounts_from_count_oracle(f, &mut o)?;
                self.report.oracle_calls.insert("count".into(), o.calls);
                Ok(k)
            }
            "brute" => brute_kcounts(f, &self.bounds),
            _ => Err(usage(
                "--method direct needs a circuit (or a hierarchical query)",
            )),
        }
    }

    fn kcounts_of_circuit(&mut self, c: &Circuit, method: &str) -> Result<KCounts> {
        match method {
            "paper" => {
                let mut o = CallCounter::new(CircuitOracle::new(KCountMethod::Reduction));
                let k = kcounts_from_count_oracle(c, &mut o)?;
                self.report.oracle_calls.insert("count".into(), o.calls);
                Ok(k)
            }
            "direct" => kcounts_circuit(c, KCountMethod::Polynomial),
            _ => brute_kcounts(&c.to_boolfunc()?, &self.bounds),
        }
    }

    fn kcount(&mut self, input: &Path) -> Result<()> {
        let method = self
            .method("paper", &["paper", "direct", "brute"])?
            .to_string();
        let k = match self.load(input)? {
            Instance::Formula(f) => self.kcounts_formula(&f, &method)?,
            Instance::Circuit(c) => self.kcounts_of_circuit(&c, &method)?,
            Instance::Lineage(l) if l.hierarchical() => {
                let c = compile_hierarchical_lineage(&l.query, &l.db)?;
                self.kcounts_of_circuit(&c, &method)?
            }
            Instance::Lineage(l) => {
                if method == "direct" {
                    return Err(Error::Refusal(
                        "--method direct needs a hierarchical self-join-free query".into(),
                    ));
                }
                self.hard_branch(&l)?;
                self.kcounts_formula(&l.lineage.function, &method)?
            }
        };
        self.report.set("kcounts", join(k.as_slice()));
        self.emit(&format!("{k}\n"))
    }

    fn shapley_csv(values: &ShapleyValues) -> String {
        let mut s = String::from("variable,value\n");
        for (i, v) in values.values().iter().enumerate() {
            s.push_str(&format!("x{},{}\n", i + 1, format_rational(v)));
        }
        s
    }

    fn record_shapley(&mut self, values: &ShapleyValues) {
        let v: Vec<String> = values.values().iter().map(format_rational).collect();
        self.report.set("shapley", v);
    }

    fn shapley(&mut self, input: &Path) -> Result<()> {
        let method = self
            .method("reduction", &["reduction", "brute"])?
            .to_string();
        let text = match self.load(input)? {
            Instance::Formula(f) => {
                let v = if method == "brute" {
                    brute_shapley_subsets(&f, &self.bounds)?
                } else {
                    let mut o = CallCounter::new(EnumerationOracle::new(self.bounds));
                    let v = shapley_from_kcount_oracle(&f, &mut o)?;
                    self.report.oracle_calls.insert("kcount".into(), o.calls);
                    v
                };
                self.record_shapley(&v);
                Self::shapley_csv(&v)
            }
            Instance::Circuit(c) => {
                let v = if method == "brute" {
                    brute_shapley_subsets(&c.to_boolfunc()?, &self.bounds)?
                } else {
                    let mut o = CallCounter::new(CircuitOracle::default());
                    let v = shapley_from_kcount_oracle(&c, &mut o)?;
                    self.report.oracle_calls.insert("kcount".into(), o.calls);
                    v
                };
                self.record_shapley(&v);
                Self::shapley_csv(&v)
            }
            Instance::Lineage(l) => {
                let v = if method == "brute" {
                    brute_shapley_subsets(&l.lineage.function, &self.bounds)?
                } else {
                    let t = shapley_tuples(&l.query, &l.db, &self.bounds)?;
                    self.report.warnings.extend(t.warnings);
                    self.report
                        .provenance
                        .insert("branch".into(), format!("{:?}", t.method).to_lowercase());
                    t.values
                };
                self.record_shapley(&v);
                let mut buf = Vec::new();
                write_shapley_csv(&l.db, &v, &mut buf)?;
                String::from_utf8(buf).expect("csv output is utf-8")
            }
        };
        self.emit(&text)
    }

    fn stretch(&mut self, input: &Path, mode: &str) -> Result<()> {
        let out = self.out_dir()?.to_path_buf();
        let db = self.load_database(input)?;
        let query = self.read_query()?;
        let s: StretchedArtifacts = match mode.split_once(':') {
            None if mode == "dummy" => stretch_database_dummy(&query, &db)?,
            Some(("expand", list)) => {
                let arities = list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| usage(format!("bad arity {s:?} in --mode")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                stretch_database_expand(&query, &db, &arities)?
            }
            _ => return Err(usage("--mode must be dummy or expand:<a1,a2,…>")),
        };
        write_database_dir(&s.database, &out)?;
        fs::write(out.join("query.txt"), format!("{}\n", s.query))?;
        let mut w = String::from("var_id,source_var_id,fresh_value\n");
        for (z, value) in s.fresh_values.iter().enumerate() {
            let src = s.variable_map.source(z);
            w.push_str(&format!("{},{},{}\n", z + 1, src + 1, value));
        }
        fs::write(out.join("variables.csv"), w)?;
        self.report.set("query", s.query.to_string());
        self.report.set("num_vars", s.database.num_vars());
        println!("{}", s.query);
        Ok(())
    }

    fn check(&mut self, input: Option<&Path>) -> Result<()> {
        let kind = match (self.cli.kind, input) {
            (Some(k), _) => k,
            (None, Some(p)) => infer_kind(p),
            (None, None) => Kind::Lineage,
        };
        let mut lines = Vec::new();
        match kind {
            Kind::Circuit => {
                let path = input.ok_or_else(|| usage("check --kind circuit needs an input"))?;
                let Instance::Circuit(c) = self.load(path)? else {
                    unreachable!("kind is circuit")
                };
                let v = validate(&c, DEFAULT_DETERMINISM_BOUND);
                lines.push(format!("gates: {}", c.size()));
                lines.push(format!("variables: {}", c.num_vars()));
                lines.push(format!("decomposable: {}", yes(v.decomposable)));
                if !v.violations.is_empty() {
                    lines.push(format!("violations: {}", join(&v.violations)));
                }
                lines.push(format!("deterministic: {}", v.deterministic.label()));
                if let Determinism::Refuted { gate, witness } = &v.deterministic {
                    let w: Vec<String> = witness.iter().map(|x| format!("x{}", x + 1)).collect();
                    lines.push(format!("witness: gate {gate} under {{{}}}", w.join(",")));
                }
                lines.push(format!("leaf-nnf: {}", yes(v.leaf_nnf)));
                self.report.set("dd", v.is_dd());
            }
            Kind::Lineage => {
                self.report.kind = Some("query".into());
                let q = self.read_query()?;
                let sjf = is_self_join_free(&q);
                let witness = hierarchy_witness(&q);
                lines.push(format!("query: {q}"));
                lines.push(format!("atoms: {}", q.size()));
                lines.push(format!("self-join-free: {}", yes(sjf)));
                match &witness {
                    None => lines.push("hierarchical: yes".into()),
                    Some((x, y)) => lines.push(format!("hierarchical: no (witness {x}, {y})")),
                }
                let branch = match (sjf, &witness) {
                    (false, _) => "self-join (outside the dichotomy; enumeration only)",
                    (true, None) => "tractable (polynomial time via compiled circuit)",
                    (true, Some(_)) => "hard (#P-hard; enumeration only)",
                };
                lines.push(format!("branch: {branch}"));
                self.report.set("self_join_free", sjf);
                self.report.set("hierarchical", witness.is_none());
                if let Some(input) = input {
                    let db = self.load_database(input)?;
                    q.check(db.schema())?;
                    lines.push(format!("endogenous tuples: {}", db.num_vars()));
                }
            }
            Kind::Formula => return Err(usage("check applies to queries and circuits")),
        }
        let mut text = lines.join("\n");
        text.push('\n');
        self.emit(&text)
    }

    fn lineage(&mut self, input: &Path) -> Result<()> {
        self.report.kind = Some("lineage".into());
        let db = self.load_database(input)?;
        let query = self.read_query()?;
        let l = build_lineage(&query, &db)?;
        self.report.num_vars = Some(l.num_vars());
        self.report.set("clauses", l.clauses.len());
        let text = to_text(&l.function);
        match &self.cli.out {
            Some(p) => {
                fs::write(p, &text)?;
                let mut side = p.as_os_str().to_owned();
                side.push(".tuples.csv");
                write_tuple_map(&db, fs::File::create(PathBuf::from(side))?)?;
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    fn pp2dnf(&mut self, input: Option<&Path>) -> Result<()> {
        let out = self.out_dir()?.to_path_buf();
        let edges = match (input, self.cli.seed) {
            (Some(p), _) => {
                self.report.digest_path(p)?;
                parse_edges(&fs::read_to_string(p)?)?
            }
            (None, Some(seed)) => {
                let mut r = rng(seed);
                let k = r.gen_range(1..=12);
                (0..k)
                    .map(|_| (r.gen_range(1..=6), r.gen_range(1..=6)))
                    .collect()
            }
            (None, None) => return Err(usage("pp2dnf needs an edge file or --seed")),
        };
        let (db, q) = pp2dnf_instance(&edges)?;
        write_database_dir(&db, &out)?;
        fs::write(out.join("query.txt"), format!("{q}\n"))?;
        self.report.set("edges", edges.len());
        self.report.num_vars = Some(db.num_vars());
        println!("{q}");
        Ok(())
    }

    fn compare(&mut self, input: &Path) -> Result<()> {
        let inst = self.load(input)?;
        let mut cmp = Comparison::default();
        let timings = self.cli.timings;
        match &inst {
            Instance::Formula(f) => self.compare_formula(f, &mut cmp)?,
            Instance::Circuit(c) => self.compare_circuit(c, &mut cmp, true)?,
            Instance::Lineage(l) => {
                if l.hierarchical() {
                    let t = Instant::now();
                    let c = compile_hierarchical_lineage(&l.query, &l.db)?;
                    self.report.timing(timings, "compile", ms(t));
                    self.compare_circuit(&c, &mut cmp, false)?;
                    let t = Instant::now();
                    let s = shapley_tuples(&l.query, &l.db, &self.bounds)?;
                    self.report.timing(timings, "shapley_tuples", ms(t));
                    cmp.shapley.push(("shapley_tuples".into(), s.values));
                } else {
                    self.hard_branch(l)?;
                }
                self.compare_formula(&l.lineage.function, &mut cmp)?;
            }
        }
        let ok = cmp.finish(&mut self.report);
        self.report.agreement = Some(ok);
        self.emit(&self.report.to_json())?;
        if ok {
            Ok(())
        } else {
            Err(Error::OracleInconsistency(format!(
                "methods disagree: {}",
                self.report.warnings.join("; ")
            )))
        }
    }

    fn timed<T>(&mut self, key: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let t = Instant::now();
        let v = f(self)?;
        let enabled = self.cli.timings;
        self.report.timing(enabled, key, ms(t));
        Ok(v)
    }

    fn compare_formula(&mut self, f: &BoolFunc, cmp: &mut Comparison) -> Result<()> {
        let b = self.bounds;
        let n = f.num_vars();
        let count = self.timed("brute_count", |_| brute_count(f, &b))?;
        cmp.count.push(("brute".into(), count));
        let k = self.timed("brute_kcounts", |_| brute_kcounts(f, &b))?;
        cmp.kcounts.push(("brute".into(), k));
        let k = self.timed("kcounts_paper", |s| {
            let mut o = CallCounter::new(EnumerationOracle::new(b));
            let k = kcounts_from_count_oracle(f, &mut o)?;
            s.report
                .oracle_calls
                .insert("formula.kcounts.count".into(), o.calls);
            Ok(k)
        })?;
        cmp.count.push(("kcounts_paper_total".into(), k.total()));
        cmp.kcounts.push(("paper".into(), k));
        let k = self.timed("kcounts_paper_and", |s| {
            let mut o = CallCounter::new(EnumerationOracle::new(b));
            let k = kcounts_from_count_oracle_and(f, &mut o)?;
            s.report
                .oracle_calls
                .insert("formula.kcounts_and.count".into(), o.calls);
            Ok(k)
        })?;
        cmp.kcounts.push(("paper_and".into(), k));
        let c = self.timed("count_from_shapley", |s| {
            let mut o = CallCounter::new(EnumerationOracle::new(b));
            let c = count_from_shapley_oracle(f, &mut o)?;
            s.report
                .oracle_calls
                .insert("formula.count.shapley".into(), o.calls);
            Ok(c)
        })?;
        cmp.count.push(("from_shapley".into(), c));
        let v = self.timed("shapley_reduction", |s| {
            let mut o = CallCounter::new(EnumerationOracle::new(b));
            let v = shapley_from_kcount_oracle(f, &mut o)?;
            s.report
                .oracle_calls
                .insert("formula.shapley.kcount".into(), o.calls);
            Ok(v)
        })?;
        cmp.efficiency(f, &v);
        cmp.shapley.push(("reduction".into(), v));
        let v = self.timed("shapley_subsets", |_| brute_shapley_subsets(f, &b))?;
        cmp.shapley.push(("brute_subsets".into(), v));
        if n <= b.max_permutation_vars {
            let v = self.timed("shapley_permutations", |_| {
                brute_shapley_permutations(f, &b)
            })?;
            cmp.shapley.push(("brute_permutations".into(), v));
        }
        Ok(())
    }

    fn compare_circuit(&mut self, c: &Circuit, cmp: &mut Comparison, brute: bool) -> Result<()> {
        let count = self.timed("model_count_dd", |_| model_count_dd(c))?;
        cmp.count.push(("circuit".into(), count));
        for (name, m) in [
            ("circuit_paper", KCountMethod::Reduction),
            ("circuit_direct", KCountMethod::Polynomial),
        ] {
            let k = self.timed(name, |s| {
                let mut o = CallCounter::new(CircuitOracle::new(m));
                let k = if m == KCountMethod::Reduction {
                    let k = kcounts_from_count_oracle(c, &mut o)?;
                    s.report
                        .oracle_calls
                        .insert("circuit.kcounts.count".into(), o.calls);
                    k
                } else {
                    kcounts_circuit(c, m)?
                };
                Ok(k)
            })?;
            cmp.kcounts.push((name.into(), k));
        }
        let v = self.timed("circuit_shapley", |s| {
            let mut o = CallCounter::new(CircuitOracle::default());
            let v = shapley_from_kcount_oracle(c, &mut o)?;
            s.report
                .oracle_calls
                .insert("circuit.shapley.kcount".into(), o.calls);
            Ok(v)
        })?;
        cmp.shapley.push(("circuit".into(), v));
        if !brute {
            return Ok(());
        }
        if c.num_vars() <= self.bounds.max_count_vars {
            let f = c.to_boolfunc()?;
            self.compare_formula(&f, cmp)?;
        } else {
            self.report.warnings.push(format!(
                "{} variables exceed the enumeration bound; brute-force methods skipped",
                c.num_vars()
            ));
        }
        Ok(())
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `i j` or `i,j` per line; `#` starts a comment.
fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Option<Vec<usize>> = nums.iter().map(|s| s.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[a, b]) => edges.push((a, b)),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "expected two indices".into(),
                })
            }
        }
    }
    Ok(edges)
}

/// Results of several methods for the same quantities.
#[derive(Default)]
struct Comparison {
    count: Vec<(String, boolshap::Count)>,
    kcounts: Vec<(String, KCounts)>,
    shapley: Vec<(String, ShapleyValues)>,
    efficiency_ok: Option<bool>,
}

impl Comparison {
    fn efficiency(&mut self, f: &BoolFunc, v: &ShapleyValues) {
        let want = i64::from(f.eval_all_ones()) - i64::from(f.eval_all_zeros());
        let ok = v.sum() == boolshap::Rational::from_integer(want.into());
        self.efficiency_ok = Some(self.efficiency_ok.unwrap_or(true) && ok);
    }

    fn finish(self, report: &mut RunReport) -> bool {
        let mut ok = true;
        ok &= section(report, "count", &self.count, |c| c.to_string());
        ok &= section(report, "kcounts", &self.kcounts, |k| join(k.as_slice()));
        ok &= section(report, "shapley", &self.shapley, |v| {
            v.values()
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(",")
        });
        if let Some(e) = self.efficiency_ok {
            report.set("efficiency", e);
            if !e {
                report.warnings.push("efficiency identity violated".into());
                ok = false;
            }
        }
        ok
    }
}

fn section<T: PartialEq>(
    report: &mut RunReport,
    key: &str,
    values: &[(String, T)],
    show: impl Fn(&T) -> String,
) -> bool {
    let Some((_, first)) = values.first() else {
        return true;
    };
    let agree = values.iter().all(|(_, v)| v == first);
    let by_method: BTreeMap<&str, String> =
        values.iter().map(|(m, v)| (m.as_str(), show(v))).collect();
    report.set(key, &by_method);
    if !agree {
        report
            .warnings
            .push(format!("{key} differs across methods"));
    }
    agree
}
