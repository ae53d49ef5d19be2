use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Database, RelationKind, RelationSchema, Schema, Tuple};
use crate::error::{Error, Result};
use crate::ShapleyValues;

/// Reads `schema.txt`: one `name arity endo|exo` line per relation. Blank
/// lines and `#` comments are skipped.
pub fn parse_schema(text: &str) -> Result<Schema> {
    let mut relations = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [name, arity, kind] = fields[..] else {
            return Err(Error::parse(i + 1, "expected `name arity endo|exo`"));
        };
        let arity = arity
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("bad arity {arity:?}")))?;
        let kind = match kind {
            "endo" => RelationKind::Endogenous,
            "exo" => RelationKind::Exogenous,
            other => {
                return Err(Error::parse(
                    i + 1,
                    format!("kind must be endo or exo, found {other:?}"),
                ))
            }
        };
        relations.push(RelationSchema {
            name: name.to_string(),
            arity,
            kind,
        });
    }
    Schema::new(relations)
}

/// Reads a database directory: `schema.txt` and one header-less
/// `<name>.csv` per relation.
pub fn read_database_dir(dir: &Path) -> Result<Database> {
    let schema = parse_schema(&fs::read_to_string(dir.join("schema.txt"))?)?;
    let mut rows = Vec::with_capacity(schema.len());
    for rel in schema.relations() {
        let path = dir.join(format!("{}.csv", rel.name));
        if !path.exists() {
            return Err(Error::input(format!(
                "missing {} for relation {}",
                path.display(),
                rel.name
            )));
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(&path)?;
        let mut out: Vec<Tuple> = Vec::new();
        for record in reader.records() {
            let record = record?;
            out.push(record.iter().map(str::to_string).collect());
        }
        rows.push(out);
    }
    Database::new(schema, rows)
}

pub fn write_database_dir(db: &Database, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut schema = String::new();
    for rel in db.schema().relations() {
        schema.push_str(&format!(
            "{} {} {}\n",
            rel.name,
            rel.arity,
            rel.kind.keyword()
        ));
    }
    fs::write(dir.join("schema.txt"), schema)?;
    for (i, rel) in db.schema().relations().iter().enumerate() {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(dir.join(format!("{}.csv", rel.name)))?;
        for t in db.rows(i) {
            w.write_record(t)?;
        }
        w.flush()?;
    }
    Ok(())
}

/// `var_id,relation,row_index` with 1-based variable ids and 0-based rows.
pub fn write_tuple_map(db: &Database, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["var_id", "relation", "row_index"])?;
    for (v, t) in db.endogenous_tuples().iter().enumerate() {
        let name = &db.schema().relation(t.relation).name;
        w.write_record([(v + 1).to_string(), name.clone(), t.row.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `relation,row_index,numerator,denominator`, one line per endogenous tuple.
pub fn write_shapley_csv(db: &Database, values: &ShapleyValues, out: impl Write) -> Result<()> {
    if values.len() != db.num_vars() {
        return Err(Error::input(format!(
            "{} values for {} endogenous tuples",
            values.len(),
            db.num_vars()
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["relation", "row_index", "numerator", "denominator"])?;
    for (t, v) in db.endogenous_tuples().iter().zip(values.values()) {
        w.write_record([
            db.schema().relation(t.relation).name.clone(),
            t.row.to_string(),
            v.numer().to_string(),
            v.denom().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lineage::tests::rst_db;
    use crate::Rational;

    #[test]
    fn schema_text() {
        let s = parse_schema("# rst\nR 1 endo\n\nS 2 exo  # edges\nT 1 endo\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.get("S").unwrap().arity, 2);
        for bad in [
            "R 1",
            "R x endo",
            "R 1 maybe",
            "R 0 endo",
            "R 1 endo\nR 2 exo",
        ] {
            assert!(parse_schema(bad).is_err(), "{bad}");
        }
        assert!(matches!(
            parse_schema("R 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let schema = parse_schema("R 2 endo\nS 1 exo\n").unwrap();
        let db = Database::new(
            schema,
            vec![
                vec![
                    vec!["a,b".into(), "\"q\"".into()],
                    vec!["c".into(), "d".into()],
                ],
                vec![],
            ],
        )
        .unwrap();
        write_database_dir(&db, dir.path()).unwrap();
        assert_eq!(read_database_dir(dir.path()).unwrap(), db);
        fs::write(dir.path().join("S.csv"), "x,y\n").unwrap();
        assert!(matches!(
            read_database_dir(dir.path()),
            Err(Error::Input(_))
        ));
        fs::remove_file(dir.path().join("S.csv")).unwrap();
        assert!(matches!(
            read_database_dir(dir.path()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn sidecars() {
        let db = rst_db();
        let mut buf = Vec::new();
        write_tuple_map(&db, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "var_id,relation,row_index\n1,R,0\n2,R,1\n3,T,0\n4,T,1\n"
        );
        let v = ShapleyValues::new(vec![Rational::new(1.into(), 6.into()); 4]);
        let mut buf = Vec::new();
        write_shapley_csv(&db, &v, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(3), Some("T,0,1,6"));
    }
}
