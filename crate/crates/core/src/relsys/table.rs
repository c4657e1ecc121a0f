use std::collections::BTreeSet;
use std::io::Read;

use crate::error::{Error, Result};
use crate::relsys::RelationalSystem;

/// Objects described by attributes whose values are finite sets of opaque tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InformationTable {
    objects: Vec<String>,
    attributes: Vec<String>,
    /// `cells[attr][obj]`
    cells: Vec<Vec<BTreeSet<String>>>,
}

impl InformationTable {
    /// `rows[obj][attr]` holds the value-set of each cell.
    pub fn new(objects: Vec<String>, attributes: Vec<String>, rows: Vec<Vec<BTreeSet<String>>>) -> Result<Self> {
        if rows.len() != objects.len() {
            return Err(Error::InvalidParameter(format!(
                "{} rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        let mut cells = vec![Vec::with_capacity(objects.len()); attributes.len()];
        for (o, row) in rows.into_iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(Error::Cell {
                    row: o + 1,
                    column: objects[o].clone(),
                    message: format!("expected {} cells, found {}", attributes.len(), row.len()),
                });
            }
            for (a, v) in row.into_iter().enumerate() {
                cells[a].push(v);
            }
        }
        Ok(InformationTable {
            objects,
            attributes,
            cells,
        })
    }

    /// CSV with a header row; first column is the object label, the rest are attributes.
    /// A cell holds `|`-separated tokens; an empty cell is the empty value-set.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        if header.is_empty() {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            });
        }
        let attributes: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut objects = Vec::new();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let mut it = rec.iter();
            let obj = it.next().unwrap_or_default().to_string();
            let row: Vec<BTreeSet<String>> = it
                .map(|cell| {
                    cell.split('|')
                        .map(str::trim)
                        .filter(|t| !t.is_empty())
                        .map(str::to_string)
                        .collect()
                })
                .collect();
            objects.push(obj);
            rows.push(row);
        }
        Self::new(objects, attributes, rows)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    /// `ν(a, x)`
    pub fn value(&self, attribute: usize, object: usize) -> &BTreeSet<String> {
        &self.cells[attribute][object]
    }

    fn attribute_id(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }
}

/// Relates `x` and `w` iff they carry equal value-sets on every attribute in `attrs`.
pub fn derive_pawl_relation<S: AsRef<str>>(table: &InformationTable, attrs: &[S]) -> Result<RelationalSystem> {
    let ids = attrs
        .iter()
        .map(|a| table.attribute_id(a.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let n = table.objects.len();
    let mut pairs = Vec::new();
    for x in 0..n {
        for w in 0..n {
            if ids.iter().all(|&a| table.value(a, x) == table.value(a, w)) {
                pairs.push((x, w));
            }
        }
    }
    RelationalSystem::from_ids(table.objects.clone(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(csv: &str) -> InformationTable {
        InformationTable::from_csv(csv.as_bytes()).unwrap()
    }

    #[test]
    fn identical_rows_related() {
        let t = table("obj,colour,size\no1,red|blue,big\no2,red|blue,big\n");
        let sys = derive_pawl_relation(&t, &["colour", "size"]).unwrap();
        assert!(sys.related(0, 1) && sys.related(1, 0));
    }

    #[test]
    fn empty_attribute_set_gives_total_relation() {
        let t = table("obj,colour\no1,red\no2,blue\no3,\n");
        let sys = derive_pawl_relation::<&str>(&t, &[]).unwrap();
        assert_eq!(sys.pair_count(), 9);
    }

    #[test]
    fn classes_from_rows() {
        let t = table("obj,a,b\no1,x,y\no2,x,y\no3,x,z\n");
        let sys = derive_pawl_relation(&t, &["a", "b"]).unwrap();
        let mut pairs: Vec<_> = sys.pairs().collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 0), (0, 1), (1, 0), (1, 1), (2, 2)]);
        let p = sys.classify();
        assert!(p.reflexive && p.symmetric && p.transitive);
    }

    #[test]
    fn unknown_attribute() {
        let t = table("obj,a\no1,x\n");
        assert_eq!(
            derive_pawl_relation(&t, &["q"]),
            Err(Error::UnknownAttribute("q".into()))
        );
    }

    #[test]
    fn empty_cell_is_empty_value_set() {
        let t = table("obj,a\no1,\no2,x\n");
        assert!(t.value(0, 0).is_empty());
        assert_eq!(t.value(0, 1).len(), 1);
    }
}
