//! Best-known objective values, read from `name,cost,optimal_flag` CSV.

use std::collections::BTreeMap;
use std::path::Path;

use super::IoError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BksEntry {
    pub cost: f64,
    /// Whether the value is a proven optimum.
    pub optimal: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BksTable {
    entries: BTreeMap<String, BksEntry>,
}

impl BksTable {
    pub fn load(path: &Path) -> Result<Self, IoError> {
        let f = std::fs::File::open(path).map_err(|e| IoError::file(path, e))?;
        Self::from_reader(f)
    }

    pub fn from_reader(r: impl std::io::Read) -> Result<Self, IoError> {
        let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
        let headers = rd.headers().map_err(|e| IoError::Bks(e.to_string()))?.clone();
        let want = ["name", "cost", "optimal_flag"];
        if headers.len() != 3 || headers.iter().zip(want).any(|(h, w)| h != w) {
            return Err(IoError::Bks(format!("header must be `{}`", want.join(","))));
        }
        let mut table = BksTable::default();
        for rec in rd.records() {
            let rec = rec.map_err(|e| IoError::Bks(e.to_string()))?;
            let row = rec.position().map_or(0, |p| p.line());
            let bad = |msg: String| IoError::Bks(format!("row {row}: {msg}"));
            let cost: f64 = rec[1].parse().map_err(|_| bad(format!("invalid cost `{}`", &rec[1])))?;
            if !(cost > 0.0 && cost.is_finite()) {
                return Err(bad(format!("cost must be positive, found {cost}")));
            }
            let optimal = match rec[2].to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => true,
                "false" | "0" | "no" | "" => false,
                other => return Err(bad(format!("invalid optimal_flag `{other}`"))),
            };
            if table
                .entries
                .insert(rec[0].to_string(), BksEntry { cost, optimal })
                .is_some()
            {
                return Err(bad(format!("duplicate instance `{}`", &rec[0])));
            }
        }
        Ok(table)
    }

    pub fn get(&self, name: &str) -> Option<BksEntry> {
        self.entries.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, BksEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_rows() {
        let t = BksTable::from_reader("name,cost,optimal_flag\np01,576.87,true\npr02, 1296.25 ,false\n".as_bytes())
            .unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(
            t.get("p01"),
            Some(BksEntry {
                cost: 576.87,
                optimal: true
            })
        );
        assert!(!t.get("pr02").unwrap().optimal);
        assert_eq!(t.get("p03"), None);
    }

    #[test]
    fn rejects_nonpositive_cost() {
        let e = BksTable::from_reader("name,cost,optimal_flag\np01,0,true\n".as_bytes()).unwrap_err();
        assert!(e.to_string().contains("positive"), "{e}");
    }

    #[test]
    fn shipped_tables_load() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/bks");
        for f in ["c97", "c97t", "c01", "c01r", "l14"] {
            let t = BksTable::load(&dir.join(format!("{f}.csv"))).unwrap();
            assert!(!t.is_empty());
        }
    }
}
