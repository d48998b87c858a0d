//! Published reference values, embedded at compile time.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const RAW: &str = include_str!("../../fixtures/published_tables.json");

/// Table identifiers in presentation order.
pub const TABLE_IDS: [&str; 8] = ["1", "2", "3", "4", "5", "5-3d", "6", "7"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub k: u32,
    pub degree: usize,
    pub values: BTreeMap<String, f64>,
}

/// A printed value known to be wrong, with the value it should have.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correction {
    pub k: u32,
    pub column: String,
    pub printed: f64,
    pub expected: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableFixture {
    pub title: String,
    pub kind: String,
    pub dimension: usize,
    pub lambda1: f64,
    #[serde(default)]
    pub angles: Option<String>,
    #[serde(default)]
    pub grid: Option<usize>,
    pub columns: Vec<String>,
    pub tolerance: BTreeMap<String, f64>,
    pub rows: Vec<FixtureRow>,
    #[serde(default)]
    pub corrections: Vec<Correction>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl TableFixture {
    pub fn row(&self, k: u32) -> Option<&FixtureRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    pub fn correction(&self, k: u32, column: &str) -> Option<&Correction> {
        self.corrections.iter().find(|c| c.k == k && c.column == column)
    }

    pub fn tolerance(&self, column: &str) -> f64 {
        self.tolerance.get(column).copied().unwrap_or(0.01)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixtures {
    pub version: u32,
    pub tables: BTreeMap<String, TableFixture>,
}

/// All published tables.
pub fn published() -> &'static Fixtures {
    static CELL: OnceLock<Fixtures> = OnceLock::new();
    CELL.get_or_init(|| serde_json::from_str(RAW).expect("embedded fixture is valid JSON"))
}

/// One published table by identifier ("1" … "7", "5-3d").
pub fn table(id: &str) -> Result<&'static TableFixture> {
    published()
        .tables
        .get(&id.to_ascii_lowercase())
        .ok_or_else(|| Error::UnknownTable(format!("'{id}' (known: {})", TABLE_IDS.join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_is_complete() {
        for id in TABLE_IDS {
            let t = table(id).unwrap();
            assert_eq!(t.rows.len(), 3, "{id}");
            for r in &t.rows {
                for c in &t.columns {
                    assert!(r.values.contains_key(c), "{id} k={} missing {c}", r.k);
                    assert!(t.tolerance.contains_key(c), "{id} no tolerance for {c}");
                }
            }
        }
        assert!(table("0").is_err());
        assert!(table("8").is_err());
        assert_eq!(table("2").unwrap().correction(2, "lambda0").unwrap().expected, 0.0976);
    }
}
