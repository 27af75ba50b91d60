//! Embedded data tables with provenance, validated on load.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::arith::{factorize, is_prime, is_squarefree_signed};
use crate::error::{Error, Result};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");
const Q8_TABLE: &str = include_str!("../data/q8.txt");

/// Expected number of rows in the biquadratic table.
pub const U_TABLE_ROWS: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ComputedInternally,
    PaperTable,
    PaperAssumedConjectural,
}

impl Provenance {
    pub fn is_conjectural(self) -> bool {
        self == Provenance::PaperAssumedConjectural
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassNumberKind {
    HP,
    HNPlus,
    HQuadratic,
    HBiquadratic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumberRecord {
    pub kind: ClassNumberKind,
    pub index: i64,
    pub value: Option<u64>,
    pub prime: Option<bool>,
    pub provenance: Provenance,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPlusRule {
    pub id: String,
    pub statement: String,
    pub provenance: Provenance,
    pub prime_power: bool,
    pub max_phi: u64,
    pub max_n: Option<u64>,
    pub exceptions: Vec<u64>,
}

impl HPlusRule {
    /// Whether the rule forces `h_n^+ = 1`.
    fn covers(&self, n: u64) -> Result<bool> {
        if n < 3 || self.exceptions.contains(&n) || self.max_n.is_some_and(|m| n > m) {
            return Ok(false);
        }
        let f = factorize(n)?;
        Ok(f.is_prime_power() == self.prime_power && f.euler_phi() <= self.max_phi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPlusEntry {
    pub n: u64,
    pub value: Option<u64>,
    pub prime: bool,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct URow {
    pub u: i64,
    pub h_f: u64,
    pub r_abs: Vec<u64>,
    pub r_rel: Vec<u64>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StickelbergerSets {
    pub p: u64,
    pub index_sets: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub h_plus_rules: Vec<HPlusRule>,
    pub h_plus_values: Vec<HPlusEntry>,
    pub h_plus_prime_claims: Vec<HPlusEntry>,
    pub biquadratic_base: i64,
    pub u_table: Vec<URow>,
    pub stickelberger_23: StickelbergerSets,
}

fn table_err(row: impl ToString, reason: impl Into<String>) -> Error {
    Error::Table { row: row.to_string(), reason: reason.into() }
}

impl Catalog {
    /// Parses and validates a catalog document.
    pub fn parse(text: &str) -> Result<Self> {
        let cat: Catalog = serde_json::from_str(text).map_err(|e| table_err("document", e.to_string()))?;
        cat.validate()?;
        Ok(cat)
    }

    pub fn validate(&self) -> Result<()> {
        for row in &self.u_table {
            let label = format!("u={}", row.u);
            if row.u.rem_euclid(3) != 2 {
                return Err(table_err(label, "u must be 2 mod 3"));
            }
            if !is_squarefree_signed(row.u)? || row.u == self.biquadratic_base || row.u == 1 {
                return Err(table_err(label, "u must be squarefree and differ from the base field"));
            }
            if !is_prime(row.h_f) {
                return Err(table_err(label, "h_F must be prime"));
            }
            if !row.r_abs.contains(&1) || !row.r_rel.contains(&1) {
                return Err(table_err(label, "R sets must contain 1"));
            }
        }
        if self.u_table.len() != U_TABLE_ROWS {
            return Err(table_err("u_table", format!("expected {U_TABLE_ROWS} rows, found {}", self.u_table.len())));
        }
        let st = &self.stickelberger_23;
        for (j, set) in st.index_sets.iter().enumerate() {
            let label = format!("I_{}", j + 1);
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != set.len() || set.iter().any(|&i| i == 0 || i >= st.p) {
                return Err(table_err(label, "indices must be distinct residues in 1..p-1"));
            }
        }
        for e in self.h_plus_values.iter().chain(&self.h_plus_prime_claims) {
            if let Some(v) = e.value {
                if is_prime(v) != e.prime {
                    return Err(table_err(format!("h_{}^+", e.n), "primality flag contradicts the value"));
                }
            }
        }
        Ok(())
    }

    /// `h_n^+` as far as the tables know it.
    pub fn h_plus(&self, n: u64) -> Result<Option<ClassNumberRecord>> {
        for rule in &self.h_plus_rules {
            if rule.covers(n)? {
                return Ok(Some(ClassNumberRecord {
                    kind: ClassNumberKind::HNPlus,
                    index: n as i64,
                    value: Some(1),
                    prime: Some(false),
                    provenance: rule.provenance,
                    source: format!("rule ({}): {}", rule.id, rule.statement),
                }));
            }
        }
        let entry = self.h_plus_values.iter().chain(&self.h_plus_prime_claims).find(|e| e.n == n);
        Ok(entry.map(|e| ClassNumberRecord {
            kind: ClassNumberKind::HNPlus,
            index: n as i64,
            value: e.value,
            prime: Some(e.prime),
            provenance: e.provenance,
            source: if e.value.is_some() {
                "tabulated value (conjectural)".into()
            } else {
                "asserted prime without a tabulated value (conjectural)".into()
            },
        }))
    }

    pub fn u_row(&self, u: i64) -> Option<&URow> {
        self.u_table.iter().find(|r| r.u == u)
    }

    /// Full export for `catalog dump`.
    pub fn dump(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("catalog serializes");
        v["q8_table"] = Value::from(Q8_TABLE);
        v
    }
}

/// The embedded catalog. Validation runs once; the embedded data is covered
/// by tests, so a failure here is a build defect.
pub fn embedded() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::parse(CATALOG_JSON).expect("embedded catalog is valid"))
}

pub fn q8_table_text() -> &'static str {
    Q8_TABLE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_loads() {
        let c = embedded();
        assert_eq!(c.u_table.len(), 63);
        assert_eq!(c.stickelberger_23.index_sets.len(), 11);
        assert_eq!(c.stickelberger_23.index_sets[0], c.stickelberger_23.index_sets[3]);
    }

    #[test]
    fn h_plus_lookup() {
        let c = embedded();
        let r = c.h_plus(23).unwrap().unwrap();
        assert_eq!(r.value, Some(1));
        assert_eq!(r.provenance, Provenance::PaperTable);
        assert!(r.source.starts_with("rule (i)"));
        // phi(67) = 66 is the edge of rule (i); phi(71) = 70 is outside
        assert!(c.h_plus(67).unwrap().is_some());
        assert!(c.h_plus(71).unwrap().is_none());
        assert_eq!(c.h_plus(136).unwrap(), None);
        assert_eq!(c.h_plus(84).unwrap().unwrap().value, Some(1));
        let r = c.h_plus(257).unwrap().unwrap();
        assert_eq!((r.value, r.provenance), (Some(3), Provenance::PaperAssumedConjectural));
        let r = c.h_plus(577).unwrap().unwrap();
        assert_eq!((r.value, r.prime), (None, Some(true)));
    }

    #[test]
    fn corrupted_rows_are_rejected() {
        let mut c = embedded().clone();
        c.u_table[5].u = 7;
        assert_eq!(c.validate().unwrap_err(), Error::Table { row: "u=7".into(), reason: "u must be 2 mod 3".into() });
        let mut c = embedded().clone();
        c.u_table[0].u = 20;
        assert!(matches!(c.validate(), Err(Error::Table { .. })));
        let mut c = embedded().clone();
        c.u_table.pop();
        assert!(c.validate().is_err());
        assert!(Catalog::parse("{").is_err());
    }
}
