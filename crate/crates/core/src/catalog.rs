//! Published pairs bundled as fixtures, and the regression harness that re-checks them.
//!
//! The data file is line oriented, whitespace separated, with `#` comments:
//!
//! ```text
//! <table> <n> <a_hex> <b_hex> <optimal|z-optimal> [exhaustive]
//! DEMERIT <n> <g1_hex> <g2_hex> <psc> <adf_g1> <adf_g2> <cdf>
//! ```
//!
//! The same format is accepted for user-supplied pair lists.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::classify::{check_end_parity, classify, Category};
use crate::demerit::psc;
use crate::equivalence::canonical;
use crate::seqcore::SequencePair;

/// The bundled catalog text.
pub const BUNDLED: &str = include_str!("../data/catalog.txt");

/// Allowed distance between a recomputed demerit value and the printed one.
pub const DEMERIT_TOLERANCE: f64 = 5e-5;

/// Largest out-of-zone magnitude among the published Z-optimal pairs.
pub const Z_OPTIMAL_MAX_OUT_OF_ZONE: u32 = 6;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub table: String,
    /// 1-based position within its table.
    pub row: usize,
    pub line: usize,
    pub n: usize,
    pub a_hex: String,
    pub b_hex: String,
    pub expected: Category,
    pub exhaustive: bool,
}

impl CatalogEntry {
    pub fn pair(&self) -> Result<SequencePair, crate::seqcore::SeqError> {
        SequencePair::from_hex(&self.a_hex, &self.b_hex, self.n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemeritEntry {
    pub line: usize,
    pub n: usize,
    pub g1_hex: String,
    pub g2_hex: String,
    pub psc: f64,
    pub adf1: f64,
    pub adf2: f64,
    pub cdf: f64,
}

impl DemeritEntry {
    pub fn pair(&self) -> Result<SequencePair, crate::seqcore::SeqError> {
        SequencePair::from_hex(&self.g1_hex, &self.g2_hex, self.n)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub demerits: Vec<DemeritEntry>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut cat = Catalog::default();
        let mut rows: BTreeMap<String, usize> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let bad = |msg: String| CatalogError::Malformed { line, msg };
            let f: Vec<&str> = content.split_whitespace().collect();
            let n: usize = f
                .get(1)
                .ok_or_else(|| bad("missing length".into()))?
                .parse()
                .map_err(|_| bad(format!("bad length {:?}", f[1])))?;
            if f[0] == "DEMERIT" {
                if f.len() != 8 {
                    return Err(bad(format!("demerit record needs 8 fields, got {}", f.len())));
                }
                let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("bad number {s:?}")));
                let entry = DemeritEntry {
                    line,
                    n,
                    g1_hex: f[2].to_string(),
                    g2_hex: f[3].to_string(),
                    psc: num(f[4])?,
                    adf1: num(f[5])?,
                    adf2: num(f[6])?,
                    cdf: num(f[7])?,
                };
                entry.pair().map_err(|e| bad(e.to_string()))?;
                cat.demerits.push(entry);
                continue;
            }
            if !(5..=6).contains(&f.len()) {
                return Err(bad(format!("pair record needs 5 or 6 fields, got {}", f.len())));
            }
            let expected: Category = f[4].parse().map_err(bad)?;
            let exhaustive = match f.get(5) {
                None => false,
                Some(&"exhaustive") => true,
                Some(other) => return Err(bad(format!("unknown flag {other:?}"))),
            };
            let row = rows.entry(f[0].to_string()).or_default();
            *row += 1;
            let entry = CatalogEntry {
                table: f[0].to_string(),
                row: *row,
                line,
                n,
                a_hex: f[2].to_string(),
                b_hex: f[3].to_string(),
                expected,
                exhaustive,
            };
            entry.pair().map_err(|e| bad(e.to_string()))?;
            cat.entries.push(entry);
        }
        Ok(cat)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    /// Table labels in order of first appearance.
    pub fn tables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.entries {
            if !out.contains(&e.table.as_str()) {
                out.push(&e.table);
            }
        }
        out
    }

    pub fn table(&self, name: &str) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.table == name).collect()
    }

    /// Canonical classes listed for length `n`.
    pub fn classes_for_length(&self, n: usize) -> Vec<SequencePair> {
        let mut out: Vec<SequencePair> =
            self.entries.iter().filter(|e| e.n == n).filter_map(|e| e.pair().ok()).map(|p| canonical(&p)).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// The bundled catalog.
pub fn load_catalog() -> Catalog {
    Catalog::parse(BUNDLED).expect("bundled catalog parses")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub location: String,
    pub problems: Vec<String>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.problems.join("; "))
    }
}

#[derive(Debug, Clone, Default)]
pub struct TableTally {
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Default)]
pub struct CatalogReport {
    /// Per-table pass counts in catalog order; demerit rows under `DEMERIT`.
    pub tallies: Vec<(String, TableTally)>,
    pub mismatches: Vec<Mismatch>,
}

impl CatalogReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn tally(&mut self, table: &str, ok: bool) {
        if let Some((_, t)) = self.tallies.iter_mut().find(|(name, _)| name == table) {
            t.total += 1;
            t.passed += ok as usize;
        } else {
            self.tallies.push((table.to_string(), TableTally { passed: ok as usize, total: 1 }));
        }
    }
}

fn check_entry(e: &CatalogEntry, seen: &mut BTreeMap<(String, SequencePair), usize>) -> Vec<String> {
    let pair = match e.pair() {
        Ok(p) => p,
        Err(err) => return vec![format!("decode failed: {err}")],
    };
    let mut problems = Vec::new();
    let c = classify(&pair);
    if c.category != e.expected {
        problems.push(format!(
            "expected {}, classified {} (Z = {}, max out-of-zone = {})",
            e.expected, c.category, c.zcz_width, c.max_out_of_zone
        ));
    }
    if e.expected == Category::ZOptimal && c.max_out_of_zone > Z_OPTIMAL_MAX_OUT_OF_ZONE {
        problems.push(format!("max out-of-zone {} exceeds {}", c.max_out_of_zone, Z_OPTIMAL_MAX_OUT_OF_ZONE));
    }
    if !check_end_parity(&pair) {
        problems.push("end parity condition fails".to_string());
    }
    let key = (e.table.clone(), canonical(&pair));
    if let Some(first) = seen.get(&key) {
        problems.push(format!("equivalent to row {first} of table {}", e.table));
    } else {
        seen.insert(key, e.row);
    }
    problems
}

fn check_demerit(d: &DemeritEntry) -> Vec<String> {
    let pair = match d.pair() {
        Ok(p) => p,
        Err(err) => return vec![format!("decode failed: {err}")],
    };
    let mut problems = Vec::new();
    let r = psc(&pair);
    for (name, got, printed) in
        [("PSC", r.psc, d.psc), ("ADF(g1)", r.adf_a, d.adf1), ("ADF(g2)", r.adf_b, d.adf2), ("CDF", r.cdf, d.cdf)]
    {
        if (got - printed).abs() > DEMERIT_TOLERANCE {
            problems.push(format!("{name} recomputed {got:.6}, printed {printed}"));
        }
    }
    let c = classify(&pair);
    if c.category == Category::SubOptimal {
        problems.push(format!("not Z-optimal (Z = {})", c.zcz_width));
    }
    problems
}

/// Re-checks every record: classification, the out-of-zone ceiling for Z-optimal lists,
/// end parity, pairwise inequivalence within a table and demerit values.
pub fn verify_catalog(cat: &Catalog) -> CatalogReport {
    let mut report = CatalogReport::default();
    let mut seen = BTreeMap::new();
    for e in &cat.entries {
        let problems = check_entry(e, &mut seen);
        report.tally(&e.table, problems.is_empty());
        if !problems.is_empty() {
            report.mismatches.push(Mismatch {
                location: format!("table {} row {} (line {}, n = {})", e.table, e.row, e.line, e.n),
                problems,
            });
        }
    }
    for d in &cat.demerits {
        let problems = check_demerit(d);
        report.tally("DEMERIT", problems.is_empty());
        if !problems.is_empty() {
            report.mismatches.push(Mismatch { location: format!("demerit row n = {} (line {})", d.n, d.line), problems });
        }
    }
    report
}
