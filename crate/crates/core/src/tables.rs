//! Closed-form tables of `-E8` configurations and their boundaries.
//!
//! * Table 1: parametrized solutions `(a, b, c)(k, ℓ, ±)` of the seven
//!   families.
//! * Table 3: family-(1) solutions with `a ≤ 6` as sixteen progressions in `i`.
//! * Table 2: the Brieskorn spheres bounded by those configurations.
//!
//! Each table exists in a printed and a corrected edition. The printed one
//! reproduces the published closed forms, typos included; the corrected one
//! fixes the entries that fail the family equation or the boundary pipeline.

use std::collections::HashMap;
use std::fmt::{self, Display};
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::recognize_negative_e8;
use crate::moves::{normalize_to_star, MoveError};
use crate::search::{solve_family, DiophantineFamily, FamilySolution, SearchError, Table1Provenance};
use crate::seifert::{brieskorn_from_seifert, is_minimal, read_seifert};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Edition {
    Printed,
    #[default]
    Corrected,
}

impl FromStr for Edition {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "printed" => Ok(Edition::Printed),
            "corrected" => Ok(Edition::Corrected),
            other => Err(format!("unknown edition `{other}` (printed|corrected)")),
        }
    }
}

impl Display for Edition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Edition::Printed => "printed",
            Edition::Corrected => "corrected",
        })
    }
}

/// One Table 1 row. `a = a[0]k + a[1]ℓ + a[2]s`, likewise `b`, and
/// `c = c[0]k² + c[1]kℓ + c[2]ℓ² + s(c[3]k + c[4]ℓ) + c[5]` with `s = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub family: u8,
    pub a: [i64; 3],
    pub b: [i64; 3],
    pub c: [i64; 6],
}

impl Table1Row {
    pub fn eval(&self, k: i64, l: i64, s: i64) -> (i64, i64, i64) {
        let lin = |v: [i64; 3]| v[0] * k + v[1] * l + v[2] * s;
        let c = self.c;
        (lin(self.a), lin(self.b), c[0] * k * k + c[1] * k * l + c[2] * l * l + s * (c[3] * k + c[4] * l) + c[5])
    }
}

const fn t1(family: u8, a: [i64; 3], b: [i64; 3], c: [i64; 6]) -> Table1Row {
    Table1Row { family, a, b, c }
}

const TABLE1_PRINTED: [Table1Row; 13] = [
    t1(1, [3, -2, 2], [-2, 3, -2], [3, -4, 3, 4, -4, 2]),
    t1(2, [4, -1, 2], [-3, 2, -2], [6, -3, 1, 6, -2, 2]),
    t1(3, [4, -3, 2], [-3, 4, -2], [6, -9, 6, 6, -6, 2]),
    t1(4, [5, -2, 2], [-4, 3, -2], [10, -8, 3, 8, -4, 2]),
    t1(5, [6, -1, 2], [-5, 2, -2], [15, -5, 1, 10, -2, 2]),
    t1(6, [12, -4, 3], [-10, 6, -3], [60, -40, 12, 30, -12, 4]),
    t1(6, [12, -4, 5], [-10, 6, -5], [60, -40, 12, 50, -20, 11]),
    t1(6, [12, -4, 1], [-10, 6, 0], [60, -40, 12, 10, 0, 1]),
    t1(6, [12, -4, 3], [-10, 6, -2], [60, -40, 12, 30, -8, 4]),
    t1(7, [14, -2, 3], [-12, 4, -3], [84, -24, 4, 36, -6, 4]),
    t1(7, [14, -2, 5], [-12, 4, -5], [84, -24, 4, 60, -10, 11]),
    t1(7, [14, -2, 2], [-12, 4, -1], [84, -24, 4, 24, -12, 2]),
    t1(7, [14, -2, 4], [-12, 4, -3], [84, -24, 4, 48, -6, 7]),
];

/// Row 12's linear part of `c` is `±2(12k - ℓ)`, not `±12(2k - ℓ)`.
pub fn table1_rows(edition: Edition) -> Vec<Table1Row> {
    let mut rows = TABLE1_PRINTED.to_vec();
    if edition == Edition::Corrected {
        rows[11].c = [84, -24, 4, 24, -2, 2];
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Record {
    pub solution: FamilySolution,
    pub positive: bool,
    pub satisfies: bool,
}

/// Evaluates row `row` (1-based) at `(k, ℓ)` with sign `s = ±1`.
pub fn table1_generate(row: usize, k: i64, l: i64, sign: i8, edition: Edition) -> Option<Table1Record> {
    let r = *table1_rows(edition).get(row.checked_sub(1)?)?;
    if sign != 1 && sign != -1 {
        return None;
    }
    let (a, b, c) = r.eval(k, l, sign as i64);
    let fam = DiophantineFamily::get(r.family).ok()?;
    let solution =
        FamilySolution { family: r.family, a, b, c, gcd_ok: a.gcd(&b) == 1, provenance: Some(Table1Provenance { row, k, l, sign }) };
    Some(Table1Record { positive: solution.positive(), satisfies: fam.holds(a, b, c), solution })
}

/// Every row at every `(k, ℓ) ∈ [-range, range]²` with both signs.
pub fn table1_sweep(range: i64, edition: Edition) -> Vec<Table1Record> {
    let n = table1_rows(edition).len();
    let mut out = Vec::new();
    for row in 1..=n {
        for k in -range..=range {
            for l in -range..=range {
                for sign in [1i8, -1] {
                    out.push(table1_generate(row, k, l, sign, edition).expect("row in range"));
                }
            }
        }
    }
    out
}

/// Per-row counts of positive outputs, by sign, and of positive outputs that
/// fail the family equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Summary {
    pub row: usize,
    pub family: u8,
    pub positive_upper: usize,
    pub positive_lower: usize,
    pub failures: usize,
}

pub fn table1_summary(range: i64, edition: Edition) -> Vec<Table1Summary> {
    let recs = table1_sweep(range, edition);
    table1_rows(edition)
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let row = i + 1;
            let mine = recs.iter().filter(|x| x.solution.provenance.map(|p| p.row) == Some(row) && x.positive);
            let (mut up, mut low, mut fail) = (0, 0, 0);
            for x in mine {
                if x.solution.provenance.unwrap().sign > 0 {
                    up += 1;
                } else {
                    low += 1;
                }
                if !x.satisfies {
                    fail += 1;
                }
            }
            Table1Summary { row, family: r.family, positive_upper: up, positive_lower: low, failures: fail }
        })
        .collect()
}

/// `(a, b₁i + b₀, c₂i² + c₁i + c₀)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3Row {
    pub a: i64,
    pub b: (i64, i64),
    pub c: (i64, i64, i64),
}

impl Table3Row {
    pub fn eval(&self, i: i64) -> (i64, i64, i64) {
        (self.a, self.b.0 * i + self.b.1, self.c.0 * i * i + self.c.1 * i + self.c.2)
    }
}

const fn t3(a: i64, b: (i64, i64), c: (i64, i64, i64)) -> Table3Row {
    Table3Row { a, b, c }
}

const TABLE3_PRINTED: [Table3Row; 16] = [
    t3(1, (5, -3), (15, -14, 4)),
    t3(1, (5, 0), (15, 4, 1)),
    t3(2, (10, -7), (60, -68, 21)),
    t3(2, (10, 1), (60, 28, 5)),
    t3(3, (15, -11), (135, -162, 52)),
    t3(3, (15, -8), (135, -108, 25)),
    t3(3, (15, -1), (135, 18, 4)),
    t3(3, (15, 2), (135, 72, 13)),
    t3(4, (10, -5), (60, -28, 9)),
    t3(4, (10, -7), (60, -52, 17)),
    t3(5, (5, -4), (15, -4, 9)),
    t3(5, (5, -1), (15, -14, 12)),
    t3(6, (30, -23), (540, -684, 229)),
    t3(6, (30, -13), (540, -324, 61)),
    t3(6, (30, -5), (540, -36, 13)),
    t3(6, (30, 5), (540, 324, 61)),
];

/// Row 12's `c` is `15i² + 14i + 12`.
pub fn table3_rows(edition: Edition) -> Vec<Table3Row> {
    let mut rows = TABLE3_PRINTED.to_vec();
    if edition == Edition::Corrected {
        rows[11].c = (15, 14, 12);
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Table3Class {
    Row {
        row: usize,
        i: i64,
    },
    /// `(a, b)` sits on a row's progression but `c` differs from its formula.
    FormulaMismatch {
        row: usize,
        i: i64,
        expected_c: i64,
    },
    NotASolution,
    NoRow,
}

pub fn classify_table3(a: i64, b: i64, c: i64, edition: Edition) -> Table3Class {
    if !DiophantineFamily::get(1).expect("family 1").holds(a, b, c) {
        return Table3Class::NotASolution;
    }
    let mut mismatch = None;
    for (idx, r) in table3_rows(edition).iter().enumerate() {
        if r.a != a || (b - r.b.1) % r.b.0 != 0 {
            continue;
        }
        let i = (b - r.b.1) / r.b.0;
        let (_, _, ci) = r.eval(i);
        if ci == c {
            return Table3Class::Row { row: idx + 1, i };
        }
        mismatch.get_or_insert(Table3Class::FormulaMismatch { row: idx + 1, i, expected_c: ci });
    }
    mismatch.unwrap_or(Table3Class::NoRow)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3Entry {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    #[serde(flatten)]
    pub class: Table3Class,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3Report {
    pub b_max: i64,
    pub edition: Edition,
    pub entries: Vec<Table3Entry>,
    /// Number of solutions landing on each of the sixteen rows.
    pub row_counts: Vec<usize>,
}

impl Table3Report {
    /// Every coprime solution sits on exactly one row and every row is used.
    pub fn is_exact_partition(&self) -> bool {
        self.entries.iter().all(|e| matches!(e.class, Table3Class::Row { .. })) && self.row_counts.iter().all(|&n| n > 0)
    }

    pub fn unmatched(&self) -> Vec<&Table3Entry> {
        self.entries.iter().filter(|e| !matches!(e.class, Table3Class::Row { .. })).collect()
    }
}

/// Classifies every coprime family-(1) solution with `a ≤ 6`, `b ≤ b_max`.
pub fn table3_reproduce(b_max: i64, edition: Edition) -> Result<Table3Report, SearchError> {
    if b_max < 30 {
        return Err(SearchError::BoundTooSmall { got: b_max, min: 30 });
    }
    let sols = solve_family(1, 6, b_max)?;
    let mut row_counts = vec![0; TABLE3_PRINTED.len()];
    let entries: Vec<Table3Entry> = sols
        .into_iter()
        .filter(|s| s.gcd_ok)
        .map(|s| {
            let class = classify_table3(s.a, s.b, s.c, edition);
            if let Table3Class::Row { row, .. } = class {
                row_counts[row - 1] += 1;
            }
            Table3Entry { a: s.a, b: s.b, c: s.c, class }
        })
        .collect();
    Ok(Table3Report { b_max, edition, entries, row_counts })
}

/// `(p₁i + p₀, q₁i + q₀, r₂i² + r₁i + r₀)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub p: (i64, i64),
    pub q: (i64, i64),
    pub r: (i64, i64, i64),
}

impl Table2Row {
    pub fn eval(&self, i: i64) -> [i64; 3] {
        [self.p.0 * i + self.p.1, self.q.0 * i + self.q.1, self.r.0 * i * i + self.r.1 * i + self.r.2]
    }
}

const fn t2(p: (i64, i64), q: (i64, i64), r: (i64, i64, i64)) -> Table2Row {
    Table2Row { p, q, r }
}

const TABLE2_PRINTED: [Table2Row; 16] = [
    t2((10, 7), (15, 8), (120, 148, 45)),
    t2((10, 3), (15, 2), (120, 52, 5)),
    t2((20, -8), (30, -17), (480, -464, 109)),
    t2((20, 8), (30, 7), (480, 304, 45)),
    t2((30, -13), (45, -27), (1080, -1116, 281)),
    t2((30, -7), (45, -18), (1080, -684, 101)),
    t2((30, 7), (45, 3), (1080, 324, 17)),
    t2((30, 13), (45, 12), (1080, 756, 125)),
    t2((20, 2), (30, -7), (480, -64, -11)),
    t2((20, -2), (30, -23), (480, -256, 21)),
    t2((10, 7), (15, -2), (120, 68, -365)),
    t2((10, 13), (15, 7), (120, 212, 73)),
    t2((60, -28), (90, -57), (4320, -4752, 1277)),
    t2((60, -8), (90, -27), (4320, -1872, 173)),
    t2((60, 8), (90, -3), (4320, 432, -19)),
    t2((60, 28), (90, 27), (4320, 3312, 605)),
];

/// Row 10's `q` is `30i - 13`; row 11's `r` is `120i² + 68i - 11`.
pub fn table2_rows(edition: Edition) -> Vec<Table2Row> {
    let mut rows = TABLE2_PRINTED.to_vec();
    if edition == Edition::Corrected {
        rows[9].q = (30, -13);
        rows[10].r = (120, 68, -11);
    }
    rows
}

/// Sorted triple → every `(row, i)` producing it, for `i` in `range`.
pub fn table2_index(edition: Edition, range: std::ops::RangeInclusive<i64>) -> HashMap<Vec<i64>, Vec<(usize, i64)>> {
    let mut map: HashMap<Vec<i64>, Vec<(usize, i64)>> = HashMap::new();
    for (idx, r) in table2_rows(edition).iter().enumerate() {
        for i in range.clone() {
            let mut t = r.eval(i).to_vec();
            if t.iter().any(|&x| x < 2) {
                continue;
            }
            t.sort_unstable();
            map.entry(t).or_default().push((idx + 1, i));
        }
    }
    map
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineEntry {
    pub table3_row: usize,
    pub i: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub negative_e8: bool,
    pub minimal: bool,
    pub blow_ups: usize,
    pub boundary: Vec<i64>,
    pub table2: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "finding", rename_all = "snake_case")]
pub enum Finding {
    /// A Table 3 instantiation that does not solve the family equation.
    NotASolution {
        table3_row: usize,
        i: i64,
        a: i64,
        b: i64,
        c: i64,
    },
    NotNegativeE8 {
        table3_row: usize,
        i: i64,
    },
    NotMinimal {
        table3_row: usize,
        i: i64,
    },
    /// The boundary sphere appears in no Table 2 row.
    NoTable2Match {
        table3_row: usize,
        i: i64,
        boundary: Vec<i64>,
    },
    Pipeline {
        table3_row: usize,
        i: i64,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Report {
    pub i_max: i64,
    pub edition: Edition,
    pub entries: Vec<PipelineEntry>,
    pub findings: Vec<Finding>,
}

impl Table2Report {
    pub fn all_matched(&self) -> bool {
        self.findings.is_empty() && self.entries.iter().all(|e| !e.table2.is_empty())
    }
}

/// Runs every Table 3 row at `0 ≤ i ≤ i_max` (positive, coprime `a, b`)
/// through the blow-up normalization and matches the boundary sphere
/// against Table 2.
pub fn table2_reproduce(i_max: i64, edition: Edition) -> Result<Table2Report, SearchError> {
    if i_max < 2 {
        return Err(SearchError::BoundTooSmall { got: i_max, min: 2 });
    }
    let index = table2_index(edition, -5..=i_max + 5);
    let fam = DiophantineFamily::get(1)?;
    let jobs: Vec<(usize, i64, (i64, i64, i64))> = table3_rows(edition)
        .iter()
        .enumerate()
        .flat_map(|(idx, r)| (0..=i_max).map(move |i| (idx + 1, i, r.eval(i))))
        .filter(|&(_, _, (a, b, c))| a > 0 && b > 0 && c > 0 && a.gcd(&b) == 1)
        .collect();
    let results: Vec<(Option<PipelineEntry>, Vec<Finding>)> = jobs
        .par_iter()
        .map(|&(row, i, (a, b, c))| {
            let mut findings = Vec::new();
            if !fam.holds(a, b, c) {
                findings.push(Finding::NotASolution { table3_row: row, i, a, b, c });
                return (None, findings);
            }
            let cfg = fam.configuration(a, b, c);
            let negative_e8 = recognize_negative_e8(&cfg.gram_matrix()).is_negative_e8();
            let run = || -> Result<(bool, usize, Vec<i64>), MoveError> {
                let (star, trace) = normalize_to_star(&cfg)?;
                let spec = brieskorn_from_seifert(&read_seifert(&star)?)?;
                Ok((is_minimal(&star), trace.len(), spec.multiplicities().to_vec()))
            };
            match run() {
                Err(e) => {
                    findings.push(Finding::Pipeline { table3_row: row, i, message: e.to_string() });
                    (None, findings)
                }
                Ok((minimal, blow_ups, boundary)) => {
                    let table2 = index.get(&boundary).cloned().unwrap_or_default();
                    if !negative_e8 {
                        findings.push(Finding::NotNegativeE8 { table3_row: row, i });
                    }
                    if !minimal {
                        findings.push(Finding::NotMinimal { table3_row: row, i });
                    }
                    if table2.is_empty() {
                        findings.push(Finding::NoTable2Match { table3_row: row, i, boundary: boundary.clone() });
                    }
                    let entry = PipelineEntry { table3_row: row, i, a, b, c, negative_e8, minimal, blow_ups, boundary, table2 };
                    (Some(entry), findings)
                }
            }
        })
        .collect();
    let mut entries = Vec::new();
    let mut findings = Vec::new();
    for (e, f) in results {
        entries.extend(e);
        findings.extend(f);
    }
    Ok(Table2Report { i_max, edition, entries, findings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_examples() {
        let r = table1_generate(1, 1, 2, 1, Edition::Corrected).unwrap();
        assert_eq!((r.solution.a, r.solution.b, r.solution.c), (1, 2, 5));
        assert!(r.positive && r.satisfies);
        let r = table1_generate(1, 0, 0, 1, Edition::Corrected).unwrap();
        assert_eq!((r.solution.a, r.solution.b, r.solution.c), (2, -2, 2));
        assert!(!r.positive);
        let r = table1_generate(8, 1, 1, 1, Edition::Corrected).unwrap();
        assert_eq!((r.solution.a, r.solution.b), (9, -4));
        assert!(table1_generate(14, 0, 0, 1, Edition::Corrected).is_none());
    }

    #[test]
    fn table3_examples() {
        assert_eq!(classify_table3(1, 2, 5, Edition::Corrected), Table3Class::Row { row: 1, i: 1 });
        assert_eq!(classify_table3(4, 3, 9, Edition::Corrected), Table3Class::NotASolution);
        assert_eq!(classify_table3(5, 4, 41, Edition::Corrected), Table3Class::Row { row: 12, i: 1 });
        assert_eq!(classify_table3(5, 4, 41, Edition::Printed), Table3Class::FormulaMismatch { row: 12, i: 1, expected_c: 13 });
    }

    #[test]
    fn table2_examples() {
        let rows = table2_rows(Edition::Corrected);
        assert_eq!(rows[1].eval(0), [3, 2, 5]);
        assert_eq!(rows[0].eval(0), [7, 8, 45]);
    }
}
