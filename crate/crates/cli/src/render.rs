use std::fmt::Write as _;

use e8bound::graph::StarGraph;
use e8bound::invariants::{InvariantReport, Violation};
use e8bound::lattice::{E8Verdict, FormReport};
use e8bound::moves::MoveStep;
use e8bound::search::{ClassificationReport, FamilySolution, StarSolution};
use e8bound::seifert::SeifertData;
use e8bound::tables::{PipelineEntry, Table1Record, Table2Report, Table3Class, Table3Entry, Table3Report};
use serde::{Deserialize, Serialize};

#[derive(Serialize)]
pub struct ResolveJson<'a> {
    pub multiplicities: &'a [i64],
    pub seifert: &'a SeifertData,
    pub star: &'a StarGraph,
}

#[derive(Serialize)]
pub struct InvariantsJson<'a> {
    #[serde(flatten)]
    pub report: &'a InvariantReport,
    pub violations: &'a [Violation],
}

#[derive(Serialize)]
pub struct GraphJson<'a> {
    pub graph: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star: Option<&'a StarGraph>,
    pub trace: &'a [MoveStep],
}

#[derive(Serialize)]
pub struct BoundaryJson<'a> {
    pub multiplicities: &'a [i64],
}

#[derive(Serialize)]
pub struct ClassifyJson<'a> {
    pub bound: i64,
    pub shell_clean: bool,
    pub shell_hits: usize,
    pub nodes_visited: u64,
    pub solutions: &'a [StarSolution],
}

impl<'a> From<&'a ClassificationReport> for ClassifyJson<'a> {
    fn from(r: &'a ClassificationReport) -> Self {
        Self {
            bound: r.bound,
            shell_clean: r.shell_clean(),
            shell_hits: r.shell_hits,
            nodes_visited: r.nodes_visited,
            solutions: &r.solutions,
        }
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

pub fn csv_rows<T: Serialize>(rows: impl Iterator<Item = T>) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRow {
    pub family: u8,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub gcd_ok: bool,
}

impl From<&FamilySolution> for SearchRow {
    fn from(s: &FamilySolution) -> Self {
        Self { family: s.family, a: s.a, b: s.b, c: s.c, gcd_ok: s.gcd_ok }
    }
}

#[derive(Serialize)]
pub struct ClassifyRow {
    pub lengths: String,
    pub central_weight: i64,
    pub branches: String,
    pub brieskorn: String,
}

impl From<&StarSolution> for ClassifyRow {
    fn from(s: &StarSolution) -> Self {
        Self {
            lengths: join(&s.lengths, " "),
            central_weight: s.star.central_weight,
            branches: s.star.branches.iter().map(|b| join(b, " ")).collect::<Vec<_>>().join(" | "),
            brieskorn: s.brieskorn.as_deref().map(|m| join(m, " ")).unwrap_or_default(),
        }
    }
}

#[derive(Serialize)]
pub struct Table1CsvRow {
    pub row: usize,
    pub family: u8,
    pub k: i64,
    pub l: i64,
    pub sign: i8,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub positive: bool,
    pub satisfies: bool,
}

impl From<&Table1Record> for Table1CsvRow {
    fn from(r: &Table1Record) -> Self {
        let p = r.solution.provenance.expect("table rows carry provenance");
        Self {
            row: p.row,
            family: r.solution.family,
            k: p.k,
            l: p.l,
            sign: p.sign,
            a: r.solution.a,
            b: r.solution.b,
            c: r.solution.c,
            positive: r.positive,
            satisfies: r.satisfies,
        }
    }
}

#[derive(Serialize)]
pub struct Table2CsvRow {
    pub table3_row: usize,
    pub i: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub negative_e8: bool,
    pub minimal: bool,
    pub blow_ups: usize,
    pub boundary: String,
    pub table2: String,
}

impl From<&PipelineEntry> for Table2CsvRow {
    fn from(e: &PipelineEntry) -> Self {
        Self {
            table3_row: e.table3_row,
            i: e.i,
            a: e.a,
            b: e.b,
            c: e.c,
            negative_e8: e.negative_e8,
            minimal: e.minimal,
            blow_ups: e.blow_ups,
            boundary: join(&e.boundary, " "),
            table2: e.table2.iter().map(|(r, i)| format!("{r}@{i}")).collect::<Vec<_>>().join(" "),
        }
    }
}

/// One Table 3 CSV line; `row` and `i` are empty for unmatched solutions.
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table3CsvRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub class: String,
    pub row: Option<usize>,
    pub i: Option<i64>,
    pub expected_c: Option<i64>,
}

impl From<&Table3Entry> for Table3CsvRow {
    fn from(e: &Table3Entry) -> Self {
        let (class, row, i, expected_c) = match e.class {
            Table3Class::Row { row, i } => ("row", Some(row), Some(i), None),
            Table3Class::FormulaMismatch { row, i, expected_c } => ("formula_mismatch", Some(row), Some(i), Some(expected_c)),
            Table3Class::NotASolution => ("not_a_solution", None, None, None),
            Table3Class::NoRow => ("no_row", None, None, None),
        };
        Self { a: e.a, b: e.b, c: e.c, class: class.into(), row, i, expected_c }
    }
}

pub fn invariants_text(r: &InvariantReport, violations: &[Violation]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "sphere           Σ({})", join(&r.multiplicities, ","));
    let legs: Vec<String> = r.seifert.legs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    let _ = writeln!(s, "seifert          b0 = {}; {}", r.seifert.b0, legs.join(" "));
    let _ = writeln!(s, "rank             {}", r.rank);
    let _ = writeln!(s, "signature        {}", r.signature);
    let _ = writeln!(s, "determinant      {}", r.determinant);
    let _ = writeln!(s, "even             {}", r.even);
    let _ = writeln!(s, "unimodular       {}", r.unimodular);
    let _ = writeln!(s, "negdef           {}", r.negative_definite);
    let _ = writeln!(s, "wu               {}", join(&r.wu_class.coefficients, ""));
    let _ = writeln!(s, "mu               {}", r.mu);
    let _ = writeln!(s, "mu_bar           {}", r.mu_bar);
    let _ = writeln!(s, "d                {}", r.d);
    let _ = writeln!(s, "b2 negdef        {{{}}}", join(&r.feasible_b2_negdef, ", "));
    let _ = writeln!(s, "b2 posdef        {{{}}}", join(&r.feasible_b2_posdef, ", "));
    let _ = writeln!(s, "epsilon          {}", r.epsilon_hint);
    for v in violations {
        let _ = writeln!(s, "violation        {v}");
    }
    s
}

pub fn form_text(r: &FormReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rank         {}", r.rank);
    let _ = writeln!(s, "determinant  {}", r.determinant);
    let _ = writeln!(s, "even         {}", r.even);
    let _ = writeln!(s, "unimodular   {}", r.unimodular);
    let _ = writeln!(s, "negdef       {}", r.negative_definite);
    let _ = writeln!(s, "inertia      ({}, {}, {})", r.inertia.positive, r.inertia.negative, r.inertia.zero);
    let _ = writeln!(s, "signature    {}", r.signature);
    let verdict = match &r.e8.verdict {
        E8Verdict::NegativeE8 => "-E8".to_string(),
        E8Verdict::GenusMatch { copies } => format!("genus of {copies}(-E8)"),
        E8Verdict::Rejected { reasons } => format!("rejected: {}", join(reasons, "; ")),
    };
    let _ = writeln!(s, "e8           {verdict}");
    s
}

pub fn search_text(sols: &[FamilySolution]) -> String {
    let mut s = String::new();
    for x in sols {
        let _ = writeln!(s, "({}) a={} b={} c={}{}", x.family, x.a, x.b, x.c, if x.gcd_ok { "" } else { "  gcd>1" });
    }
    s
}

pub fn classify_text(r: &ClassificationReport) -> String {
    let mut s = String::new();
    for sol in &r.solutions {
        let row = ClassifyRow::from(sol);
        let sphere = sol.brieskorn.as_deref().map(|m| format!("Σ({})", join(m, ","))).unwrap_or_else(|| "?".into());
        let _ = writeln!(s, "{sphere}  lengths ({})  centre {}  branches {}", row.lengths, row.central_weight, row.branches);
    }
    let _ = writeln!(
        s,
        "bound {}  solutions {}  shell {}  nodes {}",
        r.bound,
        r.solutions.len(),
        if r.shell_clean() { "clean".to_string() } else { format!("{} hits", r.shell_hits) },
        r.nodes_visited
    );
    s
}

pub fn table1_text(recs: &[Table1Record]) -> String {
    let mut s = String::new();
    for r in recs.iter().filter(|r| r.positive) {
        let p = r.solution.provenance.expect("table rows carry provenance");
        let sign = if p.sign > 0 { '+' } else { '-' };
        let _ = writeln!(
            s,
            "row {:>2} ({}) k={} l={} {sign}  a={} b={} c={}{}",
            p.row,
            r.solution.family,
            p.k,
            p.l,
            r.solution.a,
            r.solution.b,
            r.solution.c,
            if r.satisfies { "" } else { "  FAILS" }
        );
    }
    s
}

pub fn table2_text(r: &Table2Report) -> String {
    let mut s = String::new();
    for e in &r.entries {
        let hits = e.table2.iter().map(|(row, i)| format!("{row}@{i}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(
            s,
            "T3 row {:>2} i={}  ({},{},{})  blow-ups {:>2}  Σ({})  T2 {}",
            e.table3_row,
            e.i,
            e.a,
            e.b,
            e.c,
            e.blow_ups,
            join(&e.boundary, ","),
            if hits.is_empty() { "-".into() } else { hits }
        );
    }
    let _ = writeln!(s, "entries {}  findings {}", r.entries.len(), r.findings.len());
    s
}

pub fn table3_text(r: &Table3Report) -> String {
    let mut s = String::new();
    for (idx, n) in r.row_counts.iter().enumerate() {
        let _ = writeln!(s, "row {:>2}  {n}", idx + 1);
    }
    for e in r.unmatched() {
        let _ = writeln!(s, "unmatched ({},{},{})  {:?}", e.a, e.b, e.c, e.class);
    }
    let _ = writeln!(s, "solutions {}  exact partition {}", r.entries.len(), r.is_exact_partition());
    s
}
