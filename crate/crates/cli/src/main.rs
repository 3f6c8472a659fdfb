//! `e8bound`: command-line front end.

mod render;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use e8bound::graph::{Configuration, GraphError, StarGraph, VertexId};
use e8bound::invariants::{consistency_checks, invariant_report, InvariantError};
use e8bound::lattice::{form_report, LatticeError, SymmetricMatrix};
use e8bound::moves::{blow_down_traced, boundary_brieskorn, normalize_configuration, MoveError, MoveTrace};
use e8bound::search::{classify_2221, classify_star_rank8_even, solve_family, SearchError};
use e8bound::seifert::{minimal_resolution, seifert_from_brieskorn, BrieskornSpec, SeifertError};
use e8bound::tables::{table1_sweep, table2_reproduce, table3_reproduce, Edition};
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "e8bound", version, about = "Plumbing graphs, E8 forms and Brieskorn sphere invariants")]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, short, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the result into this directory instead of stdout.
    #[arg(long, global = true, env = "E8BOUND_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
            Format::Text => "txt",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal resolution graph of Σ(a1,…,an).
    Resolve { multiplicities: Vec<i64> },
    /// Lattice, μ, μ̄, d and feasibility report; exit 2 on a failed consistency check.
    Invariants { multiplicities: Vec<i64> },
    /// Lattice predicates of a graph file (or a matrix file with --matrix).
    Form {
        file: PathBuf,
        #[arg(long)]
        matrix: bool,
    },
    /// Blow down one −1 vertex.
    Blowdown {
        file: PathBuf,
        vertex: String,
        /// Also write the move as a JSON line here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Blow up a branched triangular configuration into its star graph.
    Normalize {
        file: PathBuf,
        /// Write the move trace as JSON lines here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Brieskorn sphere bounding a branched triangular configuration.
    Boundary { file: PathBuf },
    /// Positive solutions of one of the seven Diophantine families.
    Search {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
        family: u8,
        #[arg(long, default_value_t = 6)]
        a_max: i64,
        #[arg(long, default_value_t = 300)]
        b_max: i64,
    },
    /// Exhaustive bounded search for even unimodular definite stars.
    Classify {
        #[arg(value_enum)]
        kind: ClassifyKind,
        #[arg(long, default_value_t = 64)]
        bound: i64,
    },
    /// Reproduce one of the solution tables.
    Tables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        #[arg(long, default_value_t = Edition::Corrected)]
        edition: Edition,
        /// Table 1: sweep (k, l) over [-range, range]².
        #[arg(long, default_value_t = 10)]
        range: i64,
        /// Table 3: largest b.
        #[arg(long, default_value_t = 300)]
        b_max: i64,
        /// Table 2: instantiate Table 3 rows at i = 0..=i_max.
        #[arg(long, default_value_t = 3)]
        i_max: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassifyKind {
    Rank8,
    #[value(name = "2221")]
    P2221,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    GraphFile { path: String, source: GraphError },
    #[error("{path}: {source}")]
    MatrixFile { path: String, source: LatticeError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("format `{0}` is not available for `{1}`")]
    Format(String, &'static str),
    #[error("trace: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

struct Output {
    body: String,
    name: String,
    format: Format,
    status: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Pool(e.to_string()))?;
    }
    let out = dispatch(cli.command, cli.format)?;
    match cli.out_dir {
        Some(dir) => {
            fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
            let path = dir.join(format!("{}.{}", out.name, out.format.extension()));
            fs::write(&path, &out.body).map_err(|e| io_err(&path, e))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(out.body.as_bytes()).map_err(|e| io_err(Path::new("<stdout>"), e))?;
        }
    }
    Ok(out.status)
}

fn io_err(path: &Path, source: io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), source }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| io_err(path, e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| io_err(path, e))
    }
}

fn read_graph(path: &Path) -> Result<Configuration, CliError> {
    Configuration::deserialize(&read_input(path)?).map_err(|source| CliError::GraphFile { path: path.display().to_string(), source })
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes") + "\n"
}

fn spec_name(prefix: &str, spec: &BrieskornSpec) -> String {
    let parts: Vec<String> = spec.multiplicities().iter().map(i64::to_string).collect();
    format!("{prefix}-{}", parts.join("-"))
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "stdin".into())
}

fn write_trace(path: &Path, trace: &MoveTrace) -> Result<(), CliError> {
    fs::write(path, trace.to_json_lines()).map_err(|e| io_err(path, e))
}

fn dispatch(command: Command, format: Option<Format>) -> Result<Output, CliError> {
    let ok = |body: String, name: String, format: Format| Ok(Output { body, name, format, status: 0 });
    match command {
        Command::Resolve { multiplicities } => {
            let spec = BrieskornSpec::new(multiplicities)?;
            let seifert = seifert_from_brieskorn(&spec);
            let star = minimal_resolution(&seifert)?;
            let config = star.to_configuration();
            let f = format.unwrap_or(Format::Text);
            let body = match f {
                Format::Text => config.serialize(),
                Format::Dot => config.to_dot(),
                Format::Json => json(&render::ResolveJson { multiplicities: spec.multiplicities(), seifert: &seifert, star: &star }),
                Format::Csv => return Err(CliError::Format("csv".into(), "resolve")),
            };
            ok(body, spec_name("resolve", &spec), f)
        }
        Command::Invariants { multiplicities } => {
            let spec = BrieskornSpec::new(multiplicities)?;
            let report = invariant_report(&spec)?;
            let violations = consistency_checks(&report);
            let f = format.unwrap_or(Format::Json);
            let body = match f {
                Format::Json => json(&render::InvariantsJson { report: &report, violations: &violations }),
                Format::Text => render::invariants_text(&report, &violations),
                other => return Err(CliError::Format(format!("{other:?}").to_lowercase(), "invariants")),
            };
            for v in &violations {
                eprintln!("violation: {v}");
            }
            Ok(Output { body, name: spec_name("invariants", &spec), format: f, status: if violations.is_empty() { 0 } else { 2 } })
        }
        Command::Form { file, matrix } => {
            let m: SymmetricMatrix<BigInt> = if matrix {
                SymmetricMatrix::parse_text(&read_input(&file)?)
                    .map_err(|source| CliError::MatrixFile { path: file.display().to_string(), source })?
            } else {
                read_graph(&file)?.gram_matrix()
            };
            let report = form_report(&m);
            let f = format.unwrap_or(Format::Text);
            let body = match f {
                Format::Json => json(&report),
                Format::Text => render::form_text(&report),
                other => return Err(CliError::Format(format!("{other:?}").to_lowercase(), "form")),
            };
            ok(body, format!("form-{}", file_stem(&file)), f)
        }
        Command::Blowdown { file, vertex, trace } => {
            let config = read_graph(&file)?;
            let id = VertexId::new(vertex)?;
            let (next, step) = blow_down_traced(&config, &id)?;
            let steps = MoveTrace { steps: vec![step] };
            if let Some(path) = &trace {
                write_trace(path, &steps)?;
            }
            let f = format.unwrap_or(Format::Text);
            let body = match f {
                Format::Text => next.serialize(),
                Format::Dot => next.to_dot(),
                Format::Json => json(&render::GraphJson { graph: next.serialize(), star: None, trace: &steps.steps }),
                Format::Csv => return Err(CliError::Format("csv".into(), "blowdown")),
            };
            ok(body, format!("blowdown-{}-{}", file_stem(&file), id), f)
        }
        Command::Normalize { file, trace } => {
            let config = read_graph(&file)?;
            let (last, steps) = normalize_configuration(&config)?;
            let star = StarGraph::from_configuration(&last, None)?;
            let star_config = star.to_configuration();
            if let Some(path) = &trace {
                write_trace(path, &steps)?;
            }
            let f = format.unwrap_or(Format::Text);
            let body = match f {
                Format::Text => star_config.serialize(),
                Format::Dot => star_config.to_dot(),
                Format::Json => json(&render::GraphJson { graph: last.serialize(), star: Some(&star), trace: &steps.steps }),
                Format::Csv => return Err(CliError::Format("csv".into(), "normalize")),
            };
            ok(body, format!("normalize-{}", file_stem(&file)), f)
        }
        Command::Boundary { file } => {
            let config = read_graph(&file)?;
            let spec = boundary_brieskorn(&config)?;
            let f = format.unwrap_or(Format::Text);
            let body = match f {
                Format::Text => format!("{spec}\n"),
                Format::Json => json(&render::BoundaryJson { multiplicities: spec.multiplicities() }),
                other => return Err(CliError::Format(format!("{other:?}").to_lowercase(), "boundary")),
            };
            ok(body, format!("boundary-{}", file_stem(&file)), f)
        }
        Command::Search { family, a_max, b_max } => {
            let sols = solve_family(family, a_max, b_max)?;
            let f = format.unwrap_or(Format::Csv);
            let body = match f {
                Format::Json => json(&sols),
                Format::Csv => render::csv_rows(sols.iter().map(render::SearchRow::from))?,
                Format::Text => render::search_text(&sols),
                Format::Dot => return Err(CliError::Format("dot".into(), "search")),
            };
            ok(body, format!("search-{family}"), f)
        }
        Command::Classify { kind, bound } => {
            let (report, name) = match kind {
                ClassifyKind::Rank8 => (classify_star_rank8_even(bound)?, "rank8"),
                ClassifyKind::P2221 => (classify_2221(bound)?, "2221"),
            };
            let f = format.unwrap_or(Format::Text);
            let body = match f {
                Format::Json => json(&render::ClassifyJson::from(&report)),
                Format::Csv => render::csv_rows(report.solutions.iter().map(render::ClassifyRow::from))?,
                Format::Text => render::classify_text(&report),
                Format::Dot => return Err(CliError::Format("dot".into(), "classify")),
            };
            ok(body, format!("classify-{name}-{bound}"), f)
        }
        Command::Tables { table, edition, range, b_max, i_max } => {
            let f = format.unwrap_or(Format::Csv);
            if f == Format::Dot {
                return Err(CliError::Format("dot".into(), "tables"));
            }
            let body = match table {
                1 => {
                    if range < 0 {
                        return Err(SearchError::BoundTooSmall { got: range, min: 0 }.into());
                    }
                    let recs = table1_sweep(range, edition);
                    match f {
                        Format::Json => json(&recs),
                        Format::Csv => render::csv_rows(recs.iter().map(render::Table1CsvRow::from))?,
                        _ => render::table1_text(&recs),
                    }
                }
                2 => {
                    let report = table2_reproduce(i_max, edition)?;
                    for finding in &report.findings {
                        eprintln!("finding: {}", serde_json::to_string(finding)?);
                    }
                    match f {
                        Format::Json => json(&report),
                        Format::Csv => render::csv_rows(report.entries.iter().map(render::Table2CsvRow::from))?,
                        _ => render::table2_text(&report),
                    }
                }
                _ => {
                    let report = table3_reproduce(b_max, edition)?;
                    match f {
                        Format::Json => json(&report),
                        Format::Csv => render::csv_rows(report.entries.iter().map(render::Table3CsvRow::from))?,
                        _ => render::table3_text(&report),
                    }
                }
            };
            ok(body, format!("table{table}-{edition}"), f)
        }
    }
}
