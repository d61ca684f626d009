//! nonspan: exact invariants and classification reports for lattice
//! 3-polytopes, over JSON polytope documents.
//!
//! Exit codes: 0 success, 2 parse or domain error, 3 verification
//! failure, 4 a classify verdict that contradicts the classification.

mod doc;
mod report;
mod suites;

use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use nonspan_core::catalog::{CatalogEntry, CatalogTag};
use nonspan_core::geom::{hull, LatticePolytope3};
use nonspan_core::invariants::profile;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "nonspan", version, about = "Exact lattice-polytope reports")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Append wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant profile of a polytope document.
    Analyze { file: PathBuf },
    /// Locate a polytope document within the classification.
    Classify { file: PathBuf },
    /// Print the polytope document of a catalog entry, e.g. `generate F1 0 2`.
    Generate {
        tag: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
    },
    /// Re-check stored tables and laws; exits nonzero on any failure.
    Verify {
        suite: SuiteName,
        /// Largest polytope size swept.
        #[arg(long, default_value_t = 12)]
        nmax: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Tables,
    Partition,
    Spanning,
    Hstar,
    Dim4,
}

impl SuiteName {
    fn as_str(self) -> &'static str {
        match self {
            SuiteName::Tables => "tables",
            SuiteName::Partition => "partition",
            SuiteName::Spanning => "spanning",
            SuiteName::Hstar => "hstar",
            SuiteName::Dim4 => "dim4",
        }
    }
}

struct Failure {
    message: String,
    code: u8,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

struct Report {
    text: String,
    json: Value,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(mut r) => {
            let out = if cli.json {
                if cli.timing {
                    if let Value::Object(obj) = &mut r.json {
                        obj.insert(
                            "elapsed_ms".into(),
                            Value::from(started.elapsed().as_millis() as u64),
                        );
                    }
                }
                let mut s = serde_json::to_string_pretty(&r.json).expect("report serializes");
                s.push('\n');
                s
            } else {
                let mut s = r.text;
                if cli.timing {
                    let _ = writeln!(s, "elapsed: {} ms", started.elapsed().as_millis());
                }
                s
            };
            // A consumer hanging up (e.g. piping into head) is not an error.
            let _ = io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(r.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Analyze { file } => {
            let (d, p) = load(file)?;
            let prof = profile(&p).map_err(|e| input_error(e.to_string()))?;
            let (text, json) = report::analyze(d.name.as_deref(), d.vertices.len(), &p, &prof);
            Ok(Report { text, json, code: 0 })
        }
        Command::Classify { file } => {
            let (d, p) = load(file)?;
            let result =
                nonspan_core::classify::classify(&p).map_err(|e| input_error(e.to_string()))?;
            let (text, json, code) = report::classify(d.name.as_deref(), d.vertices.len(), &result);
            Ok(Report { text, json, code })
        }
        Command::Generate { tag, params } => {
            let tag: CatalogTag = tag.parse().map_err(|e: nonspan_core::Error| {
                input_error(e.to_string())
            })?;
            let entry = CatalogEntry::new(tag, params.clone());
            let mut vertices =
                nonspan_core::catalog::generators(&entry).map_err(|e| input_error(e.to_string()))?;
            vertices.sort();
            let json = doc::to_value(Some(&entry.to_string()), &vertices);
            let text = format!(
                "{}\n",
                serde_json::to_string_pretty(&json).expect("document serializes")
            );
            Ok(Report { text, json, code: 0 })
        }
        Command::Verify { suite, nmax } => {
            let rep = suites::run(suite.as_str(), *nmax).map_err(input_error)?;
            let code = if rep.passed() { 0 } else { 3 };
            Ok(Report {
                text: rep.render_text(),
                json: rep.render_json(),
                code,
            })
        }
    }
}

fn load(file: &Path) -> Result<(doc::PolytopeDocument, LatticePolytope3), Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| input_error(format!("{}: {e}", file.display())))?;
    let d = doc::parse(&text).map_err(input_error)?;
    let p = hull(&d.vertices).map_err(|e| input_error(e.to_string()))?;
    Ok((d, p))
}
