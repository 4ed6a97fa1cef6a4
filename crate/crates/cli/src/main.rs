//! Command-line surface for the bikei library: axiom checking, enumeration,
//! (co)homology, cocycles, colorings, invariants and Reidemeister rewrites.
//!
//! Exit codes: 0 success, 1 domain error (axiom failure, invalid cocycle,
//! unsatisfied construction conditions, unmatched move site), 2 usage or
//! parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use bikei::algebra::{
    alexander_bikei, enumerate_bikei, verify_axioms, AlgebraError, Bikei, BikeiMatrix,
};
use bikei::complex::{boundary_matrix, degenerate_generators, DegeneracyMode};
use bikei::diagram::{apply_move, Diagram, Move};
use bikei::homology::{
    bikei_cohomology, bikei_homology, conjecture_scan, mochizuki_cocycle, Cocycle2,
};
use bikei::intlinalg::IntMatrix;
use bikei::invariant::{cocycle_invariant, enumerate_colorings, InvariantValue};

#[derive(Parser)]
#[command(name = "bikei", version, about = "finite bikei, their homology, and link invariants")]
struct Cli {
    /// Emit one JSON object per result instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest bikei cardinality the enumerator will attempt.
    #[arg(long, global = true, default_value_t = 4)]
    max_elements: usize,
    /// Largest chain degree for homology computations.
    #[arg(long, global = true, default_value_t = 4)]
    max_degree: usize,
    /// Search-node budget for coloring and homomorphism enumeration.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_nodes: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the bikei axioms of an operation-table file.
    Check { bikei: PathBuf },
    /// List all bikei on n elements, one per isomorphism class.
    Enum { n: usize },
    /// Integral homology of the quotient complex in one degree.
    Hom {
        #[arg(long)]
        bikei: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Also dump the boundary and degenerate-generator matrices.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// Cohomology with Z/N coefficients, with representative cocycles.
    Cohom {
        #[arg(long)]
        bikei: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        dump_matrices: bool,
    },
    /// Representative 2-cocycles of H^2(X; Z/N), in cocycle file format.
    Cocycles {
        #[arg(long)]
        bikei: PathBuf,
        #[arg(long)]
        modulus: u64,
    },
    /// Linear cocycle a(x - y) on the Alexander bikei (N, s, t).
    Mochizuki { n: u64, s: u64, t: u64, a: u64 },
    /// Enumerate colorings of a diagram by a bikei.
    Color {
        #[arg(long)]
        bikei: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Counting invariant and 2-cocycle enhanced invariant of a diagram.
    Invariant {
        #[arg(long)]
        bikei: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Report the free rank of H_2(X; Z) for all classes up to a size.
    ScanConjecture {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Apply a Reidemeister rewrite to a diagram and print the result.
    Move {
        #[arg(long)]
        diagram: PathBuf,
        /// One of r1-insert, r1-remove, r2-insert, r2-remove, r3.
        #[arg(long = "move")]
        kind: String,
        /// Comma-separated semiarc ids (inserts) or crossing indices.
        #[arg(long)]
        site: String,
    },
}

/// Errors mapped to exit code 2: bad files and malformed inputs.
struct UsageError(String);
/// Errors mapped to exit code 1: well-formed inputs with domain failures.
struct DomainError(String);

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Domain(e.0)
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_bikei(path: &Path) -> Result<Bikei, CliError> {
    let text = read_file(path)?;
    let matrix = BikeiMatrix::parse(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Bikei::new(matrix.tables).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<Diagram, CliError> {
    let text = read_file(path)?;
    Diagram::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn matrix_dump(label: &str, m: &IntMatrix) -> String {
    let mut out = format!("# {label}\n{} {}\n", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.at(r, c).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn parse_site(site: &str) -> Result<Vec<u64>, CliError> {
    site.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad site component '{t}'")))
        })
        .collect()
}

fn parse_move(kind: &str, site: &str) -> Result<Move, CliError> {
    let parts = parse_site(site)?;
    let want = |n: usize| -> Result<(), CliError> {
        if parts.len() == n {
            Ok(())
        } else {
            Err(CliError::Usage(format!("move {kind} needs a {n}-part site, got {}", parts.len())))
        }
    };
    match kind {
        "r1-insert" => {
            want(1)?;
            Ok(Move::R1Insert { semiarc: parts[0] as u32 })
        }
        "r1-remove" => {
            want(1)?;
            Ok(Move::R1Remove { crossing: parts[0] as usize })
        }
        "r2-insert" => {
            want(2)?;
            Ok(Move::R2Insert { under: parts[0] as u32, over: parts[1] as u32 })
        }
        "r2-remove" => {
            want(2)?;
            Ok(Move::R2Remove { first: parts[0] as usize, second: parts[1] as usize })
        }
        "r3" => {
            want(3)?;
            Ok(Move::R3 {
                crossings: [parts[0] as usize, parts[1] as usize, parts[2] as usize],
            })
        }
        other => Err(CliError::Usage(format!("unknown move kind '{other}'"))),
    }
}

fn shape_json(shape: &bikei::intlinalg::AbelianGroupShape) -> serde_json::Value {
    json!({
        "free_rank": shape.free_rank,
        "torsion": shape.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "display": shape.to_string(),
    })
}

fn invariant_json(v: &InvariantValue) -> serde_json::Value {
    let multiset: serde_json::Map<String, serde_json::Value> = v
        .multiset
        .iter()
        .map(|(w, m)| (w.to_string(), json!(m)))
        .collect();
    json!({
        "count": v.total_multiplicity(),
        "poly": v.polynomial(),
        "multiset": multiset,
    })
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Check { bikei } => {
            let text = read_file(bikei)?;
            let matrix = BikeiMatrix::parse(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", bikei.display())))?;
            let violations = verify_axioms(&matrix.tables);
            if violations.is_empty() {
                if cli.json {
                    Ok(json!({"command": "check", "valid": true}).to_string() + "\n")
                } else {
                    Ok("valid\n".to_string())
                }
            } else {
                let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                if cli.json {
                    Err(CliError::Domain(
                        json!({"command": "check", "valid": false, "violations": lines})
                            .to_string(),
                    ))
                } else {
                    Err(CliError::Domain(format!("invalid\n{}", lines.join("\n"))))
                }
            }
        }
        Command::Enum { n } => {
            let classes = enumerate_bikei(*n, cli.max_elements)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                let matrices: Vec<serde_json::Value> = classes
                    .iter()
                    .map(|b| {
                        let t = b.tables();
                        let rows: Vec<Vec<usize>> = (0..t.n)
                            .map(|x| {
                                let mut row: Vec<usize> =
                                    (0..t.n).map(|y| t.under(x, y) + 1).collect();
                                row.extend((0..t.n).map(|y| t.over(x, y) + 1));
                                row
                            })
                            .collect();
                        json!(rows)
                    })
                    .collect();
                Ok(json!({"command": "enum", "n": n, "count": classes.len(),
                           "matrices": matrices})
                .to_string()
                    + "\n")
            } else {
                let blocks: Vec<String> = classes
                    .iter()
                    .map(|b| BikeiMatrix::from_tables(b.tables().clone()).render())
                    .collect();
                Ok(blocks.join("\n"))
            }
        }
        Command::Hom { bikei, degree, dump_matrices } => {
            let b = load_bikei(bikei)?;
            check_degree_flag(*degree, cli.max_degree)?;
            let shape = bikei_homology(&b, *degree).map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                Ok(json!({"command": "hom", "degree": degree, "group": shape_json(&shape)})
                    .to_string()
                    + "\n")
            } else {
                let mut out = format!("H_{degree} = {shape}\n");
                if *dump_matrices {
                    let d = boundary_matrix(&b, *degree)
                        .map_err(|e| CliError::Domain(e.to_string()))?;
                    out.push_str(&matrix_dump(&format!("boundary d{degree}"), &d));
                    let g = degenerate_generators(&b, *degree, DegeneracyMode::Bikei)
                        .map_err(|e| CliError::Domain(e.to_string()))?;
                    out.push_str(&matrix_dump(
                        &format!("degenerate generators, degree {degree}"),
                        &g.matrix,
                    ));
                }
                Ok(out)
            }
        }
        Command::Cohom { bikei, degree, modulus, dump_matrices } => {
            let b = load_bikei(bikei)?;
            check_degree_flag(*degree, cli.max_degree)?;
            let h = bikei_cohomology(&b, *degree, *modulus)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                Ok(json!({
                    "command": "cohom", "degree": degree, "modulus": modulus,
                    "group": shape_json(&h.group),
                    "basis": h.cocycle_basis,
                })
                .to_string()
                    + "\n")
            } else {
                let mut out = format!("H^{degree} mod {modulus} = {}\n", h.group);
                for (i, table) in h.cocycle_basis.iter().enumerate() {
                    out.push_str(&format!("# generator {}\n", i + 1));
                    let dim = b.size().pow(*degree as u32 - 1).max(1);
                    for chunk in table.chunks(table.len() / dim.max(1)) {
                        let row: Vec<String> = chunk.iter().map(u64::to_string).collect();
                        out.push_str(&row.join(" "));
                        out.push('\n');
                    }
                }
                if *dump_matrices {
                    let d = boundary_matrix(&b, *degree + 1)
                        .map_err(|e| CliError::Domain(e.to_string()))?;
                    out.push_str(&matrix_dump(&format!("boundary d{}", degree + 1), &d));
                }
                Ok(out)
            }
        }
        Command::Cocycles { bikei, modulus } => {
            let b = load_bikei(bikei)?;
            let h = bikei_cohomology(&b, 2, *modulus)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                Ok(json!({
                    "command": "cocycles", "modulus": modulus,
                    "group": shape_json(&h.group),
                    "basis": h.cocycle_basis,
                })
                .to_string()
                    + "\n")
            } else {
                let mut out = format!("H^2 mod {modulus} = {}\n", h.group);
                for (i, table) in h.cocycle_basis.iter().enumerate() {
                    let phi = Cocycle2::new(b.clone(), *modulus, table.clone())
                        .expect("basis tables are well-sized");
                    out.push_str(&format!("# generator {}\n{}", i + 1, phi.render()));
                }
                Ok(out)
            }
        }
        Command::Mochizuki { n, s, t, a } => {
            let phi =
                mochizuki_cocycle(*n, *s, *t, *a).map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                Ok(json!({
                    "command": "mochizuki", "modulus": n,
                    "values": phi.values(),
                })
                .to_string()
                    + "\n")
            } else {
                Ok(phi.render())
            }
        }
        Command::Color { bikei, diagram } => {
            let b = load_bikei(bikei)?;
            let d = load_diagram(diagram)?;
            let colorings = enumerate_colorings(&d, &b, cli.max_nodes)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                let list: Vec<serde_json::Value> = colorings
                    .iter()
                    .map(|c| {
                        let m: serde_json::Map<String, serde_json::Value> = c
                            .assignment
                            .iter()
                            .map(|(id, e)| (id.to_string(), json!(e + 1)))
                            .collect();
                        json!(m)
                    })
                    .collect();
                Ok(json!({"command": "color", "count": colorings.len(), "colorings": list})
                    .to_string()
                    + "\n")
            } else {
                let mut out = format!("count = {}\n", colorings.len());
                for c in &colorings {
                    let parts: Vec<String> =
                        c.assignment.iter().map(|(id, e)| format!("{id}={}", e + 1)).collect();
                    out.push_str(&parts.join(" "));
                    out.push('\n');
                }
                Ok(out)
            }
        }
        Command::Invariant { bikei, cocycle, diagram } => {
            let b = load_bikei(bikei)?;
            let phi_text = read_file(cocycle)?;
            let phi = Cocycle2::parse(b.clone(), &phi_text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", cocycle.display())))?;
            let d = load_diagram(diagram)?;
            let v = cocycle_invariant(&d, &b, &phi, cli.max_nodes)
                .map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                let mut obj = invariant_json(&v);
                obj["command"] = json!("invariant");
                Ok(obj.to_string() + "\n")
            } else {
                Ok(v.serialize())
            }
        }
        Command::ScanConjecture { max_n } => {
            let report = conjecture_scan(*max_n).map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                let rows: Vec<serde_json::Value> = report
                    .lines()
                    .filter(|l| !l.starts_with('#'))
                    .map(|l| {
                        let cols: Vec<&str> = l.split('\t').collect();
                        json!({"class": cols[0], "free_rank": cols[1], "h2": cols[2]})
                    })
                    .collect();
                Ok(json!({"command": "scan-conjecture", "rows": rows}).to_string() + "\n")
            } else {
                Ok(report)
            }
        }
        Command::Move { diagram, kind, site } => {
            let d = load_diagram(diagram)?;
            let mv = parse_move(kind, site)?;
            let out = apply_move(&d, &mv).map_err(|e| CliError::Domain(e.to_string()))?;
            if cli.json {
                Ok(json!({"command": "move", "diagram": out.render()}).to_string() + "\n")
            } else {
                Ok(out.render())
            }
        }
    }
}

fn check_degree_flag(degree: usize, max_degree: usize) -> Result<(), CliError> {
    if degree == 0 || degree > max_degree {
        return Err(CliError::Domain(format!(
            "degree {degree} outside 1..{max_degree} (raise --max-degree to go higher)"
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
    .into()
}

// keep the error-source types referenced for the doc comment above
#[allow(dead_code)]
fn _error_taxonomy(e: AlgebraError) -> CliError {
    CliError::Domain(e.to_string())
}

#[allow(dead_code)]
fn _alexander_entry() -> Result<Bikei, AlgebraError> {
    alexander_bikei(2, 1, 1)
}
