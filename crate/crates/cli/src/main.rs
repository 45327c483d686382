//! `hammap`: validate, generate and search polyhedral maps for contractible
//! Hamiltonian cycles.

mod output;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hammap::crosscheck::{crosscheck, verify_witness, CrossOptions, CrosscheckReport, Verdict};
use hammap::disc_grow::{grow_all_seeds, grow_disc, GrowMode, GrowOptions};
use hammap::map::PolyhedralMap;
use hammap::mapgen::{
    corpus, gen_platonic, gen_quad_torus, gen_tri_torus, read_map, serialize_pmap, PlatonicSolid,
    TorusGridParams,
};
use hammap::oracle::{brute_search, BruteOptions};
use hammap::proper_tree::{find_proper_tree, SearchOptions};
use hammap::report::{SearchReport, Status, Witness, DEFAULT_BUDGET};

const EXIT_OK: u8 = 0;
const EXIT_DISAGREE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    /// Graphviz rendering of the dual with the witness highlighted.
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "hammap",
    version,
    about = "Contractible Hamiltonian cycles in polyhedral maps"
)]
struct Cli {
    /// Backtracking node budget per search.
    #[arg(long, global = true, env = "HAMMAP_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Worker threads for the searches (defaults to one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a pmap file describes a polyhedral map.
    Validate { file: PathBuf },
    /// Print vertex, edge and face counts, Euler characteristic and signature.
    Info { file: PathBuf },
    /// Write the dual map as pmap.
    Dual {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a generated map as pmap.
    Generate {
        #[command(subcommand)]
        family: Family,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Search for a proper tree in the dual map.
    Search {
        file: PathBuf,
        /// Re-verify a witness (or full report) from an earlier `search --format json`.
        #[arg(long, value_name = "WITNESS.json")]
        verify: Option<PathBuf>,
    },
    /// Grow a disc face by face.
    Grow {
        file: PathBuf,
        /// Seed face id; all seeds are tried when omitted.
        #[arg(long)]
        seed: Option<usize>,
        /// Follow the first eligible choice instead of backtracking.
        #[arg(long)]
        greedy: bool,
    },
    /// Enumerate Hamiltonian cycles and certify contractible ones.
    Brute {
        file: PathBuf,
        /// Stop at the first contractible cycle.
        #[arg(long)]
        first: bool,
    },
    /// Run search, grow and brute and compare their answers.
    Crosscheck {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Cross-check the built-in corpus and print the audit log.
    Sweep,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// {4,4} torus from a rows x cols grid.
    QuadTorus { rows: usize, cols: usize },
    /// {3,6} torus from a rows x cols grid, top row glued with a shift.
    TriTorus {
        rows: usize,
        cols: usize,
        shift: usize,
    },
    /// tetrahedron, cube, octahedron, dodecahedron or icosahedron.
    Platonic { name: PlatonicSolid },
}

struct Ctx {
    budget: u64,
    threads: Option<usize>,
    format: Format,
}

fn load(path: &Path) -> Result<PolyhedralMap> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    read_map(&bytes).with_context(|| path.display().to_string())
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn status_code(status: Status) -> u8 {
    if status == Status::Timeout {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    }
}

fn emit_report(ctx: &Ctx, map: &PolyhedralMap, report: &SearchReport) -> Result<u8> {
    match ctx.format {
        Format::Json => print_json(report)?,
        Format::Human => print!("{}", output::human_report(map, report)),
        Format::Dot => print!("{}", output::dot(map, report.witness.as_ref())),
    }
    Ok(status_code(report.status))
}

#[derive(Serialize)]
struct Info {
    n: usize,
    f1: usize,
    f2: usize,
    euler_characteristic: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<String>,
}

fn info(map: &PolyhedralMap) -> Info {
    Info {
        n: map.n(),
        f1: map.num_edges(),
        f2: map.num_faces(),
        euler_characteristic: map.euler_characteristic(),
        signature: map.equivelar_signature().map(|s| s.to_string()),
    }
}

/// Accepts either a full search report or a bare witness.
fn read_witness(path: &Path) -> Result<Witness> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    if let Ok(report) = serde_json::from_str::<SearchReport>(&text) {
        return report
            .witness
            .with_context(|| format!("{}: report has no witness", path.display()));
    }
    serde_json::from_str::<Witness>(&text)
        .with_context(|| format!("{}: not a witness", path.display()))
}

fn crosscheck_code(reports: &[CrosscheckReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Disagree) {
        EXIT_DISAGREE
    } else if reports.iter().any(|r| r.verdict == Verdict::Timeout) {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    }
}

#[derive(Serialize)]
struct Named<'a> {
    name: String,
    #[serde(flatten)]
    report: &'a CrosscheckReport,
}

fn emit_crosschecks(ctx: &Ctx, runs: &[(String, CrosscheckReport)]) -> Result<()> {
    match ctx.format {
        Format::Json => {
            let named: Vec<Named> = runs
                .iter()
                .map(|(name, report)| Named {
                    name: name.clone(),
                    report,
                })
                .collect();
            print_json(&named)?;
        }
        _ => {
            for (name, r) in runs {
                print!("{}", output::human_crosscheck(name, r));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx {
        budget: cli.budget,
        threads: cli.threads.map(|t| t as usize),
        format: cli.format,
    };
    let cross = CrossOptions {
        budget: ctx.budget,
        threads: ctx.threads,
    };
    match cli.command {
        Command::Validate { file } => {
            let map = load(&file)?;
            match ctx.format {
                Format::Json => print_json(&info(&map))?,
                _ => println!(
                    "ok: n = {}, f1 = {}, f2 = {}, chi = {}",
                    map.n(),
                    map.num_edges(),
                    map.num_faces(),
                    map.euler_characteristic()
                ),
            }
            Ok(EXIT_OK)
        }
        Command::Info { file } => {
            let i = info(&load(&file)?);
            match ctx.format {
                Format::Json => print_json(&i)?,
                _ => {
                    println!(
                        "n: {}\nf1: {}\nf2: {}\nchi: {}",
                        i.n, i.f1, i.f2, i.euler_characteristic
                    );
                    println!(
                        "signature: {}",
                        i.signature.as_deref().unwrap_or("not equivelar")
                    );
                }
            }
            Ok(EXIT_OK)
        }
        Command::Dual { file, output } => {
            let dual = load(&file)?.dual_map().context("dual")?;
            write_out(output.as_deref(), &serialize_pmap(&dual.map))?;
            Ok(EXIT_OK)
        }
        Command::Generate { family, output } => {
            let map = match family {
                Family::QuadTorus { rows, cols } => {
                    gen_quad_torus(TorusGridParams::new(rows, cols, 0))?
                }
                Family::TriTorus { rows, cols, shift } => {
                    gen_tri_torus(TorusGridParams::new(rows, cols, shift))?
                }
                Family::Platonic { name } => gen_platonic(name),
            };
            write_out(output.as_deref(), &serialize_pmap(&map))?;
            Ok(EXIT_OK)
        }
        Command::Search { file, verify } => {
            let map = load(&file)?;
            if let Some(path) = verify {
                let witness = read_witness(&path)?;
                return match verify_witness(&map, &witness) {
                    Ok(()) => {
                        println!("witness verified");
                        Ok(EXIT_OK)
                    }
                    Err(e) => {
                        println!("witness rejected: {e}");
                        Ok(EXIT_DISAGREE)
                    }
                };
            }
            let report = find_proper_tree(
                &map,
                SearchOptions {
                    budget: ctx.budget,
                    threads: ctx.threads,
                },
            );
            emit_report(&ctx, &map, &report)
        }
        Command::Grow { file, seed, greedy } => {
            let map = load(&file)?;
            let opts = GrowOptions {
                mode: if greedy {
                    GrowMode::Greedy
                } else {
                    GrowMode::Backtracking
                },
                budget: ctx.budget,
                threads: ctx.threads,
            };
            let report = match seed {
                Some(s) => grow_disc(&map, s, opts)?,
                None => grow_all_seeds(&map, opts)?,
            };
            emit_report(&ctx, &map, &report)
        }
        Command::Brute { file, first } => {
            let map = load(&file)?;
            let report = brute_search(
                &map,
                BruteOptions {
                    budget: ctx.budget,
                    stop_at_first: first,
                },
            );
            emit_report(&ctx, &map, &report)
        }
        Command::Crosscheck { files } => {
            let mut runs = Vec::new();
            for f in &files {
                let map = load(f)?;
                runs.push((f.display().to_string(), crosscheck(&map, cross)));
            }
            emit_crosschecks(&ctx, &runs)?;
            let reports: Vec<CrosscheckReport> = runs.into_iter().map(|(_, r)| r).collect();
            Ok(crosscheck_code(&reports))
        }
        Command::Sweep => {
            let runs: Vec<(String, CrosscheckReport)> = corpus()
                .into_iter()
                .map(|(name, map)| (name, crosscheck(&map, cross)))
                .collect();
            emit_crosschecks(&ctx, &runs)?;
            if ctx.format != Format::Json {
                let audit: Vec<String> = runs
                    .iter()
                    .filter_map(|(name, r)| r.lemma1_audit.as_ref().map(|a| format!("{name}: {a}")))
                    .collect();
                println!("audit log: {} entries", audit.len());
                for line in audit {
                    println!("  {line}");
                }
            }
            let reports: Vec<CrosscheckReport> = runs.into_iter().map(|(_, r)| r).collect();
            Ok(crosscheck_code(&reports))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn zero_budget_is_rejected() {
        assert!(Cli::try_parse_from(["hammap", "--budget", "0", "sweep"]).is_err());
    }

    #[test]
    fn bad_generator_input() {
        assert!(Cli::try_parse_from(["hammap", "generate", "platonic", "cuboctahedron"]).is_err());
        let cli = Cli::try_parse_from(["hammap", "generate", "quad-torus", "0", "3"]).unwrap();
        assert!(run(cli).is_err());
    }
}
