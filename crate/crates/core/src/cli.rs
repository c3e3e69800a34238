//! Command-line front end. [`run`] takes the argument list and output
//! streams so it can be driven from tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::ArcExpansion;
use crate::scenario::{example6_1, generate_polygon, FlipPlan, Scenario};
use crate::snake::{count_matchings, to_dot};
use crate::torus::format_exponent;
use crate::verify::{verify, SeedCheckMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qorbifold", version, about = "Quantum cluster expansions of arcs on unpunctured orbifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand a curve (or an arc of the triangulation) in the initial cluster.
    Expand {
        #[command(flatten)]
        target: Target,
        /// Print the q = 1 specialization.
        #[arg(long)]
        commutative: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the perfect matchings of the curve's snake graph.
    Matchings {
        #[command(flatten)]
        target: Target,
        /// Print only the number of matchings.
        #[arg(long)]
        count: bool,
    },
    /// Describe the snake graph of a curve.
    Snake {
        #[command(flatten)]
        target: Target,
        /// Emit Graphviz DOT instead of a tile listing.
        #[arg(long)]
        dot: bool,
    },
    /// Run the verification suite on one or more scenarios.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Run a single named check.
        #[arg(long)]
        check: Option<String>,
    },
    /// Scenario utilities.
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
}

#[derive(Debug, Args)]
struct Target {
    file: PathBuf,
    /// Curve name, or the id of a non-boundary arc of the triangulation.
    #[arg(long)]
    arc: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Terms,
}

#[derive(Debug, Subcommand)]
enum ScenarioCommand {
    /// Generate a scenario document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Write to this file instead of stdout.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum GenKind {
    /// Fan triangulation of a convex polygon with principal quantization.
    Polygon {
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        apex: usize,
        /// Annotate every flip sequence up to this length.
        #[arg(long, conflicts_with = "cover")]
        flip_depth: Option<usize>,
        /// Annotate shortest flip sequences reaching every diagonal.
        #[arg(long)]
        cover: bool,
    },
    /// The bundled orbifold example with two orbifold points.
    Example,
}

#[derive(Serialize)]
struct TermRecord {
    exponent: Vec<i64>,
    q_half_powers: Vec<[i64; 2]>,
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Closed) => EXIT_OK,
        Err(Failure::Engine(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Why a command stopped early. A closed output pipe (as with `| head`) is
/// not reported as an error.
enum Failure {
    Engine(Error),
    Closed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn io(e: std::io::Error) -> Failure {
    if e.kind() == std::io::ErrorKind::BrokenPipe {
        Failure::Closed
    } else {
        Failure::Engine(Error::Io(e.to_string()))
    }
}

fn load_target(target: &Target) -> Result<(Scenario, ArcExpansion)> {
    let s = Scenario::load(&target.file)?;
    let c = s.target(&target.arc)?;
    let e = ArcExpansion::compute(&s.triangulation, &c, s.seed.btilde())?;
    Ok((s, e))
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> std::result::Result<i32, Failure> {
    match command {
        Command::Expand {
            target,
            commutative,
            format,
        } => {
            let (s, e) = load_target(&target)?;
            if commutative {
                let terms = e.commutative();
                match format {
                    Format::Terms => {
                        let records: Vec<TermRecord> = terms
                            .into_iter()
                            .map(|(exponent, c)| TermRecord {
                                exponent,
                                q_half_powers: vec![[0, c]],
                            })
                            .collect();
                        write_json(&records, out)?;
                    }
                    Format::Text => {
                        for (a, c) in &terms {
                            writeln!(out, "{c} {}", format_exponent(a)).map_err(io)?;
                        }
                    }
                }
            } else {
                let x = e.quantum(&s.seed)?;
                match format {
                    Format::Terms => {
                        let records: Vec<TermRecord> = x
                            .terms()
                            .map(|(a, c)| TermRecord {
                                exponent: a.clone(),
                                q_half_powers: c.terms().rev().map(|(k, v)| [k, v]).collect(),
                            })
                            .collect();
                        write_json(&records, out)?;
                    }
                    Format::Text => write!(out, "{x}").map_err(io)?,
                }
            }
        }
        Command::Matchings { target, count } => {
            let (s, e) = load_target(&target)?;
            if count {
                writeln!(out, "{}", count_matchings(&e.graph)).map_err(io)?;
            } else {
                for (p, a) in e.matchings().iter().zip(&e.exponents) {
                    let edges: Vec<String> = p
                        .edges()
                        .iter()
                        .map(|&k| format!("e{k}:{}", s.triangulation.arc(e.graph.edge(k).label).label))
                        .collect();
                    writeln!(out, "{} {}", format_exponent(a), edges.join(" ")).map_err(io)?;
                }
            }
        }
        Command::Snake { target, dot } => {
            let (s, e) = load_target(&target)?;
            let t = &s.triangulation;
            if dot {
                write!(out, "{}", to_dot(&e.graph, t, None)).map_err(io)?;
            } else {
                for (j, tile) in e.graph.tiles().iter().enumerate() {
                    let sides: Vec<&str> = tile.edges.iter().map(|&k| t.arc(e.graph.edge(k).label).label.as_str()).collect();
                    let orientation = if tile.agrees_with_orientation { "+" } else { "-" };
                    writeln!(
                        out,
                        "tile {} diagonal {} {orientation} sides {}",
                        j + 1,
                        t.arc(tile.diagonal).label,
                        sides.join(" ")
                    )
                    .map_err(io)?;
                }
            }
        }
        Command::Verify { files, check } => {
            let mode = SeedCheckMode::from_env()?;
            let mut ok = true;
            for f in &files {
                let s = Scenario::load(f)?;
                let report = verify(&s, check.as_deref(), mode)?;
                for w in &report.warnings {
                    writeln!(err, "warning: {w}").map_err(io)?;
                }
                write!(out, "{report}").map_err(io)?;
                ok &= report.passed();
            }
            return Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED });
        }
        Command::Scenario {
            command: ScenarioCommand::Gen { kind, output },
        } => {
            let s = match kind {
                GenKind::Polygon {
                    vertices,
                    apex,
                    flip_depth,
                    cover,
                } => {
                    let plan = if cover {
                        FlipPlan::CoverAllDiagonals
                    } else {
                        FlipPlan::Depth(flip_depth.unwrap_or(1))
                    };
                    generate_polygon(vertices, apex, plan)?
                }
                GenKind::Example => example6_1(),
            };
            write_document(&s.serialize(), output.as_deref(), out)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_json(records: &[TermRecord], out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let text = serde_json::to_string_pretty(records).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(io)
}

fn write_document(text: &str, path: Option<&Path>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())).into()),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}
