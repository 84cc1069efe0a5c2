//! Command-line front end. JSON results go to stdout, one-line summaries
//! to stderr. Exit codes: 0 success, 1 a verification found
//! counterexamples, 2 usage or domain errors, 3 resource caps.

use std::io::Read;

use clap::{Parser, Subcommand};

use tropcrys::error::{Error, Result};
use tropcrys::expr::tropicalize;
use tropcrys::geom::{self, catalog_entry, verify_suite, CatalogTarget, Suite};
use tropcrys::pcrystal::{self, crystal_graph, perfectness_check, CrystalElt};
use tropcrys::udiso::{self, LatticePoint, Region};

#[derive(Parser)]
#[command(name = "tropcrys", version, about = "Two-row crystals, birational torus actions, and their tropical bridge")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-row array crystals at a finite level.
    #[command(subcommand)]
    Crystal(CrystalCmd),
    /// Birational torus actions and their verification suites.
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Piecewise-linear lattice crystal and the chart isomorphism.
    #[command(subcommand)]
    Ud(UdCmd),
}

#[derive(Subcommand)]
enum CrystalCmd {
    /// List every element at the given rank and level.
    Enum {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: u64,
    },
    /// Apply one operator (f0..fn or e0..en) to a JSON element.
    Apply {
        /// Operator name, e.g. f0 or e2.
        #[arg(long)]
        op: String,
        /// Path to the element JSON, or - for stdin.
        #[arg(long)]
        elt: String,
    },
    /// Emit the colored lowering graph.
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: u64,
        /// Output format: json or dot.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Check the minimal-element bijections and crystal axioms.
    Perfect {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        l: u64,
    },
}

#[derive(Subcommand)]
enum GeomCmd {
    /// Evaluate a weight (gammaI), string function (epsI), or action (eI)
    /// at a rational torus point.
    Eval {
        #[arg(long)]
        n: usize,
        /// Comma-separated rational coordinates x_2..x_{2n-1}.
        #[arg(long)]
        point: String,
        /// One of gammaI, epsI, or eI.
        #[arg(long)]
        action: String,
        /// Rational parameter for eI actions.
        #[arg(long)]
        c: Option<String>,
    },
    /// Run a verification suite on seeded random positive points.
    Verify {
        /// One of axioms, lemma41, sigma-commute, eq43.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum UdCmd {
    /// Apply one lattice operator (f0..fn or e0..en) to a point.
    Apply {
        /// Operator name, e.g. f0 or e2.
        #[arg(long)]
        op: String,
        /// Comma-separated integer coordinates x_2..x_{2n-1}.
        #[arg(long)]
        point: String,
        #[arg(long)]
        n: usize,
    },
    /// Run a lattice verification suite (iso or mechanical).
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: usize,
        /// Check every point of [-R, R]^{2n-2}.
        #[arg(long, value_name = "R", conflicts_with_all = ["trials", "seed"])]
        r#box: Option<i64>,
        /// Number of sampled points (used when no box is given).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Show a catalog expression and its tropical rewrite.
    Tropicalize {
        /// One of gammaI, epsI, or eI:K.
        #[arg(long)]
        target: String,
        #[arg(long)]
        n: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceCap(_) => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn emit(value: &serde_json::Value) {
    println!("{value}");
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Crystal(cmd) => run_crystal(cmd),
        Command::Geom(cmd) => run_geom(cmd),
        Command::Ud(cmd) => run_ud(cmd),
    }
}

fn run_crystal(cmd: CrystalCmd) -> Result<i32> {
    match cmd {
        CrystalCmd::Enum { n, l } => {
            let elements = pcrystal::enumerate(n, l)?;
            emit(&serde_json::json!({
                "n": n,
                "l": l,
                "count": elements.len(),
                "elements": elements.iter().map(|b| b.to_json()).collect::<Vec<_>>(),
            }));
            eprintln!("{} elements at n={n}, l={l}", elements.len());
            Ok(0)
        }
        CrystalCmd::Apply { op, elt } => {
            let text = if elt == "-" {
                let mut buf = String::new();
                std::io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
                buf
            } else {
                std::fs::read_to_string(&elt)
                    .map_err(|e| Error::Parse(format!("cannot read {elt}: {e}")))?
            };
            let b = CrystalElt::parse_json(&text)?;
            match pcrystal::apply_named(&op, &b)? {
                Some(next) => {
                    emit(&next.to_json());
                    eprintln!("{op}: {} -> {}", b.text(), next.text());
                }
                None => {
                    emit(&serde_json::Value::Null);
                    eprintln!("{op}: undefined at {}", b.text());
                }
            }
            Ok(0)
        }
        CrystalCmd::Graph { n, l, format } => {
            let graph = crystal_graph(n, l)?;
            match format.as_str() {
                "json" => emit(&graph.to_json()),
                "dot" => print!("{}", graph.to_dot()),
                other => {
                    return Err(Error::Parse(format!(
                        "unknown format {other:?}; expected json or dot"
                    )))
                }
            }
            eprintln!(
                "graph at n={n}, l={l}: {} nodes, {} edges",
                graph.nodes().len(),
                graph.edges().len()
            );
            Ok(0)
        }
        CrystalCmd::Perfect { n, l } => {
            let report = perfectness_check(n, l)?;
            emit(&serde_json::to_value(&report).expect("report serialization cannot fail"));
            let verdict = if report.passed() { "pass" } else { "FAIL" };
            eprintln!(
                "perfectness at n={n}, l={l}: {verdict} ({} minimal of {} expected)",
                report.minimal_count, report.expected_minimal
            );
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn run_geom(cmd: GeomCmd) -> Result<i32> {
    match cmd {
        GeomCmd::Eval { n, point, action, c } => {
            let value = geom::eval_action(n, &point, &action, c.as_deref())?;
            emit(&value);
            Ok(0)
        }
        GeomCmd::Verify { suite, n, trials, seed } => {
            let suite: Suite = suite.parse()?;
            let report = verify_suite(suite, n, trials, seed)?;
            emit(&serde_json::to_value(&report).expect("report serialization cannot fail"));
            let verdict = if report.passed() { "pass" } else { "FAIL" };
            eprintln!(
                "suite {} at n={n}: {verdict} ({} checks, {} failures)",
                report.suite, report.checks_run, report.failure_count
            );
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

fn run_ud(cmd: UdCmd) -> Result<i32> {
    match cmd {
        UdCmd::Apply { op, point, n } => {
            let p = LatticePoint::parse(n, &point)?;
            let moved = udiso::apply_named(&op, &p)?;
            emit(&moved.to_json());
            eprintln!("{op}: ({}) -> ({})", p.text(), moved.text());
            Ok(0)
        }
        UdCmd::Check { suite, n, r#box, trials, seed } => {
            let region = match (r#box, trials, seed) {
                (Some(radius), _, _) => Region::Box { radius },
                (None, None, None) => Region::default_for(n),
                (None, count, seed) => Region::Sample {
                    count: count.unwrap_or(10_000),
                    seed: seed.unwrap_or(2024),
                },
            };
            let report = match suite.as_str() {
                "iso" => udiso::verify_iso(n, region)?,
                "mechanical" => udiso::verify_ud_mechanical(n, region)?,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown suite {other:?}; expected iso or mechanical"
                    )))
                }
            };
            emit(&serde_json::to_value(&report).expect("report serialization cannot fail"));
            let verdict = if report.passed() { "pass" } else { "FAIL" };
            eprintln!(
                "suite {} at n={n} over {}: {verdict} ({} checks, {} failures)",
                report.suite, report.region, report.checks_run, report.failure_count
            );
            Ok(if report.passed() { 0 } else { 1 })
        }
        UdCmd::Tropicalize { target, n } => {
            let target: CatalogTarget = target.parse()?;
            let source = catalog_entry(n, target)?;
            let tropical = tropicalize(&source);
            emit(&serde_json::json!({
                "n": n,
                "target": target.to_string(),
                "source": source.to_string(),
                "tropical": tropical.to_string(),
            }));
            Ok(0)
        }
    }
}
