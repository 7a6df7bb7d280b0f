//! `richlines`: generate configurations, enumerate rich lines, partition,
//! count cell visits, detect concentration and run the trichotomy verifier.
//!
//! Exit status: 0 on success, 2 on precondition or input errors, 3 when a
//! verdict is INDETERMINATE, 1 on I/O failures.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use richlines_core::concentrate::best_hyperplane;
use richlines_core::harness::generate::{gen_random_lines, Generator, Scenario};
use richlines_core::harness::io::PointSet;
use richlines_core::harness::sweep::scaling_sweep;
use richlines_core::harness::trichotomy::{
    verify_cheap_corollary, verify_trichotomy, Constants, Verdict,
};
use richlines_core::incidence::{enumerate_rich_lines, refine_bipartite, IncidenceGraph};
use richlines_core::partition::{build_partition, cell_visit_stats};
use richlines_core::{Error, Field, FieldKind, GaussianRational, Line, Point, Rational};

#[derive(Parser)]
#[command(
    name = "richlines",
    version,
    about = "Exact incidence geometry over Q and Q[i]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input document; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    #[value(name = "R")]
    Real,
    #[value(name = "C")]
    Complex,
}

impl From<FieldArg> for FieldKind {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => FieldKind::Real,
            FieldArg::Complex => FieldKind::Complex,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Grid,
    Planted,
    Random,
    Generic,
    Collinear,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Grid)]
    generator: GenKind,
    /// Grid side.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Points on the planted hyperplane.
    #[arg(long)]
    m: Option<usize>,
    /// Number of points (all generators except grid).
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Coordinate range for the random generator.
    #[arg(long, default_value_t = 4)]
    spread: i64,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    field: FieldArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GenArgs {
    fn scenario(&self, k: usize) -> Scenario {
        let generator = match self.generator {
            GenKind::Grid => Generator::Grid { k },
            GenKind::Planted => Generator::Planted {
                m: self.m.unwrap_or(self.n),
                n: self.n,
            },
            GenKind::Random => Generator::Random {
                n: self.n,
                spread: self.spread,
            },
            GenKind::Generic => Generator::Generic { n: self.n },
            GenKind::Collinear => Generator::Collinear { n: k },
        };
        Scenario {
            generator,
            d: self.d,
            field: self.field.into(),
            seed: self.seed,
        }
    }
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long, default_value_t = 3)]
    rounds: usize,
    #[arg(long, default_value = "1/20")]
    delta: Rational,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    r: usize,
    /// The exponent; with --corollary, the cutoff exponent epsilon0.
    #[arg(long, default_value = "1/10")]
    epsilon: Rational,
    /// The slack alpha; with --corollary, alpha'.
    #[arg(long, default_value = "1")]
    alpha: Rational,
    #[arg(long = "big-c", default_value = "1")]
    big_c: Rational,
    #[arg(long = "small-c", default_value = "1")]
    small_c: Rational,
    /// Substitute rho = log r / log n, epsilon = rho/2, alpha = alpha'·r^(1/2).
    #[arg(long)]
    corollary: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point configuration.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Enumerate lines with at least r points.
    Rich {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Refine the point/rich-line incidence graph to its high-degree core.
    Refine {
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Build a polynomial partition of real points.
    Partition {
        #[command(flatten)]
        part: PartitionArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Count cells visited by lines against a partition of the input points.
    Visits {
        #[command(flatten)]
        part: PartitionArgs,
        /// Lines document (a JSON list of lines); random lines when absent.
        #[arg(long)]
        lines: Option<PathBuf>,
        /// Number of random lines.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Find the hyperplane holding the most points.
    Concentrate {
        #[command(flatten)]
        io: Io,
    },
    /// Run the trichotomy verifier.
    Verify {
        #[command(flatten)]
        args: VerifyArgs,
        #[command(flatten)]
        io: Io,
    },
    /// Tabulate normalized rich-line counts across generator sizes.
    Sweep {
        #[command(flatten)]
        gen: GenArgs,
        /// Sizes passed to the generator (grid side or collinear count).
        #[arg(long, value_delimiter = ',', default_values_t = [4, 6, 8])]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[command(flatten)]
        io: Io,
    },
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn json(v: &Value) -> Output {
        Output {
            text: serde_json::to_string_pretty(v).expect("values serialize") + "\n",
            code: 0,
        }
    }
}

fn read_input(io: &Io) -> anyhow::Result<String> {
    match &io.input {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_points(io: &Io) -> anyhow::Result<PointSet> {
    Ok(PointSet::from_json(&read_input(io)?)?)
}

fn json_only(io: &Io) -> anyhow::Result<()> {
    if io.format == Format::Csv {
        bail!(Error::InvalidArgument(
            "csv output is only available for rich and sweep".into()
        ));
    }
    Ok(())
}

fn real_points(set: PointSet) -> anyhow::Result<Vec<Point<Rational>>> {
    Ok(set.into_field::<Rational>()?)
}

fn rich<F: Field>(points: &[Point<F>], r: usize, format: Format) -> anyhow::Result<Output> {
    let set = enumerate_rich_lines(points, r)?;
    if format == Format::Csv {
        let mut text = String::from("line,count\n");
        for (i, (_, count)) in set.entries.iter().enumerate() {
            text.push_str(&format!("{i},{count}\n"));
        }
        return Ok(Output { text, code: 0 });
    }
    Ok(Output::json(&json!({
        "field": F::KIND,
        "n": points.len(),
        "r": r,
        "rich_count": set.len(),
        "max_richness": set.max_richness(),
        "lines": set,
    })))
}

fn refine<F: Field>(points: &[Point<F>], r: usize) -> anyhow::Result<Output> {
    let set = enumerate_rich_lines(points, r)?;
    let graph = IncidenceGraph::from_rich_lines(points, &set)?;
    let refined = refine_bipartite(&graph)?;
    Ok(Output::json(&json!({
        "field": F::KIND,
        "r": r,
        "original": {
            "points": refined.original_points,
            "lines": refined.original_lines,
            "edges": refined.original_edges,
        },
        "refined": {
            "points": refined.graph.points.len(),
            "lines": refined.graph.lines.len(),
            "edges": refined.graph.incidences(),
        },
        "point_ids": refined.point_ids,
        "line_ids": refined.line_ids,
        "point_bound_holds": refined.point_bound_holds(),
        "line_bound_holds": refined.line_bound_holds(),
        "edge_bound_holds": refined.edge_bound_holds(),
    })))
}

fn concentrate<F: Field>(points: &[Point<F>]) -> anyhow::Result<Output> {
    Ok(Output::json(&serde_json::to_value(best_hyperplane(
        points,
    )?)?))
}

fn verify<F: Field>(points: &[Point<F>], args: &VerifyArgs) -> anyhow::Result<Output> {
    let constants = Constants {
        big_c: args.big_c.clone(),
        small_c: args.small_c.clone(),
    };
    let report = if args.corollary {
        verify_cheap_corollary(points, args.r, &args.epsilon, &constants, &args.alpha)?
    } else {
        verify_trichotomy(points, args.r, &args.epsilon, &constants, &args.alpha)?
    };
    let code = if report.verdict == Verdict::Indeterminate {
        3
    } else {
        0
    };
    Ok(Output {
        text: report.to_json() + "\n",
        code,
    })
}

fn sweep<F: richlines_core::harness::generate::Sample>(
    gen: &GenArgs,
    ks: &[usize],
    r: usize,
    format: Format,
) -> anyhow::Result<Output> {
    let table = scaling_sweep(|k| gen.scenario(k).generate_in::<F>(), ks, r, gen.d)?;
    if format == Format::Csv {
        return Ok(Output {
            text: table.to_csv(),
            code: 0,
        });
    }
    Ok(Output::json(&serde_json::to_value(&table)?))
}

fn run(cli: Cli) -> anyhow::Result<(Output, Option<PathBuf>)> {
    let (out, io) = match cli.command {
        Command::Gen { gen, io } => {
            json_only(&io)?;
            let set = gen.scenario(gen.k).generate()?;
            (
                Output {
                    text: set.to_json() + "\n",
                    code: 0,
                },
                io,
            )
        }
        Command::Rich { r, io } => {
            let out = match read_points(&io)? {
                PointSet::Real(p) => rich(&p, r, io.format)?,
                PointSet::Complex(p) => rich(&p, r, io.format)?,
            };
            (out, io)
        }
        Command::Refine { r, io } => {
            json_only(&io)?;
            let out = match read_points(&io)? {
                PointSet::Real(p) => refine(&p, r)?,
                PointSet::Complex(p) => refine(&p, r)?,
            };
            (out, io)
        }
        Command::Partition { part, io } => {
            json_only(&io)?;
            let points = real_points(read_points(&io)?)?;
            let partition = build_partition(&points, part.rounds, &part.delta, part.seed)?;
            let summary = json!({
                "max_cell_size": partition.max_cell_size(),
                "occupancy_bound": partition.occupancy_bound(),
                "occupancy_holds": partition.occupancy_holds(),
                "partition": partition,
            });
            (Output::json(&summary), io)
        }
        Command::Visits {
            part,
            lines,
            count,
            io,
        } => {
            json_only(&io)?;
            let points = real_points(read_points(&io)?)?;
            let d = points.first().map(Point::dim).ok_or(Error::EmptyInput)?;
            let lines: Vec<Line<Rational>> = match lines {
                Some(p) => {
                    let text = fs::read_to_string(&p)
                        .with_context(|| format!("reading {}", p.display()))?;
                    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?
                }
                None => gen_random_lines(count, d, part.seed)?,
            };
            let partition = build_partition(&points, part.rounds, &part.delta, part.seed)?;
            let stats = cell_visit_stats(&lines, &partition)?;
            let summary = json!({
                "within_degree_bound": stats.within_degree_bound(),
                "stats": stats,
            });
            (Output::json(&summary), io)
        }
        Command::Concentrate { io } => {
            json_only(&io)?;
            let out = match read_points(&io)? {
                PointSet::Real(p) => concentrate(&p)?,
                PointSet::Complex(p) => concentrate(&p)?,
            };
            (out, io)
        }
        Command::Verify { args, io } => {
            json_only(&io)?;
            let out = match read_points(&io)? {
                PointSet::Real(p) => verify(&p, &args)?,
                PointSet::Complex(p) => verify(&p, &args)?,
            };
            (out, io)
        }
        Command::Sweep { gen, ks, r, io } => {
            let out = match FieldKind::from(gen.field) {
                FieldKind::Real => sweep::<Rational>(&gen, &ks, r, io.format)?,
                FieldKind::Complex => sweep::<GaussianRational>(&gen, &ks, r, io.format)?,
            };
            (out, io)
        }
    };
    Ok((out, io.output))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(out, path)| {
        match path {
            Some(p) => {
                fs::write(&p, &out.text).with_context(|| format!("writing {}", p.display()))?
            }
            None => io::stdout()
                .write_all(out.text.as_bytes())
                .context("writing stdout")?,
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Error>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
