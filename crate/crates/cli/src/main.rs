//! `fatplane`: bounds, expected dimensions and verification experiments.

mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fatplane_core::bounds::best_bound;
use fatplane_core::combinatorics::{rho_expected, Multidegree};
use fatplane_core::field::{PrimeField, DEFAULT_MODULUS};
use fatplane_core::report::paper_examples;
use fatplane_core::verifiers::{
    fat_point_search, lastineg_check, maxrank_mc, minimal_p_count, quadric_exception,
    rho_prime_identity, tangent_rank_mc, verify_codim, verify_codim_grid, ExperimentReport,
    Verdict,
};
use fatplane_core::Error;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_TRIALS: u64 = 20;
const QUADRIC_TRIALS: u64 = 100;
const FAT_POINT_MODULUS: u64 = 7;

#[derive(Parser)]
#[command(
    name = "fatplane",
    version,
    about = "Fat planes in complete intersections"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Prime field modulus.
    #[arg(long, global = true, env = "FATPLANE_P")]
    p: Option<u64>,
    /// Master seed for randomized experiments.
    #[arg(long, global = true, env = "FATPLANE_SEED")]
    seed: Option<u64>,
    /// Number of Monte Carlo trials.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    trials: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Chow-triviality bounds for r-cycles.
    Bound {
        #[arg(short)]
        r: u32,
        /// Non-decreasing degrees, comma-separated.
        #[arg(short, value_parser = parse_dd)]
        d: Multidegree,
        /// Admit big steps with degree-2 entries.
        #[arg(long)]
        conjectural: bool,
    },
    /// Expected dimension of t-fat r-planes.
    Rho {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        r: u32,
        #[arg(short)]
        t: u32,
        #[arg(short, value_parser = parse_dd)]
        d: Multidegree,
    },
    /// Run a verification experiment.
    #[command(subcommand)]
    Verify(Experiment),
    /// Reproduction tables.
    #[command(subcommand)]
    Report(ReportKind),
}

#[derive(Subcommand)]
enum Experiment {
    /// Restriction rank of degree-d forms (single case, or the grid).
    Codim(CodimArgs),
    /// Generic surjectivity of H^0(m).
    Maxrank {
        #[arg(short)]
        r: u32,
        /// Fat multiplicity; defaults to the largest degree.
        #[arg(short)]
        t: Option<u32>,
        #[arg(short, value_parser = parse_dd)]
        d: Multidegree,
        #[arg(long)]
        p_count: u32,
        /// Accept parameters outside the proven regime.
        #[arg(long)]
        informational: bool,
    },
    /// Rank of the normal-bundle matrix at random containing systems.
    Tangent {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        r: u32,
        #[arg(short)]
        t: u32,
        #[arg(short, value_parser = parse_dd)]
        d: Multidegree,
    },
    /// The final numeric inequality; p_count defaults to its minimum.
    Lastineg {
        #[arg(short)]
        r: u32,
        #[arg(short, value_parser = parse_dd)]
        d: Multidegree,
        #[arg(long)]
        p_count: Option<u32>,
    },
    /// Double lines on quadric surfaces.
    Quadric,
    /// Three evaluations of the expected dimension through a point.
    Rhoprime {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        r: u32,
        #[arg(short, value_parser = parse_dd)]
        d: Multidegree,
    },
    /// Fat points on a random complete intersection over a small field.
    Fatpoint {
        #[arg(short)]
        n: u32,
        #[arg(short, value_parser = parse_dd)]
        d: Multidegree,
        /// Largest field extension degree searched (1 or 2).
        #[arg(long, default_value_t = 1)]
        extension: u32,
    },
}

#[derive(Args)]
struct CodimArgs {
    /// Run every case with n <= 5, r <= 2, 2 <= t <= d <= 4.
    #[arg(long, conflicts_with_all = ["n", "r", "t", "d"])]
    grid: bool,
    #[arg(short, required_unless_present = "grid")]
    n: Option<u32>,
    #[arg(short, required_unless_present = "grid")]
    r: Option<u32>,
    #[arg(short, required_unless_present = "grid")]
    t: Option<u32>,
    #[arg(short, required_unless_present = "grid")]
    d: Option<u32>,
}

#[derive(Subcommand)]
enum ReportKind {
    /// Published bound values against computed ones.
    PaperExamples {
        /// r for the two-equation row.
        #[arg(short, default_value_t = 5)]
        r: u32,
        /// Two degrees for the two-equation row.
        #[arg(short, value_parser = parse_dd, default_value = "20,30")]
        d: Multidegree,
    },
}

fn parse_dd(s: &str) -> Result<Multidegree, String> {
    s.parse::<Multidegree>().map_err(|e| match e {
        Error::Usage(msg) => msg,
        other => other.to_string(),
    })
}

struct Outcome {
    text: String,
    failed: bool,
}

fn experiments(reports: &[ExperimentReport], format: Format) -> Outcome {
    Outcome {
        text: render::experiments(reports, format),
        failed: reports.iter().any(|r| r.verdict == Verdict::Fail),
    }
}

fn run(cli: Cli) -> fatplane_core::Result<Outcome> {
    let format = cli.format;
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let field = || PrimeField::new(cli.p.unwrap_or(DEFAULT_MODULUS));
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);
    let ok = |text| Outcome {
        text,
        failed: false,
    };
    Ok(match cli.command {
        Command::Bound { r, d, conjectural } => {
            ok(render::bound(&best_bound(r, &d, conjectural), format))
        }
        Command::Rho { n, r, t, d } => ok(render::rho(&rho_expected(n, r, t, &d)?, format)),
        Command::Verify(exp) => {
            let reports = match exp {
                Experiment::Codim(a) => {
                    if a.grid {
                        verify_codim_grid(5, 2, 4, field()?)?
                    } else {
                        let (n, r, t, d) = (a.n.unwrap(), a.r.unwrap(), a.t.unwrap(), a.d.unwrap());
                        vec![verify_codim(n, r, t, d, field()?)?]
                    }
                }
                Experiment::Maxrank {
                    r,
                    t,
                    d,
                    p_count,
                    informational,
                } => {
                    let t = t.unwrap_or(d.max());
                    vec![maxrank_mc(
                        r,
                        t,
                        &d,
                        p_count,
                        field()?,
                        trials,
                        seed,
                        informational,
                    )?]
                }
                Experiment::Tangent { n, r, t, d } => {
                    vec![tangent_rank_mc(n, r, t, &d, field()?, trials, seed)?]
                }
                Experiment::Lastineg { r, d, p_count } => {
                    let p_count = p_count.unwrap_or_else(|| minimal_p_count(r, &d));
                    vec![lastineg_check(r, &d, p_count)?]
                }
                Experiment::Quadric => {
                    vec![quadric_exception(
                        field()?,
                        cli.trials.unwrap_or(QUADRIC_TRIALS),
                        seed,
                    )?]
                }
                Experiment::Rhoprime { n, r, d } => vec![rho_prime_identity(n, r, &d)?],
                Experiment::Fatpoint { n, d, extension } => {
                    let small = PrimeField::new(cli.p.unwrap_or(FAT_POINT_MODULUS))?;
                    vec![fat_point_search(n, &d, small, extension, seed)?]
                }
            };
            experiments(&reports, format)
        }
        Command::Report(ReportKind::PaperExamples { r, d }) => {
            ok(render::paper_examples(&paper_examples(r, &d)?, format))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
