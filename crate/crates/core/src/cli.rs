//! Command-line front end. [`run`] takes the arguments and output streams so
//! it can be driven from tests.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{counting_active, parse_sizes, render_table, run_bench, Family};
use crate::fast::solve_fast_traced;
use crate::format::{
    parse_instance, parse_solution, render_instance, render_solution, verify_solution,
};
use crate::gen::{gen_distinctness, gen_random, GenSpec};
use crate::model::{to_two_direction, Direction, Instance, Solution};
use crate::oracle::{brute_force, OracleError};
use crate::prelim::solve_preliminary;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Parser)]
#[command(
    name = "intsep",
    version,
    about = "Separate overlapping intervals with minimum max-displacement"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file and write a solution file.
    Solve(SolveArgs),
    /// Check a solution file against an instance file.
    Verify(VerifyArgs),
    /// Print a generated instance file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Time the solvers on random instances of growing size.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    One,
    Two,
}

impl From<Mode> for Direction {
    fn from(m: Mode) -> Direction {
        match m {
            Mode::One => Direction::One,
            Mode::Two => Direction::Two,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Fast,
    Prelim,
    Brute,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance file, or `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "one")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "fast")]
    algo: Algo,
    /// Solution file; stdout when omitted or `-`.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Write the per-step trace of the fast solver here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, value_enum, default_value = "one")]
    mode: Mode,
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    /// Unit intervals centred at ten times each value.
    Distinct {
        /// Comma-separated integers, e.g. `3,5,3`.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
    },
    /// Seeded random intervals with occasional nesting.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest left endpoint (default 4n).
        #[arg(long)]
        coord_max: Option<i64>,
        #[arg(long)]
        len_min: Option<i64>,
        /// Longest interval (default n).
        #[arg(long)]
        len_max: Option<i64>,
        /// Probability of drawing inside an earlier interval.
        #[arg(long)]
        bias: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value = "1e4,1e5,1e6")]
    sizes: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    /// `random` instances, or the `comb` worst case of the quadratic solver.
    #[arg(long, value_enum, default_value = "random")]
    family: BenchFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFamily {
    Random,
    Comb,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if is_stdio(path) {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    let text = read_text(path)?;
    parse_instance(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_to(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Outcome {
    match path {
        Some(p) if !is_stdio(p) => {
            fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display())))
        }
        _ => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("stdout: {e}"))),
    }
}

fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> Outcome {
    if args.trace.is_some() && args.algo != Algo::Fast {
        return Err(Failure::input("--trace requires --algo fast"));
    }
    let inst = read_instance(&args.input)?;
    let one: Solution = match args.algo {
        Algo::Fast => {
            let (solve, trace) = solve_fast_traced(&inst);
            if let Some(path) = &args.trace {
                write_to(Some(path), &trace, stdout)?;
            }
            solve.reconstruct(&inst).map_err(|e| Failure {
                code: EXIT_INTERNAL,
                message: format!("internal error: {e}"),
            })?
        }
        Algo::Prelim => solve_preliminary(&inst),
        Algo::Brute => brute_force(&inst).map_err(|e| match e {
            OracleError::TooLarge { .. } => Failure {
                code: EXIT_TOO_LARGE,
                message: e.to_string(),
            },
            other => Failure::input(other.to_string()),
        })?,
    };
    let sol = match args.mode {
        Mode::One => one,
        Mode::Two => to_two_direction(&one),
    };
    write_to(
        args.output.as_deref(),
        &render_solution(&inst, &sol),
        stdout,
    )
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Outcome {
    let inst = read_instance(&args.input)?;
    let text = read_text(&args.solution)?;
    let file = parse_solution(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", args.solution.display())))?;
    match verify_solution(&inst, &file, args.mode.into()) {
        Ok(delta) => write_to(None, &format!("ok delta {delta}\n"), stdout),
        Err(e) => Err(Failure {
            code: EXIT_VERIFY_FAILED,
            message: e.to_string(),
        }),
    }
}

fn cmd_gen(cmd: &GenCommand, stdout: &mut dyn Write) -> Outcome {
    let inst = match cmd {
        GenCommand::Distinct { values } => {
            let vals = values
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<i64>()
                        .map_err(|_| Failure::input(format!("invalid value `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            gen_distinctness(&vals).map_err(|e| Failure::input(e.to_string()))?
        }
        GenCommand::Random {
            n,
            seed,
            coord_max,
            len_min,
            len_max,
            bias,
        } => {
            if *n == 0 {
                return Err(Failure::input("--n must be positive"));
            }
            let mut spec = GenSpec::new(*n, *seed);
            spec.coord_max = coord_max.unwrap_or(spec.coord_max);
            spec.len_min = len_min.unwrap_or(spec.len_min);
            spec.len_max = len_max.unwrap_or(spec.len_max);
            spec.containment_bias = bias.unwrap_or(spec.containment_bias);
            if spec.len_min < 1 || spec.len_min > spec.len_max || spec.coord_max < 0 {
                return Err(Failure::input("invalid generator bounds"));
            }
            if !(0.0..=1.0).contains(&spec.containment_bias) {
                return Err(Failure::input("--bias must lie in [0, 1]"));
            }
            gen_random(&spec)
        }
    };
    write_to(None, &render_instance(&inst), stdout)
}

fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let sizes = parse_sizes(&args.sizes).map_err(Failure::input)?;
    if !counting_active() {
        let _ = writeln!(stderr, "note: heap tracking is not active in this build");
    }
    let family = match args.family {
        BenchFamily::Random => Family::Random,
        BenchFamily::Comb => Family::Comb,
    };
    let rows = run_bench(&sizes, args.seed, args.repeat, family);
    write_to(None, &render_table(&rows), stdout)
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Gen(g) => cmd_gen(g, stdout),
        Command::Bench(a) => cmd_bench(a, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
