//! `modlin`: solve `A x ≡ b (mod n)`, optionally with `gcd(<w, x>, n) = 1`.
//!
//! Exit codes: 0 solved, 2 proven to have no solution, 1 input error.

mod bench;
mod commands;
mod problem;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modlin_core::BigInt;

use commands::{CliError, Output, SolveOptions, EXIT_INPUT, EXIT_NO_SOLUTION, EXIT_SOLVED};
use problem::FieldSpec;

#[derive(Parser)]
#[command(name = "modlin", version, about = "Exact linear systems modulo n via Smith forms and p-adic Bezout")]
struct Cli {
    /// Largest modulus factored automatically when no factorization is given.
    #[arg(long, global = true, env = "MODLIN_FACTOR_BOUND", value_name = "N")]
    factor_bound: Option<BigInt>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolveArgs {
    /// Problem file.
    file: String,
    /// Prime-power factorization of the modulus, e.g. "2^3 3^2 5^1".
    #[arg(long)]
    factors: Option<String>,
    /// Print P, Q, S for every Smith decomposition used.
    #[arg(long)]
    emit_certificates: bool,
    /// Maximum number of prime-power subproblems solved concurrently.
    #[arg(long, default_value_t = 1, value_name = "N")]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file (CRT over prime powers unless --direct).
    Solve {
        #[command(flatten)]
        args: SolveArgs,
        /// Reduce [A, -nI] modulo n directly instead of per prime power.
        #[arg(long)]
        direct: bool,
        /// Re-read the produced report and check it against the problem.
        #[arg(long)]
        verify: bool,
    },
    /// Solve by CRT and list every prime-power residue.
    Crt {
        #[command(flatten)]
        args: SolveArgs,
    },
    /// Smith normal form of the file's matrix, with certificates.
    Smith { file: String },
    /// Bezout certificate for a x + p^r y = gcd(a, p^r).
    #[command(allow_negative_numbers = true)]
    Bezout {
        a: String,
        p: String,
        /// Exponent; with --byte, the number of base-p^d digits.
        r: String,
        /// Work in base q = p^d.
        #[arg(long, value_name = "D")]
        byte: Option<u64>,
        #[arg(long)]
        emit_certificates: bool,
    },
    /// Solve A x = b with <w, x> != 0 over a field.
    Field {
        file: String,
        /// "rational" or a prime; overrides the file's field line.
        #[arg(long, value_name = "SPEC")]
        field: Option<String>,
    },
    /// Operation counts of p-adic versus Euclidean Bezout, and a --jobs check.
    Bench {
        /// Operand sizes in bits, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_SIZES)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = BigInt::from(3))]
        prime: BigInt,
        /// Random operands per size.
        #[arg(long, default_value_t = 16)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker count compared against a single worker.
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
    /// Check a report produced by solve, crt or field against its problem.
    Verify { problem: String, report: String },
}

fn solve_options(args: &SolveArgs, factor_bound: Option<BigInt>) -> SolveOptions {
    SolveOptions {
        factors: args.factors.clone(),
        factor_bound,
        emit_certificates: args.emit_certificates,
        jobs: args.jobs.max(1),
        direct: false,
        list_residues: false,
    }
}

fn parse_field(spec: &str) -> Result<FieldSpec, CliError> {
    if spec == "rational" {
        return Ok(FieldSpec::Rational);
    }
    spec.parse::<BigInt>()
        .map(FieldSpec::Prime)
        .map_err(|_| CliError::Input(format!("--field: expected 'rational' or a prime, got '{spec}'")))
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let bound = cli.factor_bound;
    match cli.command {
        Command::Solve { args, direct, verify } => {
            let problem = commands::load_problem(&args.file)?;
            let opts = SolveOptions {
                direct,
                ..solve_options(&args, bound)
            };
            let mut out = commands::cmd_solve(&problem, &opts)?;
            if verify {
                let check = commands::cmd_verify(&problem, &out.report.to_string(), &opts)?;
                let passed = check.code == out.code;
                out.report.push("roundtrip", if passed { "pass" } else { "FAILED" });
                if !passed {
                    out.code = EXIT_INPUT;
                }
            }
            Ok(out)
        }
        Command::Crt { args } => {
            let problem = commands::load_problem(&args.file)?;
            let opts = SolveOptions {
                list_residues: true,
                ..solve_options(&args, bound)
            };
            commands::cmd_solve(&problem, &opts)
        }
        Command::Smith { file } => Ok(commands::cmd_smith(&commands::load_problem(&file)?)),
        Command::Bezout {
            a,
            p,
            r,
            byte,
            emit_certificates,
        } => commands::cmd_bezout(&a, &p, &r, byte, emit_certificates),
        Command::Field { file, field } => {
            let problem = commands::load_problem(&file)?;
            let spec = field.as_deref().map(parse_field).transpose()?;
            commands::cmd_field(&problem, spec)
        }
        Command::Bench {
            sizes,
            prime,
            samples,
            seed,
            jobs,
        } => {
            if !modlin_core::arith::is_probable_prime(&prime) {
                return Err(CliError::Input(format!("--prime: {prime} is not prime")));
            }
            let rows = bench::measure(&prime, &sizes, samples.max(1), seed);
            let identical = bench::jobs_identical(seed, jobs.max(2));
            let mut report = report::Report::new();
            report.push(
                "jobs_check",
                if identical {
                    format!("identical (jobs=1 vs jobs={})", jobs.max(2))
                } else {
                    format!("MISMATCH (jobs=1 vs jobs={})", jobs.max(2))
                },
            );
            Ok(Output {
                lead: Some(bench::table(&prime, &rows).trim_end().to_string()),
                report,
                code: if identical { EXIT_SOLVED } else { EXIT_INPUT },
            })
        }
        Command::Verify { problem, report } => {
            let p = commands::load_problem(&problem)?;
            let text = std::fs::read_to_string(&report).map_err(|source| CliError::Io { path: report, source })?;
            commands::cmd_verify(&p, &text, &SolveOptions::default())
        }
    }
}

fn main() -> ExitCode {
    // clap's own usage errors would exit with 2, which is reserved
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            if let Some(lead) = &out.lead {
                println!("{lead}");
            }
            print!("{}", out.report);
            match out.code {
                EXIT_SOLVED => ExitCode::SUCCESS,
                EXIT_NO_SOLUTION => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
