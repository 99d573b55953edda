use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use affreach::bridge::{gen_hard, HardVariant};
use affreach::dispatch::{solve, verify, SolveOptions, Solver};
use affreach::io::{parse_instance, write_instance, ResultFile, VerdictKind};
use affreach::machines::{reduce_bca_to_arm, PrmBudget};
use affreach::xcheck::{instance_rng, random_instance, xcheck, Family, RandomSpec};
use affreach::{Budget, Error, Int, ProblemInstance, Verdict};
use clap::{Parser, Subcommand};

const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "affreach", version, about = "Reachability for 2x2 integer matrices, affine maps and one-register machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file ("-" for stdin). Exit 0 yes, 1 no, 2 unknown, 3 error.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "auto", value_parser = parse_solver)]
        solver: Solver,
        /// Maximal product length for searches.
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        /// Discard search nodes with larger entries; "none" for no cap.
        #[arg(long, default_value = "1000000")]
        max_magnitude: String,
        /// Step bound for register-machine searches.
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Replay the witness of a result file. Exit 0 if it replays, 1 if not.
    Verify { instance: PathBuf, result: PathBuf },
    /// Write an instance file to stdout.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Compare the exact solvers with the oracle on seeded random instances.
    Xcheck {
        #[arg(long, default_value_t = 200)]
        count: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Restrict to one family; all families by default.
        #[arg(long, value_parser = parse_family)]
        family: Option<Family>,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Matrix instance that is positive iff t is a non-negative combination of the a_i.
    Multisubsetsum {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<Int>,
        #[arg(long)]
        t: Int,
        #[arg(long, default_value = "membership", value_parser = parse_variant)]
        variant: HardVariant,
    },
    /// Affine register machine equivalent to a bounded one-counter automaton instance.
    Bca2arm { instance: PathBuf },
    Random {
        #[arg(long, default_value = "detpm1", value_parser = parse_family)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator count; random in 1..=4 when omitted.
        #[arg(long)]
        generators: Option<usize>,
        #[arg(long, default_value_t = 3)]
        entry: i64,
    },
}

fn parse_solver(s: &str) -> Result<Solver, String> {
    Solver::parse(s).map_err(|e| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).map_err(|e| e.to_string())
}

fn parse_variant(s: &str) -> Result<HardVariant, String> {
    HardVariant::parse(s).map_err(|e| e.to_string())
}

fn read_input(path: &PathBuf) -> Result<String, Error> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_instance(path: &PathBuf) -> Result<ProblemInstance, Error> {
    parse_instance(&read_input(path)?)
}

fn parse_cap(s: &str) -> Result<Option<Int>, Error> {
    if s == "none" {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::Schema(format!("bad magnitude {s:?}")))
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Solve { instance, solver, max_len, max_magnitude, max_steps } => {
            let inst = read_instance(&instance)?;
            let cap = parse_cap(&max_magnitude)?;
            let budget = Budget { max_len, max_magnitude: cap.clone() };
            let opts = SolveOptions { budget: budget.clone(), prm: PrmBudget::new(max_steps, cap) };
            let solved = solve(&inst, solver, &opts)?;
            println!("{}", ResultFile::new(&solved.verdict, solved.solver.name(), &budget, max_steps).to_json());
            Ok(match solved.verdict {
                Verdict::Yes(_) => 0,
                Verdict::No(_) => 1,
                Verdict::Unknown(_) => 2,
            })
        }
        Command::Verify { instance, result } => {
            let inst = read_instance(&instance)?;
            let result = ResultFile::parse(&read_input(&result)?)?;
            let verdict = result.verdict()?;
            if result.verdict != VerdictKind::Yes {
                return Err(Error::Precondition("only yes verdicts carry a witness".into()));
            }
            match verify(&inst, verdict.witness().expect("yes verdict")) {
                Ok(()) => {
                    println!("ok");
                    Ok(0)
                }
                Err(Error::Replay(msg)) => {
                    eprintln!("mismatch: {msg}");
                    Ok(1)
                }
                Err(e) => Err(e),
            }
        }
        Command::Gen { family } => {
            let inst = match family {
                GenFamily::Multisubsetsum { a, t, variant } => gen_hard(&a, &t, variant),
                GenFamily::Bca2arm { instance } => match read_instance(&instance)? {
                    ProblemInstance::BcaReachability { machine, from, to } => {
                        let red = reduce_bca_to_arm(&machine, &from, &to)?;
                        ProblemInstance::PrmReachability { machine: red.machine, from: red.from, to: red.to }
                    }
                    other => {
                        return Err(Error::Precondition(format!("expected bca-reachability, got {}", other.tag().name())))
                    }
                },
                GenFamily::Random { family, seed, generators, entry } => {
                    random_instance(family, &RandomSpec { generators, entry }, &mut instance_rng(seed, 0))
                }
            };
            println!("{}", write_instance(&inst));
            Ok(0)
        }
        Command::Xcheck { count, seed, family } => {
            let families = family.map_or_else(|| Family::ALL.to_vec(), |f| vec![f]);
            let reports: Vec<_> = families.into_iter().map(|f| xcheck(f, count, seed, &RandomSpec::default())).collect();
            let clean = reports.iter().all(|r| r.is_clean());
            println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
            Ok(if clean { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
