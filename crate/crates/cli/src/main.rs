use std::fmt::{self, Write as _};
use std::fs;
use std::io::{self, Write as _};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tripknot::bracket_oracle::{kauffman_bracket, OracleError};
use tripknot::gauss_code::{GaussError, SignedGaussCode};
use tripknot::gf2_matrix::Gf2Matrix;
use tripknot::jones_engine::{
    jones_with, state_sum_with, verify_multiplicative, EngineError, SumOptions,
};
use tripknot::knot_table::{all_entries, lookup};
use tripknot::laurent_poly::{PolyError, Term};
use tripknot::trip_matrix::{delta_equivalent, TripError, TripMatrix};

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_RESOURCE: u8 = 4;
const EXIT_VERIFICATION: u8 = 5;

#[derive(Parser)]
#[command(
    name = "tripknot",
    version,
    about = "Jones polynomials from trip matrices"
)]
struct Cli {
    /// Worker threads for state sums.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// Signed Gauss code, e.g. "O1+ U2+ O3+ U1+ O2+ U3+".
    #[arg(long, value_name = "CODE")]
    gauss: Vec<String>,
    /// Name from the built-in knot table.
    #[arg(long, value_name = "NAME")]
    knot: Vec<String>,
    /// File holding a Gauss code; lines starting with '#' are ignored.
    #[arg(long, value_name = "PATH")]
    file: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Jones polynomial.
    Jones {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        json: bool,
    },
    /// Print the trip matrix.
    Matrix {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Print the Kauffman bracket in q from the loop-counting oracle.
    Bracket {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Decide whether two trip matrix files differ by a relabeling.
    DeltaEq { first: String, second: String },
    /// Connect-sum the inputs left to right and print the composite code.
    Consum {
        #[command(flatten)]
        inputs: Inputs,
        /// Word position at which each further factor is inserted.
        #[arg(long, default_value_t = 0)]
        at: usize,
    },
    /// Check multiplicativity of the Jones polynomial over the inputs.
    VerifyMult {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// List the built-in knot table.
    Table,
    /// Time state sums on random codes of growing size.
    Bench {
        #[arg(long, default_value_t = 8)]
        min_n: usize,
        #[arg(long, default_value_t = 20)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        step: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

impl From<fmt::Error> for Failure {
    fn from(e: fmt::Error) -> Self {
        fail(1, e)
    }
}

impl From<GaussError> for Failure {
    fn from(e: GaussError) -> Self {
        let code = match e {
            GaussError::Syntax { .. } => EXIT_PARSE,
            _ => EXIT_VALIDATION,
        };
        fail(code, e)
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        fail(EXIT_RESOURCE, e)
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Gauss(g) => g.into(),
            EngineError::TooLarge { .. } | EngineError::Poly(_) => fail(EXIT_RESOURCE, e),
            _ => fail(1, e),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::TooLarge { .. } | OracleError::Poly(_) => fail(EXIT_RESOURCE, e),
            _ => fail(1, e),
        }
    }
}

/// Inputs in command-line order, whichever flag each came from.
fn ordered_inputs(m: &ArgMatches) -> Result<Vec<SignedGaussCode>, Failure> {
    let mut tagged: Vec<(usize, &str, &String)> = Vec::new();
    for id in ["gauss", "knot", "file"] {
        if let (Some(idx), Some(vals)) = (m.indices_of(id), m.get_many::<String>(id)) {
            tagged.extend(idx.zip(vals).map(|(i, v)| (i, id, v)));
        }
    }
    tagged.sort_by_key(|&(i, _, _)| i);
    tagged
        .into_iter()
        .map(|(_, id, v)| match id {
            "gauss" => Ok(v.parse::<SignedGaussCode>()?),
            "knot" => Ok(lookup(v)
                .map_err(|e| fail(EXIT_VALIDATION, e))?
                .code
                .clone()),
            _ => {
                let text =
                    fs::read_to_string(v).map_err(|e| fail(EXIT_PARSE, format!("{v}: {e}")))?;
                let joined: Vec<&str> = text
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.starts_with('#'))
                    .collect();
                Ok(joined.join(" ").parse::<SignedGaussCode>()?)
            }
        })
        .collect()
}

fn single_input(m: &ArgMatches) -> Result<SignedGaussCode, Failure> {
    let mut codes = ordered_inputs(m)?;
    if codes.len() != 1 {
        return Err(fail(
            EXIT_PARSE,
            format!(
                "expected exactly one of --gauss, --knot, --file; got {}",
                codes.len()
            ),
        ));
    }
    Ok(codes.remove(0))
}

fn several_inputs(m: &ArgMatches) -> Result<Vec<SignedGaussCode>, Failure> {
    let codes = ordered_inputs(m)?;
    if codes.is_empty() {
        return Err(fail(EXIT_PARSE, "no inputs given"));
    }
    Ok(codes)
}

fn read_matrix(path: &str) -> Result<TripMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| fail(EXIT_PARSE, format!("{path}: {e}")))?;
    let m = Gf2Matrix::parse(&text).map_err(|e| fail(EXIT_PARSE, format!("{path}: {e}")))?;
    TripMatrix::from_matrix(m).map_err(|e: TripError| fail(EXIT_VALIDATION, format!("{path}: {e}")))
}

#[derive(Serialize)]
struct JonesJson {
    input: String,
    n: usize,
    writhe: i32,
    jones: Vec<Term>,
    variable: &'static str,
}

fn random_code(n: usize, rng: &mut ChaCha8Rng) -> SignedGaussCode {
    let mut slots: Vec<usize> = (1..=n).flat_map(|i| [i, i]).collect();
    slots.shuffle(rng);
    let signs: Vec<char> = (0..n).map(|_| if rng.gen() { '+' } else { '-' }).collect();
    let over_first: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    let mut seen = vec![false; n + 1];
    let tokens: Vec<String> = slots
        .iter()
        .map(|&i| {
            let first = !seen[i];
            seen[i] = true;
            let layer = if first == over_first[i - 1] { 'O' } else { 'U' };
            format!("{layer}{i}{}", signs[i - 1])
        })
        .collect();
    tokens.join(" ").parse().expect("generated word is valid")
}

fn run(cli: Cli, sub: &ArgMatches, out: &mut String) -> Result<u8, Failure> {
    let opts = SumOptions {
        threads: cli.threads.max(1),
        ..SumOptions::default()
    };
    match cli.command {
        Command::Jones { json, .. } => {
            let code = single_input(sub)?;
            let v = jones_with(&code, opts)?;
            if json {
                let record = JonesJson {
                    input: code.serialize(),
                    n: code.n(),
                    writhe: code.writhe(),
                    jones: v.to_json_terms(),
                    variable: if v.is_integral_in_t() { "t" } else { "q" },
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&record).expect("serializable")
                )?;
            } else {
                writeln!(out, "{v}")?;
            }
        }
        Command::Matrix { .. } => {
            let code = single_input(sub)?;
            let t = TripMatrix::build(&code);
            if t.n() > 0 {
                writeln!(out, "{}", t.matrix())?;
            }
        }
        Command::Bracket { .. } => {
            let code = single_input(sub)?;
            writeln!(out, "{}", kauffman_bracket(&code)?.render_in_q())?;
        }
        Command::DeltaEq { first, second } => {
            let a = read_matrix(&first)?;
            let b = read_matrix(&second)?;
            match delta_equivalent(&a, &b) {
                Some(p) => writeln!(out, "true\n{p}")?,
                None => writeln!(out, "false")?,
            }
        }
        Command::Consum { at, .. } => {
            let mut codes = several_inputs(sub)?.into_iter();
            let mut composite = codes.next().expect("non-empty");
            for c in codes {
                composite = composite.connect_sum(&c, at)?;
            }
            writeln!(out, "{composite}")?;
        }
        Command::VerifyMult { .. } => {
            let report = verify_multiplicative(&several_inputs(sub)?)?;
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Ok(EXIT_VERIFICATION);
            }
        }
        Command::Table => {
            for e in all_entries() {
                let code = if e.code.n() == 0 {
                    "-".to_string()
                } else {
                    e.code.serialize()
                };
                writeln!(
                    out,
                    "{:<26} {:>2}  {}  {}",
                    e.name, e.crossing_number, e.expected_jones, code
                )?;
            }
        }
        Command::Bench {
            min_n,
            max_n,
            step,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut n = min_n;
            while n <= max_n {
                let t = TripMatrix::build(&random_code(n, &mut rng));
                let start = Instant::now();
                let sum = state_sum_with(&t, opts)?;
                writeln!(
                    out,
                    "n={n:>2} states={:>9} threads={} terms={:>3} seconds={:.3}",
                    1u64 << n,
                    opts.threads,
                    sum.len(),
                    start.elapsed().as_secs_f64()
                )?;
                n += step.max(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let empty = ArgMatches::default();
    let sub = matches.subcommand().map_or(&empty, |(_, m)| m);
    let mut out = String::new();
    let result = run(cli, sub, &mut out);
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = io::stdout().write_all(out.as_bytes());
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
