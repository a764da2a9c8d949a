use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wilson_cli::{
    classify_report, cyclo_report, factor_report, gauss_report, sweep_report, verify_report, ErrorReport, IdealInput,
    Report,
};
use wilson_core::{Error, DEFAULT_CAP};

const EXIT_MISMATCH: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "wilson", version, about = "Products of all units in residue rings of number fields")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    /// Largest residue ring that may be enumerated.
    #[arg(long, env = "WILSON_CAP", default_value_t = DEFAULT_CAP, global = true)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Split a rational prime in Z[x]/(f).
    Factor {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        prime: String,
    },
    /// Closed-form class of the product of all units of o/a.
    Classify {
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        ideal: IdealArgs,
    },
    /// Compare the closed form with enumeration for one ideal.
    Verify {
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        ideal: IdealArgs,
        /// Include every element, unit and square root of 1.
        #[arg(long)]
        dump: bool,
    },
    /// Verify every ideal up to a norm bound.
    Sweep {
        #[arg(long)]
        poly: String,
        #[arg(long = "max-norm", value_parser = clap::value_parser!(u64).range(1..))]
        max_norm: u64,
        /// Largest rational prime used (default: min(max-norm, 100000)).
        #[arg(long = "prime-bound")]
        prime_bound: Option<u64>,
        /// Largest exponent of a single prime.
        #[arg(long = "max-exp", default_value_t = 64)]
        max_exp: u32,
    },
    /// Products of units of Z/A for 2 ≤ A ≤ max-A.
    Gauss {
        #[arg(long = "max-A", default_value_t = 2000)]
        max_a: u64,
    },
    /// Powers of the prime above 2 in the 2^t-th cyclotomic field.
    CycloDemo {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        t: u32,
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: u32,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct IdealArgs {
    /// Factored ideal, e.g. "2^3; 5^1@1".
    #[arg(long)]
    ideal: Option<String>,
    /// Generator of a principal ideal, e.g. "1+x".
    #[arg(long)]
    gen: Option<String>,
}

impl IdealArgs {
    fn input(&self) -> IdealInput {
        match (&self.ideal, &self.gen) {
            (Some(t), _) => IdealInput::Factored(t.clone()),
            (None, Some(g)) => IdealInput::Generator(g.clone()),
            (None, None) => unreachable!("clap requires one of --ideal and --gen"),
        }
    }
}

fn emit<R: Report>(report: Result<R, Error>, output: Output) -> ExitCode {
    match report {
        Ok(r) => {
            match output {
                Output::Text => print!("{}", r.render_text()),
                Output::Json => println!("{}", serde_json::to_string_pretty(&r).expect("reports serialize")),
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MISMATCH)
            }
        }
        Err(e) => {
            let obj = serde_json::to_string(&ErrorReport::from(&e)).expect("errors serialize");
            match output {
                Output::Text => eprintln!("{obj}"),
                Output::Json => println!("{obj}"),
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, cap) = (cli.output, cli.cap);
    match cli.command {
        Command::Factor { poly, prime } => emit(factor_report(&poly, &prime), out),
        Command::Classify { poly, ideal } => emit(classify_report(&poly, &ideal.input(), cap), out),
        Command::Verify { poly, ideal, dump } => emit(verify_report(&poly, &ideal.input(), cap, dump), out),
        Command::Sweep {
            poly,
            max_norm,
            prime_bound,
            max_exp,
        } => emit(sweep_report(&poly, max_norm, prime_bound, max_exp, cap), out),
        Command::Gauss { max_a } => emit(gauss_report(max_a), out),
        Command::CycloDemo { t, n_max } => emit(cyclo_report(t, n_max, cap), out),
    }
}
