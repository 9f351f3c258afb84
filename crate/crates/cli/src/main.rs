use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_cli::run::{self, Output, SuiteSet, VerifyOptions};
use hecke_cli::{CliResult, Descriptor};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Classify inertial descriptors and verify their Hecke algebra presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Descriptor file (TOML).
    descriptor: PathBuf,
    /// Refuse to enumerate Weyl groups or orbits larger than this.
    #[arg(long, default_value_t = run::DEFAULT_CAP)]
    max_weyl_order: usize,
    /// Override scalar_config.D: exponents must be multiples of 1/D.
    #[arg(long)]
    denominator: Option<u32>,
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Hecke,
    Opmodel,
    Bridge,
}

#[derive(Subcommand)]
enum Command {
    /// Component types, R-group, root datum and parameter table.
    Classify(Common),
    /// Generators and relations of the Hecke algebra.
    Present(Common),
    /// Run the exact verification suites.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = run::DEFAULT_SEED)]
        seed: u64,
        /// Suites to run (repeat or comma-separate).
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        suite: Vec<Suite>,
        /// Run the quadratic relation for all four sign pairs.
        #[arg(long)]
        sweep_signs: bool,
        /// Random samples per fuzz check.
        #[arg(long, default_value_t = run::DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Multiply elements written like `3*q^2 * Z[1,-1] * U[1,2]`, left to right.
    Mul {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        elements: Vec<String>,
    },
}

fn load(c: &Common) -> CliResult<Descriptor> {
    Descriptor::from_path(&c.descriptor)?.with_denominator(c.denominator)
}

fn execute(cmd: &Command) -> CliResult<(Output, bool)> {
    Ok(match cmd {
        Command::Classify(c) => (run::run_classify(&load(c)?, c.max_weyl_order)?, c.json),
        Command::Present(c) => (run::run_present(&load(c)?, c.max_weyl_order)?, c.json),
        Command::Verify { common, seed, suite, sweep_signs, budget } => {
            let all = suite.contains(&Suite::All);
            let suites = SuiteSet {
                hecke: all || suite.contains(&Suite::Hecke),
                opmodel: all || suite.contains(&Suite::Opmodel),
                bridge: all || suite.contains(&Suite::Bridge),
            };
            let opts = VerifyOptions { cap: common.max_weyl_order, seed: *seed, budget: *budget, suites, sweep_signs: *sweep_signs };
            (run::run_verify(&load(common)?, &opts)?, common.json)
        }
        Command::Mul { common, elements } => (run::run_mul(&load(common)?, common.max_weyl_order, elements)?, common.json),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok((out, json)) => {
            let body = if json {
                serde_json::to_string_pretty(&out.document).expect("report serializes") + "\n"
            } else {
                out.text
            };
            // a closed pipe is not an error for a report printer
            let _ = io::stdout().lock().write_all(body.as_bytes());
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
