mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "anticyc", version, about = "Exact checks for anticyclotomic p-adic L-function bookkeeping")]
pub struct Cli {
    /// TOML run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Working precision "N,M[,MW]"
    #[arg(long, global = true)]
    pub precision: Option<String>,
    /// Write JSON here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (output does not depend on this)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct SetupArgs {
    /// Fundamental discriminant D < 0
    #[arg(long, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    /// Ordinary prime p
    #[arg(long)]
    pub p: Option<u64>,
    /// Level N of the form
    #[arg(long)]
    pub level: Option<u64>,
    #[arg(long)]
    pub n_plus: Option<u64>,
    #[arg(long)]
    pub n_minus: Option<u64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CharArgs {
    /// Conductor exponent n
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// trivial, quadratic, or the generator image j (ε(g) = ζ_φ^j)
    #[arg(long = "char", default_value = "trivial")]
    pub chr: String,
}

#[derive(Args, Debug, Clone)]
pub struct SeriesInput {
    /// JSON file {"p": .., "coeffs": [..]} or {"p": .., "rows": [[..], ..]}
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Inline coefficients, lowest degree first
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub coeffs: Option<Vec<String>>,
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verdict for every clause of the standing hypotheses
    CheckSetup {
        #[command(flatten)]
        setup: SetupArgs,
        /// Builtin form label or form-data JSON path
        #[arg(long)]
        form: Option<String>,
    },
    /// Global Gauss sum of a character of conductor p^n
    Gauss {
        #[command(flatten)]
        setup: SetupArgs,
        #[command(flatten)]
        chr: CharArgs,
    },
    /// Theta series coefficients and Hecke relations
    Theta {
        #[command(flatten)]
        setup: SetupArgs,
        #[command(flatten)]
        chr: CharArgs,
        #[arg(long, default_value_t = 50)]
        bound: u64,
        /// Also check the Hecke relations at every good prime up to the bound
        #[arg(long)]
        hecke: bool,
    },
    /// Rankin–Selberg factorization at good primes
    Rankin {
        #[command(flatten)]
        setup: SetupArgs,
        #[command(flatten)]
        chr: CharArgs,
        #[arg(long)]
        form: Option<String>,
        /// Check all good primes below this bound
        #[arg(long, default_value_t = 50)]
        q_max: u64,
        /// Perturb a_l by delta on the series side: "l" or "l:delta"
        #[arg(long)]
        poison: Option<String>,
    },
    /// Euler correction elements at the places above l
    EulerElement {
        #[command(flatten)]
        setup: SetupArgs,
        #[command(flatten)]
        chr: CharArgs,
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        l: u64,
    },
    /// Weierstrass preparation of a power series
    Wprep {
        #[command(flatten)]
        input: SeriesInput,
    },
    /// μ and λ invariants
    Invariants {
        #[command(flatten)]
        input: SeriesInput,
    },
    /// Twist T ↦ η(1+T) − 1
    Twist {
        #[command(flatten)]
        input: SeriesInput,
        /// A 1-unit η
        #[arg(long, allow_hyphen_values = true)]
        eta: String,
    },
    /// Specialize a two-variable series at W = ζ(1+p)^{k−2} − 1
    Specialize {
        #[command(flatten)]
        input: SeriesInput,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        zeta_n: u32,
        #[arg(long, default_value_t = 0)]
        zeta_exp: i64,
        /// Decide vanishing from the specializations at k ≡ 2 mod p−1
        #[arg(long)]
        separate: bool,
    },
    /// Prefactor bookkeeping for su-ch, hbl-ch, hbl-su
    Compare {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        disc: Option<i64>,
        #[arg(long)]
        n_max: Option<u32>,
        /// Characters "n:j", comma separated
        #[arg(long, value_delimiter = ',')]
        chars: Option<Vec<String>>,
        #[arg(long)]
        form: Option<String>,
    },
    /// Every invariant suite over the default grid
    Grid {
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Perturb one eigenvalue a_l on the Rankin series side
        #[arg(long)]
        poison: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(cli))
}
