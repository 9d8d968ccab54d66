use clap::{Parser, Subcommand};
use wald_cli::{fail, matrix, CliError};
use wald_core::series::Fq;

/// Classify symmetric forms over F_q[[t]].
#[derive(Parser)]
#[command(name = "quadform", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print {a, b, delta, cover} for a 2x2 symmetric matrix.
    Classify {
        #[arg(long, env = "WALD_Q", default_value_t = 3)]
        q: u64,
        #[arg(long)]
        matrix: String,
        /// t-adic precision; defaults to 2 val(det) + 2.
        #[arg(long)]
        precision: Option<u32>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Classify { q, matrix: text, precision } => {
            let f = Fq::new(q).map_err(|e| CliError::ConfigInvalid(e.to_string()))?;
            let form = matrix::parse_form(f, &text)?;
            println!("{}", matrix::classify_json(&form, precision)?);
            Ok(())
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        fail(&e);
    }
}
