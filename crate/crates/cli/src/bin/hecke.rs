use clap::{Parser, Subcommand};
use serde_json::json;
use wald_cli::{fail, CliError};
use wald_core::lattice::Coweight;
use wald_core::{HeckeAlgebra, HeckeElement};

/// Spherical Hecke algebra of GL2 over F_q((t)).
#[derive(Parser)]
#[command(name = "hecke", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Product of two coset basis elements T_lhs * T_rhs.
    Convolve {
        #[arg(long, env = "WALD_Q", default_value_t = 3)]
        q: u64,
        #[arg(long)]
        lhs: Coweight,
        #[arg(long)]
        rhs: Coweight,
        /// Multiply Satake basis elements instead.
        #[arg(long)]
        satake: bool,
    },
    /// Satake basis element A_lambda in the coset basis.
    Satake {
        #[arg(long, env = "WALD_Q", default_value_t = 3)]
        q: u64,
        #[arg(long)]
        lambda: Coweight,
    },
}

fn algebra(q: u64) -> Result<HeckeAlgebra, CliError> {
    HeckeAlgebra::new(q).map_err(|e| CliError::ConfigInvalid(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Convolve { q, lhs, rhs, satake } => {
            let alg = algebra(q)?;
            let (x, y) = if satake {
                (alg.satake_basis(lhs), alg.satake_basis(rhs))
            } else {
                (HeckeElement::t(q, lhs), HeckeElement::t(q, rhs))
            };
            let prod = alg.convolve(&x, &y);
            let mut out = json!({"q": q, "lhs": lhs.to_string(), "rhs": rhs.to_string(), "product": prod.to_json(), "display": prod.to_string()});
            if satake {
                let coords: std::collections::BTreeMap<String, String> =
                    alg.in_satake_basis(&prod).iter().map(|(nu, c)| (nu.to_string(), c.to_string())).collect();
                out["satake_coordinates"] = json!(coords);
            }
            println!("{out}");
        }
        Cmd::Satake { q, lambda } => {
            let a = algebra(q)?.satake_basis(lambda);
            println!("{}", json!({"q": q, "lambda": lambda.to_string(), "element": a.to_json(), "display": a.to_string()}));
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        fail(&e);
    }
}
