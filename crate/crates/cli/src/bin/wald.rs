use clap::{Parser, Subcommand};
use wald_cli::{emit, fail, run_campaign, Campaign, CliError, SessionConfig, Selection};

/// Verification campaigns for the Waldspurger module.
#[derive(Parser)]
#[command(name = "wald", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-orbit point counts for colength-d sublattices of L_m.
    VerifyProp17(SessionConfig),
    /// Orbit strata of the closure of Gr^(a,0) and their point-count degrees.
    StratumDim(SessionConfig),
    /// Number of sublattices in position (d,0).
    Counts(SessionConfig),
    /// Coset and Satake basis products.
    HeckeTables(SessionConfig),
    /// The basis functions W_d.
    Wd {
        #[command(flatten)]
        cfg: SessionConfig,
        /// Only this d.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Triangularity of T(a,0) * W_0 up to --D.
    Multone(SessionConfig),
    /// W_d in the orbit basis up to --D.
    Cs(SessionConfig),
    /// Eigenvector check for the truncated K_E.
    Ke(SessionConfig),
    /// Similitude invariance and completeness of the form invariant.
    QuadformOrbits(SessionConfig),
    /// Isotropic lines of all symmetric forms on F_q^2.
    Isotropic(SessionConfig),
    /// Any campaign by name.
    Campaign {
        name: Campaign,
        #[command(flatten)]
        cfg: SessionConfig,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let mut sel = Selection::default();
    let (campaign, cfg) = match cli.cmd {
        Cmd::VerifyProp17(c) => (Campaign::Prop17, c),
        Cmd::StratumDim(c) => (Campaign::StratumDim, c),
        Cmd::Counts(c) => (Campaign::Counts, c),
        Cmd::HeckeTables(c) => (Campaign::HeckeTables, c),
        Cmd::Wd { cfg, d } => {
            sel.d = d;
            (Campaign::Wd, cfg)
        }
        Cmd::Multone(c) => (Campaign::Multone, c),
        Cmd::Cs(c) => (Campaign::Cs, c),
        Cmd::Ke(c) => (Campaign::Ke, c),
        Cmd::QuadformOrbits(c) => (Campaign::QuadformOrbits, c),
        Cmd::Isotropic(c) => (Campaign::Isotropic, c),
        Cmd::Campaign { name, cfg } => (name, cfg),
    };
    let report = run_campaign(campaign, &cfg, &sel)?;
    emit(&report, &cfg)
}

fn main() {
    match run(Cli::parse()) {
        Ok(code) => std::process::exit(code),
        Err(e) => fail(&e),
    }
}
