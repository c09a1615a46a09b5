//! `fockppt`: PPT and positivity checks, Fock-oracle comparisons and
//! parameter sweeps for normally ordered Gaussian operators.

mod commands;
mod config;
mod report;
mod sweep;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::report::{CliError, EXIT_PARSE};
use crate::sweep::{Axis, Binding, SweepArg};

#[derive(Parser, Debug)]
#[command(
    name = "fockppt",
    version,
    about = "Entanglement criteria for normally ordered Gaussian operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Positivity tolerance on the smallest B eigenvalue relative to -1.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit tables as JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Direct,
    Block,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partial-transpose test across a bipartition (exit 0 = PPT, 10 = NPT).
    Ppt {
        #[arg(long)]
        state: PathBuf,
        /// Modes as "0,1|2"; the right-hand side is transposed.
        #[arg(long)]
        partition: String,
        #[command(flatten)]
        common: Common,
    },
    /// Positivity verdict of the operator itself (exit 0 = positive, 10 = not).
    Positivity {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Analytic PT verdict against the truncated Fock-space computation.
    OracleCompare {
        #[arg(
            long,
            conflicts_with = "three_mode",
            required_unless_present = "three_mode"
        )]
        state: Option<PathBuf>,
        /// Three-mode family spec file instead of a state file; adds the
        /// candidate-threshold columns. Partition defaults to "0,1|2".
        #[arg(long)]
        three_mode: Option<PathBuf>,
        #[arg(long)]
        partition: Option<String>,
        /// Per-mode cutoff, one value or one per mode.
        #[arg(long, value_delimiter = ',')]
        cutoff: Vec<usize>,
        /// Fock eigenvalues below -oracle_tol count as negative.
        #[arg(long, default_value_t = 1e-6)]
        oracle_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Reduced operator after tracing out modes.
    PartialTrace {
        #[arg(long)]
        state: PathBuf,
        /// Modes to trace out, e.g. "1" or "0,2".
        #[arg(long)]
        trace_out: String,
        /// With cutoffs (of the full operator), also report the Fock-oracle residual.
        #[arg(long, value_delimiter = ',')]
        cutoff: Vec<usize>,
        #[arg(long, value_enum, default_value = "direct")]
        method: Method,
        #[arg(long, default_value_t = fockppt::DEFAULT_CONDITION_LIMIT)]
        condition_limit: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Reduction-criterion witness over an (r, gamma_t) grid, as CSV.
    SweepPhaseDamping {
        /// Value or start:stop:steps.
        #[arg(long)]
        r: Axis,
        /// Value or start:stop:steps.
        #[arg(long = "gamma-t")]
        gamma_t: Axis,
        #[arg(long)]
        cutoff: Option<usize>,
        /// Reject grid points whose neglected probability weight exceeds this.
        #[arg(long)]
        max_tail: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form witness value of a squeezed mixture against the oracle.
    ImpureMixture {
        #[arg(long)]
        spec: PathBuf,
        /// Witness order M.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        nodes: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Three-way table for the three-mode family: candidate inequality,
    /// analytic B' eigenvalue, Fock oracle.
    ThreeModeAudit {
        /// Base spec file; unset parameters default to 0.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// name=start:stop:steps with name in zeta12, zeta13, zeta23, lambda, lambda3.
        #[arg(long)]
        sweep: Option<SweepArg>,
        /// name=value, repeatable.
        #[arg(long)]
        fix: Vec<Binding>,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, default_value_t = 1e-6)]
        oracle_tol: f64,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli, config: &Config) -> Result<i32, CliError> {
    match cli.command {
        Command::Ppt {
            state,
            partition,
            common,
        } => commands::ppt(&state, &partition, &common, config),
        Command::Positivity { state, common } => commands::positivity(&state, &common, config),
        Command::OracleCompare {
            state,
            three_mode,
            partition,
            cutoff,
            oracle_tol,
            common,
        } => commands::oracle_compare(
            state.as_deref(),
            three_mode.as_deref(),
            partition.as_deref(),
            &cutoff,
            oracle_tol,
            &common,
            config,
        ),
        Command::PartialTrace {
            state,
            trace_out,
            cutoff,
            method,
            condition_limit,
            common,
        } => commands::partial_trace(
            &state,
            &trace_out,
            &cutoff,
            method,
            condition_limit,
            &common,
        ),
        Command::SweepPhaseDamping {
            r,
            gamma_t,
            cutoff,
            max_tail,
            common,
        } => commands::sweep_phase_damping(
            r,
            gamma_t,
            cutoff.unwrap_or(config.cutoff),
            max_tail,
            &common,
        ),
        Command::ImpureMixture {
            spec,
            m,
            cutoff,
            nodes,
            common,
        } => commands::impure_mixture(
            &spec,
            m,
            cutoff.unwrap_or(config.cutoff),
            nodes.unwrap_or(config.nodes),
            &common,
        ),
        Command::ThreeModeAudit {
            spec,
            sweep,
            fix,
            cutoff,
            oracle_tol,
            common,
        } => commands::three_mode_audit(
            spec.as_deref(),
            sweep,
            fix,
            cutoff.unwrap_or(config.cutoff),
            oracle_tol,
            &common,
            config,
        ),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = Config::load()
        .map_err(CliError::parse)
        .and_then(|config| run(cli, &config))
        .unwrap_or_else(|e| {
            eprintln!("fockppt: {e}");
            e.code
        });
    std::process::exit(code);
}
