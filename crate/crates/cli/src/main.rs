//! `roundgroups`: build groups, construct and check cycles, emit
//! certificates and run the acceptance sweep. JSON goes to stdout, a short
//! human summary to stderr.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use roundgroups::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "roundgroups", version, about = "Round cycles and unroundness certificates for finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a group and write its multiplication table as JSON.
    Group {
        #[command(subcommand)]
        kind: GroupKind,
        /// Where to write the group file; the group is inlined in the payload otherwise.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Construct, check or balance-test cycles.
    Cycle {
        #[command(subcommand)]
        action: CycleAction,
    },
    /// Nilpotence verdict and unroundness certificate for a group file.
    Certify(CertifyArgs),
    /// Numerical semigroup computations.
    Frobenius(FrobeniusArgs),
    /// Run the acceptance sweep.
    Accept {
        #[arg(long, default_value = "fast")]
        suite: SuiteArg,
        #[arg(long, default_value_t = roundgroups::DEFAULT_SEED)]
        seed: u64,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u8>,
        /// Corrupt one table entry of Z_6 before the divisibility sweep.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Subcommand)]
enum GroupKind {
    Cyclic {
        #[arg(long)]
        n: usize,
    },
    Dihedral {
        #[arg(long)]
        l: usize,
    },
    Symmetric {
        #[arg(long)]
        l: usize,
    },
    Alternating {
        #[arg(long)]
        l: usize,
    },
    Dicyclic {
        #[arg(long)]
        m: usize,
    },
    /// Direct product of two group files.
    Product {
        left: PathBuf,
        right: PathBuf,
    },
    /// The non-abelian group of order pq.
    Pq {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructMode {
    TotallyRound,
    Pq,
    Interleave,
    Debruijn,
    Ap,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantsArg {
    All,
    Default,
}

#[derive(Subcommand)]
enum CycleAction {
    Construct {
        #[arg(long)]
        mode: ConstructMode,
        /// Group file (totally-round, debruijn, ap).
        #[arg(long)]
        group: Option<PathBuf>,
        /// Cycle file (interleave).
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        /// De Bruijn order minus one.
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Length budget for De Bruijn cycles.
        #[arg(long)]
        budget: Option<u64>,
    },
    Check {
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = roundgroups::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "auto")]
        policy: PolicyArg,
        /// Check strong k-roundness with up to this many extra (+1, -1) pairs.
        #[arg(long)]
        strong: Option<usize>,
    },
    Balance {
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "default")]
        variants: VariantsArg,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Counts of every window of the given width.
    Census {
        #[arg(long)]
        cycle: PathBuf,
        #[arg(long)]
        width: usize,
    },
    /// Exhaustive balanced-depth search over binary cycles.
    Z2Search {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 64)]
        depth_cap: usize,
    },
}

#[derive(Args)]
struct CertifyArgs {
    /// Group file.
    #[arg(required_unless_present_any = ["recurrences", "dihedral"])]
    group: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    max_s: usize,
    /// Print the symmetric-group root-count recurrences up to this degree.
    #[arg(long, conflicts_with_all = ["group", "dihedral"])]
    recurrences: Option<u64>,
    /// The (2, 3) certificate for the dihedral group of order 2l.
    #[arg(long, conflicts_with = "group")]
    dihedral: Option<usize>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("query").required(true).args(["set", "phi_prime", "bound_sweep", "k_bound"])))]
struct FrobeniusArgs {
    /// Comma-separated generators.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<u64>>,
    #[arg(long)]
    phi_prime: Option<u64>,
    /// Check the Phi'(n) <= n^2 bound for 2 <= n <= N.
    #[arg(long)]
    bound_sweep: Option<u64>,
    /// `(n + 1)!` for the given n.
    #[arg(long)]
    k_bound: Option<u64>,
    /// With --set: a representation of this integer.
    #[arg(long, requires = "set")]
    represent: Option<u64>,
}

/// Exit status plus the JSON payload for stdout.
pub struct Outcome {
    pub exit_code: u8,
    pub payload: Value,
    pub summary: String,
}

impl Outcome {
    pub fn new(holds: bool, payload: Value, summary: impl Into<String>) -> Self {
        Outcome { exit_code: if holds { 0 } else { 1 }, payload, summary: summary.into() }
    }
}

fn error_outcome(e: &Error) -> Outcome {
    let (code, kind) = match e {
        Error::BudgetExceeded(_) => (3, "budget-exceeded"),
        Error::NotNilpotent => (1, "not-nilpotent"),
        Error::InternalInconsistency(_) => (1, "internal-inconsistency"),
        Error::InvalidParameter(_) => (2, "invalid-parameter"),
        Error::NoSuchGroup { .. } => (2, "no-such-group"),
        Error::InvalidGroup(_) => (2, "invalid-group"),
        Error::NotNormal => (2, "not-normal"),
        Error::InvalidExtension(_) => (2, "invalid-extension"),
        Error::Json(_) => (2, "invalid-json"),
        Error::Io(_) => (2, "io"),
    };
    let mut payload = json!({ "error": { "kind": kind, "message": e.to_string() } });
    if matches!(e, Error::NotNilpotent) {
        payload["error"]["explanation"] =
            json!("totally round cycles exist exactly for nilpotent groups; try `certify` for an unroundness certificate");
    }
    Outcome { exit_code: code, payload, summary: format!("error: {e}") }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(cli.command).unwrap_or_else(|e| error_outcome(&e));
    let text = serde_json::to_string_pretty(&outcome.payload).expect("payloads are plain JSON");
    // a closed pipe on either stream is not worth a panic
    let _ = writeln!(std::io::stdout(), "{text}");
    if !outcome.summary.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", outcome.summary);
    }
    ExitCode::from(outcome.exit_code)
}
