//! The `hochbar` command line: loads JSON inputs, dispatches to the core
//! computations, and emits deterministic JSON/CSV reports plus a manifest
//! with input content hashes.
//!
//! Exit codes: 0 success, 2 input validation failure, 3 size budget
//! exceeded, 4 a verification report contains failures.

mod report;
mod tasks;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hochbar_core::Error;

#[derive(Parser)]
#[command(
    name = "hochbar",
    version,
    about = "Exact Hochschild homology of finite algebras, categories and groupoids via truncated bar complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Ground field for inputs that do not carry one: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,

    /// Truncation degree: homology is reported for degrees <= max-degree - 2.
    #[arg(long, global = true, default_value_t = 5)]
    max_degree: usize,

    /// Per-level basis size budget.
    #[arg(long, global = true, default_value_t = 20_000)]
    budget: usize,

    /// Report format: json or csv (json is always written).
    #[arg(long, global = true, default_value = "json")]
    output: String,

    /// Output directory for reports and the manifest.
    #[arg(long, global = true, default_value = "out")]
    out_dir: String,
}

#[derive(Subcommand)]
enum Command {
    /// Hochschild homology of a finite-dimensional algebra.
    Hh {
        #[arg(long)]
        algebra: String,
    },
    /// Hochschild-Mitchell homology of a finite linear category.
    Hm {
        #[arg(long)]
        category: String,
    },
    /// The Drinfeld double of a finite group: structure constants and its
    /// Hochschild homology.
    Double {
        #[arg(long)]
        group: String,
    },
    /// Loop groupoid, nerve homology, and the loop-to-bar isomorphism check.
    Loopgpd {
        #[arg(long)]
        groupoid: Option<String>,
        #[arg(long)]
        group: Option<String>,
        /// With --group: "conj" for G // G, "bg" for the one-object groupoid.
        #[arg(long, default_value = "conj")]
        model: String,
    },
    /// The agreement map from Hochschild chains onto the Hochschild-Mitchell
    /// complex of listed projectives, verified through its mapping cone.
    Agreement {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        projectives: String,
    },
    /// The degree-zero product table of the derived Verlinde algebra of a
    /// graded desk category.
    Verlinde {
        #[arg(long)]
        category: String,
        /// Optional JSON list of object tuples; defaults to the simples.
        #[arg(long)]
        objects: Option<String>,
    },
    /// Equivariant z-twisted sectors of a crossed desk category and their
    /// product table.
    Sectors {
        #[arg(long)]
        category: String,
        /// Label of the central twist element; defaults to the identity.
        #[arg(long, default_value = "")]
        z: String,
        /// Optional scalar for the action of z on each sector's simple;
        /// switches the sector computation to the two-term twisted-hom
        /// truncation (only H_0 is authoritative).
        #[arg(long)]
        z_scalar: Option<String>,
    },
    /// SL(2,Z) orbits of conjugation classes of commuting pairs.
    Sl2zOrbits {
        #[arg(long)]
        group: String,
    },
    /// Descent certificates for a projective action along a rank-one
    /// central extension.
    VerifyCoherence {
        #[arg(long)]
        extension: String,
        #[arg(long)]
        action: String,
        /// Letters per word in the exhaustive check.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
    },
    /// Simplicial-homotopy identities for the twist-insertion homotopy.
    TwistHomotopy {
        #[arg(long)]
        task: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = tasks::TaskOptions {
        field: cli.field.clone(),
        max_degree: cli.max_degree,
        budget: cli.budget,
        output: cli.output.clone(),
        out_dir: cli.out_dir.clone(),
    };
    if opts.max_degree < 2 {
        eprintln!("error: --max-degree must be at least 2");
        return ExitCode::from(2);
    }
    if opts.budget < 1 {
        eprintln!("error: --budget must be at least 1");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Hh { algebra } => tasks::run_hh(&opts, algebra),
        Command::Hm { category } => tasks::run_hm(&opts, category),
        Command::Double { group } => tasks::run_double(&opts, group),
        Command::Loopgpd {
            groupoid,
            group,
            model,
        } => tasks::run_loopgpd(&opts, groupoid.as_deref(), group.as_deref(), model),
        Command::Agreement {
            algebra,
            projectives,
        } => tasks::run_agreement(&opts, algebra, projectives),
        Command::Verlinde { category, objects } => {
            tasks::run_verlinde(&opts, category, objects.as_deref())
        }
        Command::Sectors { category, z, z_scalar } => {
            tasks::run_sectors(&opts, category, z, z_scalar.as_deref())
        }
        Command::Sl2zOrbits { group } => tasks::run_sl2z_orbits(&opts, group),
        Command::VerifyCoherence {
            extension,
            action,
            max_len,
        } => tasks::run_verify_coherence(&opts, extension, action, *max_len),
        Command::TwistHomotopy { task } => tasks::run_twist_homotopy(&opts, task),
    };
    match result {
        Ok(tasks::Outcome::Ok) => ExitCode::SUCCESS,
        Ok(tasks::Outcome::VerificationFailed(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                tasks::TaskError::Core(Error::BudgetExceeded { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
