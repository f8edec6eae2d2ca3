//! `spin-gpc`: occupation-number analyses against spin-adapted generalized
//! Pauli constraints.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 setting not covered,
//! 4 internal bound exceeded.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spin_gpc::catalog::parse_catalog;
use spin_gpc::qparam::Variant;
use spin_gpc::rational::parse_rational;
use spin_gpc::sandbox::{FlowOptions, EIG_TOL};
use spin_gpc::{builtin_catalog, ConstraintCatalog, Error, Result, Setting, Q};

mod commands;
mod input;
mod report;
mod sandbox;

use commands::{exit_code, AnalyzeOptions, Outcome};
use input::{parse_setting, parse_vector_file, VectorFile};
use report::{render, Format};
use sandbox::StateSource;

/// Directory whose `*.gpc` files are appended to the builtin catalog.
const CATALOG_DIR_VAR: &str = "SPIN_GPC_CATALOG_DIR";

#[derive(Parser)]
#[command(name = "spin-gpc", version, about = "Spin-adapted generalized Pauli constraint analysis")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog settings, or the constraints of one setting.
    Catalog {
        /// `N,d,2S`.
        #[arg(long, value_parser = parse_setting)]
        setting: Option<Setting>,
    },
    /// Residuals, distances and pinning flags of occupation vectors.
    Analyze {
        input: String,
        /// Truncation levels, e.g. `--d-prime 3,4`.
        #[arg(long, value_delimiter = ',')]
        d_prime: Vec<usize>,
        /// Residuals up to this value are flagged as quasipinned.
        #[arg(long, default_value = "1e-6")]
        qp_tol: String,
        /// Allowed deviation of the entry sum from N.
        #[arg(long, default_value = "1e-6")]
        norm_tol: String,
    },
    /// Spin-adapted Q-parameter with its per-face breakdown.
    Qparam {
        input: String,
        #[arg(long, default_value = "A", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Weight lattice and the weights selected by pinned GPCs.
    Selection {
        /// `N,d,2S[,2M]`.
        #[arg(long, value_parser = parse_setting)]
        setting: Setting,
        /// GPC indices; several indices also report simultaneous pinning.
        #[arg(long = "gpc", value_delimiter = ',')]
        gpcs: Vec<usize>,
    },
    /// Exact few-fermion computations.
    #[command(subcommand)]
    Sandbox(SandboxCommand),
}

#[derive(Args)]
struct StateArgs {
    /// State file (`setting N d 2S 2M` and `det ... re im` lines).
    #[arg(long, conflicts_with_all = ["setting", "epsilon"])]
    state: Option<String>,
    /// Random state of the sector `N,d,2S[,2M]`.
    #[arg(long, value_parser = parse_setting)]
    setting: Option<Setting>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Borland–Dennis three-term state with this ε.
    #[arg(long, conflicts_with = "setting")]
    epsilon: Option<String>,
    /// Add the generic second-order terms to the Borland–Dennis state.
    #[arg(long, requires = "epsilon")]
    generic: bool,
}

impl StateArgs {
    fn source(&self, seed: u64) -> Result<StateSource> {
        if let Some(p) = &self.state {
            return Ok(StateSource::File(p.clone()));
        }
        if let Some(s) = self.setting {
            return Ok(StateSource::Random { setting: s, seed });
        }
        if let Some(e) = &self.epsilon {
            return Ok(StateSource::BorlandDennis {
                epsilon: e.clone(),
                generic: self.generic,
            });
        }
        Err(Error::Invalid("one of --state, --setting or --epsilon is required".into()))
    }
}

#[derive(Subcommand)]
enum SandboxCommand {
    /// Orbital 1RDM and natural occupations.
    Rdm {
        #[command(flatten)]
        state: StateArgs,
        /// Hermiticity tolerance and degeneracy threshold.
        #[arg(long, default_value_t = EIG_TOL)]
        eig_tol: f64,
    },
    /// Pinning flow trajectory (CSV in text mode).
    Flow {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 1)]
        gpc: usize,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1e3)]
        t_max: f64,
        #[arg(long, default_value_t = 1e-12)]
        d_stop: f64,
        #[arg(long, default_value_t = 1)]
        record_every: usize,
    },
    /// Finite-difference check of dD/dt = −2 Var.
    VerifyVariance {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 1)]
        gpc: usize,
        #[arg(long, default_value_t = 1e-5)]
        dt: f64,
        /// Number of consecutive seeds for random states.
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Residual table of the Borland–Dennis three-term state.
    Bd {
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        generic: bool,
    },
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    Variant::parse(s).ok_or_else(|| format!("expected A or B, got \"{s}\""))
}

fn exact_flag(name: &str, text: &str) -> Result<Q> {
    parse_rational(text).map_err(|e| Error::Invalid(format!("--{name}: {e}")))
}

fn load_input(path: &str) -> Result<VectorFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
    parse_vector_file(&text)
}

/// Builtin catalog extended by the `*.gpc` files of [`CATALOG_DIR_VAR`].
fn catalog() -> Result<ConstraintCatalog> {
    let mut cat = builtin_catalog();
    let Some(dir) = std::env::var_os(CATALOG_DIR_VAR) else { return Ok(cat) };
    let dir = Path::new(&dir);
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gpc"))
        .collect();
    paths.sort();
    for p in paths {
        let text = std::fs::read_to_string(&p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))?;
        cat.extend(parse_catalog(&text, &p.display().to_string())?);
    }
    Ok(cat)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cat = catalog()?;
    match &cli.command {
        Command::Catalog { setting } => commands::cmd_catalog(&cat, *setting),
        Command::Analyze {
            input,
            d_prime,
            qp_tol,
            norm_tol,
        } => {
            let opts = AnalyzeOptions {
                d_prime: d_prime.clone(),
                qp_tol: exact_flag("qp-tol", qp_tol)?,
                norm_tol: exact_flag("norm-tol", norm_tol)?,
            };
            commands::cmd_analyze(&cat, &load_input(input)?, &opts)
        }
        Command::Qparam { input, variant } => commands::cmd_qparam(&cat, &load_input(input)?, *variant),
        Command::Selection { setting, gpcs } => commands::cmd_selection(&cat, setting, gpcs),
        Command::Sandbox(sc) => run_sandbox(&cat, sc, cli.format),
    }
}

fn run_sandbox(cat: &ConstraintCatalog, sc: &SandboxCommand, format: Format) -> Result<Outcome> {
    match sc {
        SandboxCommand::Rdm { state, eig_tol } => {
            let psi = sandbox::load_state(&state.source(state.seed)?)?;
            sandbox::cmd_rdm(&psi, *eig_tol)
        }
        SandboxCommand::Flow {
            state,
            gpc,
            dt,
            t_max,
            d_stop,
            record_every,
        } => {
            let psi = sandbox::load_state(&state.source(state.seed)?)?;
            let opts = FlowOptions {
                dt: *dt,
                t_max: *t_max,
                d_stop: *d_stop,
                record_every: *record_every,
                ..FlowOptions::default()
            };
            let r = sandbox::run_flow(cat, &psi, *gpc, &opts)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            if format == Format::Text {
                print!("{}", sandbox::flow_csv(&r));
                eprintln!("stop: {:?} after {} steps", r.stop, r.steps);
                return Ok(Outcome {
                    report: serde_json::Value::Null,
                    exit: commands::EXIT_OK,
                });
            }
            Ok(Outcome {
                report: sandbox::flow_json(&r, &psi, *gpc),
                exit: commands::EXIT_OK,
            })
        }
        SandboxCommand::VerifyVariance { state, gpc, dt, count } => {
            let mut states = Vec::new();
            if state.setting.is_some() {
                for k in 0..(*count).max(1) {
                    let seed = state.seed + k;
                    states.push((format!("seed {seed}"), sandbox::load_state(&state.source(seed)?)?));
                }
            } else {
                states.push(("input".to_string(), sandbox::load_state(&state.source(state.seed)?)?));
            }
            sandbox::cmd_verify_variance(cat, &states, *gpc, *dt)
        }
        SandboxCommand::Bd { epsilon, generic } => sandbox::cmd_bd(epsilon, *generic),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if !out.report.is_null() {
                print!("{}", render(&out.report, cli.format));
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
