//! `divring`: batch front end for exact division-ring geometry.
//!
//! Exit status 0 on success, 1 on usage or parse errors, 2 on domain errors.

mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use divring::calculus::SignConvention;
use divring::omega::{Hand, DEFAULT_CARRIER_BOUND};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl From<divring::text::ParseError> for CliError {
    fn from(e: divring::text::ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

macro_rules! domain_errors {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        })*
    };
}

domain_errors!(
    divring::AlgebraError,
    divring::forms::FormError,
    divring::omega::OmegaError,
    divring::tower::TowerError,
    divring::affine::AffineError,
    divring::calculus::CalcError
);

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HandArg {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SignArg {
    /// ∂v(a) + Γ(v)(a) = 0
    #[value(alias = "8.2")]
    Transfer,
    /// ∂v(a) − Γ(v)(a) = 0
    #[value(alias = "9.1")]
    Covariant,
}

#[derive(Debug, Parser)]
#[command(name = "divring", version, about = "Exact geometry over finite-dimensional division rings")]
struct Cli {
    /// Side on which scalars and acting elements are written.
    #[arg(long, global = true, value_enum)]
    hand: Option<HandArg>,
    /// Sign of Γ in the transport and geodesic equations.
    #[arg(long, global = true, value_enum, default_value = "transfer")]
    sign_convention: SignArg,
    /// On a failed completion of squares, try every other pivot.
    #[arg(long, global = true)]
    try_all_pivots: bool,
    /// Largest carrier accepted for a finite algebra.
    #[arg(long, global = true, default_value_t = DEFAULT_CARRIER_BOUND)]
    max_carrier: usize,
    /// Largest product of carrier sizes accepted for a tower.
    #[arg(long, global = true, default_value_t = 4096)]
    max_product: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural-constant algebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Quadratic forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// Finite representations of universal algebras.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Towers of representations.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Affine maps and planes.
    #[command(subcommand)]
    Affine(AffineCmd),
    /// Polynomial charts and connections.
    #[command(subcommand)]
    Calc(CalcCmd),
}

#[derive(Debug, Subcommand)]
enum AlgebraCmd {
    /// Validate associativity and the unit.
    Check { algebra: String },
}

#[derive(Debug, Subcommand)]
enum FormCmd {
    /// Write the form as a sum of squares.
    Diagonalize { file: PathBuf },
    /// Euclidean, pseudo-Euclidean or not real valued.
    Classify { file: PathBuf },
    /// Solve a x + x a = b.
    SolveAxxa {
        #[arg(long, default_value = "quaternion")]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Debug, Subcommand)]
enum RepCmd {
    /// Stable subset generated by the given labels, with words.
    Closure {
        file: PathBuf,
        #[arg(long, default_value = "")]
        gens: String,
    },
    /// Minimal generating subset of the given labels.
    Basis {
        file: PathBuf,
        #[arg(long, default_value = "")]
        gens: String,
    },
    /// Effectiveness and transitivity.
    Classify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum TowerCmd {
    /// Stable tuple generated by `level:labels;...`.
    Closure {
        file: PathBuf,
        #[arg(long, default_value = "")]
        gens: String,
    },
    /// Minimal generating tuple.
    Basis {
        file: PathBuf,
        #[arg(long, default_value = "")]
        gens: String,
    },
    /// Per-level classification and chained effectiveness.
    Classify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum AffineCmd {
    /// The map x ↦ m2(m1(x)) as a map file.
    Compose {
        #[arg(long)]
        m1: PathBuf,
        #[arg(long)]
        m2: PathBuf,
    },
    /// Whether a point lies in a plane.
    PlaneContains {
        #[arg(long)]
        plane: PathBuf,
        /// Coordinates separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Rank of a matrix over the division ring.
    Rank { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum CalcCmd {
    /// New coordinates of a point and a vector.
    Pushforward {
        chart: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Connection coefficients of the chart, optionally evaluated.
    Connection {
        chart: PathBuf,
        #[arg(long, allow_hyphen_values = true, requires_all = ["v", "a"])]
        at: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "at")]
        v: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "at")]
        a: Option<String>,
    },
    /// Residual of the parallel transport equation for a vector field.
    Parallel {
        chart: PathBuf,
        /// Field components as polynomials in the chart variables, `;`-separated.
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
    /// Residual of the geodesic equation for a polynomial path in `t`.
    Geodesic {
        chart: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        path: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        t0: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        dt: String,
    },
}

/// Settings shared by every command.
pub struct Options {
    pub hand: Option<Hand>,
    pub sign: SignConvention,
    pub try_all_pivots: bool,
    pub max_carrier: usize,
    pub max_product: usize,
}

fn dispatch(cli: Cli) -> Result<String, CliError> {
    let opts = Options {
        hand: cli.hand.map(|h| match h {
            HandArg::Left => Hand::Left,
            HandArg::Right => Hand::Right,
        }),
        sign: match cli.sign_convention {
            SignArg::Transfer => SignConvention::Transfer,
            SignArg::Covariant => SignConvention::Covariant,
        },
        try_all_pivots: cli.try_all_pivots,
        max_carrier: cli.max_carrier,
        max_product: cli.max_product,
    };
    use commands::*;
    match cli.command {
        Command::Algebra(AlgebraCmd::Check { algebra }) => algebra_check(&algebra),
        Command::Form(FormCmd::Diagonalize { file }) => form_diagonalize(&file, &opts),
        Command::Form(FormCmd::Classify { file }) => form_classify(&file),
        Command::Form(FormCmd::SolveAxxa { algebra, a, b }) => form_solve_axxa(&algebra, &a, &b),
        Command::Rep(RepCmd::Closure { file, gens }) => rep_closure(&file, &gens, &opts),
        Command::Rep(RepCmd::Basis { file, gens }) => rep_basis(&file, &gens, &opts),
        Command::Rep(RepCmd::Classify { file }) => rep_classify(&file, &opts),
        Command::Tower(TowerCmd::Closure { file, gens }) => tower_closure(&file, &gens, &opts),
        Command::Tower(TowerCmd::Basis { file, gens }) => tower_basis(&file, &gens, &opts),
        Command::Tower(TowerCmd::Classify { file }) => tower_classify(&file, &opts),
        Command::Affine(AffineCmd::Compose { m1, m2 }) => affine_compose(&m1, &m2, &opts),
        Command::Affine(AffineCmd::PlaneContains { plane, point }) => affine_plane_contains(&plane, &point, &opts),
        Command::Affine(AffineCmd::Rank { file }) => affine_rank(&file, &opts),
        Command::Calc(CalcCmd::Pushforward { chart, at, vector }) => calc_pushforward(&chart, &at, &vector),
        Command::Calc(CalcCmd::Connection { chart, at, v, a }) => calc_connection(&chart, at.zip(v).zip(a)),
        Command::Calc(CalcCmd::Parallel { chart, field, at, direction }) => {
            calc_parallel(&chart, &field, &at, &direction, &opts)
        }
        Command::Calc(CalcCmd::Geodesic { chart, path, t0, dt }) => calc_geodesic(&chart, &path, &t0, &dt, &opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
