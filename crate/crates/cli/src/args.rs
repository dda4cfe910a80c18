use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::render::Format;

#[derive(Debug, Parser)]
#[command(
    name = "schur-eq",
    version,
    about = "Discrete Schur-constant multivariate equilibrium models",
    propagate_version = true
)]
pub struct Cli {
    /// Output format [default: table; csv for `sample`]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Probability mass allowed beyond materialized supports
    #[arg(long, global = true, env = "SCHUR_EQ_TAIL_TOLERANCE")]
    pub tail_tolerance: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// pmf of the k-th order equilibrium distribution of a base law
    Eqdist {
        #[command(flatten)]
        base: BaseArgs,
        /// Equilibrium order k
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
        /// Last support point to print
        #[arg(long)]
        x_max: Option<usize>,
    },
    /// Quantities of the n-dimensional model
    #[command(subcommand)]
    Model(ModelQuery),
    /// Reference tables
    #[command(subcommand)]
    Tables(TableQuery),
    /// Run the consistency and oracle checks on a model
    Verify {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Draw random vectors from a model as CSV
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelQuery {
    /// pmf of the common marginal law
    Marginal {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        x_max: Option<usize>,
    },
    /// pmf of Z = X_1 + .. + X_n
    Sum {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Joint pmf and survival at a point of dimension at most n
    Joint {
        #[command(flatten)]
        model: ModelArgs,
        /// Comma-separated coordinates, e.g. 1,0,2
        #[arg(long, value_delimiter = ',', required = true)]
        point: Vec<usize>,
    },
    /// Pearson correlation between two coordinates
    Rho {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = RhoMethodArg::Marginal)]
        method: RhoMethodArg,
    },
    /// Moments mu_{i:j} of the equilibrium levels i = 0..n-1
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        /// Highest moment order j
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=10))]
        max_order: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TableQuery {
    /// The coefficient triangle a_r(n) as exact fractions
    Coeffs {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..=60))]
        n_max: u64,
    },
    /// Correlation grid of Poisson models
    PoissonRho {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [0.01, 0.5, 1.0, 5.0, 10.0, 100.0])]
        lambdas: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [2usize, 3, 4, 5])]
        ns: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Poisson,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RhoMethodArg {
    /// From the marginal's mean and variance
    Marginal,
    /// From ordinary moments of the base (n <= 4)
    BaseMoments,
    /// Known closed forms (Poisson n <= 5, geometric)
    ClosedForm,
}

/// One base law: a named family or an explicit pmf file.
#[derive(Debug, Clone, Args)]
pub struct BaseArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Poisson mean
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Geometric ratio, P(X = x) = (1 - q) q^x
    #[arg(long)]
    pub q: Option<f64>,
    /// Explicit pmf: one probability per line, or CSV `index,probability`
    #[arg(long)]
    pub pmf_file: Option<PathBuf>,
}

/// A base law plus a dimension, or a JSON model description.
#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub base: BaseArgs,
    /// Dimension of the random vector
    #[arg(long)]
    pub n: Option<usize>,
    /// JSON model description (replaces the base flags and --n)
    #[arg(long)]
    pub model: Option<PathBuf>,
}
