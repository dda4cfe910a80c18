//! The `schur-eq` command-line tool.
//!
//! [`run`] parses an argument vector and returns the exit status together
//! with everything destined for standard output and standard error, so the
//! whole tool can be driven in-process.

pub mod args;
pub mod render;

use std::ffi::OsString;
use std::fmt;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use schur_equilibrium::{
    build_model, equilibrium_moment, io::load_distribution, nth_equilibrium, sample, verify_model,
    CoefficientTriangle, DiscreteDistribution, Error, ModelDescription, RhoMethod, SchurModel,
};

use args::{BaseArgs, Cli, Command, Family, ModelArgs, ModelQuery, RhoMethodArg, TableQuery};
use render::{fixed5, json_string, Cell, Format, Grid};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Library(e) => exit_code(e),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage error: {msg}"),
            Failure::Library(e) => write!(f, "error: {e}"),
        }
    }
}

/// Exit status for a library error: bad input is a usage error, anything
/// that goes wrong while computing is a computation error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidDistribution(_)
        | Error::InvalidParameter(_)
        | Error::UnsupportedDimension { .. }
        | Error::Parse(_)
        | Error::Io(_) => EXIT_USAGE,
        Error::ZeroMean { .. }
        | Error::NonConvergent(_)
        | Error::ZeroVariance
        | Error::Integrity { .. } => EXIT_COMPUTATION,
    }
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(&cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("{f}\n"),
        },
    }
}

type Emitted = std::result::Result<(i32, String), Failure>;

fn dispatch(cli: &Cli) -> Emitted {
    let format = cli.format;
    let tol = cli.tail_tolerance;
    let done = |s: String| Ok((EXIT_OK, s));
    match &cli.command {
        Command::Eqdist { base, order, x_max } => {
            let dist = resolve_base(base, tol)?;
            let order = *order as usize;
            let chain = nth_equilibrium(&dist, order)?;
            let level = chain.level(order).expect("chain reaches its order");
            done(emit_pmf(format, level, *x_max, json!({ "order": order })))
        }
        Command::Model(query) => model_query(query, format, tol),
        Command::Tables(TableQuery::Coeffs { n_max }) => done(coeffs(*n_max as usize, format)?),
        Command::Tables(TableQuery::PoissonRho { lambdas, ns }) => {
            done(poisson_rho(lambdas, ns, format)?)
        }
        Command::Verify { model } => {
            let model = resolve_model(model, tol)?;
            let report = verify_model(&model);
            let text = match format.unwrap_or(Format::Table) {
                Format::Table => report.to_string(),
                Format::Json => format!("{}\n", report.to_json()),
                Format::Csv => {
                    let mut g =
                        Grid::new(["check", "pass", "max_abs_error", "tolerance", "location"]);
                    for c in &report.checks {
                        g.push(vec![
                            Cell::Text(c.name.clone()),
                            Cell::Text(c.pass.to_string()),
                            Cell::Num(c.max_abs_error),
                            Cell::Num(c.tolerance),
                            Cell::Text(c.location.map(|l| l.to_string()).unwrap_or_default()),
                        ]);
                    }
                    g.to_csv()
                }
            };
            let code = if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            };
            Ok((code, text))
        }
        Command::Sample { model, seed, count } => {
            let model = resolve_model(model, tol)?;
            let draws = sample(&model, *seed, *count)?;
            let columns: Vec<String> = (1..=model.dimension()).map(|i| format!("x{i}")).collect();
            let mut g = Grid::new(columns);
            for d in draws {
                g.push(d.into_iter().map(Cell::Int).collect());
            }
            done(match format.unwrap_or(Format::Csv) {
                Format::Csv => g.to_csv(),
                Format::Table => g.to_table(),
                Format::Json => json_string(&g.to_json()),
            })
        }
    }
}

fn model_query(query: &ModelQuery, format: Option<Format>, tol: Option<f64>) -> Emitted {
    let format_or_table = format.unwrap_or(Format::Table);
    let text = match query {
        ModelQuery::Marginal { model, x_max } => {
            let m = resolve_model(model, tol)?;
            emit_pmf(format, m.marginal(), *x_max, json!({ "n": m.dimension() }))
        }
        ModelQuery::Sum { model } => {
            let m = resolve_model(model, tol)?;
            let mut g = Grid::new(["z", "pmf"]);
            for (z, p) in m.sum_distribution().into_iter().enumerate() {
                g.push(vec![Cell::Int(z), Cell::Num(p)]);
            }
            match format_or_table {
                Format::Json => {
                    json_string(&json!({ "n": m.dimension(), "pmf": m.sum_distribution() }))
                }
                Format::Csv => g.to_csv(),
                Format::Table => g.to_table(),
            }
        }
        ModelQuery::Joint { model, point } => {
            let m = resolve_model(model, tol)?;
            let pmf = m.joint_pmf(point)?.value;
            let survival = m.joint_survival(point)?;
            let coords = point
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let mut g = Grid::new(["point", "pmf", "survival"]);
            g.push(vec![
                Cell::Text(format!("({coords})")),
                Cell::Num(pmf),
                Cell::Num(survival),
            ]);
            match format_or_table {
                Format::Json => {
                    json_string(&json!({ "point": point, "pmf": pmf, "survival": survival }))
                }
                Format::Csv => g.to_csv(),
                Format::Table => g.to_table(),
            }
        }
        ModelQuery::Rho { model, method } => {
            let m = resolve_model(model, tol)?;
            let (method, name) = match method {
                RhoMethodArg::Marginal => (RhoMethod::MarginalForm, "marginal"),
                RhoMethodArg::BaseMoments => (RhoMethod::BaseMomentForm, "base-moments"),
                RhoMethodArg::ClosedForm => (RhoMethod::ClosedForm, "closed-form"),
            };
            let rho = m.correlation(method)?.value;
            let mut g = Grid::new(["n", "method", "rho"]);
            g.push(vec![
                Cell::Int(m.dimension()),
                Cell::Text(name.into()),
                Cell::Fixed(rho),
            ]);
            match format_or_table {
                Format::Json => {
                    json_string(&json!({ "n": m.dimension(), "method": name, "rho": rho }))
                }
                Format::Csv => g.to_csv(),
                Format::Table => g.to_table(),
            }
        }
        ModelQuery::Moments { model, max_order } => {
            let m = resolve_model(model, tol)?;
            let mut g = Grid::new(["i", "j", "moment"]);
            for i in 0..m.dimension() {
                for j in 1..=*max_order as usize {
                    g.push(vec![
                        Cell::Int(i),
                        Cell::Int(j),
                        Cell::Num(equilibrium_moment(m.chain(), i, j)?),
                    ]);
                }
            }
            match format_or_table {
                Format::Json => json_string(&g.to_json()),
                Format::Csv => g.to_csv(),
                Format::Table => g.to_table(),
            }
        }
    };
    Ok((EXIT_OK, text))
}

fn emit_pmf(
    format: Option<Format>,
    dist: &DiscreteDistribution,
    x_max: Option<usize>,
    mut header: serde_json::Value,
) -> String {
    let len = dist.as_explicit().map_or(0, |e| e.len());
    let last = x_max.unwrap_or(len.saturating_sub(1));
    let pmf: Vec<f64> = (0..=last).map(|x| dist.pmf(x)).collect();
    let mut g = Grid::new(["x", "pmf"]);
    for (x, p) in pmf.iter().enumerate() {
        g.push(vec![Cell::Int(x), Cell::Num(*p)]);
    }
    match format.unwrap_or(Format::Table) {
        Format::Json => {
            header["pmf"] = json!(pmf);
            json_string(&header)
        }
        Format::Csv => g.to_csv(),
        Format::Table => g.to_table(),
    }
}

fn coeffs(n_max: usize, format: Option<Format>) -> std::result::Result<String, Failure> {
    let triangle = CoefficientTriangle::new(n_max);
    Ok(match format.unwrap_or(Format::Table) {
        Format::Csv => triangle.to_csv()?,
        Format::Json => {
            let rows: serde_json::Map<String, serde_json::Value> = (2..=n_max)
                .map(|n| {
                    let row = triangle.row(n).expect("row within n_max");
                    (
                        n.to_string(),
                        json!(row.iter().map(|a| a.to_string()).collect::<Vec<_>>()),
                    )
                })
                .collect();
            json_string(&json!({ "n_max": n_max, "a": rows }))
        }
        Format::Table => {
            let mut g = Grid::new(
                std::iter::once("r \\ n".to_string()).chain((2..=n_max).map(|n| n.to_string())),
            );
            for r in 1..=n_max {
                let mut row = vec![Cell::Int(r)];
                for n in 2..=n_max {
                    let text = triangle
                        .get(n, r)
                        .map(|a| a.to_string())
                        .unwrap_or_default();
                    row.push(Cell::Text(text));
                }
                g.push(row);
            }
            g.to_table()
        }
    })
}

fn poisson_rho(
    lambdas: &[f64],
    ns: &[usize],
    format: Option<Format>,
) -> std::result::Result<String, Failure> {
    let mut values = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut row = Vec::with_capacity(lambdas.len());
        for &lambda in lambdas {
            let m = build_model(&DiscreteDistribution::poisson(lambda)?, n)?;
            row.push(m.correlation(RhoMethod::MarginalForm)?.value);
        }
        values.push(row);
    }
    Ok(match format.unwrap_or(Format::Table) {
        Format::Table => {
            let header = std::iter::once("n \\ lambda".to_string())
                .chain(lambdas.iter().map(|l| l.to_string()));
            let mut g = Grid::new(header);
            for (n, row) in ns.iter().zip(&values) {
                g.push(
                    std::iter::once(Cell::Int(*n))
                        .chain(row.iter().map(|v| Cell::Fixed(*v)))
                        .collect(),
                );
            }
            g.to_table()
        }
        f => {
            let mut g = Grid::new(["n", "lambda", "rho", "rounded"]);
            for (n, row) in ns.iter().zip(&values) {
                for (lambda, v) in lambdas.iter().zip(row) {
                    g.push(vec![
                        Cell::Int(*n),
                        Cell::Num(*lambda),
                        Cell::Num(*v),
                        Cell::Text(fixed5(*v)),
                    ]);
                }
            }
            if f == Format::Csv {
                g.to_csv()
            } else {
                json_string(&g.to_json())
            }
        }
    })
}

fn resolve_base(
    base: &BaseArgs,
    tol: Option<f64>,
) -> std::result::Result<DiscreteDistribution, Failure> {
    let dist = match (&base.family, &base.pmf_file) {
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "give either --family or --pmf-file, not both".into(),
            ))
        }
        (None, None) => {
            return Err(Failure::Usage(
                "a base law is required: --family or --pmf-file".into(),
            ))
        }
        (None, Some(path)) => {
            if base.lambda.is_some() || base.q.is_some() {
                return Err(Failure::Usage(
                    "--lambda and --q only apply with --family".into(),
                ));
            }
            load_distribution(path)?
        }
        (Some(Family::Poisson), None) => {
            if base.q.is_some() {
                return Err(Failure::Usage(
                    "--q does not apply to the Poisson family".into(),
                ));
            }
            let lambda = base
                .lambda
                .ok_or_else(|| Failure::Usage("the Poisson family needs --lambda".into()))?;
            DiscreteDistribution::poisson(lambda)?
        }
        (Some(Family::Geometric), None) => {
            if base.lambda.is_some() {
                return Err(Failure::Usage(
                    "--lambda does not apply to the geometric family".into(),
                ));
            }
            let q = base
                .q
                .ok_or_else(|| Failure::Usage("the geometric family needs --q".into()))?;
            DiscreteDistribution::geometric(q)?
        }
    };
    Ok(match tol {
        Some(t) => dist.with_tail_tolerance(t)?,
        None => dist,
    })
}

fn resolve_model(args: &ModelArgs, tol: Option<f64>) -> std::result::Result<SchurModel, Failure> {
    if let Some(path) = &args.model {
        let b = &args.base;
        if b.family.is_some()
            || b.pmf_file.is_some()
            || b.lambda.is_some()
            || b.q.is_some()
            || args.n.is_some()
        {
            return Err(Failure::Usage(
                "--model replaces the base flags and --n".into(),
            ));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Library(Error::Io(format!("{}: {e}", path.display()))))?;
        return Ok(ModelDescription::from_json(&text)?.build()?);
    }
    let n = args
        .n
        .ok_or_else(|| Failure::Usage("--n is required".into()))?;
    if n < 2 {
        return Err(Failure::Usage(format!("--n must be at least 2, got {n}")));
    }
    let dist = resolve_base(&args.base, tol)?;
    Ok(build_model(&dist, n)?)
}
