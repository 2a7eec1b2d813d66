//! Command-line front end: argument definitions and one function per
//! subcommand. Every command writes to a caller-supplied sink so the binary
//! and the tests share the same code path.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use bemwe_core::dataset::{load_csv, Dataset, NFL_DEFAULT_SCALE};
use bemwe_core::inference::FitOptions;
use bemwe_core::moments::{marginal_moment, moment_mc_estimates, DEFAULT_REL_TOL};
use bemwe_core::report::{fit_dataset, sig6};
use bemwe_core::{
    BemweParams, Component, Error, FixedShape, MomentRequest, ReportDocument, Result,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Parser)]
#[command(
    name = "bemwe",
    version,
    about = "Bivariate exponentiated modified Weibull extension toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit (γ1, γ2, γ3) by maximum likelihood with the shape held fixed.
    Fit(FitArgs),
    /// Evaluate a distributional quantity at given points.
    Eval(EvalArgs),
    /// Draw pairs from the shock model and write them as CSV.
    Simulate(SimulateArgs),
    /// Raw moments of a marginal.
    Moments(MomentsArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ShapeArgs {
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.3)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub lambda: f64,
}

impl ShapeArgs {
    pub fn shape(&self) -> Result<FixedShape> {
        FixedShape::new(self.alpha, self.beta, self.lambda)
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub gamma1: f64,
    #[arg(long)]
    pub gamma2: f64,
    #[arg(long)]
    pub gamma3: f64,
    #[command(flatten)]
    pub shape: ShapeArgs,
}

impl ModelArgs {
    pub fn params(&self) -> Result<BemweParams> {
        BemweParams::with_shape([self.gamma1, self.gamma2, self.gamma3], self.shape.shape()?)
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct FitArgs {
    /// Two-column CSV of (x1, x2). Without it the embedded NFL table is used.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Divide every value by this [default: 1 for files, 100 for the embedded table]
    #[arg(long)]
    pub scale: Option<f64>,
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value_t = 0.0)]
    pub tie_tol: f64,
    /// Confidence level of the Wald intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    /// Write the full-precision JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Pdf,
    Cdf,
    Survival,
    Hazard,
    MaxCdf,
    MinCdf,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Pdf => "pdf",
            Quantity::Cdf => "cdf",
            Quantity::Survival => "survival",
            Quantity::Hazard => "hazard",
            Quantity::MaxCdf => "max_cdf",
            Quantity::MinCdf => "min_cdf",
        }
    }
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub what: Quantity,
    /// Evaluation points `x1,x2` (or a single `y` for max_cdf and min_cdf).
    #[arg(long = "at", required = true, num_args = 1..)]
    pub points: Vec<String>,
    #[arg(long, default_value_t = 0.0)]
    pub tie_tol: f64,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(short, long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination. The summary then goes to standard output; without it
    /// the CSV goes to standard output and the summary to standard error.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quadrature,
    Mc,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Marginal component, 1 or 2.
    #[arg(long, default_value_t = 1)]
    pub which: u32,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub orders: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Method::Quadrature)]
    pub method: Method,
    /// Monte Carlo sample size.
    #[arg(short, long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub rel_tol: f64,
}

/// Where a command's output goes.
pub struct Sinks<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

fn io_error(target: &str, e: std::io::Error) -> Error {
    Error::input(target, e.to_string())
}

fn emit(w: &mut dyn Write, text: &str) -> Result<()> {
    w.write_all(text.as_bytes())
        .map_err(|e| io_error("output", e))
}

pub fn run(cli: &Cli, sinks: &mut Sinks) -> Result<()> {
    match &cli.command {
        Command::Fit(a) => cmd_fit(a, sinks),
        Command::Eval(a) => cmd_eval(a, sinks),
        Command::Simulate(a) => cmd_simulate(a, sinks),
        Command::Moments(a) => cmd_moments(a, sinks),
    }
}

pub fn load_dataset(data: Option<&PathBuf>, scale: Option<f64>) -> Result<Dataset> {
    match data {
        Some(path) => load_csv(path, scale.unwrap_or(1.0)),
        None => Dataset::nfl(scale.unwrap_or(NFL_DEFAULT_SCALE)),
    }
}

pub fn fit_report(args: &FitArgs) -> Result<ReportDocument> {
    let dataset = load_dataset(args.data.as_ref(), args.scale)?;
    let opts = FitOptions {
        level: args.level,
        max_iter: args.max_iter,
        ..FitOptions::default()
    };
    fit_dataset(&dataset, args.shape.shape()?, args.tie_tol, &opts)
}

pub fn cmd_fit(args: &FitArgs, sinks: &mut Sinks) -> Result<()> {
    let report = fit_report(args)?;
    if let Some(path) = &args.json {
        fs::write(path, report.to_json() + "\n")
            .map_err(|e| io_error(&path.display().to_string(), e))?;
    }
    emit(sinks.out, &report.render_text())
}

fn parse_point(raw: &str, arity: usize) -> Result<Vec<f64>> {
    let cells: Vec<&str> = raw.split(',').map(str::trim).collect();
    if cells.len() != arity {
        return Err(Error::Usage(format!(
            "point {raw:?} needs {arity} coordinate(s)"
        )));
    }
    cells
        .iter()
        .map(|c| {
            c.parse::<f64>()
                .map_err(|_| Error::Usage(format!("not a number: {c:?}")))
        })
        .collect()
}

/// One output row for `eval`, or the error for that point.
pub fn eval_row(
    p: &BemweParams,
    what: Quantity,
    point: &[f64],
    tie_tol: f64,
) -> Result<(f64, String, String)> {
    let none = || ("-".to_string(), "-".to_string());
    let (value, (region, kind)) = match what {
        Quantity::Pdf => {
            let d = p.joint_pdf(point[0], point[1], tie_tol)?;
            (d.value, (d.region.to_string(), d.kind().to_string()))
        }
        Quantity::Cdf => (p.joint_cdf(point[0], point[1])?, none()),
        Quantity::Survival => (p.joint_survival(point[0], point[1])?, none()),
        Quantity::Hazard => (p.bivariate_hazard(point[0], point[1])?, none()),
        Quantity::MaxCdf => (p.max_cdf(point[0])?, none()),
        Quantity::MinCdf => (p.min_cdf(point[0])?, none()),
    };
    Ok((value, region, kind))
}

/// Rows that fail are reported inline; the command then exits with the
/// status of the first failure.
pub fn cmd_eval(args: &EvalArgs, sinks: &mut Sinks) -> Result<()> {
    let p = args.model.params()?;
    let univariate = matches!(args.what, Quantity::MaxCdf | Quantity::MinCdf);
    let arity = if univariate { 1 } else { 2 };
    let mut text = String::from(if univariate {
        "y,quantity,value,region,kind\n"
    } else {
        "x1,x2,quantity,value,region,kind\n"
    });
    let mut first_error = None;
    for raw in &args.points {
        let point = parse_point(raw, arity)?;
        let coords: Vec<String> = point.iter().map(|v| v.to_string()).collect();
        let _ = write!(text, "{},{},", coords.join(","), args.what.name());
        match eval_row(&p, args.what, &point, args.tie_tol) {
            Ok((value, region, kind)) => {
                let _ = writeln!(text, "{value:e},{region},{kind}");
            }
            Err(e) => {
                let _ = writeln!(text, "error,-,-");
                let _ = writeln!(sinks.err, "{raw}: {e}");
                first_error.get_or_insert(e);
            }
        }
    }
    emit(sinks.out, &text)?;
    first_error.map_or(Ok(()), Err)
}

pub fn simulate_csv(p: &BemweParams, n: usize, seed: u64) -> (String, [usize; 3]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = p.sample(&mut rng, n);
    let mut csv = String::with_capacity(n * 40);
    csv.push_str("x1,x2\n");
    let mut counts = [0usize; 3];
    for pair in &pairs {
        let _ = writeln!(csv, "{:e},{:e}", pair.x1(), pair.x2());
        let k = match pair.x1().partial_cmp(&pair.x2()) {
            Some(std::cmp::Ordering::Less) => 0,
            Some(std::cmp::Ordering::Greater) => 1,
            _ => 2,
        };
        counts[k] += 1;
    }
    (csv, counts)
}

pub fn cmd_simulate(args: &SimulateArgs, sinks: &mut Sinks) -> Result<()> {
    if args.n == 0 {
        return Err(Error::Usage("n must be >= 1".into()));
    }
    let p = args.model.params()?;
    let (csv, [n1, n2, n3]) = simulate_csv(&p, args.n, args.seed);
    let summary = format!(
        "n = {}\nseed = {}\nn1 = {n1}\nn2 = {n2}\nn3 = {n3}\ntie_fraction = {}\nexpected_tie_fraction = {}\n",
        args.n,
        args.seed,
        sig6(n3 as f64 / args.n as f64),
        sig6(p.singular_mass())
    );
    match &args.out {
        Some(path) => {
            fs::write(path, csv).map_err(|e| io_error(&path.display().to_string(), e))?;
            emit(sinks.out, &summary)
        }
        None => {
            emit(sinks.out, &csv)?;
            emit(sinks.err, &summary)
        }
    }
}

pub fn cmd_moments(args: &MomentsArgs, sinks: &mut Sinks) -> Result<()> {
    let p = args.model.params()?;
    let which = Component::from_index(args.which)?;
    if args.orders.is_empty() || args.orders.contains(&0) {
        return Err(Error::Usage("orders must be >= 1".into()));
    }
    let mut text = String::new();
    match args.method {
        Method::Quadrature => {
            text.push_str("order,value\n");
            for &r in &args.orders {
                let req = MomentRequest::new(p, which, r, args.rel_tol)?;
                let _ = writeln!(text, "{r},{:e}", marginal_moment(&req)?);
            }
        }
        Method::Mc => {
            text.push_str("order,value,std_error\n");
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let est = moment_mc_estimates(p, which, &args.orders, &mut rng, args.n)?;
            for (r, e) in args.orders.iter().zip(est) {
                let _ = writeln!(text, "{r},{:e},{:e}", e.estimate, e.std_error);
            }
        }
    }
    emit(sinks.out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_need_matching_arity() {
        assert_eq!(parse_point("1.5, 2", 2).unwrap(), vec![1.5, 2.0]);
        assert!(matches!(parse_point("1", 2), Err(Error::Usage(_))));
        assert!(matches!(parse_point("a", 1), Err(Error::Usage(_))));
    }

    #[test]
    fn dataset_scale_defaults() {
        assert_eq!(load_dataset(None, None).unwrap().scale, NFL_DEFAULT_SCALE);
        assert_eq!(load_dataset(None, Some(1.0)).unwrap().scale, 1.0);
    }

    #[test]
    fn zero_draws_is_a_usage_error() {
        let cli = Cli::try_parse_from([
            "bemwe", "simulate", "--gamma1", "1", "--gamma2", "1", "--gamma3", "1", "-n", "0",
        ])
        .unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let res = run(
            &cli,
            &mut Sinks {
                out: &mut out,
                err: &mut err,
            },
        );
        assert_eq!(res.unwrap_err().exit_code(), 2);
    }
}
