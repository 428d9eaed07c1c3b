use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use canonical_growth::bounds::verify_theorem_3;
use canonical_growth::kernel::{kernel_max_derivative, s_constant};
use canonical_growth::measures::synthesize_power_zeros;
use canonical_growth::{
    AngleRule, BoundReport, CanonicalIntegral, ComplexPoint, GeometricGrid, KernelContext,
    OrderParams, QuadratureSettings, SForm,
};
use canonical_growth_tools::error::{is_numerical_failure, Result, ToolError};
use canonical_growth_tools::sweep::{self, RandomMeasureSpec, Spacing};
use canonical_growth_tools::{io, report};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ENV_HELP: &str = "\
Environment:
  CANGROWTH_ABS_TOL           default for --abs-tol
  CANGROWTH_REL_TOL           default for --rel-tol
  CANGROWTH_MAX_SUBDIVISIONS  default for --max-subdivisions

Exit status: 0 success, 1 verification failed, 2 usage or input error,
3 numerical non-convergence.";

/// Canonical integrals of point-mass measures: kernel tables, evaluation and
/// numerical checks of the growth bounds.
#[derive(Parser)]
#[command(name = "cangrowth", version, after_help = ENV_HELP)]
struct Cli {
    /// Output file (default: standard output)
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(flatten)]
    tolerances: Tolerances,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tolerances {
    /// Absolute quadrature tolerance
    #[arg(long, global = true, env = "CANGROWTH_ABS_TOL")]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true, env = "CANGROWTH_REL_TOL")]
    rel_tol: Option<f64>,
    /// Subdivision budget of the adaptive quadrature
    #[arg(long, global = true, env = "CANGROWTH_MAX_SUBDIVISIONS")]
    max_subdivisions: Option<usize>,
}

impl Tolerances {
    fn settings(&self) -> Result<QuadratureSettings> {
        let d = QuadratureSettings::default();
        QuadratureSettings::new(
            self.abs_tol.unwrap_or(d.abs_tol),
            self.rel_tol.unwrap_or(d.rel_tol),
            self.max_subdivisions.unwrap_or(d.max_subdivisions),
        )
        .map_err(|e| ToolError::Usage(format!("tolerances: {e}")))
    }
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Smallest radius of the grid
    #[arg(long)]
    r_min: Option<f64>,
    /// Largest radius of the grid
    #[arg(long)]
    r_max: Option<f64>,
    /// Number of radii
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    spacing: Spacing,
}

impl GridArgs {
    fn radii(&self, default: (f64, f64, usize)) -> Result<Vec<f64>> {
        sweep::radius_grid(
            self.r_min.unwrap_or(default.0),
            self.r_max.unwrap_or(default.1),
            self.count.unwrap_or(default.2),
            self.spacing,
        )
    }
}

const DEFAULT_GRID: (f64, f64, usize) = (0.1, 1000.0, 16);

#[derive(Args, Clone, Copy)]
#[group(required = true, multiple = false)]
struct Genus {
    /// Target order; the genus is ⌊rho⌋
    #[arg(long)]
    rho: Option<f64>,
    /// Genus of the kernel
    #[arg(long)]
    q: Option<u32>,
}

impl Genus {
    fn q(&self) -> Result<u32> {
        match (self.rho, self.q) {
            (_, Some(q)) => Ok(q),
            (Some(rho), None) => Ok(OrderParams::new(rho).map_err(usage)?.q),
            (None, None) => Err(ToolError::Usage("one of --rho, --q is required".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate M_q(r) and M_q'(r): columns r,Mq,Mq_prime
    KernelTable {
        #[command(flatten)]
        genus: Genus,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Both forms of S(rho) for non-integer orders
    SConstant {
        /// Orders, repeated or comma separated
        #[arg(long, required = true, value_delimiter = ',')]
        rho: Vec<f64>,
    },
    /// Evaluate U on a grid: r,circle_max,circle_mean, or r,theta,U with --theta
    Eval {
        /// Measure file (CSV re,im[,mass] or JSON)
        #[arg(long)]
        input: PathBuf,
        /// Target order; the genus is ⌊rho⌋
        #[arg(long)]
        rho: Option<f64>,
        /// Genus override, recorded in the output
        #[arg(long)]
        q: Option<u32>,
        /// Evaluate on the ray of this angle instead of circle statistics
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Compare max U on circles with the four right-hand sides of the bounds
    VerifyBounds {
        /// Measure file (CSV re,im[,mass] or JSON)
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        input: Option<PathBuf>,
        /// Check this many seeded random measures instead
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        genus: Genus,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Estimate types of U, μ^rad and N and compare them through S(rho)
    VerifyType {
        /// Measure file (CSV re,im[,mass] or JSON)
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        rho: f64,
        /// Smallest radius (log grid)
        #[arg(long, default_value_t = 1.0)]
        r_min: f64,
        /// Largest radius (log grid)
        #[arg(long, default_value_t = 1e6)]
        r_max: f64,
        #[arg(long, default_value_t = 41)]
        count: usize,
    },
    /// Write the measure with μ^rad(t) = ⌊sigma·t^rho⌋ as CSV re,im,mass
    GenZeros {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        count: usize,
        /// Argument of every zero
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true, conflicts_with = "equidistributed")]
        angle: f64,
        /// Spread the arguments by the golden angle
        #[arg(long)]
        equidistributed: bool,
    },
}

fn usage(e: canonical_growth::Error) -> ToolError {
    ToolError::Usage(e.to_string())
}

enum Outcome {
    Done,
    VerificationFailed,
    NumericalFailure,
}

fn run(cli: &Cli, out: &mut Vec<u8>) -> Result<Outcome> {
    let quad = cli.tolerances.settings()?;
    match &cli.command {
        Command::KernelTable { genus, grid } => {
            let ctx = KernelContext::new(genus.q()?).with_quadrature(quad);
            let radii = grid.radii(DEFAULT_GRID)?;
            if radii.iter().any(|&r| r <= 0.0) {
                return Err(ToolError::Usage("kernel-table needs radii > 0".into()));
            }
            let rows = radii
                .iter()
                .map(|&r| Ok(vec![r, ctx.max(r), kernel_max_derivative(&ctx, r)?]))
                .collect::<Result<Vec<_>>>()?;
            report::write_table(&["r", "Mq", "Mq_prime"], &rows, out)?;
        }
        Command::SConstant { rho } => {
            let mut rows = Vec::new();
            for &rho in rho {
                let params = OrderParams::new(rho).map_err(usage)?;
                if params.is_integer() {
                    return Err(ToolError::Usage(format!("S(rho) needs non-integer rho, got {rho}")));
                }
                let ctx = KernelContext::new(params.q).with_quadrature(quad);
                let derivative = s_constant(&params, &ctx, SForm::Derivative)?;
                let direct = s_constant(&params, &ctx, SForm::Direct)?;
                rows.push(vec![rho, params.q as f64, derivative, direct]);
            }
            report::write_table(&["rho", "q", "S_derivative_form", "S_direct_form"], &rows, out)?;
        }
        Command::Eval { input, rho, q, theta, grid } => {
            let measure = io::read_measure(input)?;
            let derived = rho.map(OrderParams::new).transpose().map_err(usage)?.map(|p| p.q);
            let genus = q.or(derived).ok_or_else(|| {
                ToolError::Usage("eval needs --rho or --q".into())
            })?;
            if let Some(q) = q {
                match derived {
                    Some(d) => writeln!(out, "# genus override: q = {q} (order gives {d})")?,
                    None => writeln!(out, "# genus override: q = {q}")?,
                }
            }
            let u = CanonicalIntegral::new(measure, KernelContext::new(genus).with_quadrature(quad));
            let radii = grid.radii(DEFAULT_GRID)?;
            match *theta {
                Some(theta) => {
                    let rows: Vec<Vec<f64>> = radii
                        .iter()
                        .map(|&r| vec![r, theta, u.evaluate(ComplexPoint::from_polar(r, theta))])
                        .collect();
                    report::write_table(&["r", "theta", "U"], &rows, out)?;
                }
                None => {
                    let rows = sweep::eval_sweep(&u, &radii)?;
                    report::write_table(&["r", "circle_max", "circle_mean"], &rows, out)?;
                }
            }
        }
        Command::VerifyBounds { input, random, seed, genus, grid, format } => {
            let q = genus.q()?;
            let radii = grid.radii(DEFAULT_GRID)?;
            let ctx = KernelContext::new(q).with_quadrature(quad);
            let measures = match (input, random) {
                (Some(path), _) => vec![io::read_measure(path)?],
                (None, Some(n)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let spec = RandomMeasureSpec::default();
                    (0..*n).map(|_| sweep::random_measure(&mut rng, &spec)).collect()
                }
                (None, None) => unreachable!("clap requires --input or --random"),
            };
            let ctx = if measures.len() > 1 {
                ctx.with_default_table()?
            } else {
                ctx
            };
            let reports = measures
                .into_iter()
                .map(|m| sweep::bound_sweep(&CanonicalIntegral::new(m, ctx.clone()), &radii, genus.rho))
                .collect::<Result<Vec<BoundReport>>>()?;
            match (format, random) {
                (Format::Csv, _) => report::write_bound_csv(&reports, &mut *out)?,
                (Format::Json, Some(_)) => report::write_bound_json_many(&reports, Some(*seed), &mut *out)?,
                (Format::Json, None) => report::write_bound_json(&reports[0], &mut *out)?,
            }
            let rows = reports.iter().flat_map(|r| &r.rows);
            if rows.clone().any(|r| r.failure.as_ref().is_some_and(is_numerical_failure)) {
                return Ok(Outcome::NumericalFailure);
            }
            if !reports.iter().all(BoundReport::passes) {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::VerifyType { input, rho, r_min, r_max, count } => {
            let measure = io::read_measure(input)?;
            let grid = GeometricGrid::spanning(*r_min, *r_max, *count).map_err(usage)?;
            let rep = match verify_theorem_3(&measure, *rho, &grid) {
                Err(e @ canonical_growth::Error::IntegerOrder { .. }) => return Err(usage(e)),
                other => other?,
            };
            report::write_type_json(&rep, &mut *out)?;
            if !rep.passes() {
                return Ok(Outcome::VerificationFailed);
            }
        }
        Command::GenZeros { sigma, rho, count, angle, equidistributed } => {
            let rule = if *equidistributed {
                AngleRule::Equidistributed
            } else {
                AngleRule::Fixed(*angle)
            };
            let m = synthesize_power_zeros(*sigma, *rho, *count, rule).map_err(usage)?;
            io::write_measure_csv(&m, out)?;
        }
    }
    Ok(Outcome::Done)
}

fn emit(path: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| ToolError::Io {
            path: p.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Vec::new();
    let result = run(&cli, &mut out).and_then(|outcome| {
        emit(cli.output.as_ref(), &out)?;
        Ok(outcome)
    });
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => {
            eprintln!("cangrowth: verification failed");
            ExitCode::from(1)
        }
        Ok(Outcome::NumericalFailure) => {
            eprintln!("cangrowth: numerical failure on some rows");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("cangrowth: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
