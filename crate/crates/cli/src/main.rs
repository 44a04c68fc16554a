mod input;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpwright::baseline::BaselineSpec;
use mpwright::error::Error;
use mpwright::harness::{
    check_corollary, check_eigen, check_pde, check_reduction, reduction_points, run_suite,
    GridPoint, PdeParams, ReductionCase, ResidualReport, SuiteTolerances, TimePhase,
};
use mpwright::params::OperatorParams;
use mpwright::series::{coefficient_logs, mpw_eval, ratio_diagnostics, EvalOptions, EvalResult};
use num_complex::Complex64;
use rayon::prelude::*;

use output::{Cell, Format, Table};

#[derive(Parser)]
#[command(name = "mpwright", version, about = "Multi-parameter generalized Wright function toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative truncation target of the series.
    #[arg(long, global = true, default_value_t = 1e-15)]
    eps: f64,

    /// Maximum number of summed terms.
    #[arg(long, global = true, default_value_t = 500)]
    kmax: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Fractional orders α_1,...,α_{n+1}.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,

    /// Power weights ν_1,...,ν_n.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,

    /// Parameter JSON {"alpha": [...], "nu": [...]}, inline or a file path.
    #[arg(long)]
    params: Option<String>,
}

impl ParamArgs {
    fn resolve(&self) -> Result<OperatorParams, String> {
        input::params(self.alpha.as_deref(), self.nu.as_deref(), self.params.as_deref())
    }
}

#[derive(Args, Clone)]
struct PointArgs {
    /// Single argument re[,im].
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["grid", "points"])]
    z: Option<String>,

    /// Real grid start:stop:count[:log].
    #[arg(long, allow_hyphen_values = true, conflicts_with = "points")]
    grid: Option<String>,

    /// JSON file with an array of points (numbers, [re, im] or {"re", "im"}).
    #[arg(long)]
    points: Option<String>,
}

impl PointArgs {
    fn resolve(&self) -> Result<Option<Vec<Complex64>>, String> {
        if let Some(z) = &self.z {
            return Ok(Some(vec![input::complex(z)?]));
        }
        if let Some(g) = &self.grid {
            return Ok(Some(real_points(&input::grid(g)?)));
        }
        self.points.as_deref().map(input::points_file).transpose()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the function, or a baseline with --kind, at one or more points.
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        points: PointArgs,
        /// Baseline function to evaluate instead.
        #[arg(long)]
        kind: Option<String>,
        /// Comma-separated baseline parameters.
        #[arg(long, allow_hyphen_values = true, requires = "kind")]
        args: Option<String>,
    },
    /// Series coefficients c_0 .. c_{count-1}.
    Coeffs {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 21)]
        count: usize,
    },
    /// Ratio diagnostics r_k = |c_{k+1}/c_k| for k = 1 ..= count.
    Ratio {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
    /// Eigenfunction relation of the hyper-Bessel operator on a real grid.
    VerifyEigen {
        #[command(flatten)]
        params: ParamArgs,
        /// Eigenvalue re[,im]; complex values exercise the analytic extension.
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        lambda: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0.1:2:8")]
        grid: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Check the pure relation without the x^drift factor (needs zero drift).
        #[arg(long)]
        pure: bool,
    },
    /// Reduction of the function to a classical special function.
    VerifyReduction {
        #[arg(long, value_enum)]
        case: CaseKind,
        /// Case parameters: laguerre-exp n; n-mittag-leffler n,nu; classical-wright beta,nu.
        #[arg(long, allow_hyphen_values = true)]
        args: Option<String>,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Separable solution of the isochronous time-dependent equation.
    VerifyPde {
        /// Orders alpha,beta and weight nu, as --alpha alpha,beta --nu nu.
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
        kcoef: f64,
        #[arg(long, allow_hyphen_values = true, default_value = "0.2:1.5:10")]
        xgrid: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0:3:3")]
        tgrid: String,
        #[arg(long, value_enum, default_value_t = Phase::Negative)]
        phase: Phase,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// The default verification suite.
    Suite {
        #[arg(long, default_value_t = 1e-8)]
        tol_eigen: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol_reduction: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol_pde: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseKind {
    LaguerreExp,
    NMittagLeffler,
    ClassicalWright,
    Tricomi,
    BesselJ0,
}

#[derive(Clone, Copy, ValueEnum)]
enum Phase {
    /// exp(-iωt)
    Negative,
    /// exp(+iωt)
    Positive,
}

/// How a run ended, short of a usage error.
enum Outcome {
    Ok,
    Failed,
}

fn real_points(xs: &[f64]) -> Vec<Complex64> {
    xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn tolerance(name: &str, tol: f64) -> Result<f64, String> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(format!("{name} = {tol} must be positive"))
    }
}

fn emit_table(table: &Table, format: Format) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => output::write_json(&mut out, table),
        Format::Csv => table.write_csv(&mut out),
    }?;
    out.flush()
}

fn report_table(reports: &[ResidualReport]) -> Table {
    let mut t = Table::new(&["check", "index", "x", "t", "re", "im", "residual", "condition", "error"]);
    for r in reports {
        for (i, (point, res)) in r.grid.iter().zip(&r.residuals).enumerate() {
            let (x, tt, re, im) = match *point {
                GridPoint::X(x) => (Some(x), None, None, None),
                GridPoint::XT { x, t } => (Some(x), Some(t), None, None),
                GridPoint::Complex { re, im } => (None, None, Some(re), Some(im)),
            };
            let cond = r.diagnostics.condition.get(i).copied().flatten();
            let err = r
                .diagnostics
                .errors
                .iter()
                .find(|(j, _)| *j == i)
                .map_or(Cell::Null, |(_, e)| e.as_str().into());
            t.push(vec![
                r.check_name.as_str().into(),
                i.into(),
                x.into(),
                tt.into(),
                re.into(),
                im.into(),
                (*res).into(),
                cond.into(),
                err,
            ]);
        }
    }
    t
}

fn emit_report(report: &ResidualReport, format: Format) -> io::Result<Outcome> {
    match format {
        Format::Json => {
            let mut out = io::stdout().lock();
            output::write_json(&mut out, report)?;
            out.flush()?;
        }
        Format::Csv => emit_table(&report_table(std::slice::from_ref(report)), format)?,
    }
    Ok(if report.passed { Outcome::Ok } else { Outcome::Failed })
}

/// Errors that abort the run (exit 2) versus numerical failures at a
/// single point, which are reported in the output.
fn point_failure(e: &Error) -> bool {
    matches!(e, Error::NoConvergence { .. })
}

fn eval_table(zs: &[Complex64], results: Vec<Result<EvalResult, Error>>) -> Result<Table, String> {
    let mut t = Table::new(&["z_re", "z_im", "re", "im", "terms_used", "tail_estimate", "error"]);
    for (z, r) in zs.iter().zip(results) {
        let mut row = vec![z.re.into(), z.im.into()];
        match r {
            Ok(r) => row.extend([
                r.value.re.into(),
                r.value.im.into(),
                r.terms_used.into(),
                r.tail_estimate.into(),
                Cell::Null,
            ]),
            Err(e) if point_failure(&e) => row.extend([
                Cell::Null,
                Cell::Null,
                Cell::Null,
                Cell::Null,
                e.to_string().into(),
            ]),
            Err(e) => return Err(format!("z = {z}: {e}")),
        }
        t.push(row);
    }
    Ok(t)
}

fn reduction_case(kind: CaseKind, args: &[f64]) -> Result<ReductionCase, String> {
    let count = |v: f64| -> Result<usize, String> {
        if v >= 0.0 && v == v.floor() {
            Ok(v as usize)
        } else {
            Err(format!("n = {v} must be a nonnegative integer"))
        }
    };
    let arity = |want: usize| -> Result<(), String> {
        if args.len() == want {
            Ok(())
        } else {
            Err(format!("this case takes {want} argument(s), got {}", args.len()))
        }
    };
    Ok(match kind {
        CaseKind::LaguerreExp => {
            arity(1)?;
            ReductionCase::LaguerreExp { n: count(args[0])? }
        }
        CaseKind::NMittagLeffler => {
            arity(2)?;
            ReductionCase::Nml { n: count(args[0])?, nu: args[1] }
        }
        CaseKind::ClassicalWright => {
            arity(2)?;
            ReductionCase::ClassicalWright { beta: args[0], nu: args[1] }
        }
        CaseKind::Tricomi => {
            arity(0)?;
            ReductionCase::Tricomi
        }
        CaseKind::BesselJ0 => {
            arity(0)?;
            ReductionCase::BesselJ0
        }
    })
}

fn run(cli: Cli) -> Result<Outcome, String> {
    let opts = EvalOptions {
        eps: cli.eps,
        kmax: cli.kmax,
    };
    opts.validate().map_err(|e| e.to_string())?;
    let format = cli.format;
    // a closed downstream pipe (`| head`) is not an error
    let io_err = |e: io::Error| {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        format!("output: {e}")
    };

    match cli.command {
        Command::Eval {
            params,
            points,
            kind,
            args,
        } => {
            let zs = points.resolve()?.ok_or("one of --z, --grid or --points is required")?;
            let results: Vec<Result<EvalResult, Error>> = match kind {
                Some(kind) => {
                    if params.alpha.is_some() || params.nu.is_some() || params.params.is_some() {
                        return Err("--kind cannot be combined with --alpha/--nu/--params".into());
                    }
                    let args = input::floats(args.as_deref().unwrap_or(""))?;
                    let spec = BaselineSpec::from_args(&kind, &args).map_err(|e| e.to_string())?;
                    zs.par_iter().map(|&z| spec.eval(z, &opts)).collect()
                }
                None => {
                    let p = params.resolve()?;
                    zs.par_iter().map(|&z| mpw_eval(&p, z, &opts)).collect()
                }
            };
            let table = eval_table(&zs, results)?;
            let failed = table.rows.iter().any(|r| r.last() != Some(&Cell::Null));
            emit_table(&table, format).map_err(io_err)?;
            Ok(if failed { Outcome::Failed } else { Outcome::Ok })
        }
        Command::Coeffs { params, count } => {
            let p = params.resolve()?;
            if count == 0 {
                return Err("--count must be at least 1".into());
            }
            let logs = coefficient_logs(&p, count - 1).map_err(|e| e.to_string())?;
            let mut t = Table::new(&["k", "c_k", "log_abs", "sign"]);
            for (k, c) in logs.iter().enumerate() {
                t.push(vec![
                    k.into(),
                    c.value().into(),
                    c.log_abs.into(),
                    Cell::Text(c.sign.to_string()),
                ]);
            }
            emit_table(&t, format).map_err(io_err)?;
            Ok(Outcome::Ok)
        }
        Command::Ratio { params, count } => {
            let p = params.resolve()?;
            if count == 0 {
                return Err("--count must be at least 1".into());
            }
            let r = ratio_diagnostics(&p, count + 1).map_err(|e| e.to_string())?;
            let mut t = Table::new(&["k", "r_k"]);
            for (i, v) in r.iter().enumerate() {
                t.push(vec![(i + 1).into(), (*v).into()]);
            }
            emit_table(&t, format).map_err(io_err)?;
            Ok(Outcome::Ok)
        }
        Command::VerifyEigen {
            params,
            lambda,
            grid,
            tol,
            pure,
        } => {
            let p = params.resolve()?;
            let lambda = input::complex(&lambda)?;
            let xs = input::grid(&grid)?;
            if xs.iter().any(|&x| x <= 0.0) {
                return Err("eigen grid points must be positive".into());
            }
            let tol = tolerance("--tol", tol)?;
            let report = if pure {
                check_corollary(&p, lambda, &xs, tol, &opts).map_err(|e| e.to_string())?
            } else {
                check_eigen(&p, lambda, &xs, tol, &opts)
            };
            emit_report(&report, format).map_err(io_err)
        }
        Command::VerifyReduction {
            case,
            args,
            points,
            tol,
        } => {
            let args = input::floats(args.as_deref().unwrap_or(""))?;
            let case = reduction_case(case, &args)?;
            let zs = match points.resolve()? {
                Some(zs) => zs,
                None if case == ReductionCase::BesselJ0 => {
                    real_points(&mpwright::harness::linspace(-3.0, 3.0, 25))
                }
                None => reduction_points(25),
            };
            let tol = tolerance("--tol", tol)?;
            let report = check_reduction(case, &zs, tol, &opts).map_err(|e| e.to_string())?;
            emit_report(&report, format).map_err(io_err)
        }
        Command::VerifyPde {
            params,
            omega,
            kcoef,
            xgrid,
            tgrid,
            phase,
            tol,
        } => {
            let p = params.resolve()?;
            if p.n() != 1 {
                return Err("verify-pde takes --alpha alpha,beta --nu nu".into());
            }
            let pde = PdeParams {
                alpha: p.alpha()[0],
                beta: p.alpha()[1],
                nu: p.nu()[0],
                omega,
                kcoef,
            };
            let xs = input::grid(&xgrid)?;
            if xs.iter().any(|&x| x <= 0.0) {
                return Err("--xgrid points must be positive".into());
            }
            let ts = input::grid(&tgrid)?;
            let phase = match phase {
                Phase::Negative => TimePhase::Negative,
                Phase::Positive => TimePhase::Positive,
            };
            let tol = tolerance("--tol", tol)?;
            let report =
                check_pde(&pde, &xs, &ts, tol, phase, &opts).map_err(|e| e.to_string())?;
            emit_report(&report, format).map_err(io_err)
        }
        Command::Suite {
            tol_eigen,
            tol_reduction,
            tol_pde,
        } => {
            let tol = SuiteTolerances {
                eigen: tolerance("--tol-eigen", tol_eigen)?,
                reduction: tolerance("--tol-reduction", tol_reduction)?,
                pde: tolerance("--tol-pde", tol_pde)?,
            };
            let reports = run_suite(&tol, &opts);
            match format {
                Format::Json => {
                    let mut out = io::stdout().lock();
                    output::write_json(&mut out, &reports).map_err(io_err)?;
                    out.flush().map_err(io_err)?;
                }
                Format::Csv => {
                    let mut t = Table::new(&["check", "points", "max_residual", "tolerance", "passed"]);
                    for r in &reports {
                        t.push(vec![
                            r.check_name.as_str().into(),
                            r.residuals.len().into(),
                            r.max_residual.into(),
                            r.tolerance.into(),
                            r.passed.into(),
                        ]);
                    }
                    emit_table(&t, format).map_err(io_err)?;
                }
            }
            let failed: Vec<&str> = reports
                .iter()
                .filter(|r| !r.passed)
                .map(|r| r.check_name.as_str())
                .collect();
            if failed.is_empty() {
                Ok(Outcome::Ok)
            } else {
                eprintln!("{} check(s) failed: {}", failed.len(), failed.join(", "));
                Ok(Outcome::Failed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("mpwright: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("mpwright: {}", msg.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
