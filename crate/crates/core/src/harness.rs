//! Residual checks of the eigenfunction relation, its special cases and the
//! classical reductions.
//!
//! In every check the left side goes through the term-wise operator
//! pipeline and the right side through direct series evaluation (or a
//! baseline function), so the two never share a code path beyond the Gamma
//! kernel and the coefficient recurrence.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baseline;
use crate::error::{Error, Result};
use crate::operator::{apply_pipeline, caputo_term, mpw_power_series};
use crate::params::OperatorParams;
use crate::power_series::GenPowerSeries;
use crate::series::{mpw_eval, EvalOptions};

/// Floor added to the denominator of relative residuals.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Extra terms kept in operator-side series beyond what direct evaluation
/// needed at the largest argument.
const TERM_MARGIN: usize = 10;

/// Bound on `|u(x, t + T) - u(x, t)|` for the time-periodicity check.
pub const ISOCHRONY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridPoint {
    X(f64),
    Complex { re: f64, im: f64 },
    XT { x: f64, t: f64 },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub terms_min: usize,
    pub terms_max: usize,
    pub terms_mean: f64,
    /// Per-point failures as `(grid index, message)`.
    pub errors: Vec<(usize, String)>,
    /// Set when the check runs outside the stated hypotheses (for
    /// instance a complex eigenvalue).
    pub extension: bool,
    /// Per point, the sum of the magnitudes of the summed terms over the
    /// magnitude of the reference side. Large values mean the relative
    /// residual is dominated by cancellation.
    pub condition: Vec<Option<f64>>,
    pub notes: Vec<String>,
}

impl Diagnostics {
    fn record_terms(&mut self, terms: &[usize]) {
        if terms.is_empty() {
            return;
        }
        self.terms_min = *terms.iter().min().unwrap();
        self.terms_max = *terms.iter().max().unwrap();
        self.terms_mean = terms.iter().sum::<usize>() as f64 / terms.len() as f64;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check_name: String,
    pub grid: Vec<GridPoint>,
    /// `None` where the point could not be evaluated.
    pub residuals: Vec<Option<f64>>,
    /// Infinite when any point failed.
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub residual_definition: String,
    pub diagnostics: Diagnostics,
}

impl ResidualReport {
    fn finish(
        check_name: String,
        grid: Vec<GridPoint>,
        residuals: Vec<Option<f64>>,
        tolerance: f64,
        residual_definition: &str,
        diagnostics: Diagnostics,
    ) -> Self {
        let max_residual = residuals.iter().fold(0.0_f64, |m, r| match r {
            Some(v) if v.is_nan() => f64::INFINITY,
            Some(v) => m.max(*v),
            None => f64::INFINITY,
        });
        ResidualReport {
            check_name,
            grid,
            residuals,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
            residual_definition: residual_definition.to_string(),
            diagnostics,
        }
    }
}

fn relative(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / (rhs.norm() + RESIDUAL_FLOOR)
}

const RELATIVE_DEF: &str = "|LHS - RHS| / (|RHS| + 1e-300)";
const ABSOLUTE_DEF: &str = "|mpw - baseline|";

/// Operator side of the eigen relation: the series of `W(λ x^ρ)` in `x`
/// carried through the hyper-Bessel pipeline.
fn operator_side(
    params: &OperatorParams,
    lambda: Complex64,
    xs: &[f64],
    opts: &EvalOptions,
) -> Result<(GenPowerSeries, GenPowerSeries)> {
    let rho = params.stride();
    let xmax = xs.iter().fold(0.0_f64, |m, x| m.max(*x));
    let terms = match mpw_eval(params, lambda * xmax.powf(rho), opts) {
        Ok(r) => r.terms_used + TERM_MARGIN,
        Err(_) => opts.kmax + 1,
    };
    let s = mpw_power_series(params, lambda, terms)?;
    let out = apply_pipeline(params, &s)?;
    Ok((s, out))
}

/// `Σ |c_k| x^(p_k)`.
fn term_mass(s: &GenPowerSeries, x: f64) -> f64 {
    s.terms().map(|(_, p, c)| c.norm() * x.powf(p)).sum()
}

/// Terms `(stage, k)`, `k >= 1`, that the pipeline annihilates even though
/// their coefficient is nonzero: an intermediate series
/// landing exactly on a constant (or a low integer power below the order).
/// Such terms break the eigen relation term-by-term.
pub fn interior_annihilations(params: &OperatorParams, terms: usize) -> Vec<(usize, usize)> {
    let Ok(s) = mpw_power_series(params, Complex64::new(1.0, 0.0), terms) else {
        return Vec::new();
    };
    let mut hits = Vec::new();
    let mut cur = s;
    for (index, stage) in crate::operator::Pipeline::hyper_bessel(params).stages.iter().enumerate() {
        if let crate::operator::PipelineStage::CaputoDerivative(g) = *stage {
            for (k, p, c) in cur.terms() {
                if k > 0 && c.norm() != 0.0 && matches!(caputo_term(p, g), Ok((m, _)) if m == 0.0) {
                    hits.push((index, k));
                }
            }
        }
        match stage.apply(&cur) {
            Ok(next) => cur = next,
            Err(_) => break,
        }
    }
    hits
}

fn eigen_report(
    name: String,
    params: &OperatorParams,
    lambda: Complex64,
    xs: &[f64],
    tol: f64,
    opts: &EvalOptions,
    with_drift: bool,
) -> ResidualReport {
    let grid = xs.iter().map(|&x| GridPoint::X(x)).collect();
    let mut diag = Diagnostics {
        extension: lambda.im != 0.0,
        ..Default::default()
    };
    let rho = params.stride();
    let drift = if with_drift { params.drift() } else { 0.0 };
    let lhs = operator_side(params, lambda, xs, opts);
    let mut terms = Vec::new();
    let mut residuals = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let res = (|| -> Result<(f64, f64)> {
            let (input, series) = lhs.as_ref().map_err(Clone::clone)?;
            let r = mpw_eval(params, lambda * x.powf(rho), opts)?;
            terms.push(r.terms_used);
            let rhs = lambda * x.powf(drift) * r.value;
            let mass = lambda.norm() * x.powf(drift) * term_mass(input, x);
            Ok((relative(series.evaluate(x), rhs), mass / (rhs.norm() + RESIDUAL_FLOOR)))
        })();
        match res {
            Ok((v, cond)) => {
                residuals.push(Some(v));
                diag.condition.push(Some(cond));
            }
            Err(e) => {
                diag.errors.push((i, e.to_string()));
                residuals.push(None);
                diag.condition.push(None);
            }
        }
    }
    diag.record_terms(&terms);
    if let Ok((input, _)) = &lhs {
        let k = input.len();
        diag.notes.push(format!("operator side truncated at {k} terms"));
        let hits = interior_annihilations(params, k);
        if !hits.is_empty() {
            diag.notes.push(format!(
                "interior annihilated terms (stage, k): {hits:?}"
            ));
        }
    }
    ResidualReport::finish(name, grid, residuals, tol, RELATIVE_DEF, diag)
}

fn params_label(params: &OperatorParams) -> String {
    format!("alpha={:?},nu={:?}", params.alpha(), params.nu())
}

/// `D W(λ x^ρ) = λ x^drift W(λ x^ρ)` at each `x`.
pub fn check_eigen(
    params: &OperatorParams,
    lambda: Complex64,
    xs: &[f64],
    tol: f64,
    opts: &EvalOptions,
) -> ResidualReport {
    let name = format!("eigen[{},lambda={}]", params_label(params), lambda);
    eigen_report(name, params, lambda, xs, tol, opts, true)
}

/// Pure eigenfunction relation `D W(λ x^ρ) = λ W(λ x^ρ)` for zero drift.
pub fn check_corollary(
    params: &OperatorParams,
    lambda: Complex64,
    xs: &[f64],
    tol: f64,
    opts: &EvalOptions,
) -> Result<ResidualReport> {
    if params.drift().abs() > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "pure eigenfunction check needs zero drift, got {}",
            params.drift()
        )));
    }
    let name = format!("corollary[{},lambda={}]", params_label(params), lambda);
    Ok(eigen_report(name, params, lambda, xs, tol, opts, false))
}

/// Two-derivative case `d^β (x^ν d^α W(x^β)) = x^(ν-α) W(x^β)`.
pub fn check_proposition_n1(
    alpha: f64,
    beta: f64,
    nu: f64,
    xs: &[f64],
    tol: f64,
    opts: &EvalOptions,
) -> Result<ResidualReport> {
    if !(alpha > 0.0 && alpha <= 1.0 && beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "orders alpha = {alpha}, beta = {beta} must lie in (0, 1]"
        )));
    }
    let params = OperatorParams::new(vec![alpha, beta], vec![nu])?;
    let name = format!("proposition[alpha={alpha},beta={beta},nu={nu}]");
    Ok(eigen_report(name, &params, Complex64::new(1.0, 0.0), xs, tol, opts, true))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum ReductionCase {
    /// All orders and weights 1: `e_n`.
    LaguerreExp { n: usize },
    /// All orders and weights `ν`: n-Mittag-Leffler.
    Nml { n: usize, nu: f64 },
    /// `α = (1, β)`, weight `ν`, argument rescaled by `β`.
    ClassicalWright { beta: f64, nu: f64 },
    Tricomi,
    /// Tricomi at `-x²/4` against `J_0(x)`; grid points are real `x`.
    BesselJ0,
}

impl ReductionCase {
    pub fn params(&self) -> Result<OperatorParams> {
        match *self {
            ReductionCase::LaguerreExp { n } => {
                OperatorParams::new(vec![1.0; n + 1], vec![1.0; n])
            }
            ReductionCase::Nml { n, nu } => OperatorParams::new(vec![nu; n + 1], vec![nu; n]),
            ReductionCase::ClassicalWright { beta, nu } => {
                OperatorParams::new(vec![1.0, beta], vec![nu])
            }
            ReductionCase::Tricomi | ReductionCase::BesselJ0 => {
                OperatorParams::new(vec![1.0, 1.0], vec![1.0])
            }
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ReductionCase::LaguerreExp { n } => format!("laguerre-exp[n={n}]"),
            ReductionCase::Nml { n, nu } => format!("n-mittag-leffler[n={n},nu={nu}]"),
            ReductionCase::ClassicalWright { beta, nu } => {
                format!("classical-wright[beta={beta},nu={nu}]")
            }
            ReductionCase::Tricomi => "tricomi".into(),
            ReductionCase::BesselJ0 => "bessel-j0".into(),
        }
    }

    /// `(mpw side, baseline side)` at `z`.
    fn sides(&self, params: &OperatorParams, z: Complex64, opts: &EvalOptions) -> Result<(Complex64, Complex64)> {
        Ok(match *self {
            ReductionCase::LaguerreExp { n } => (
                mpw_eval(params, z, opts)?.value,
                baseline::laguerre_exp(n, z, opts)?,
            ),
            ReductionCase::Nml { n, nu } => (
                mpw_eval(params, z, opts)?.value,
                baseline::n_mittag_leffler(n, nu, z, opts)?,
            ),
            ReductionCase::ClassicalWright { beta, nu } => (
                mpw_eval(params, z * beta, opts)?.value,
                baseline::wright(beta, nu, z, opts)?,
            ),
            ReductionCase::Tricomi => (
                mpw_eval(params, z, opts)?.value,
                baseline::tricomi_c0(z, opts)?,
            ),
            ReductionCase::BesselJ0 => {
                if z.im != 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "Bessel reduction takes real x, got {z}"
                    )));
                }
                let w = Complex64::new(-0.25 * z.re * z.re, 0.0);
                (
                    mpw_eval(params, w, opts)?.value,
                    Complex64::new(baseline::bessel_j(0.0, z.re, opts)?, 0.0),
                )
            }
        })
    }
}

/// Classical special cases of the generalized Wright function against the
/// baseline implementations.
pub fn check_reduction(
    case: ReductionCase,
    zs: &[Complex64],
    tol: f64,
    opts: &EvalOptions,
) -> Result<ResidualReport> {
    let params = case.params()?;
    let grid = zs
        .iter()
        .map(|z| GridPoint::Complex { re: z.re, im: z.im })
        .collect();
    let mut diag = Diagnostics::default();
    let mut residuals = Vec::with_capacity(zs.len());
    for (i, &z) in zs.iter().enumerate() {
        match case.sides(&params, z, opts) {
            Ok((a, b)) => residuals.push(Some((a - b).norm())),
            Err(e) => {
                diag.errors.push((i, e.to_string()));
                residuals.push(None);
            }
        }
    }
    Ok(ResidualReport::finish(
        format!("reduction[{}]", case.label()),
        grid,
        residuals,
        tol,
        ABSOLUTE_DEF,
        diag,
    ))
}

/// Parameters of the isochronous time-dependent equation
/// `u_t + iωu = d^β x^ν d^α u + i k x^(ν-α) u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdeParams {
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub omega: f64,
    pub kcoef: f64,
}

impl PdeParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha > 0.0
            && self.alpha < 1.0
            && self.beta > 0.0
            && self.beta < 1.0
            && self.nu > 0.0
            && self.nu.is_finite()
            && self.omega > 0.0
            && self.omega.is_finite()
            && self.kcoef.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "PDE parameters out of range: {self:?} (need alpha, beta in (0,1), nu > 0, omega > 0)"
            )))
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }

    pub fn operator_params(&self) -> Result<OperatorParams> {
        OperatorParams::new(vec![self.alpha, self.beta], vec![self.nu])
    }
}

/// Sign of the time phase in the separable ansatz
/// `u = exp(±iωt) W(-i k x^β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TimePhase {
    /// `exp(-iωt)`: cancels the `iωu` term, so the ansatz solves the
    /// equation.
    #[default]
    Negative,
    /// `exp(+iωt)`: leaves `2iωu` behind.
    Positive,
}

impl TimePhase {
    fn sign(self) -> f64 {
        match self {
            TimePhase::Negative => -1.0,
            TimePhase::Positive => 1.0,
        }
    }
}

/// Residual of the time-dependent equation for the separable ansatz on an
/// `x × t` grid, plus the periodicity `u(x, t + T) = u(x, t)`.
///
/// The residual at each point is normalised by the sum of the magnitudes
/// of the four terms, so that a trivial `u` still yields a meaningful number.
pub fn check_pde(
    p: &PdeParams,
    xgrid: &[f64],
    tgrid: &[f64],
    tol: f64,
    phase: TimePhase,
    opts: &EvalOptions,
) -> Result<ResidualReport> {
    p.validate()?;
    let params = p.operator_params()?;
    let lambda = Complex64::new(0.0, -p.kcoef);
    let omega = p.omega;
    let s = phase.sign();
    let phase_at = |t: f64| Complex64::from_polar(1.0, s * omega * t);

    let mut diag = Diagnostics {
        extension: true,
        ..Default::default()
    };
    diag.notes.push(format!(
        "u = exp({}iωt) W(-ikx^β), eigenvalue -ik",
        if s < 0.0 { "-" } else { "+" }
    ));

    let spatial = operator_side(&params, lambda, xgrid, opts);
    let mut grid = Vec::new();
    let mut residuals = Vec::new();
    let mut terms = Vec::new();
    let mut worst_period = 0.0_f64;
    for &x in xgrid {
        let w = mpw_eval(&params, lambda * x.powf(p.beta), opts);
        for &t in tgrid {
            let idx = grid.len();
            grid.push(GridPoint::XT { x, t });
            let res = (|| -> Result<f64> {
                let w = w.as_ref().map_err(Clone::clone)?;
                let (_, series) = spatial.as_ref().map_err(Clone::clone)?;
                terms.push(w.terms_used);
                let ph = phase_at(t);
                let u = ph * w.value;
                let u_t = Complex64::new(0.0, s * omega) * u;
                let damp = Complex64::new(0.0, omega) * u;
                let op = ph * series.evaluate(x);
                let forcing = Complex64::new(0.0, p.kcoef) * x.powf(p.nu - p.alpha) * u;
                let r = u_t + damp - op - forcing;
                let scale = u_t.norm() + damp.norm() + op.norm() + forcing.norm();
                let u_later = phase_at(t + p.period()) * w.value;
                worst_period = worst_period.max((u_later - u).norm());
                Ok(r.norm() / (scale + RESIDUAL_FLOOR))
            })();
            match res {
                Ok(v) => residuals.push(Some(v)),
                Err(e) => {
                    diag.errors.push((idx, e.to_string()));
                    residuals.push(None);
                }
            }
        }
    }
    diag.record_terms(&terms);
    diag.notes.push(format!("isochrony max |u(t+T)-u(t)| = {worst_period:e}"));
    let mut report = ResidualReport::finish(
        format!(
            "pde[alpha={},beta={},nu={},omega={},k={}]",
            p.alpha, p.beta, p.nu, p.omega, p.kcoef
        ),
        grid,
        residuals,
        tol,
        "|u_t + iωu - d^β x^ν d^α u - ikx^(ν-α)u| / (sum of term magnitudes + 1e-300)",
        diag,
    );
    if worst_period > ISOCHRONY_TOL {
        report.passed = false;
        report
            .diagnostics
            .notes
            .push(format!("isochrony bound {ISOCHRONY_TOL:e} exceeded"));
    }
    Ok(report)
}

/// Largest `|u(x, t + T) - u(x, t)|` over the grid.
pub fn isochrony_defect(
    p: &PdeParams,
    xgrid: &[f64],
    tgrid: &[f64],
    phase: TimePhase,
    opts: &EvalOptions,
) -> Result<f64> {
    p.validate()?;
    let params = p.operator_params()?;
    let lambda = Complex64::new(0.0, -p.kcoef);
    let s = phase.sign();
    let mut worst = 0.0_f64;
    for &x in xgrid {
        let w = mpw_eval(&params, lambda * x.powf(p.beta), opts)?.value;
        for &t in tgrid {
            let a = Complex64::from_polar(1.0, s * p.omega * t) * w;
            let b = Complex64::from_polar(1.0, s * p.omega * (t + p.period())) * w;
            worst = worst.max((a - b).norm());
        }
    }
    Ok(worst)
}

/// `count` evenly spaced points of `[start, stop]`.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let h = (stop - start) / (count - 1) as f64;
            (0..count).map(|i| start + h * i as f64).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteTolerances {
    pub eigen: f64,
    pub reduction: f64,
    pub pde: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        SuiteTolerances {
            eigen: 1e-8,
            reduction: 1e-12,
            pde: 1e-6,
        }
    }
}

enum SuiteCheck {
    Eigen(Vec<f64>, Vec<f64>, f64),
    Corollary(Vec<f64>, Vec<f64>),
    Proposition(f64, f64, f64),
    Reduction(ReductionCase),
    Pde(PdeParams),
}

/// Points on three rays of the disc `|z| <= 3`, plus the real axis.
pub fn reduction_points(count: usize) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..count)
        .map(|i| {
            let r = 3.0 * (i + 1) as f64 / count as f64;
            if i % 3 == 0 {
                Complex64::new(if i % 2 == 0 { r } else { -r }, 0.0)
            } else {
                Complex64::from_polar(r, golden * i as f64)
            }
        })
        .collect()
}

/// The default verification suite, ordered by check name.
pub fn run_suite(tol: &SuiteTolerances, opts: &EvalOptions) -> Vec<ResidualReport> {
    let xs = linspace(0.1, 2.0, 10);
    let checks = vec![
        SuiteCheck::Eigen(vec![0.5, 0.5], vec![0.5], 1.0),
        SuiteCheck::Eigen(vec![0.5, 0.5], vec![0.5], -1.0),
        SuiteCheck::Eigen(vec![1.0, 1.0, 1.0], vec![1.0, 1.0], 1.0),
        SuiteCheck::Eigen(vec![0.3, 0.7, 0.5], vec![0.5, 1.0], 1.0),
        SuiteCheck::Eigen(vec![0.7, 0.5, 0.7, 0.3], vec![0.3, 0.5, 1.0], -1.0),
        SuiteCheck::Corollary(vec![0.7, 0.7], vec![0.7]),
        SuiteCheck::Corollary(vec![0.3, 0.6, 0.5], vec![0.4, 0.5]),
        SuiteCheck::Proposition(0.5, 0.5, 0.5),
        SuiteCheck::Proposition(1.0, 0.6, 0.8),
        SuiteCheck::Proposition(1.0, 1.0, 1.0),
        SuiteCheck::Reduction(ReductionCase::LaguerreExp { n: 1 }),
        SuiteCheck::Reduction(ReductionCase::LaguerreExp { n: 2 }),
        SuiteCheck::Reduction(ReductionCase::Nml { n: 2, nu: 0.5 }),
        SuiteCheck::Reduction(ReductionCase::ClassicalWright { beta: 0.5, nu: 1.0 }),
        SuiteCheck::Reduction(ReductionCase::Tricomi),
        SuiteCheck::Reduction(ReductionCase::BesselJ0),
        SuiteCheck::Pde(PdeParams {
            alpha: 0.5,
            beta: 0.5,
            nu: 0.5,
            omega: 1.0,
            kcoef: 1.0,
        }),
    ];
    let zs = reduction_points(25);
    let bessel_x: Vec<Complex64> = linspace(-3.0, 3.0, 25)
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect();

    let mut reports: Vec<ResidualReport> = checks
        .par_iter()
        .map(|c| {
            let run = || -> Result<ResidualReport> {
                Ok(match c {
                    SuiteCheck::Eigen(a, v, l) => {
                        let p = OperatorParams::new(a.clone(), v.clone())?;
                        check_eigen(&p, Complex64::new(*l, 0.0), &xs, tol.eigen, opts)
                    }
                    SuiteCheck::Corollary(a, v) => {
                        let p = OperatorParams::new(a.clone(), v.clone())?;
                        check_corollary(&p, Complex64::new(1.0, 0.0), &xs, tol.eigen, opts)?
                    }
                    SuiteCheck::Proposition(a, b, v) => {
                        check_proposition_n1(*a, *b, *v, &xs, tol.eigen, opts)?
                    }
                    SuiteCheck::Reduction(case) => {
                        let pts = if *case == ReductionCase::BesselJ0 { &bessel_x } else { &zs };
                        check_reduction(*case, pts, tol.reduction, opts)?
                    }
                    SuiteCheck::Pde(p) => check_pde(
                        p,
                        &linspace(0.2, 1.5, 10),
                        &[0.0, 1.0, 3.0],
                        tol.pde,
                        TimePhase::Negative,
                        opts,
                    )?,
                })
            };
            run().unwrap_or_else(|e| ResidualReport {
                check_name: "setup".into(),
                grid: Vec::new(),
                residuals: Vec::new(),
                max_residual: f64::INFINITY,
                tolerance: 0.0,
                passed: false,
                residual_definition: String::new(),
                diagnostics: Diagnostics {
                    errors: vec![(0, e.to_string())],
                    ..Default::default()
                },
            })
        })
        .collect();
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn half_order_eigen_passes() {
        let p = OperatorParams::new(vec![0.5, 0.5], vec![0.5]).unwrap();
        let r = check_eigen(&p, Complex64::new(1.0, 0.0), &linspace(0.1, 2.0, 10), 1e-8, &o());
        assert!(r.passed, "{r:?}");
        assert!(!r.diagnostics.extension);
    }

    #[test]
    fn condition_is_one_for_positive_terms_and_grows_with_cancellation() {
        let p = OperatorParams::new(vec![0.5, 0.5], vec![0.5]).unwrap();
        let xs = linspace(0.5, 2.0, 4);
        let up = check_eigen(&p, Complex64::new(1.0, 0.0), &xs, 1e-8, &o());
        assert_eq!(up.diagnostics.condition.len(), xs.len());
        for c in up.diagnostics.condition.iter().flatten() {
            assert!((c - 1.0).abs() < 1e-14, "{c}");
        }
        let down = check_eigen(&p, Complex64::new(-1.0, 0.0), &xs, 1e-8, &o());
        let last = down.diagnostics.condition.last().unwrap().unwrap();
        assert!(last > 2.0, "{last}");
    }

    #[test]
    fn zero_eigenvalue_is_exact() {
        let p = OperatorParams::new(vec![0.7, 0.4], vec![0.3]).unwrap();
        let r = check_eigen(&p, Complex64::new(0.0, 0.0), &[0.5, 1.0], 1e-8, &o());
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn corollary_needs_zero_drift() {
        let p = OperatorParams::new(vec![0.5, 0.6], vec![0.4]).unwrap();
        assert!(matches!(
            check_corollary(&p, Complex64::new(1.0, 0.0), &[1.0], 1e-8, &o()),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn failing_point_marks_report() {
        // numerator pole at k = 1 makes every point undefined
        let p = OperatorParams::new(vec![1.0, 1.0, 0.7], vec![0.3, 0.5]).unwrap();
        let r = check_eigen(&p, Complex64::new(1.0, 0.0), &[0.5, 1.0], 1e-8, &o());
        assert!(!r.passed);
        assert!(r.max_residual.is_infinite());
        assert_eq!(r.diagnostics.errors.len(), 2);
    }

    #[test]
    fn interior_annihilation_detected() {
        // second Caputo stage meets x^0 at k = 1
        let p = OperatorParams::new(vec![1.0, 0.7], vec![0.3]).unwrap();
        let hits = interior_annihilations(&p, 10);
        assert_eq!(hits, vec![(2, 1)]);
        let r = check_eigen(&p, Complex64::new(1.0, 0.0), &linspace(0.1, 2.0, 8), 1e-8, &o());
        assert!(!r.passed);
    }

    #[test]
    fn pde_phase_sensitivity() {
        let p = PdeParams { alpha: 0.5, beta: 0.5, nu: 0.5, omega: 1.0, kcoef: 1.0 };
        let xs = linspace(0.2, 1.5, 10);
        let good = check_pde(&p, &xs, &[0.0, 1.0, 3.0], 1e-6, TimePhase::Negative, &o()).unwrap();
        assert!(good.passed, "{good:?}");
        let bad = check_pde(&p, &xs, &[0.0, 1.0, 3.0], 1e-6, TimePhase::Positive, &o()).unwrap();
        assert!(!bad.passed);
    }

    #[test]
    fn report_json_shape() {
        let r = check_reduction(ReductionCase::Tricomi, &[Complex64::new(1.0, 0.0)], 1e-12, &o()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["check_name", "grid", "residuals", "max_residual", "tolerance", "passed", "residual_definition", "diagnostics"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["grid"][0]["re"], 1.0);
    }
}
