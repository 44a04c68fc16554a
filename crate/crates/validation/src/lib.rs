//! Acceptance criteria for `mpwright`, each returning a [`Verdict`].
//!
//! Draws are seeded so that every run sees the same cases.

use std::time::Instant;

use mpwright::error::Error;
use mpwright::gamma::{gamma, signed_log_gamma};
use mpwright::harness::{
    check_corollary, check_eigen, check_pde, check_reduction, interior_annihilations,
    isochrony_defect, linspace, reduction_points, PdeParams, ReductionCase, TimePhase,
};
use mpwright::operator::{caputo_quadrature, caputo_term};
use mpwright::params::OperatorParams;
use mpwright::series::{coefficient_logs, direct_coefficient, ratio_diagnostics, EvalOptions};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    fn new(id: &'static str, title: &'static str, passed: bool, detail: String) -> Self {
        Verdict {
            id,
            title,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} -- {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Every `(alpha, nu)` with entries from `values`, for `n = 1..=3`.
pub fn eigen_grid(values: &[f64]) -> Vec<(Vec<f64>, Vec<f64>)> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let len = 2 * n + 1;
        let total = values.len().pow(len as u32);
        for mut code in 0..total {
            let mut entries = Vec::with_capacity(len);
            for _ in 0..len {
                entries.push(values[code % values.len()]);
                code /= values.len();
            }
            let nu = entries.split_off(n + 1);
            out.push((entries, nu));
        }
    }
    out
}

#[derive(Debug, Default, Clone, Copy)]
pub struct EigenSweep {
    pub checks: usize,
    pub passed: usize,
    /// Coefficients undefined (numerator Gamma pole).
    pub undefined: usize,
    /// Some nonzero term is annihilated by a Caputo stage after the first.
    pub annihilated: usize,
    pub annihilated_passed: usize,
    /// Failures with neither cause.
    pub other_failures: usize,
    pub worst_admissible: f64,
    /// Over failing well-posed points: worst residual measured against the
    /// term mass instead of the value, and the smallest condition number.
    pub failing_mass_residual: f64,
    pub failing_min_condition: f64,
    pub seconds: f64,
}

pub fn eigen_sweep(values: &[f64], lambdas: &[f64], xs: &[f64], tol: f64) -> EigenSweep {
    let opts = EvalOptions::default();
    let start = Instant::now();
    let mut s = EigenSweep {
        failing_min_condition: f64::INFINITY,
        ..Default::default()
    };
    for (alpha, nu) in eigen_grid(values) {
        let p = OperatorParams::new(alpha, nu).expect("grid values are valid");
        for &l in lambdas {
            let r = check_eigen(&p, real(l), xs, tol, &opts);
            s.checks += 1;
            let undefined = !r.diagnostics.errors.is_empty()
                && matches!(coefficient_logs(&p, 60), Err(Error::CoefficientPole { .. }));
            let annihilated = !undefined
                && !interior_annihilations(&p, r.diagnostics.terms_max + 10).is_empty();
            if r.passed {
                s.passed += 1;
            }
            if undefined {
                s.undefined += 1;
            } else if annihilated {
                s.annihilated += 1;
                if r.passed {
                    s.annihilated_passed += 1;
                }
            } else {
                s.worst_admissible = s.worst_admissible.max(r.max_residual);
                if !r.passed {
                    s.other_failures += 1;
                    let points = r.residuals.iter().zip(&r.diagnostics.condition);
                    for (res, cond) in points {
                        if let (Some(res), Some(cond)) = (res, cond) {
                            if *res > tol {
                                s.failing_mass_residual = s.failing_mass_residual.max(res / cond);
                                s.failing_min_condition = s.failing_min_condition.min(*cond);
                            }
                        }
                    }
                }
            }
        }
    }
    s.seconds = start.elapsed().as_secs_f64();
    s
}

pub const GRID_VALUES: [f64; 4] = [0.3, 0.5, 0.7, 1.0];

/// The full eigen-residual sweep, and the same sweep restricted to the
/// parameter sets on which the relation is well posed term by term.
pub fn criterion_1() -> (Verdict, Verdict) {
    let s = eigen_sweep(&GRID_VALUES, &[-1.0, 1.0], &linspace(0.1, 2.0, 8), 1e-8);
    let full = Verdict::new(
        "1",
        "eigenfunction relation on the full grid at 1e-8, <= 60 s",
        s.passed == s.checks && s.seconds <= 60.0,
        format!(
            "{}/{} checks pass in {:.1} s; {} undefined (numerator pole), {} with an interior annihilated term ({} of those pass), {} other failures",
            s.passed, s.checks, s.seconds, s.undefined, s.annihilated, s.annihilated_passed, s.other_failures
        ),
    );
    let admissible = s.checks - s.undefined - s.annihilated;
    let subset = Verdict::new(
        "1a",
        "eigenfunction relation on the well-posed part of the grid at 1e-8",
        s.other_failures == 0 && admissible > 0,
        {
            let mut d = format!(
                "{} of {admissible} well-posed checks pass, worst residual {:.2e}",
                admissible - s.other_failures,
                s.worst_admissible
            );
            if s.other_failures > 0 {
                d.push_str(&format!(
                    "; failing points have condition number >= {:.1e} (value near a zero), residual relative to term mass <= {:.1e}",
                    s.failing_min_condition, s.failing_mass_residual
                ));
            }
            d
        },
    );
    (full, subset)
}

/// Random parameter set with zero drift: `ν_j = α_j + δ_j`, `Σ δ_j = 0`.
pub fn drift_free_params(r: &mut ChaCha8Rng) -> OperatorParams {
    loop {
        let n = r.gen_range(1..=3usize);
        let mut alpha: Vec<f64> = (0..n).map(|_| r.gen_range(0.25..1.0)).collect();
        let mut delta: Vec<f64> = (0..n).map(|_| r.gen_range(-0.15..0.15)).collect();
        let mean = delta.iter().sum::<f64>() / n as f64;
        delta.iter_mut().for_each(|d| *d -= mean);
        let nu: Vec<f64> = alpha.iter().zip(&delta).map(|(a, d)| a + d).collect();
        alpha.push(r.gen_range(0.3..1.0));
        if let Ok(p) = OperatorParams::new(alpha, nu) {
            if p.drift().abs() <= 1e-12 {
                return p;
            }
        }
    }
}

pub fn criterion_2() -> Verdict {
    let mut r = rng(2);
    let opts = EvalOptions::default();
    let xs = linspace(0.1, 2.0, 8);
    let mut passed = 0;
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let p = drift_free_params(&mut r);
        let rep = check_corollary(&p, real(1.0), &xs, 1e-8, &opts).expect("drift is zero");
        worst = worst.max(rep.max_residual);
        passed += usize::from(rep.passed);
    }
    Verdict::new(
        "2",
        "pure eigenfunction relation for 20 drift-free sets at 1e-8",
        passed == 20,
        format!("{passed}/20 pass, worst residual {worst:.2e}"),
    )
}

pub fn reduction_cases() -> Vec<ReductionCase> {
    vec![
        ReductionCase::LaguerreExp { n: 1 },
        ReductionCase::LaguerreExp { n: 2 },
        ReductionCase::LaguerreExp { n: 3 },
        ReductionCase::Nml { n: 1, nu: 0.5 },
        ReductionCase::Nml { n: 2, nu: 0.5 },
        ReductionCase::Nml { n: 3, nu: 0.7 },
        ReductionCase::ClassicalWright { beta: 0.5, nu: 1.0 },
        ReductionCase::ClassicalWright { beta: 0.8, nu: 0.3 },
        ReductionCase::ClassicalWright { beta: 0.3, nu: 1.5 },
        ReductionCase::Tricomi,
        ReductionCase::BesselJ0,
    ]
}

pub fn criterion_3() -> Verdict {
    let opts = EvalOptions::default();
    let zs = reduction_points(25);
    let xs: Vec<Complex64> = linspace(-3.0, 3.0, 25).into_iter().map(real).collect();
    let mut failed = Vec::new();
    let mut worst = 0.0_f64;
    let cases = reduction_cases();
    for case in &cases {
        let pts = if *case == ReductionCase::BesselJ0 { &xs } else { &zs };
        let rep = check_reduction(*case, pts, 1e-12, &opts).expect("case parameters are valid");
        worst = worst.max(rep.max_residual);
        if !rep.passed {
            failed.push(case.label());
        }
    }
    Verdict::new(
        "3",
        "reductions to classical functions at 25 points, |z| <= 3, 1e-12 absolute",
        failed.is_empty(),
        format!(
            "{} of {} cases pass, worst {worst:.2e}{}",
            cases.len() - failed.len(),
            cases.len(),
            if failed.is_empty() { String::new() } else { format!(", failing: {failed:?}") }
        ),
    )
}

pub fn criterion_4() -> Verdict {
    let mut r = rng(4);
    let mut worst = 0.0_f64;
    let mut min_gain = f64::INFINITY;
    let mut bad = 0;
    for _ in 0..50 {
        let p: f64 = r.gen_range(0.5..=3.0);
        let g: f64 = r.gen_range(0.1..0.9);
        let x: f64 = r.gen_range(0.5..=2.0);
        let (m, e) = caputo_term(p, g).expect("positive exponent");
        let exact = m * x.powf(e);
        let f = |t: f64| t.powf(p);
        let e1 = ((caputo_quadrature(f, g, x, 4096).unwrap() - exact) / exact).abs();
        let e2 = ((caputo_quadrature(f, g, x, 16384).unwrap() - exact) / exact).abs();
        let gain = e1 / e2;
        worst = worst.max(e1);
        min_gain = min_gain.min(gain);
        if !(e1 <= 1e-3 && gain >= 2.0) {
            bad += 1;
        }
    }
    Verdict::new(
        "4",
        "Caputo power rule vs L1 quadrature, 50 cases, 1e-3 at 4096 steps, gain >= 2 at 16384",
        bad == 0,
        format!("worst relative error {worst:.2e}, smallest refinement gain {min_gain:.2}, {bad} bad cases"),
    )
}

/// Least-squares slope of `ln r_k` against `ln k` over `lo..=hi`.
pub fn log_slope(ratios: &[f64], lo: usize, hi: usize) -> f64 {
    // ratios[i] is r_{i+1}
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|k| ((k as f64).ln(), ratios[k - 1].ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Parameter draws for the ratio test. The orders are kept large enough
/// that `(ρk)^(-Σα)` is below 1e-6 at `k = 500`.
pub fn ratio_params(r: &mut ChaCha8Rng) -> OperatorParams {
    let n = r.gen_range(2..=3usize);
    let alpha = (0..=n).map(|_| r.gen_range(0.8..=1.6)).collect();
    let nu = (0..n).map(|_| r.gen_range(0.3..=1.5)).collect();
    OperatorParams::new(alpha, nu).expect("positive draws")
}

pub fn criterion_5() -> Verdict {
    let mut r = rng(5);
    let mut worst_r500 = 0.0_f64;
    let mut worst_slope = 0.0_f64;
    let mut bad = 0;
    for _ in 0..20 {
        let p = ratio_params(&mut r);
        let ratios = match ratio_diagnostics(&p, 501) {
            Ok(v) => v,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        let r500 = ratios[499];
        let slope_err = (log_slope(&ratios, 100, 500) + p.alpha_sum()).abs();
        worst_r500 = worst_r500.max(r500);
        worst_slope = worst_slope.max(slope_err);
        if !(r500 < 1e-6 && slope_err <= 0.05) {
            bad += 1;
        }
    }
    Verdict::new(
        "5",
        "ratio test: r_500 < 1e-6 and log-log slope = -sum(alpha) within 0.05, 20 sets",
        bad == 0,
        format!("max r_500 {worst_r500:.2e}, max slope error {worst_slope:.2e}, {bad} bad sets"),
    )
}

pub fn pde_draw(r: &mut ChaCha8Rng) -> PdeParams {
    PdeParams {
        alpha: r.gen_range(0.2..0.9),
        beta: r.gen_range(0.2..0.9),
        nu: r.gen_range(0.2..1.5),
        omega: r.gen_range(0.5..3.0),
        kcoef: r.gen_range(-2.0..2.0),
    }
}

/// Returns the verdict for the residual and periodicity parts, and a
/// separate one for the `k = 0` control, which the criterion expects to be
/// rejected.
pub fn criterion_6() -> (Verdict, Verdict) {
    let mut r = rng(6);
    let opts = EvalOptions::default();
    let xs = linspace(0.2, 1.5, 10);
    let ts = [0.0, 1.0, 3.0];
    let mut passed = 0;
    let mut worst = 0.0_f64;
    let mut worst_period = 0.0_f64;
    let mut printed_phase_rejected = 0;
    let draws: Vec<PdeParams> = (0..10).map(|_| pde_draw(&mut r)).collect();
    for p in &draws {
        let rep = check_pde(p, &xs, &ts, 1e-6, TimePhase::Negative, &opts).expect("valid draw");
        worst = worst.max(rep.max_residual);
        passed += usize::from(rep.passed);
        worst_period = worst_period.max(isochrony_defect(p, &xs, &ts, TimePhase::Negative, &opts).unwrap());
        let printed = check_pde(p, &xs, &ts, 1e-6, TimePhase::Positive, &opts).unwrap();
        printed_phase_rejected += usize::from(!printed.passed);
    }
    let solution = Verdict::new(
        "6",
        "time-dependent equation residual <= 1e-6 on 10x3 grid for 10 draws, isochrony <= 1e-14",
        passed == 10 && worst_period <= 1e-14,
        format!(
            "{passed}/10 pass with phase exp(-iwt), worst residual {worst:.2e}, isochrony {worst_period:.2e}; exp(+iwt) rejected in {printed_phase_rejected}/10"
        ),
    );
    let control = PdeParams {
        kcoef: 0.0,
        ..draws[0]
    };
    let rep = check_pde(&control, &xs, &ts, 1e-6, TimePhase::Negative, &opts).unwrap();
    let printed = check_pde(&control, &xs, &ts, 1e-6, TimePhase::Positive, &opts).unwrap();
    let control_verdict = Verdict::new(
        "6c",
        "k = 0 control is rejected by the checker",
        !rep.passed,
        format!(
            "with exp(-iwt) u is x-independent and solves the equation (residual {:.2e}), so it is accepted; with exp(+iwt) residual {:.2e}",
            rep.max_residual, printed.max_residual
        ),
    );
    (solution, control_verdict)
}

pub fn criterion_7() -> Verdict {
    let mut r = rng(7);
    let mut worst_refl = 0.0_f64;
    let mut n = 0;
    while n < 1000 {
        let x: f64 = r.gen_range(-30.0..0.0);
        if x == x.floor() {
            continue;
        }
        n += 1;
        let a = signed_log_gamma(x);
        let b = signed_log_gamma(1.0 - x);
        let lhs = f64::from(a.sign * b.sign) * (a.log_abs + b.log_abs).exp();
        let rhs = std::f64::consts::PI / (std::f64::consts::PI * x).sin();
        worst_refl = worst_refl.max(((lhs - rhs) / rhs).abs());
    }
    let mut worst_rec = 0.0_f64;
    for x in linspace(0.1, 50.0, 5000) {
        let lhs = gamma(x + 1.0);
        let rhs = x * gamma(x);
        worst_rec = worst_rec.max(((lhs - rhs) / rhs).abs());
    }
    Verdict::new(
        "7",
        "Gamma reflection (1e-10, 1000 draws) and recurrence on [0.1, 50] (1e-12)",
        worst_refl <= 1e-10 && worst_rec <= 1e-12,
        format!("worst reflection {worst_refl:.2e}, worst recurrence {worst_rec:.2e}"),
    )
}

pub fn criterion_8() -> Verdict {
    let mut r = rng(8);
    let mut worst = 0.0_f64;
    let mut bad = 0;
    for _ in 0..100 {
        let n = r.gen_range(1..=3usize);
        let alpha = (0..=n).map(|_| r.gen_range(0.2..1.5)).collect();
        let nu = (0..n).map(|_| r.gen_range(0.2..1.5)).collect();
        let p = OperatorParams::new(alpha, nu).unwrap();
        let rec = match coefficient_logs(&p, 100) {
            Ok(v) => v,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        for (k, c) in rec.iter().enumerate() {
            let d = direct_coefficient(&p, k).unwrap();
            let err = if c.is_zero() && d.is_zero() {
                0.0
            } else if c.sign != d.sign {
                f64::INFINITY
            } else {
                (c.log_abs - d.log_abs).exp_m1().abs()
            };
            worst = worst.max(err);
        }
        if worst > 1e-12 {
            bad += 1;
        }
    }
    Verdict::new(
        "8",
        "coefficient recurrence vs direct double product, k <= 100, 100 draws, 1e-12",
        bad == 0,
        format!("worst relative difference {worst:.2e}"),
    )
}
