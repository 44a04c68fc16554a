//! Classical special functions used as independent oracles.
//!
//! None of these route through the generalized Wright coefficient
//! machinery; each builds its own coefficient stream from the Gamma kernel
//! and shares only the truncated summation driver.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio, signed_log_gamma, SignedLog};
use crate::series::{sum_power_series, EvalOptions, EvalResult};

fn recip_gamma_log(x: f64) -> SignedLog {
    signed_log_gamma(x).recip()
}

fn ln_factorial(k: usize) -> f64 {
    signed_log_gamma(k as f64 + 1.0).log_abs
}

fn real_arg(z: Complex64, what: &str) -> Result<f64> {
    if z.im != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{what} takes a real argument, got {z}"
        )));
    }
    Ok(z.re)
}

/// `Σ z^k / (k! Γ(βk + ν))`
pub fn wright_series(beta: f64, nu: f64, z: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("Wright beta = {beta} must be positive")));
    }
    let coeffs = (0..).map(|k: usize| {
        let g = recip_gamma_log(beta * k as f64 + nu);
        Ok(g.mul(SignedLog {
            log_abs: -ln_factorial(k),
            sign: 1,
        }))
    });
    sum_power_series(coeffs, z, opts)
}

pub fn wright(beta: f64, nu: f64, z: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    wright_series(beta, nu, z, opts).map(|r| r.value)
}

/// `Σ z^k / Γ(αk + β)`
pub fn mittag_leffler2_series(
    alpha: f64,
    beta: f64,
    z: Complex64,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Mittag-Leffler alpha = {alpha} must be positive"
        )));
    }
    let coeffs = (0..).map(|k: usize| Ok(recip_gamma_log(alpha * k as f64 + beta)));
    sum_power_series(coeffs, z, opts)
}

pub fn mittag_leffler2(alpha: f64, beta: f64, z: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    mittag_leffler2_series(alpha, beta, z, opts).map(|r| r.value)
}

/// `Σ z^k / Π_i Γ(α_i k + β_i)`
pub fn multi_index_ml_series(
    alphas: &[f64],
    betas: &[f64],
    z: Complex64,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    if alphas.is_empty() || alphas.len() != betas.len() {
        return Err(Error::InvalidArgument(format!(
            "multi-index Mittag-Leffler needs equal nonempty index vectors, got {} and {}",
            alphas.len(),
            betas.len()
        )));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "multi-index Mittag-Leffler alpha = {a} must be positive"
        )));
    }
    let coeffs = (0..).map(|k: usize| {
        let kf = k as f64;
        Ok(alphas
            .iter()
            .zip(betas)
            .fold(SignedLog::ONE, |acc, (a, b)| acc.mul(recip_gamma_log(a * kf + b))))
    });
    sum_power_series(coeffs, z, opts)
}

pub fn multi_index_ml(
    alphas: &[f64],
    betas: &[f64],
    z: Complex64,
    opts: &EvalOptions,
) -> Result<Complex64> {
    multi_index_ml_series(alphas, betas, z, opts).map(|r| r.value)
}

/// `Σ c_k z^k` with `c_k = Π_{j=0}^{k-1} Γ(α(jμ+l)+1) / Γ(α(jμ+l+1)+1)`.
pub fn kilbas_saigo_series(
    alpha: f64,
    mu: f64,
    l: f64,
    z: Complex64,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    let mut c = SignedLog::ONE;
    let mut k = 0usize;
    let coeffs = std::iter::from_fn(move || {
        if k > 0 {
            let j = (k - 1) as f64;
            match gamma_ratio(alpha * (j * mu + l) + 1.0, alpha * (j * mu + l + 1.0) + 1.0) {
                Ok(r) => c = c.mul(r),
                Err(Error::DenominatorPole { .. }) => c = SignedLog::ZERO,
                Err(e) => return Some(Err(e)),
            }
        }
        k += 1;
        Some(Ok(c))
    });
    sum_power_series(coeffs, z, opts)
}

pub fn kilbas_saigo(alpha: f64, mu: f64, l: f64, z: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    kilbas_saigo_series(alpha, mu, l, z, opts).map(|r| r.value)
}

/// Normalized hyper-Bessel series `₀F_m((ν_i+1); w)` at `w`.
fn delerue_0fm(nus: &[f64], w: f64, opts: &EvalOptions) -> Result<EvalResult> {
    if nus.is_empty() {
        return Err(Error::InvalidArgument("hyper-Bessel needs at least one index".into()));
    }
    if let Some(v) = nus.iter().find(|v| signed_log_gamma(**v + 1.0).is_pole()) {
        return Err(Error::NumeratorPole { arg: v + 1.0 });
    }
    // c_k = Π_i Γ(ν_i+1)/Γ(ν_i+k+1) / k!
    let coeffs = (0..).map(|k: usize| {
        let kf = k as f64;
        let mut c = SignedLog {
            log_abs: -ln_factorial(k),
            sign: 1,
        };
        for &v in nus {
            match gamma_ratio(v + 1.0, v + kf + 1.0) {
                Ok(r) => c = c.mul(r),
                Err(Error::DenominatorPole { .. }) => c = SignedLog::ZERO,
                Err(e) => return Err(e),
            }
        }
        Ok(c)
    });
    sum_power_series(coeffs, Complex64::new(w, 0.0), opts)
}

/// Delerue hyper-Bessel function of order `m = nus.len()`.
///
/// `normalized` returns `j^(m)(x) = ₀F_m((ν_i+1); -(x/(m+1))^(m+1))`;
/// otherwise `J^(m)(x) = (x/(m+1))^(Σν) / Π Γ(ν_i+1) · j^(m)(x)`, which
/// needs `x >= 0`.
pub fn delerue_hb_series(
    nus: &[f64],
    x: f64,
    normalized: bool,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    let m = nus.len() as f64;
    let base = x / (m + 1.0);
    let w = -base.powi(nus.len() as i32 + 1);
    let mut r = delerue_0fm(nus, w, opts)?;
    if !normalized {
        if x < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "unnormalized hyper-Bessel needs x >= 0, got {x}"
            )));
        }
        let nu_sum: f64 = nus.iter().sum();
        let pref = nus
            .iter()
            .fold(SignedLog::ONE, |acc, v| acc.mul(recip_gamma_log(v + 1.0)))
            .value()
            * base.powf(nu_sum);
        r.value *= pref;
        r.tail_estimate *= pref.abs();
    }
    Ok(r)
}

pub fn delerue_hb(nus: &[f64], x: f64, normalized: bool, opts: &EvalOptions) -> Result<f64> {
    delerue_hb_series(nus, x, normalized, opts).map(|r| r.value.re)
}

/// `e_n(x) = Σ x^k / (k!)^(n+1)`
pub fn laguerre_exp_series(n: usize, x: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    let power = (n + 1) as f64;
    let coeffs = (0..).map(|k: usize| {
        Ok(SignedLog {
            log_abs: -power * ln_factorial(k),
            sign: 1,
        })
    });
    sum_power_series(coeffs, x, opts)
}

pub fn laguerre_exp(n: usize, x: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    laguerre_exp_series(n, x, opts).map(|r| r.value)
}

/// `E_{n;ν,1}(x) = Σ x^k / Γ(νk+1)^(n+1)`
pub fn n_mittag_leffler_series(
    n: usize,
    nu: f64,
    x: Complex64,
    opts: &EvalOptions,
) -> Result<EvalResult> {
    if !(nu > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "n-Mittag-Leffler nu = {nu} must be positive"
        )));
    }
    let power = (n + 1) as f64;
    let coeffs = (0..).map(|k: usize| {
        Ok(SignedLog {
            log_abs: -power * signed_log_gamma(nu * k as f64 + 1.0).log_abs,
            sign: 1,
        })
    });
    sum_power_series(coeffs, x, opts)
}

pub fn n_mittag_leffler(n: usize, nu: f64, x: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    n_mittag_leffler_series(n, nu, x, opts).map(|r| r.value)
}

/// Tricomi function `C₀(x) = Σ x^k / (k!)²`.
pub fn tricomi_c0_series(x: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    let coeffs = (0..).map(|k: usize| {
        Ok(SignedLog {
            log_abs: -2.0 * ln_factorial(k),
            sign: 1,
        })
    });
    sum_power_series(coeffs, x, opts)
}

pub fn tricomi_c0(x: Complex64, opts: &EvalOptions) -> Result<Complex64> {
    tricomi_c0_series(x, opts).map(|r| r.value)
}

/// Bessel function of the first kind from its power series,
/// `J_ν(x) = (x/2)^ν Σ (-x²/4)^k / (k! Γ(ν+k+1))`.
///
/// Negative `x` is accepted for integer `ν` only.
pub fn bessel_j_series(nu: f64, x: f64, opts: &EvalOptions) -> Result<EvalResult> {
    if !(nu > -1.0) {
        return Err(Error::InvalidArgument(format!("Bessel order nu = {nu} must exceed -1")));
    }
    let integer_order = nu == nu.floor();
    if x < 0.0 && !integer_order {
        return Err(Error::InvalidArgument(format!(
            "Bessel J of non-integer order {nu} needs x >= 0"
        )));
    }
    let w = -0.25 * x * x;
    let coeffs = (0..).map(|k: usize| {
        Ok(recip_gamma_log(nu + k as f64 + 1.0).mul(SignedLog {
            log_abs: -ln_factorial(k),
            sign: 1,
        }))
    });
    let mut r = sum_power_series(coeffs, Complex64::new(w, 0.0), opts)?;
    let mut pref = (0.5 * x.abs()).powf(nu);
    if x < 0.0 && (nu as i64) % 2 != 0 {
        pref = -pref;
    }
    r.value *= pref;
    r.tail_estimate *= pref.abs();
    Ok(r)
}

pub fn bessel_j(nu: f64, x: f64, opts: &EvalOptions) -> Result<f64> {
    bessel_j_series(nu, x, opts).map(|r| r.value.re)
}

/// A baseline function together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaselineSpec {
    Wright { beta: f64, nu: f64 },
    MittagLeffler2 { alpha: f64, beta: f64 },
    MultiIndexMl { alphas: Vec<f64>, betas: Vec<f64> },
    KilbasSaigo { alpha: f64, mu: f64, l: f64 },
    LaguerreExp { n: usize },
    NMittagLeffler { n: usize, nu: f64 },
    Tricomi,
    BesselJ { nu: f64 },
    DelerueHb { nus: Vec<f64> },
    DelerueHbNormalized { nus: Vec<f64> },
}

impl BaselineSpec {
    pub const KINDS: &'static [&'static str] = &[
        "wright",
        "mittag-leffler2",
        "multi-index-ml",
        "kilbas-saigo",
        "laguerre-exp",
        "n-mittag-leffler",
        "tricomi",
        "bessel-j",
        "delerue-hb",
        "delerue-hb-normalized",
    ];

    /// Build from a kind name and a flat argument list.
    ///
    /// Arities: wright `β,ν`; mittag-leffler2 `α,β`; multi-index-ml
    /// `α_1..α_m,β_1..β_m`; kilbas-saigo `α,μ,l`; laguerre-exp `n`;
    /// n-mittag-leffler `n,ν`; tricomi none; bessel-j `ν`; delerue-hb(-normalized)
    /// `ν_1..ν_m`.
    pub fn from_args(kind: &str, args: &[f64]) -> Result<Self> {
        let arity = |want: usize| -> Result<()> {
            if args.len() == want {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{kind} takes {want} argument(s), got {}",
                    args.len()
                )))
            }
        };
        let count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v == v.floor() {
                Ok(v as usize)
            } else {
                Err(Error::InvalidArgument(format!("{kind}: n = {v} must be a nonnegative integer")))
            }
        };
        Ok(match kind {
            "wright" => {
                arity(2)?;
                BaselineSpec::Wright { beta: args[0], nu: args[1] }
            }
            "mittag-leffler2" => {
                arity(2)?;
                BaselineSpec::MittagLeffler2 { alpha: args[0], beta: args[1] }
            }
            "multi-index-ml" => {
                if args.is_empty() || !args.len().is_multiple_of(2) {
                    return Err(Error::InvalidArgument(format!(
                        "multi-index-ml takes 2m arguments, got {}",
                        args.len()
                    )));
                }
                let (a, b) = args.split_at(args.len() / 2);
                BaselineSpec::MultiIndexMl { alphas: a.to_vec(), betas: b.to_vec() }
            }
            "kilbas-saigo" => {
                arity(3)?;
                BaselineSpec::KilbasSaigo { alpha: args[0], mu: args[1], l: args[2] }
            }
            "laguerre-exp" => {
                arity(1)?;
                BaselineSpec::LaguerreExp { n: count(args[0])? }
            }
            "n-mittag-leffler" => {
                arity(2)?;
                BaselineSpec::NMittagLeffler { n: count(args[0])?, nu: args[1] }
            }
            "tricomi" => {
                arity(0)?;
                BaselineSpec::Tricomi
            }
            "bessel-j" => {
                arity(1)?;
                BaselineSpec::BesselJ { nu: args[0] }
            }
            "delerue-hb" => BaselineSpec::DelerueHb { nus: args.to_vec() },
            "delerue-hb-normalized" => BaselineSpec::DelerueHbNormalized { nus: args.to_vec() },
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown baseline kind '{other}' (expected one of {})",
                    Self::KINDS.join(", ")
                )))
            }
        })
    }

    pub fn eval(&self, z: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
        match self {
            BaselineSpec::Wright { beta, nu } => wright_series(*beta, *nu, z, opts),
            BaselineSpec::MittagLeffler2 { alpha, beta } => {
                mittag_leffler2_series(*alpha, *beta, z, opts)
            }
            BaselineSpec::MultiIndexMl { alphas, betas } => {
                multi_index_ml_series(alphas, betas, z, opts)
            }
            BaselineSpec::KilbasSaigo { alpha, mu, l } => {
                kilbas_saigo_series(*alpha, *mu, *l, z, opts)
            }
            BaselineSpec::LaguerreExp { n } => laguerre_exp_series(*n, z, opts),
            BaselineSpec::NMittagLeffler { n, nu } => n_mittag_leffler_series(*n, *nu, z, opts),
            BaselineSpec::Tricomi => tricomi_c0_series(z, opts),
            BaselineSpec::BesselJ { nu } => bessel_j_series(*nu, real_arg(z, "bessel-j")?, opts),
            BaselineSpec::DelerueHb { nus } => {
                delerue_hb_series(nus, real_arg(z, "delerue-hb")?, false, opts)
            }
            BaselineSpec::DelerueHbNormalized { nus } => {
                delerue_hb_series(nus, real_arg(z, "delerue-hb-normalized")?, true, opts)
            }
        }
    }
}
