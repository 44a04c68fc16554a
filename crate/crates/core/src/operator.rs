//! Term-wise fractional calculus on generalized power series and the
//! fractional hyper-Bessel operator built from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio, recip_gamma};
use crate::params::OperatorParams;
use crate::power_series::GenPowerSeries;
use crate::series::snap_pole;

/// Tolerance for recognising an exponent as an integer.
const INTEGER_TOL: f64 = 1e-12;

fn near_integer(x: f64) -> Option<f64> {
    let r = x.round();
    ((x - r).abs() <= INTEGER_TOL * x.abs().max(1.0)).then_some(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "stage", content = "order", rename_all = "kebab-case")]
pub enum PipelineStage {
    CaputoDerivative(f64),
    PowerMultiply(f64),
    RlIntegral(f64),
}

impl PipelineStage {
    pub fn apply(&self, s: &GenPowerSeries) -> Result<GenPowerSeries> {
        match *self {
            PipelineStage::CaputoDerivative(g) => caputo_series(s, g),
            PipelineStage::PowerMultiply(v) => power_multiply(s, v),
            PipelineStage::RlIntegral(g) => rl_integral_series(s, g),
        }
    }
}

/// Ordered list of stages, stored in application order: `stages[0]` acts
/// first on the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub stages: Vec<PipelineStage>,
}

impl Pipeline {
    /// `d^(α_{n+1}) x^(ν_n) ⋯ x^(ν_1) d^(α_1)`, innermost stage first.
    pub fn hyper_bessel(params: &OperatorParams) -> Self {
        let mut stages = Vec::with_capacity(2 * params.n() + 1);
        for (a, v) in params.alpha().iter().zip(params.nu()) {
            stages.push(PipelineStage::CaputoDerivative(*a));
            stages.push(PipelineStage::PowerMultiply(*v));
        }
        stages.push(PipelineStage::CaputoDerivative(params.stride()));
        Pipeline { stages }
    }

    pub fn apply(&self, s: &GenPowerSeries) -> Result<GenPowerSeries> {
        let mut cur = s.clone();
        for (index, stage) in self.stages.iter().enumerate() {
            cur = stage.apply(&cur).map_err(|e| Error::Stage {
                index,
                source: Box::new(e),
            })?;
        }
        Ok(cur)
    }
}

fn caputo_m(gamma: f64) -> f64 {
    if gamma == gamma.floor() {
        gamma
    } else {
        gamma.ceil()
    }
}

/// Caputo derivative of order `gamma` applied to `x^p`.
///
/// Returns `(multiplier, p - gamma)`. Integer `p` below `m = ⌈γ⌉` is
/// annihilated. Integer orders use the falling factorial. Otherwise the power
/// rule `Γ(p+1)/Γ(p+1-γ)` is used for every `p` at which `Γ(p+1)` is finite,
/// with `1/Γ = 0` at poles of the denominator.
pub fn caputo_term(p: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Caputo order {gamma} must be positive"
        )));
    }
    if !p.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent {p} must be finite")));
    }
    let new_p = p - gamma;
    let m = caputo_m(gamma);
    if let Some(r) = near_integer(p) {
        if r >= 0.0 && r < m {
            return Ok((0.0, new_p));
        }
    }
    if gamma == gamma.floor() {
        let mut mult = 1.0;
        for i in 0..gamma as usize {
            mult *= p - i as f64;
        }
        return Ok((mult, new_p));
    }
    match gamma_ratio(snap_pole(p + 1.0), snap_pole(p + 1.0 - gamma)) {
        Ok(r) => Ok((r.value(), new_p)),
        Err(Error::DenominatorPole { .. }) => Ok((0.0, new_p)),
        Err(Error::NumeratorPole { .. }) => Err(Error::UnsupportedExponent {
            exponent: p,
            order: gamma,
        }),
        Err(e) => Err(e),
    }
}

/// Riemann–Liouville integral of order `gamma >= 0` applied to `x^p`,
/// `p > -1`.
pub fn rl_term(p: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "integral order {gamma} must be nonnegative"
        )));
    }
    if !(p > -1.0) {
        return Err(Error::UnsupportedExponent {
            exponent: p,
            order: gamma,
        });
    }
    if gamma == 0.0 {
        return Ok((1.0, p));
    }
    Ok((gamma_ratio(p + 1.0, p + 1.0 + gamma)?.value(), p + gamma))
}

/// Term-wise Caputo derivative. Terms with zero coefficient are left alone.
/// Annihilated leading terms are dropped by advancing the start index.
pub fn caputo_series(s: &GenPowerSeries, gamma: f64) -> Result<GenPowerSeries> {
    let mut out = Vec::with_capacity(s.len());
    for (_, p, c) in s.terms() {
        if c.re == 0.0 && c.im == 0.0 {
            out.push(c);
            continue;
        }
        let (mult, _) = caputo_term(p, gamma)?;
        out.push(c * mult);
    }
    // validate the order even for an empty series
    if s.is_empty() {
        caputo_term(1.5, gamma)?;
    }
    let offset = s.offset() - gamma;
    let lead = out.iter().take_while(|c| c.re == 0.0 && c.im == 0.0).count();
    Ok(s.clone().map_coeffs(out, offset).drop_leading(lead))
}

/// Term-wise Riemann–Liouville integral.
pub fn rl_integral_series(s: &GenPowerSeries, gamma: f64) -> Result<GenPowerSeries> {
    let mut out = Vec::with_capacity(s.len());
    for (_, p, c) in s.terms() {
        let (mult, _) = rl_term(p, gamma)?;
        out.push(c * mult);
    }
    if s.is_empty() {
        rl_term(0.0, gamma)?;
    }
    let offset = s.offset() + gamma;
    Ok(s.clone().map_coeffs(out, offset))
}

/// Multiply by `x^nu`.
pub fn power_multiply(s: &GenPowerSeries, nu: f64) -> Result<GenPowerSeries> {
    if !nu.is_finite() {
        return Err(Error::InvalidArgument(format!("power {nu} must be finite")));
    }
    let coeffs = s.coeffs().to_vec();
    let offset = s.offset() + nu;
    Ok(s.clone().map_coeffs(coeffs, offset))
}

/// Fractional hyper-Bessel operator with the given parameters applied
/// term-wise to `s`.
pub fn apply_pipeline(params: &OperatorParams, s: &GenPowerSeries) -> Result<GenPowerSeries> {
    Pipeline::hyper_bessel(params).apply(s)
}

/// L1-scheme approximation of the Caputo derivative of order `gamma ∈ (0,1)`
/// of `f` at `x`, on a uniform grid of `steps` subintervals of `[0, x]`.
pub fn caputo_quadrature<F>(f: F, gamma: f64, x: f64, steps: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "quadrature order {gamma} must lie in (0, 1)"
        )));
    }
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::InvalidArgument(format!("quadrature point {x} must be positive")));
    }
    if steps == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one step".into()));
    }
    let h = x / steps as f64;
    let values: Vec<f64> = (0..=steps).map(|i| f(h * i as f64)).collect();
    let e = 1.0 - gamma;
    let weights = (0..steps).map(|j| {
        let j = j as f64;
        (j + 1.0).powf(e) - j.powf(e)
    });
    let diffs = (0..steps).map(|j| values[steps - j] - values[steps - j - 1]);
    let total = crate::sum::sum_f64(weights.zip(diffs).map(|(w, d)| w * d));
    Ok(total * h.powf(-gamma) * recip_gamma(2.0 - gamma))
}

/// The generalized Wright series `Σ c_k λ^k x^(ρk)` as a
/// [`GenPowerSeries`], truncated after `terms` terms.
pub fn mpw_power_series(
    params: &OperatorParams,
    lambda: Complex64,
    terms: usize,
) -> Result<GenPowerSeries> {
    let mut lk = Complex64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(terms);
    for c in crate::series::defined_coefficients(params).take(terms) {
        out.push(lk * c?.value());
        lk *= lambda;
    }
    GenPowerSeries::new(params.stride(), 0.0, out)
}
