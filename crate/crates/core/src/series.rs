//! Coefficients and evaluation of the multi-parameter generalized Wright
//! function
//!
//! ```text
//! W(z) = Σ_k c_k z^k,
//! c_k  = [Π_{i=1}^{k} Π_{j=1}^{n} Γ(ρ i + a_j) / Γ(ρ i + b_j)] / Γ(ρ k + b_{n+1}),
//! ```
//!
//! with stride `ρ = α_{n+1}`. Coefficients are accumulated as signed logs
//! by the one-step recurrence and only materialised when a term is formed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio_with_gap, signed_log_gamma, SignedLog};
use crate::params::OperatorParams;
use crate::sum::{sum_f64, CompensatedSum, Neumaier};

/// Relative distance below which a Gamma argument is treated as sitting on
/// a pole. Arguments are built from sums of the parameters, so exact
/// integers are usually off by a few ulps.
pub const POLE_SNAP: f64 = 1e-12;

/// Snap `x` onto a nonpositive integer when it is within [`POLE_SNAP`].
pub(crate) fn snap_pole(x: f64) -> f64 {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() <= POLE_SNAP * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    /// Relative truncation target.
    pub eps: f64,
    /// Hard cap on the number of summed terms.
    pub kmax: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            eps: 1e-15,
            kmax: 500,
        }
    }
}

impl EvalOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "eps = {} must lie in (0, 1)",
                self.eps
            )));
        }
        if self.kmax == 0 {
            return Err(Error::InvalidArgument("kmax must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    /// Number of leading terms in `value`.
    pub terms_used: usize,
    /// Magnitude of the first omitted term.
    pub tail_estimate: f64,
    /// A numerator pole ended the coefficient sequence after it had
    /// already collapsed to zero; `value` is then a finite polynomial.
    pub pole_truncated: bool,
}

/// `c * z^k` with `c` given as a signed log.
fn materialize(c: SignedLog, k: usize, z: Complex64, ln_abs_z: f64, unit: Complex64) -> Complex64 {
    if c.is_zero() {
        return Complex64::new(0.0, 0.0);
    }
    if k == 0 {
        return Complex64::new(c.value(), 0.0);
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mag = (c.log_abs + k as f64 * ln_abs_z).exp() * f64::from(c.sign);
    unit.powu(k as u32) * mag
}

/// Sum `Σ c_k z^k` over the coefficient stream.
///
/// Stops at the first pair of consecutive terms that are both at most
/// `eps` times the running sum; neither of the pair is included. A stream
/// that ends early is reported as `pole_truncated`.
pub(crate) fn sum_power_series<I>(coeffs: I, z: Complex64, opts: &EvalOptions) -> Result<EvalResult>
where
    I: IntoIterator<Item = Result<SignedLog>>,
{
    opts.validate()?;
    let ln_abs_z = z.norm().ln();
    let unit = if z.norm() > 0.0 {
        z / z.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // keep real arguments exactly on the real axis
    let unit = if z.im == 0.0 {
        Complex64::new(unit.re.signum(), 0.0)
    } else {
        unit
    };

    let mut acc = CompensatedSum::new();
    let mut pending: Option<Complex64> = None;
    let mut iter = coeffs.into_iter();

    for k in 0..=opts.kmax {
        let c = match iter.next() {
            Some(c) => c?,
            None => {
                if let Some(p) = pending.take() {
                    acc.add(p);
                }
                return Ok(EvalResult {
                    value: acc.value(),
                    terms_used: k,
                    tail_estimate: 0.0,
                    pole_truncated: true,
                });
            }
        };
        let term = materialize(c, k, z, ln_abs_z, unit);
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::NoConvergence {
                terms: k,
                tail: f64::INFINITY,
                value: acc.value().norm(),
            });
        }
        let partial = acc.value().norm();
        let small = term.norm() <= opts.eps * partial;

        if let Some(p) = pending {
            if small {
                return Ok(EvalResult {
                    value: acc.value(),
                    terms_used: k - 1,
                    tail_estimate: p.norm(),
                    pole_truncated: false,
                });
            }
            acc.add(p);
            pending = None;
        }

        if k == opts.kmax {
            let value = acc.value();
            let tail = term.norm();
            if tail > opts.eps.sqrt() * value.norm() {
                return Err(Error::NoConvergence {
                    terms: k,
                    tail,
                    value: value.norm(),
                });
            }
            return Ok(EvalResult {
                value,
                terms_used: k,
                tail_estimate: tail,
                pole_truncated: false,
            });
        }

        if small {
            pending = Some(term);
        } else {
            acc.add(term);
        }
    }
    unreachable!("loop returns at k == kmax")
}

/// Stream of signed-log coefficients `c_0, c_1, …` driven by the one-step
/// recurrence
///
/// `c_k = c_{k-1} · Π_j Γ(ρk+a_j)/Γ(ρk+b_j) · Γ(ρ(k-1)+b_{n+1}) / Γ(ρk+b_{n+1})`.
///
/// A denominator pole zeros its factor. When that pole is the trailing
/// `Γ(ρk+b_{n+1})` only `c_k` vanishes and `c_{k+1}` is restarted from the
/// running double product. A numerator pole yields
/// [`Error::CoefficientPole`] and ends the stream.
/// Signed log whose logarithm is accumulated with compensation, so that
/// long products do not drift.
#[derive(Debug, Clone, Copy)]
struct RunningLog {
    log: Neumaier,
    sign: i8,
}

impl RunningLog {
    fn from_signed(x: SignedLog) -> Self {
        let mut log = Neumaier::default();
        log.add(x.log_abs);
        RunningLog { log, sign: x.sign }
    }

    fn mul(&mut self, x: SignedLog) {
        if x.is_zero() {
            self.sign = 0;
        } else {
            self.log.add(x.log_abs);
            self.sign *= x.sign;
        }
    }

    fn is_zero(&self) -> bool {
        self.sign == 0
    }

    fn get(&self) -> SignedLog {
        if self.sign == 0 {
            SignedLog::ZERO
        } else {
            SignedLog {
                log_abs: self.log.value(),
                sign: self.sign,
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Coefficients<'a> {
    params: &'a OperatorParams,
    k: usize,
    prev: RunningLog,
    prev_tail_pole: bool,
    product: RunningLog,
    done: bool,
}

impl<'a> Coefficients<'a> {
    pub fn new(params: &'a OperatorParams) -> Self {
        Coefficients {
            params,
            k: 0,
            prev: RunningLog::from_signed(SignedLog::ZERO),
            prev_tail_pole: false,
            product: RunningLog::from_signed(SignedLog::ONE),
            done: false,
        }
    }

    /// True once the running double product has been zeroed by a
    /// denominator pole; every later coefficient is then zero.
    pub fn collapsed(&self) -> bool {
        self.product.is_zero()
    }

    fn step(&mut self) -> Result<RunningLog> {
        let off = self.params.offsets();
        let rho = off.stride;
        let b_last = off.b_last();
        let k = self.k;
        let zero = RunningLog::from_signed(SignedLog::ZERO);

        if k == 0 {
            let g = signed_log_gamma(snap_pole(b_last));
            self.prev_tail_pole = g.is_pole();
            return Ok(RunningLog::from_signed(g.recip()));
        }

        let kf = k as f64;
        let mut factor = SignedLog::ONE;
        for (j, (&a, &b)) in off.a.iter().zip(&off.b).enumerate() {
            let num = snap_pole(rho * kf + a);
            let den = snap_pole(rho * kf + b);
            match gamma_ratio_with_gap(num, den, a - b) {
                Ok(r) => factor = factor.mul(r),
                Err(Error::NumeratorPole { arg }) => {
                    return Err(Error::CoefficientPole { k, j: j + 1, arg })
                }
                Err(Error::DenominatorPole { .. }) => factor = SignedLog::ZERO,
                Err(e) => return Err(e),
            }
        }
        self.product.mul(factor);
        if self.product.is_zero() {
            self.prev_tail_pole = false;
            return Ok(zero);
        }

        let tail_arg = snap_pole(rho * kf + b_last);
        if self.prev_tail_pole {
            let g = signed_log_gamma(tail_arg);
            self.prev_tail_pole = g.is_pole();
            let mut c = self.product;
            c.mul(g.recip());
            return Ok(c);
        }
        let prev_tail_arg = snap_pole(rho * (kf - 1.0) + b_last);
        match gamma_ratio_with_gap(prev_tail_arg, tail_arg, -rho) {
            Ok(r) => {
                self.prev_tail_pole = false;
                let mut c = self.prev;
                c.mul(factor);
                c.mul(r);
                Ok(c)
            }
            Err(Error::DenominatorPole { .. }) => {
                self.prev_tail_pole = true;
                Ok(zero)
            }
            Err(e) => Err(e),
        }
    }
}

impl Iterator for Coefficients<'_> {
    type Item = Result<SignedLog>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.step() {
            Ok(c) => {
                self.prev = c;
                self.k += 1;
                Some(Ok(c.get()))
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Signed-log coefficients `c_0 ..= c_kmax` by the recurrence.
pub fn coefficient_logs(params: &OperatorParams, kmax: usize) -> Result<Vec<SignedLog>> {
    Coefficients::new(params).take(kmax + 1).collect()
}

/// Coefficients `c_0 ..= c_kmax` as real numbers (the parameters are real,
/// so the coefficients are too).
pub fn mpw_coefficients(params: &OperatorParams, kmax: usize) -> Result<Vec<f64>> {
    Ok(coefficient_logs(params, kmax)?
        .into_iter()
        .map(SignedLog::value)
        .collect())
}

/// `c_k` from the full double product, without the recurrence.
pub fn direct_coefficient(params: &OperatorParams, k: usize) -> Result<SignedLog> {
    let off = params.offsets();
    let rho = off.stride;
    let mut logs = Vec::with_capacity(k * off.a.len());
    let mut sign: i8 = 1;
    let mut zero = false;
    for i in 1..=k {
        let fi = i as f64;
        for (j, (&a, &b)) in off.a.iter().zip(&off.b).enumerate() {
            match gamma_ratio_with_gap(snap_pole(rho * fi + a), snap_pole(rho * fi + b), a - b) {
                Ok(r) => {
                    logs.push(r.log_abs);
                    sign *= r.sign;
                }
                Err(Error::NumeratorPole { arg }) => {
                    return Err(Error::CoefficientPole { k: i, j: j + 1, arg })
                }
                Err(Error::DenominatorPole { .. }) => zero = true,
                Err(e) => return Err(e),
            }
        }
    }
    let tail = signed_log_gamma(snap_pole(rho * k as f64 + off.b_last()));
    if zero || tail.is_pole() {
        return Ok(SignedLog::ZERO);
    }
    Ok(SignedLog {
        log_abs: sum_f64(logs) - tail.log_abs,
        sign: sign * tail.sign,
    })
}

/// Evaluate the truncated series at complex `z`.
pub fn mpw_eval(params: &OperatorParams, z: Complex64, opts: &EvalOptions) -> Result<EvalResult> {
    sum_power_series(defined_coefficients(params), z, opts)
}

/// Coefficient stream that ends cleanly at a numerator pole reached after
/// the sequence has already collapsed to zero, leaving a polynomial.
pub(crate) fn defined_coefficients(
    params: &OperatorParams,
) -> impl Iterator<Item = Result<SignedLog>> + '_ {
    let mut coeffs = Coefficients::new(params);
    std::iter::from_fn(move || match coeffs.next() {
        Some(Err(Error::CoefficientPole { .. })) if coeffs.collapsed() => None,
        other => other,
    })
}

/// Ratio-test diagnostics `r_k = |c_{k+1} / c_k|` for `k = 1 ..= kmax-1`.
///
/// A zero `c_k` followed by a nonzero `c_{k+1}` gives `inf`; two zeros give 0.
pub fn ratio_diagnostics(params: &OperatorParams, kmax: usize) -> Result<Vec<f64>> {
    if kmax < 2 {
        return Err(Error::InvalidArgument(format!(
            "ratio diagnostics need kmax >= 2, got {kmax}"
        )));
    }
    let logs = coefficient_logs(params, kmax)?;
    Ok(logs[1..]
        .windows(2)
        .map(|w| match (w[0].is_zero(), w[1].is_zero()) {
            (_, true) => 0.0,
            (true, false) => f64::INFINITY,
            (false, false) => (w[1].log_abs - w[0].log_abs).exp(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;
    use approx::assert_relative_eq;

    fn params(alpha: &[f64], nu: &[f64]) -> OperatorParams {
        OperatorParams::new(alpha.to_vec(), nu.to_vec()).unwrap()
    }

    fn factorial(k: usize) -> f64 {
        (1..=k).map(|i| i as f64).product()
    }

    #[test]
    fn laguerre_coefficients() {
        let p = params(&[1.0, 1.0], &[1.0]);
        let c = mpw_coefficients(&p, 20).unwrap();
        for (k, ck) in c.iter().enumerate() {
            let expected = 1.0 / factorial(k).powi(2);
            assert_relative_eq!(*ck, expected, max_relative = 1e-13);
        }
    }

    #[test]
    fn n_mittag_leffler_coefficients_telescope() {
        let p = params(&[0.5; 3], &[0.5; 2]);
        let c = mpw_coefficients(&p, 40).unwrap();
        for (k, ck) in c.iter().enumerate() {
            let expected = gamma(0.5 * k as f64 + 1.0).powi(-3);
            assert_relative_eq!(*ck, expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn leading_coefficient() {
        let p = params(&[0.3, 0.9, 0.4], &[0.8, 0.2]);
        let c0 = mpw_coefficients(&p, 0).unwrap()[0];
        assert_relative_eq!(c0, 1.0 / gamma(p.offsets().b_last()), max_relative = 1e-14);
    }

    #[test]
    fn half_stride_example() {
        // [Γ(0.5)/Γ(1.5)] [Γ(1)/Γ(2)] / Γ(2) = 2
        let p = params(&[1.0, 0.5], &[1.0]);
        let c = mpw_coefficients(&p, 2).unwrap();
        assert_relative_eq!(c[2], 2.0, max_relative = 1e-14);
    }

    #[test]
    fn eval_at_zero() {
        let p = params(&[0.7, 0.4], &[0.9]);
        let r = mpw_eval(&p, Complex64::new(0.0, 0.0), &EvalOptions::default()).unwrap();
        assert_eq!(r.terms_used, 1);
        assert_relative_eq!(r.value.re, 1.0 / gamma(1.0 - 0.7 + 0.9), max_relative = 1e-14);
        assert_eq!(r.value.im, 0.0);
        assert_eq!(r.tail_estimate, 0.0);
    }

    #[test]
    fn eval_tricomi_values() {
        let p = params(&[1.0, 1.0], &[1.0]);
        let opts = EvalOptions::default();
        // I0(2) and J0(2), mpmath
        let r = mpw_eval(&p, Complex64::new(1.0, 0.0), &opts).unwrap();
        assert_relative_eq!(r.value.re, 2.279_585_302_336_067_3, max_relative = 1e-15);
        assert!(r.tail_estimate <= 1e-15 * r.value.re);
        let r = mpw_eval(&p, Complex64::new(-1.0, 0.0), &opts).unwrap();
        assert_relative_eq!(r.value.re, 0.223_890_779_141_235_67, max_relative = 1e-14);
    }

    #[test]
    fn no_convergence_when_capped() {
        let p = params(&[1.0, 1.0], &[1.0]);
        let opts = EvalOptions { eps: 1e-15, kmax: 3 };
        let err = mpw_eval(&p, Complex64::new(10.0, 0.0), &opts).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { terms: 3, .. }));
    }

    #[test]
    fn numerator_pole_is_reported() {
        // a_2 = 1 - 1 + 0.3 - 1 = -0.7; ρ = 0.7 gives Γ(0) at k = 1
        let p = params(&[1.0, 1.0, 0.7], &[0.3, 0.5]);
        let err = mpw_coefficients(&p, 5).unwrap_err();
        assert!(matches!(err, Error::CoefficientPole { k: 1, j: 2, .. }), "{err:?}");
        assert!(mpw_eval(&p, Complex64::new(0.5, 0.0), &EvalOptions::default()).is_err());
    }

    #[test]
    fn trailing_denominator_pole_zeros_one_coefficient() {
        // b_2 = 1 - α1 + ν1 = -1 + ... choose α = (2.5, 1), ν = (0.5): b_2 = -1
        let p = params(&[2.5, 1.0], &[0.5]);
        assert!((p.offsets().b_last() + 1.0).abs() < 1e-15);
        let rec = coefficient_logs(&p, 6).unwrap();
        assert!(rec[0].is_zero()); // 1/Γ(-1)
        assert!(rec[1].is_zero()); // 1/Γ(0)
        for k in 0..=6 {
            let d = direct_coefficient(&p, k).unwrap();
            assert_eq!(rec[k].sign, d.sign, "k = {k}");
            if !d.is_zero() {
                assert_relative_eq!(rec[k].log_abs, d.log_abs, epsilon = 1e-13);
            }
        }
        assert!(!rec[2].is_zero());
    }

    #[test]
    fn laguerre_ratios() {
        let p = params(&[1.0, 1.0], &[1.0]);
        let r = ratio_diagnostics(&p, 30).unwrap();
        assert_eq!(r.len(), 29);
        for (i, rk) in r.iter().enumerate() {
            let k = (i + 1) as f64;
            assert_relative_eq!(*rk, 1.0 / ((k + 1.0) * (k + 1.0)), max_relative = 1e-12);
        }
    }

    #[test]
    fn ratio_slope_half_orders() {
        let p = params(&[0.5, 0.5], &[0.5]);
        let r = ratio_diagnostics(&p, 500).unwrap();
        let pts: Vec<(f64, f64)> = (100..=499)
            .map(|k| ((k as f64).ln(), r[k - 1].ln()))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        assert!((sxy / sxx + 1.0).abs() < 0.05, "slope {}", sxy / sxx);
        assert!(r[49] < r[0]);
    }

    #[test]
    fn options_validation() {
        assert!(EvalOptions { eps: 1.0, kmax: 10 }.validate().is_err());
        assert!(EvalOptions { eps: 1e-3, kmax: 0 }.validate().is_err());
        assert!(ratio_diagnostics(&params(&[1.0, 1.0], &[1.0]), 1).is_err());
    }
}
