//! Real-argument Gamma function in log space.
//!
//! Every value is carried as `(log|Γ(x)|, sign)`. Poles of Γ at the
//! nonpositive integers are reported in-band with `sign == 0`, so callers
//! can apply the `1/Γ(pole) = 0` convention without branching on errors.
//!
//! For `x >= 15` the Stirling series is used directly; smaller positive
//! arguments are shifted up with the recurrence `Γ(x) = Γ(x+m) / (x)_m`,
//! and negative arguments go through the reflection formula.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Arguments at or above this use the asymptotic series without shifting.
const STIRLING_MIN: f64 = 15.0;
/// Largest argument for which Γ itself is finite in f64.
const LINEAR_MAX: f64 = 171.5;

/// Exact factorials `FACTORIAL[n] = n!` for the integer fast path.
const FACTORIAL: [f64; 21] = [
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
];

/// A real number stored as `sign * exp(log_abs)`; `sign == 0` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub log_abs: f64,
    pub sign: i8,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: SignedLog = SignedLog {
        log_abs: 0.0,
        sign: 1,
    };

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                log_abs: v.abs().ln(),
                sign: if v > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn value(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }

    pub fn mul(self, other: SignedLog) -> SignedLog {
        if self.sign == 0 || other.sign == 0 {
            return Self::ZERO;
        }
        SignedLog {
            log_abs: self.log_abs + other.log_abs,
            sign: self.sign * other.sign,
        }
    }

    /// `self / other`. Dividing by zero is a caller bug.
    pub fn div(self, other: SignedLog) -> SignedLog {
        debug_assert!(other.sign != 0, "division by a zero SignedLog");
        if self.sign == 0 {
            return Self::ZERO;
        }
        SignedLog {
            log_abs: self.log_abs - other.log_abs,
            sign: self.sign * other.sign,
        }
    }
}

/// `(log|Γ(x)|, sign)`; `sign == 0` marks a pole and leaves `log_abs` unused.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogGamma {
    pub log_abs: f64,
    pub sign: i8,
}

impl SignedLogGamma {
    pub const POLE: SignedLogGamma = SignedLogGamma {
        log_abs: f64::INFINITY,
        sign: 0,
    };

    pub fn is_pole(self) -> bool {
        self.sign == 0
    }

    /// Γ(x) reconstructed in linear space; NaN at a pole.
    pub fn value(self) -> f64 {
        if self.sign == 0 {
            f64::NAN
        } else {
            f64::from(self.sign) * self.log_abs.exp()
        }
    }

    /// `1/Γ(x)` as a signed log, exactly zero at a pole.
    pub fn recip(self) -> SignedLog {
        if self.sign == 0 {
            SignedLog::ZERO
        } else {
            SignedLog {
                log_abs: -self.log_abs,
                sign: self.sign,
            }
        }
    }

    pub fn as_signed_log(self) -> Option<SignedLog> {
        (!self.is_pole()).then_some(SignedLog {
            log_abs: self.log_abs,
            sign: self.sign,
        })
    }
}

/// True when `x` is one of 0, -1, -2, ...
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// `sin(πx)` with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        (PI * (-1.0 - r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// Tail of the Stirling series, `ln Γ(y) - [(y - 1/2) ln y - y + ln √(2π)]`, for y >= 15.
fn stirling_correction(y: f64) -> f64 {
    let r = 1.0 / y;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0))))))
}

/// Γ(y) for 15 <= y <= 171.5, in linear space with the power split in two
/// halves so the intermediate never overflows.
fn stirling_gamma(y: f64) -> f64 {
    let half = 0.5 * (y - 0.5);
    let p = y.powf(half);
    SQRT_2PI * (p * (-y).exp()) * p * stirling_correction(y).exp()
}

/// log Γ(x) for x > 0.
fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= STIRLING_MIN {
        if x <= LINEAR_MAX {
            stirling_gamma(x).ln()
        } else {
            (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x)
        }
    } else if x == x.floor() && x <= 21.0 {
        FACTORIAL[x as usize - 1].ln()
    } else {
        let m = (STIRLING_MIN - x).ceil() as u32;
        let pochhammer: f64 = (0..m).map(|i| x + f64::from(i)).product();
        stirling_gamma(x + f64::from(m)).ln() - pochhammer.ln()
    }
}

/// Signed logarithm of Γ(x) for finite real `x`.
///
/// At the nonpositive integers the result has `sign == 0`.
pub fn signed_log_gamma(x: f64) -> SignedLogGamma {
    if x.is_nan() || is_gamma_pole(x) {
        return SignedLogGamma::POLE;
    }
    if x > 0.0 {
        return SignedLogGamma {
            log_abs: ln_gamma_positive(x),
            sign: 1,
        };
    }
    // Γ(x) Γ(1-x) = π / sin(πx), with Γ(1-x) > 0 here.
    let s = sin_pi(x);
    SignedLogGamma {
        log_abs: LN_PI - s.abs().ln() - ln_gamma_positive(1.0 - x),
        sign: if s > 0.0 { 1 } else { -1 },
    }
}

/// Γ(x) in linear space; NaN at poles, overflows to infinity past 171.6.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 && x == x.floor() && x <= 21.0 {
        return FACTORIAL[x as usize - 1];
    }
    signed_log_gamma(x).value()
}

/// `1/Γ(x)`, exactly zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if x > 0.0 && x == x.floor() && x <= 21.0 {
        return 1.0 / FACTORIAL[x as usize - 1];
    }
    signed_log_gamma(x).recip().value()
}

/// Signed log of `Γ(num) / Γ(den)`.
///
/// Both arguments are shifted up by a common integer until the smaller
/// reaches the asymptotic range, then the difference of Stirling series is
/// taken in a cancellation-free form. The shift contributes the rational
/// factor `Π (den+i)/(num+i)`.
pub fn gamma_ratio(num: f64, den: f64) -> Result<SignedLog> {
    gamma_ratio_with_gap(num, den, num - den)
}

/// [`gamma_ratio`] with the gap `num - den` supplied by the caller.
///
/// The ratio is evaluated as `Γ(den + gap) / Γ(den)`. When `num` and `den`
/// are both computed as `x + a` and `x + b` for large `x`, passing
/// `gap = a - b` makes the result insensitive to the rounding of `x + b`,
/// which would otherwise enter through `ψ(num)`.
pub fn gamma_ratio_with_gap(num: f64, den: f64, gap: f64) -> Result<SignedLog> {
    if is_gamma_pole(num) {
        return Err(Error::NumeratorPole { arg: num });
    }
    if is_gamma_pole(den) {
        return Err(Error::DenominatorPole { arg: den });
    }
    if !num.is_finite() || !den.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "gamma_ratio({num}, {den}) needs finite arguments"
        )));
    }
    let d = gap;
    if d == 0.0 {
        return Ok(SignedLog::ONE);
    }

    let lo = den.min(den + d);
    let shift = if lo < STIRLING_MIN {
        (STIRLING_MIN - lo).ceil()
    } else {
        0.0
    };

    // Π (den+i)/(num+i), renormalised into `log_abs` before it leaves range.
    let mut log_abs = 0.0;
    let mut prod = 1.0_f64;
    let mut i = 0.0;
    while i < shift {
        prod *= (den + i) / (den + d + i);
        let mag = prod.abs();
        if !(1e-280..=1e280).contains(&mag) {
            log_abs += mag.ln();
            prod = prod.signum();
        }
        i += 1.0;
    }
    log_abs += prod.abs().ln();
    let sign: i8 = if prod < 0.0 { -1 } else { 1 };

    let y2 = den + shift;
    let y1 = y2 + d;
    // (y1 - 1/2) ln y1 - (y2 - 1/2) ln y2 - (y1 - y2)
    let main = (y2 - 0.5) * (d / y2).ln_1p() + d * y1.ln() - d;
    log_abs += main + (stirling_correction(y1) - stirling_correction(y2));

    Ok(SignedLog { log_abs, sign })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_values() {
        let g1 = signed_log_gamma(1.0);
        assert_eq!(g1.sign, 1);
        assert_eq!(g1.log_abs, 0.0);
        assert_relative_eq!(gamma(0.5), 1.772_453_850_905_516, max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -3.544_907_701_811_032, max_relative = 1e-14);
        assert!(signed_log_gamma(-2.0).is_pole());
        assert!(signed_log_gamma(0.0).is_pole());
    }

    #[test]
    fn reciprocal() {
        assert_eq!(recip_gamma(2.0), 1.0);
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-7.0), 0.0);
        assert_relative_eq!(recip_gamma(5.0), 1.0 / 24.0, max_relative = 1e-15);
    }

    #[test]
    fn sign_pattern_for_negative_arguments() {
        // (-1)^ceil(-x)
        for &x in &[-0.5_f64, -1.5, -2.5, -3.25, -10.75, -31.1] {
            let expected = if ((-x).ceil() as i64) % 2 == 0 { 1 } else { -1 };
            assert_eq!(signed_log_gamma(x).sign, expected, "x = {x}");
        }
    }

    #[test]
    fn ratio_examples() {
        let r = gamma_ratio(3.0, 2.0).unwrap();
        assert_eq!(r.sign, 1);
        assert_relative_eq!(r.value(), 2.0, max_relative = 1e-15);

        let r = gamma_ratio(0.5, 1.5).unwrap();
        assert_relative_eq!(r.value(), 2.0, max_relative = 1e-15);

        // mpmath: Γ(100.5)/Γ(100) = 9.98750786126251821...
        let r = gamma_ratio(100.5, 100.0).unwrap();
        assert_relative_eq!(r.value(), 9.987_507_861_262_518, max_relative = 1e-14);
        assert!((r.value() / 10.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn ratio_poles() {
        assert_eq!(
            gamma_ratio(-1.0, 2.0),
            Err(Error::NumeratorPole { arg: -1.0 })
        );
        assert_eq!(
            gamma_ratio(2.0, 0.0),
            Err(Error::DenominatorPole { arg: 0.0 })
        );
    }

    #[test]
    fn ratio_with_negative_arguments() {
        // Γ(-0.5)/Γ(0.5) = -2
        let r = gamma_ratio(-0.5, 0.5).unwrap();
        assert_eq!(r.sign, -1);
        assert_relative_eq!(r.value(), -2.0, max_relative = 1e-14);
        let direct = gamma(-3.7) / gamma(2.2);
        assert_relative_eq!(gamma_ratio(-3.7, 2.2).unwrap().value(), direct, max_relative = 1e-13);
    }

    #[test]
    fn ratio_matches_quotient_of_gammas() {
        for &(a, b) in &[(1.3, 7.9), (20.5, 3.25), (150.0, 140.5), (0.01, 0.02), (42.0, 42.5)] {
            let direct = gamma(a) / gamma(b);
            assert_relative_eq!(gamma_ratio(a, b).unwrap().value(), direct, max_relative = 1e-13);
        }
    }
}
