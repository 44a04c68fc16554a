//! Generalized power series `Σ_k c_k x^(ρk + σ)` with complex coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

const LAYOUT_TOL: f64 = 1e-12;

/// Truncated series whose stored coefficient `coeffs[i]` multiplies
/// `x^(stride·k + offset)` with `k = first + i`.
///
/// Keeping `first` explicit lets operators drop annihilated leading terms
/// without disturbing the exponent of the remaining ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenPowerSeries {
    stride: f64,
    offset: f64,
    first: usize,
    coeffs: Vec<Complex64>,
}

impl GenPowerSeries {
    pub fn new(stride: f64, offset: f64, coeffs: Vec<Complex64>) -> Result<Self> {
        Self::with_first(stride, offset, 0, coeffs)
    }

    pub fn with_first(stride: f64, offset: f64, first: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if !(stride.is_finite() && stride > 0.0) {
            return Err(Error::InvalidArgument(format!("stride = {stride} must be positive")));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidArgument(format!("offset = {offset} must be finite")));
        }
        Ok(GenPowerSeries {
            stride,
            offset,
            first,
            coeffs,
        })
    }

    /// Single term `c · x^p`.
    pub fn monomial(c: Complex64, p: f64) -> Result<Self> {
        Self::new(1.0, p, vec![c])
    }

    pub fn stride(&self) -> f64 {
        self.stride
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn exponent(&self, k: usize) -> f64 {
        self.stride * k as f64 + self.offset
    }

    /// `(k, exponent, coefficient)` for every stored term.
    pub fn terms(&self) -> impl Iterator<Item = (usize, f64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, &c)| {
            let k = self.first + i;
            (k, self.exponent(k), c)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// Same series with `first = 0`, absorbing the index shift into the
    /// offset.
    pub fn rebased(&self) -> Self {
        GenPowerSeries {
            stride: self.stride,
            offset: self.exponent(self.first),
            first: 0,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Drop leading zero coefficients.
    pub fn trimmed(mut self) -> Self {
        let lead = self
            .coeffs
            .iter()
            .take_while(|c| c.re == 0.0 && c.im == 0.0)
            .count();
        self.coeffs.drain(..lead);
        self.first += lead;
        self
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        GenPowerSeries {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn map_coeffs(self, coeffs: Vec<Complex64>, offset: f64) -> Self {
        debug_assert_eq!(coeffs.len(), self.coeffs.len());
        GenPowerSeries {
            offset,
            coeffs,
            ..self
        }
    }

    pub(crate) fn drop_leading(mut self, count: usize) -> Self {
        let count = count.min(self.coeffs.len());
        self.coeffs.drain(..count);
        self.first += count;
        self
    }

    /// Termwise sum. Both series must live on the same exponent lattice.
    pub fn add(&self, other: &GenPowerSeries) -> Result<Self> {
        if (self.stride - other.stride).abs() > LAYOUT_TOL * self.stride.max(other.stride) {
            return Err(Error::LayoutMismatch(format!(
                "strides {} and {} differ",
                self.stride, other.stride
            )));
        }
        let a = self.rebased();
        let b = other.rebased();
        let (lo, hi) = if a.offset <= b.offset { (a, b) } else { (b, a) };
        let gap = (hi.offset - lo.offset) / lo.stride;
        let shift = gap.round();
        if (gap - shift).abs() > LAYOUT_TOL * gap.abs().max(1.0) {
            return Err(Error::LayoutMismatch(format!(
                "offsets {} and {} are not on a common lattice of stride {}",
                lo.offset, hi.offset, lo.stride
            )));
        }
        let shift = shift as usize;
        let mut coeffs = lo.coeffs.clone();
        let need = shift + hi.coeffs.len();
        if coeffs.len() < need {
            coeffs.resize(need, Complex64::new(0.0, 0.0));
        }
        for (i, c) in hi.coeffs.iter().enumerate() {
            coeffs[shift + i] += c;
        }
        Ok(GenPowerSeries {
            stride: lo.stride,
            offset: lo.offset,
            first: 0,
            coeffs,
        })
    }

    /// Value at `x > 0` by compensated summation.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let mut acc = CompensatedSum::new();
        for (_, p, c) in self.terms() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            acc.add(c * x.powf(p));
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn exponents_and_rebase() {
        let s = GenPowerSeries::with_first(0.5, -0.5, 1, vec![c(1.0), c(2.0)]).unwrap();
        let e: Vec<f64> = s.terms().map(|t| t.1).collect();
        assert_eq!(e, vec![0.0, 0.5]);
        let r = s.rebased();
        assert_eq!(r.first(), 0);
        assert_eq!(r.offset(), 0.0);
        assert_eq!(r.evaluate(4.0), s.evaluate(4.0));
    }

    #[test]
    fn add_aligns_lattice() {
        let a = GenPowerSeries::new(1.0, 0.0, vec![c(1.0), c(1.0)]).unwrap();
        let b = GenPowerSeries::new(1.0, 1.0, vec![c(2.0), c(3.0)]).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.coeffs(), &[c(1.0), c(3.0), c(3.0)]);
        let bad = GenPowerSeries::new(1.0, 0.5, vec![c(1.0)]).unwrap();
        assert!(matches!(a.add(&bad), Err(Error::LayoutMismatch(_))));
        let bad = GenPowerSeries::new(0.5, 0.0, vec![c(1.0)]).unwrap();
        assert!(a.add(&bad).is_err());
    }

    #[test]
    fn trim_and_zero() {
        let s = GenPowerSeries::new(1.0, 0.0, vec![c(0.0), c(0.0), c(5.0)]).unwrap().trimmed();
        assert_eq!(s.first(), 2);
        assert_eq!(s.len(), 1);
        assert!(!s.is_zero());
        assert!(GenPowerSeries::new(1.0, 0.0, vec![]).unwrap().is_zero());
        assert!(GenPowerSeries::new(0.0, 0.0, vec![]).is_err());
    }
}
