//! Compensated summation for complex series.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation, applied to the real and
/// imaginary parts independently.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: Neumaier,
    im: Neumaier,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        self.re.add(x.re);
        self.im.add(x.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl Extend<Complex64> for CompensatedSum {
    fn extend<T: IntoIterator<Item = Complex64>>(&mut self, iter: T) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<T: IntoIterator<Item = Complex64>>(iter: T) -> Self {
        let mut s = CompensatedSum::new();
        s.extend(iter);
        s
    }
}

/// Compensated sum of real values.
pub fn sum_f64<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Neumaier::default();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_addends() {
        let mut s = CompensatedSum::new();
        s.add(Complex64::new(1.0, -1.0));
        for _ in 0..10_000 {
            s.add(Complex64::new(1e-16, 1e-16));
        }
        s.add(Complex64::new(-1.0, 1.0));
        let v = s.value();
        assert!((v.re - 1e-12).abs() < 1e-24);
        assert!((v.im - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn neumaier_handles_large_addend() {
        assert_eq!(sum_f64([1.0, 1e100, 1.0, -1e100]), 2.0);
    }
}
