//! Parameter vectors of the fractional hyper-Bessel operator and the offset
//! sequences derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fractional orders `alpha = (α₁, …, α_{n+1})` and power weights
/// `nu = (ν₁, …, ν_n)`.
///
/// The sentinels `α₀ = ν₀ = 0` are implicit. Construction validates the
/// lengths and positivity and caches the [`OffsetTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct OperatorParams {
    alpha: Vec<f64>,
    nu: Vec<f64>,
    offsets: OffsetTable,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawParams {
    alpha: Vec<f64>,
    nu: Vec<f64>,
}

impl TryFrom<RawParams> for OperatorParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        OperatorParams::new(raw.alpha, raw.nu)
    }
}

impl From<OperatorParams> for RawParams {
    fn from(p: OperatorParams) -> Self {
        RawParams {
            alpha: p.alpha,
            nu: p.nu,
        }
    }
}

/// Offsets entering the series coefficients.
///
/// `a[j-1] = a_j = 1 + Σ_{m=1}^{j} (ν_{m-1} - α_m)` for `j = 1..=n` and
/// `b[j-1] = b_j = 1 + Σ_{m=1}^{j} (ν_{m-1} - α_{m-1})` for `j = 1..=n+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetTable {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `α_{n+1}`, the exponent step of the series in `x`.
    pub stride: f64,
    /// `Σ_{s=1}^{n} (ν_s - α_s)`.
    pub drift: f64,
}

impl OffsetTable {
    /// `b_{n+1}`.
    pub fn b_last(&self) -> f64 {
        *self.b.last().expect("b has n+1 >= 2 entries")
    }
}

impl OperatorParams {
    pub fn new(alpha: Vec<f64>, nu: Vec<f64>) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::InvalidParams("nu must have at least one entry".into()));
        }
        if alpha.len() != nu.len() + 1 {
            return Err(Error::InvalidParams(format!(
                "alpha has {} entries, expected nu.len() + 1 = {}",
                alpha.len(),
                nu.len() + 1
            )));
        }
        if let Some((j, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !(a.is_finite() && **a > 0.0))
        {
            return Err(Error::InvalidParams(format!(
                "alpha_{} = {a} must be a positive finite real",
                j + 1
            )));
        }
        if let Some((j, v)) = nu
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidParams(format!(
                "nu_{} = {v} must be a positive finite real",
                j + 1
            )));
        }
        let offsets = derive_offsets(&alpha, &nu);
        Ok(OperatorParams { alpha, nu, offsets })
    }

    pub fn n(&self) -> usize {
        self.nu.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    pub fn offsets(&self) -> &OffsetTable {
        &self.offsets
    }

    pub fn stride(&self) -> f64 {
        self.offsets.stride
    }

    pub fn drift(&self) -> f64 {
        self.offsets.drift
    }

    /// `Σ_{j=1}^{n+1} α_j`, the decay exponent of the coefficient ratios.
    pub fn alpha_sum(&self) -> f64 {
        self.alpha.iter().sum()
    }
}

fn derive_offsets(alpha: &[f64], nu: &[f64]) -> OffsetTable {
    let n = nu.len();
    // with the sentinels: ν_{m-1} for m = 1 is 0, α_0 = 0
    let nu_prev = |m: usize| if m == 1 { 0.0 } else { nu[m - 2] };
    let alpha_prev = |m: usize| if m == 1 { 0.0 } else { alpha[m - 2] };

    let mut a = Vec::with_capacity(n);
    let mut sum_a = 0.0;
    for m in 1..=n {
        sum_a += nu_prev(m) - alpha[m - 1];
        a.push(1.0 + sum_a);
    }

    let mut b = Vec::with_capacity(n + 1);
    let mut sum_b = 0.0;
    for m in 1..=n + 1 {
        sum_b += nu_prev(m) - alpha_prev(m);
        b.push(1.0 + sum_b);
    }

    let drift = nu.iter().zip(alpha).map(|(v, a)| v - a).sum();

    OffsetTable {
        a,
        b,
        stride: alpha[n],
        drift,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_offsets() {
        let (al, be, nu) = (0.3, 0.8, 0.45);
        let p = OperatorParams::new(vec![al, be], vec![nu]).unwrap();
        let o = p.offsets();
        assert_eq!(o.a, vec![1.0 - al]);
        assert_eq!(o.b[0], 1.0);
        assert!((o.b[1] - (1.0 - al + nu)).abs() < 1e-15);
        assert_eq!(o.stride, be);
    }

    #[test]
    fn n2_half_orders() {
        let p = OperatorParams::new(vec![0.5; 3], vec![0.5; 2]).unwrap();
        let o = p.offsets();
        assert_eq!(o.a, vec![0.5, 0.5]);
        assert_eq!(o.b, vec![1.0, 1.0, 1.0]);
        assert_eq!(o.drift, 0.0);
    }

    #[test]
    fn laguerre_parameterisation() {
        let p = OperatorParams::new(vec![1.0, 1.0], vec![1.0]).unwrap();
        let o = p.offsets();
        assert_eq!(o.a, vec![0.0]);
        assert_eq!(o.b, vec![1.0, 1.0]);
        assert_eq!(o.drift, 0.0);
    }

    #[test]
    fn zero_drift_iff_unit_last_b() {
        let p = OperatorParams::new(vec![0.3, 0.6, 0.5], vec![0.4, 0.5]).unwrap();
        assert!(p.drift().abs() < 1e-15);
        assert!((p.offsets().b_last() - 1.0).abs() < 1e-15);
        let q = OperatorParams::new(vec![0.5, 0.6], vec![0.4]).unwrap();
        assert!((q.drift() + 0.1).abs() < 1e-15);
        assert!((q.offsets().b_last() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid() {
        assert!(matches!(
            OperatorParams::new(vec![0.5, 0.5], vec![0.5, 0.5]),
            Err(Error::InvalidParams(_))
        ));
        assert!(OperatorParams::new(vec![0.5, 0.0], vec![0.5]).is_err());
        assert!(OperatorParams::new(vec![0.5, 0.5], vec![-0.1]).is_err());
        assert!(OperatorParams::new(vec![0.5, f64::NAN], vec![0.1]).is_err());
        assert!(OperatorParams::new(vec![0.5], vec![]).is_err());
    }

    #[test]
    fn json_round_trip_validates() {
        let p: OperatorParams = serde_json::from_str(r#"{"alpha":[1,0.5],"nu":[1]}"#).unwrap();
        assert_eq!(p.alpha(), &[1.0, 0.5]);
        assert_eq!(p.offsets().b, vec![1.0, 1.0]);
        let bad: std::result::Result<OperatorParams, _> =
            serde_json::from_str(r#"{"alpha":[1,0.5,2],"nu":[1]}"#);
        assert!(bad.is_err());
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"alpha":[1.0,0.5],"nu":[1.0]}"#);
    }
}
