//! Parsing of the flag values that clap leaves as strings.

use std::fs;

use mpwright::params::OperatorParams;
use num_complex::Complex64;
use serde::Deserialize;

pub fn floats(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(float).collect()
}

fn float(s: &str) -> Result<f64, String> {
    let t = s.trim();
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("'{t}' is not a finite number"))
}

/// `re[,im]`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    match floats(s)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err(format!("'{s}' is not of the form re[,im]")),
    }
}

/// `start:stop:count[:log]`.
pub fn grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let log = match parts.len() {
        3 => false,
        4 if parts[3].trim() == "log" => true,
        _ => return Err(format!("grid '{s}' is not of the form start:stop:count[:log]")),
    };
    let start = float(parts[0])?;
    let stop = float(parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("grid count '{}' is not a nonnegative integer", parts[2].trim()))?;
    if count == 0 {
        return Err("grid count must be at least 1".into());
    }
    if !log {
        return Ok(mpwright::harness::linspace(start, stop, count));
    }
    if !(start > 0.0 && stop > 0.0) {
        return Err(format!("log grid needs positive endpoints, got {start}:{stop}"));
    }
    Ok(mpwright::harness::linspace(start.ln(), stop.ln(), count)
        .into_iter()
        .map(f64::exp)
        .collect())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PointEntry {
    Real(f64),
    Pair([f64; 2]),
    Object { re: f64, #[serde(default)] im: f64 },
}

/// A JSON array of complex points, each a number, `[re, im]` or
/// `{"re": .., "im": ..}`.
pub fn points_file(path: &str) -> Result<Vec<Complex64>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let entries: Vec<PointEntry> =
        serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    if entries.is_empty() {
        return Err(format!("{path}: point list is empty"));
    }
    Ok(entries
        .into_iter()
        .map(|p| match p {
            PointEntry::Real(re) => Complex64::new(re, 0.0),
            PointEntry::Pair([re, im]) => Complex64::new(re, im),
            PointEntry::Object { re, im } => Complex64::new(re, im),
        })
        .collect())
}

/// Parameters from `--params` (inline JSON or a file) or from `--alpha` and
/// `--nu`.
pub fn params(
    alpha: Option<&str>,
    nu: Option<&str>,
    source: Option<&str>,
) -> Result<OperatorParams, String> {
    if let Some(src) = source {
        if alpha.is_some() || nu.is_some() {
            return Err("--params cannot be combined with --alpha/--nu".into());
        }
        let text = if src.trim_start().starts_with('{') {
            src.to_string()
        } else {
            fs::read_to_string(src).map_err(|e| format!("cannot read {src}: {e}"))?
        };
        return serde_json::from_str(&text).map_err(|e| format!("parameters: {e}"));
    }
    let alpha = floats(alpha.ok_or("missing --alpha (or --params)")?)?;
    let nu = floats(nu.unwrap_or(""))?;
    OperatorParams::new(alpha, nu).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid("2:5:1").unwrap(), vec![2.0]);
        let g = grid("1:100:3:log").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-13);
        assert!(grid("0:1:0").is_err());
        assert!(grid("0:1").is_err());
        assert!(grid("0:1:3:lin").is_err());
        assert!(grid("0:1:3:log").is_err());
    }

    #[test]
    fn complex_values() {
        assert_eq!(complex("-1.5").unwrap(), Complex64::new(-1.5, 0.0));
        assert_eq!(complex("1, -2").unwrap(), Complex64::new(1.0, -2.0));
        assert!(complex("1,2,3").is_err());
        assert!(complex("nan").is_err());
    }

    #[test]
    fn inline_params() {
        let p = params(None, None, Some(r#"{"alpha": [0.5, 0.5], "nu": [0.5]}"#)).unwrap();
        assert_eq!(p.alpha(), &[0.5, 0.5]);
        assert!(params(Some("1"), None, Some("{}")).is_err());
        assert!(params(Some("1,1"), Some("1,1"), None).is_err());
        assert!(params(Some("0.5"), None, None).is_err());
        assert_eq!(params(Some("1,1"), Some("1"), None).unwrap().n(), 1);
    }
}
