//! The three lp norm families and the coordinates where the sup norm peaks.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::{Tolerance, Vector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    L1,
    Linf,
    /// Strictly convex case, `1 < p < inf`.
    Lp(f64),
}

impl NormSpec {
    pub fn lp(p: f64) -> Result<Self> {
        if p > 1.0 && p.is_finite() {
            Ok(NormSpec::Lp(p))
        } else {
            Err(Error::InvalidNorm(format!("lp requires 1 < p < inf, got {p}")))
        }
    }

    pub fn is_strictly_convex(&self) -> bool {
        matches!(self, NormSpec::Lp(_))
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::L1 => f.write_str("l1"),
            NormSpec::Linf => f.write_str("linf"),
            NormSpec::Lp(p) => write!(f, "lp:{p}"),
        }
    }
}

/// Parses `l1`, `linf` or `lp:<p>`. The boundary exponents must be spelled
/// `l1`/`linf`; `lp:1` and `lp:inf` are rejected.
impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Ok(NormSpec::L1),
            "linf" => Ok(NormSpec::Linf),
            other => match other.strip_prefix("lp:") {
                Some(p) => {
                    let p: f64 =
                        p.parse().map_err(|_| Error::InvalidNorm(format!("cannot parse exponent in {s:?}")))?;
                    NormSpec::lp(p)
                }
                None => Err(Error::InvalidNorm(format!("unknown norm {s:?}"))),
            },
        }
    }
}

pub fn norm(x: &Vector, spec: NormSpec) -> f64 {
    let moduli = x.entries().iter().map(|z| z.norm());
    match spec {
        NormSpec::L1 => moduli.sum(),
        NormSpec::Linf => moduli.fold(0.0, f64::max),
        NormSpec::Lp(p) => {
            // scale by the max modulus so large entries do not overflow
            let m = x.max_modulus();
            if m == 0.0 {
                return 0.0;
            }
            let s: f64 = moduli.map(|a| (a / m).powf(p)).sum();
            m * s.powf(1.0 / p)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeakSet {
    /// Ascending, zero-based.
    pub indices: Vec<usize>,
    /// The sup norm.
    pub value: f64,
}

impl PeakSet {
    pub fn contains(&self, k: usize) -> bool {
        self.indices.binary_search(&k).is_ok()
    }
}

/// All coordinates whose modulus is within relative `eps_peak` of the max.
pub fn peak_set(x: &Vector, tol: &Tolerance) -> Result<PeakSet> {
    let value = x.max_modulus();
    if value == 0.0 {
        return Err(Error::ZeroVector);
    }
    let cutoff = value * (1.0 - tol.eps_peak);
    let indices = x.entries().iter().enumerate().filter(|(_, z)| z.norm() >= cutoff).map(|(k, _)| k).collect();
    Ok(PeakSet { indices, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn norm_examples() {
        let x = Vector::real(&[2.0, -1.0, 0.0]).unwrap();
        assert_eq!(norm(&x, NormSpec::L1), 3.0);
        assert_eq!(norm(&x, NormSpec::Linf), 2.0);
        let y = Vector::real(&[3.0, 4.0]).unwrap();
        assert_relative_eq!(norm(&y, NormSpec::Lp(2.0)), 5.0, max_relative = 1e-15);
    }

    #[test]
    fn complex_moduli() {
        let x = Vector::complex(&[(3.0, 4.0), (0.0, -1.0)]).unwrap();
        assert_eq!(norm(&x, NormSpec::L1), 6.0);
        assert_eq!(norm(&x, NormSpec::Linf), 5.0);
        assert_relative_eq!(norm(&x, NormSpec::Lp(2.0)), 26f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn lp_survives_large_entries() {
        let x = Vector::real(&[1e200, 1e200]).unwrap();
        assert_relative_eq!(norm(&x, NormSpec::Lp(3.0)), 1e200 * 2f64.powf(1.0 / 3.0), max_relative = 1e-14);
    }

    #[test]
    fn peak_set_examples() {
        let tol = Tolerance::default();
        assert_eq!(peak_set(&Vector::real(&[1.0, 0.5]).unwrap(), &tol).unwrap().indices, vec![0]);
        assert_eq!(peak_set(&Vector::real(&[1.0, -1.0, 0.3]).unwrap(), &tol).unwrap().indices, vec![0, 1]);
        assert_eq!(peak_set(&Vector::real(&[1.0, 1.0 - 1e-12]).unwrap(), &tol).unwrap().indices, vec![0, 1]);
        assert_eq!(peak_set(&Vector::real(&[0.0, 0.0]).unwrap(), &tol), Err(Error::ZeroVector));
    }

    #[test]
    fn parse_norms() {
        assert_eq!("l1".parse::<NormSpec>().unwrap(), NormSpec::L1);
        assert_eq!("LINF".parse::<NormSpec>().unwrap(), NormSpec::Linf);
        assert_eq!("lp:2.5".parse::<NormSpec>().unwrap(), NormSpec::Lp(2.5));
        assert!("lp:1".parse::<NormSpec>().is_err());
        assert!("lp:0.5".parse::<NormSpec>().is_err());
        assert!("lp:inf".parse::<NormSpec>().is_err());
        assert!("l2".parse::<NormSpec>().is_err());
    }
}
