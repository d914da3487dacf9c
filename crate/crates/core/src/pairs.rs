//! Parallel and triangle-equality-attaining (TEA) pair predicates.
//!
//! The `is_pair_*` functions use coordinate criteria: a common phase of the
//! products `conj(x_k) y_k` for l1, a shared peak coordinate for l-infinity,
//! and linear dependence for the strictly convex lp norms.
//! [`definitional_check`] instead evaluates `||x + mu y|| = ||x|| + ||y||`
//! over a finite candidate set of unimodular `mu` and serves as the
//! independent oracle for the criteria.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{norm, peak_set, NormSpec};
use crate::numeric::{is_nonneg_real_value, Field, Scalar, Tolerance, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    Parallel,
    Tea,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::Parallel => "parallel",
            PairKind::Tea => "tea",
        }
    }
}

impl std::str::FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "parallel" => Ok(PairKind::Parallel),
            "tea" => Ok(PairKind::Tea),
            other => Err(Error::InvalidNorm(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairVerdict {
    pub holds: bool,
    /// Unimodular `mu` with `||x + mu y|| = ||x|| + ||y||`, present iff `holds`.
    pub mu: Option<Scalar>,
    /// Common peak coordinate (zero-based) for the sup norm.
    pub peak: Option<usize>,
}

impl PairVerdict {
    fn fails() -> Self {
        PairVerdict { holds: false, mu: None, peak: None }
    }

    fn trivially(field: Field) -> Self {
        PairVerdict { holds: true, mu: Some(Scalar::one(field)), peak: None }
    }
}

fn compatible(x: &Vector, y: &Vector) -> Result<Field> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    if x.field() != y.field() {
        return Err(Error::FieldMismatch(x.field(), y.field()));
    }
    Ok(x.field())
}

fn products(x: &Vector, y: &Vector) -> Vec<Complex64> {
    x.entries().iter().zip(y.entries()).map(|(a, b)| a.conj() * b).collect()
}

/// Dispatches to the criterion for `spec`.
pub fn is_pair(x: &Vector, y: &Vector, spec: NormSpec, kind: PairKind, tol: &Tolerance) -> Result<PairVerdict> {
    match spec {
        NormSpec::L1 => is_pair_l1(x, y, kind, tol),
        NormSpec::Linf => is_pair_linf(x, y, kind, tol),
        NormSpec::Lp(_) => is_pair_lp_strict(x, y, kind, tol),
    }
}

/// l1 criterion: some unimodular `mu` (TEA: `mu = 1`) makes every
/// `mu * conj(x_k) * y_k` a nonnegative real.
///
/// Products are compared after division by `||x||_inf * ||y||_inf`, so a
/// product that is negligible at that scale is compatible with every ray.
pub fn is_pair_l1(x: &Vector, y: &Vector, kind: PairKind, tol: &Tolerance) -> Result<PairVerdict> {
    let field = compatible(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(PairVerdict::trivially(field));
    }
    let scale = x.max_modulus() * y.max_modulus();
    let prods = products(x, y);
    let mu = match kind {
        PairKind::Tea => Scalar::one(field),
        PairKind::Parallel => {
            // the largest product fixes the common ray most accurately
            let reference = prods.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).expect("nonempty");
            Scalar::phase_of(field, reference).conj()
        }
    };
    let holds = prods.iter().all(|&p| is_nonneg_real_value(mu.value() * p / scale, tol));
    Ok(if holds { PairVerdict { holds, mu: Some(mu), peak: None } } else { PairVerdict::fails() })
}

/// l-infinity criterion: the peak sets of `x` and `y` meet (TEA: at a
/// coordinate where `conj(x_k) * y_k` is a nonnegative real).
pub fn is_pair_linf(x: &Vector, y: &Vector, kind: PairKind, tol: &Tolerance) -> Result<PairVerdict> {
    let field = compatible(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(PairVerdict::trivially(field));
    }
    let px = peak_set(x, tol)?;
    let py = peak_set(y, tol)?;
    let scale = px.value * py.value;
    let mut common = px.indices.iter().copied().filter(|&k| py.contains(k));
    let verdict = match kind {
        PairKind::Parallel => common.next().map(|k| {
            let p = x.entries()[k].conj() * y.entries()[k];
            PairVerdict { holds: true, mu: Some(Scalar::phase_of(field, p).conj()), peak: Some(k) }
        }),
        PairKind::Tea => common
            .find(|&k| is_nonneg_real_value(x.entries()[k].conj() * y.entries()[k] / scale, tol))
            .map(|k| PairVerdict { holds: true, mu: Some(Scalar::one(field)), peak: Some(k) }),
    };
    Ok(verdict.unwrap_or_else(PairVerdict::fails))
}

/// Strictly convex criterion: `x` and `y` are linearly dependent (TEA: with a
/// nonnegative real ratio). Every 2x2 minor of the stacked pair must vanish
/// relative to `||x||_inf * ||y||_inf`.
pub fn is_pair_lp_strict(x: &Vector, y: &Vector, kind: PairKind, tol: &Tolerance) -> Result<PairVerdict> {
    let field = compatible(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(PairVerdict::trivially(field));
    }
    let scale = x.max_modulus() * y.max_modulus();
    let (xs, ys) = (x.entries(), y.entries());
    let n = xs.len();
    for i in 0..n {
        for j in i + 1..n {
            if (xs[i] * ys[j] - xs[j] * ys[i]).norm() > tol.eps_eq * scale {
                return Ok(PairVerdict::fails());
            }
        }
    }
    let pivot = (0..n).max_by(|&a, &b| xs[a].norm().total_cmp(&xs[b].norm())).expect("nonempty");
    let p = xs[pivot].conj() * ys[pivot];
    match kind {
        PairKind::Parallel => Ok(PairVerdict { holds: true, mu: Some(Scalar::phase_of(field, p).conj()), peak: None }),
        PairKind::Tea if is_nonneg_real_value(p / scale, tol) => {
            Ok(PairVerdict { holds: true, mu: Some(Scalar::one(field)), peak: None })
        }
        PairKind::Tea => Ok(PairVerdict::fails()),
    }
}

const GRID_POINTS: usize = 720;

/// Norm-definition oracle. TEA tests `||x + y|| = ||x|| + ||y||` directly;
/// Parallel tries a finite candidate set of unimodular `mu` that is complete
/// for l1 and l-infinity (any attaining `mu` must align some nonzero
/// coordinate product) and exactly `{+1, -1}` over the reals. Complex lp uses
/// a 720-point grid on the unit circle refined once around the best point.
///
/// Equality is relative: `| ||x + mu y|| - (||x|| + ||y||) | <= eps_eq * (||x|| + ||y||)`.
pub fn definitional_check(x: &Vector, y: &Vector, kind: PairKind, spec: NormSpec, tol: &Tolerance) -> Result<bool> {
    let field = compatible(x, y)?;
    let target = norm(x, spec) + norm(y, spec);
    let defect = |mu: Complex64| -> f64 {
        let s: Vector = x.add_scaled(Scalar::complex(mu.re, mu.im), y).expect("same dimension");
        target - norm(&s, spec)
    };
    let attains = |d: f64| d.abs() <= tol.eps_eq * target;
    let one = Complex64::new(1.0, 0.0);
    if kind == PairKind::Tea {
        return Ok(attains(defect(one)));
    }
    if attains(defect(one)) || attains(defect(-one)) {
        return Ok(true);
    }
    if field == Field::Real {
        return Ok(false);
    }
    match spec {
        NormSpec::L1 | NormSpec::Linf => {
            let found =
                products(x, y).into_iter().filter(|p| p.norm() > 0.0).any(|p| attains(defect(p.conj() / p.norm())));
            Ok(found)
        }
        NormSpec::Lp(_) => {
            let step = 2.0 * PI / GRID_POINTS as f64;
            let best = (0..GRID_POINTS)
                .map(|j| j as f64 * step)
                .min_by(|&a, &b| defect(Complex64::cis(a)).total_cmp(&defect(Complex64::cis(b))))
                .expect("grid is nonempty");
            let fine = 2.0 * step / GRID_POINTS as f64;
            let refined = (0..=GRID_POINTS)
                .map(|j| best - step + j as f64 * fine)
                .map(|theta| defect(Complex64::cis(theta)))
                .fold(f64::INFINITY, f64::min);
            Ok(attains(refined))
        }
    }
}
