//! Field-tagged scalars, dense vectors and square matrices, and the tolerance
//! policy shared by every decision procedure in the crate.
//!
//! Entries are stored as [`Complex64`] regardless of field. A value tagged
//! [`Field::Real`] always has an imaginary part of exactly zero; constructors
//! reject anything else instead of rounding it away.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_entry(field: Field, z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite);
    }
    if field == Field::Real && z.im != 0.0 {
        return Err(Error::NotReal(z.im));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar {
    value: Complex64,
    field: Field,
}

impl Scalar {
    pub fn new(field: Field, value: Complex64) -> Result<Self> {
        check_entry(field, value)?;
        Ok(Scalar { value, field })
    }

    pub fn real(x: f64) -> Self {
        Scalar { value: Complex64::new(x, 0.0), field: Field::Real }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar { value: Complex64::new(re, im), field: Field::Complex }
    }

    pub fn one(field: Field) -> Self {
        Scalar { value: Complex64::new(1.0, 0.0), field }
    }

    /// Unit-modulus scalar `z/|z|`, or one when `z` is zero. Real inputs give
    /// exactly `+1` or `-1`.
    pub fn phase_of(field: Field, z: Complex64) -> Self {
        let r = z.norm();
        let value = if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else if field == Field::Real {
            Complex64::new(z.re.signum(), 0.0)
        } else {
            z / r
        };
        Scalar { value, field }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    pub fn conj(&self) -> Self {
        Scalar { value: self.value.conj(), field: self.field }
    }
}

/// Relative tolerances used by every comparison in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Scalar and norm equality.
    pub eps_eq: f64,
    /// Peak-set membership, relative to the max modulus.
    pub eps_peak: f64,
    /// Pivot acceptance in rank decisions, relative to the largest entry.
    pub eps_rank: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps_eq: f64, eps_peak: f64, eps_rank: f64) -> Result<Self> {
        for (name, value) in [("eps_eq", eps_eq), ("eps_peak", eps_peak), ("eps_rank", eps_rank)] {
            if !(value > 0.0 && value < 1e-3) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(Tolerance { eps_eq, eps_peak, eps_rank })
    }

    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps, eps)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_eq: Self::DEFAULT_EPS, eps_peak: Self::DEFAULT_EPS, eps_rank: Self::DEFAULT_EPS }
    }
}

/// `|a - b| <= eps_eq * max(1, |a|, |b|)`.
pub fn approx_eq(a: Scalar, b: Scalar, tol: &Tolerance) -> Result<bool> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let scale = 1f64.max(a.abs()).max(b.abs());
    Ok((a.value - b.value).norm() <= tol.eps_eq * scale)
}

/// Membership in the closed ray `[0, inf)` up to tolerance.
pub fn is_nonneg_real(a: Scalar, tol: &Tolerance) -> bool {
    is_nonneg_real_value(a.value, tol)
}

pub(crate) fn is_nonneg_real_value(z: Complex64, tol: &Tolerance) -> bool {
    let slack = tol.eps_eq * 1f64.max(z.norm());
    z.im.abs() <= slack && z.re >= -slack
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    field: Field,
    entries: Vec<Complex64>,
}

impl Vector {
    pub fn new(field: Field, entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        for &z in &entries {
            check_entry(field, z)?;
        }
        Ok(Vector { field, entries })
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(Field::Real, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn complex(values: &[(f64, f64)]) -> Result<Self> {
        Self::new(Field::Complex, values.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
    }

    pub fn zeros(field: Field, dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Vector { field, entries: vec![Complex64::new(0.0, 0.0); dim] }
    }

    pub fn basis(field: Field, dim: usize, j: usize) -> Self {
        let mut v = Self::zeros(field, dim);
        v.entries[j] = Complex64::new(1.0, 0.0);
        v
    }

    // Internal constructor for values produced by arithmetic on valid inputs.
    pub(crate) fn from_parts(field: Field, entries: Vec<Complex64>) -> Self {
        debug_assert!(!entries.is_empty());
        debug_assert!(field == Field::Complex || entries.iter().all(|z| z.im == 0.0));
        Vector { field, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Scalar {
        Scalar { value: self.entries[i], field: self.field }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Same entries, viewed over the complex field.
    pub fn to_complex(&self) -> Vector {
        Vector { field: Field::Complex, entries: self.entries.clone() }
    }

    pub fn scale(&self, s: Scalar) -> Vector {
        Vector { field: self.field.join(s.field), entries: self.entries.iter().map(|&z| z * s.value).collect() }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: Scalar, other: &Vector) -> Result<Vector> {
        let field = s.field;
        let out = self.zip_with(other, |a, b| a + s.value * b)?;
        Ok(Vector { field: out.field.join(field), entries: out.entries })
    }

    fn zip_with(&self, other: &Vector, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Vector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(Vector {
            field: self.field.join(other.field),
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: Field,
    n: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn from_rows(field: Field, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: i, len: row.len(), expected: n });
            }
            for z in row {
                check_entry(field, z)?;
                data.push(z);
            }
        }
        Ok(Matrix { field, n, data })
    }

    pub fn real(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(Field::Real, rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    pub fn complex(rows: &[&[(f64, f64)]]) -> Result<Self> {
        Self::from_rows(
            Field::Complex,
            rows.iter().map(|r| r.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).collect(),
        )
    }

    pub fn zeros(field: Field, n: usize) -> Self {
        assert!(n > 0, "matrix order must be positive");
        Matrix { field, n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub(crate) fn from_parts(field: Field, n: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        debug_assert!(field == Field::Complex || data.iter().all(|z| z.im == 0.0));
        Matrix { field, n, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        Scalar { value: self.at(i, j), field: self.field }
    }

    /// Sets entry `(i, j)`, enforcing the field invariant.
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) -> Result<()> {
        check_entry(self.field, value)?;
        self.data[i * self.n + j] = value;
        Ok(())
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.n)
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_parts(self.field, (0..self.n).map(|i| self.at(i, j)).collect())
    }

    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn to_complex(&self) -> Matrix {
        Matrix { field: Field::Complex, n: self.n, data: self.data.clone() }
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let data = (0..n * n).map(|k| self.at(k % n, k / n)).collect();
        Matrix { field: self.field, n, data }
    }

    pub fn conj_transpose(&self) -> Matrix {
        let n = self.n;
        let data = (0..n * n).map(|k| self.at(k % n, k / n).conj()).collect();
        Matrix { field: self.field, n, data }
    }

    pub fn scale(&self, s: Scalar) -> Matrix {
        Matrix {
            field: self.field.join(s.field()),
            n: self.n,
            data: self.data.iter().map(|&z| z * s.value()).collect(),
        }
    }

    pub fn mul_vec(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.n {
            return Err(Error::DimensionMismatch(self.n, x.dim()));
        }
        let entries = self.rows().map(|row| row.iter().zip(x.entries()).map(|(&a, &b)| a * b).sum()).collect();
        Ok(Vector::from_parts(self.field.join(x.field()), entries))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.at(k, j);
                }
            }
        }
        Ok(Matrix { field: self.field.join(other.field), n, data })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Numerical rank by Gaussian elimination with full pivoting. A pivot is
/// accepted iff its modulus exceeds `eps_rank` times the largest entry of the
/// input.
pub fn rank(t: &Matrix, tol: &Tolerance) -> usize {
    let n = t.n();
    let threshold = tol.eps_rank * t.max_modulus();
    if threshold == 0.0 {
        return 0;
    }
    let mut a: Vec<Complex64> = t.data.clone();
    let mut rank = 0;
    for step in 0..n {
        let (mut pr, mut pc, mut best) = (step, step, 0.0);
        for i in step..n {
            for j in step..n {
                let m = a[i * n + j].norm();
                if m > best {
                    best = m;
                    pr = i;
                    pc = j;
                }
            }
        }
        if best <= threshold {
            break;
        }
        rank += 1;
        if pr != step {
            for j in 0..n {
                a.swap(step * n + j, pr * n + j);
            }
        }
        if pc != step {
            for i in 0..n {
                a.swap(i * n + step, i * n + pc);
            }
        }
        let pivot = a[step * n + step];
        for i in step + 1..n {
            let factor = a[i * n + step] / pivot;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in step..n {
                let v = a[step * n + j];
                a[i * n + j] -= factor * v;
            }
        }
    }
    rank
}
