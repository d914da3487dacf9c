//! Recognizers for the matrix families that characterize preservers.
//!
//! An entry counts as nonzero when its modulus exceeds `eps_eq` times the
//! largest entry modulus of the matrix, so every recognizer is invariant under
//! positive rescaling of its input.

use num_complex::Complex64;

use crate::numeric::{rank, Field, Matrix, Scalar, Tolerance, Vector};

#[derive(Clone, Debug, PartialEq)]
pub enum StructureClass {
    Zero,
    RowMonomial,
    Monomial,
    /// `T = gamma * Q` with `Q` a generalized permutation matrix.
    GeneralizedPermutation {
        gamma: f64,
        q: Matrix,
    },
    /// `T = v * u^t`.
    RankOne {
        u: Vector,
        v: Vector,
    },
    /// `T = gamma * [[1, beta], [conj(beta), 1]] * Q`, `|beta| < 1`, `n = 2`.
    TwoByTwoC {
        gamma: f64,
        beta: Scalar,
        q: Matrix,
    },
    General,
}

impl StructureClass {
    pub fn name(&self) -> &'static str {
        match self {
            StructureClass::Zero => "zero",
            StructureClass::RowMonomial => "row_monomial",
            StructureClass::Monomial => "monomial",
            StructureClass::GeneralizedPermutation { .. } => "generalized_permutation",
            StructureClass::RankOne { .. } => "rank_one",
            StructureClass::TwoByTwoC { .. } => "two_by_two_c",
            StructureClass::General => "general",
        }
    }
}

fn nonzero_threshold(t: &Matrix, tol: &Tolerance) -> f64 {
    tol.eps_eq * t.max_modulus()
}

/// Column indices of the entries of row `i` that count as nonzero.
pub(crate) fn row_support(t: &Matrix, i: usize, tol: &Tolerance) -> Vec<usize> {
    let cut = nonzero_threshold(t, tol);
    t.row(i).iter().enumerate().filter(|(_, z)| z.norm() > cut).map(|(j, _)| j).collect()
}

pub fn is_row_monomial(t: &Matrix, tol: &Tolerance) -> bool {
    (0..t.n()).all(|i| row_support(t, i, tol).len() <= 1)
}

/// Exactly one nonzero entry in every row and every column.
pub fn is_monomial(t: &Matrix, tol: &Tolerance) -> bool {
    monomial_pattern(t, tol).is_some()
}

/// For a monomial matrix, the column holding row `i`'s nonzero entry.
fn monomial_pattern(t: &Matrix, tol: &Tolerance) -> Option<Vec<usize>> {
    let n = t.n();
    let mut seen = vec![false; n];
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        match row_support(t, i, tol).as_slice() {
            [j] if !seen[*j] => {
                seen[*j] = true;
                cols.push(*j);
            }
            _ => return None,
        }
    }
    Some(cols)
}

/// Writes `T = gamma * Q` when `T` is monomial with equal nonzero moduli. `Q`
/// has exactly unimodular entries. The zero matrix gives `(0, I)`.
pub fn gen_perm_form(t: &Matrix, tol: &Tolerance) -> Option<(f64, Matrix)> {
    let n = t.n();
    if t.is_zero() {
        return Some((0.0, Matrix::identity(t.field(), n)));
    }
    let cols = monomial_pattern(t, tol)?;
    let moduli: Vec<f64> = cols.iter().enumerate().map(|(i, &j)| t.at(i, j).norm()).collect();
    let top = moduli.iter().copied().fold(0.0, f64::max);
    if moduli.iter().any(|&m| top - m > tol.eps_eq * top) {
        return None;
    }
    let gamma = moduli.iter().sum::<f64>() / n as f64;
    let mut q = vec![Complex64::new(0.0, 0.0); n * n];
    for (i, &j) in cols.iter().enumerate() {
        q[i * n + j] = Scalar::phase_of(t.field(), t.at(i, j)).value();
    }
    let q = Matrix::from_parts(t.field(), n, q);
    let rebuilt = q.scale(Scalar::real(gamma));
    (rebuilt.max_abs_diff(t) <= tol.eps_eq * top).then_some((gamma, q))
}

/// Factors a numerically rank-one `T` as `v * u^t`, with `v` the column of
/// largest euclidean norm. Returns `None` for rank zero or rank above one.
pub fn rank_one_factor(t: &Matrix, tol: &Tolerance) -> Option<(Vector, Vector)> {
    if rank(t, tol) != 1 {
        return None;
    }
    let n = t.n();
    let columns: Vec<Vector> = (0..n).map(|j| t.column(j)).collect();
    let sq = |c: &Vector| c.entries().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let v = columns.iter().max_by(|a, b| sq(a).total_cmp(&sq(b))).expect("n > 0").clone();
    let vv = sq(&v);
    let u: Vec<Complex64> = columns
        .iter()
        .map(|c| v.entries().iter().zip(c.entries()).map(|(a, b)| a.conj() * b).sum::<Complex64>() / vv)
        .collect();
    let u = Vector::from_parts(t.field(), u);
    let rebuilt = outer(&v, &u);
    (rebuilt.max_abs_diff(t) <= tol.eps_eq * t.max_modulus()).then_some((u, v))
}

/// `v * u^t`.
pub fn outer(v: &Vector, u: &Vector) -> Matrix {
    let n = v.dim();
    let data = (0..n * n).map(|k| v.entries()[k / n] * u.entries()[k % n]).collect();
    Matrix::from_parts(v.field().join(u.field()), n, data)
}

/// `[[1, beta], [conj(beta), 1]]` over `field`.
pub fn c_matrix(field: Field, beta: Complex64) -> Matrix {
    Matrix::from_parts(field, 2, vec![Complex64::new(1.0, 0.0), beta, beta.conj(), Complex64::new(1.0, 0.0)])
}

/// Writes a 2x2 `T` as `gamma * C(beta) * Q` with `gamma > 0`,
/// `|beta| <= 1 - eps_eq` and `Q` a diagonal or antidiagonal unimodular
/// matrix. A left generalized permutation factor needs no separate search:
/// `D C(beta) D^*` and `P C(beta) P` are again of the form `C(beta')`.
pub fn two_by_two_c_form(t: &Matrix, tol: &Tolerance) -> Option<(f64, Scalar, Matrix)> {
    if t.n() != 2 || t.is_zero() {
        return None;
    }
    let field = t.field();
    let eps = tol.eps_eq;
    let scale = t.max_modulus();
    for swap in [false, true] {
        // m = T * P where P swaps the columns when `swap` is set
        let m = |i: usize, j: usize| if swap { t.at(i, 1 - j) } else { t.at(i, j) };
        let (d0, d1) = (m(0, 0), m(1, 1));
        let (g0, g1) = (d0.norm(), d1.norm());
        if g0 <= eps * scale || g1 <= eps * scale || (g0 - g1).abs() > eps * g0.max(g1) {
            continue;
        }
        let gamma = 0.5 * (g0 + g1);
        let q0 = Scalar::phase_of(field, d0).value();
        let q1 = Scalar::phase_of(field, d1).value();
        // m * diag(q)^* = gamma * C
        let upper = m(0, 1) * q1.conj();
        let lower = m(1, 0) * q0.conj();
        if (upper - lower.conj()).norm() > eps * gamma {
            continue;
        }
        let beta = (upper + lower.conj()) / (2.0 * gamma);
        if beta.norm() > 1.0 - eps {
            continue;
        }
        let zero = Complex64::new(0.0, 0.0);
        let q = if swap {
            Matrix::from_parts(field, 2, vec![zero, q0, q1, zero])
        } else {
            Matrix::from_parts(field, 2, vec![q0, zero, zero, q1])
        };
        let beta = if field == Field::Real { Complex64::new(beta.re, 0.0) } else { beta };
        let rebuilt = c_matrix(field, beta).mul(&q).expect("2x2").scale(Scalar::real(gamma));
        if rebuilt.max_abs_diff(t) <= eps * scale {
            let beta = Scalar::new(field, beta).expect("real field keeps real beta");
            return Some((gamma, beta, q));
        }
    }
    None
}

/// The most specific family `T` belongs to.
pub fn recognize(t: &Matrix, tol: &Tolerance) -> StructureClass {
    if t.is_zero() {
        return StructureClass::Zero;
    }
    if let Some((gamma, q)) = gen_perm_form(t, tol) {
        return StructureClass::GeneralizedPermutation { gamma, q };
    }
    if is_monomial(t, tol) {
        return StructureClass::Monomial;
    }
    if is_row_monomial(t, tol) {
        return StructureClass::RowMonomial;
    }
    if let Some((gamma, beta, q)) = two_by_two_c_form(t, tol) {
        return StructureClass::TwoByTwoC { gamma, beta, q };
    }
    if let Some((u, v)) = rank_one_factor(t, tol) {
        return StructureClass::RankOne { u, v };
    }
    StructureClass::General
}
