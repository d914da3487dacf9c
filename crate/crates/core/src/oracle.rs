//! Pair samplers that invert the coordinate criteria, empirical refutation of
//! preserver claims, and executable forms of two auxiliary facts: a
//! non-parallel pair inside any two-dimensional span (sup norm), and the
//! peak-preservation test for diagonally dominant matrices.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::norms::{norm, peak_set, NormSpec};
use crate::numeric::{Field, Matrix, Scalar, Tolerance, Vector};
use crate::pairs::{definitional_check, is_pair, is_pair_linf, is_pair_lp_strict, PairKind};
use crate::random;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub count: usize,
    pub dim: usize,
    pub field: Field,
    pub spec: NormSpec,
    pub kind: PairKind,
    /// Entry moduli are log-uniform on `[lo, hi]`.
    pub magnitude_range: (f64, f64),
}

impl SampleConfig {
    pub const DEFAULT_RANGE: (f64, f64) = (0.1, 10.0);

    pub fn new(seed: u64, count: usize, dim: usize, field: Field, spec: NormSpec, kind: PairKind) -> Result<Self> {
        let cfg = SampleConfig { seed, count, dim, field, spec, kind, magnitude_range: Self::DEFAULT_RANGE };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.magnitude_range;
        if self.count == 0 {
            return Err(Error::InvalidConfig("count must be at least 1".into()));
        }
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be at least 1".into()));
        }
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidConfig(format!("bad magnitude range [{lo}, {hi}]")));
        }
        Ok(())
    }
}

// One coordinate in eight is zeroed in the l1 and sup-norm samplers so that
// neutral products and empty supports are exercised.
fn magnitude<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64, allow_zero: bool) -> f64 {
    if allow_zero && rng.random_ratio(1, 8) {
        0.0
    } else {
        random::log_uniform(rng, lo, hi)
    }
}

/// Sup-norm sample whose max modulus is attained at `peak`.
fn peaked<R: Rng + ?Sized>(rng: &mut R, cfg: &SampleConfig, peak: usize, phase: Complex64) -> Vec<Complex64> {
    let (lo, hi) = cfg.magnitude_range;
    let mut entries: Vec<Complex64> =
        (0..cfg.dim).map(|_| random::unimodular(rng, cfg.field) * magnitude(rng, lo, hi, true)).collect();
    let others = entries.iter().enumerate().filter(|&(k, _)| k != peak).map(|(_, z)| z.norm()).fold(0.0, f64::max);
    let top = if others == 0.0 {
        random::log_uniform(rng, lo, hi)
    } else if rng.random_ratio(1, 4) {
        others // exact tie
    } else {
        others * (1.0 + rng.random::<f64>())
    };
    entries[peak] = phase * top;
    entries
}

/// The `index`-th pair of the campaign described by `cfg`. The pair satisfies
/// the `(spec, kind)` relation by construction.
pub fn sample_pair(cfg: &SampleConfig, index: usize) -> Result<(Vector, Vector)> {
    if index >= cfg.count {
        return Err(Error::InvalidConfig(format!("index {index} outside count {}", cfg.count)));
    }
    let mut rng = random::stream_rng(cfg.seed, index as u64);
    let (lo, hi) = cfg.magnitude_range;
    let (n, field) = (cfg.dim, cfg.field);
    let (x, y): (Vec<Complex64>, Vec<Complex64>) = match cfg.spec {
        NormSpec::L1 => {
            let lambda = match cfg.kind {
                PairKind::Tea => Complex64::new(1.0, 0.0),
                PairKind::Parallel => random::unimodular(&mut rng, field),
            };
            (0..n)
                .map(|_| {
                    let phase = random::unimodular(&mut rng, field);
                    let a = magnitude(&mut rng, lo, hi, true);
                    let b = magnitude(&mut rng, lo, hi, true);
                    (phase * a, lambda * phase * b)
                })
                .unzip()
        }
        NormSpec::Linf => {
            let peak = rng.random_range(0..n);
            let px = random::unimodular(&mut rng, field);
            let py = match cfg.kind {
                PairKind::Tea => px,
                PairKind::Parallel => random::unimodular(&mut rng, field),
            };
            (peaked(&mut rng, cfg, peak, px), peaked(&mut rng, cfg, peak, py))
        }
        NormSpec::Lp(_) => {
            let x: Vec<Complex64> = (0..n).map(|_| random::scalar(&mut rng, field, lo, hi)).collect();
            let t = match cfg.kind {
                PairKind::Tea => Complex64::new(random::log_uniform(&mut rng, lo, hi), 0.0),
                PairKind::Parallel => random::scalar(&mut rng, field, lo, hi),
            };
            let y = x.iter().map(|&z| t * z).collect();
            (x, y)
        }
    };
    Ok((Vector::from_parts(field, x), Vector::from_parts(field, y)))
}

/// Both the coordinate criterion and the norm definition agree that `(x, y)`
/// is a pair.
pub fn confirmed_pair(x: &Vector, y: &Vector, spec: NormSpec, kind: PairKind, tol: &Tolerance) -> Result<bool> {
    Ok(is_pair(x, y, spec, kind, tol)?.holds && definitional_check(x, y, kind, spec, tol)?)
}

/// Both the coordinate criterion and the norm definition agree that `(x, y)`
/// is not a pair.
pub fn confirmed_non_pair(x: &Vector, y: &Vector, spec: NormSpec, kind: PairKind, tol: &Tolerance) -> Result<bool> {
    Ok(!is_pair(x, y, spec, kind, tol)?.holds && !definitional_check(x, y, kind, spec, tol)?)
}

/// `(x, y)` is a confirmed pair whose image under `t` is a confirmed non-pair.
pub fn refutes(t: &Matrix, x: &Vector, y: &Vector, spec: NormSpec, kind: PairKind, tol: &Tolerance) -> Result<bool> {
    if !confirmed_pair(x, y, spec, kind, tol)? {
        return Ok(false);
    }
    confirmed_non_pair(&t.mul_vec(x)?, &t.mul_vec(y)?, spec, kind, tol)
}

#[derive(Clone, Debug, PartialEq)]
pub enum EmpiricalOutcome {
    NoCounterexample { checked: usize },
    Counterexample { index: usize, x: Vector, y: Vector },
}

impl EmpiricalOutcome {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, EmpiricalOutcome::Counterexample { .. })
    }
}

pub fn empirical_check(t: &Matrix, cfg: &SampleConfig, tol: &Tolerance) -> Result<EmpiricalOutcome> {
    empirical_check_with(t, cfg, tol, Execution::default())
}

/// Runs `cfg.count` sampled pairs through `t` and returns the lowest-index
/// pair that is doubly confirmed on input and doubly refuted on output.
pub fn empirical_check_with(
    t: &Matrix,
    cfg: &SampleConfig,
    tol: &Tolerance,
    exec: Execution,
) -> Result<EmpiricalOutcome> {
    cfg.validate()?;
    if t.n() != cfg.dim {
        return Err(Error::DimensionMismatch(t.n(), cfg.dim));
    }
    let hit = exec::find_map_first(exec, cfg.count, |i| {
        let (x, y) = sample_pair(cfg, i).ok()?;
        refutes(t, &x, &y, cfg.spec, cfg.kind, tol).ok()?.then_some((x, y))
    });
    Ok(match hit {
        Some((index, (x, y))) => EmpiricalOutcome::Counterexample { index, x, y },
        None => EmpiricalOutcome::NoCounterexample { checked: cfg.count },
    })
}

/// For linearly independent `u`, `v`, a pair in their span that is not
/// parallel in the sup norm; `None` iff they are dependent.
///
/// Tries `(u, v)` itself, then the pair `u +- s v` where `s` rescales `v` to
/// the norm of `u` with the phase that makes them peak together, then a fixed
/// grid of coefficient pairs.
pub fn find_nonparallel_in_span(
    u: &Vector,
    v: &Vector,
    spec: NormSpec,
    tol: &Tolerance,
) -> Result<Option<(Vector, Vector)>> {
    if spec != NormSpec::Linf {
        return Err(Error::Precondition(format!("span search is defined for linf, got {spec}")));
    }
    if is_pair_lp_strict(u, v, PairKind::Parallel, tol)?.holds {
        return Ok(None);
    }
    let parallel = |x: &Vector, y: &Vector| -> Result<bool> { Ok(is_pair_linf(x, y, PairKind::Parallel, tol)?.holds) };
    if !parallel(u, v)? {
        return Ok(Some((u.clone(), v.clone())));
    }
    let mu = is_pair_linf(u, v, PairKind::Parallel, tol)?.mu.expect("parallel pair has mu");
    let ratio = norm(u, NormSpec::Linf) / norm(v, NormSpec::Linf);
    let s = Scalar::new(mu.field(), mu.value() * ratio)?;
    let field = u.field();
    let neg = |z: Scalar| Scalar::new(field, -z.value()).expect("negation keeps field");
    let x = u.add_scaled(s, v)?;
    let y = u.add_scaled(neg(s), v)?;
    if !parallel(&x, &y)? {
        return Ok(Some((x, y)));
    }
    let mut coeffs: Vec<Complex64> = [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0]
        .iter()
        .map(|&c| Complex64::new(c * ratio, 0.0))
        .collect();
    if field == Field::Complex {
        coeffs.extend([0.5, -0.5, 1.0, -1.0, 2.0, -2.0].iter().map(|&c| Complex64::new(0.0, c * ratio)));
    }
    for (i, &a) in coeffs.iter().enumerate() {
        for &b in &coeffs[i + 1..] {
            let x = u.add_scaled(Scalar::new(field, a)?, v)?;
            let y = u.add_scaled(Scalar::new(field, b)?, v)?;
            if !parallel(&x, &y)? {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// `a_jj > |a_jk|` for all `k != j` (row dominance) or `a_jj > |a_kj|`
/// (column dominance), with strictness `|a_jk| <= (1 - eps_eq) a_jj`.
pub fn dominance_hypothesis(a: &Matrix, tol: &Tolerance) -> Result<()> {
    let n = a.n();
    let eps = tol.eps_eq;
    let check = |by_rows: bool| -> std::result::Result<(), usize> {
        for j in 0..n {
            let d = a.at(j, j);
            if d.re <= 0.0 || d.im.abs() > eps * d.re {
                return Err(j);
            }
            for k in (0..n).filter(|&k| k != j) {
                let off = if by_rows { a.at(j, k) } else { a.at(k, j) };
                if off.norm() > (1.0 - eps) * d.re {
                    return Err(j);
                }
            }
        }
        Ok(())
    };
    match (check(true), check(false)) {
        (Ok(()), _) | (_, Ok(())) => Ok(()),
        (Err(j), Err(_)) => Err(Error::HypothesisViolated(j)),
    }
}

/// Probe vectors from the proof of the equivalence, expressed in the frame
/// where column `pivot` of `a` is nonnegative.
fn structured_probes(a: &Matrix) -> Vec<Vector> {
    let n = a.n();
    let field = a.field();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut patterns: Vec<Vec<Complex64>> = vec![vec![one; n]];
    for i in 0..n {
        for k in i + 1..n {
            let mut plus = vec![zero; n];
            plus[i] = one;
            plus[k] = one;
            let mut minus = plus.clone();
            minus[k] = -one;
            patterns.push(plus);
            patterns.push(minus);
        }
        let mut flip = vec![one; n];
        flip[i] = -one;
        patterns.push(flip);
        let mut lone = vec![-one; n];
        lone[i] = one;
        patterns.push(lone);
    }
    let mut probes = Vec::with_capacity(patterns.len() * n);
    for pivot in 0..n {
        let frame: Vec<Complex64> = (0..n).map(|i| Scalar::phase_of(field, a.at(i, pivot)).value().conj()).collect();
        for p in &patterns {
            let x: Vec<Complex64> = p.iter().zip(&frame).map(|(a, d)| a * d).collect();
            probes.push(Vector::from_parts(field, x));
        }
    }
    probes
}

/// Peak set of `x` contained in the peak set of `y`.
fn peaks_carried(x: &Vector, y: &Vector, tol: &Tolerance) -> bool {
    match (peak_set(x, tol), peak_set(y, tol)) {
        (Ok(px), Ok(py)) => px.indices.iter().all(|&k| py.contains(k)),
        _ => false,
    }
}

/// Whether `y = A^t x` peaks wherever `x` does: every structured probe (the
/// tie-closed form of the implication) and `cfg.count` random `x` with a
/// strict unique peak. Sampling can only refute, so `true` means no violation
/// was found.
pub fn preserves_peaks(a: &Matrix, cfg: &SampleConfig, tol: &Tolerance) -> Result<bool> {
    dominance_hypothesis(a, tol)?;
    cfg.validate()?;
    let at = a.transpose();
    for x in structured_probes(a) {
        if !peaks_carried(&x, &at.mul_vec(&x)?, tol) {
            return Ok(false);
        }
    }
    let n = a.n();
    let field = a.field().join(cfg.field);
    let (lo, hi) = cfg.magnitude_range;
    let violation = exec::find_map_first(Execution::default(), cfg.count, |i| {
        let mut rng = random::stream_rng(cfg.seed, i as u64);
        let peak = rng.random_range(0..n);
        let mut x: Vec<Complex64> = (0..n).map(|_| random::scalar(&mut rng, field, lo, hi)).collect();
        let others = x.iter().enumerate().filter(|&(k, _)| k != peak).map(|(_, z)| z.norm()).fold(0.0, f64::max);
        let bump = 1.0 + random::log_uniform(&mut rng, 1e-3, 1.0);
        let top = if others == 0.0 { 1.0 } else { others * bump };
        x[peak] = random::unimodular(&mut rng, field) * top;
        let x = Vector::from_parts(field, x);
        let y = at.mul_vec(&x).ok()?;
        let py = peak_set(&y, tol).ok()?;
        (!py.contains(peak)).then_some(())
    });
    Ok(violation.is_none())
}

/// `n = 2`, `A` Hermitian with `a11 = a22 > |a12|`, or `A = a11 I`.
pub fn peak_preserving_form(a: &Matrix, tol: &Tolerance) -> Result<bool> {
    dominance_hypothesis(a, tol)?;
    let n = a.n();
    let scale = a.max_modulus();
    let eps = tol.eps_eq * scale;
    let a11 = a.at(0, 0);
    let scalar_identity = Matrix::identity(Field::Complex, n).scale(Scalar::complex(a11.re, a11.im));
    if a.max_abs_diff(&scalar_identity) <= eps {
        return Ok(true);
    }
    if n != 2 {
        return Ok(false);
    }
    let hermitian = a.max_abs_diff(&a.conj_transpose()) <= eps;
    let equal_diagonal = (a11 - a.at(1, 1)).norm() <= eps;
    let dominant = a.at(0, 1).norm() <= (1.0 - tol.eps_eq) * a11.re;
    Ok(hermitian && equal_diagonal && dominant)
}
