//! Seeded sampling primitives. Every stream is a ChaCha8 generator keyed by a
//! `(seed, stream)` pair, so trial `i` of a campaign can be regenerated
//! without replaying trials `0..i`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::{Field, Vector};

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Log-uniform on `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// `+-1` over the reals, `e^{i theta}` with uniform `theta` over the complexes.
pub fn unimodular<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Complex64 {
    match field {
        Field::Real => Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
        Field::Complex => Complex64::cis(rng.random::<f64>() * 2.0 * PI),
    }
}

/// Log-uniform modulus in `[lo, hi]` times a random unimodular phase.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: Field, lo: f64, hi: f64) -> Complex64 {
    unimodular(rng, field) * log_uniform(rng, lo, hi)
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize, lo: f64, hi: f64) -> Vector {
    Vector::from_parts(field, (0..n).map(|_| scalar(rng, field, lo, hi)).collect())
}

pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
