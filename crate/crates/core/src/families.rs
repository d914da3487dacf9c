//! Seeded matrix generators for test corpora.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{c_matrix, outer};
use crate::error::{Error, Result};
use crate::numeric::{Field, Matrix, Scalar};
use crate::random;

const LO: f64 = 0.1;
const HI: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Identity,
    Monomial,
    Genperm,
    Rankone,
    C2,
    Dense,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::Identity, Family::Monomial, Family::Genperm, Family::Rankone, Family::C2, Family::Dense];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Identity => "identity",
            Family::Monomial => "monomial",
            Family::Genperm => "genperm",
            Family::Rankone => "rankone",
            Family::C2 => "c2",
            Family::Dense => "dense",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown family {s:?}")))
    }
}

/// A member of `family` determined by `(n, field, seed)`.
pub fn generate(family: Family, n: usize, field: Field, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    let mut rng = random::stream_rng(seed, 0);
    Ok(match family {
        Family::Identity => Matrix::identity(field, n),
        Family::Monomial => monomial(&mut rng, field, n),
        Family::Genperm => genperm(&mut rng, field, n),
        Family::Rankone => rank_one(&mut rng, field, n),
        Family::C2 => {
            if n != 2 {
                return Err(Error::InvalidConfig(format!("c2 requires n = 2, got {n}")));
            }
            let beta = random::unimodular(&mut rng, Field::Real) * rng.random_range(0.1..=0.9);
            c_form(&mut rng, field, beta)
        }
        Family::Dense => dense(&mut rng, field, n),
    })
}

fn from_pattern<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    cols: &[Option<usize>],
    entry: impl Fn(&mut R) -> Complex64,
) -> Matrix {
    let n = cols.len();
    let mut m = Matrix::zeros(field, n);
    for (i, col) in cols.iter().enumerate() {
        if let Some(j) = *col {
            m.set(i, j, entry(rng)).expect("entry drawn in field");
        }
    }
    m
}

/// `P D` with random nonzero diagonal `D`.
pub fn monomial<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Matrix {
    let cols: Vec<Option<usize>> = random::permutation(rng, n).into_iter().map(Some).collect();
    from_pattern(rng, field, &cols, |r| random::scalar(r, field, LO, HI))
}

/// `gamma Q` with `gamma > 0` and `Q` a generalized permutation.
pub fn genperm<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Matrix {
    let gamma = random::log_uniform(rng, LO, HI);
    let cols: Vec<Option<usize>> = random::permutation(rng, n).into_iter().map(Some).collect();
    from_pattern(rng, field, &cols, |r| random::unimodular(r, field) * gamma)
}

/// A generalized permutation: permutation pattern, unimodular entries.
pub fn generalized_permutation<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Matrix {
    let cols: Vec<Option<usize>> = random::permutation(rng, n).into_iter().map(Some).collect();
    from_pattern(rng, field, &cols, |r| random::unimodular(r, field))
}

/// At most one nonzero per row; one row in five is left empty.
pub fn row_monomial<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Matrix {
    let cols: Vec<Option<usize>> = (0..n).map(|_| (!rng.random_ratio(1, 5)).then(|| rng.random_range(0..n))).collect();
    from_pattern(rng, field, &cols, |r| random::scalar(r, field, LO, HI))
}

/// Replaces one row of `m` (`n >= 2`) by a row with exactly two nonzeros.
pub fn inject_two_nonzero_row<R: Rng + ?Sized>(rng: &mut R, m: &Matrix) -> Matrix {
    let n = m.n();
    let field = m.field();
    let mut out = m.clone();
    let i = rng.random_range(0..n);
    let j = rng.random_range(0..n);
    let k = (j + rng.random_range(1..n)) % n;
    for col in 0..n {
        let z = if col == j || col == k { random::scalar(rng, field, LO, HI) } else { Complex64::new(0.0, 0.0) };
        out.set(i, col, z).expect("entry drawn in field");
    }
    out
}

/// `v u^t` with random nonzero entries.
pub fn rank_one<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Matrix {
    let v = random::vector(rng, field, n, LO, HI);
    let u = random::vector(rng, field, n, LO, HI);
    outer(&v, &u)
}

/// `gamma C(beta) Q` with `Q` a random 2x2 generalized permutation.
pub fn c_form<R: Rng + ?Sized>(rng: &mut R, field: Field, beta: Complex64) -> Matrix {
    let q = genperm(rng, field, 2);
    let c = c_matrix(field, beta);
    c.mul(&q).expect("2x2")
}

/// Every entry a random nonzero scalar.
pub fn dense<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize) -> Matrix {
    let data = (0..n * n).map(|_| random::scalar(rng, field, LO, HI)).collect();
    Matrix::from_parts(field, n, data)
}

/// `v u^t` over the real plane with `|u_1| = |u_2|` when `balanced`, and
/// `|u_1| / |u_2|` bounded away from one otherwise.
pub fn real_plane_rank_one<R: Rng + ?Sized>(rng: &mut R, balanced: bool) -> Matrix {
    let v = random::vector(rng, Field::Real, 2, LO, HI);
    let a = random::scalar(rng, Field::Real, LO, HI);
    let b = if balanced {
        random::unimodular(rng, Field::Real) * a.norm()
    } else {
        random::unimodular(rng, Field::Real)
            * a.norm()
            * random::log_uniform(rng, 1.5, 10.0).powi(if rng.random() { 1 } else { -1 })
    };
    let u = crate::numeric::Vector::from_parts(Field::Real, vec![a, b]);
    outer(&v, &u)
}

/// A scalar of modulus in `[0.1, 10]` as a [`Scalar`].
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    Scalar::new(field, random::scalar(rng, field, LO, HI)).expect("drawn in field")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{gen_perm_form, is_monomial, is_row_monomial, rank_one_factor, two_by_two_c_form};
    use crate::numeric::{rank, Tolerance};

    #[test]
    fn generators_land_in_their_family() {
        let tol = Tolerance::default();
        for field in [Field::Real, Field::Complex] {
            for seed in 0..50 {
                for n in 1..=6 {
                    assert!(is_monomial(&generate(Family::Monomial, n, field, seed).unwrap(), &tol));
                    assert!(gen_perm_form(&generate(Family::Genperm, n, field, seed).unwrap(), &tol).is_some());
                    assert!(rank_one_factor(&generate(Family::Rankone, n, field, seed).unwrap(), &tol).is_some());
                    assert_eq!(rank(&generate(Family::Dense, n, field, seed).unwrap(), &tol), n);
                }
                assert!(two_by_two_c_form(&generate(Family::C2, 2, field, seed).unwrap(), &tol).is_some());
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for family in Family::ALL {
            let n = if family == Family::C2 { 2 } else { 4 };
            assert_eq!(
                generate(family, n, Field::Complex, 9).unwrap(),
                generate(family, n, Field::Complex, 9).unwrap()
            );
        }
        assert_ne!(
            generate(Family::Dense, 3, Field::Real, 1).unwrap(),
            generate(Family::Dense, 3, Field::Real, 2).unwrap()
        );
    }

    #[test]
    fn c2_requires_plane() {
        assert!(generate(Family::C2, 3, Field::Real, 0).is_err());
        assert!(generate(Family::Dense, 0, Field::Real, 0).is_err());
    }

    #[test]
    fn injected_row_breaks_row_monomial() {
        let tol = Tolerance::default();
        let mut rng = random::stream_rng(3, 0);
        for _ in 0..200 {
            let n = rng.random_range(2..=6);
            let m = row_monomial(&mut rng, Field::Complex, n);
            assert!(is_row_monomial(&m, &tol));
            assert!(!is_row_monomial(&inject_two_nonzero_row(&mut rng, &m), &tol));
        }
    }

    #[test]
    fn family_names_round_trip() {
        for family in Family::ALL {
            assert_eq!(family.as_str().parse::<Family>().unwrap(), family);
        }
        assert!("nope".parse::<Family>().is_err());
    }
}
