#![allow(dead_code)]

use localchern::polyring::{Monomial, Polynomial, Rational};
use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Determinant by cofactor expansion; the matrices here are tiny.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

/// Random integer matrix with entries in `[-bound, bound]` and nonzero
/// determinant.
pub fn invertible<R: Rng>(n: usize, bound: i64, rng: &mut R) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        if det(&m) != 0 {
            return m;
        }
    }
}

/// Images `x_i -> sum_j a_ij x_j` of the linear change given by `a`.
pub fn linear_images(a: &[Vec<i64>]) -> Vec<Polynomial> {
    let n = a.len();
    a.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(Polynomial::zero(n), |acc, (j, c)| {
                    &acc + &Polynomial::variable(n, j).scale(&q(*c))
                })
        })
        .collect()
}

pub fn rational_matrix(a: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    a.iter().map(|r| r.iter().map(|v| q(*v)).collect()).collect()
}

/// Random polynomial with `terms` terms of degree at most `degree` and
/// small integer coefficients.
pub fn random_poly<R: Rng>(nvars: usize, degree: u32, terms: usize, rng: &mut R) -> Polynomial {
    Polynomial::from_terms(
        nvars,
        (0..terms).map(|_| {
            let mut e = vec![0u32; nvars];
            let mut left = rng.gen_range(0..=degree);
            for slot in e.iter_mut() {
                let k = rng.gen_range(0..=left);
                *slot = k;
                left -= k;
            }
            let mut c = rng.gen_range(-4i64..=4);
            if c == 0 {
                c = 1;
            }
            (q(c), Monomial::new(e))
        }),
    )
}
