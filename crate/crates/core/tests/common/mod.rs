//! Shared fixtures and seeded random generators for the integration tests.
#![allow(dead_code)]

use hypersym::combinat::Permutation;
use hypersym::exactnum::{rational, totient};
use hypersym::{Cyclo, Hypermatrix, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The 2×2×2 form `x₁x₂y₃ − x₁y₂x₃ + y₁y₂x₃ − x₁y₂y₃`.
pub fn example_a() -> Hypermatrix {
    Hypermatrix::from_fn(2, 3, 3, |i| {
        let v = match i {
            [1, 1, 2] => 1,
            [1, 2, 1] => -1,
            [2, 2, 1] => 1,
            [1, 2, 2] => -1,
            _ => 0,
        };
        Cyclo::from_int(3, v)
    })
    .unwrap()
}

/// Numerator in `[-bound, bound]`, denominator in `[1, bound]`.
pub fn random_rational(rng: &mut impl Rng, bound: i64) -> Rational {
    rational(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

/// As [`random_rational`], with the denominator prime to `p`.
pub fn random_rational_coprime(rng: &mut impl Rng, bound: i64, p: i64) -> Rational {
    loop {
        let den = rng.gen_range(1..=bound);
        if den % p != 0 {
            return rational(rng.gen_range(-bound..=bound), den);
        }
    }
}

pub fn random_cyclo(rng: &mut impl Rng, order: u32, bound: i64) -> Cyclo {
    let coeffs = (0..totient(order)).map(|_| random_rational(rng, bound)).collect();
    Cyclo::from_reduced(order, coeffs).unwrap()
}

/// Random rational entries, root order `d`.
pub fn random_hypermatrix(rng: &mut impl Rng, n: usize, d: usize, bound: i64) -> Hypermatrix {
    let values = (0..n.pow(d as u32)).map(|_| random_rational(rng, bound)).collect();
    Hypermatrix::from_rationals(n, d, values).unwrap()
}

pub fn random_hypermatrix_coprime(rng: &mut impl Rng, n: usize, d: usize, bound: i64, p: i64) -> Hypermatrix {
    let values = (0..n.pow(d as u32))
        .map(|_| random_rational_coprime(rng, bound, p))
        .collect();
    Hypermatrix::from_rationals(n, d, values).unwrap()
}

/// A vector with entries in `ℚ(ω_order)`.
pub fn random_vector(rng: &mut impl Rng, n: usize, order: u32, bound: i64) -> Vec<Cyclo> {
    (0..n).map(|_| random_cyclo(rng, order, bound)).collect()
}

pub fn random_permutation(rng: &mut impl Rng, d: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=d).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).unwrap()
}
