#![allow(dead_code)]

use borderrank::limits::{generic_rank, lin_comb, membership, EpsVector, SpanFamily};
use borderrank::scalar::{rat, EpsPoly, Rational};
use rand::rngs::StdRng;
use rand::Rng;

/// Random ε-polynomial of degree at most `max_degree` with small integer
/// coefficients; may be zero.
pub fn random_poly(rng: &mut StdRng, max_degree: usize) -> EpsPoly {
    let mut p = EpsPoly::zero();
    for d in 0..=max_degree {
        if rng.gen_bool(0.4) {
            let c = rng.gen_range(-3i64..=3);
            p.add_term(d, &rat(c));
        }
    }
    p
}

/// Random family of dimension ≤ 6 and degree ≤ 4, resampled until it is
/// linearly independent over Q(ε).
pub fn random_independent_family(rng: &mut StdRng) -> SpanFamily {
    loop {
        let dim = rng.gen_range(2..=6);
        let size = rng.gen_range(1..=dim.min(4));
        let mut vectors = Vec::with_capacity(size);
        for _ in 0..size {
            let mut v = EpsVector::new(dim);
            for coord in 0..dim {
                let p = random_poly(rng, 4);
                v.add_term(coord, &p);
            }
            vectors.push(v);
        }
        let family = SpanFamily::new(dim, vectors).unwrap();
        if family.vectors().iter().all(|v| !v.is_zero()) && generic_rank(&family) == size {
            return family;
        }
    }
}

/// Mutual membership of two bases of the same dimension.
pub fn subspaces_equal(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    a.len() == b.len()
        && a.iter().all(|v| membership(v, b))
        && b.iter().all(|v| membership(v, a))
}

/// Image of the family under an invertible rational matrix built from random
/// elementary row operations.
pub fn random_recombination(rng: &mut StdRng, family: &SpanFamily) -> SpanFamily {
    let r = family.size();
    let mut matrix: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { rat(1) } else { rat(0) })
                .collect()
        })
        .collect();
    for _ in 0..(3 * r) {
        let i = rng.gen_range(0..r);
        let j = rng.gen_range(0..r);
        if i == j {
            continue;
        }
        let c = rat(rng.gen_range(-2i64..=2));
        for k in 0..r {
            let add = &c * &matrix[j][k];
            matrix[i][k] += add;
        }
    }
    let vectors: Vec<EpsVector> = matrix
        .iter()
        .map(|row| lin_comb(family.vectors(), row))
        .collect();
    SpanFamily::new(family.ambient_dim(), vectors).unwrap()
}
