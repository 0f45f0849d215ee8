//! Seeded random fixtures for property tests and benchmarks.

use rand::Rng;

use crate::numerics::{dagger, ComplexMatrix, C64};

fn sample(rng: &mut impl Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Entries uniform in the unit square of the complex plane.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| sample(rng))
}

pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let a = random_matrix(dim, dim, rng);
    (&a + &dagger(&a)).scale(C64::new(0.5, 0.0))
}

/// Unitary obtained by Gram-Schmidt orthonormalization of a random matrix's columns.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let a = random_matrix(dim, dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|i| a[(i, j)]).collect();
        // Two passes keep the columns orthogonal to working precision.
        for _ in 0..2 {
            for q in &cols {
                let overlap: C64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Unit vector with random amplitudes.
pub fn random_state_vector(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| sample(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}
