//! Operator entanglement of bipartite operators.
//!
//! A unitary `U` on `C^n ⊗ C^m` is flattened row by row into a vector in
//! operator space. Expanding that vector in the product basis
//! `|a><b| ⊗ |c><d|` gives an `n² × m²` coefficient matrix `X`; its squared
//! singular values are the operator Schmidt coefficients `λ_k`. Since
//! `Σ λ_k = Tr(U†U) = n·m`, entropies are computed from `λ_k / (n·m)`.

use crate::error::{Error, Result};
use crate::numerics::{svd, ComplexMatrix, C64};
use crate::spin::SpinSystem;

/// Coefficients below this fraction of the largest one count as zero for
/// [`SchmidtSpectrum::rank`].
pub const RANK_CUTOFF: f64 = 1e-12;

/// Dimensions `n ≤ m` of the two factors of a bipartite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartitionDims {
    n: usize,
    m: usize,
}

impl BipartitionDims {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidParameter(format!(
                "bipartition dimensions must be positive, got ({n}, {m})"
            )));
        }
        if n > m {
            return Err(Error::InvalidParameter(format!(
                "first factor must be the smaller one, got n = {n} > m = {m}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn of_spins(s1: &SpinSystem, s2: &SpinSystem) -> Result<Self> {
        Self::new(s1.dim(), s2.dim())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension of the full space, `n·m`.
    pub fn total(&self) -> usize {
        self.n * self.m
    }

    fn check_operator(&self, u: &ComplexMatrix, op: &'static str) -> Result<()> {
        let d = self.total();
        if u.shape() != (d, d) {
            return Err(Error::ShapeMismatch {
                op,
                lhs: u.shape(),
                rhs: (d, d),
            });
        }
        Ok(())
    }
}

/// Flattens a matrix row after row: entry `(i, j)` lands at `i·cols + j`.
pub fn reshape_vec(a: &ComplexMatrix) -> Vec<C64> {
    a.as_slice().to_vec()
}

/// Rearranges `U[(a,c),(b,d)]` into `X[(a,b),(c,d)]`.
///
/// Row `a·n + b` of the result indexes the subsystem-1 operator `|a><b|`,
/// column `c·m + d` the subsystem-2 operator `|c><d|`.
pub fn realign(u: &ComplexMatrix, dims: BipartitionDims) -> Result<ComplexMatrix> {
    dims.check_operator(u, "realign")?;
    let (n, m) = (dims.n, dims.m);
    let src = u.as_slice();
    let stride = n * m;
    let mut out = vec![C64::new(0.0, 0.0); n * n * m * m];
    for a in 0..n {
        for b in 0..n {
            let dst_row = &mut out[(a * n + b) * m * m..(a * n + b + 1) * m * m];
            for c in 0..m {
                let src_row = (a * m + c) * stride + b * m;
                dst_row[c * m..(c + 1) * m].copy_from_slice(&src[src_row..src_row + m]);
            }
        }
    }
    ComplexMatrix::new(n * n, m * m, out)
}

/// Operator Schmidt coefficients of a bipartite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    lambdas: Vec<f64>,
    dims: BipartitionDims,
}

impl SchmidtSpectrum {
    /// Sorts the coefficients descending. Negative or non-finite input is rejected.
    pub fn new(mut lambdas: Vec<f64>, dims: BipartitionDims) -> Result<Self> {
        if lambdas.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidParameter(
                "Schmidt coefficients must be finite and nonnegative".into(),
            ));
        }
        if lambdas.len() > dims.n * dims.n {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients exceed the Schmidt rank bound n² = {}",
                lambdas.len(),
                dims.n * dims.n
            )));
        }
        lambdas.sort_by(|x, y| y.total_cmp(x));
        Ok(Self { lambdas, dims })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn dims(&self) -> BipartitionDims {
        self.dims
    }

    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// `λ_k / (n·m)`; sums to one for unitary operators.
    pub fn normalized(&self) -> Vec<f64> {
        let scale = self.dims.total() as f64;
        self.lambdas.iter().map(|l| l / scale).collect()
    }

    /// Number of coefficients above `RANK_CUTOFF · λ_max`.
    pub fn rank(&self) -> usize {
        let cutoff = RANK_CUTOFF * self.lambdas.first().copied().unwrap_or(0.0);
        self.lambdas.iter().filter(|&&l| l > cutoff).count()
    }

    pub fn von_neumann(&self) -> f64 {
        svn(self)
    }

    pub fn linear(&self) -> f64 {
        slin(self)
    }
}

pub fn schmidt_spectrum(u: &ComplexMatrix, dims: BipartitionDims) -> Result<SchmidtSpectrum> {
    let x = realign(u, dims)?;
    let lambdas = svd(&x)?.into_iter().map(|s| s * s).collect();
    SchmidtSpectrum::new(lambdas, dims)
}

/// Operator von Neumann entropy `-Σ λ̃ ln λ̃` (natural log, `0 ln 0 = 0`).
pub fn svn(spec: &SchmidtSpectrum) -> f64 {
    let s: f64 = spec
        .normalized()
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    s.max(0.0)
}

/// Operator linear entropy `1 - Σ λ̃²`.
pub fn slin(spec: &SchmidtSpectrum) -> f64 {
    let purity: f64 = spec.normalized().into_iter().map(|p| p * p).sum();
    (1.0 - purity).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorEntropies {
    pub von_neumann: f64,
    pub linear: f64,
}

pub fn operator_entanglement(
    u: &ComplexMatrix,
    dims: BipartitionDims,
) -> Result<OperatorEntropies> {
    let spec = schmidt_spectrum(u, dims)?;
    Ok(OperatorEntropies {
        von_neumann: svn(&spec),
        linear: slin(&spec),
    })
}

/// Swap of two `d`-dimensional factors.
pub fn swap_gate(d: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for c in 0..d {
            out[(c * d + a, a * d + c)] = C64::new(1.0, 0.0);
        }
    }
    out
}

/// Controlled-NOT with the first qubit as control.
pub fn cnot_gate() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
    .expect("4x4 literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hs_inner, kron};
    use crate::random::{random_matrix, random_unitary};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn dims(n: usize, m: usize) -> BipartitionDims {
        BipartitionDims::new(n, m).unwrap()
    }

    #[test]
    fn bipartition_validation() {
        assert!(BipartitionDims::new(3, 2).is_err());
        assert!(BipartitionDims::new(0, 2).is_err());
        assert_eq!(dims(2, 3).total(), 6);
    }

    #[test]
    fn reshape_golden_ordering() {
        let a = ComplexMatrix::from_real_rows(&[[11.0, 12.0], [21.0, 22.0]]).unwrap();
        let v: Vec<f64> = reshape_vec(&a).iter().map(|z| z.re).collect();
        assert_eq!(v, vec![11.0, 12.0, 21.0, 22.0]);
        let single = ComplexMatrix::from_real_rows(&[[4.0]]).unwrap();
        assert_eq!(reshape_vec(&single).len(), 1);
    }

    #[test]
    fn reshape_preserves_norm() {
        let mut rng = StdRng::seed_from_u64(10);
        let a = random_matrix(4, 6, &mut rng);
        let v = reshape_vec(&a);
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - hs_inner(&a, &a).unwrap().re).abs() < 1e-12);
    }

    #[test]
    fn realign_index_map_literal() {
        // Entries labelled by their (row, col) in U so the permutation is visible.
        let (n, m) = (2, 3);
        let d = n * m;
        let u = ComplexMatrix::from_fn(d, d, |r, c| C64::new(r as f64, c as f64));
        let x = realign(&u, dims(n, m)).unwrap();
        assert_eq!(x.shape(), (4, 9));
        for a in 0..n {
            for b in 0..n {
                for c in 0..m {
                    for e in 0..m {
                        assert_eq!(x[(a * n + b, c * m + e)], u[(a * m + c, b * m + e)]);
                    }
                }
            }
        }
    }

    #[test]
    fn realign_rejects_wrong_shape() {
        let u = ComplexMatrix::identity(5);
        assert!(matches!(
            realign(&u, dims(2, 2)),
            Err(Error::ShapeMismatch { op: "realign", .. })
        ));
    }

    #[test]
    fn realign_identity_is_rank_one() {
        let x = realign(&ComplexMatrix::identity(4), dims(2, 2)).unwrap();
        let s = svd(&x).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-14);
        assert!(s[1..].iter().all(|&v| v < 1e-14));
    }

    #[test]
    fn realign_product_is_rank_one() {
        let mut rng = StdRng::seed_from_u64(11);
        let a = random_matrix(2, 2, &mut rng);
        let b = random_matrix(3, 3, &mut rng);
        let s = svd(&realign(&kron(&a, &b), dims(2, 3)).unwrap()).unwrap();
        let expected = a.frobenius_norm() * b.frobenius_norm();
        assert!((s[0] - expected).abs() < 1e-12 * expected);
        assert!(s[1..].iter().all(|&v| v < 1e-12 * expected));
    }

    #[test]
    fn realign_is_an_involution_for_equal_factors() {
        let mut rng = StdRng::seed_from_u64(12);
        let u = random_matrix(9, 9, &mut rng);
        let twice = realign(&realign(&u, dims(3, 3)).unwrap(), dims(3, 3)).unwrap();
        assert_eq!(twice, u);
    }

    #[test]
    fn identity_spectrum() {
        let spec = schmidt_spectrum(&ComplexMatrix::identity(441), dims(21, 21)).unwrap();
        assert_eq!(spec.lambdas().len(), 441);
        assert!((spec.lambdas()[0] - 441.0).abs() < 1e-9);
        assert_eq!(spec.rank(), 1);
        assert!(svn(&spec) < 1e-10);
        assert!(slin(&spec) < 1e-12);
    }

    #[test]
    fn swap_spectrum_is_flat() {
        let spec = schmidt_spectrum(&swap_gate(2), dims(2, 2)).unwrap();
        for l in spec.lambdas() {
            assert!((l - 1.0).abs() < 1e-14);
        }
        assert!((svn(&spec) - 4f64.ln()).abs() < 1e-12);
        assert!((slin(&spec) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn cnot_spectrum() {
        let spec = schmidt_spectrum(&cnot_gate(), dims(2, 2)).unwrap();
        let p = spec.normalized();
        assert!((p[0] - 0.5).abs() < 1e-14 && (p[1] - 0.5).abs() < 1e-14);
        assert!(p[2..].iter().all(|&x| x < 1e-14));
        assert_eq!(spec.rank(), 2);
        assert!((svn(&spec) - 2f64.ln()).abs() < 1e-12);
        assert!((slin(&spec) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn swap_on_two_spin_tens() {
        let e = operator_entanglement(&swap_gate(21), dims(21, 21)).unwrap();
        assert!((e.von_neumann - 441f64.ln()).abs() < 1e-9);
        assert!((e.linear - (1.0 - 1.0 / 441.0)).abs() < 1e-12);
    }

    #[test]
    fn uniform_spectrum_entropies() {
        let n = 5;
        let spec = SchmidtSpectrum::new(vec![5.0 * 5.0 / 25.0; 25], dims(5, 5)).unwrap();
        assert!((svn(&spec) - ((n * n) as f64).ln()).abs() < 1e-12);
        assert!((slin(&spec) - (1.0 - 1.0 / 25.0)).abs() < 1e-12);
    }

    #[test]
    fn spectrum_validation() {
        assert!(SchmidtSpectrum::new(vec![-1.0], dims(2, 2)).is_err());
        assert!(SchmidtSpectrum::new(vec![1.0; 5], dims(2, 2)).is_err());
        let s = SchmidtSpectrum::new(vec![1.0, 3.0], dims(2, 2)).unwrap();
        assert_eq!(s.lambdas(), &[3.0, 1.0]);
    }

    #[test]
    fn entropies_of_random_unitary_are_bounded() {
        let mut rng = StdRng::seed_from_u64(13);
        let d = dims(3, 4);
        let u = random_unitary(12, &mut rng);
        let spec = schmidt_spectrum(&u, d).unwrap();
        assert!((spec.normalized().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(spec.rank() <= 9);
        let s = svn(&spec);
        assert!(s > 0.0 && s <= 9f64.ln());
        let l = slin(&spec);
        assert!(l > 0.0 && l <= 1.0 - 1.0 / 9.0);
    }

    #[test]
    fn local_phase_does_not_change_entropy() {
        let u = cnot_gate().scale(C64::from_polar(1.0, 0.3));
        let e = operator_entanglement(&u, dims(2, 2)).unwrap();
        assert!((e.von_neumann - 2f64.ln()).abs() < 1e-12);
    }
}
