//! Bipartite pure states and their entanglement entropy.

use crate::entanglement::BipartitionDims;
use crate::error::{Error, Result};
use crate::numerics::{eigvalsh, ComplexMatrix, C64};
use crate::spin::{HalfInt, SpinSystem};

/// Tolerance on `| ||psi|| - 1 |` for a valid state.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// A normalized vector on `C^n ⊗ C^m`, amplitude of `|a, c>` at `a·m + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: BipartitionDims,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: BipartitionDims, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::ShapeMismatch {
                op: "PureState::new",
                lhs: (dims.total(), 1),
                rhs: (amplitudes.len(), 1),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> BipartitionDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Applies an operator on the full space; the result must again be normalized.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<PureState> {
        PureState::new(self.dims, u.apply(&self.amplitudes)?)
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

fn product_index(s1: &SpinSystem, s2: &SpinSystem, m1: HalfInt, m2: HalfInt) -> Result<usize> {
    Ok(s1.index_of(m1)? * s2.dim() + s2.index_of(m2)?)
}

/// `|m1> ⊗ |m2>`.
pub fn product_basis_state(
    s1: &SpinSystem,
    s2: &SpinSystem,
    m1: HalfInt,
    m2: HalfInt,
) -> Result<PureState> {
    let dims = BipartitionDims::of_spins(s1, s2)?;
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    amps[product_index(s1, s2, m1, m2)?] = C64::new(1.0, 0.0);
    PureState::new(dims, amps)
}

/// `(|m1, m2> + |-m1, -m2>)/√2`.
pub fn phi_state(s1: &SpinSystem, s2: &SpinSystem, m1: HalfInt, m2: HalfInt) -> Result<PureState> {
    if m1 == HalfInt::ZERO && m2 == HalfInt::ZERO {
        return Err(Error::InvalidParameter(
            "m1 and m2 both zero: the superposition collapses to a single basis state".into(),
        ));
    }
    let dims = BipartitionDims::of_spins(s1, s2)?;
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    amps[product_index(s1, s2, m1, m2)?] = C64::new(a, 0.0);
    amps[product_index(s1, s2, -m1, -m2)?] = C64::new(a, 0.0);
    PureState::new(dims, amps)
}

/// `N^(-1/2) Σ_m |m, -m>` on two equal spins.
pub fn phi_p_state(s1: &SpinSystem, s2: &SpinSystem) -> Result<PureState> {
    if s1 != s2 {
        return Err(Error::InvalidParameter(format!(
            "phi_p needs equal spins, got dimensions {} and {}",
            s1.dim(),
            s2.dim()
        )));
    }
    let dims = BipartitionDims::of_spins(s1, s2)?;
    let n = s1.dim();
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    for i in 0..n {
        // m at index i pairs with -m at index n-1-i.
        amps[i * n + (n - 1 - i)] = a;
    }
    PureState::new(dims, amps)
}

/// Reduced density matrix of the first factor, `n × n`.
pub fn partial_trace_1(psi: &PureState) -> ComplexMatrix {
    let (n, m) = (psi.dims.n(), psi.dims.m());
    let amps = &psi.amplitudes;
    ComplexMatrix::from_fn(n, n, |a, b| {
        (0..m)
            .map(|c| amps[a * m + c] * amps[b * m + c].conj())
            .sum()
    })
}

/// Reduced density matrix of the second factor, `m × m`.
pub fn partial_trace_2(psi: &PureState) -> ComplexMatrix {
    let (n, m) = (psi.dims.n(), psi.dims.m());
    let amps = &psi.amplitudes;
    ComplexMatrix::from_fn(m, m, |c, d| {
        (0..n)
            .map(|a| amps[a * m + c] * amps[a * m + d].conj())
            .sum()
    })
}

/// `-Σ w ln w` over the eigenvalues of a density matrix.
pub fn density_entropy(rho: &ComplexMatrix) -> Result<f64> {
    let s: f64 = eigvalsh(rho)?
        .into_iter()
        .filter(|&w| w > 0.0)
        .map(|w| -w * w.ln())
        .sum();
    Ok(s.max(0.0))
}

/// Entanglement entropy, evaluated on the smaller (first) factor.
pub fn state_entropy(psi: &PureState) -> Result<f64> {
    density_entropy(&partial_trace_1(psi))
}
