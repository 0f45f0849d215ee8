//! Coupled kicked tops.
//!
//! One kick period is
//!
//! ```text
//! U_T = U_12(ε) · [(U_1^k U_1^f) ⊗ (U_2^k U_2^f)]
//! U_i^f = exp(-i (π/2) J_y),  U_i^k = exp(-i k/(2j) J_z²),
//! U_12(ε) = exp(-i ε/√(j1 j2) J_z1 J_z2)
//! ```
//!
//! The product-space index of |m1, m2> is (m1 + j1)·M + (m2 + j2).

use std::f64::consts::FRAC_PI_2;

use crate::entanglement::BipartitionDims;
use crate::error::{Error, Result};
use crate::numerics::{
    expi_hermitian, gemm_into, kron, matmul, unitarity_residual, ComplexMatrix, C64,
};
use crate::spin::{jy, HalfInt, SpinSystem};

/// Largest unitarity residual tolerated while iterating powers.
pub const DRIFT_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickedTopParams {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub k1: f64,
    pub k2: f64,
    pub epsilon: f64,
}

impl KickedTopParams {
    pub fn new(j1: HalfInt, j2: HalfInt, k1: f64, k2: f64, epsilon: f64) -> Result<Self> {
        if j1 < HalfInt::HALF || j2 < HalfInt::HALF {
            return Err(Error::InvalidParameter(format!(
                "both spins must be at least 1/2, got j1 = {j1}, j2 = {j2}"
            )));
        }
        if j1 > j2 {
            return Err(Error::InvalidParameter(format!(
                "j1 = {j1} must not exceed j2 = {j2}"
            )));
        }
        for (name, v) in [("k1", k1), ("k2", k2), ("epsilon", epsilon)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} is not finite"
                )));
            }
        }
        Ok(Self {
            j1,
            j2,
            k1,
            k2,
            epsilon,
        })
    }

    /// Both tops share the kick strength `k`.
    pub fn uniform(j1: HalfInt, j2: HalfInt, k: f64, epsilon: f64) -> Result<Self> {
        Self::new(j1, j2, k, k, epsilon)
    }

    pub fn spin1(&self) -> SpinSystem {
        SpinSystem::new(self.j1).expect("validated")
    }

    pub fn spin2(&self) -> SpinSystem {
        SpinSystem::new(self.j2).expect("validated")
    }

    pub fn dims(&self) -> BipartitionDims {
        BipartitionDims::of_spins(&self.spin1(), &self.spin2()).expect("j1 <= j2")
    }
}

/// Free precession `exp(-i (π/2) J_y)`.
pub fn free_rotation(s: &SpinSystem) -> Result<ComplexMatrix> {
    expi_hermitian(&jy(s), FRAC_PI_2)
}

fn torsion_phases(s: &SpinSystem, k: f64) -> Vec<C64> {
    if s.two_j() == 0 {
        return vec![C64::new(1.0, 0.0)];
    }
    let scale = k / s.two_j() as f64;
    s.m_values()
        .map(|m| C64::from_polar(1.0, -scale * m * m))
        .collect()
}

/// Torsion `exp(-i k/(2j) J_z²)`, diagonal.
pub fn torsion(s: &SpinSystem, k: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&torsion_phases(s, k))
}

fn zz_phases(s1: &SpinSystem, s2: &SpinSystem, strength: f64) -> Vec<C64> {
    let mut out = Vec::with_capacity(s1.dim() * s2.dim());
    for m1 in s1.m_values() {
        for m2 in s2.m_values() {
            out.push(C64::from_polar(1.0, -strength * m1 * m2));
        }
    }
    out
}

/// Spin-spin coupling `exp(-i ε/√(j1 j2) J_z1 J_z2)`, diagonal on the product space.
pub fn coupling(s1: &SpinSystem, s2: &SpinSystem, epsilon: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&coupling_phases(s1, s2, epsilon))
}

fn coupling_phases(s1: &SpinSystem, s2: &SpinSystem, epsilon: f64) -> Vec<C64> {
    let norm = (s1.j_value() * s2.j_value()).sqrt();
    let strength = if norm > 0.0 { epsilon / norm } else { 0.0 };
    zz_phases(s1, s2, strength)
}

/// `exp(-i α J_z1 ⊗ J_z2)` without the 1/√(j1 j2) scaling.
pub fn diagonal_coupling(s1: &SpinSystem, s2: &SpinSystem, alpha: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&zz_phases(s1, s2, alpha))
}

/// `exp(-i p J_z1) ⊗ exp(-i p J_z2)`; carries no operator entanglement.
pub fn product_rotation(s1: &SpinSystem, s2: &SpinSystem, p: f64) -> ComplexMatrix {
    let phase = |s: &SpinSystem| -> Vec<C64> {
        s.m_values().map(|m| C64::from_polar(1.0, -p * m)).collect()
    };
    kron(
        &ComplexMatrix::from_diagonal(&phase(s1)),
        &ComplexMatrix::from_diagonal(&phase(s2)),
    )
}

/// Single-top kick `U^k U^f`.
pub fn single_top(s: &SpinSystem, k: f64) -> Result<ComplexMatrix> {
    let rot = free_rotation(s)?;
    let phases = torsion_phases(s, k);
    let n = s.dim();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| phases[i] * rot[(i, j)]))
}

/// Dense Floquet matrix, assembled in the literal factor order.
pub fn floquet(p: &KickedTopParams) -> Result<ComplexMatrix> {
    let (s1, s2) = (p.spin1(), p.spin2());
    let u1 = matmul(&torsion(&s1, p.k1), &free_rotation(&s1)?)?;
    let u2 = matmul(&torsion(&s2, p.k2), &free_rotation(&s2)?)?;
    matmul(&coupling(&s1, &s2, p.epsilon), &kron(&u1, &u2))
}

/// Something that can left-multiply a matrix by a fixed square unitary.
pub trait Propagator {
    fn dim(&self) -> usize;

    /// `self · x`.
    fn left_multiply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix>;
}

impl Propagator for ComplexMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn left_multiply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        matmul(self, x)
    }
}

/// The Floquet operator kept in factored form.
///
/// Left multiplication by `C · (A ⊗ B)` costs `N·M·(N+M)` per column instead
/// of `(N·M)²`, which is what makes long power sequences affordable.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    params: KickedTopParams,
    top1: ComplexMatrix,
    top2: ComplexMatrix,
    coupling: Vec<C64>,
}

impl FloquetOperator {
    pub fn new(params: &KickedTopParams) -> Result<Self> {
        let (s1, s2) = (params.spin1(), params.spin2());
        Ok(Self {
            params: *params,
            top1: single_top(&s1, params.k1)?,
            top2: single_top(&s2, params.k2)?,
            coupling: coupling_phases(&s1, &s2, params.epsilon),
        })
    }

    pub fn params(&self) -> &KickedTopParams {
        &self.params
    }

    pub fn dims(&self) -> BipartitionDims {
        self.params.dims()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let local = kron(&self.top1, &self.top2);
        let d = local.rows();
        ComplexMatrix::from_fn(d, d, |i, j| self.coupling[i] * local[(i, j)])
    }
}

impl Propagator for FloquetOperator {
    fn dim(&self) -> usize {
        self.coupling.len()
    }

    fn left_multiply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.top1.rows();
        let m = self.top2.rows();
        if x.rows() != n * m {
            return Err(Error::ShapeMismatch {
                op: "floquet left_multiply",
                lhs: (n * m, n * m),
                rhs: x.shape(),
            });
        }
        let cols = x.cols();
        let src = x.as_slice();

        // Second factor acts on each contiguous M x cols block.
        let mut partial = vec![C64::new(0.0, 0.0); src.len()];
        let block = m * cols;
        for a in 0..n {
            gemm_into(
                &mut partial[a * block..(a + 1) * block],
                self.top2.as_slice(),
                &src[a * block..(a + 1) * block],
                m,
                m,
                cols,
            );
        }

        // First factor acts on the leading index of the (N, M*cols) view.
        let mut out = vec![C64::new(0.0, 0.0); src.len()];
        gemm_into(&mut out, self.top1.as_slice(), &partial, n, n, block);

        for (row, phase) in out.chunks_mut(cols).zip(&self.coupling) {
            row.iter_mut().for_each(|z| *z *= phase);
        }
        ComplexMatrix::new(n * m, cols, out)
    }
}

/// One sampled power `U^n` together with its unitarity residual.
#[derive(Debug, Clone)]
pub struct PowerSample {
    pub n: usize,
    pub matrix: ComplexMatrix,
    pub residual: f64,
}

/// Iterator over `U^stride, U^(2·stride), ...` up to `n_max`, built by
/// repeated left multiplication. Stops after the first drift error.
pub struct PowerSequence<'a, P: Propagator + ?Sized> {
    propagator: &'a P,
    current: ComplexMatrix,
    step: usize,
    n_max: usize,
    stride: usize,
    failed: bool,
}

pub fn power_sequence<P: Propagator + ?Sized>(
    u: &P,
    n_max: usize,
    sample_stride: usize,
) -> Result<PowerSequence<'_, P>> {
    if n_max == 0 || sample_stride == 0 {
        return Err(Error::InvalidParameter(format!(
            "n_max ({n_max}) and sample_stride ({sample_stride}) must be positive"
        )));
    }
    Ok(PowerSequence {
        propagator: u,
        current: ComplexMatrix::identity(u.dim()),
        step: 0,
        n_max,
        stride: sample_stride,
        failed: false,
    })
}

impl<P: Propagator + ?Sized> Iterator for PowerSequence<'_, P> {
    type Item = Result<PowerSample>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.step + self.stride > self.n_max {
            return None;
        }
        for _ in 0..self.stride {
            match self.propagator.left_multiply(&self.current) {
                Ok(next) => self.current = next,
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
        }
        self.step += self.stride;
        let residual = unitarity_residual(&self.current);
        if residual.is_nan() || residual > DRIFT_LIMIT {
            self.failed = true;
            return Some(Err(Error::UnitarityDrift {
                step: self.step,
                residual,
                limit: DRIFT_LIMIT,
            }));
        }
        Some(Ok(PowerSample {
            n: self.step,
            matrix: self.current.clone(),
            residual,
        }))
    }
}
