//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] stores its entries in row-major order; every reshaping
//! and index convention elsewhere in the crate relies on that. Factorizations
//! are delegated to `faer`, always run sequentially so that results do not
//! depend on the number of threads available.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::linalg::matmul::matmul as faer_matmul;
use faer::{Accum, MatMut, MatRef, Par, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Relative tolerance on `max |h - h^dagger|` accepted by [`eigh`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// A dense complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![ONE; dim])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut out = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            out.data[i * n + i] = d;
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows, e.g. `from_rows(&[[a, b], [c, d]])`.
    pub fn from_rows<R: AsRef<[C64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::InvalidParameter("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(rows.len(), cols, data)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let complex: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)])
            .collect()
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn dagger(&self) -> Self {
        dagger(self)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        matmul(self, rhs)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch {
                op: "apply",
                lhs: self.shape(),
                rhs: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff: shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn view(&self) -> MatRef<'_, C64> {
        MatRef::from_row_major_slice(&self.data, self.rows, self.cols)
    }

    pub(crate) fn from_faer(m: MatRef<'_, C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub: shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Panicking product, for use where the shapes are known to agree.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        matmul(self, rhs).expect("mul: incompatible shapes")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Row-major product `dst = lhs * rhs` on raw slices.
pub(crate) fn gemm_into(dst: &mut [C64], lhs: &[C64], rhs: &[C64], m: usize, k: usize, n: usize) {
    faer_matmul(
        MatMut::from_row_major_slice_mut(dst, m, n),
        Accum::Replace,
        MatRef::from_row_major_slice(lhs, m, k),
        MatRef::from_row_major_slice(rhs, k, n),
        ONE,
        Par::Seq,
    );
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch {
            op: "matmul",
            lhs: a.shape(),
            rhs: b.shape(),
        });
    }
    let mut out = ComplexMatrix::zeros(a.rows, b.cols);
    gemm_into(&mut out.data, &a.data, &b.data, a.rows, a.cols, b.cols);
    Ok(out)
}

/// Kronecker product; row `(i_a * b.rows + i_b)` holds `a[i_a, .] * b[i_b, .]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    let out_cols = ac * bc;
    for i in 0..ar {
        for j in 0..ac {
            let aij = a.data[i * ac + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                let row = (i * br + k) * out_cols + j * bc;
                for (dst, &bkl) in out.data[row..row + bc].iter_mut().zip(b.row(k)) {
                    *dst = aij * bkl;
                }
            }
        }
    }
    out
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.cols, a.rows, |i, j| a[(j, i)].conj())
}

/// Hilbert-Schmidt inner product `Tr(a^dagger b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            op: "hs_inner",
            lhs: a.shape(),
            rhs: b.shape(),
        });
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// Singular values, descending, `min(rows, cols)` of them.
pub fn svd(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let mut values = a
        .view()
        .singular_values()
        .map_err(|_| Error::NoConvergence {
            routine: "svd",
            rows: a.rows,
            cols: a.cols,
            norm: a.frobenius_norm(),
        })?;
    // faer already sorts; the clamp absorbs signed zeros.
    for v in &mut values {
        *v = v.max(0.0);
    }
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigh {
    /// `V diag(g(w)) V^dagger`.
    pub fn reconstruct_with(&self, g: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.values.len();
        let weights: Vec<C64> = self.values.iter().map(|&w| g(w)).collect();
        let v = &self.vectors;
        let scaled = ComplexMatrix::from_fn(n, n, |i, k| v[(i, k)] * weights[k]);
        matmul(&scaled, &dagger(v)).expect("square factors")
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch {
            op: "eigh",
            lhs: h.shape(),
            rhs: (h.cols, h.rows),
        });
    }
    let n = h.rows;
    let mut deviation = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            deviation = deviation.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    let tolerance = HERMITIAN_TOLERANCE * h.max_abs();
    if deviation > tolerance {
        return Err(Error::NotHermitian {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

pub fn eigh(h: &ComplexMatrix) -> Result<Eigh> {
    check_hermitian(h)?;
    let evd = h
        .view()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::NoConvergence {
            routine: "eigh",
            rows: h.rows,
            cols: h.cols,
            norm: h.frobenius_norm(),
        })?;
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    let vectors = ComplexMatrix::from_faer(evd.U());
    Ok(Eigh { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    h.view()
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::NoConvergence {
            routine: "eigvalsh",
            rows: h.rows,
            cols: h.cols,
            norm: h.frobenius_norm(),
        })
}

/// `exp(-i * theta * h)` for Hermitian `h`.
pub fn expi_hermitian(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let evd = eigh(h)?;
    Ok(evd.reconstruct_with(|w| C64::from_polar(1.0, -theta * w)))
}

/// `max |(u^dagger u - I)_ij|`, a cheap drift monitor for products of unitaries.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    assert!(u.is_square(), "unitarity_residual needs a square matrix");
    let n = u.rows;
    let mut gram = ComplexMatrix::zeros(n, n);
    faer_matmul(
        MatMut::from_row_major_slice_mut(&mut gram.data, n, n),
        Accum::Replace,
        u.view().adjoint(),
        u.view(),
        ONE,
        Par::Seq,
    );
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}
