//! Spin-j angular momentum in the J_z eigenbasis.
//!
//! Basis vectors are ordered by ascending magnetic quantum number,
//! m = -j, -j+1, ..., +j, so the array index of |j, m> is m + j.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, C64, ONE, ZERO};

/// An exact half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn integer(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Accepts only exact multiples of 1/2.
    pub fn from_f64(x: f64) -> Result<Self> {
        let twice = 2.0 * x;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > 1e15 {
            return Err(Error::InvalidParameter(format!(
                "{x} is not a half-integer"
            )));
        }
        Ok(HalfInt(twice as i64))
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;

    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Parses `"10"`, `"1.5"` or `"3/2"`.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad half-integer {s:?}")))?;
            return match den.trim() {
                "1" => Ok(HalfInt::integer(num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(Error::InvalidParameter(format!("bad half-integer {s:?}"))),
            };
        }
        let x: f64 = s
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad half-integer {s:?}")))?;
        HalfInt::from_f64(x)
    }
}

impl From<HalfInt> for f64 {
    fn from(h: HalfInt) -> f64 {
        h.value()
    }
}

/// A single spin of quantum number j, Hilbert space dimension 2j + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinSystem {
    two_j: u32,
}

impl SpinSystem {
    pub fn new(j: HalfInt) -> Result<Self> {
        if j.twice() < 0 || j.twice() > u32::MAX as i64 - 1 {
            return Err(Error::InvalidParameter(format!(
                "spin j = {j} must be >= 0"
            )));
        }
        Ok(Self {
            two_j: j.twice() as u32,
        })
    }

    pub const fn from_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    /// Spin of integer quantum number `j`.
    pub const fn integer(j: u32) -> Self {
        Self { two_j: 2 * j }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(self.two_j as i64)
    }

    pub fn j_value(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Magnetic quantum number at basis index `i`.
    pub fn m_at(&self, i: usize) -> f64 {
        i as f64 - self.j_value()
    }

    /// All m values in basis order.
    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |i| self.m_at(i))
    }

    /// Basis index m + j.
    pub fn index_of(&self, m: HalfInt) -> Result<usize> {
        let offset = m.twice() + self.two_j as i64;
        if offset < 0 || offset > 2 * self.two_j as i64 || offset % 2 != 0 {
            return Err(Error::QuantumNumberOutOfRange {
                m: m.value(),
                j: self.j_value(),
            });
        }
        Ok((offset / 2) as usize)
    }
}

pub fn jz(s: &SpinSystem) -> ComplexMatrix {
    let diag: Vec<C64> = s.m_values().map(|m| C64::new(m, 0.0)).collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// Matrix elements <j, m+1| J_+ |j, m> = sqrt(j(j+1) - m(m+1)), indexed by the lower state.
fn raising_elements(s: &SpinSystem) -> Vec<f64> {
    let j = s.j_value();
    (0..s.dim().saturating_sub(1))
        .map(|i| {
            let m = s.m_at(i);
            (j * (j + 1.0) - m * (m + 1.0)).sqrt()
        })
        .collect()
}

/// J_+ has its nonzero band just below the diagonal: row i+1, column i.
pub fn jplus(s: &SpinSystem) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(s.dim(), s.dim());
    for (i, a) in raising_elements(s).into_iter().enumerate() {
        out[(i + 1, i)] = C64::new(a, 0.0);
    }
    out
}

pub fn jminus(s: &SpinSystem) -> ComplexMatrix {
    jplus(s).dagger()
}

/// J_x = (J_+ + J_-)/2.
pub fn jx(s: &SpinSystem) -> ComplexMatrix {
    let n = s.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, a) in raising_elements(s).into_iter().enumerate() {
        out[(i + 1, i)] = C64::new(a / 2.0, 0.0);
        out[(i, i + 1)] = C64::new(a / 2.0, 0.0);
    }
    out
}

/// J_y = (J_+ - J_-)/(2i).
pub fn jy(s: &SpinSystem) -> ComplexMatrix {
    let n = s.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, a) in raising_elements(s).into_iter().enumerate() {
        // J_+ term at (i+1, i): a / (2i) = -i a/2; J_- term at (i, i+1): -a / (2i) = +i a/2.
        out[(i + 1, i)] = C64::new(0.0, -a / 2.0);
        out[(i, i + 1)] = C64::new(0.0, a / 2.0);
    }
    out
}

/// Column vector |j, m>.
pub fn basis_state(s: &SpinSystem, m: HalfInt) -> Result<Vec<C64>> {
    let idx = s.index_of(m)?;
    let mut v = vec![ZERO; s.dim()];
    v[idx] = ONE;
    Ok(v)
}
