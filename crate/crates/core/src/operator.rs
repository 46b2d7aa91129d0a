use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use crate::error::{Error, Result};
use crate::math::{abs, sqrt, Complex64, ONE, ZERO};

/// A `d^k × d^k` complex matrix acting on `k` wires of dimension `d`.
///
/// Row/column index `m` encodes the wire digits with the first wire of the
/// operator as the most significant digit.
#[derive(Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    arity: usize,
    entries: Vec<Complex64>,
}

impl DenseOperator {
    /// Wraps row-major entries without checking unitarity.
    pub fn new(dim: usize, arity: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim));
        }
        let size = block_size(dim, arity)?;
        if entries.len() != size * size {
            return Err(Error::EntryCount {
                expected: size * size,
                got: entries.len(),
            });
        }
        Ok(Self {
            dim,
            arity,
            entries,
        })
    }

    /// Like [`DenseOperator::new`], rejecting matrices with `‖UU† − I‖_max`
    /// above `tol`.
    pub fn unitary(dim: usize, arity: usize, entries: Vec<Complex64>, tol: f64) -> Result<Self> {
        let op = Self::new(dim, arity, entries)?;
        let dev = op.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary(dev));
        }
        Ok(op)
    }

    pub fn identity(dim: usize, arity: usize) -> Result<Self> {
        Self::from_fn(dim, arity, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(
        dim: usize,
        arity: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim));
        }
        let size = block_size(dim, arity)?;
        let mut entries = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in 0..size {
                entries.push(f(r, c));
            }
        }
        Ok(Self {
            dim,
            arity,
            entries,
        })
    }

    /// Builds the operator whose columns are `columns[c]`.
    pub fn from_columns(dim: usize, arity: usize, columns: &[Vec<Complex64>]) -> Result<Self> {
        let size = block_size(dim, arity)?;
        if columns.len() != size || columns.iter().any(|c| c.len() != size) {
            return Err(Error::EntryCount {
                expected: size * size,
                got: columns.iter().map(Vec::len).sum(),
            });
        }
        Self::from_fn(dim, arity, |r, c| columns[c][r])
    }

    /// Permutation matrix sending basis index `c` to `perm(c)`.
    pub fn permutation(dim: usize, arity: usize, perm: impl Fn(usize) -> usize) -> Result<Self> {
        Self::from_fn(dim, arity, |r, c| if perm(c) == r { ONE } else { ZERO })
    }

    pub fn diagonal(dim: usize, diag: &[Complex64]) -> Result<Self> {
        let mut arity = 0;
        let mut size = 1;
        while size < diag.len() {
            size *= dim;
            arity += 1;
        }
        if size != diag.len() {
            return Err(Error::EntryCount {
                expected: size,
                got: diag.len(),
            });
        }
        Self::from_fn(dim, arity, |r, c| if r == c { diag[r] } else { ZERO })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Side length `d^k` of the matrix.
    #[inline]
    pub fn size(&self) -> usize {
        // entries.len() == size², and size is a power of dim that fit on construction
        let mut s = 1;
        for _ in 0..self.arity {
            s *= self.dim;
        }
        s
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.size() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let size = self.size();
        let mut entries = vec![ZERO; size * size];
        for r in 0..size {
            for c in 0..size {
                entries[c * size + r] = self.entries[r * size + c].conj();
            }
        }
        Self {
            dim: self.dim,
            arity: self.arity,
            entries,
        }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_shape(rhs)?;
        let size = self.size();
        let mut entries = vec![ZERO; size * size];
        for r in 0..size {
            for k in 0..size {
                let a = self.entries[r * size + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.entries[k * size..(k + 1) * size];
                let out = &mut entries[r * size..(r + 1) * size];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            dim: self.dim,
            arity: self.arity,
            entries,
        })
    }

    /// `self^power` by repeated multiplication. Exact on permutation and
    /// diagonal structure, so no branch-cut choices are made.
    pub fn pow(&self, power: usize) -> Self {
        let mut acc = Self::identity(self.dim, self.arity).expect("shape already validated");
        for _ in 0..power {
            acc = acc.matmul(self).expect("same shape");
        }
        acc
    }

    /// Tensor product `self ⊗ rhs`; `self` occupies the leading wires.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        let (a, b) = (self.size(), rhs.size());
        let arity = self.arity + rhs.arity;
        block_size(self.dim, arity)?;
        Self::from_fn(self.dim, arity, |r, c| {
            self.entries[(r / b) * a + c / b] * rhs.entries[(r % b) * b + c % b]
        })
    }

    /// `‖U U† − I‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        let size = self.size();
        let mut worst = 0.0_f64;
        for r in 0..size {
            for c in 0..size {
                let mut acc = ZERO;
                for k in 0..size {
                    acc += self.entries[r * size + k] * self.entries[c * size + k].conj();
                }
                if r == c {
                    acc -= ONE;
                }
                worst = worst.max(abs(acc));
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Largest entrywise distance, or `None` when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.dim != other.dim || self.arity != other.arity {
            return None;
        }
        Some(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| abs(a - b))
                .fold(0.0, f64::max),
        )
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }

    /// `true` when `self · other == other · self` within `tol`.
    pub fn commutes_with(&self, other: &Self, tol: f64) -> Result<bool> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        Ok(ab.approx_eq(&ba, tol))
    }

    /// Matrix-vector product on a `d^k` vector.
    pub fn apply_to(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let size = self.size();
        if v.len() != size {
            return Err(Error::EntryCount {
                expected: size,
                got: v.len(),
            });
        }
        Ok((0..size)
            .map(|r| {
                self.entries[r * size..(r + 1) * size]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Non-zero entries of each row, used by the strided kernel to skip the
    /// structural zeros of permutation and diagonal gates.
    pub(crate) fn sparse_rows(&self) -> Vec<Vec<(usize, Complex64)>> {
        let size = self.size();
        (0..size)
            .map(|r| {
                (0..size)
                    .filter_map(|c| {
                        let v = self.entries[r * size + c];
                        (v != ZERO).then_some((c, v))
                    })
                    .collect()
            })
            .collect()
    }

    fn check_same_shape(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch(self.dim, rhs.dim));
        }
        if self.arity != rhs.arity {
            return Err(Error::ArityMismatch {
                arity: self.arity,
                wires: rhs.arity,
            });
        }
        Ok(())
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    /// Panics on shape mismatch; use [`DenseOperator::matmul`] for a
    /// fallible product.
    fn mul(self, rhs: Self) -> DenseOperator {
        self.matmul(rhs).expect("operator shapes differ")
    }
}

impl fmt::Debug for DenseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let size = self.size();
        writeln!(f, "DenseOperator(d={}, k={}) [", self.dim, self.arity)?;
        for r in 0..size {
            write!(f, "  ")?;
            for c in 0..size {
                let z = self.entries[r * size + c];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `d^k`, failing on overflow.
pub(crate) fn block_size(dim: usize, arity: usize) -> Result<usize> {
    u32::try_from(arity)
        .ok()
        .and_then(|k| dim.checked_pow(k))
        .ok_or(Error::TooLarge {
            dim,
            wires: arity,
            cap: usize::MAX,
        })
}

/// Modified Gram-Schmidt over the given columns. Fails if the set is
/// numerically rank-deficient.
pub fn orthonormalize_columns(columns: &mut [Vec<Complex64>]) -> Result<()> {
    for i in 0..columns.len() {
        let (done, rest) = columns.split_at_mut(i);
        let col = &mut rest[0];
        for prev in done.iter() {
            let proj: Complex64 = prev.iter().zip(col.iter()).map(|(p, c)| p.conj() * c).sum();
            for (c, p) in col.iter_mut().zip(prev) {
                *c -= proj * p;
            }
        }
        let norm = sqrt(col.iter().map(|z| z.norm_sqr()).sum());
        if norm < 1e-12 {
            return Err(Error::Invalid("columns are linearly dependent".into()));
        }
        for c in col.iter_mut() {
            *c /= norm;
        }
    }
    Ok(())
}
