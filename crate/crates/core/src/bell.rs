//! Qubit and qudit Bell families.
//!
//! The `n`-qudit Bell state with phase `p` and parities `q = (q_1, …, q_{n−1})`
//! is
//!
//! ```text
//! |Ψ_{p,q}⟩ = d^{-1/2} Σ_j ω^{jp} |j, q_1 + j, …, q_{n−1} + j⟩     (digits mod d)
//! ```
//!
//! Writing `v = (0, q_1, …, q_{n−1})` for the digit offsets of each wire, the
//! state is an eigenvector of `X_d^{⊗n}` with eigenvalue `ω^p` and of
//! `Z_d†(a) ⊗ Z_d(b)` with eigenvalue `ω^{v_b − v_a}`. The difference
//! `v_b − v_a mod d` is the relative parity of wires `(a, b)`.
//!
//! For `d = 2` the family coincides with `(|x⟩ ± |x̄⟩)/√2` via `p = 0` for `+`,
//! `p = 1` for `−`, and `v` = the bits of `x` (whose leading bit is 0).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math::{root_of_unity, sqrt, Complex64, ZERO};
use crate::state::{checked_len, StateVector};

/// Label `(p, q_1, …, q_{n−1})` of an `n`-qudit Bell state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellIndex {
    dim: usize,
    p: usize,
    q: Vec<usize>,
}

impl BellIndex {
    pub fn new(dim: usize, p: usize, q: Vec<usize>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim));
        }
        if q.is_empty() {
            return Err(Error::InvalidLabel("need at least two qudits".into()));
        }
        if p >= dim {
            return Err(Error::InvalidLabel(format!("phase {p} not below {dim}")));
        }
        if let Some(bad) = q.iter().find(|&&x| x >= dim) {
            return Err(Error::InvalidLabel(format!("parity {bad} not below {dim}")));
        }
        Ok(Self { dim, p, q })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qudits, `q.len() + 1`.
    #[inline]
    pub fn n(&self) -> usize {
        self.q.len() + 1
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn q(&self) -> &[usize] {
        &self.q
    }

    /// Digit offsets `(0, q_1, …, q_{n−1})` of each wire.
    pub fn offsets(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.n());
        v.push(0);
        v.extend_from_slice(&self.q);
        v
    }

    /// Relative parity `v_b − v_a mod d` of wires `a`, `b` (0-based).
    pub fn relative_parity(&self, a: usize, b: usize) -> usize {
        let v = self.offsets();
        (v[b] + self.dim - v[a]) % self.dim
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ψ(d={}; p={}; q=", self.dim, self.p)?;
        for (i, x) in self.q.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// Label of `(|x⟩ ± |x̄⟩)/√2` on `n` qubits, `x < 2^{n−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QubitBellIndex {
    pub n: usize,
    pub x: usize,
    pub sign: Sign,
}

impl QubitBellIndex {
    pub fn new(n: usize, x: usize, sign: Sign) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLabel("need at least two qubits".into()));
        }
        if n > usize::BITS as usize || x >= 1usize << (n - 1) {
            return Err(Error::InvalidLabel(format!(
                "x = {x} not below 2^{}",
                n - 1
            )));
        }
        Ok(Self { n, x, sign })
    }

    /// Bitwise complement of `x` over `n` bits.
    pub fn complement(&self) -> usize {
        let mask = if self.n == usize::BITS as usize {
            usize::MAX
        } else {
            (1usize << self.n) - 1
        };
        !self.x & mask
    }

    /// The equivalent `d = 2` qudit label.
    pub fn to_qudit(&self) -> BellIndex {
        let p = match self.sign {
            Sign::Plus => 0,
            Sign::Minus => 1,
        };
        let q = (1..self.n)
            .map(|k| (self.x >> (self.n - 1 - k)) & 1)
            .collect();
        BellIndex::new(2, p, q).expect("bits are in range")
    }

    /// Inverse of [`QubitBellIndex::to_qudit`].
    pub fn from_qudit(idx: &BellIndex) -> Result<Self> {
        if idx.dim() != 2 {
            return Err(Error::DimensionMismatch(idx.dim(), 2));
        }
        let x = idx.q().iter().fold(0usize, |acc, &b| (acc << 1) | b);
        let sign = if idx.p() == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Self::new(idx.n(), x, sign)
    }
}

/// `(|x⟩ ± |x̄⟩)/√2`.
pub fn bell_qubit(n: usize, x: usize, sign: Sign) -> Result<StateVector> {
    let idx = QubitBellIndex::new(n, x, sign)?;
    let len = checked_len(2, n)?;
    let h = 1.0 / sqrt(2.0);
    let mut amps = vec![ZERO; len];
    amps[idx.x] = Complex64::new(h, 0.0);
    amps[idx.complement()] = Complex64::new(
        match sign {
            Sign::Plus => h,
            Sign::Minus => -h,
        },
        0.0,
    );
    StateVector::from_amplitudes(2, n, amps)
}

/// `|Ψ_{p,q}⟩`, normalized.
pub fn bell_qudit(idx: &BellIndex) -> Result<StateVector> {
    let (d, n) = (idx.dim(), idx.n());
    let len = checked_len(d, n)?;
    let offsets = idx.offsets();
    let norm = 1.0 / sqrt(d as f64);
    let mut amps = vec![ZERO; len];
    for j in 0..d {
        let index = offsets.iter().fold(0usize, |acc, v| acc * d + (v + j) % d);
        amps[index] = root_of_unity(j * idx.p(), d) * norm;
    }
    StateVector::from_amplitudes(d, n, amps)
}

/// All `d^n` labels, ordered by `p` then lexicographically by `q`.
pub fn enumerate_bell_basis(d: usize, n: usize) -> Result<Vec<BellIndex>> {
    if n < 2 {
        return Err(Error::InvalidLabel("need at least two qudits".into()));
    }
    let total = checked_len(d, n)?;
    let per_phase = total / d;
    let mut out = Vec::with_capacity(total);
    for p in 0..d {
        for class in 0..per_phase {
            let mut q = vec![0; n - 1];
            let mut rem = class;
            for slot in q.iter_mut().rev() {
                *slot = rem % d;
                rem /= d;
            }
            out.push(BellIndex { dim: d, p, q });
        }
    }
    Ok(out)
}
