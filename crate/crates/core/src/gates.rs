//! Generalized qudit gates.
//!
//! Conventions, for wire dimension `d` and `ω = e^{2πi/d}`:
//!
//! * `Z_d |j⟩ = ω^j |j⟩`
//! * `X_d |j⟩ = |j − 1 mod d⟩`
//! * `(H_d)_{jk} = ω^{jk} / √d`, so that `X_d = H_d Z_d H_d†`
//! * C-SUM (control first): `|c⟩|t⟩ ↦ |c⟩|t − c⟩`, its adjoint adds `c`.
//!
//! The C-SUM direction is the one that makes C-SUM equal to the
//! ancilla-controlled `X_d` (`Σ_j |j⟩⟨j| ⊗ X_d^j`).

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math::{root_of_unity, sqrt, Complex64, ZERO};
use crate::operator::{block_size, DenseOperator};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::Dimension(d))
    } else {
        Ok(())
    }
}

/// Clock operator `diag(1, ω, …, ω^{d-1})`.
pub fn zd_matrix(d: usize) -> Result<DenseOperator> {
    check_dim(d)?;
    let diag: Vec<_> = (0..d).map(|j| root_of_unity(j, d)).collect();
    DenseOperator::diagonal(d, &diag)
}

/// Shift operator `|j⟩ ↦ |j − 1⟩`.
pub fn xd_matrix(d: usize) -> Result<DenseOperator> {
    check_dim(d)?;
    DenseOperator::permutation(d, 1, |j| (j + d - 1) % d)
}

/// Fourier gate with entries `ω^{jk}/√d`; `hd_matrix(2)` is the Hadamard.
pub fn hd_matrix(d: usize) -> Result<DenseOperator> {
    check_dim(d)?;
    let norm = 1.0 / sqrt(d as f64);
    DenseOperator::from_fn(d, 1, |j, k| root_of_unity(j * k, d) * norm)
}

pub fn hd_dag_matrix(d: usize) -> Result<DenseOperator> {
    Ok(hd_matrix(d)?.adjoint())
}

/// Two-wire C-SUM, control wire first. `dagger = false` subtracts the
/// control digit from the target, `dagger = true` adds it.
pub fn csum(d: usize, dagger: bool) -> Result<DenseOperator> {
    check_dim(d)?;
    DenseOperator::permutation(d, 2, |idx| {
        let (c, t) = (idx / d, idx % d);
        let t = if dagger { (t + c) % d } else { (t + d - c) % d };
        c * d + t
    })
}

/// `Σ_j |j⟩⟨j| ⊗ u^j` over `d_ancilla` control values, ancilla wire first.
///
/// The payload dimension must match `d_ancilla`, since a register holds
/// wires of a single dimension.
pub fn controlled_u(u: &DenseOperator, d_ancilla: usize) -> Result<DenseOperator> {
    check_dim(d_ancilla)?;
    if u.dim() != d_ancilla {
        return Err(Error::DimensionMismatch(u.dim(), d_ancilla));
    }
    let dev = u.unitarity_deviation();
    if dev > crate::CONSTRUCTION_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let block = u.size();
    block_size(d_ancilla, u.arity() + 1)?;
    let powers: Vec<DenseOperator> = {
        let mut out = Vec::with_capacity(d_ancilla);
        let mut acc = DenseOperator::identity(u.dim(), u.arity())?;
        for _ in 0..d_ancilla {
            let next = acc.matmul(u)?;
            out.push(acc);
            acc = next;
        }
        out
    };
    DenseOperator::from_fn(d_ancilla, u.arity() + 1, |r, c| {
        let (jr, jc) = (r / block, c / block);
        if jr != jc {
            ZERO
        } else {
            powers[jr].entry(r % block, c % block)
        }
    })
}

/// A gate in a [`crate::Circuit`] step. The wire dimension is supplied
/// when the gate is realized.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// `Z_d^power`
    Z {
        power: usize,
    },
    /// `X_d^power`
    X {
        power: usize,
    },
    H,
    HDag,
    /// C-SUM, wires `[control, target]`, target ↦ target − control.
    CSum,
    /// Adjoint C-SUM, wires `[control, target]`, target ↦ target + control.
    CSumDag,
    /// `Σ_j |j⟩⟨j| ⊗ U^j`, wires `[ancilla, payload wires…]`.
    Controlled(DenseOperator),
}

/// Which side of a C-SUM holds the control, for bookkeeping in circuits
/// that mix both directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ControlRole {
    AncillaControlsSystem,
    SystemControlsAncilla,
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::Z { .. } | Gate::X { .. } | Gate::H | Gate::HDag => 1,
            Gate::CSum | Gate::CSumDag => 2,
            Gate::Controlled(u) => u.arity() + 1,
        }
    }

    /// The gate as a matrix on wires of dimension `d`.
    pub fn matrix(&self, d: usize) -> Result<DenseOperator> {
        match self {
            Gate::Z { power } => Ok(zd_matrix(d)?.pow(*power % d)),
            Gate::X { power } => Ok(xd_matrix(d)?.pow(*power % d)),
            Gate::H => hd_matrix(d),
            Gate::HDag => hd_dag_matrix(d),
            Gate::CSum => csum(d, false),
            Gate::CSumDag => csum(d, true),
            Gate::Controlled(u) => controlled_u(u, d),
        }
    }

    /// Short mnemonic used by the circuit text format.
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::Z { .. } => "Z",
            Gate::X { .. } => "X",
            Gate::H => "H",
            Gate::HDag => "HDAG",
            Gate::CSum => "CSUM",
            Gate::CSumDag => "CSUMDAG",
            Gate::Controlled(_) => "CU",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Z { power } | Gate::X { power } if *power != 1 => {
                write!(f, "{}^{}", self.mnemonic(), power)
            }
            _ => f.write_str(self.mnemonic()),
        }
    }
}

/// `op` on wire `wire` of `n` wires, as a full `d^n` operator.
/// Intended for small explicit checks, not for simulation.
pub fn single_wire_full(op: &DenseOperator, wire: usize, n: usize) -> Result<DenseOperator> {
    let id = DenseOperator::identity(op.dim(), 1)?;
    let mut acc: Option<DenseOperator> = None;
    for w in 0..n {
        let factor = if w == wire { op } else { &id };
        acc = Some(match acc {
            None => factor.clone(),
            Some(a) => a.kron(factor)?,
        });
    }
    acc.ok_or(Error::Invalid("zero wires".into()))
}

/// `op` on every one of `n` wires, `op^{⊗n}`.
pub fn tensor_power(op: &DenseOperator, n: usize) -> Result<DenseOperator> {
    let mut acc = DenseOperator::identity(op.dim(), 0)?;
    for _ in 0..n {
        acc = acc.kron(op)?;
    }
    Ok(acc)
}

/// `Z_d†(a) ⊗ Z_d(b)` on `n` wires: diagonal with `ω^{i_b − i_a}`.
pub fn relative_parity_operator(d: usize, n: usize, a: usize, b: usize) -> Result<DenseOperator> {
    if a >= n || b >= n || a == b {
        return Err(Error::InvalidPairs(alloc::format!(
            "({a}, {b}) on {n} wires"
        )));
    }
    let len = block_size(d, n)?;
    let stride = |w: usize| d.pow((n - 1 - w) as u32);
    let diag: Vec<Complex64> = (0..len)
        .map(|i| {
            let da = (i / stride(a)) % d;
            let db = (i / stride(b)) % d;
            root_of_unity(db + d - da, d)
        })
        .collect();
    DenseOperator::diagonal(d, &diag)
}
