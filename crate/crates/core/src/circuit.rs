use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gates::{ControlRole, Gate};
use crate::operator::{block_size, DenseOperator};
use crate::state::StateVector;

/// A gate together with the wires it acts on, in gate order.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub gate: Gate,
    pub wires: Vec<usize>,
}

impl Step {
    pub fn new(gate: Gate, wires: Vec<usize>) -> Self {
        Self { gate, wires }
    }
}

/// Ordered gate list over `system_wires` system wires followed by
/// `ancilla_count` ancilla wires, all of dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    dim: usize,
    system_wires: usize,
    ancilla_count: usize,
    steps: Vec<Step>,
}

impl Circuit {
    pub fn new(dim: usize, system_wires: usize, ancilla_count: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension(dim));
        }
        Ok(Self {
            dim,
            system_wires,
            ancilla_count,
            steps: Vec::new(),
        })
    }

    /// Appends a step after checking arity and wire range.
    pub fn push(&mut self, gate: Gate, wires: Vec<usize>) -> Result<&mut Self> {
        if gate.arity() != wires.len() {
            return Err(Error::ArityMismatch {
                arity: gate.arity(),
                wires: wires.len(),
            });
        }
        if let Gate::Controlled(u) = &gate {
            if u.dim() != self.dim {
                return Err(Error::DimensionMismatch(u.dim(), self.dim));
            }
        }
        let total = self.total_wires();
        for (i, &w) in wires.iter().enumerate() {
            if w >= total {
                return Err(Error::WireOutOfRange {
                    wire: w,
                    wires: total,
                });
            }
            if wires[..i].contains(&w) {
                return Err(Error::DuplicateWire(w));
            }
        }
        self.steps.push(Step::new(gate, wires));
        Ok(self)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn system_wires(&self) -> usize {
        self.system_wires
    }

    #[inline]
    pub fn ancilla_count(&self) -> usize {
        self.ancilla_count
    }

    #[inline]
    pub fn total_wires(&self) -> usize {
        self.system_wires + self.ancilla_count
    }

    /// Index of the `k`-th ancilla wire.
    #[inline]
    pub fn ancilla(&self, k: usize) -> usize {
        self.system_wires + k
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Replaces the step list; each step is revalidated.
    pub fn with_steps(&self, steps: Vec<Step>) -> Result<Self> {
        let mut out = Self::new(self.dim, self.system_wires, self.ancilla_count)?;
        for s in steps {
            out.push(s.gate, s.wires)?;
        }
        Ok(out)
    }

    /// Number of steps acting on exactly two wires.
    pub fn two_qudit_gate_count(&self) -> usize {
        self.steps.iter().filter(|s| s.wires.len() == 2).count()
    }

    /// Role of a two-wire controlled step: whether its control wire is an
    /// ancilla. `None` for single-wire gates.
    pub fn control_role(&self, step: &Step) -> Option<ControlRole> {
        if step.wires.len() < 2 {
            return None;
        }
        Some(if step.wires[0] >= self.system_wires {
            ControlRole::AncillaControlsSystem
        } else {
            ControlRole::SystemControlsAncilla
        })
    }

    /// Concatenates `other` after `self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim
            || other.system_wires != self.system_wires
            || other.ancilla_count != self.ancilla_count
        {
            return Err(Error::Invalid("circuits have different registers".into()));
        }
        let mut out = self.clone();
        out.steps.extend(other.steps.iter().cloned());
        Ok(out)
    }

    /// Applies every step to `state`, which must already include the
    /// ancilla wires.
    pub fn run(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        self.run_in_place(&mut out)?;
        Ok(out)
    }

    pub fn run_in_place(&self, state: &mut StateVector) -> Result<()> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch(state.dim(), self.dim));
        }
        if state.n_wires() != self.total_wires() {
            return Err(Error::ShapeMismatch(state.n_wires(), self.total_wires()));
        }
        for step in &self.steps {
            let m = step.gate.matrix(self.dim)?;
            state.apply_in_place(&m, &step.wires)?;
        }
        Ok(())
    }

    /// The full `d^N × d^N` unitary of the circuit, built column by column
    /// from basis-state simulations. Only for small registers.
    pub fn to_operator(&self) -> Result<DenseOperator> {
        let n = self.total_wires();
        let size = block_size(self.dim, n)?;
        let mut columns = Vec::with_capacity(size);
        let mut digits = alloc::vec![0usize; n];
        for col in 0..size {
            let mut rem = col;
            for slot in digits.iter_mut().rev() {
                *slot = rem % self.dim;
                rem /= self.dim;
            }
            let basis = StateVector::basis(self.dim, n, &digits)?;
            columns.push(self.run(&basis)?.into_amplitudes());
        }
        DenseOperator::from_columns(self.dim, n, &columns)
    }
}
