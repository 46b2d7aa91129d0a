//! Ancilla-outsourced measurement of observables compatible with a unitary.
//!
//! For a unitary `U = Σ_{j,k} ω^j |j;k⟩⟨j;k|` (with `k` a degeneracy label),
//! the circuit `H_d` (ancilla) → `Σ_j |j⟩⟨j| ⊗ U^j` → `H_d†` (ancilla) leaves
//! the ancilla in `|j⟩` for every eigenvector of class `j`. Measuring the
//! ancilla therefore measures any observable `W = Σ f(j)|j;k⟩⟨j;k|` and
//! leaves `U`-eigenstates untouched.
//!
//! When `U = ⊗_m U_m` the controlled operation factors into one controlled
//! `U_m` per wire, all sharing the ancilla and commuting with each other.

use alloc::vec;
use alloc::vec::Vec;

use crate::bell::{bell_qudit, enumerate_bell_basis, BellIndex};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::{hd_matrix, xd_matrix, Gate};
use crate::math::{root_of_unity, Complex64};
use crate::operator::DenseOperator;
use crate::state::{MeasurementOutcome, StateVector};
use crate::{CONSTRUCTION_TOL, END_TO_END_TOL};

/// A unitary given by its eigenbasis and the eigenphase class `j` (eigenvalue
/// `e^{2πij/d}`) of each eigenvector. Several eigenvectors may share a class.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalUnitarySpec {
    eigenbasis: DenseOperator,
    phase_index: Vec<usize>,
}

impl DiagonalUnitarySpec {
    /// `eigenbasis` holds the eigenvectors as columns.
    pub fn new(eigenbasis: DenseOperator, phase_index: Vec<usize>) -> Result<Self> {
        let dev = eigenbasis.unitarity_deviation();
        if dev > CONSTRUCTION_TOL {
            return Err(Error::NotUnitary(dev));
        }
        if phase_index.len() != eigenbasis.size() {
            return Err(Error::EntryCount {
                expected: eigenbasis.size(),
                got: phase_index.len(),
            });
        }
        let d = eigenbasis.dim();
        if let Some(&bad) = phase_index.iter().find(|&&j| j >= d) {
            return Err(Error::DigitOutOfRange { digit: bad, dim: d });
        }
        Ok(Self {
            eigenbasis,
            phase_index,
        })
    }

    /// Diagonal in the computational basis: basis state `i` has class
    /// `class_of(i)`.
    pub fn computational(
        d: usize,
        wires: usize,
        class_of: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let basis = DenseOperator::identity(d, wires)?;
        let classes = (0..basis.size()).map(class_of).collect();
        Self::new(basis, classes)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.eigenbasis.dim()
    }

    /// Number of system wires the unitary acts on.
    #[inline]
    pub fn wires(&self) -> usize {
        self.eigenbasis.arity()
    }

    pub fn eigenbasis(&self) -> &DenseOperator {
        &self.eigenbasis
    }

    pub fn phase_index(&self) -> &[usize] {
        &self.phase_index
    }

    /// Eigenvector `c` (column of the eigenbasis).
    pub fn eigenvector(&self, c: usize) -> Result<StateVector> {
        let size = self.eigenbasis.size();
        let amps = (0..size).map(|r| self.eigenbasis.entry(r, c)).collect();
        StateVector::from_amplitudes(self.dim(), self.wires(), amps)
    }

    /// `V · diag(ω^{j_c}) · V†`.
    pub fn unitary(&self) -> DenseOperator {
        let d = self.dim();
        let v = &self.eigenbasis;
        let size = v.size();
        let phases: Vec<Complex64> = self
            .phase_index
            .iter()
            .map(|&j| root_of_unity(j, d))
            .collect();
        DenseOperator::from_fn(d, self.wires(), |r, c| {
            (0..size)
                .map(|k| v.entry(r, k) * phases[k] * v.entry(c, k).conj())
                .sum()
        })
        .expect("shape validated on construction")
    }

    /// Projector onto the eigenspace of class `j`.
    pub fn projector(&self, j: usize) -> DenseOperator {
        let v = &self.eigenbasis;
        let size = v.size();
        let members: Vec<usize> = (0..size).filter(|&k| self.phase_index[k] == j).collect();
        DenseOperator::from_fn(self.dim(), self.wires(), |r, c| {
            members
                .iter()
                .map(|&k| v.entry(r, k) * v.entry(c, k).conj())
                .sum()
        })
        .expect("shape validated on construction")
    }
}

/// An observable compatible with a [`DiagonalUnitarySpec`]: class `j` has
/// eigenvalue `relabel[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSpec {
    pub base: DiagonalUnitarySpec,
    relabel: Vec<f64>,
}

impl ObservableSpec {
    /// `f(j) = j`.
    pub fn identity(base: DiagonalUnitarySpec) -> Self {
        let relabel = (0..base.dim()).map(|j| j as f64).collect();
        Self { base, relabel }
    }

    pub fn new(base: DiagonalUnitarySpec, relabel: Vec<f64>) -> Result<Self> {
        if relabel.len() != base.dim() {
            return Err(Error::EntryCount {
                expected: base.dim(),
                got: relabel.len(),
            });
        }
        Ok(Self { base, relabel })
    }

    pub fn value(&self, class: usize) -> f64 {
        self.relabel[class]
    }

    /// Outsourced measurement reporting `(f(j), probability)` per class.
    pub fn measure(&self, state: &StateVector) -> Result<Vec<(f64, MeasurementOutcome)>> {
        Ok(outsource_measure(&self.base, state)?
            .into_iter()
            .map(|m| (self.value(m.outcome), m))
            .collect())
    }
}

/// `H_d` on the ancilla, `Σ_j |j⟩⟨j| ⊗ u^j`, `H_d†` on the ancilla. The
/// ancilla is the wire after `u`'s system wires.
pub fn outsourcing_circuit(u: &DenseOperator) -> Result<Circuit> {
    let k = u.arity();
    let mut c = Circuit::new(u.dim(), k, 1)?;
    let anc = c.ancilla(0);
    c.push(Gate::H, vec![anc])?;
    let mut wires = vec![anc];
    wires.extend(0..k);
    c.push(Gate::Controlled(u.clone()), wires)?;
    c.push(Gate::HDag, vec![anc])?;
    Ok(c)
}

fn run_and_measure(circuit: &Circuit, state: &StateVector) -> Result<Vec<MeasurementOutcome>> {
    let mut joint = state.with_ancillas(1)?;
    circuit.run_in_place(&mut joint)?;
    joint.measure_wire(circuit.ancilla(0))
}

/// Outsourced measurement of the eigenphase class of `spec` on `state`.
/// Outcome `j` carries the weight of class `j`; post-states are the
/// normalized eigenspace projections.
pub fn outsource_measure(
    spec: &DiagonalUnitarySpec,
    state: &StateVector,
) -> Result<Vec<MeasurementOutcome>> {
    check_register(spec.dim(), spec.wires(), state)?;
    let circuit = outsourcing_circuit(&spec.unitary())?;
    run_and_measure(&circuit, state)
}

/// Outsourced measurement of `⊗ parts`, using one controlled gate per wire.
pub fn outsource_measure_product(
    parts: &[DenseOperator],
    state: &StateVector,
) -> Result<Vec<MeasurementOutcome>> {
    let controls = decompose_controlled_u(parts)?;
    check_register(controls.dim(), parts.len(), state)?;
    let anc = controls.ancilla(0);
    let mut c = Circuit::new(controls.dim(), parts.len(), 1)?;
    c.push(Gate::H, vec![anc])?;
    let c = c.then(&controls)?;
    let mut tail = Circuit::new(controls.dim(), parts.len(), 1)?;
    tail.push(Gate::HDag, vec![anc])?;
    run_and_measure(&c.then(&tail)?, state)
}

fn check_register(d: usize, wires: usize, state: &StateVector) -> Result<()> {
    if state.dim() != d {
        return Err(Error::DimensionMismatch(state.dim(), d));
    }
    if state.n_wires() != wires {
        return Err(Error::ShapeMismatch(state.n_wires(), wires));
    }
    Ok(())
}

/// One leaf of a sequence of outsourced measurements.
#[derive(Clone, Debug, PartialEq)]
pub struct JointOutcome {
    pub outcomes: Vec<usize>,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Full outcome tree of outsourcing `specs` one after another, each with
/// its own fresh ancilla.
pub fn outsource_sequence(
    specs: &[&DiagonalUnitarySpec],
    state: &StateVector,
) -> Result<Vec<JointOutcome>> {
    let mut leaves = vec![JointOutcome {
        outcomes: Vec::new(),
        probability: 1.0,
        post_state: state.clone(),
    }];
    for spec in specs {
        let mut next = Vec::new();
        for leaf in leaves {
            for m in outsource_measure(spec, &leaf.post_state)? {
                if let Some(post) = m.post_state {
                    let mut outcomes = leaf.outcomes.clone();
                    outcomes.push(m.outcome);
                    next.push(JointOutcome {
                        outcomes,
                        probability: leaf.probability * m.probability,
                        post_state: post,
                    });
                }
            }
        }
        leaves = next;
    }
    Ok(leaves)
}

/// Controlled `parts[m]` from a shared ancilla onto system wire `m`, one
/// step per part. The product equals `controlled_u(⊗ parts)` and the steps
/// commute.
pub fn decompose_controlled_u(parts: &[DenseOperator]) -> Result<Circuit> {
    let first = parts
        .first()
        .ok_or(Error::Invalid("no parts to control".into()))?;
    let d = first.dim();
    for part in parts {
        if part.dim() != d {
            return Err(Error::DimensionMismatch(part.dim(), d));
        }
        if part.arity() != 1 {
            return Err(Error::ArityMismatch {
                arity: part.arity(),
                wires: 1,
            });
        }
    }
    let mut c = Circuit::new(d, parts.len(), 1)?;
    let anc = c.ancilla(0);
    for (m, part) in parts.iter().enumerate() {
        c.push(Gate::Controlled(part.clone()), vec![anc, m])?;
    }
    Ok(c)
}

/// Relative-parity outsourcing on wires `a = 0`, `b = 1` with the ancilla
/// on wire 2, built from ancilla-controlled C-SUMs conjugated by Fourier
/// gates: `C_{Z†}` on `a` is `H · C-SUM · H†` and `C_Z` on `b` is
/// `H · C-SUM† · H†`.
pub fn parity_circuit_hadamard_form(d: usize) -> Result<Circuit> {
    let mut c = Circuit::new(d, 2, 1)?;
    let anc = c.ancilla(0);
    c.push(Gate::H, vec![anc])?;
    c.push(Gate::HDag, vec![0])?;
    c.push(Gate::HDag, vec![1])?;
    c.push(Gate::CSum, vec![anc, 0])?;
    c.push(Gate::CSumDag, vec![anc, 1])?;
    c.push(Gate::HDag, vec![anc])?;
    c.push(Gate::H, vec![0])?;
    c.push(Gate::H, vec![1])?;
    Ok(c)
}

/// The same measurement with control reversed: the system wires drive the
/// ancilla and no Fourier gates are needed. Maps `|j⟩|k⟩|0⟩ ↦ |j⟩|k⟩|k − j⟩`.
pub fn parity_circuit_reversed_form(d: usize) -> Result<Circuit> {
    crate::discriminator::build_parity_circuit(d, 2, (0, 1))
}

/// Which side of the conjugation identity for `(Z†⊗Z)^j` is checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjugationForm {
    /// `(H⊗H)(X†⊗X)^j(H†⊗H†)`: the form usually quoted. It only holds for
    /// `d = 2` or `2j ≡ 0 (mod d)`.
    Quoted,
    /// `(H†⊗H†)(X†⊗X)^j(H⊗H)`.
    AdjointConjugation,
    /// `(H⊗H)(X⊗X†)^j(H†⊗H†)`.
    SwappedShifts,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub max_deviation: f64,
}

/// Checks the quoted conjugation identity
/// `(Z†⊗Z)^j = (H⊗H)(X†⊗X)^j(H†⊗H†)` at tolerance `1e-12`.
pub fn zz_conjugation_identity_check(d: usize, j: usize) -> Result<IdentityCheck> {
    zz_conjugation_check_with(d, j, ConjugationForm::Quoted)
}

pub fn zz_conjugation_check_with(
    d: usize,
    j: usize,
    form: ConjugationForm,
) -> Result<IdentityCheck> {
    if j >= d {
        return Err(Error::DigitOutOfRange { digit: j, dim: d });
    }
    let z = crate::gates::zd_matrix(d)?;
    let x = xd_matrix(d)?;
    let h = hd_matrix(d)?;
    let lhs = z.adjoint().kron(&z)?.pow(j);
    let hh = h.kron(&h)?;
    let hh_dag = hh.adjoint();
    let (outer, inner) = match form {
        ConjugationForm::Quoted => ((&hh, &hh_dag), x.adjoint().kron(&x)?),
        ConjugationForm::AdjointConjugation => ((&hh_dag, &hh), x.adjoint().kron(&x)?),
        ConjugationForm::SwappedShifts => ((&hh, &hh_dag), x.kron(&x.adjoint())?),
    };
    let rhs = &(outer.0 * &inner.pow(j)) * outer.1;
    let max_deviation = lhs.max_abs_diff(&rhs).expect("same shape");
    Ok(IdentityCheck {
        holds: max_deviation <= CONSTRUCTION_TOL,
        max_deviation,
    })
}

/// Two-qudit Fourier products under which the `n = 2` Bell family is closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HadamardPair {
    /// `H_d ⊗ H_d†`
    HHdag,
    /// `H_d† ⊗ H_d`
    HdagH,
}

impl HadamardPair {
    pub fn operator(self, d: usize) -> Result<DenseOperator> {
        let h = hd_matrix(d)?;
        match self {
            HadamardPair::HHdag => h.kron(&h.adjoint()),
            HadamardPair::HdagH => h.adjoint().kron(&h),
        }
    }

    /// Closed-form image of `(p, q)`: `H⊗H†` sends it to `(−q, p)` and
    /// `H†⊗H` to `(q, −p)`, mod `d`.
    pub fn image(self, idx: &BellIndex) -> Result<BellIndex> {
        let d = idx.dim();
        let (p, q) = (idx.p(), idx.q()[0]);
        match self {
            HadamardPair::HHdag => BellIndex::new(d, (d - q) % d, vec![p]),
            HadamardPair::HdagH => BellIndex::new(d, q, vec![(d - p) % d]),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureEntry {
    pub from: BellIndex,
    pub to: BellIndex,
    /// `⟨Ψ_to| (op) |Ψ_from⟩`, the dropped global phase.
    pub phase: Complex64,
}

/// Applies `variant` to every two-qudit Bell state and identifies the Bell
/// state it lands on. Fails with [`Error::NotBell`] if some image is not a
/// Bell state.
pub fn closure_map(d: usize, variant: HadamardPair) -> Result<Vec<ClosureEntry>> {
    let op = variant.operator(d)?;
    let labels = enumerate_bell_basis(d, 2)?;
    let states: Vec<StateVector> = labels.iter().map(bell_qudit).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(labels.len());
    for (from, state) in labels.iter().zip(&states) {
        let image = state.apply_embedded(&op, &[0, 1])?;
        let mut best = (0.0_f64, None);
        for (to, target) in labels.iter().zip(&states) {
            let overlap = target.inner(&image)?;
            let mag = crate::math::abs(overlap);
            if mag > best.0 {
                best = (mag, Some((to, overlap)));
            }
        }
        match best {
            (mag, Some((to, overlap))) if mag >= 1.0 - END_TO_END_TOL => out.push(ClosureEntry {
                from: from.clone(),
                to: to.clone(),
                phase: overlap / mag,
            }),
            (mag, _) => return Err(Error::NotBell(mag)),
        }
    }
    Ok(out)
}

/// `true` if the entries form a bijection on the labels.
pub fn is_permutation(entries: &[ClosureEntry]) -> bool {
    let mut targets: Vec<&BellIndex> = entries.iter().map(|e| &e.to).collect();
    targets.sort();
    targets.dedup();
    targets.len() == entries.len()
}
