//! Non-destructive Bell discrimination.
//!
//! One fresh ancilla is appended (as the last wire), coupled to the system,
//! measured and removed for each observable:
//!
//! * the phase circuit prepares the ancilla with `H_d`, lets it control a
//!   C-SUM onto every system wire and decodes with `H_d†`; on `|Ψ_{p,q}⟩`
//!   the ancilla reads `p`;
//! * the parity circuit for wires `(a, b)` adds wire `b` and subtracts wire
//!   `a` into a `|0⟩` ancilla, which reads the relative parity
//!   `v_b − v_a mod d`.
//!
//! Both kinds of circuit leave Bell states unchanged up to a global phase,
//! so the whole label is read off a single copy.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bell::BellIndex;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::state::StateVector;
use crate::END_TO_END_TOL;

/// Branches with probability at or below this are dropped when
/// enumerating outcome trees.
const BRANCH_FLOOR: f64 = 1e-14;

/// Wire pairs whose relative parities are measured. The pair graph must
/// connect all `n` wires so that every parity can be reconstructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityPairSet {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl ParityPairSet {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidPairs(format!("{n} wires")));
        }
        for &(a, b) in &pairs {
            if a == b {
                return Err(Error::InvalidPairs(format!(
                    "pair ({a}, {b}) repeats a wire"
                )));
            }
            if a >= n || b >= n {
                return Err(Error::InvalidPairs(format!(
                    "pair ({a}, {b}) out of range for {n} wires"
                )));
            }
        }
        let set = Self { n, pairs };
        if let Some(w) = set.unreached_wire() {
            return Err(Error::InvalidPairs(format!(
                "wire {w} is not connected to wire 0"
            )));
        }
        Ok(set)
    }

    /// `(0,1), (1,2), …, (n−2, n−1)`: the chain used on linear networks.
    pub fn consecutive(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// `(hub, j)` for every other wire `j`.
    pub fn star(n: usize, hub: usize) -> Result<Self> {
        Self::new(n, (0..n).filter(|&j| j != hub).map(|j| (hub, j)).collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn unreached_wire(&self) -> Option<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            for &(a, b) in &self.pairs {
                let other = if a == w {
                    b
                } else if b == w {
                    a
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    queue.push_back(other);
                }
            }
        }
        seen.iter().position(|s| !s)
    }
}

/// Order of the Fourier gates on the phase ancilla.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PhaseDecoding {
    /// Prepare with `H_d`, decode with `H_d†`; reads `p`.
    #[default]
    Standard,
    /// Prepare with `H_d†`, decode with `H_d`; reads `−p mod d`.
    Swapped,
}

/// Which observable is measured first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    #[default]
    PhaseFirst,
    ParityFirst,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminatorConfig {
    pub pairs: ParityPairSet,
    pub schedule: Schedule,
    pub decoding: PhaseDecoding,
}

impl DiscriminatorConfig {
    /// Consecutive pairs, phase first, standard decoding.
    pub fn consecutive(n: usize) -> Result<Self> {
        Ok(Self::with_pairs(ParityPairSet::consecutive(n)?))
    }

    pub fn with_pairs(pairs: ParityPairSet) -> Self {
        Self {
            pairs,
            schedule: Schedule::default(),
            decoding: PhaseDecoding::default(),
        }
    }
}

pub fn build_phase_circuit(d: usize, n: usize) -> Result<Circuit> {
    build_phase_circuit_with(d, n, PhaseDecoding::Standard)
}

pub fn build_phase_circuit_with(d: usize, n: usize, decoding: PhaseDecoding) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::InvalidPairs(format!("{n} wires")));
    }
    let mut c = Circuit::new(d, n, 1)?;
    let anc = c.ancilla(0);
    let (prepare, decode) = match decoding {
        PhaseDecoding::Standard => (Gate::H, Gate::HDag),
        PhaseDecoding::Swapped => (Gate::HDag, Gate::H),
    };
    c.push(prepare, vec![anc])?;
    for wire in 0..n {
        c.push(Gate::CSum, vec![anc, wire])?;
    }
    c.push(decode, vec![anc])?;
    Ok(c)
}

/// Relative parity of `pair = (a, b)` into a fresh ancilla: adjoint C-SUM
/// from `b`, then C-SUM from `a`.
pub fn build_parity_circuit(d: usize, n: usize, pair: (usize, usize)) -> Result<Circuit> {
    let (a, b) = pair;
    if a == b {
        return Err(Error::InvalidPairs(format!(
            "pair ({a}, {b}) repeats a wire"
        )));
    }
    if a >= n || b >= n {
        return Err(Error::InvalidPairs(format!(
            "pair ({a}, {b}) out of range for {n} wires"
        )));
    }
    let mut c = Circuit::new(d, n, 1)?;
    let anc = c.ancilla(0);
    c.push(Gate::CSumDag, vec![b, anc])?;
    c.push(Gate::CSum, vec![a, anc])?;
    Ok(c)
}

/// Which observable a circuit measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measurement {
    Phase,
    /// Index into the pair set.
    Parity(usize),
}

/// The circuits of a full discrimination, in execution order.
pub fn discrimination_circuits(
    d: usize,
    cfg: &DiscriminatorConfig,
) -> Result<Vec<(Measurement, Circuit)>> {
    let n = cfg.pairs.n();
    let phase = (
        Measurement::Phase,
        build_phase_circuit_with(d, n, cfg.decoding)?,
    );
    let parities = cfg
        .pairs
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, &pair)| Ok((Measurement::Parity(i), build_parity_circuit(d, n, pair)?)));
    let mut out = Vec::with_capacity(cfg.pairs.pairs().len() + 1);
    match cfg.schedule {
        Schedule::PhaseFirst => {
            out.push(phase);
            for c in parities {
                out.push(c?);
            }
        }
        Schedule::ParityFirst => {
            for c in parities {
                out.push(c?);
            }
            out.push(phase);
        }
    }
    Ok(out)
}

/// Two-qudit gates used by a full discrimination, `n + 2·|pairs|`.
pub fn two_qudit_gate_budget(d: usize, cfg: &DiscriminatorConfig) -> Result<usize> {
    Ok(discrimination_circuits(d, cfg)?
        .iter()
        .map(|(_, c)| c.two_qudit_gate_count())
        .sum())
}

/// Outcome of a discrimination along its most likely branch.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminationResult {
    pub label: BellIndex,
    /// Phase outcome followed by one outcome per pair, in pair order
    /// (independent of the schedule).
    pub ancilla_outcomes: Vec<usize>,
    /// Probability of the returned branch.
    pub probability: f64,
    pub post_state: StateVector,
    /// Every measurement along the branch had probability `≥ 1 − 1e-10`.
    pub deterministic: bool,
    pub two_qudit_gates: usize,
}

impl DiscriminationResult {
    pub fn p(&self) -> usize {
        self.label.p()
    }

    pub fn q(&self) -> &[usize] {
        self.label.q()
    }
}

/// One leaf of the full outcome tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    /// Same layout as [`DiscriminationResult::ancilla_outcomes`].
    pub outcomes: Vec<usize>,
    pub probability: f64,
    pub post_state: StateVector,
}

fn check_input(state: &StateVector, cfg: &DiscriminatorConfig) -> Result<()> {
    if state.n_wires() != cfg.pairs.n() {
        return Err(Error::ShapeMismatch(state.n_wires(), cfg.pairs.n()));
    }
    Ok(())
}

/// Runs `circuit` with a fresh ancilla on `state` and returns the ancilla
/// distribution together with the coupled register.
fn couple(state: &StateVector, circuit: &Circuit) -> Result<(StateVector, Vec<f64>)> {
    let mut joint = state.with_ancillas(1)?;
    circuit.run_in_place(&mut joint)?;
    let anc = circuit.ancilla(0);
    let probs = joint.wire_probabilities(anc)?;
    Ok((joint, probs))
}

fn slot(m: Measurement) -> usize {
    match m {
        Measurement::Phase => 0,
        Measurement::Parity(i) => i + 1,
    }
}

/// Discriminates `state` following the most probable outcome of each
/// measurement (lowest outcome on ties). On Bell inputs every outcome is
/// certain and the post-state equals the input up to a global phase.
///
/// The pair set is validated before any simulation runs.
pub fn discriminate(
    state: &StateVector,
    cfg: &DiscriminatorConfig,
) -> Result<DiscriminationResult> {
    check_input(state, cfg)?;
    let d = state.dim();
    let circuits = discrimination_circuits(d, cfg)?;
    let mut outcomes = vec![0usize; circuits.len()];
    let mut current = state.clone();
    let mut probability = 1.0;
    let mut deterministic = true;
    let mut gates = 0;
    for (m, circuit) in &circuits {
        gates += circuit.two_qudit_gate_count();
        let (joint, probs) = couple(&current, circuit)?;
        let (best, p_best) =
            probs
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (k, p)| if p > acc.1 { (k, p) } else { acc },
                );
        deterministic &= p_best >= 1.0 - END_TO_END_TOL;
        probability *= p_best;
        let (_, post) = joint.project_wire(circuit.ancilla(0), best)?;
        current = post.ok_or(Error::Invalid(
            "ancilla outcome with zero probability".into(),
        ))?;
        outcomes[slot(*m)] = best;
    }
    let q = reconstruct_q(&outcomes[1..], &cfg.pairs, d)?;
    Ok(DiscriminationResult {
        label: BellIndex::new(d, outcomes[0], q)?,
        ancilla_outcomes: outcomes,
        probability,
        post_state: current,
        deterministic,
        two_qudit_gates: gates,
    })
}

/// Every outcome sequence with non-negligible probability, with its
/// collapsed post-state. Ordered lexicographically by execution order.
pub fn discriminate_branches(
    state: &StateVector,
    cfg: &DiscriminatorConfig,
) -> Result<Vec<Branch>> {
    check_input(state, cfg)?;
    let circuits = discrimination_circuits(state.dim(), cfg)?;
    let mut leaves = Vec::new();
    let start = vec![0usize; circuits.len()];
    expand(state.clone(), 1.0, start, &circuits, &mut leaves)?;
    Ok(leaves)
}

fn expand(
    state: StateVector,
    probability: f64,
    outcomes: Vec<usize>,
    remaining: &[(Measurement, Circuit)],
    leaves: &mut Vec<Branch>,
) -> Result<()> {
    let Some(((m, circuit), rest)) = remaining.split_first() else {
        leaves.push(Branch {
            outcomes,
            probability,
            post_state: state,
        });
        return Ok(());
    };
    let (joint, probs) = couple(&state, circuit)?;
    for (k, p) in probs.into_iter().enumerate() {
        if probability * p <= BRANCH_FLOOR {
            continue;
        }
        let (_, post) = joint.project_wire(circuit.ancilla(0), k)?;
        if let Some(post) = post {
            let mut next = outcomes.clone();
            next[slot(*m)] = k;
            expand(post, probability * p, next, rest, leaves)?;
        }
    }
    Ok(())
}

/// Solves `v_0 = 0`, `v_b − v_a ≡ outcome (mod d)` over the pair graph and
/// returns `(v_1, …, v_{n−1})`, i.e. the parity vector `q`.
pub fn reconstruct_q(outcomes: &[usize], pairs: &ParityPairSet, d: usize) -> Result<Vec<usize>> {
    if outcomes.len() != pairs.pairs().len() {
        return Err(Error::InvalidPairs(format!(
            "{} outcomes for {} pairs",
            outcomes.len(),
            pairs.pairs().len()
        )));
    }
    if let Some(&bad) = outcomes.iter().find(|&&o| o >= d) {
        return Err(Error::DigitOutOfRange { digit: bad, dim: d });
    }
    let n = pairs.n();
    let mut v: Vec<Option<usize>> = vec![None; n];
    v[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(w) = queue.pop_front() {
        let vw = v[w].expect("queued wires are assigned");
        for (&(a, b), &o) in pairs.pairs().iter().zip(outcomes) {
            let (other, value) = if a == w {
                (b, (vw + o) % d)
            } else if b == w {
                (a, (vw + d - o) % d)
            } else {
                continue;
            };
            match v[other] {
                None => {
                    v[other] = Some(value);
                    queue.push_back(other);
                }
                Some(existing) if existing != value => {
                    return Err(Error::InconsistentParity(w, other));
                }
                Some(_) => {}
            }
        }
    }
    // ParityPairSet guarantees connectivity
    Ok(v[1..]
        .iter()
        .map(|x| x.expect("pair graph is connected"))
        .collect())
}
