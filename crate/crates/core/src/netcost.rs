//! Communication and gate accounting on star and linear networks.
//!
//! One unit of communication is one qudit crossing one network edge. Every
//! qudit journey is recorded as a [`Route`] (a node path), so totals are sums
//! of per-edge tallies rather than closed-form expressions.
//!
//! Players are 0-based. On a star, player 0 is the hub.
//!
//! * Non-destructive protocol: the phase ancilla makes hub round trips on a
//!   star and a single end-to-end sweep on a line. Each parity ancilla starts
//!   at the second wire of its pair and crosses to the first.
//! * Baseline: every other player ships its qudit to alice and alice ships
//!   it back after the measurement; alice performs every two-qudit gate.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::circuit::Circuit;
use crate::discriminator::{discrimination_circuits, DiscriminatorConfig, ParityPairSet};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::state::StateVector;
use crate::END_TO_END_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    Star,
    Linear,
}

/// `n` players connected as a star (hub = player 0) or a line
/// (`0 — 1 — … — n−1`), with alice at position `alice`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    pub kind: TopologyKind,
    pub n: usize,
    pub alice: usize,
}

impl Topology {
    pub fn new(kind: TopologyKind, n: usize, alice: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidTopology(format!(
                "{n} players; need at least 2"
            )));
        }
        if alice >= n {
            return Err(Error::InvalidTopology(format!(
                "alice at {alice} but only {n} players"
            )));
        }
        Ok(Self { kind, n, alice })
    }

    /// Star with alice at the hub.
    pub fn star(n: usize) -> Result<Self> {
        Self::new(TopologyKind::Star, n, 0)
    }

    pub fn linear(n: usize, alice: usize) -> Result<Self> {
        Self::new(TopologyKind::Linear, n, alice)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self.kind {
            TopologyKind::Star => (1..self.n).map(|j| (0, j)).collect(),
            TopologyKind::Linear => (1..self.n).map(|j| (j - 1, j)).collect(),
        }
    }

    /// Shortest node path from `a` to `b`, both ends included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        match self.kind {
            TopologyKind::Star => match (a, b) {
                _ if a == b => vec![a],
                (0, _) | (_, 0) => vec![a, b],
                _ => vec![a, 0, b],
            },
            TopologyKind::Linear if a <= b => (a..=b).collect(),
            TopologyKind::Linear => (b..=a).rev().collect(),
        }
    }

    fn parity_pairs(&self) -> Result<ParityPairSet> {
        match self.kind {
            TopologyKind::Star => ParityPairSet::star(self.n, 0),
            TopologyKind::Linear => ParityPairSet::consecutive(self.n),
        }
    }

    fn phase_route(&self) -> Vec<usize> {
        match self.kind {
            TopologyKind::Star => {
                let mut path = vec![0];
                for j in 1..self.n {
                    path.extend([j, 0]);
                }
                path
            }
            TopologyKind::Linear => (0..self.n).collect(),
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::Star => "star",
            TopologyKind::Linear => "linear",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Protocol {
    Nondestructive,
    Baseline,
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Nondestructive => "nondestructive",
            Protocol::Baseline => "baseline",
        })
    }
}

/// What a travelling qudit is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    PhaseAncilla,
    /// Ancilla for pair `i` of the parity pair set.
    ParityAncilla(usize),
    /// Player's own qudit on the way to alice.
    Outbound(usize),
    /// Player's qudit returned by alice.
    Return(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub carrier: Carrier,
    pub path: Vec<usize>,
}

impl Route {
    pub fn crossings(&self) -> usize {
        self.path.len().saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostReport {
    pub protocol: Protocol,
    pub topology: Topology,
    pub qudits_moved: usize,
    pub two_qudit_gates: usize,
    /// Two-qudit gates executed at each player's site.
    pub per_player_gate_counts: Vec<usize>,
    /// Crossings per edge, in [`Topology::edges`] order.
    pub edge_tallies: Vec<((usize, usize), usize)>,
    pub routes: Vec<Route>,
}

impl CostReport {
    fn tally(
        protocol: Protocol,
        topology: Topology,
        routes: Vec<Route>,
        per_player_gate_counts: Vec<usize>,
    ) -> Result<Self> {
        let mut edge_tallies: Vec<_> = topology.edges().into_iter().map(|e| (e, 0)).collect();
        for route in &routes {
            for hop in route.path.windows(2) {
                let key = (hop[0].min(hop[1]), hop[0].max(hop[1]));
                let slot = edge_tallies
                    .iter_mut()
                    .find(|(e, _)| *e == key)
                    .ok_or_else(|| {
                        Error::InvalidTopology(format!("no edge {}-{}", hop[0], hop[1]))
                    })?;
                slot.1 += 1;
            }
        }
        Ok(Self {
            protocol,
            topology,
            qudits_moved: edge_tallies.iter().map(|(_, c)| c).sum(),
            two_qudit_gates: per_player_gate_counts.iter().sum(),
            per_player_gate_counts,
            edge_tallies,
            routes,
        })
    }

    /// Crossings made by carriers matching `pred`.
    pub fn moved_by(&self, pred: impl Fn(&Carrier) -> bool) -> usize {
        self.routes
            .iter()
            .filter(|r| pred(&r.carrier))
            .map(Route::crossings)
            .sum()
    }
}

/// Cost of the non-destructive discrimination. Gate sites come from the
/// circuits the discriminator actually emits for this network's pair set.
pub fn protocol_cost(t: &Topology) -> Result<CostReport> {
    let pairs = t.parity_pairs()?;
    let cfg = DiscriminatorConfig::with_pairs(pairs.clone());
    let mut per_player = vec![0usize; t.n];
    // gate counts do not depend on d
    for (_, circuit) in discrimination_circuits(2, &cfg)? {
        for step in circuit.steps().iter().filter(|s| s.wires.len() == 2) {
            let site = step
                .wires
                .iter()
                .find(|&&w| w < t.n)
                .expect("every two-qudit step touches a system wire");
            per_player[*site] += 1;
        }
    }
    let mut routes = vec![Route {
        carrier: Carrier::PhaseAncilla,
        path: t.phase_route(),
    }];
    for (i, &(a, b)) in pairs.pairs().iter().enumerate() {
        routes.push(Route {
            carrier: Carrier::ParityAncilla(i),
            path: t.path(b, a),
        });
    }
    CostReport::tally(Protocol::Nondestructive, *t, routes, per_player)
}

/// Cost of shipping every qudit to alice, disentangling, measuring,
/// re-entangling and shipping back. On a star alice must be the hub.
pub fn baseline_cost(t: &Topology) -> Result<CostReport> {
    if t.kind == TopologyKind::Star && t.alice != 0 {
        return Err(Error::InvalidTopology(format!(
            "baseline on a star is modelled only with alice at the hub (player 0), not player {}",
            t.alice
        )));
    }
    let mut routes = Vec::with_capacity(2 * (t.n - 1));
    for i in (0..t.n).filter(|&i| i != t.alice) {
        routes.push(Route {
            carrier: Carrier::Outbound(i),
            path: t.path(i, t.alice),
        });
        routes.push(Route {
            carrier: Carrier::Return(i),
            path: t.path(t.alice, i),
        });
    }
    let gates = baseline_circuit(2, t.n)?.two_qudit_gate_count()
        + baseline_restore_circuit(2, t.n)?.two_qudit_gate_count();
    let mut per_player = vec![0usize; t.n];
    per_player[t.alice] = gates;
    CostReport::tally(Protocol::Baseline, *t, routes, per_player)
}

/// C-SUM from wire `k−1` onto wire `k` (`|c⟩|t⟩ ↦ |c⟩|t − c⟩`) for
/// `k = n−1` down to 1, then `H_d†` on wire 0.
pub fn baseline_circuit(d: usize, n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(d, n, 0)?;
    for k in (1..n).rev() {
        c.push(Gate::CSum, vec![k - 1, k])?;
    }
    c.push(Gate::HDag, vec![0])?;
    Ok(c)
}

/// Inverse of [`baseline_circuit`].
pub fn baseline_restore_circuit(d: usize, n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(d, n, 0)?;
    c.push(Gate::H, vec![0])?;
    for k in 1..n {
        c.push(Gate::CSumDag, vec![k - 1, k])?;
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineOutcome {
    pub state: StateVector,
    /// Digits `(p, v_1 − v_0, …, v_{n−1} − v_{n−2})` when the output is a
    /// computational basis state; `None` flags a non-Bell input.
    pub product: Option<Vec<usize>>,
}

/// Runs [`baseline_circuit`] on `state`.
pub fn baseline_transform(state: &StateVector) -> Result<BaselineOutcome> {
    let out = baseline_circuit(state.dim(), state.n_wires())?.run(state)?;
    let product = out.as_basis_state(END_TO_END_TOL);
    Ok(BaselineOutcome {
        state: out,
        product,
    })
}

/// Runs [`baseline_restore_circuit`] on `state`.
pub fn baseline_restore(state: &StateVector) -> Result<StateVector> {
    baseline_restore_circuit(state.dim(), state.n_wires())?.run(state)
}
