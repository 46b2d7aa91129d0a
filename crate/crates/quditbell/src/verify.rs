//! Named invariant suites. Cases run in parallel and are reported sorted by
//! id, so output does not depend on scheduling. Randomized cases draw from
//! their own stream of the run seed.

use clap::ValueEnum;
use quditbell_core::bell::{bell_qubit, bell_qudit, enumerate_bell_basis, QubitBellIndex, Sign};
use quditbell_core::discriminator::{
    discriminate, discriminate_branches, two_qudit_gate_budget, DiscriminatorConfig, Schedule,
};
use quditbell_core::gates::{
    controlled_u, csum, hd_dag_matrix, hd_matrix, relative_parity_operator, tensor_power,
    xd_matrix, zd_matrix,
};
use quditbell_core::math::{abs, root_of_unity};
use quditbell_core::netcost::{
    baseline_cost, baseline_restore, baseline_transform, protocol_cost, Topology,
};
use quditbell_core::outsourcing::{
    closure_map, decompose_controlled_u, is_permutation, outsource_measure, outsource_sequence,
    parity_circuit_hadamard_form, parity_circuit_reversed_form, zz_conjugation_check_with,
    ConjugationForm, DiagonalUnitarySpec, HadamardPair,
};
use quditbell_core::{Circuit, Complex64, DenseOperator, Gate, StateVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::random::{case_rng, random_spec, random_state, random_unitary, SeededRng};
use crate::report::CaseRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Kernel,
    Gates,
    Bell,
    Discriminator,
    Outsourcing,
    Netcost,
}

type Check = Box<dyn Fn(&mut SeededRng) -> Result<(), String> + Send + Sync>;

pub struct Case {
    pub id: String,
    check: Check,
}

fn case(
    id: String,
    check: impl Fn(&mut SeededRng) -> Result<(), String> + Send + Sync + 'static,
) -> Case {
    Case {
        id,
        check: Box::new(check),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Bell grid shared by the Bell, discriminator and baseline suites.
pub const BELL_GRID: [(usize, usize); 6] = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)];

pub fn cases(suite: Suite) -> Vec<Case> {
    match suite {
        Suite::All => [
            Suite::Kernel,
            Suite::Gates,
            Suite::Bell,
            Suite::Discriminator,
            Suite::Outsourcing,
            Suite::Netcost,
        ]
        .into_iter()
        .flat_map(cases)
        .collect(),
        Suite::Kernel => kernel_cases(),
        Suite::Gates => gate_cases(),
        Suite::Bell => bell_cases(),
        Suite::Discriminator => discriminator_cases(),
        Suite::Outsourcing => outsourcing_cases(),
        Suite::Netcost => netcost_cases(),
    }
}

/// Runs every case of `suite` and returns the records sorted by id.
pub fn run(suite: Suite, seed: u64) -> Vec<CaseRecord> {
    let mut all = cases(suite);
    all.sort_by(|a, b| a.id.cmp(&b.id));
    let mut out: Vec<CaseRecord> = all
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let mut rng = case_rng(seed, i as u64);
            let result = (c.check)(&mut rng);
            CaseRecord {
                id: c.id.clone(),
                passed: result.is_ok(),
                detail: result.err().unwrap_or_default(),
            }
        })
        .collect();
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

/// Full `d^n` matrix of `op` acting on `wires`, built entry by entry from
/// digit arithmetic. Independent of the strided kernel.
pub fn embed_explicit(op: &DenseOperator, wires: &[usize], n: usize) -> DenseOperator {
    let d = op.dim();
    let digits = |mut i: usize| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = i % d;
            i /= d;
        }
        v
    };
    DenseOperator::from_fn(d, n, |r, c| {
        let (dr, dc) = (digits(r), digits(c));
        let untouched = (0..n)
            .filter(|w| !wires.contains(w))
            .all(|w| dr[w] == dc[w]);
        if !untouched {
            return Complex64::new(0.0, 0.0);
        }
        let sub = |ds: &[usize]| wires.iter().fold(0, |acc, &w| acc * d + ds[w]);
        op.entry(sub(&dr), sub(&dc))
    })
    .expect("shape is consistent")
}

fn kernel_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for d in 2..=4 {
        out.push(case(format!("kernel/norm/d={d}"), move |rng| {
            let n = 3;
            let mut s = random_state(rng, d, n).map_err(e)?;
            for arity in [1, 2, 1, 2] {
                let u = random_unitary(rng, d, arity).map_err(e)?;
                let mut wires: Vec<usize> = (0..n).collect();
                wires.shuffle(rng);
                wires.truncate(arity);
                s = s.apply_embedded(&u, &wires).map_err(e)?;
                let dev = (s.norm_sqr().sqrt() - 1.0).abs();
                ensure(dev <= 1e-12, || {
                    format!("norm drift {dev:e} after wires {wires:?}")
                })?;
            }
            Ok(())
        }));
    }
    for d in 2..=3 {
        for n in 1..=3 {
            out.push(case(format!("kernel/kronecker/d={d},n={n}"), move |rng| {
                let s = random_state(rng, d, n).map_err(e)?;
                let mut subsets: Vec<Vec<usize>> = (0..n).map(|a| vec![a]).collect();
                for a in 0..n {
                    for b in 0..n {
                        if a != b {
                            subsets.push(vec![a, b]);
                        }
                    }
                }
                if n == 3 {
                    subsets.push(vec![2, 0, 1]);
                }
                for wires in subsets {
                    let u = random_unitary(rng, d, wires.len()).map_err(e)?;
                    let fast = s.apply_embedded(&u, &wires).map_err(e)?;
                    let full = embed_explicit(&u, &wires, n);
                    let slow = full.apply_to(s.amplitudes()).map_err(e)?;
                    let diff = fast
                        .amplitudes()
                        .iter()
                        .zip(&slow)
                        .map(|(a, b)| abs(a - b))
                        .fold(0.0, f64::max);
                    ensure(diff <= 1e-12, || format!("wires {wires:?}: {diff:e}"))?;
                }
                Ok(())
            }));
        }
    }
    for (d, n) in [(2, 5), (3, 3), (5, 2)] {
        out.push(case(
            format!("kernel/probabilities/d={d},n={n}"),
            move |rng| {
                let s = random_state(rng, d, n).map_err(e)?;
                for w in 0..n {
                    let total: f64 = s.wire_probabilities(w).map_err(e)?.iter().sum();
                    ensure((total - 1.0).abs() <= 1e-10, || {
                        format!("wire {w}: {total}")
                    })?;
                    let measured: f64 = s
                        .measure_wire(w)
                        .map_err(e)?
                        .iter()
                        .map(|m| m.probability)
                        .sum();
                    ensure((measured - 1.0).abs() <= 1e-10, || {
                        format!("wire {w}: {measured}")
                    })?;
                }
                Ok(())
            },
        ));
    }
    out
}

fn gate_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for d in 2..=7 {
        out.push(case(format!("gates/unitary/d={d}"), move |rng| {
            let mut ops = vec![
                ("Z", zd_matrix(d).map_err(e)?),
                ("X", xd_matrix(d).map_err(e)?),
                ("H", hd_matrix(d).map_err(e)?),
                ("HDAG", hd_dag_matrix(d).map_err(e)?),
                ("CSUM", csum(d, false).map_err(e)?),
                ("CSUMDAG", csum(d, true).map_err(e)?),
            ];
            let u = random_unitary(rng, d, 1).map_err(e)?;
            ops.push(("CU", controlled_u(&u, d).map_err(e)?));
            for (name, op) in ops {
                let dev = op.unitarity_deviation();
                ensure(dev <= 1e-12, || format!("{name}: {dev:e}"))?;
            }
            Ok(())
        }));
    }
    for d in 2..=5 {
        for n in 2..=4 {
            out.push(case(format!("gates/commutation/d={d},n={n}"), move |_| {
                let xs = tensor_power(&xd_matrix(d).map_err(e)?, n).map_err(e)?;
                let mut zz = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        zz.push(((a, b), relative_parity_operator(d, n, a, b).map_err(e)?));
                    }
                }
                for (pair, op) in &zz {
                    ensure(xs.commutes_with(op, 1e-12).map_err(e)?, || {
                        format!("X^n vs pair {pair:?}")
                    })?;
                }
                for (i, (p1, a)) in zz.iter().enumerate() {
                    for (p2, b) in &zz[i + 1..] {
                        ensure(a.commutes_with(b, 1e-12).map_err(e)?, || {
                            format!("pairs {p1:?} {p2:?}")
                        })?;
                    }
                }
                Ok(())
            }));
        }
    }
    for d in 2..=4 {
        out.push(case(
            format!("gates/controlled-product/d={d}"),
            move |rng| {
                let parts = vec![
                    random_unitary(rng, d, 1).map_err(e)?,
                    random_unitary(rng, d, 1).map_err(e)?,
                ];
                let split = decompose_controlled_u(&parts)
                    .map_err(e)?
                    .to_operator()
                    .map_err(e)?;
                let mono = monolithic_controlled(&parts)?;
                let diff = split.max_abs_diff(&mono).unwrap_or(f64::INFINITY);
                ensure(diff <= 1e-12, || format!("{diff:e}"))
            },
        ));
    }
    out
}

/// `Σ_j |j⟩⟨j| ⊗ (⊗ parts)^j` on `[system…, ancilla]`.
fn monolithic_controlled(parts: &[DenseOperator]) -> Result<DenseOperator, String> {
    let d = parts[0].dim();
    let mut whole = parts[0].clone();
    for p in &parts[1..] {
        whole = whole.kron(p).map_err(e)?;
    }
    let k = parts.len();
    let mut c = Circuit::new(d, k, 1).map_err(e)?;
    let mut wires = vec![k];
    wires.extend(0..k);
    c.push(Gate::Controlled(whole), wires).map_err(e)?;
    c.to_operator().map_err(e)
}

fn bell_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for (d, n) in BELL_GRID {
        out.push(case(format!("bell/gram/d={d},n={n}"), move |_| {
            let states: Vec<StateVector> = enumerate_bell_basis(d, n)
                .map_err(e)?
                .iter()
                .map(bell_qudit)
                .collect::<Result<_, _>>()
                .map_err(e)?;
            for (i, a) in states.iter().enumerate() {
                for (j, b) in states.iter().enumerate() {
                    let g = a.inner(b).map_err(e)?;
                    let want = if i == j { 1.0 } else { 0.0 };
                    ensure(abs(g - Complex64::new(want, 0.0)) <= 1e-12, || {
                        format!("gram[{i}][{j}] = {g}")
                    })?;
                }
            }
            Ok(())
        }));
        out.push(case(format!("bell/eigen/d={d},n={n}"), move |_| {
            let xs = tensor_power(&xd_matrix(d).map_err(e)?, n).map_err(e)?;
            let mut zz = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    zz.push((a, b, relative_parity_operator(d, n, a, b).map_err(e)?));
                }
            }
            for idx in enumerate_bell_basis(d, n).map_err(e)? {
                let s = bell_qudit(&idx).map_err(e)?;
                let check = |op: &DenseOperator, k: usize| -> Result<bool, String> {
                    let lambda = root_of_unity(k, d);
                    let v = op.apply_to(s.amplitudes()).map_err(e)?;
                    Ok(v.iter()
                        .zip(s.amplitudes())
                        .all(|(x, y)| abs(x - lambda * y) <= 1e-12))
                };
                ensure(check(&xs, idx.p())?, || format!("{idx}: X^n eigenvalue"))?;
                for (a, b, op) in &zz {
                    ensure(check(op, idx.relative_parity(*a, *b))?, || {
                        format!("{idx}: parity of ({a},{b})")
                    })?;
                }
            }
            Ok(())
        }));
    }
    for n in 2..=5 {
        out.push(case(format!("bell/qubit-reduction/n={n}"), move |_| {
            for x in 0..1usize << (n - 1) {
                for sign in [Sign::Plus, Sign::Minus] {
                    let label = QubitBellIndex::new(n, x, sign).map_err(e)?;
                    let a = bell_qubit(n, x, sign).map_err(e)?;
                    let b = bell_qudit(&label.to_qudit()).map_err(e)?;
                    let diff = a.max_abs_diff(&b).map_err(e)?;
                    ensure(diff <= 1e-12, || format!("x={x} {sign:?}: {diff:e}"))?;
                }
            }
            Ok(())
        }));
    }
    out
}

fn discriminator_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for (d, n) in BELL_GRID {
        out.push(case(
            format!("discriminator/round-trip/d={d},n={n}"),
            move |_| {
                let cfg = DiscriminatorConfig::consecutive(n).map_err(e)?;
                for idx in enumerate_bell_basis(d, n).map_err(e)? {
                    let s = bell_qudit(&idx).map_err(e)?;
                    let r = discriminate(&s, &cfg).map_err(e)?;
                    ensure(r.label == idx, || format!("{idx} read as {}", r.label))?;
                    ensure(r.deterministic, || format!("{idx}: outcome not certain"))?;
                    let f = r.post_state.fidelity(&s).map_err(e)?;
                    ensure(f >= 1.0 - 1e-10, || format!("{idx}: fidelity {f}"))?;
                    ensure(r.two_qudit_gates == 3 * n - 2, || {
                        format!("{} two-qudit gates", r.two_qudit_gates)
                    })?;
                }
                Ok(())
            },
        ));
        out.push(case(
            format!("discriminator/order/d={d},n={n}"),
            move |_| {
                let first = DiscriminatorConfig::consecutive(n).map_err(e)?;
                let mut last = first.clone();
                last.schedule = Schedule::ParityFirst;
                for idx in enumerate_bell_basis(d, n).map_err(e)? {
                    let s = bell_qudit(&idx).map_err(e)?;
                    let a = discriminate(&s, &first).map_err(e)?;
                    let b = discriminate(&s, &last).map_err(e)?;
                    ensure(a.ancilla_outcomes == b.ancilla_outcomes, || {
                        format!("{idx}: outcomes differ")
                    })?;
                    let f = a.post_state.fidelity(&b.post_state).map_err(e)?;
                    ensure(f >= 1.0 - 1e-10, || {
                        format!("{idx}: post-states differ ({f})")
                    })?;
                }
                Ok(())
            },
        ));
    }
    out.push(case("discriminator/budget".into(), |_| {
        for n in 2..=12 {
            let cfg = DiscriminatorConfig::consecutive(n).map_err(e)?;
            let g = two_qudit_gate_budget(3, &cfg).map_err(e)?;
            ensure(g == 3 * n - 2, || format!("n={n}: {g}"))?;
        }
        Ok(())
    }));
    for k in 0..5 {
        out.push(case(format!("discriminator/superposition/{k}"), |rng| {
            let (d, n) = (2, 2);
            let s = random_state(rng, d, n).map_err(e)?;
            let cfg = DiscriminatorConfig::consecutive(n).map_err(e)?;
            let branches = discriminate_branches(&s, &cfg).map_err(e)?;
            for idx in enumerate_bell_basis(d, n).map_err(e)? {
                let bell = bell_qudit(&idx).map_err(e)?;
                let want = bell.fidelity(&s).map_err(e)?;
                let mut key = vec![idx.p()];
                key.extend_from_slice(idx.q());
                let got = branches.iter().find(|b| b.outcomes == key);
                match got {
                    Some(b) => {
                        ensure((b.probability - want).abs() <= 1e-10, || {
                            format!("{idx}: {} vs {want}", b.probability)
                        })?;
                        let f = b.post_state.fidelity(&bell).map_err(e)?;
                        ensure(f >= 1.0 - 1e-10, || {
                            format!("{idx}: collapsed fidelity {f}")
                        })?;
                    }
                    None => ensure(want <= 1e-12, || format!("{idx}: missing branch"))?,
                }
            }
            Ok(())
        }));
    }
    out
}

/// Probability of each eigenphase class from explicit projectors.
pub fn projector_distribution(
    spec: &DiagonalUnitarySpec,
    s: &StateVector,
) -> Result<Vec<f64>, String> {
    (0..spec.dim())
        .map(|j| {
            let v = spec.projector(j).apply_to(s.amplitudes()).map_err(e)?;
            Ok(v.iter().map(|a| a.norm_sqr()).sum())
        })
        .collect()
}

fn outsourcing_cases() -> Vec<Case> {
    let mut out = Vec::new();
    for d in 2..=5 {
        for k in 0..10 {
            out.push(case(
                format!("outsourcing/projector-oracle/d={d}/{k:02}"),
                move |rng| {
                    let wires = if d <= 3 { 2 } else { 1 + k % 2 };
                    let spec = random_spec(rng, d, wires).map_err(e)?;
                    let s = random_state(rng, d, wires).map_err(e)?;
                    let got = outsource_measure(&spec, &s).map_err(e)?;
                    let want = projector_distribution(&spec, &s)?;
                    let tv: f64 = got
                        .iter()
                        .zip(&want)
                        .map(|(g, w)| (g.probability - w).abs())
                        .sum::<f64>()
                        / 2.0;
                    ensure(tv <= 1e-10, || format!("total variation {tv:e}"))?;

                    let c = rng.random_range(0..spec.eigenbasis().size());
                    let eigen = spec.eigenvector(c).map_err(e)?;
                    let class = spec.phase_index()[c];
                    let m = outsource_measure(&spec, &eigen).map_err(e)?;
                    ensure(m[class].probability >= 1.0 - 1e-10, || {
                        format!(
                            "eigenvector {c}: class {class} has {}",
                            m[class].probability
                        )
                    })?;
                    let post = m[class].post_state.as_ref().ok_or("no post-state")?;
                    let f = post.fidelity(&eigen).map_err(e)?;
                    ensure(f >= 1.0 - 1e-10, || {
                        format!("eigenvector {c}: fidelity {f}")
                    })
                },
            ));
        }
        out.push(case(format!("outsourcing/compatible/d={d}"), move |rng| {
            let first = random_spec(rng, d, 2).map_err(e)?;
            let classes = (0..d * d).map(|_| rng.random_range(0..d)).collect();
            let second =
                DiagonalUnitarySpec::new(first.eigenbasis().clone(), classes).map_err(e)?;
            ensure(
                first
                    .unitary()
                    .commutes_with(&second.unitary(), 1e-10)
                    .map_err(e)?,
                || "pair does not commute".into(),
            )?;
            let s = random_state(rng, d, 2).map_err(e)?;
            let ab = outsource_sequence(&[&first, &second], &s).map_err(e)?;
            let ba = outsource_sequence(&[&second, &first], &s).map_err(e)?;
            for leaf in &ab {
                let swapped = [leaf.outcomes[1], leaf.outcomes[0]];
                match ba.iter().find(|l| l.outcomes == swapped) {
                    Some(t) => {
                        ensure((t.probability - leaf.probability).abs() <= 1e-10, || {
                            format!("{:?}: probabilities differ", leaf.outcomes)
                        })?;
                        let diff = t.post_state.max_abs_diff(&leaf.post_state).map_err(e)?;
                        ensure(diff <= 1e-8, || {
                            format!("{:?}: states differ {diff:e}", leaf.outcomes)
                        })?;
                    }
                    None => ensure(leaf.probability <= 1e-10, || {
                        format!("{:?} has no reordered twin", leaf.outcomes)
                    })?,
                }
            }
            Ok(())
        }));
    }
    for d in [2, 3, 5] {
        out.push(case(
            format!("outsourcing/control-reversal/d={d}"),
            move |rng| {
                let a = parity_circuit_hadamard_form(d).map_err(e)?;
                let b = parity_circuit_reversed_form(d).map_err(e)?;
                // an ensemble of ten pure states stands in for a mixed input
                for member in 0..10 {
                    let s = random_state(rng, d, 2).map_err(e)?;
                    let joint = s.with_ancillas(1).map_err(e)?;
                    let out_a = a.run(&joint).map_err(e)?;
                    let out_b = b.run(&joint).map_err(e)?;
                    let closed = reversal_closed_form(&s)?;
                    let da = out_a.max_abs_diff(&closed).map_err(e)?;
                    let db = out_b.max_abs_diff(&closed).map_err(e)?;
                    ensure(da <= 1e-10 && db <= 1e-10, || {
                        format!("member {member}: deviations {da:e}, {db:e}")
                    })?;
                }
                Ok(())
            },
        ));
    }
    for d in 2..=7 {
        out.push(case(format!("outsourcing/conjugation/d={d}"), move |_| {
            for j in 0..d {
                for form in [
                    ConjugationForm::AdjointConjugation,
                    ConjugationForm::SwappedShifts,
                ] {
                    let c = zz_conjugation_check_with(d, j, form).map_err(e)?;
                    ensure(c.holds, || format!("{form:?} j={j}: {:e}", c.max_deviation))?;
                }
            }
            Ok(())
        }));
        out.push(case(format!("outsourcing/closure/d={d}"), move |_| {
            for variant in [HadamardPair::HHdag, HadamardPair::HdagH] {
                let m = closure_map(d, variant).map_err(e)?;
                ensure(is_permutation(&m), || {
                    format!("{variant:?} is not a permutation")
                })?;
                for entry in &m {
                    let want = variant.image(&entry.from).map_err(e)?;
                    ensure(entry.to == want, || {
                        format!(
                            "{variant:?}: {} -> {}, expected {want}",
                            entry.from, entry.to
                        )
                    })?;
                }
            }
            Ok(())
        }));
    }
    out
}

/// `Σ α_jk |j⟩|k⟩|k − j⟩` for a two-wire input, ancilla last.
pub fn reversal_closed_form(s: &StateVector) -> Result<StateVector, String> {
    let d = s.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d * d];
    for j in 0..d {
        for k in 0..d {
            amps[(j * d + k) * d + (k + d - j) % d] = s.amplitudes()[j * d + k];
        }
    }
    StateVector::from_amplitudes(d, 3, amps).map_err(e)
}

fn netcost_cases() -> Vec<Case> {
    let mut out = Vec::new();
    out.push(case("netcost/asymptotics".into(), |_| {
        let mut protocol = Vec::new();
        let mut baseline = Vec::new();
        for n in 2..=50 {
            protocol.push(
                protocol_cost(&Topology::linear(n, n - 1).map_err(e)?)
                    .map_err(e)?
                    .qudits_moved as i64,
            );
            baseline.push(
                baseline_cost(&Topology::linear(n, n - 1).map_err(e)?)
                    .map_err(e)?
                    .qudits_moved as i64,
            );
        }
        let diffs = |v: &[i64]| v.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>();
        let p1 = diffs(&protocol);
        ensure(p1.iter().all(|&x| x == p1[0]), || {
            "protocol cost is not linear".into()
        })?;
        let b2 = diffs(&diffs(&baseline));
        ensure(b2.iter().all(|&x| x == b2[0] && x > 0), || {
            "baseline cost is not quadratic".into()
        })
    }));
    out.push(case("netcost/gate-cross-check".into(), |_| {
        for n in 2..=20 {
            for t in [
                Topology::star(n).map_err(e)?,
                Topology::linear(n, 0).map_err(e)?,
            ] {
                let report = protocol_cost(&t).map_err(e)?;
                let pairs = match t.kind {
                    quditbell_core::netcost::TopologyKind::Star => {
                        quditbell_core::discriminator::ParityPairSet::star(n, 0)
                    }
                    quditbell_core::netcost::TopologyKind::Linear => {
                        quditbell_core::discriminator::ParityPairSet::consecutive(n)
                    }
                }
                .map_err(e)?;
                let emitted =
                    two_qudit_gate_budget(2, &DiscriminatorConfig::with_pairs(pairs)).map_err(e)?;
                ensure(report.two_qudit_gates == emitted, || {
                    format!("{} n={n}: {} vs {emitted}", t.kind, report.two_qudit_gates)
                })?;
                let edge_sum: usize = report.edge_tallies.iter().map(|(_, c)| c).sum();
                ensure(report.qudits_moved == edge_sum, || {
                    format!("{} n={n}: edge sum", t.kind)
                })?;
            }
        }
        Ok(())
    }));
    for (d, n) in BELL_GRID {
        out.push(case(
            format!("netcost/reversibility/d={d},n={n}"),
            move |_| {
                for idx in enumerate_bell_basis(d, n).map_err(e)? {
                    let s = bell_qudit(&idx).map_err(e)?;
                    let t = baseline_transform(&s).map_err(e)?;
                    ensure(t.product.is_some(), || {
                        format!("{idx}: not a product state")
                    })?;
                    let back = baseline_restore(&t.state).map_err(e)?;
                    let diff = back.max_abs_diff(&s).map_err(e)?;
                    ensure(diff <= 1e-12, || format!("{idx}: restore error {diff:e}"))?;
                }
                Ok(())
            },
        ));
    }
    out
}
