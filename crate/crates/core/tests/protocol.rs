//! Whole-protocol checks through the public API, against hand-built states.

use quditbell_core::discriminator::{discriminate, DiscriminatorConfig, ParityPairSet};
use quditbell_core::netcost::{baseline_cost, protocol_cost, Topology};
use quditbell_core::{Complex64, StateVector};

fn hand_bell(d: usize, p: usize, offsets: &[usize]) -> StateVector {
    let n = offsets.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); d.pow(n as u32)];
    for j in 0..d {
        let idx = offsets.iter().fold(0, |acc, v| acc * d + (v + j) % d);
        let t = 2.0 * std::f64::consts::PI * ((j * p) % d) as f64 / d as f64;
        amps[idx] = Complex64::new(t.cos(), t.sin()) / (d as f64).sqrt();
    }
    StateVector::from_amplitudes(d, n, amps).unwrap()
}

fn all_offsets(d: usize, n: usize) -> Vec<Vec<usize>> {
    (0..d.pow(n as u32 - 1))
        .map(|k| {
            let mut v = vec![0; n];
            let mut r = k;
            for slot in v.iter_mut().skip(1).rev() {
                *slot = r % d;
                r /= d;
            }
            v
        })
        .collect()
}

#[test]
fn labels_recovered_and_state_kept() {
    for (d, n) in [(2, 2), (2, 4), (3, 2), (3, 3), (4, 3), (5, 2)] {
        for hub in [false, true] {
            let pairs = if hub {
                ParityPairSet::star(n, 0).unwrap()
            } else {
                ParityPairSet::consecutive(n).unwrap()
            };
            let cfg = DiscriminatorConfig::with_pairs(pairs);
            for p in 0..d {
                for v in all_offsets(d, n) {
                    let psi = hand_bell(d, p, &v);
                    let r = discriminate(&psi, &cfg).unwrap();
                    let mut want = vec![p];
                    for b in 1..n {
                        let a = if hub { 0 } else { b - 1 };
                        want.push((v[b] + d - v[a]) % d);
                    }
                    assert_eq!(r.ancilla_outcomes, want, "d={d} p={p} v={v:?}");
                    assert_eq!(r.q(), &v[1..]);
                    assert!(r.deterministic);
                    assert!((r.post_state.fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn superposition_collapses_onto_one_label() {
    let d = 3;
    let a = hand_bell(d, 1, &[0, 2]);
    let b = hand_bell(d, 2, &[0, 1]);
    let amps: Vec<_> = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x + y) / 2f64.sqrt())
        .collect();
    let psi = StateVector::from_amplitudes(d, 2, amps).unwrap();
    let r = discriminate(&psi, &DiscriminatorConfig::consecutive(2).unwrap()).unwrap();
    assert!(!r.deterministic);
    assert!((r.probability - 0.5).abs() < 1e-12);
    let expect = if r.p() == 1 { &a } else { &b };
    assert!((r.post_state.fidelity(expect).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn cost_totals_by_topology() {
    for n in 2..=20 {
        let line = Topology::linear(n, n - 1).unwrap();
        assert_eq!(protocol_cost(&line).unwrap().qudits_moved, 2 * (n - 1));
        assert_eq!(baseline_cost(&line).unwrap().qudits_moved, n * (n - 1));
        let star = Topology::star(n).unwrap();
        assert_eq!(baseline_cost(&star).unwrap().qudits_moved, 2 * (n - 1));
        assert_eq!(protocol_cost(&star).unwrap().two_qudit_gates, 3 * n - 2);
    }
}
