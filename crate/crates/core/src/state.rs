use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::math::{abs, sqrt, Complex64, ONE, ZERO};
use crate::operator::{block_size, DenseOperator};

/// Default ceiling on `d^n_wires`: 2^26 amplitudes (1 GiB of `Complex64`).
pub const DEFAULT_AMPLITUDE_CAP: usize = 1 << 26;

static AMPLITUDE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_AMPLITUDE_CAP);

/// Below this a measurement branch is treated as impossible.
const ZERO_PROBABILITY: f64 = 1e-20;

pub fn amplitude_cap() -> usize {
    AMPLITUDE_CAP.load(Ordering::Relaxed)
}

/// Process-wide override of the amplitude cap.
pub fn set_amplitude_cap(cap: usize) {
    AMPLITUDE_CAP.store(cap, Ordering::Relaxed);
}

/// `d^n_wires` if it fits under the current cap.
pub fn checked_len(dim: usize, n_wires: usize) -> Result<usize> {
    if dim < 2 {
        return Err(Error::Dimension(dim));
    }
    let cap = amplitude_cap();
    let too_large = Error::TooLarge {
        dim,
        wires: n_wires,
        cap,
    };
    match block_size(dim, n_wires) {
        Ok(len) if len <= cap => Ok(len),
        _ => Err(too_large),
    }
}

/// Pure state of `n_wires` wires, each of dimension `dim`.
///
/// Amplitude index `i` has base-`dim` digits `(i_0, …, i_{n-1})` with wire 0
/// the most significant. Every public constructor and operation leaves the
/// state normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dim: usize,
    n_wires: usize,
    amps: Vec<Complex64>,
}

/// One branch of a single-wire computational-basis measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub outcome: usize,
    pub probability: f64,
    /// Renormalized state of the remaining wires; `None` when the branch
    /// has zero probability.
    pub post_state: Option<StateVector>,
}

impl StateVector {
    /// Computational basis state `|digits⟩`.
    pub fn basis(dim: usize, n_wires: usize, digits: &[usize]) -> Result<Self> {
        let len = checked_len(dim, n_wires)?;
        if digits.len() != n_wires {
            return Err(Error::DigitCount {
                expected: n_wires,
                got: digits.len(),
            });
        }
        let index = encode(dim, digits)?;
        let mut amps = vec![ZERO; len];
        amps[index] = ONE;
        Ok(Self { dim, n_wires, amps })
    }

    /// `|0…0⟩`.
    pub fn zero(dim: usize, n_wires: usize) -> Result<Self> {
        let len = checked_len(dim, n_wires)?;
        let mut amps = vec![ZERO; len];
        amps[0] = ONE;
        Ok(Self { dim, n_wires, amps })
    }

    /// Takes amplitudes that are already normalized within `1e-10`.
    pub fn from_amplitudes(dim: usize, n_wires: usize, amps: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_raw(dim, n_wires, amps)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > crate::END_TO_END_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn normalized(dim: usize, n_wires: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = sqrt(amps.iter().map(|a| a.norm_sqr()).sum());
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Self::from_raw(dim, n_wires, amps)
    }

    fn from_raw(dim: usize, n_wires: usize, amps: Vec<Complex64>) -> Result<Self> {
        let len = checked_len(dim, n_wires)?;
        if amps.len() != len {
            return Err(Error::EntryCount {
                expected: len,
                got: amps.len(),
            });
        }
        Ok(Self { dim, n_wires, amps })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> Result<Complex64> {
        if digits.len() != self.n_wires {
            return Err(Error::DigitCount {
                expected: self.n_wires,
                got: digits.len(),
            });
        }
        Ok(self.amps[encode(self.dim, digits)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Base-`d` digits of amplitude index `index`, wire 0 first.
    pub fn digits_of(&self, index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.n_wires];
        let mut rem = index;
        for slot in digits.iter_mut().rev() {
            *slot = rem % self.dim;
            rem /= self.dim;
        }
        digits
    }

    /// Stride of `wire` in the amplitude array.
    #[inline]
    fn stride(&self, wire: usize) -> usize {
        let mut s = 1;
        for _ in wire + 1..self.n_wires {
            s *= self.dim;
        }
        s
    }

    /// `self ⊗ other`, with `other`'s wires appended after ours.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n_wires = self.n_wires + other.n_wires;
        checked_len(self.dim, n_wires)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            dim: self.dim,
            n_wires,
            amps,
        })
    }

    /// Appends `count` ancilla wires in `|0⟩`.
    pub fn with_ancillas(&self, count: usize) -> Result<Self> {
        let n_wires = self.n_wires + count;
        checked_len(self.dim, n_wires)?;
        let block = block_size(self.dim, count)?;
        let mut amps = vec![ZERO; self.amps.len() * block];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i * block] = *a;
        }
        Ok(Self {
            dim: self.dim,
            n_wires,
            amps,
        })
    }

    /// Returns `I ⊗ … ⊗ op ⊗ … ⊗ I |self⟩` with `op` on `wires` (in order).
    pub fn apply_embedded(&self, op: &DenseOperator, wires: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_in_place(op, wires)?;
        Ok(out)
    }

    /// In-place variant of [`StateVector::apply_embedded`]. The state is
    /// left untouched when an error is returned.
    ///
    /// Runs in `O(d^n · nnz(op) / d^k)` time with a `d^k` scratch buffer;
    /// the full `d^n × d^n` matrix is never formed.
    pub fn apply_in_place(&mut self, op: &DenseOperator, wires: &[usize]) -> Result<()> {
        self.check_wires(wires)?;
        if op.dim() != self.dim {
            return Err(Error::DimensionMismatch(op.dim(), self.dim));
        }
        if op.arity() != wires.len() {
            return Err(Error::ArityMismatch {
                arity: op.arity(),
                wires: wires.len(),
            });
        }

        let d = self.dim;
        let block = op.size();
        // offsets[m]: displacement of the amplitude whose target digits spell m
        let target_strides: Vec<usize> = wires.iter().map(|&w| self.stride(w)).collect();
        let offsets: Vec<usize> = (0..block)
            .map(|m| {
                let mut rem = m;
                let mut off = 0;
                for s in target_strides.iter().rev() {
                    off += (rem % d) * s;
                    rem /= d;
                }
                off
            })
            .collect();
        // least significant first, for the odometer below
        let rest_strides: Vec<usize> = (0..self.n_wires)
            .rev()
            .filter(|w| !wires.contains(w))
            .map(|w| self.stride(w))
            .collect();
        let rows = op.sparse_rows();

        let mut counter = vec![0usize; rest_strides.len()];
        let mut base = 0usize;
        let mut input = vec![ZERO; block];
        let outer = self.amps.len() / block;
        for step in 0..outer {
            for (slot, off) in input.iter_mut().zip(&offsets) {
                *slot = self.amps[base + off];
            }
            for (row, off) in rows.iter().zip(&offsets) {
                self.amps[base + off] = row.iter().map(|&(c, v)| v * input[c]).sum();
            }
            if step + 1 == outer {
                break;
            }
            for (digit, s) in counter.iter_mut().zip(&rest_strides) {
                *digit += 1;
                base += s;
                if *digit < d {
                    break;
                }
                *digit = 0;
                base -= d * s;
            }
        }
        Ok(())
    }

    /// Born probabilities of each outcome on `wire`, without projecting.
    pub fn wire_probabilities(&self, wire: usize) -> Result<Vec<f64>> {
        self.check_wires(&[wire])?;
        let stride = self.stride(wire);
        let mut probs = vec![0.0; self.dim];
        for (i, a) in self.amps.iter().enumerate() {
            probs[(i / stride) % self.dim] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projects `wire` onto `|outcome⟩` and removes it. Returns the branch
    /// probability and, when it is non-zero, the renormalized remainder.
    pub fn project_wire(&self, wire: usize, outcome: usize) -> Result<(f64, Option<Self>)> {
        self.check_wires(&[wire])?;
        if outcome >= self.dim {
            return Err(Error::DigitOutOfRange {
                digit: outcome,
                dim: self.dim,
            });
        }
        let stride = self.stride(wire);
        let high = stride * self.dim;
        let mut amps = Vec::with_capacity(self.amps.len() / self.dim);
        for hi in (0..self.amps.len()).step_by(high) {
            let start = hi + outcome * stride;
            amps.extend_from_slice(&self.amps[start..start + stride]);
        }
        let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if probability <= ZERO_PROBABILITY {
            return Ok((probability, None));
        }
        let scale = 1.0 / sqrt(probability);
        for a in amps.iter_mut() {
            *a *= scale;
        }
        let post = Self {
            dim: self.dim,
            n_wires: self.n_wires - 1,
            amps,
        };
        Ok((probability, Some(post)))
    }

    /// Computational-basis measurement of `wire`: every outcome `0..d` in
    /// order with its probability and projected post-state.
    pub fn measure_wire(&self, wire: usize) -> Result<Vec<MeasurementOutcome>> {
        (0..self.dim)
            .map(|outcome| {
                let (probability, post_state) = self.project_wire(wire, outcome)?;
                Ok(MeasurementOutcome {
                    outcome,
                    probability,
                    post_state,
                })
            })
            .collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `Some(⟨self|other⟩ / |⟨self|other⟩|)` when `|⟨self|other⟩| ≥ 1 − tol`,
    /// i.e. `other = phase · self` up to `tol`.
    pub fn equal_up_to_global_phase(&self, other: &Self, tol: f64) -> Result<Option<Complex64>> {
        let overlap = self.inner(other)?;
        let mag = abs(overlap);
        if mag >= 1.0 - tol {
            Ok(Some(overlap / mag))
        } else {
            Ok(None)
        }
    }

    /// Largest entrywise distance between amplitude arrays.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| abs(a - b))
            .fold(0.0, f64::max))
    }

    /// If the state is a single basis ket up to phase (within `tol`), its
    /// digits.
    pub fn as_basis_state(&self, tol: f64) -> Option<Vec<usize>> {
        let (index, amp) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))?;
        if (amp.norm_sqr() - 1.0).abs() > tol {
            return None;
        }
        let rest: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != index)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        (rest <= tol).then(|| self.digits_of(index))
    }

    fn check_wires(&self, wires: &[usize]) -> Result<()> {
        for (i, &w) in wires.iter().enumerate() {
            if w >= self.n_wires {
                return Err(Error::WireOutOfRange {
                    wire: w,
                    wires: self.n_wires,
                });
            }
            if wires[..i].contains(&w) {
                return Err(Error::DuplicateWire(w));
            }
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.n_wires != other.n_wires {
            return Err(Error::ShapeMismatch(self.n_wires, other.n_wires));
        }
        Ok(())
    }
}

fn encode(dim: usize, digits: &[usize]) -> Result<usize> {
    digits.iter().try_fold(0usize, |acc, &digit| {
        if digit >= dim {
            Err(Error::DigitOutOfRange { digit, dim })
        } else {
            Ok(acc * dim + digit)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{xd_matrix, zd_matrix};
    use crate::math::root_of_unity;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn index_of_one(s: &StateVector) -> usize {
        s.amplitudes().iter().position(|a| *a == ONE).unwrap()
    }

    #[test]
    fn basis_encoding() {
        assert_eq!(index_of_one(&StateVector::basis(2, 2, &[0, 0]).unwrap()), 0);
        assert_eq!(index_of_one(&StateVector::basis(3, 2, &[1, 2]).unwrap()), 5);
        assert_eq!(
            index_of_one(&StateVector::basis(2, 3, &[1, 1, 1]).unwrap()),
            7
        );
    }

    #[test]
    fn basis_rejects_bad_digits_and_overflow() {
        assert_eq!(
            StateVector::basis(3, 2, &[1, 3]).unwrap_err(),
            Error::DigitOutOfRange { digit: 3, dim: 3 }
        );
        assert!(matches!(
            StateVector::basis(2, 2, &[1]),
            Err(Error::DigitCount { .. })
        ));
        assert!(matches!(
            StateVector::basis(2, 40, &[0; 40]),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            StateVector::basis(7, 10, &[0; 10]),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            StateVector::basis(1, 2, &[0, 0]),
            Err(Error::Dimension(1))
        ));
    }

    #[test]
    fn x_on_first_wire_flips_msb() {
        let s = StateVector::basis(2, 2, &[0, 0]).unwrap();
        let x = xd_matrix(2).unwrap();
        let out = s.apply_embedded(&x, &[0]).unwrap();
        assert_eq!(out, StateVector::basis(2, 2, &[1, 0]).unwrap());
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let s = StateVector::normalized(3, 3, (0..27).map(|i| c(i as f64, 1.0)).collect()).unwrap();
        let id = DenseOperator::identity(3, 2).unwrap();
        assert_eq!(s.apply_embedded(&id, &[2, 0]).unwrap(), s);
    }

    #[test]
    fn clock_on_second_wire_of_qutrit_pair() {
        let h = FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 9];
        amps[1] = c(h, 0.0); // |01>
        amps[5] = c(h, 0.0); // |12>
        let s = StateVector::from_amplitudes(3, 2, amps).unwrap();
        let out = s.apply_embedded(&zd_matrix(3).unwrap(), &[1]).unwrap();
        let w = root_of_unity(1, 3);
        assert!(abs(out.amplitudes()[1] - w * h) < 1e-15);
        assert!(abs(out.amplitudes()[5] - w * w * h) < 1e-15);
    }

    #[test]
    fn apply_rejects_bad_wires() {
        let s = StateVector::zero(2, 3).unwrap();
        let x = xd_matrix(2).unwrap();
        let id2 = DenseOperator::identity(2, 2).unwrap();
        assert_eq!(
            s.apply_embedded(&x, &[0, 1]).unwrap_err(),
            Error::ArityMismatch { arity: 1, wires: 2 }
        );
        assert_eq!(
            s.apply_embedded(&id2, &[1, 1]).unwrap_err(),
            Error::DuplicateWire(1)
        );
        assert!(matches!(
            s.apply_embedded(&x, &[3]),
            Err(Error::WireOutOfRange { wire: 3, wires: 3 })
        ));
        assert!(matches!(
            s.apply_embedded(&xd_matrix(3).unwrap(), &[0]),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn measure_single_wire() {
        let zero = StateVector::zero(2, 1).unwrap();
        let m = zero.measure_wire(0).unwrap();
        assert_eq!(m[0].probability, 1.0);
        assert_eq!(m[1].probability, 0.0);
        assert!(m[1].post_state.is_none());
        assert_eq!(m[0].post_state.as_ref().unwrap().n_wires(), 0);

        let plus = StateVector::normalized(2, 1, vec![ONE, ONE]).unwrap();
        let m = plus.measure_wire(0).unwrap();
        assert!((m[0].probability - 0.5).abs() < 1e-15);
        assert!((m[1].probability - 0.5).abs() < 1e-15);
    }

    #[test]
    fn measure_middle_wire_removes_it() {
        // (|010> + |111>)/sqrt2 on qubits, measure wire 1 -> outcome 1 with remainder (|00>+|11>)/sqrt2
        let mut amps = vec![ZERO; 8];
        amps[0b010] = ONE;
        amps[0b111] = ONE;
        let s = StateVector::normalized(2, 3, amps).unwrap();
        let m = s.measure_wire(1).unwrap();
        assert!(m[0].probability < 1e-30);
        let post = m[1].post_state.as_ref().unwrap();
        let expected = StateVector::normalized(2, 2, vec![ONE, ZERO, ZERO, ONE]).unwrap();
        assert!(post.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn global_phase_comparison() {
        let psi = StateVector::normalized(2, 2, vec![ONE, ZERO, ZERO, ONE]).unwrap();
        let psi_minus = StateVector::normalized(2, 2, vec![ONE, ZERO, ZERO, -ONE]).unwrap();
        let phase = crate::math::cis(FRAC_PI_4);
        let rotated = StateVector::from_amplitudes(
            2,
            2,
            psi.amplitudes().iter().map(|a| a * phase).collect(),
        )
        .unwrap();

        let same = psi.equal_up_to_global_phase(&psi, 1e-12).unwrap().unwrap();
        assert!(abs(same - ONE) < 1e-15);
        let got = psi
            .equal_up_to_global_phase(&rotated, 1e-12)
            .unwrap()
            .unwrap();
        assert!(abs(got - phase) < 1e-15);
        assert_eq!(
            psi.equal_up_to_global_phase(&psi_minus, 1e-12).unwrap(),
            None
        );
        assert!(matches!(
            psi.equal_up_to_global_phase(&StateVector::zero(2, 3).unwrap(), 1e-12),
            Err(Error::ShapeMismatch(2, 3))
        ));
    }

    #[test]
    fn ancillas_are_appended_in_zero() {
        let s = StateVector::basis(3, 2, &[2, 1]).unwrap();
        let a = s.with_ancillas(1).unwrap();
        assert_eq!(a, StateVector::basis(3, 3, &[2, 1, 0]).unwrap());
        assert_eq!(a, s.tensor(&StateVector::zero(3, 1).unwrap()).unwrap());
    }

    #[test]
    fn as_basis_state_detects_products() {
        let s = StateVector::basis(3, 3, &[2, 0, 1]).unwrap();
        assert_eq!(s.as_basis_state(1e-12), Some(vec![2, 0, 1]));
        let plus = StateVector::normalized(2, 1, vec![ONE, ONE]).unwrap();
        assert_eq!(plus.as_basis_state(1e-12), None);
    }

    #[test]
    fn cap_is_configurable() {
        // keep the cap above anything other tests allocate
        assert!(checked_len(2, 26).is_ok());
        assert!(checked_len(2, 27).is_err());
        assert_eq!(amplitude_cap(), DEFAULT_AMPLITUDE_CAP);
    }
}
