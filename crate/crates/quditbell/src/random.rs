//! Seeded random instances. Every generator takes the RNG explicitly so a
//! run is reproducible from its seed.

use anyhow::Result;
use quditbell_core::outsourcing::DiagonalUnitarySpec;
use quditbell_core::{checked_len, orthonormalize_columns, Complex64, DenseOperator, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for case `index` under a run seed.
pub fn case_rng(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Complex Gaussian vector.
pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

/// Haar-random pure state on `n` wires.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize) -> Result<StateVector> {
    let len = checked_len(d, n)?;
    Ok(StateVector::normalized(d, n, gaussian_vector(rng, len))?)
}

/// Haar-random orthonormal columns (Gram-Schmidt on a Gaussian matrix).
pub fn random_unitary<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    arity: usize,
) -> Result<DenseOperator> {
    let size = checked_len(d, arity)?;
    let mut cols: Vec<_> = (0..size).map(|_| gaussian_vector(rng, size)).collect();
    orthonormalize_columns(&mut cols)?;
    Ok(DenseOperator::from_columns(d, arity, &cols)?)
}

/// Random eigenbasis with uniformly drawn eigenphase classes, so larger
/// registers get degenerate classes.
pub fn random_spec<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    wires: usize,
) -> Result<DiagonalUnitarySpec> {
    let basis = random_unitary(rng, d, wires)?;
    let classes = (0..basis.size()).map(|_| rng.random_range(0..d)).collect();
    Ok(DiagonalUnitarySpec::new(basis, classes)?)
}

/// Random single-wire unitary with eigenvalues that are `d`-th roots of
/// unity.
pub fn random_root_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<DenseOperator> {
    Ok(random_spec(rng, d, 1)?.unitary())
}
