//! Reproducible random states, unitaries and Hamiltonians.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`; each trial of a sweep uses its own stream
//! (`set_stream(trial)`), so trial `i` is the same whatever runs before it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, C64};
use crate::states::{BipartiteState, ClassicalQuantumState, DensityMatrix, StateVector};

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// GUE-distributed Hamiltonian.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ginibre(rng, dim, dim).hermitian_part()
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

pub fn random_state(rng: &mut impl Rng, dim: usize) -> StateVector {
    StateVector::normalized((0..dim).map(|_| gaussian(rng)).collect()).expect("gaussian vector is nonzero")
}

/// `G G† / tr` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density(rng: &mut impl Rng, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).expect("Wishart matrix is a valid state")
}

fn random_simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Classical-quantum state with random weights and random branch states of random rank.
pub fn random_cq(rng: &mut impl Rng, branches: usize, dim: usize) -> ClassicalQuantumState {
    let p = random_simplex(rng, branches);
    let parts = p
        .into_iter()
        .map(|w| {
            let rank = rng.random_range(1..=dim);
            (w, random_density(rng, dim, rank))
        })
        .collect();
    ClassicalQuantumState::new(parts).expect("random cq state is valid")
}

/// `Σ w_i ρ_A^i ⊗ ρ_B^i`.
pub fn random_separable(rng: &mut impl Rng, dim_a: usize, dim_b: usize, terms: usize) -> BipartiteState {
    let w = random_simplex(rng, terms);
    let d = dim_a * dim_b;
    let mut acc = ComplexMatrix::zeros(d, d);
    for wi in w {
        let (rank_a, rank_b) = (rng.random_range(1..=dim_a), rng.random_range(1..=dim_b));
        let ra = random_density(rng, dim_a, rank_a);
        let rb = random_density(rng, dim_b, rank_b);
        let t = ra.tensor(&rb).expect("small dimensions");
        acc = &acc + &t.matrix().scale_real(wi);
    }
    let joint = DensityMatrix::new(acc).expect("convex combination of states");
    BipartiteState::new(joint, dim_a, dim_b).expect("dimensions agree")
}

/// Random joint state of the given rank (rank 1 gives a generically entangled pure state).
pub fn random_bipartite(rng: &mut impl Rng, dim_a: usize, dim_b: usize, rank: usize) -> BipartiteState {
    let joint = random_density(rng, dim_a * dim_b, rank);
    BipartiteState::new(joint, dim_a, dim_b).expect("dimensions agree")
}
