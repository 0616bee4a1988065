//! Von Neumann, classical-quantum conditional, and generalized conditional entropy.
//!
//! Entropies are dimensionless and in nats. The Boltzmann constant only
//! enters when an entropy is turned into an energy (see `speed_limits`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, matrix_func, support_log, support_log_from_spectrum, support_threshold, tensor, ComplexMatrix, C64, DEFAULT_CUTOFF,
};
use crate::states::{BipartiteState, ClassicalQuantumState, DensityMatrix};

/// Maximum allowed disagreement between the two conditional-entropy routes.
pub const DUAL_PATH_TOL: f64 = 1e-8;

/// Support leak above which `supp ρ_AB ⊄ supp (I ⊗ ρ_B)` is reported.
const SUPPORT_LEAK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub fn from_nats(nats: f64) -> Self {
        EntropyValue(nats)
    }

    pub fn nats(self) -> f64 {
        self.0
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nats", self.0)
    }
}

/// `−η(λ) = −λ ln λ` with `0 ln 0 = 0`.
pub(crate) fn eta(l: f64) -> f64 {
    if l <= 0.0 {
        0.0
    } else {
        -l * l.ln()
    }
}

/// `−Σ λ ln λ` over eigenvalues above the support cutoff.
pub fn von_neumann(rho: &DensityMatrix) -> Result<EntropyValue> {
    let spec = eig_hermitian(rho.matrix())?;
    let threshold = support_threshold(&spec, DEFAULT_CUTOFF);
    let s: f64 = spec
        .eigenvalues
        .iter()
        .filter(|&&l| l > threshold)
        .map(|&l| eta(l))
        .sum();
    // clamp round-off into the admissible range [0, ln d]
    Ok(EntropyValue(s.clamp(0.0, (rho.dim() as f64).ln())))
}

/// `S(S|O) = Σ p_i S(Ψ_i)` for a classical-quantum state.
pub fn cq_conditional(cq: &ClassicalQuantumState) -> Result<EntropyValue> {
    let mut s = 0.0;
    for (p, psi) in cq.branches() {
        s += p * von_neumann(psi)?.nats();
    }
    Ok(EntropyValue(s))
}

/// Log of the conditional density, restricted to the joint support.
#[derive(Debug, Clone)]
pub struct ConditionalLog {
    /// `K = P (log ρ_AB − I ⊗ log ρ_B) P`.
    pub log: ComplexMatrix,
    /// Projector onto the support of ρ_AB.
    pub support: ComplexMatrix,
    /// Orthonormal basis of the support, as columns.
    pub support_basis: Vec<Vec<C64>>,
}

impl ConditionalLog {
    /// `K` expressed in the support basis (rank × rank).
    pub fn restricted(&self) -> ComplexMatrix {
        let r = self.support_basis.len();
        let k = &self.log;
        ComplexMatrix::from_fn(r, r, |i, j| {
            let kv = k.apply(&self.support_basis[j]).expect("support basis dimension");
            self.support_basis[i].iter().zip(&kv).map(|(a, b)| a.conj() * b).sum()
        })
    }

    /// `P exp(K) P`.
    pub fn exp(&self) -> Result<ComplexMatrix> {
        let e = matrix_func(&self.log, f64::exp)?;
        self.support.matmul(&e)?.matmul(&self.support)
    }
}

/// Support-restricted `log ρ_AB − I ⊗ log ρ_B`.
pub fn conditional_log(bi: &BipartiteState, cutoff: f64) -> Result<ConditionalLog> {
    let joint = bi.joint().matrix();
    let joint_spec = eig_hermitian(joint)?;
    let joint_thr = support_threshold(&joint_spec, cutoff);
    let joint_log = support_log_from_spectrum(&joint_spec, cutoff)?;

    let rho_b = bi.marginal_b()?;
    let b_log = support_log(rho_b.matrix(), cutoff)?;
    let id_a = ComplexMatrix::identity(bi.dim_a());
    let lifted_log = tensor(&id_a, &b_log.log)?;
    let lifted_support = tensor(&id_a, &b_log.support)?;

    let p = &joint_log.support;
    let outside = &ComplexMatrix::identity(joint.rows()) - &lifted_support;
    let leak = outside.matmul(p)?.frobenius_norm();
    if leak > SUPPORT_LEAK_TOL {
        return Err(Error::SupportMismatch(leak));
    }

    let diff = &joint_log.log - &lifted_log;
    let k = p.matmul(&diff)?.matmul(p)?.hermitian_part();
    let support_basis = (0..joint_spec.dim())
        .filter(|&i| joint_spec.eigenvalues[i] > joint_thr)
        .map(|i| joint_spec.eigenvector(i))
        .collect();
    Ok(ConditionalLog {
        log: k,
        support: joint_log.support,
        support_basis,
    })
}

/// Closed-form conditional density `exp(log ρ_AB − I ⊗ log ρ_B)` on the joint support.
pub fn conditional_density(bi: &BipartiteState, cutoff: f64) -> Result<ComplexMatrix> {
    Ok(conditional_log(bi, cutoff)?.exp()?.hermitian_part())
}

/// Whether [`trotter_conditional_density`] mixes in the maximally mixed state first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regularization {
    None,
    /// `ρ → (1 − ε) ρ + ε I/d`, applied to the joint before taking the marginal.
    Depolarize(f64),
}

fn trotter_factors(bi: &BipartiteState, n: u64, reg: Regularization) -> Result<(BipartiteState, ComplexMatrix)> {
    if n == 0 {
        return Err(Error::InvalidArgument("Trotter step count must be at least 1".into()));
    }
    let bi = match reg {
        Regularization::None => bi.clone(),
        Regularization::Depolarize(eps) => bi.depolarized(eps)?,
    };
    let lifted_b = tensor(&ComplexMatrix::identity(bi.dim_a()), bi.marginal_b()?.matrix())?;
    for m in [bi.joint().matrix(), &lifted_b] {
        let spec = eig_hermitian(m)?;
        let min = spec.min_eigenvalue();
        if min <= support_threshold(&spec, DEFAULT_CUTOFF) {
            return Err(Error::SingularState(min));
        }
    }
    Ok((bi, lifted_b))
}

/// `[ρ_AB^{1/n} (I ⊗ ρ_B)^{−1/n}]^n`.
pub fn trotter_conditional_density(bi: &BipartiteState, n: u64, reg: Regularization) -> Result<ComplexMatrix> {
    let (bi, lifted_b) = trotter_factors(bi, n, reg)?;
    let inv = 1.0 / n as f64;
    let a = matrix_func(bi.joint().matrix(), |x| x.powf(inv))?;
    let b = matrix_func(&lifted_b, |x| x.powf(-inv))?;
    a.matmul(&b)?.powi(n)
}

/// Symmetric splitting `[(I⊗ρ_B)^{−1/2n} ρ_AB^{1/n} (I⊗ρ_B)^{−1/2n}]^n`.
///
/// Second-order in `1/n`, against first order for [`trotter_conditional_density`].
pub fn symmetric_trotter_conditional_density(
    bi: &BipartiteState,
    n: u64,
    reg: Regularization,
) -> Result<ComplexMatrix> {
    let (bi, lifted_b) = trotter_factors(bi, n, reg)?;
    let inv = 1.0 / n as f64;
    let a = matrix_func(bi.joint().matrix(), |x| x.powf(inv))?;
    let half = matrix_func(&lifted_b, |x| x.powf(-0.5 * inv))?;
    half.matmul(&a)?.matmul(&half)?.powi(n)
}

/// Both routes to `S(A|B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConditionalEntropyRoutes {
    /// `S(A,B) − S(B)`.
    pub difference: f64,
    /// `−tr(ρ_AB log ρ_{A|B})`.
    pub log_trace: f64,
}

impl ConditionalEntropyRoutes {
    pub fn discrepancy(&self) -> f64 {
        (self.difference - self.log_trace).abs()
    }
}

pub fn conditional_entropy_routes(bi: &BipartiteState) -> Result<ConditionalEntropyRoutes> {
    let difference = von_neumann(bi.joint())?.nats() - von_neumann(&bi.marginal_b()?)?.nats();
    let k = conditional_log(bi, DEFAULT_CUTOFF)?;
    let log_trace = -bi.joint().matrix().matmul(&k.log)?.trace().re;
    Ok(ConditionalEntropyRoutes { difference, log_trace })
}

/// `S(A|B) = S(A,B) − S(B)`, cross-checked against `−tr(ρ_AB log ρ_{A|B})`.
///
/// May be negative for entangled states.
pub fn generalized_conditional(bi: &BipartiteState) -> Result<EntropyValue> {
    let routes = conditional_entropy_routes(bi)?;
    if routes.discrepancy() > DUAL_PATH_TOL {
        return Err(Error::DualPathMismatch {
            difference: routes.difference,
            log: routes.log_trace,
        });
    }
    Ok(EntropyValue(routes.difference))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{cq_embed, StateVector};
    use std::f64::consts::LN_2;

    #[test]
    fn von_neumann_examples() {
        let pure = DensityMatrix::from_pure(&StateVector::basis(2, 0));
        assert_eq!(von_neumann(&pure).unwrap().nats(), 0.0);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((von_neumann(&mixed).unwrap().nats() - LN_2).abs() < 1e-14);
        let rho = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let oracle = -(0.25f64 * 0.25f64.ln() + 0.75 * 0.75f64.ln());
        assert!((oracle - 0.562_335).abs() < 1e-6);
        assert!((von_neumann(&rho).unwrap().nats() - oracle).abs() < 1e-14);
    }

    fn pure_and_mixed() -> ClassicalQuantumState {
        ClassicalQuantumState::new(vec![
            (0.5, DensityMatrix::from_pure(&StateVector::basis(2, 0))),
            (0.5, DensityMatrix::maximally_mixed(2)),
        ])
        .unwrap()
    }

    #[test]
    fn cq_conditional_examples() {
        let all_pure = ClassicalQuantumState::new(vec![
            (0.3, DensityMatrix::from_pure(&StateVector::basis(2, 0))),
            (0.7, DensityMatrix::from_pure(&StateVector::basis(2, 1))),
        ])
        .unwrap();
        assert_eq!(cq_conditional(&all_pure).unwrap().nats(), 0.0);

        assert!((cq_conditional(&pure_and_mixed()).unwrap().nats() - 0.5 * LN_2).abs() < 1e-14);

        let rho = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let same = ClassicalQuantumState::new(vec![(0.4, rho.clone()), (0.6, rho.clone())]).unwrap();
        let s = cq_conditional(&same).unwrap().nats();
        assert!((s - von_neumann(&rho).unwrap().nats()).abs() < 1e-14);
    }

    #[test]
    fn conditional_density_product_is_rho_a_tensor_identity() {
        let ra = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let rb = DensityMatrix::diagonal(&[0.2, 0.8]).unwrap();
        let bi = BipartiteState::product(&ra, &rb).unwrap();
        let cd = conditional_density(&bi, DEFAULT_CUTOFF).unwrap();
        let expected = tensor(ra.matrix(), &ComplexMatrix::identity(2)).unwrap();
        assert!(cd.distance(&expected) < 1e-8);
    }

    #[test]
    fn conditional_density_bell_has_eigenvalue_two() {
        let bell = BipartiteState::bell();
        let cd = conditional_density(&bell, DEFAULT_CUTOFF).unwrap();
        let expected = bell.joint().matrix().scale_real(2.0);
        assert!(cd.distance(&expected) < 1e-12);
        let spec = eig_hermitian(&cd).unwrap();
        assert!((spec.max_eigenvalue() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_density_of_cq_state_is_block_diagonal() {
        let bi = cq_embed(&pure_and_mixed()).unwrap();
        let cd = conditional_density(&bi, DEFAULT_CUTOFF).unwrap();
        // register is the second factor: entries coupling different register values vanish
        for i in 0..4 {
            for j in 0..4 {
                if i % 2 != j % 2 {
                    assert!(cd[(i, j)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn generalized_conditional_examples() {
        let ra = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let rb = DensityMatrix::maximally_mixed(3);
        let bi = BipartiteState::product(&ra, &rb).unwrap();
        let s = generalized_conditional(&bi).unwrap().nats();
        assert!((s - von_neumann(&ra).unwrap().nats()).abs() < 1e-10);

        let s = generalized_conditional(&BipartiteState::bell()).unwrap().nats();
        assert!((s + LN_2).abs() < 1e-12);

        let cq = pure_and_mixed();
        let s = generalized_conditional(&cq_embed(&cq).unwrap()).unwrap().nats();
        assert!((s - 0.346_574).abs() < 1e-6);
        assert!((s - cq_conditional(&cq).unwrap().nats()).abs() < 1e-10);
    }

    #[test]
    fn trotter_product_state_is_exact() {
        let ra = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let rb = DensityMatrix::diagonal(&[0.4, 0.6]).unwrap();
        let bi = BipartiteState::product(&ra, &rb).unwrap();
        let expected = tensor(ra.matrix(), &ComplexMatrix::identity(2)).unwrap();
        for n in [1, 3, 64] {
            let t = trotter_conditional_density(&bi, n, Regularization::None).unwrap();
            assert!(t.distance(&expected) < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn trotter_rejects_singular_without_regularization() {
        let bell = BipartiteState::bell();
        assert!(matches!(
            trotter_conditional_density(&bell, 4, Regularization::None),
            Err(Error::SingularState(_))
        ));
        assert!(trotter_conditional_density(&bell, 0, Regularization::Depolarize(1e-6)).is_err());
    }

    #[test]
    fn trotter_regularized_bell_limit() {
        let bell = BipartiteState::bell();
        let t = trotter_conditional_density(&bell, 4096, Regularization::Depolarize(1e-6)).unwrap();
        let target = bell.joint().matrix().scale_real(2.0);
        assert!(t.distance(&target) < 1e-3);
    }

    #[test]
    fn zero_log_zero_is_zero() {
        assert_eq!(eta(0.0), 0.0);
        assert_eq!(eta(1.0), 0.0);
    }
}
