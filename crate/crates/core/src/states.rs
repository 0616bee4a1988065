//! Validated quantum states and the measurement-completion projector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, partial_trace, tensor, tensor_vec, ComplexMatrix, Keep, C64};

/// Absolute tolerance for every state-validity check.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl TryFrom<Vec<[f64; 2]>> for StateVector {
    type Error = Error;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        StateVector::new(v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl From<StateVector> for Vec<[f64; 2]> {
    fn from(s: StateVector) -> Self {
        s.amplitudes.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { amplitudes })
    }

    /// Rescales to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidState(format!("cannot normalize vector of norm {n}")));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect())
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut a = vec![C64::new(0.0, 0.0); dim];
        a[index] = C64::new(1.0, 0.0);
        StateVector { amplitudes: a }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        StateVector {
            amplitudes: tensor_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// `U|self⟩` for a unitary `U`, renormalized against round-off.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<StateVector> {
        StateVector::normalized(u.apply(&self.amplitudes)?)
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn with_global_phase(&self, phase: f64) -> StateVector {
        let p = C64::from_polar(1.0, phase);
        StateVector {
            amplitudes: self.amplitudes.iter().map(|z| z * p).collect(),
        }
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        DensityMatrix::new(m)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.mat
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, all to [`STATE_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let defect = mat.hermitian_defect();
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {defect:.3e})")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let spec = eig_hermitian(&mat)?;
        if spec.min_eigenvalue() < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                spec.min_eigenvalue()
            )));
        }
        Ok(DensityMatrix {
            mat: mat.hermitian_part(),
        })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        DensityMatrix { mat: psi.projector() }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        validate_probabilities(probs)?;
        Ok(DensityMatrix {
            mat: ComplexMatrix::from_real_diag(probs),
        })
    }

    /// `Σ w_i ρ_i`.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let weights: Vec<f64> = parts.iter().map(|(w, _)| *w).collect();
        validate_probabilities(&weights)?;
        let dim = parts[0].1.dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch("mixture of states of different dimension".into()));
            }
            acc = &acc + &rho.mat.scale_real(*w);
        }
        DensityMatrix::new(acc)
    }

    /// `(1 − ε) ρ + ε I/d`.
    pub fn depolarized(&self, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidArgument(format!("mixing weight {eps} outside [0, 1]")));
        }
        let d = self.dim();
        let mixed = &self.mat.scale_real(1.0 - eps) + &ComplexMatrix::identity(d).scale_real(eps / d as f64);
        DensityMatrix::new(mixed)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.mat)?.eigenvalues)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        let m = u.matmul(&self.mat)?.matmul(&u.adjoint())?;
        DensityMatrix::new(m)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix {
            mat: tensor(&self.mat, &other.mat)?,
        })
    }
}

fn validate_probabilities(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProbabilities("no entries".into()));
    }
    if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
        return Err(Error::InvalidProbabilities(format!("entry {x} is not a probability")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidProbabilities(format!("sum {total} differs from 1")));
    }
    Ok(())
}

/// `Σ_i p_i |i⟩⟨i| ⊗ Ψ_i`, stored as its branches.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalQuantumState {
    branches: Vec<(f64, DensityMatrix)>,
}

impl ClassicalQuantumState {
    pub fn new(branches: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let probs: Vec<f64> = branches.iter().map(|(p, _)| *p).collect();
        validate_probabilities(&probs)?;
        let dim = branches[0].1.dim();
        if branches.iter().any(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch("branch states differ in dimension".into()));
        }
        Ok(ClassicalQuantumState { branches })
    }

    pub fn branches(&self) -> &[(f64, DensityMatrix)] {
        &self.branches
    }

    pub fn system_dim(&self) -> usize {
        self.branches[0].1.dim()
    }

    /// `Σ p_i Ψ_i`, the state of the system alone.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        DensityMatrix::mixture(&self.branches)
    }
}

/// Joint state on `A ⊗ B`; conditioning is always on the second factor `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    joint: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    pub fn new(joint: DensityMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 || dim_a * dim_b != joint.dim() {
            return Err(Error::DimensionMismatch(format!(
                "joint dimension {} is not {dim_a}x{dim_b}",
                joint.dim()
            )));
        }
        Ok(BipartiteState { joint, dim_a, dim_b })
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        Self::new(a.tensor(b)?, a.dim(), b.dim())
    }

    /// `|Φ⁺⟩⟨Φ⁺|` on two qubits.
    pub fn bell() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = C64::new(0.0, 0.0);
        let phi = StateVector {
            amplitudes: vec![C64::new(s, 0.0), z, z, C64::new(s, 0.0)],
        };
        BipartiteState {
            joint: DensityMatrix::from_pure(&phi),
            dim_a: 2,
            dim_b: 2,
        }
    }

    pub fn joint(&self) -> &DensityMatrix {
        &self.joint
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn marginal_a(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(partial_trace(self.joint.matrix(), self.dim_a, self.dim_b, Keep::A)?)
    }

    pub fn marginal_b(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(partial_trace(self.joint.matrix(), self.dim_a, self.dim_b, Keep::B)?)
    }

    pub fn depolarized(&self, eps: f64) -> Result<Self> {
        Ok(BipartiteState {
            joint: self.joint.depolarized(eps)?,
            ..self.clone()
        })
    }
}

/// Paired orthonormal bases `{ψ_I}` of the system and `{A_I}` of the apparatus.
#[derive(Debug, Clone)]
pub struct CorrelationBasis {
    system: Vec<StateVector>,
    apparatus: Vec<StateVector>,
}

impl CorrelationBasis {
    pub fn new(system: Vec<StateVector>, apparatus: Vec<StateVector>) -> Result<Self> {
        if system.len() != apparatus.len() || system.is_empty() {
            return Err(Error::BasisSizeMismatch {
                system: system.len(),
                apparatus: apparatus.len(),
            });
        }
        check_orthonormal(&system)?;
        check_orthonormal(&apparatus)?;
        Ok(CorrelationBasis { system, apparatus })
    }

    /// Computational bases of both factors, truncated to `n` pairs.
    pub fn computational(d_system: usize, d_apparatus: usize, n: usize) -> Result<Self> {
        if n > d_system || n > d_apparatus {
            return Err(Error::BasisSizeMismatch {
                system: d_system.min(n),
                apparatus: d_apparatus.min(n),
            });
        }
        Self::new(
            (0..n).map(|i| StateVector::basis(d_system, i)).collect(),
            (0..n).map(|i| StateVector::basis(d_apparatus, i)).collect(),
        )
    }

    pub fn system(&self) -> &[StateVector] {
        &self.system
    }

    pub fn apparatus(&self) -> &[StateVector] {
        &self.apparatus
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    pub fn system_dim(&self) -> usize {
        self.system[0].dim()
    }

    pub fn apparatus_dim(&self) -> usize {
        self.apparatus[0].dim()
    }
}

fn check_orthonormal(vs: &[StateVector]) -> Result<()> {
    let dim = vs[0].dim();
    if vs.iter().any(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch("basis vectors differ in dimension".into()));
    }
    let mut worst = 0.0_f64;
    for (i, u) in vs.iter().enumerate() {
        for (j, v) in vs.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((u.inner(v) - target).norm());
        }
    }
    if worst > STATE_TOL {
        return Err(Error::NotOrthonormal(worst));
    }
    Ok(())
}

/// `M = Σ_I |ψ_I ⊗ A_I⟩⟨ψ_I ⊗ A_I|`, ordered system ⊗ apparatus.
pub fn build_measurement_operator(basis: &CorrelationBasis) -> ComplexMatrix {
    let d = basis.system_dim() * basis.apparatus_dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for (psi, a) in basis.system.iter().zip(&basis.apparatus) {
        let joint = psi.tensor(a);
        m = &m + &joint.projector();
    }
    m
}

/// `P = ⟨Ξ|M|Ξ⟩`, clamped into [0, 1] after checking it lies there to [`STATE_TOL`].
pub fn measurement_probability(xi: &StateVector, m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() || m.rows() != xi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} against operator {}x{}",
            xi.dim(),
            m.rows(),
            m.cols()
        )));
    }
    let p = inner(xi.amplitudes(), &m.apply(xi.amplitudes())?).re;
    if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "expectation {p} outside [0, 1]; operator is not a projector"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// `tr_A |Ξ⟩⟨Ξ|` for `Ξ` on system ⊗ apparatus.
pub fn reduce_over_apparatus(xi: &StateVector, d_system: usize, d_apparatus: usize) -> Result<DensityMatrix> {
    if d_system * d_apparatus != xi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} is not {d_system}x{d_apparatus}",
            xi.dim()
        )));
    }
    let reduced = linalg::partial_trace(&xi.projector(), d_system, d_apparatus, Keep::A)?;
    DensityMatrix::new(reduced)
}

/// Embeds a classical-quantum state as `Σ p_i Ψ_i ⊗ |i⟩⟨i|`.
///
/// The classical register is the second factor, so conditioning a
/// [`BipartiteState`] on `B` conditions on the register.
pub fn cq_embed(cq: &ClassicalQuantumState) -> Result<BipartiteState> {
    let n = cq.branches.len();
    let ds = cq.system_dim();
    let mut joint = ComplexMatrix::zeros(ds * n, ds * n);
    for (i, (p, psi)) in cq.branches.iter().enumerate() {
        let mut reg = ComplexMatrix::zeros(n, n);
        reg[(i, i)] = C64::new(*p, 0.0);
        joint = &joint + &tensor(psi.matrix(), &reg)?;
    }
    BipartiteState::new(DensityMatrix::new(joint)?, ds, n)
}
