//! Margolus-Levitin time quanta, orthogonalization under explicit evolution,
//! and process velocities.
//!
//! Unit convention: evolution is `exp(−iHt/ħ)` with `ħ = h / 2π`. The
//! default [`ThermalContext`] has `h = k = c = T = 1`; use
//! [`ThermalContext::hbar_units`] for the `ħ = 1` convention.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::entropy::{conditional_log, generalized_conditional, EntropyValue};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, C64, DEFAULT_CUTOFF};
use crate::states::{BipartiteState, StateVector};

/// Temperature plus the constants `h`, `k`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalContext {
    temperature: f64,
    h: f64,
    k: f64,
    c: f64,
}

impl Default for ThermalContext {
    fn default() -> Self {
        ThermalContext {
            temperature: 1.0,
            h: 1.0,
            k: 1.0,
            c: 1.0,
        }
    }
}

impl ThermalContext {
    pub const PLANCK_SI: f64 = 6.626_070_15e-34;
    pub const BOLTZMANN_SI: f64 = 1.380_649e-23;
    pub const LIGHT_SPEED_SI: f64 = 299_792_458.0;

    pub fn new(temperature: f64, h: f64, k: f64, c: f64) -> Result<Self> {
        for (name, v) in [("temperature", temperature), ("h", h), ("k", k), ("c", c)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidContext(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(ThermalContext { temperature, h, k, c })
    }

    /// `h = k = c = T = 1`.
    pub fn natural() -> Self {
        Self::default()
    }

    /// `ħ = 1`, i.e. `h = 2π`, with `k = c = T = 1`.
    pub fn hbar_units() -> Self {
        ThermalContext {
            h: 2.0 * PI,
            ..Self::default()
        }
    }

    /// SI constants at temperature `t` kelvin.
    pub fn si(temperature: f64) -> Result<Self> {
        Self::new(temperature, Self::PLANCK_SI, Self::BOLTZMANN_SI, Self::LIGHT_SPEED_SI)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(temperature, self.h, self.k, self.c)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn hbar(&self) -> f64 {
        self.h / (2.0 * PI)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `kT`.
    pub fn thermal_energy(&self) -> f64 {
        self.k * self.temperature
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeQuantum(f64);

impl TimeQuantum {
    pub fn new(dt: f64) -> Result<Self> {
        if dt.is_finite() && dt > 0.0 {
            Ok(TimeQuantum(dt))
        } else {
            Err(Error::InvalidArgument(format!("time quantum must be positive and finite, got {dt}")))
        }
    }

    pub fn seconds(self) -> f64 {
        self.0
    }
}

/// `Δt = h / (4 k T S)`.
pub fn time_quantum(s: EntropyValue, ctx: &ThermalContext) -> Result<TimeQuantum> {
    let s = s.nats();
    if !(s > 0.0) {
        return Err(Error::NonpositiveEntropy(s));
    }
    let dt = ctx.h / (4.0 * ctx.thermal_energy() * s);
    if !dt.is_finite() {
        return Err(Error::NonpositiveEntropy(s));
    }
    Ok(TimeQuantum(dt))
}

/// `Δt = h / (4 (Ē − E₀))`.
pub fn ml_bound_shifted(mean_energy: f64, ground_energy: f64, ctx: &ThermalContext) -> Result<TimeQuantum> {
    if !(mean_energy > ground_energy) {
        return Err(Error::DegenerateSpectrum {
            mean: mean_energy,
            ground: ground_energy,
        });
    }
    TimeQuantum::new(ctx.h / (4.0 * (mean_energy - ground_energy)))
}

/// Default orthogonality threshold on `|⟨ψ₀|ψ_t⟩|`.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Minimum grid size for the overlap scan.
pub const MIN_GRID: usize = 4096;

const POINTS_PER_PERIOD: f64 = 32.0;
const MAX_GRID: usize = 1 << 22;
const REFINE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrthogonalizationResult {
    /// First time with `|⟨ψ₀|ψ_t⟩| ≤ tol`, if any within the horizon.
    pub t_orth: Option<f64>,
    /// `(t, |⟨ψ₀|ψ_t⟩|)` on the scan grid.
    #[serde(skip)]
    pub overlap_trace: Vec<(f64, f64)>,
    /// `h / (4 (Ē − E₀))`; infinite when `ψ₀` has no energy spread above the ground.
    pub bound: f64,
    pub mean_energy: f64,
    pub ground_energy: f64,
}

impl OrthogonalizationResult {
    /// `t_orth − bound`, when orthogonality was reached.
    pub fn slack(&self) -> Option<f64> {
        self.t_orth.map(|t| t - self.bound)
    }
}

/// Overlap amplitude `⟨ψ₀|e^{−iHt/ħ}ψ₀⟩ = Σ w_n e^{−iE_n t/ħ}` from spectral weights.
struct OverlapFn {
    energies: Vec<f64>,
    weights: Vec<f64>,
    hbar: f64,
}

impl OverlapFn {
    fn modulus(&self, t: f64) -> f64 {
        self.energies
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| C64::from_polar(w, -e * t / self.hbar))
            .sum::<C64>()
            .norm()
    }
}

/// Scans `|⟨ψ₀|e^{−iHt/ħ}ψ₀⟩|` over `[0, t_max]` for the first orthogonal time.
///
/// The grid has at least [`MIN_GRID`] points and at least 32 points per
/// period of the fastest Bohr frequency. Every local minimum of the sampled
/// modulus is refined by golden-section search; the first refined minimum
/// at or below `tol` is reported.
pub fn orthogonalization_time(
    h: &ComplexMatrix,
    psi0: &StateVector,
    t_max: f64,
    tol: f64,
    ctx: &ThermalContext,
) -> Result<OrthogonalizationResult> {
    if !h.is_square() || h.rows() != psi0.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian {}x{} against state of dimension {}",
            h.rows(),
            h.cols(),
            psi0.dim()
        )));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    let spec = eig_hermitian(h)?;
    let weights: Vec<f64> = (0..spec.dim())
        .map(|i| {
            let v = spec.eigenvector(i);
            v.iter()
                .zip(psi0.amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum::<C64>()
                .norm_sqr()
        })
        .collect();
    let ground = spec.min_eigenvalue();
    let mean: f64 = spec.eigenvalues.iter().zip(&weights).map(|(e, w)| e * w).sum();
    let scale = spec.eigenvalues.iter().fold(1.0_f64, |a, e| a.max(e.abs()));
    let spread = mean - ground;
    let bound = if spread > 1e-14 * scale {
        ml_bound_shifted(mean, ground, ctx)?.seconds()
    } else {
        f64::INFINITY
    };

    let overlap = OverlapFn {
        energies: spec.eigenvalues.clone(),
        weights,
        hbar: ctx.hbar(),
    };

    let bandwidth = spec.max_eigenvalue() - ground;
    let periods = t_max * bandwidth / (2.0 * PI * ctx.hbar());
    let n = ((periods * POINTS_PER_PERIOD).ceil() as usize).clamp(MIN_GRID, MAX_GRID);
    let step = t_max / n as f64;
    let trace: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let t = i as f64 * step;
            (t, overlap.modulus(t))
        })
        .collect();

    let mut t_orth = None;
    for i in 1..=n {
        let here = trace[i].1;
        let left = trace[i - 1].1;
        let right = trace.get(i + 1).map_or(f64::INFINITY, |p| p.1);
        if !(here <= left && here <= right) {
            continue;
        }
        let lo = trace[i - 1].0;
        let hi = trace.get(i + 1).map_or(t_max, |p| p.0);
        let (t, m) = golden_section_min(|t| overlap.modulus(t), lo, hi, REFINE_TOL * t_max.max(1.0));
        let (t, m) = if here < m { (trace[i].0, here) } else { (t, m) };
        if m <= tol {
            t_orth = Some(t);
            break;
        }
    }

    Ok(OrthogonalizationResult {
        t_orth,
        overlap_trace: trace,
        bound,
        mean_energy: mean,
        ground_energy: ground,
    })
}

/// Golden-section minimization on `[lo, hi]` down to bracket width `tol`.
pub(crate) fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `v = 4 k T S₀ / h`, orthogonal states per unit time.
pub fn process_velocity(s0: EntropyValue, ctx: &ThermalContext) -> Result<f64> {
    let s = s0.nats();
    if !(s >= 0.0) {
        return Err(Error::InvalidArgument(format!("entropy must be non-negative, got {s}")));
    }
    Ok(4.0 * ctx.thermal_energy() * s / ctx.h)
}

/// `θ = v t`.
pub fn state_count(s0: EntropyValue, t: f64, ctx: &ThermalContext) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::NegativeTime(t));
    }
    Ok(process_velocity(s0, ctx)? * t)
}

/// Process velocity of a possibly entangled pair: `4kT (S(A|B) − E₀) / h`.
///
/// `E₀` is the lowest eigenvalue of `−log ρ_{A|B}` on the joint support.
pub fn antiqubit_process_velocity(bi: &BipartiteState, ctx: &ThermalContext) -> Result<f64> {
    let s = generalized_conditional(bi)?.nats();
    let ground = antiqubit_ground_energy(bi)?;
    Ok(4.0 * ctx.thermal_energy() * (s - ground) / ctx.h)
}

/// Lowest eigenvalue of `−log ρ_{A|B}` restricted to the support of ρ_AB.
pub fn antiqubit_ground_energy(bi: &BipartiteState) -> Result<f64> {
    let k = conditional_log(bi, DEFAULT_CUTOFF)?;
    let restricted = k.restricted().scale_real(-1.0).hermitian_part();
    Ok(eig_hermitian(&restricted)?.min_eigenvalue())
}
