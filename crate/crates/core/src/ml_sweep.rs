//! Randomized check of the shifted Margolus-Levitin bound against explicit evolution.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, C64};
use crate::sampling::{random_hermitian, random_state, trial_rng};
use crate::speed_limits::{orthogonalization_time, ThermalContext, ORTHOGONALITY_TOL};
use crate::states::StateVector;

/// Absolute slack allowed below the bound before a trial counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Dimensions cycled through by trial index.
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            dims: vec![2, 3, 4],
            trials: 100,
            seed: 0,
            tol: ORTHOGONALITY_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Haar-random vector.
    Haar,
    /// Equal-weight, random-phase superposition of two eigenvectors.
    EigenPair,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialOutcome {
    pub index: usize,
    pub dim: usize,
    pub initial: InitialState,
    pub t_orth: Option<f64>,
    pub bound: f64,
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepReport {
    pub trials: usize,
    pub found: usize,
    pub violations: usize,
    /// Smallest `t_orth − bound` over trials that orthogonalized.
    pub min_slack: Option<f64>,
    #[serde(skip)]
    pub outcomes: Vec<TrialOutcome>,
}

/// Even trials start from an eigenvector pair (guaranteed to orthogonalize),
/// odd trials from a Haar-random state. Outcomes are in trial order.
pub fn ml_sweep(cfg: &SweepConfig, ctx: &ThermalContext) -> Result<SweepReport> {
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&d| d < 2) {
        return Err(Error::InvalidArgument("sweep dimensions must all be ≥ 2".into()));
    }
    let outcomes = (0..cfg.trials)
        .map(|i| run_trial(cfg, ctx, i))
        .collect::<Result<Vec<_>>>()?;
    let found = outcomes.iter().filter(|o| o.t_orth.is_some()).count();
    let violations = outcomes
        .iter()
        .filter(|o| o.slack.is_some_and(|s| s < -VIOLATION_TOL))
        .count();
    let min_slack = outcomes.iter().filter_map(|o| o.slack).reduce(f64::min);
    Ok(SweepReport {
        trials: cfg.trials,
        found,
        violations,
        min_slack,
        outcomes,
    })
}

fn run_trial(cfg: &SweepConfig, ctx: &ThermalContext, index: usize) -> Result<TrialOutcome> {
    let dim = cfg.dims[index % cfg.dims.len()];
    let mut rng = trial_rng(cfg.seed, index as u64);
    let h = random_hermitian(&mut rng, dim);
    let spec = eig_hermitian(&h)?;
    let hbar = ctx.hbar();

    let (initial, psi, t_max) = if index.is_multiple_of(2) {
        let a = rng.random_range(0..dim);
        let mut b = rng.random_range(0..dim - 1);
        if b >= a {
            b += 1;
        }
        let (pa, pb) = (rng.random::<f64>() * 2.0 * PI, rng.random::<f64>() * 2.0 * PI);
        let (va, vb) = (spec.eigenvector(a), spec.eigenvector(b));
        let amps: Vec<C64> = va
            .iter()
            .zip(&vb)
            .map(|(x, y)| (x * C64::from_polar(1.0, pa) + y * C64::from_polar(1.0, pb)) * FRAC_1_SQRT_2)
            .collect();
        let gap = (spec.eigenvalues[a] - spec.eigenvalues[b]).abs();
        (InitialState::EigenPair, StateVector::normalized(amps)?, 1.5 * PI * hbar / gap)
    } else {
        let psi = random_state(&mut rng, dim);
        let mean: f64 = {
            let hp = h.apply(psi.amplitudes())?;
            psi.amplitudes().iter().zip(&hp).map(|(a, b)| (a.conj() * b).re).sum()
        };
        let spread = (mean - spec.min_eigenvalue()).max(1e-12);
        (InitialState::Haar, psi, 4.0 * ctx.h() / (4.0 * spread))
    };

    let r = orthogonalization_time(&h, &psi, t_max, cfg.tol, ctx)?;
    Ok(TrialOutcome {
        index,
        dim,
        initial,
        t_orth: r.t_orth,
        bound: r.bound,
        slack: r.slack(),
    })
}
