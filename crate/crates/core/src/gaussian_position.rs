//! Position measurement of a Gaussian packet within `[0, R]`.
//!
//! The packet weight inside the interval is `erf(x)` with dimensionless
//! `x = R/σ_{k0}`; the measured state's entropy is the binary entropy `G(x)`
//! of that weight. Its maximum `ln 2` bounds the process velocity, and the
//! maximum of `H(x) = G(x)·x` bounds the classical velocity.

use std::f64::consts::{FRAC_2_SQRT_PI, LN_2, PI};

use serde::Serialize;

use crate::entropy::{eta, EntropyValue};
use crate::error::{Error, Result};
use crate::speed_limits::ThermalContext;

/// Search bracket for both maxima; `erfc(6) ≈ 2e-17`.
pub const SEARCH_UPPER: f64 = 6.0;
/// Coarse grid seeding the golden-section refinement.
pub const SEED_GRID: usize = 1024;
/// Final bracket width of the golden-section search.
pub const BRACKET_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GaussianPacket {
    sigma_k0: f64,
    k0: f64,
}

impl GaussianPacket {
    pub fn new(sigma_k0: f64, k0: f64) -> Result<Self> {
        if !(sigma_k0.is_finite() && sigma_k0 > 0.0) || !k0.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "packet needs finite sigma_k0 > 0 and finite k0, got ({sigma_k0}, {k0})"
            )));
        }
        Ok(GaussianPacket { sigma_k0, k0 })
    }

    pub fn sigma_k0(&self) -> f64 {
        self.sigma_k0
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionEntropy {
    pub x: f64,
    pub entropy: EntropyValue,
}

/// A located maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Maximum {
    pub x_star: f64,
    pub value: f64,
}

/// Error function, absolute error below `1e-15` on the real line.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < 3.0 { erf_series(ax) } else { 1.0 - erfc_cf(ax) };
    v.copysign(x)
}

/// Complementary error function `1 − erf(x)`, accurate in the upper tail.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 3.0 {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

// erf(x) = 2/√π e^{−x²} Σ 2ⁿ x^{2n+1} / (2n+1)!!; all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0;
    while term > 1e-17 * sum {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

// erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x ≥ 3.
fn erfc_cf(x: f64) -> f64 {
    if x > 27.3 {
        return 0.0;
    }
    let mut f = x;
    for k in (1..=80).rev() {
        f = x + (k as f64 / 2.0) / f;
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// `G(x) = −[p ln p + (1−p) ln(1−p)]` with `p = erf(x)`.
pub fn partition_entropy_g(x: f64) -> Result<PartitionEntropy> {
    if !(x >= 0.0) {
        return Err(Error::NegativeArgument(x));
    }
    Ok(PartitionEntropy {
        x,
        entropy: EntropyValue::from_nats(g_unchecked(x)),
    })
}

fn g_unchecked(x: f64) -> f64 {
    let p = erf(x);
    let q = erfc(x);
    (eta(p) + eta(q)).clamp(0.0, LN_2)
}

/// `H(x) = G(x)·x`.
pub fn scaled_function_h(x: f64) -> Result<f64> {
    Ok(partition_entropy_g(x)?.entropy.nats() * x)
}

fn h_unchecked(x: f64) -> f64 {
    g_unchecked(x) * x
}

/// Maximizes `f` on `[lo, hi]`: best point of an `n`-point grid, then
/// golden-section on its neighbouring cells down to `tol`.
pub fn seeded_golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize, tol: f64) -> Maximum {
    let step = (hi - lo) / (n - 1) as f64;
    let best = (0..n)
        .map(|i| (i, f(lo + i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let a = lo + best.0.saturating_sub(1) as f64 * step;
    let b = (lo + (best.0 + 1) as f64 * step).min(hi);
    let (x, v) = crate::speed_limits::golden_section_min(|x| -f(x), a, b, tol);
    Maximum { x_star: x, value: -v }
}

/// Maximum of `G` on `[0, 6]`: `ln 2` where `erf(x) = 1/2`.
pub fn max_g() -> Maximum {
    seeded_golden_max(g_unchecked, 0.0, SEARCH_UPPER, SEED_GRID, BRACKET_TOL)
}

/// Maximum of `H(x) = G(x)·x` on `[0, 6]`.
pub fn max_h() -> Maximum {
    seeded_golden_max(h_unchecked, 0.0, SEARCH_UPPER, SEED_GRID, BRACKET_TOL)
}

/// `S(Ψ_R)·R = H(R/σ)·σ`, the classical-velocity objective in the interval length.
pub fn interval_objective(r: f64, sigma_k0: f64) -> Result<f64> {
    if !(sigma_k0 > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma_k0 must be positive, got {sigma_k0}")));
    }
    Ok(partition_entropy_g(r / sigma_k0)?.entropy.nats() * r)
}

/// Interval length maximizing [`interval_objective`] for a given packet width.
pub fn optimal_interval(packet: &GaussianPacket) -> Maximum {
    let sigma = packet.sigma_k0;
    seeded_golden_max(
        |r| g_unchecked(r / sigma) * r,
        0.0,
        SEARCH_UPPER * sigma,
        SEED_GRID,
        BRACKET_TOL * sigma,
    )
}

/// `v_max ≤ 4 ln 2 · kT/h`.
pub fn bound_process_velocity(ctx: &ThermalContext) -> f64 {
    4.0 * LN_2 * ctx.thermal_energy() / ctx.h()
}

/// `v_max ≤ 4·max(H)·kT/h·σ_{k0}`, with `4·max(H) ≈ 1.832`.
pub fn bound_classical_velocity(packet: &GaussianPacket, ctx: &ThermalContext) -> f64 {
    4.0 * max_h().value * ctx.thermal_energy() * packet.sigma_k0 / ctx.h()
}

/// `v_max ≤ kT / (h σ_{x0})`; with `σ_{x0} = Λ₀` the universal bound.
pub fn bound_resolution_velocity(sigma_x0: f64, ctx: &ThermalContext) -> Result<f64> {
    if !(sigma_x0.is_finite() && sigma_x0 > 0.0) {
        return Err(Error::NonpositiveResolution(sigma_x0));
    }
    Ok(ctx.thermal_energy() / (ctx.h() * sigma_x0))
}
