//! Discrete thermal time flow: tick sequences, clock ratios, the dilation
//! induced by conditioning, and the single-observable simultaneity rule.

use serde::{Deserialize, Serialize};

use crate::entropy::{cq_conditional, von_neumann, EntropyValue};
use crate::error::{Error, Result};
use crate::speed_limits::{time_quantum, ThermalContext, TimeQuantum};
use crate::states::ClassicalQuantumState;

/// A measured system with a constant per-measurement entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SystemSpec {
    pub id: String,
    pub entropy_nats: f64,
}

impl SystemSpec {
    pub fn new(id: impl Into<String>, entropy: EntropyValue) -> Result<Self> {
        let s = entropy.nats();
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::InvalidArgument(format!("system entropy must be ≥ 0, got {s}")));
        }
        Ok(SystemSpec {
            id: id.into(),
            entropy_nats: s,
        })
    }

    pub fn entropy(&self) -> EntropyValue {
        EntropyValue::from_nats(self.entropy_nats)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tick {
    pub time: f64,
    pub quantum: f64,
    pub system_id: String,
    /// Tick number within its own system, starting at 1.
    pub index: u64,
}

/// Merged tick sequence, sorted by time then system id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalFlow {
    pub ticks: Vec<Tick>,
}

impl ThermalFlow {
    pub fn ticks_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Tick> + 'a {
        self.ticks.iter().filter(move |t| t.system_id == id)
    }
}

/// Every active system ticks at `n·Δt`, `n = 1, 2, …`, up to `horizon`.
///
/// Systems with zero entropy produce no ticks.
pub fn simulate_flow(systems: &[SystemSpec], ctx: &ThermalContext, horizon: f64) -> Result<ThermalFlow> {
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    let mut ticks = Vec::new();
    let mut active = 0;
    for sys in systems {
        if !(sys.entropy_nats.is_finite() && sys.entropy_nats >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "system {} has invalid entropy {}",
                sys.id, sys.entropy_nats
            )));
        }
        if sys.entropy_nats == 0.0 {
            continue;
        }
        active += 1;
        let dt = time_quantum(sys.entropy(), ctx)?.seconds();
        let mut n = 1u64;
        loop {
            let t = n as f64 * dt;
            if t > horizon {
                break;
            }
            ticks.push(Tick {
                time: t,
                quantum: dt,
                system_id: sys.id.clone(),
                index: n,
            });
            n += 1;
        }
    }
    if active == 0 {
        return Err(Error::NoActiveSystem);
    }
    ticks.sort_by(|a, b| a.time.total_cmp(&b.time).then_with(|| a.system_id.cmp(&b.system_id)));
    Ok(ThermalFlow { ticks })
}

/// `Δt₁/Δt₂ = S₂/S₁`; the context cancels.
pub fn clock_ratio(s1: &SystemSpec, s2: &SystemSpec) -> Result<f64> {
    for s in [s1, s2] {
        if !(s.entropy_nats > 0.0) {
            return Err(Error::NonpositiveEntropy(s.entropy_nats));
        }
    }
    Ok(s2.entropy_nats / s1.entropy_nats)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Dilation {
    /// Quantum from `S(S|O)`.
    pub conditional: TimeQuantum,
    /// Quantum from `S(S)` of the mixture.
    pub marginal: TimeQuantum,
}

/// Time quanta from the conditional and the unconditioned entropy of the system.
pub fn dilation_from_conditioning(cq: &ClassicalQuantumState, ctx: &ThermalContext) -> Result<Dilation> {
    let conditional = time_quantum(cq_conditional(cq)?, ctx)?;
    let marginal = time_quantum(von_neumann(&cq.mixture()?)?, ctx)?;
    Ok(Dilation { conditional, marginal })
}

/// `Δt = (θ₂ − θ₁) / v_max`.
pub fn simultaneity_offset(theta1: f64, theta2: f64, v_max: f64) -> Result<f64> {
    if !(v_max.is_finite() && v_max > 0.0) {
        return Err(Error::NonpositiveVelocity(v_max));
    }
    Ok((theta2 - theta1) / v_max)
}
