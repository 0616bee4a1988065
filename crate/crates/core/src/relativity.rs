//! Frame transforms of temperature, entropy, length and time quanta, and the
//! invariance check of the classical velocity bound.
//!
//! Exponent conventions are explicit: a boost maps rest-frame temperature
//! `T` and boosted-frame `T̄` by `T = γ^e T̄`, and lengths by `r̄ = γ^l r`.

use serde::Serialize;

use crate::entropy::EntropyValue;
use crate::error::{Error, Result};
use crate::gaussian_position::{optimal_interval, partition_entropy_g, GaussianPacket};
use crate::speed_limits::{time_quantum, ThermalContext, TimeQuantum};

/// Temperature exponent of `T = γ^{−1/2} T̄`.
pub const TEMP_EXPONENT_SQRT: f64 = -0.5;
/// Planck's convention `T = γ^{−1} T̄`.
pub const TEMP_EXPONENT_PLANCK: f64 = -1.0;
/// Length contraction `r̄ = γ^{−1} r`.
pub const LENGTH_EXPONENT_CONTRACTION: f64 = -1.0;

/// Relative tolerance for declaring the bound invariant.
pub const INVARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boost {
    v: f64,
    c: f64,
}

impl Boost {
    pub fn new(v: f64, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!("light speed must be positive, got {c}")));
        }
        if !(v.abs() < c) {
            return Err(Error::SuperluminalBoost { v, c });
        }
        Ok(Boost { v, c })
    }

    /// Boost with a prescribed Lorentz factor `γ ≥ 1`.
    pub fn from_gamma(gamma: f64, c: f64) -> Result<Self> {
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("Lorentz factor must be ≥ 1, got {gamma}")));
        }
        Self::new(c * (1.0 - 1.0 / (gamma * gamma)).sqrt(), c)
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn gamma(&self) -> f64 {
        let beta = self.v / self.c;
        1.0 / (1.0 - beta * beta).sqrt()
    }
}

/// `γ = 1/√(1 − v²/c²)`.
pub fn gamma(v: f64, c: f64) -> Result<f64> {
    Ok(Boost::new(v, c)?.gamma())
}

/// `T = γ^exponent · T̄`.
pub fn transform_temperature(t_bar: f64, boost: &Boost, exponent: f64) -> Result<f64> {
    if !(t_bar.is_finite() && t_bar > 0.0) {
        return Err(Error::NonpositiveTemperature(t_bar));
    }
    Ok(boost.gamma().powf(exponent) * t_bar)
}

/// Entropy is frame-invariant.
pub fn transform_entropy(s: EntropyValue) -> EntropyValue {
    s
}

/// `Δt = γ^{−e} Δt̄`, from `T = γ^e T̄` through `Δt = h/4kTS` with `S`, `h`, `k` invariant.
pub fn transform_time_quantum(dt_bar: TimeQuantum, boost: &Boost, temp_exponent: f64) -> Result<TimeQuantum> {
    TimeQuantum::new(boost.gamma().powf(-temp_exponent) * dt_bar.seconds())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameQuantities {
    pub temperature: f64,
    pub entropy_nats: f64,
    pub length: f64,
    pub dt_min: f64,
    /// `r / Δt_min`.
    pub velocity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InvarianceReport {
    pub gamma: f64,
    pub length_exponent: f64,
    pub temp_exponent: f64,
    /// The boosted velocity is `γ^gamma_power` times the rest one.
    pub gamma_power: f64,
    pub rest_frame: FrameQuantities,
    pub boosted_frame: FrameQuantities,
    pub rel_diff: f64,
    pub pass: bool,
}

/// Compares `r/Δt_min` in the rest frame with `r̄/Δt̄_min` in the boosted frame.
///
/// The rest frame uses the interval `R = σ_{k0}·x*` maximizing the classical
/// velocity, so its velocity equals the classical bound. The boosted frame
/// applies `r̄ = γ^l r` and `T̄ = γ^{−e} T`, with the entropy unchanged, and
/// recomputes the time quantum from `(T̄, S̄)`.
pub fn check_bound_invariance(
    packet: &GaussianPacket,
    ctx: &ThermalContext,
    boost: &Boost,
    length_exponent: f64,
    temp_exponent: f64,
) -> Result<InvarianceReport> {
    let g = boost.gamma();
    let r = optimal_interval(packet).x_star;
    let s = partition_entropy_g(r / packet.sigma_k0())?.entropy;
    let dt = time_quantum(s, ctx)?.seconds();
    let rest = FrameQuantities {
        temperature: ctx.temperature(),
        entropy_nats: s.nats(),
        length: r,
        dt_min: dt,
        velocity: r / dt,
    };

    let t_bar = ctx.temperature() / g.powf(temp_exponent);
    let s_bar = transform_entropy(s);
    let r_bar = g.powf(length_exponent) * r;
    let dt_bar = time_quantum(s_bar, &ctx.with_temperature(t_bar)?)?.seconds();
    let boosted = FrameQuantities {
        temperature: t_bar,
        entropy_nats: s_bar.nats(),
        length: r_bar,
        dt_min: dt_bar,
        velocity: r_bar / dt_bar,
    };

    let rel_diff = (boosted.velocity - rest.velocity).abs() / rest.velocity.abs();
    Ok(InvarianceReport {
        gamma: g,
        length_exponent,
        temp_exponent,
        gamma_power: length_exponent - temp_exponent,
        rest_frame: rest,
        boosted_frame: boosted,
        rel_diff,
        pass: rel_diff <= INVARIANCE_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_position::bound_classical_velocity;
    use std::f64::consts::LN_2;

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(0.0, 1.0).unwrap(), 1.0);
        assert!((gamma(0.6, 1.0).unwrap() - 1.25).abs() < 1e-15);
        assert!(matches!(gamma(1.0, 1.0), Err(Error::SuperluminalBoost { .. })));
        assert!(gamma(-2.0, 1.0).is_err());
        assert!((Boost::from_gamma(10.0, 3.0).unwrap().gamma() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn temperature_examples() {
        let still = Boost::new(0.0, 1.0).unwrap();
        assert_eq!(transform_temperature(3.0, &still, TEMP_EXPONENT_SQRT).unwrap(), 3.0);
        let g4 = Boost::from_gamma(4.0, 1.0).unwrap();
        assert!((transform_temperature(3.0, &g4, TEMP_EXPONENT_SQRT).unwrap() - 1.5).abs() < 1e-12);
        let g2 = Boost::from_gamma(2.0, 1.0).unwrap();
        assert!((transform_temperature(3.0, &g2, TEMP_EXPONENT_PLANCK).unwrap() - 1.5).abs() < 1e-12);
        assert!(matches!(
            transform_temperature(0.0, &g2, -1.0),
            Err(Error::NonpositiveTemperature(_))
        ));
    }

    #[test]
    fn entropy_is_invariant() {
        for s in [LN_2, 0.0] {
            let e = EntropyValue::from_nats(s);
            assert_eq!(transform_entropy(transform_entropy(e)), e);
        }
    }

    #[test]
    fn time_quantum_examples() {
        let dt = TimeQuantum::new(0.36).unwrap();
        let still = Boost::new(0.0, 1.0).unwrap();
        assert_eq!(transform_time_quantum(dt, &still, -1.0).unwrap(), dt);
        let b = Boost::new(0.6, 1.0).unwrap();
        let t = transform_time_quantum(dt, &b, TEMP_EXPONENT_PLANCK).unwrap().seconds();
        assert!((t - 1.25 * 0.36).abs() < 1e-14);
        let g4 = Boost::from_gamma(4.0, 1.0).unwrap();
        let t = transform_time_quantum(dt, &g4, TEMP_EXPONENT_SQRT).unwrap().seconds();
        assert!((t - 0.72).abs() < 1e-12);
    }

    #[test]
    fn time_quantum_path_independence() {
        // recompute Δt from the transformed temperature directly
        let s = EntropyValue::from_nats(0.4);
        for e in [TEMP_EXPONENT_SQRT, TEMP_EXPONENT_PLANCK] {
            let b = Boost::from_gamma(3.0, 1.0).unwrap();
            let t_bar = 2.0;
            let dt_bar = time_quantum(s, &ThermalContext::natural().with_temperature(t_bar).unwrap()).unwrap();
            let t = transform_temperature(t_bar, &b, e).unwrap();
            let direct = time_quantum(s, &ThermalContext::natural().with_temperature(t).unwrap()).unwrap();
            let via = transform_time_quantum(dt_bar, &b, e).unwrap();
            assert!((direct.seconds() - via.seconds()).abs() <= 1e-12 * direct.seconds());
        }
    }

    #[test]
    fn invariance_examples() {
        let packet = GaussianPacket::new(1.0, 0.0).unwrap();
        let ctx = ThermalContext::natural();
        let still = Boost::new(0.0, 1.0).unwrap();
        let r = check_bound_invariance(&packet, &ctx, &still, -1.0, -1.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.rest_frame, r.boosted_frame);
        assert!((r.rest_frame.velocity - bound_classical_velocity(&packet, &ctx)).abs() < 1e-9);

        let b = Boost::new(0.6, 1.0).unwrap();
        let r = check_bound_invariance(&packet, &ctx, &b, LENGTH_EXPONENT_CONTRACTION, TEMP_EXPONENT_PLANCK).unwrap();
        assert!(r.pass && r.rel_diff <= 1e-12);

        // length from contraction with the square-root temperature law
        let r = check_bound_invariance(&packet, &ctx, &b, LENGTH_EXPONENT_CONTRACTION, TEMP_EXPONENT_SQRT).unwrap();
        assert!(!r.pass);
        assert_eq!(r.gamma_power, -0.5);
        let expected = 1.25f64.powf(-0.5);
        assert!((r.boosted_frame.velocity / r.rest_frame.velocity - expected).abs() < 1e-12);
    }
}
