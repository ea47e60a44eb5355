//! Action integrals ∫√p² dx over cuts and the cumulative phase φ(x).
//!
//! The endpoint behaviour √(x − x₁) is removed by the substitution
//! `x = c + h·sin t`, after which composite Gauss–Legendre converges fast.

use crate::cuts::Cut;
use crate::error::{Error, Result};
use crate::model::System;
use crate::quadrature::{integrate_doubling, DoublingOptions};

/// Negative p² at a node inside a cut is treated as round-off and clamped to
/// zero when it is below this fraction of the cut's p² scale.
pub const CLAMP_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionValue {
    pub value: f64,
    pub est_error: f64,
    pub nodes_used: usize,
    pub converged: bool,
}

/// ∫_{x1}^{x2} √p²(x) dx for an arbitrary p² with simple zeros at the ends.
pub fn action_integral<F>(p2: F, x1: f64, x2: f64, opts: &DoublingOptions) -> Result<ActionValue>
where
    F: Fn(f64) -> f64,
{
    if !(x1.is_finite() && x2.is_finite()) || x2 < x1 {
        return Err(Error::Domain(format!("invalid cut [{x1}, {x2}]")));
    }
    if x2 == x1 {
        return Ok(ActionValue { value: 0.0, est_error: 0.0, nodes_used: 0, converged: true });
    }
    let c = 0.5 * (x1 + x2);
    let h = 0.5 * (x2 - x1);
    let scale = p2(c).abs().max(p2(c - 0.5 * h).abs()).max(p2(c + 0.5 * h).abs());
    let mut bad: Option<(f64, f64)> = None;
    let integrand = |t: f64| {
        let (st, ct) = t.sin_cos();
        let x = c + h * st;
        let v = p2(x);
        if v >= 0.0 {
            v.sqrt() * h * ct
        } else if -v <= CLAMP_REL * scale {
            0.0
        } else {
            if bad.is_none() {
                bad = Some((x, v));
            }
            0.0
        }
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let r = integrate_doubling(integrand, -half_pi, half_pi, opts);
    if let Some((x, v)) = bad {
        return Err(Error::Numeric(format!("p² = {v} < 0 inside the cut at x = {x}")));
    }
    if !r.value.is_finite() {
        return Err(Error::Numeric(format!("non-finite action over [{x1}, {x2}]")));
    }
    Ok(ActionValue { value: r.value, est_error: r.est_error, nodes_used: r.nodes, converged: r.converged })
}

pub(crate) fn cut_action_spectral(system: &System, s: f64, cut: &Cut, opts: &DoublingOptions) -> Result<ActionValue> {
    action_integral(|x| system.p2_spectral(s, x), cut.x1, cut.x2, opts)
}

/// Action `I = ∫_{x1}^{x2} √p²(E, x) dx` over one cut.
pub fn cut_action(system: &System, energy: f64, cut: &Cut) -> Result<ActionValue> {
    if !energy.is_finite() {
        return Err(Error::Domain(format!("non-finite energy {energy}")));
    }
    cut_action_spectral(system, system.spectral_variable(energy), cut, &DoublingOptions::default())
}

/// φ(x) − φ(x1) = (1/ħ) ∫_{x1}^{x} √p² dx′ for x in the cut.
pub fn phase_function(system: &System, energy: f64, cut: &Cut, x: f64) -> Result<f64> {
    if !(x >= cut.x1 && x <= cut.x2) {
        return Err(Error::Domain(format!("x = {x} outside the cut [{}, {}]", cut.x1, cut.x2)));
    }
    if x == cut.x1 || cut.is_degenerate() {
        return Ok(0.0);
    }
    let s = system.spectral_variable(energy);
    let c = 0.5 * (cut.x1 + cut.x2);
    let h = 0.5 * (cut.x2 - cut.x1);
    let tx = ((x - c) / h).clamp(-1.0, 1.0).asin();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let integrand = |t: f64| {
        let (st, ct) = t.sin_cos();
        system.p2_spectral(s, c + h * st).max(0.0).sqrt() * h * ct
    };
    let r = integrate_doubling(integrand, -half_pi, tx, &DoublingOptions::default());
    Ok(r.value / system.hbar())
}

/// max ħ|dp/dx|/p² over the central `interior_fraction` of the cut.
pub fn quasiclassicality(system: &System, energy: f64, cut: &Cut, interior_fraction: f64) -> Result<f64> {
    if !(interior_fraction > 0.0 && interior_fraction < 1.0) {
        return Err(Error::Domain(format!("interior_fraction = {interior_fraction} not in (0, 1)")));
    }
    if cut.is_degenerate() {
        return Ok(f64::INFINITY);
    }
    let s = system.spectral_variable(energy);
    let c = 0.5 * (cut.x1 + cut.x2);
    let h = 0.5 * (cut.x2 - cut.x1) * interior_fraction;
    let delta = 1e-6 * h;
    let p = |x: f64| {
        let v = system.p2_spectral(s, x);
        if v > 0.0 {
            Some(v.sqrt())
        } else {
            None
        }
    };
    let samples = 2001;
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let x = c - h + 2.0 * h * i as f64 / (samples - 1) as f64;
        match (p(x - delta), p(x), p(x + delta)) {
            (Some(lo), Some(mid), Some(hi)) => {
                let dp = (hi - lo) / (2.0 * delta);
                worst = worst.max(system.hbar() * dp.abs() / (mid * mid));
            }
            _ => return Ok(f64::INFINITY),
        }
    }
    Ok(worst)
}
