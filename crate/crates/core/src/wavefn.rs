//! Whole-region WKB₀ wavefunction joined by the connection formulas, and the
//! standing-wave asymptote with its closed-form amplitude.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use crate::cuts::Cut;
use crate::error::{Error, Result};
use crate::model::System;
use crate::quadrature::{CumulativeTable, TableOptions};
use crate::quantize::EigenResult;

/// The decaying pieces are tabulated until the exponent reaches this value.
pub const DECAY_EXPONENT_STOP: f64 = 40.0;
/// Radial left regions stop at `r = RADIAL_INNER_STOP · x1`.
pub const RADIAL_INNER_STOP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionData {
    pub delta1: f64,
    pub delta2: f64,
    pub amp_ratio: f64,
    /// C₂/C₁ = (−1)ⁿ.
    pub sign_alternation: i32,
}

pub fn connection_constants(n: u32) -> ConnectionData {
    ConnectionData {
        delta1: -FRAC_PI_4,
        delta2: FRAC_PI_4,
        amp_ratio: SQRT_2,
        sign_alternation: if n.is_multiple_of(2) { 1 } else { -1 },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Left of x1, decaying.
    I,
    /// Inside the cut, oscillating.
    II,
    /// Right of x2, decaying.
    III,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityReport {
    pub value_jump_x1: f64,
    pub deriv_jump_x1: f64,
    pub value_jump_x2: f64,
    pub deriv_jump_x2: f64,
}

impl ContinuityReport {
    pub fn max_jump(&self) -> f64 {
        self.value_jump_x1.max(self.deriv_jump_x1).max(self.value_jump_x2).max(self.deriv_jump_x2)
    }
}

#[derive(Debug, Clone)]
pub struct PiecewiseWavefunction {
    system: System,
    pub energy: f64,
    pub n: u32,
    pub cut: Cut,
    /// Overall amplitude C fixed by unit norm.
    pub amplitude: f64,
    pub phi1: f64,
    pub phi2: f64,
    s: f64,
    radial: bool,
    /// φ − φ₁ over t ∈ [−π/2, π/2] with x = c + h·sin t.
    inner: CumulativeTable,
    /// Left decay exponent over v (x = x1 − v², or r = x1·e^{−v²} radially).
    left: CumulativeTable,
    /// Right decay exponent over v with x = x2 + v².
    right: CumulativeTable,
}

impl PiecewiseWavefunction {
    fn center(&self) -> (f64, f64) {
        (0.5 * (self.cut.x1 + self.cut.x2), 0.5 * (self.cut.x2 - self.cut.x1))
    }

    fn inner_g(&self) -> impl Fn(f64) -> f64 + '_ {
        let (c, h) = self.center();
        let hbar = self.system.hbar();
        move |t: f64| {
            let (st, ct) = t.sin_cos();
            self.system.p2_spectral(self.s, c + h * st).max(0.0).sqrt() * h * ct / hbar
        }
    }

    fn left_g(&self) -> impl Fn(f64) -> f64 + '_ {
        left_integrand(&self.system, self.s, self.cut.x1, self.radial)
    }

    fn right_g(&self) -> impl Fn(f64) -> f64 + '_ {
        right_integrand(&self.system, self.s, self.cut.x2)
    }

    /// Left and right ends of the tabulated support.
    pub fn support(&self) -> (f64, f64) {
        let v = self.left.end();
        let lo = if self.radial { self.cut.x1 * (-v * v).exp() } else { self.cut.x1 - v * v };
        let w = self.right.end();
        (lo, self.cut.x2 + w * w)
    }

    pub fn region(&self, x: f64) -> Region {
        if x < self.cut.x1 {
            Region::I
        } else if x > self.cut.x2 {
            Region::III
        } else {
            Region::II
        }
    }

    /// φ(x) inside the cut.
    pub fn phase(&self, x: f64) -> f64 {
        let (c, h) = self.center();
        let t = ((x - c) / h).clamp(-1.0, 1.0).asin();
        self.phi1 + self.inner.integral_to(self.inner_g(), t)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let c = self.amplitude;
        match self.region(x) {
            Region::II => c * (self.phase(x) - self.phi1 - FRAC_PI_4).cos(),
            Region::I => {
                let v = if self.radial {
                    if x <= 0.0 {
                        return 0.0;
                    }
                    (self.cut.x1 / x).ln().sqrt()
                } else {
                    (self.cut.x1 - x).sqrt()
                };
                if v > self.left.end() {
                    return 0.0;
                }
                c * FRAC_1_SQRT_2 * (-self.left.integral_to(self.left_g(), v)).exp()
            }
            Region::III => {
                let v = (x - self.cut.x2).sqrt();
                if v > self.right.end() {
                    return 0.0;
                }
                let sign = connection_constants(self.n).sign_alternation as f64;
                sign * c * FRAC_1_SQRT_2 * (-self.right.integral_to(self.right_g(), v)).exp()
            }
        }
    }

    /// One-sided value and φ-derivative mismatches at both turning points.
    pub fn continuity(&self) -> ContinuityReport {
        let c = self.amplitude;
        let sign = connection_constants(self.n).sign_alternation as f64;
        // inside: ψ = C cos(θ), dψ/dφ = −C sin(θ), θ = φ − φ₁ − π/4
        let theta1 = -FRAC_PI_4;
        let theta2 = self.inner.total() - FRAC_PI_4;
        // outside: ψ = (C/√2)e^{φ−φ₁} on the left, ±(C/√2)e^{−(φ−φ₂)} on the right
        let left = c * FRAC_1_SQRT_2;
        let right = sign * c * FRAC_1_SQRT_2;
        ContinuityReport {
            value_jump_x1: (c * theta1.cos() - left).abs(),
            deriv_jump_x1: (-c * theta1.sin() - left).abs(),
            value_jump_x2: (c * theta2.cos() - right).abs(),
            deriv_jump_x2: (-c * theta2.sin() + right).abs(),
        }
    }

    /// Sign changes of ψ on `points` equally spaced nodes strictly inside the cut.
    pub fn interior_zero_count(&self, points: usize) -> usize {
        let (x1, x2) = (self.cut.x1, self.cut.x2);
        let mut count = 0;
        let mut prev: Option<f64> = None;
        for i in 1..=points {
            let x = x1 + (x2 - x1) * i as f64 / (points + 1) as f64;
            let v = self.eval(x);
            if v == 0.0 {
                continue;
            }
            if let Some(p) = prev {
                if (p < 0.0) != (v < 0.0) {
                    count += 1;
                }
            }
            prev = Some(v);
        }
        count
    }

    /// ∫|ψ|² over all three regions.
    pub fn norm(&self) -> f64 {
        norm_squared(self) * self.amplitude * self.amplitude
    }

    /// `(x, ψ, region)` on `points` equally spaced nodes over the support.
    pub fn grid(&self, points: usize) -> Vec<(f64, f64, Region)> {
        let (lo, hi) = self.support();
        let n = points.max(2);
        (0..n)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                (x, self.eval(x), self.region(x))
            })
            .collect()
    }
}

fn left_integrand(system: &System, s: f64, x1: f64, radial: bool) -> impl Fn(f64) -> f64 + '_ {
    let hbar = system.hbar();
    move |v: f64| {
        if radial {
            let r = x1 * (-v * v).exp();
            (-system.p2_spectral(s, r)).max(0.0).sqrt() * 2.0 * v * r / hbar
        } else {
            (-system.p2_spectral(s, x1 - v * v)).max(0.0).sqrt() * 2.0 * v / hbar
        }
    }
}

fn right_integrand(system: &System, s: f64, x2: f64) -> impl Fn(f64) -> f64 + '_ {
    let hbar = system.hbar();
    move |v: f64| (-system.p2_spectral(s, x2 + v * v)).max(0.0).sqrt() * 2.0 * v / hbar
}

/// ∫|ψ|² with C = 1.
fn norm_squared(w: &PiecewiseWavefunction) -> f64 {
    let (_, h) = w.center();
    let x1 = w.cut.x1;
    let radial = w.radial;
    let inner = w.inner.integrate_with_running(w.inner_g(), |t, g| {
        let a = (g - FRAC_PI_4).cos();
        a * a * h * t.cos()
    });
    let left = w.left.integrate_with_running(w.left_g(), |v, g| {
        let jac = if radial { 2.0 * v * x1 * (-v * v).exp() } else { 2.0 * v };
        0.5 * (-2.0 * g).exp() * jac
    });
    let right = w.right.integrate_with_running(w.right_g(), |v, g| 0.5 * (-2.0 * g).exp() * 2.0 * v);
    inner + left + right
}

/// Whole-region solution for a single-cut eigenstate.
pub fn build_wavefunction(system: &System, eigen: &EigenResult) -> Result<PiecewiseWavefunction> {
    let cuts = &eigen.cuts_at_solution;
    if cuts.nu() != 1 {
        return Err(Error::Unsupported(format!("piecewise wavefunction needs exactly one cut, found {}", cuts.nu())));
    }
    let n = match eigen.quantum_numbers.as_slice() {
        [n] => *n,
        other => return Err(Error::Unsupported(format!("quantum numbers {other:?} do not describe one cut"))),
    };
    let cut = cuts.cuts[0];
    if cut.is_degenerate() {
        return Err(Error::DegenerateCut(cut.x1));
    }
    let s = eigen.s;
    let hbar = system.hbar();
    let radial = system.singular_at_origin() && cut.x1 > 0.0;
    let phi1 = -FRAC_PI_2 * (n as f64 + 0.5);

    let c = 0.5 * (cut.x1 + cut.x2);
    let h = 0.5 * (cut.x2 - cut.x1);
    let action_over_pi = (eigen.target / (PI * hbar)).max(1.0);
    let inner_opts = TableOptions {
        rel_tol: 1e-14,
        abs_tol: 1e-15 * PI * action_over_pi,
        initial_width: PI / 64.0,
        min_width: 1e-12,
        max_width: PI / (8.0 * (1.0 + action_over_pi)),
    };
    let inner = CumulativeTable::build(
        |t: f64| {
            let (st, ct) = t.sin_cos();
            system.p2_spectral(s, c + h * st).max(0.0).sqrt() * h * ct / hbar
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        None,
        &inner_opts,
    );

    let v_scale = if radial { 1.0 } else { h.sqrt() };
    let outer_opts = TableOptions {
        rel_tol: 1e-13,
        abs_tol: 1e-14 * DECAY_EXPONENT_STOP,
        initial_width: 0.02 * v_scale,
        min_width: 1e-12 * v_scale,
        max_width: 0.1 * v_scale,
    };
    let left_end = if radial { (1.0 / RADIAL_INNER_STOP).ln().sqrt() } else { f64::INFINITY };
    let left = CumulativeTable::build(
        left_integrand(system, s, cut.x1, radial),
        0.0,
        left_end,
        Some(DECAY_EXPONENT_STOP),
        &outer_opts,
    );
    let right_opts = TableOptions {
        initial_width: 0.02 * h.sqrt(),
        min_width: 1e-12 * h.sqrt(),
        max_width: 0.1 * h.sqrt(),
        ..outer_opts
    };
    let right = CumulativeTable::build(
        right_integrand(system, s, cut.x2),
        0.0,
        f64::INFINITY,
        Some(DECAY_EXPONENT_STOP),
        &right_opts,
    );
    let phi2 = phi1 + inner.total();
    let mut w = PiecewiseWavefunction {
        system: system.clone(),
        energy: eigen.energy,
        n,
        cut,
        amplitude: 1.0,
        phi1,
        phi2,
        s,
        radial,
        inner,
        left,
        right,
    };
    let n2 = norm_squared(&w);
    if !(n2.is_finite() && n2 > 0.0) {
        return Err(Error::Numeric(format!("wavefunction norm {n2}")));
    }
    w.amplitude = 1.0 / n2.sqrt();
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandingWave {
    pub n: u32,
    pub c_n: f64,
    pub p_n: f64,
    pub k_n: f64,
    /// πn/2.
    pub phase_offset: f64,
}

impl StandingWave {
    pub fn eval(&self, x: f64) -> f64 {
        self.c_n * (self.k_n * x + self.phase_offset).cos()
    }
}

/// `C_n = √(2P_n / (πħ(n+½) + ħ))`.
pub fn standing_wave_amplitude(p_n: f64, n: u32, hbar: f64) -> f64 {
    (2.0 * p_n / (PI * hbar * (n as f64 + 0.5) + hbar)).sqrt()
}

/// Standing-wave asymptote `C_n cos(P_n x/ħ + πn/2)` with `P_n = √(2m|E_n|)`
/// (for Cornell, where no mass enters, `P_n = E_n/2`).
pub fn standing_wave(system: &System, eigen: &EigenResult) -> Result<StandingWave> {
    let n = eigen.quantum_numbers.first().copied().unwrap_or(0);
    let hbar = system.hbar();
    let p_n = match system.mass() {
        Some(m) => (2.0 * m * eigen.energy.abs()).sqrt(),
        None => 0.5 * eigen.energy.abs(),
    };
    Ok(StandingWave {
        n,
        c_n: standing_wave_amplitude(p_n, n, hbar),
        p_n,
        k_n: p_n / hbar,
        phase_offset: FRAC_PI_2 * n as f64,
    })
}
