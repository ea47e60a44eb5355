//! Eigenvalues from the WKB₀ quantization conditions.
//!
//! Every condition is solved in the spectral variable `s` (E, or E² for
//! Cornell), in which the total action is monotone: the bracket starts at the
//! floor of `W/a` and grows upward until the condition changes sign.

use std::f64::consts::PI;

use crate::cuts::{default_window_spectral, find_cuts_spectral, spectral_floor, Axes, CutList, DEFAULT_SCAN_POINTS};
use crate::error::{Error, Result};
use crate::model::{AngularMomentum, PotentialKind, System, UnitSystem};
use crate::phase::{action_integral, cut_action_spectral};
use crate::quadrature::DoublingOptions;
use crate::roots::{bisect_secant, RootOptions};

/// Accepted residual of a quantization condition, in units of πħ.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionForm {
    /// Σ Iᵢ = πħ Σ(nᵢ + ½)
    PerCutSum,
    /// Σ Iᵢ = πħ(N + μ/4)
    Maslov { n_total: u32, mu: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationSpec {
    /// One entry per expected cut, ordered by position.
    pub per_cut_quantum_numbers: Vec<u32>,
    pub condition_form: ConditionForm,
    pub axes: Axes,
}

impl QuantizationSpec {
    pub fn per_cut(ns: Vec<u32>) -> Self {
        QuantizationSpec { per_cut_quantum_numbers: ns, condition_form: ConditionForm::PerCutSum, axes: Axes::Auto }
    }

    pub fn maslov(n_total: u32, mu: u32) -> Self {
        QuantizationSpec {
            per_cut_quantum_numbers: Vec::new(),
            condition_form: ConditionForm::Maslov { n_total, mu },
            axes: Axes::Auto,
        }
    }

    pub fn with_axes(mut self, axes: Axes) -> Self {
        self.axes = axes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.condition_form {
            ConditionForm::PerCutSum if self.per_cut_quantum_numbers.is_empty() => {
                Err(Error::Domain("per-cut condition needs at least one quantum number".into()))
            }
            ConditionForm::PerCutSum => Ok(()),
            ConditionForm::Maslov { n_total, mu } => {
                if mu < 2 || mu % 2 != 0 {
                    return Err(Error::Domain(format!("Maslov index mu = {mu} must be even and >= 2")));
                }
                let ns = &self.per_cut_quantum_numbers;
                if !ns.is_empty() && ns.iter().sum::<u32>() != n_total {
                    return Err(Error::Domain(format!("N = {n_total} differs from the sum of {ns:?}")));
                }
                Ok(())
            }
        }
    }

    pub fn expected_cuts(&self) -> usize {
        match self.condition_form {
            ConditionForm::PerCutSum => self.per_cut_quantum_numbers.len(),
            ConditionForm::Maslov { mu, .. } => (mu / 2) as usize,
        }
    }

    /// Right-hand side of the condition in action units.
    pub fn target(&self, hbar: f64) -> f64 {
        match self.condition_form {
            ConditionForm::PerCutSum => {
                PI * hbar * self.per_cut_quantum_numbers.iter().map(|&n| n as f64 + 0.5).sum::<f64>()
            }
            ConditionForm::Maslov { n_total, mu } => PI * hbar * (n_total as f64 + mu as f64 / 4.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub energy: f64,
    /// Spectral variable at the solution (E, or E² for Cornell).
    pub s: f64,
    /// Σ Iᵢ − target at the solution.
    pub residual: f64,
    pub target: f64,
    pub iterations: usize,
    pub cuts_at_solution: CutList,
    /// (s, condition value) for every probe, in evaluation order.
    pub condition_value_history: Vec<(f64, f64)>,
    /// The detected cut count differs from the one the condition expects.
    pub cut_mismatch: bool,
    pub quantum_numbers: Vec<u32>,
}

struct Condition<'a> {
    system: &'a System,
    target: f64,
    axes: Axes,
    single_cut: bool,
    scan_points: usize,
}

impl Condition<'_> {
    fn cuts(&self, s: f64) -> Result<CutList> {
        let window = default_window_spectral(self.system, s, self.axes);
        find_cuts_spectral(self.system, s, window, self.scan_points)
    }

    fn eval(&self, s: f64) -> Result<(f64, CutList)> {
        let cuts = self.cuts(s)?;
        if self.single_cut && cuts.nu() > 1 {
            return Err(Error::Structure(format!(
                "{} cuts at s = {s}; use the multi-turning-point condition",
                cuts.nu()
            )));
        }
        let opts = DoublingOptions::default();
        let mut total = 0.0;
        for cut in &cuts.cuts {
            total += cut_action_spectral(self.system, s, cut, &opts)?.value;
        }
        Ok((total - self.target, cuts))
    }
}

fn solve(cond: &Condition, quantum_numbers: Vec<u32>, expected: Option<usize>) -> Result<EigenResult> {
    let system = cond.system;
    let (s_floor, _) = spectral_floor(system, cond.axes)?;
    let threshold = system.continuum_threshold();
    if let Some(thr) = threshold {
        if s_floor >= thr {
            return Err(Error::NoBoundState(format!("no classically allowed region below the continuum at {thr}")));
        }
    }
    let mut history = Vec::new();
    let mut probe = |s: f64| -> Result<f64> {
        let (v, _) = cond.eval(s)?;
        history.push((s, v));
        Ok(v)
    };

    let (mut lo, mut f_lo) = (s_floor, -cond.target);
    let step = 0.01 * (s_floor.abs() + system.spectral_scale());
    let mut bracket = None;
    for k in 0..200 {
        let mut s = s_floor + step * 2f64.powi(k);
        let near_threshold = matches!(threshold, Some(thr) if s >= thr);
        if near_threshold {
            break;
        }
        if !s.is_finite() {
            s = f64::MAX;
        }
        let f = probe(s)?;
        if f >= 0.0 {
            bracket = Some((s, f));
            break;
        }
        lo = s;
        f_lo = f;
    }
    if bracket.is_none() {
        if let Some(thr) = threshold {
            // approach the continuum threshold from below
            let mut gap = thr - lo;
            for _ in 0..80 {
                gap *= 0.5;
                let s = thr - gap;
                if s <= lo {
                    continue;
                }
                let f = probe(s)?;
                if f >= 0.0 {
                    bracket = Some((s, f));
                    break;
                }
                lo = s;
                f_lo = f;
            }
        }
    }
    let (hi, f_hi) = bracket.ok_or_else(|| {
        Error::NoBoundState(format!("action stays below the target {} up to s = {lo} (deficit {})", cond.target, -f_lo))
    })?;

    let scale = lo.abs().max(hi.abs()).max(system.spectral_scale());
    let opts = RootOptions {
        max_bisections: 200,
        switch_width: 1e-3 * (hi - lo),
        x_tol: 4.0 * f64::EPSILON * scale,
        f_tol: 1e-13 * cond.target,
        max_polish: 100,
    };
    let root = bisect_secant(&mut probe, lo, f_lo, hi, f_hi, &opts)?;
    let s = root.x;
    let (residual, cuts) = cond.eval(s)?;
    if let Some(c) = cuts.cuts.iter().find(|c| c.is_degenerate()) {
        return Err(Error::DegenerateCut(c.x1));
    }
    if cuts.is_empty() {
        return Err(Error::NoBoundState(format!("no cut at the solution s = {s}")));
    }
    if residual.abs() > RESIDUAL_TOL * PI * system.hbar() {
        return Err(Error::NotConverged(format!("residual {residual} at s = {s}")));
    }
    Ok(EigenResult {
        energy: system.energy_from_spectral(s),
        s,
        residual,
        target: cond.target,
        iterations: history.len(),
        cut_mismatch: expected.is_some_and(|e| e != cuts.nu()),
        cuts_at_solution: cuts,
        condition_value_history: history,
        quantum_numbers,
    })
}

/// Two-turning-point condition `I(E) = πħ(n + ½)` on a single cut.
pub fn quantize_2tp(system: &System, n: u32) -> Result<EigenResult> {
    let cond = Condition {
        system,
        target: PI * system.hbar() * (n as f64 + 0.5),
        axes: Axes::Auto,
        single_cut: true,
        scan_points: DEFAULT_SCAN_POINTS,
    };
    solve(&cond, vec![n], Some(1))
}

/// Multi-cut condition applied to every detected real cut.
pub fn quantize_multitp(system: &System, spec: &QuantizationSpec) -> Result<EigenResult> {
    spec.validate()?;
    let cond = Condition {
        system,
        target: spec.target(system.hbar()),
        axes: spec.axes,
        single_cut: false,
        scan_points: DEFAULT_SCAN_POINTS,
    };
    let ns = match spec.condition_form {
        ConditionForm::PerCutSum => spec.per_cut_quantum_numbers.clone(),
        ConditionForm::Maslov { n_total, .. } => vec![n_total],
    };
    solve(&cond, ns, Some(spec.expected_cuts()))
}

/// Condition the catalog uses for radial quantum number `n_r`: both mirrored
/// cuts with equal nᵢ for Cornell and reduced Morse, the single physical cut
/// otherwise.
pub fn default_spec(system: &System, n_r: u32) -> QuantizationSpec {
    match system.kind() {
        PotentialKind::CornellRelativistic { .. } | PotentialKind::MorseRadialReduced { .. } => {
            QuantizationSpec::per_cut(vec![n_r, n_r]).with_axes(Axes::Both)
        }
        _ => QuantizationSpec::per_cut(vec![n_r]).with_axes(Axes::Positive),
    }
}

pub fn quantize_state(system: &System, n_r: u32) -> Result<EigenResult> {
    quantize_multitp(system, &default_spec(system, n_r))
}

/// Σ Iᵢ(E) − target over the cuts detected at `energy`.
pub fn condition_value(system: &System, energy: f64, spec: &QuantizationSpec) -> Result<(f64, CutList)> {
    spec.validate()?;
    let cond = Condition {
        system,
        target: spec.target(system.hbar()),
        axes: spec.axes,
        single_cut: false,
        scan_points: DEFAULT_SCAN_POINTS,
    };
    cond.eval(system.spectral_variable(energy))
}

/// Angular action ∫√(M² − M_z²/sin²θ) dθ between its turning points.
pub fn angular_action(m: f64, m_z: f64) -> Result<f64> {
    let mz = m_z.abs();
    if m <= mz {
        return Ok(0.0);
    }
    let opts = DoublingOptions::default();
    if mz == 0.0 {
        return Ok(action_integral(|_| m * m, 0.0, PI, &opts)?.value);
    }
    let p2 = |t: f64| {
        let st = t.sin();
        m * m - mz * mz / (st * st)
    };
    let half = 0.5 * PI;
    let lo = 1e-300_f64.max((mz / m).asin() * 1e-3);
    let f_lo = p2(lo);
    let root = bisect_secant(|t| Ok(p2(t)), lo, f_lo, half, p2(half), &RootOptions::turning_point(1e-15))?;
    let t1 = root.x;
    Ok(action_integral(p2, t1, PI - t1, &opts)?.value)
}

/// Solves the angular condition for M given M_z = m_z·ħ and n_θ.
pub fn angular_quantize(m_z: i64, n_theta: u32, units: &UnitSystem) -> Result<AngularMomentum> {
    let hbar = units.hbar;
    let mz = (m_z as f64).abs() * hbar;
    let target = PI * hbar * (n_theta as f64 + 0.5);
    let f = |m: f64| -> Result<f64> { Ok(angular_action(m, mz)? - target) };
    let (lo, hi) = (mz, mz + (n_theta as f64 + 2.0) * hbar);
    let opts = RootOptions {
        max_bisections: 200,
        switch_width: 1e-4 * hbar,
        x_tol: 1e-15 * hi,
        f_tol: 1e-14 * target,
        max_polish: 100,
    };
    let root = bisect_secant(f, lo, -target, hi, f(hi)?, &opts)?;
    Ok(AngularMomentum { m: root.x, m_z: m_z as f64 * hbar })
}
