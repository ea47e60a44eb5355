//! Reference eigenvalues of the Schrödinger equation itself, from a Numerov
//! shooting integration with bisection on the node count.
//!
//! Radial problems are integrated in `x = ln r` with `u(r) = r^{1/2} w(x)`,
//! which turns the radial equation into
//! `w'' = [c + ¼ + r²·2m(V − E)/ħ²] w` with `c = l(l+1)` or `(l+½)²`.
//! The regular solution starts as `w = e^{γx}`, `γ = √(c + ¼)`. One-dimensional
//! problems use a uniform grid with Dirichlet ends.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{PotentialKind, System};
use crate::quantize::quantize_state;

/// Required decay exponent ∫√(−p²)/ħ beyond the outermost turning point.
pub const BOX_DECAY: f64 = 30.0;
/// Relative agreement demanded of the Richardson estimate.
pub const REFINEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centrifugal {
    /// ħ²l(l+1)/r², the true radial equation.
    TrueL,
    /// ħ²(l+½)²/r², the reduced equation.
    Reduced,
}

/// Integration grid: coordinates for 1D problems, `ln r` for radial ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceProblem {
    pub system: System,
    pub centrifugal: Centrifugal,
    /// `None` chooses and enlarges the box automatically.
    pub grid: Option<Grid>,
}

impl ReferenceProblem {
    pub fn new(system: System, centrifugal: Centrifugal) -> Result<Self> {
        if system.is_relativistic() {
            return Err(Error::Unsupported("the reference solver handles nonrelativistic kinds only".into()));
        }
        Ok(ReferenceProblem { system, centrifugal, grid: None })
    }

    pub fn with_grid(mut self, grid: Grid) -> Result<Self> {
        if !(grid.step > 0.0 && grid.x_max > grid.x_min && grid.step < grid.x_max - grid.x_min) {
            return Err(Error::Domain(format!("invalid grid {grid:?}")));
        }
        self.grid = Some(grid);
        Ok(self)
    }

    fn radial(&self) -> bool {
        self.system.singular_at_origin()
    }

    fn c(&self) -> f64 {
        let l = self.system.l().unwrap_or(0) as f64;
        match self.centrifugal {
            Centrifugal::TrueL => l * (l + 1.0),
            Centrifugal::Reduced => (l + 0.5) * (l + 0.5),
        }
    }

    /// p²/ħ² in the physical coordinate with this centrifugal convention.
    fn k2(&self, e: f64, r: f64) -> f64 {
        let m = self.system.mass().unwrap();
        let hbar = self.system.hbar();
        let mut k2 = 2.0 * m * (e - self.system.potential(r)) / (hbar * hbar);
        if self.radial() {
            k2 -= self.c() / (r * r);
        }
        k2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSolution {
    /// Richardson-extrapolated eigenvalue.
    pub energy: f64,
    pub energy_step: f64,
    pub energy_half_step: f64,
    pub grid: Grid,
}

struct Shooter<'a> {
    problem: &'a ReferenceProblem,
    grid: Grid,
}

impl Shooter<'_> {
    fn points(&self) -> usize {
        ((self.grid.x_max - self.grid.x_min) / self.grid.step).round() as usize + 1
    }

    /// Interior sign changes of the shooting solution at energy `e`.
    fn nodes(&self, e: f64) -> usize {
        let p = self.problem;
        let n = self.points();
        let h = (self.grid.x_max - self.grid.x_min) / (n - 1) as f64;
        let h12 = h * h / 12.0;
        let x_at = |k: usize| self.grid.x_min + h * k as f64;
        let g = |x: f64| {
            if p.radial() {
                let r = x.exp();
                p.c() + 0.25 - r * r * (p.k2(e, r) + p.c() / (r * r))
            } else {
                -p.k2(e, x)
            }
        };
        let (mut w0, mut w1) = if p.radial() {
            let gamma = (p.c() + 0.25).sqrt();
            (1.0, (gamma * h).exp())
        } else {
            (0.0, 1e-10)
        };
        let (mut g0, mut g1) = (g(x_at(0)), g(x_at(1)));
        let mut count = 0;
        for k in 2..n {
            let g2 = g(x_at(k));
            let w2 = (2.0 * w1 * (1.0 + 5.0 * h12 * g1) - w0 * (1.0 - h12 * g0)) / (1.0 - h12 * g2);
            let crossed = w2 != 0.0 && w1 != 0.0 && (w2 < 0.0) != (w1 < 0.0);
            let touched = w1 == 0.0 && w2 != 0.0 && w0 != 0.0 && (w2 < 0.0) != (w0 < 0.0);
            if crossed || touched {
                count += 1;
            }
            w0 = w1;
            w1 = w2;
            g0 = g1;
            g1 = g2;
            let big = w1.abs().max(w0.abs());
            if big > 1e150 {
                w0 /= big;
                w1 /= big;
            }
        }
        count
    }

    /// Lowest value of the effective potential on the grid (as an energy).
    fn energy_floor(&self) -> f64 {
        let p = self.problem;
        let m = p.system.mass().unwrap();
        let hbar = p.system.hbar();
        let n = self.points();
        let mut lo = f64::INFINITY;
        let mut stable = f64::NEG_INFINITY;
        for k in 0..n {
            let x = self.grid.x_min + self.grid.step * k as f64;
            let r = if p.radial() { x.exp() } else { x };
            // k2 at E = 0 is −2m V_eff/ħ²
            let v_eff = -p.k2(0.0, r) * hbar * hbar / (2.0 * m);
            lo = lo.min(v_eff);
            // keep h²g/12 ≤ ½ so the recurrence stays stable at the trial energy
            let jac = if p.radial() { r * r } else { 1.0 };
            let g_room = 6.0 / (self.grid.step * self.grid.step) - if p.radial() { p.c() + 0.25 } else { 0.0 };
            stable = stable.max(v_eff - g_room * hbar * hbar / (2.0 * m * jac));
        }
        lo.max(stable)
    }

    /// E_n = sup{E : nodes(E) ≤ n}.
    fn eigenvalue(&self, node_count: usize) -> Result<f64> {
        let p = self.problem;
        let scale = p.system.spectral_scale();
        let mut lo = self.energy_floor();
        if !lo.is_finite() {
            return Err(Error::Numeric("effective potential is not finite on the grid".into()));
        }
        if self.nodes(lo) > node_count {
            return Err(Error::Search(format!("{node_count} nodes already exceeded at the potential floor")));
        }
        let mut step = scale.max(1e-3 * lo.abs());
        let mut hi = lo + step;
        let mut found = false;
        for _ in 0..200 {
            if self.nodes(hi) > node_count {
                found = true;
                break;
            }
            lo = hi;
            step *= 2.0;
            hi = lo + step;
        }
        if !found {
            return Err(Error::Search(format!("node count {node_count} not reached below E = {hi}")));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || (hi - lo) <= 1e-15 * mid.abs().max(scale) {
                break;
            }
            if self.nodes(mid) > node_count {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Decay exponent from the outermost classical turning point to `r_max` at
/// energy `e`, plus whether the left edge is deep enough (1D only).
fn box_decay(problem: &ReferenceProblem, e: f64, grid: &Grid) -> (f64, f64) {
    let radial = problem.radial();
    let samples = 20_000;
    let to_r = |x: f64| if radial { x.exp() } else { x };
    let (a, b) = (to_r(grid.x_min), to_r(grid.x_max));
    let node = |i: usize| {
        if radial {
            (a.ln() + (b.ln() - a.ln()) * i as f64 / samples as f64).exp()
        } else {
            a + (b - a) * i as f64 / samples as f64
        }
    };
    let allowed: Vec<bool> = (0..=samples).map(|i| problem.k2(e, node(i)) > 0.0).collect();
    let first = allowed.iter().position(|&v| v);
    let last = allowed.iter().rposition(|&v| v);
    let (Some(first), Some(last)) = (first, last) else {
        return (0.0, 0.0);
    };
    let decay = |from: usize, to: usize| {
        let mut acc = 0.0;
        let (i0, i1) = if from < to { (from, to) } else { (to, from) };
        for i in i0..i1 {
            let (r0, r1) = (node(i), node(i + 1));
            let k = 0.5 * ((-problem.k2(e, r0)).max(0.0).sqrt() + (-problem.k2(e, r1)).max(0.0).sqrt());
            acc += k * (r1 - r0);
        }
        acc
    };
    let right = decay(last, samples);
    let left = if radial { f64::INFINITY } else { decay(0, first) };
    (left, right)
}

fn initial_grid(problem: &ReferenceProblem) -> Grid {
    let len = problem.system.length_scale();
    if problem.radial() {
        Grid { x_min: (1e-6 * len).ln(), x_max: (10.0 * len).ln(), step: 2e-3 }
    } else {
        let c = match problem.system.kind() {
            PotentialKind::MorseRadialBare { r0, .. } => *r0,
            PotentialKind::Tabulated1D(t) => {
                let (a, b) = t.span();
                0.5 * (a + b)
            }
            _ => 0.0,
        };
        Grid { x_min: c - 5.0 * len, x_max: c + 5.0 * len, step: 1e-3 * len }
    }
}

/// Caps the step so the largest local wavenumber (in the grid variable) is
/// resolved.
fn resolve_step(problem: &ReferenceProblem, e: f64, grid: &mut Grid) {
    let n = 4000;
    let mut kmax: f64 = 0.0;
    for i in 0..=n {
        let x = grid.x_min + (grid.x_max - grid.x_min) * i as f64 / n as f64;
        let k = if problem.radial() {
            let r = x.exp();
            r * problem.k2(e, r).max(0.0).sqrt()
        } else {
            problem.k2(e, x).max(0.0).sqrt()
        };
        kmax = kmax.max(k);
    }
    if kmax > 0.0 {
        grid.step = grid.step.min(0.02 / kmax);
    }
}

fn richardson(problem: &ReferenceProblem, node_count: usize, grid: Grid) -> Result<ReferenceSolution> {
    let mut grid = grid;
    let mut last = None;
    for _ in 0..4 {
        let coarse = Shooter { problem, grid }.eigenvalue(node_count)?;
        let fine_grid = Grid { step: 0.5 * grid.step, ..grid };
        let fine = Shooter { problem, grid: fine_grid }.eigenvalue(node_count)?;
        let extrapolated = fine + (fine - coarse) / 15.0;
        let sol = ReferenceSolution { energy: extrapolated, energy_step: coarse, energy_half_step: fine, grid };
        let scale = extrapolated.abs().max(1e-3 * problem.system.spectral_scale());
        if (extrapolated - fine).abs() <= REFINEMENT_TOL * scale {
            return Ok(sol);
        }
        last = Some(sol);
        grid.step *= 0.5;
    }
    let sol = last.unwrap();
    Err(Error::NotConverged(format!(
        "grid refinement stalled: E(h) = {}, E(h/2) = {}",
        sol.energy_step, sol.energy_half_step
    )))
}

/// Eigenvalue with `node_count` interior nodes, with step/step-halving
/// Richardson extrapolation.
pub fn reference_solve(problem: &ReferenceProblem, node_count: usize) -> Result<ReferenceSolution> {
    if let Some(grid) = problem.grid {
        return richardson(problem, node_count, grid);
    }
    let mut grid = initial_grid(problem);
    let threshold = problem.system.continuum_threshold();
    for _ in 0..40 {
        let e = Shooter { problem, grid }.eigenvalue(node_count)?;
        let (left, right) = box_decay(problem, e, &grid);
        let mut grown = false;
        if right < BOX_DECAY {
            if problem.radial() {
                grid.x_max += std::f64::consts::LN_2;
            } else {
                grid.x_max += 0.5 * (grid.x_max - grid.x_min);
            }
            grown = true;
        }
        if left < BOX_DECAY {
            grid.x_min -= 0.5 * (grid.x_max - grid.x_min);
            grown = true;
        }
        if grown {
            let len = problem.system.length_scale();
            let extent = if problem.radial() { grid.x_max.exp() } else { grid.x_max - grid.x_min };
            if extent > 1e6 * len {
                return Err(Error::NoBoundState(format!(
                    "state with {node_count} nodes does not localize (E = {e} in a box of extent {extent})"
                )));
            }
            continue;
        }
        if let Some(thr) = threshold {
            if e >= thr {
                return Err(Error::NoBoundState(format!("{node_count} nodes are not reached below the continuum")));
            }
        }
        resolve_step(problem, e, &mut grid);
        let sol = richardson(problem, node_count, grid)?;
        if let Some(thr) = threshold {
            if sol.energy >= thr {
                return Err(Error::NoBoundState(format!("{node_count} nodes are not reached below the continuum")));
            }
        }
        return Ok(sol);
    }
    Err(Error::Search(format!("no bound state with {node_count} nodes in any box tried")))
}

pub fn reference_eigenvalue(problem: &ReferenceProblem, node_count: usize) -> Result<f64> {
    Ok(reference_solve(problem, node_count)?.energy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub n: u32,
    pub l: u32,
    pub e_wkb0: Option<f64>,
    pub e_reference: Option<f64>,
    pub abs_diff: Option<f64>,
    pub rel_diff: Option<f64>,
    pub error: Option<Error>,
}

fn audit_row(system: &System, n: u32, l: u32) -> AuditRow {
    let mut row = AuditRow { n, l, e_wkb0: None, e_reference: None, abs_diff: None, rel_diff: None, error: None };
    let sys_l = if system.l().is_some() { system.with_l(l) } else { Ok(system.clone()) };
    let sys_l = match sys_l {
        Ok(s) => s,
        Err(e) => {
            row.error = Some(e);
            return row;
        }
    };
    let wkb = quantize_state(&sys_l, n).map(|r| r.energy);
    let reference = ReferenceProblem::new(sys_l, Centrifugal::TrueL).and_then(|p| reference_eigenvalue(&p, n as usize));
    row.e_wkb0 = wkb.as_ref().ok().copied();
    row.e_reference = reference.as_ref().ok().copied();
    match (wkb, reference) {
        (Ok(a), Ok(b)) => {
            row.abs_diff = Some((a - b).abs());
            row.rel_diff = Some((a - b).abs() / b.abs());
        }
        (Err(e), _) | (_, Err(e)) => row.error = Some(e),
    }
    row
}

/// WKB₀ versus reference (true l(l+1) centrifugal term) for every (n, l),
/// ordered by n then l. Failed rows carry their error.
pub fn audit_exactness(system: &System, n_list: &[u32], l_list: &[u32]) -> Vec<AuditRow> {
    let pairs: Vec<(u32, u32)> = n_list.iter().flat_map(|&n| l_list.iter().map(move |&l| (n, l))).collect();
    pairs.par_iter().map(|&(n, l)| audit_row(system, n, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UnitSystem;

    fn sys(kind: PotentialKind) -> System {
        System::new(kind, UnitSystem::default()).unwrap()
    }

    #[test]
    fn harmonic_reference() {
        let p =
            ReferenceProblem::new(sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 }), Centrifugal::TrueL).unwrap();
        let e = reference_eigenvalue(&p, 3).unwrap();
        assert!((e - 3.5).abs() < 1e-8, "{e}");
    }

    #[test]
    fn coulomb_and_hulthen_reference() {
        let p =
            ReferenceProblem::new(sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: 0 }), Centrifugal::TrueL)
                .unwrap();
        let e = reference_eigenvalue(&p, 0).unwrap();
        assert!((e + 0.5).abs() < 1e-6, "{e}");
        let p = ReferenceProblem::new(
            sys(PotentialKind::HulthenRadial { m: 1.0, v0: 2.0, r0: 1.0, l: 0 }),
            Centrifugal::TrueL,
        )
        .unwrap();
        let e = reference_eigenvalue(&p, 0).unwrap();
        assert!((e + 1.125).abs() < 1e-6, "{e}");
        assert!(matches!(reference_eigenvalue(&p, 1), Err(Error::NoBoundState(_))));
    }

    #[test]
    fn reduced_convention_is_an_effective_l() {
        // u'' + [2(E + 1/r) − (l+½)²/r²]u = 0 is hydrogenic with l'(l'+1) = (l+½)²
        let s = sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: 1 });
        let p = ReferenceProblem::new(s, Centrifugal::Reduced).unwrap();
        let e = reference_eigenvalue(&p, 1).unwrap();
        let lp = -0.5 + 2.5f64.sqrt();
        let exact = -0.5 / (2.0 + lp).powi(2);
        assert!(((e - exact) / exact).abs() < 1e-8, "{e} vs {exact}");
    }

    #[test]
    fn cornell_is_excluded() {
        let c = sys(PotentialKind::CornellRelativistic { m_q: 0.0, alpha_s: 0.75, kappa: 0.14, l: 0 });
        assert!(matches!(ReferenceProblem::new(c, Centrifugal::TrueL), Err(Error::Unsupported(_))));
    }

    #[test]
    fn refinement_is_at_least_second_order() {
        let p =
            ReferenceProblem::new(sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 }), Centrifugal::TrueL).unwrap();
        let grid = |step| Grid { x_min: -8.0, x_max: 8.0, step };
        let e = |step| Shooter { problem: &p, grid: grid(step) }.eigenvalue(2).unwrap();
        let (a, b, c) = (e(0.04), e(0.02), e(0.01));
        assert!((a - b).abs() >= (b - c).abs());
    }

    #[test]
    fn audit_rows_in_order() {
        let s = sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: 0 });
        let rows = audit_exactness(&s, &[0, 1], &[0, 1]);
        let keys: Vec<_> = rows.iter().map(|r| (r.n, r.l)).collect();
        assert_eq!(keys, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(rows.iter().all(|r| r.rel_diff.unwrap() <= 1e-6), "{rows:?}");
    }
}
