//! Turning points and the cut structure (classically allowed intervals) of
//! p²(E, ·) on the real axis.

use crate::error::{Error, Result};
use crate::model::{PotentialKind, System};
use crate::roots::{bisect_secant, golden_min, RootOptions};

pub const DEFAULT_SCAN_POINTS: usize = 512;
pub const MIN_SCAN_POINTS: usize = 16;
/// Relative bracket width at which turning-point refinement stops.
pub const TURNING_POINT_REL_TOL: f64 = 1e-13;
/// Radial scans start at `R_MIN_FACTOR` times the natural length.
pub const R_MIN_FACTOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("empty or non-finite window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi })
    }
}

/// Which half-axes a radial problem is scanned on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Axes {
    /// Per-kind default: both axes for Cornell and reduced Morse, the
    /// physical r > 0 axis for the other radial kinds.
    #[default]
    Auto,
    Positive,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cut {
    pub x1: f64,
    pub x2: f64,
    pub interior_sample: f64,
}

impl Cut {
    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    /// Zero-width cut: E sits exactly at a potential extremum.
    pub fn is_degenerate(&self) -> bool {
        self.x2 <= self.x1
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CutList {
    /// Disjoint, sorted by `x1`.
    pub cuts: Vec<Cut>,
    /// Allowed intervals that run into the window edge (not bounded by two
    /// turning points); they are not part of `cuts`.
    pub open_regions: usize,
}

impl CutList {
    /// ν, the number of cuts.
    pub fn nu(&self) -> usize {
        self.cuts.len()
    }

    /// μ = 2ν, the number of turning points.
    pub fn mu(&self) -> usize {
        2 * self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

fn geometric(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i + 1 == n {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

fn linear(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

/// Scan nodes, one ascending vector per contiguous segment. Kinds singular
/// at r = 0 get geometric spacing on each half-axis with `r = 0` excluded.
pub fn scan_segments(system: &System, window: Window, scan_points: usize) -> Vec<Vec<f64>> {
    let n = scan_points.max(MIN_SCAN_POINTS);
    if !system.singular_at_origin() {
        return vec![linear(window.lo, window.hi, n)];
    }
    let r_min = R_MIN_FACTOR * system.length_scale();
    let mut segments = Vec::new();
    if window.lo < -r_min {
        let far = -window.lo;
        let near = if window.hi < 0.0 { (-window.hi).max(r_min) } else { r_min };
        if far > near {
            let mut seg: Vec<f64> = geometric(near, far, n).into_iter().map(|r| -r).collect();
            seg.reverse();
            segments.push(seg);
        }
    }
    if window.hi > r_min {
        let near = window.lo.max(r_min);
        if window.hi > near {
            segments.push(geometric(near, window.hi, n));
        }
    }
    segments
}

fn turning_point_tol(system: &System, a: f64, b: f64) -> f64 {
    TURNING_POINT_REL_TOL * a.abs().max(b.abs()).max(system.length_scale())
}

/// Refines a root of p²(s, ·) in `[a, b]`; one endpoint may be an exact zero.
pub(crate) fn refine_spectral(system: &System, s: f64, a: f64, fa: f64, b: f64, fb: f64) -> Result<f64> {
    let opts = RootOptions::turning_point(turning_point_tol(system, a, b));
    let root = bisect_secant(|x| Ok(system.p2_spectral(s, x)), a, fa, b, fb, &opts)?;
    Ok(root.x)
}

/// Turning point inside `bracket`, which must straddle a sign change of p².
pub fn refine_turning_point(system: &System, energy: f64, bracket: (f64, f64)) -> Result<f64> {
    let (a, b) = bracket;
    let fa = system.momentum_squared(energy, a)?;
    let fb = system.momentum_squared(energy, b)?;
    let straddles = fa * fb < 0.0;
    if !straddles {
        return Err(Error::Logic(format!("no sign change of p² in [{a}, {b}] (p² = {fa}, {fb})")));
    }
    refine_spectral(system, system.spectral_variable(energy), a, fa, b, fb)
}

/// All cuts of p²(E, ·) detected on a scan of `window`.
pub fn find_cuts(system: &System, energy: f64, window: Window, scan_points: usize) -> Result<CutList> {
    if scan_points < MIN_SCAN_POINTS {
        return Err(Error::Domain(format!("scan_points = {scan_points} < {MIN_SCAN_POINTS}")));
    }
    if !energy.is_finite() {
        return Err(Error::Domain(format!("non-finite energy {energy}")));
    }
    find_cuts_spectral(system, system.spectral_variable(energy), window, scan_points)
}

pub(crate) fn find_cuts_spectral(system: &System, s: f64, window: Window, scan_points: usize) -> Result<CutList> {
    let mut list = CutList::default();
    for seg in scan_segments(system, window, scan_points) {
        let vals: Vec<f64> = seg.iter().map(|&x| system.p2_spectral(s, x)).collect();
        if let Some(i) = vals.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("p² = {} at scan node x = {}", vals[i], seg[i])));
        }
        scan_segment(system, s, &seg, &vals, &mut list)?;
    }
    list.cuts.sort_by(|a, b| a.x1.partial_cmp(&b.x1).unwrap());
    Ok(list)
}

fn scan_segment(system: &System, s: f64, xs: &[f64], vals: &[f64], list: &mut CutList) -> Result<()> {
    let n = xs.len();
    // (left turning point or None if open, index of best interior node)
    let mut open: Option<(Option<f64>, usize)> = if vals[0] > 0.0 { Some((None, 0)) } else { None };
    for i in 1..n {
        let (prev, cur) = (vals[i - 1] > 0.0, vals[i] > 0.0);
        if !prev && cur {
            let x1 = refine_spectral(system, s, xs[i - 1], vals[i - 1], xs[i], vals[i])?;
            open = Some((Some(x1), i));
        } else if prev && !cur {
            let x2 = refine_spectral(system, s, xs[i - 1], vals[i - 1], xs[i], vals[i])?;
            match open.take() {
                Some((Some(x1), best)) => list.cuts.push(Cut { x1, x2, interior_sample: xs[best] }),
                _ => list.open_regions += 1,
            }
        } else if cur {
            if let Some((_, best)) = open.as_mut() {
                if vals[i] > vals[*best] {
                    *best = i;
                }
            }
        } else if vals[i] == 0.0 && i + 1 < n && vals[i - 1] < 0.0 && vals[i + 1] < 0.0 {
            list.cuts.push(Cut { x1: xs[i], x2: xs[i], interior_sample: xs[i] });
        }
    }
    if open.is_some() {
        list.open_regions += 1;
    }
    Ok(())
}

fn resolve_axes(system: &System, axes: Axes) -> Axes {
    match axes {
        Axes::Auto => match system.kind() {
            PotentialKind::CornellRelativistic { .. } | PotentialKind::MorseRadialReduced { .. } => Axes::Both,
            _ => Axes::Positive,
        },
        other => other,
    }
}

fn radial_window(system: &System, axes: Axes, outer: f64) -> Window {
    match resolve_axes(system, axes) {
        Axes::Both => Window { lo: -outer, hi: outer },
        _ => Window { lo: 0.0, hi: outer },
    }
}

fn morse_outer(v0: f64, alpha: f64, r0: f64, s: f64) -> f64 {
    if s < 0.0 {
        r0 * (1.0 + ((1.0 + 4.0 * v0 / -s).ln() + 3.0) / alpha)
    } else {
        r0 * (1.0 + 40.0 / alpha)
    }
}

/// Scan window derived from the parameters at spectral value `s`.
pub fn default_window_spectral(system: &System, s: f64, axes: Axes) -> Window {
    let len = system.length_scale();
    match system.kind() {
        PotentialKind::Harmonic1D { m, omega } => {
            let w = if s > 0.0 { 4.0 * (2.0 * s / (m * omega * omega)).sqrt() } else { len };
            Window { lo: -w, hi: w }
        }
        PotentialKind::IsotropicOscillatorRadial { m, omega, .. } => {
            let w = if s > 0.0 { 4.0 * (2.0 * s / (m * omega * omega)).sqrt() } else { len };
            radial_window(system, axes, w)
        }
        PotentialKind::CoulombRadial { alpha, .. } => {
            let r = if s < 0.0 { 10.0 * alpha / -s } else { 1e4 * len };
            radial_window(system, axes, r)
        }
        PotentialKind::HulthenRadial { v0, r0, .. } => {
            let r = if s < 0.0 { r0 * (10.0 + 4.0 * (1.0 + v0 / -s).ln()) } else { 1e3 * r0 };
            radial_window(system, axes, r)
        }
        PotentialKind::MorseRadialBare { v0, alpha, r0, .. } => {
            Window { lo: r0 * (1.0 - (2f64.ln() + 3.0) / alpha), hi: morse_outer(*v0, *alpha, *r0, s) }
        }
        PotentialKind::MorseRadialReduced { v0, alpha, r0, .. } => {
            radial_window(system, axes, morse_outer(*v0, *alpha, *r0, s))
        }
        PotentialKind::CornellRelativistic { m_q, alpha_s, kappa, .. } => {
            let at = 4.0 * alpha_s / 3.0;
            let r = 2.0 * ((0.5 * s.max(0.0).sqrt() + m_q) / kappa + (at / kappa).sqrt()) + len;
            radial_window(system, axes, r)
        }
        PotentialKind::Tabulated1D(t) => {
            let (a, b) = t.span();
            let (xs, vs) = t.samples();
            let _ = xs;
            let v_edge = vs[0].min(vs[vs.len() - 1]);
            let pad = 2.0 * ((s - v_edge).max(0.0) / t.wall_stiffness()).sqrt() + 0.01 * (b - a);
            Window { lo: a - pad, hi: b + pad }
        }
    }
}

pub fn default_window(system: &System, energy: f64) -> Window {
    default_window_spectral(system, system.spectral_variable(energy), Axes::Auto)
}

/// Window searched for the minimum of the barrier function `W`.
pub fn floor_window(system: &System, axes: Axes) -> Window {
    let len = system.length_scale();
    let lp1 = system.l().unwrap_or(0) as f64 + 1.0;
    match system.kind() {
        PotentialKind::Harmonic1D { .. } => Window { lo: -10.0 * len, hi: 10.0 * len },
        PotentialKind::IsotropicOscillatorRadial { .. } => radial_window(system, axes, 10.0 * len * (lp1 + 1.0)),
        PotentialKind::CoulombRadial { .. } => radial_window(system, axes, 100.0 * len * lp1 * lp1),
        PotentialKind::HulthenRadial { r0, .. } => radial_window(system, axes, 100.0 * r0 * lp1),
        PotentialKind::MorseRadialBare { alpha, r0, .. } => {
            Window { lo: r0 * (1.0 - 5.0 / alpha), hi: r0 * (1.0 + 20.0 / alpha) }
        }
        PotentialKind::MorseRadialReduced { alpha, r0, .. } => radial_window(system, axes, r0 * (1.0 + 20.0 / alpha)),
        PotentialKind::CornellRelativistic { m_q, alpha_s, kappa, .. } => {
            let at = 4.0 * alpha_s / 3.0;
            radial_window(system, axes, 10.0 * ((at / kappa).sqrt() + lp1 * len + m_q / kappa))
        }
        PotentialKind::Tabulated1D(t) => {
            let (a, b) = t.span();
            Window { lo: a, hi: b }
        }
    }
}

/// Lowest spectral value at which a classically allowed region exists,
/// with the position of the minimum of `W/a`.
pub fn spectral_floor(system: &System, axes: Axes) -> Result<(f64, f64)> {
    let a = system.spectral_coefficient();
    let w = floor_window(system, axes);
    let mut best: Option<(f64, f64, f64, f64)> = None; // (value, x, left, right)
    for seg in scan_segments(system, w, 4096) {
        let vals: Vec<f64> = seg.iter().map(|&x| system.barrier(x) / a).collect();
        for i in 0..seg.len() {
            if !vals[i].is_finite() {
                continue;
            }
            if best.is_none_or(|b| vals[i] < b.0) {
                let left = seg[i.saturating_sub(1)];
                let right = seg[(i + 1).min(seg.len() - 1)];
                best = Some((vals[i], seg[i], left, right));
            }
        }
    }
    let (v, x, left, right) =
        best.ok_or_else(|| Error::Numeric("barrier is non-finite on the whole floor window".into()))?;
    let tol = 1e-12 * x.abs().max(system.length_scale());
    let (xm, vm) = golden_min(|x| system.barrier(x) / a, left, right, tol);
    Ok(if vm < v { (vm, xm) } else { (v, x) })
}
