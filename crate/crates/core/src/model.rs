//! Problem catalog: potential families, unit constants and the squared
//! momentum p²(E, x) that every quantization routine consumes.
//!
//! Internally every kind is written as `p² = a·s − W(x)` where `s` is the
//! spectral variable (`s = E` for the nonrelativistic kinds, `s = E²` for the
//! Cornell kind) and `W` collects potential and centrifugal terms. The action
//! over a cut is then monotone in `s`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct UnitSystem {
    pub hbar: f64,
    pub energy_unit_label: String,
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem { hbar: 1.0, energy_unit_label: String::new() }
    }
}

impl UnitSystem {
    pub fn new(hbar: f64, energy_unit_label: impl Into<String>) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::config("hbar", format!("must be finite and > 0, got {hbar}")));
        }
        Ok(UnitSystem { hbar, energy_unit_label: energy_unit_label.into() })
    }

    pub fn with_hbar(hbar: f64) -> Result<Self> {
        Self::new(hbar, "")
    }
}

/// Angular momentum magnitude `m` and projection `m_z`, both in action units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMomentum {
    pub m: f64,
    pub m_z: f64,
}

/// `M = (l + ½)ħ`.
pub fn angular_momentum(l: i64, units: &UnitSystem) -> Result<AngularMomentum> {
    if l < 0 {
        return Err(Error::Domain(format!("angular momentum quantum number l = {l} < 0")));
    }
    Ok(AngularMomentum { m: (l as f64 + 0.5) * units.hbar, m_z: 0.0 })
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    /// V = ½mω²x² on the whole line.
    Harmonic1D {
        m: f64,
        omega: f64,
    },
    /// V = −α/r with centrifugal M²/r².
    CoulombRadial {
        m: f64,
        alpha: f64,
        l: u32,
    },
    /// V = ½mω²r² with centrifugal M²/r².
    IsotropicOscillatorRadial {
        m: f64,
        omega: f64,
        l: u32,
    },
    /// V = −V0·e^{−r/r0}/(1 − e^{−r/r0}) with centrifugal M²/r².
    HulthenRadial {
        m: f64,
        v0: f64,
        r0: f64,
        l: u32,
    },
    /// Morse well without any centrifugal term.
    MorseRadialBare {
        m: f64,
        v0: f64,
        alpha: f64,
        r0: f64,
    },
    /// Morse well with centrifugal M²/r² (nonzero at l = 0).
    MorseRadialReduced {
        m: f64,
        v0: f64,
        alpha: f64,
        r0: f64,
        l: u32,
    },
    /// Relativistic two-body funnel: p² = E²/4 − (m_q − α̃/r + κr)² − (l+½)²/r², ħ = c = 1.
    CornellRelativistic {
        m_q: f64,
        alpha_s: f64,
        kappa: f64,
        l: u32,
    },
    Tabulated1D(TabulatedPotential),
}

/// Sampled V(x) with monotone piecewise-cubic (Fritsch–Carlson) interpolation
/// and quadratic walls outside the sample range.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    pub m: f64,
    xs: Vec<f64>,
    vs: Vec<f64>,
    slopes: Vec<f64>,
    wall_stiffness: f64,
}

impl TabulatedPotential {
    pub fn new(m: f64, xs: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        check_positive("m", m)?;
        if xs.len() != vs.len() {
            return Err(Error::config("samples", "x and V columns differ in length"));
        }
        if xs.len() < 2 {
            return Err(Error::config("samples", "need at least two samples"));
        }
        if xs.iter().chain(&vs).any(|v| !v.is_finite()) {
            return Err(Error::config("samples", "non-finite sample"));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("samples", "x must be strictly increasing"));
        }
        let slopes = pchip_slopes(&xs, &vs);
        let span = xs[xs.len() - 1] - xs[0];
        let vmin = vs.iter().cloned().fold(f64::INFINITY, f64::min);
        let vmax = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let height = if vmax > vmin { vmax - vmin } else { vmax.abs().max(1.0) };
        Ok(TabulatedPotential { m, xs, vs, slopes, wall_stiffness: 100.0 * height / (span * span) })
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.vs)
    }

    pub fn span(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn wall_stiffness(&self) -> f64 {
        self.wall_stiffness
    }

    pub fn value_range(&self) -> (f64, f64) {
        let lo = self.vs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let (x0, xn) = (self.xs[0], self.xs[n - 1]);
        if x < x0 {
            return self.vs[0] + self.wall_stiffness * (x - x0) * (x - x0);
        }
        if x > xn {
            return self.vs[n - 1] + self.wall_stiffness * (x - xn) * (x - xn);
        }
        let k = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(k) => return self.vs[k],
            Err(k) => k - 1,
        };
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.vs[k] + h10 * h * self.slopes[k] + h01 * self.vs[k + 1] + h11 * h * self.slopes[k + 1]
    }
}

fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = pchip_edge(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn pchip_edge(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct System {
    kind: PotentialKind,
    units: UnitSystem,
}

fn check_positive(key: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be finite and > 0, got {v}")))
    }
}

impl System {
    pub fn new(kind: PotentialKind, units: UnitSystem) -> Result<Self> {
        UnitSystem::new(units.hbar, units.energy_unit_label.clone())?;
        use PotentialKind::*;
        match &kind {
            Harmonic1D { m, omega } | IsotropicOscillatorRadial { m, omega, .. } => {
                check_positive("m", *m)?;
                check_positive("omega", *omega)?;
            }
            CoulombRadial { m, alpha, .. } => {
                check_positive("m", *m)?;
                check_positive("alpha", *alpha)?;
            }
            HulthenRadial { m, v0, r0, .. } => {
                check_positive("m", *m)?;
                check_positive("v0", *v0)?;
                check_positive("r0", *r0)?;
            }
            MorseRadialBare { m, v0, alpha, r0 } | MorseRadialReduced { m, v0, alpha, r0, .. } => {
                check_positive("m", *m)?;
                check_positive("v0", *v0)?;
                check_positive("alpha", *alpha)?;
                check_positive("r0", *r0)?;
            }
            CornellRelativistic { m_q, alpha_s, kappa, .. } => {
                if !(m_q.is_finite() && *m_q >= 0.0) {
                    return Err(Error::config("m_q", format!("must be finite and >= 0, got {m_q}")));
                }
                check_positive("alpha_s", *alpha_s)?;
                check_positive("kappa", *kappa)?;
                if units.hbar != 1.0 {
                    return Err(Error::config("hbar", "the Cornell kind is defined in hbar = c = 1 units"));
                }
            }
            Tabulated1D(t) => check_positive("m", t.m)?,
        }
        Ok(System { kind, units })
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn hbar(&self) -> f64 {
        self.units.hbar
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            PotentialKind::Harmonic1D { .. } => "harmonic",
            PotentialKind::CoulombRadial { .. } => "coulomb",
            PotentialKind::IsotropicOscillatorRadial { .. } => "isotropic",
            PotentialKind::HulthenRadial { .. } => "hulthen",
            PotentialKind::MorseRadialBare { .. } => "morse",
            PotentialKind::MorseRadialReduced { .. } => "morse-reduced",
            PotentialKind::CornellRelativistic { .. } => "cornell",
            PotentialKind::Tabulated1D(_) => "tabulated",
        }
    }

    pub fn is_relativistic(&self) -> bool {
        matches!(self.kind, PotentialKind::CornellRelativistic { .. })
    }

    /// Kinds whose p² is singular at the origin (r = 0 excluded).
    pub fn singular_at_origin(&self) -> bool {
        matches!(
            self.kind,
            PotentialKind::CoulombRadial { .. }
                | PotentialKind::IsotropicOscillatorRadial { .. }
                | PotentialKind::HulthenRadial { .. }
                | PotentialKind::MorseRadialReduced { .. }
                | PotentialKind::CornellRelativistic { .. }
        )
    }

    pub fn l(&self) -> Option<u32> {
        match self.kind {
            PotentialKind::CoulombRadial { l, .. }
            | PotentialKind::IsotropicOscillatorRadial { l, .. }
            | PotentialKind::HulthenRadial { l, .. }
            | PotentialKind::MorseRadialReduced { l, .. }
            | PotentialKind::CornellRelativistic { l, .. } => Some(l),
            _ => None,
        }
    }

    /// Same system with a different orbital quantum number.
    pub fn with_l(&self, new_l: u32) -> Result<System> {
        let mut kind = self.kind.clone();
        match &mut kind {
            PotentialKind::CoulombRadial { l, .. }
            | PotentialKind::IsotropicOscillatorRadial { l, .. }
            | PotentialKind::HulthenRadial { l, .. }
            | PotentialKind::MorseRadialReduced { l, .. }
            | PotentialKind::CornellRelativistic { l, .. } => *l = new_l,
            _ => return Err(Error::Unsupported(format!("{} has no orbital quantum number", self.name()))),
        }
        System::new(kind, self.units.clone())
    }

    /// Centrifugal angular momentum `M = (l+½)ħ`, if the kind carries one.
    pub fn centrifugal_m(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::MorseRadialBare { .. } => None,
            _ => self.l().map(|l| (l as f64 + 0.5) * self.units.hbar),
        }
    }

    pub fn mass(&self) -> Option<f64> {
        match &self.kind {
            PotentialKind::Harmonic1D { m, .. }
            | PotentialKind::CoulombRadial { m, .. }
            | PotentialKind::IsotropicOscillatorRadial { m, .. }
            | PotentialKind::HulthenRadial { m, .. }
            | PotentialKind::MorseRadialBare { m, .. }
            | PotentialKind::MorseRadialReduced { m, .. } => Some(*m),
            PotentialKind::Tabulated1D(t) => Some(t.m),
            PotentialKind::CornellRelativistic { .. } => None,
        }
    }

    /// `α̃ = 4α_s/3` for the Cornell kind.
    pub fn cornell_alpha_tilde(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::CornellRelativistic { alpha_s, .. } => Some(4.0 * alpha_s / 3.0),
            _ => None,
        }
    }

    /// The potential V(x) (for Cornell, the funnel −α̃/r + κr without m_q).
    pub fn potential(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Harmonic1D { m, omega } | PotentialKind::IsotropicOscillatorRadial { m, omega, .. } => {
                0.5 * m * omega * omega * x * x
            }
            PotentialKind::CoulombRadial { alpha, .. } => -alpha / x,
            PotentialKind::HulthenRadial { v0, r0, .. } => -v0 / (x / r0).exp_m1(),
            PotentialKind::MorseRadialBare { v0, alpha, r0, .. }
            | PotentialKind::MorseRadialReduced { v0, alpha, r0, .. } => {
                let e = (-alpha * (x / r0 - 1.0)).exp();
                v0 * (e * e - 2.0 * e)
            }
            PotentialKind::CornellRelativistic { alpha_s, kappa, .. } => -4.0 * alpha_s / (3.0 * x) + kappa * x,
            PotentialKind::Tabulated1D(t) => t.eval(x),
        }
    }

    /// Coefficient `a` in `p² = a·s − W(x)`.
    pub fn spectral_coefficient(&self) -> f64 {
        match &self.kind {
            PotentialKind::CornellRelativistic { .. } => 0.25,
            _ => 2.0 * self.mass().unwrap(),
        }
    }

    pub fn spectral_variable(&self, energy: f64) -> f64 {
        if self.is_relativistic() {
            energy * energy
        } else {
            energy
        }
    }

    pub fn energy_from_spectral(&self, s: f64) -> f64 {
        if self.is_relativistic() {
            s.max(0.0).sqrt()
        } else {
            s
        }
    }

    /// `W(x)` in `p² = a·s − W(x)`.
    pub fn barrier(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::CornellRelativistic { m_q, alpha_s, kappa, l } => {
                let at = 4.0 * alpha_s / 3.0;
                let b = m_q - at / x + kappa * x;
                let lh = *l as f64 + 0.5;
                b * b + lh * lh / (x * x)
            }
            _ => {
                let m = self.mass().unwrap();
                let mut w = 2.0 * m * self.potential(x);
                if let Some(mm) = self.centrifugal_m() {
                    w += mm * mm / (x * x);
                }
                w
            }
        }
    }

    /// p² at spectral value `s`, without domain checks.
    #[inline]
    pub fn p2_spectral(&self, s: f64, x: f64) -> f64 {
        self.spectral_coefficient() * s - self.barrier(x)
    }

    /// Squared generalized momentum p²(E, x). May be negative.
    pub fn momentum_squared(&self, energy: f64, x: f64) -> Result<f64> {
        if !x.is_finite() || !energy.is_finite() {
            return Err(Error::Domain(format!("non-finite argument (E = {energy}, x = {x})")));
        }
        if x == 0.0 && self.singular_at_origin() {
            return Err(Error::Domain(format!("{}: r = 0 is excluded", self.name())));
        }
        Ok(self.p2_spectral(self.spectral_variable(energy), x))
    }

    /// Natural length of the problem.
    pub fn length_scale(&self) -> f64 {
        let hbar = self.units.hbar;
        match &self.kind {
            PotentialKind::Harmonic1D { m, omega } | PotentialKind::IsotropicOscillatorRadial { m, omega, .. } => {
                (hbar / (m * omega)).sqrt()
            }
            PotentialKind::CoulombRadial { m, alpha, .. } => hbar * hbar / (m * alpha),
            PotentialKind::HulthenRadial { r0, .. }
            | PotentialKind::MorseRadialBare { r0, .. }
            | PotentialKind::MorseRadialReduced { r0, .. } => *r0,
            PotentialKind::CornellRelativistic { kappa, .. } => 1.0 / kappa.sqrt(),
            PotentialKind::Tabulated1D(t) => {
                let (a, b) = t.span();
                b - a
            }
        }
    }

    /// Characteristic spacing in the spectral variable.
    pub fn spectral_scale(&self) -> f64 {
        let hbar = self.units.hbar;
        match &self.kind {
            PotentialKind::Harmonic1D { omega, .. } | PotentialKind::IsotropicOscillatorRadial { omega, .. } => {
                hbar * omega
            }
            PotentialKind::CoulombRadial { m, alpha, .. } => m * alpha * alpha / (hbar * hbar),
            PotentialKind::HulthenRadial { v0, .. }
            | PotentialKind::MorseRadialBare { v0, .. }
            | PotentialKind::MorseRadialReduced { v0, .. } => *v0,
            PotentialKind::CornellRelativistic { kappa, .. } => 8.0 * kappa,
            PotentialKind::Tabulated1D(t) => {
                let (lo, hi) = t.value_range();
                let (a, b) = t.span();
                (hi - lo).max(hbar * hbar / (t.m * (b - a) * (b - a)))
            }
        }
    }

    /// Spectral value above which the motion is unbounded, if finite.
    pub fn continuum_threshold(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::CoulombRadial { .. }
            | PotentialKind::HulthenRadial { .. }
            | PotentialKind::MorseRadialBare { .. }
            | PotentialKind::MorseRadialReduced { .. } => Some(0.0),
            _ => None,
        }
    }
}

fn parse_f64(config: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    let raw = config.get(key).ok_or_else(|| Error::config(key, "missing required parameter"))?;
    raw.trim().parse::<f64>().map_err(|_| Error::config(key, format!("not a number: {raw:?}")))
}

fn parse_f64_or(config: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    if config.contains_key(key) {
        parse_f64(config, key)
    } else {
        Ok(default)
    }
}

fn parse_l(config: &BTreeMap<String, String>) -> Result<u32> {
    match config.get("l") {
        None => Ok(0),
        Some(raw) => {
            raw.trim().parse::<u32>().map_err(|_| Error::config("l", format!("must be an integer >= 0, got {raw:?}")))
        }
    }
}

/// Reads a two-column `x,V` CSV (header optional).
pub fn read_tabulated_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::config("file", e.to_string()))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::config("file", e.to_string()))?;
        if rec.len() < 2 {
            return Err(Error::config("file", format!("row {} has fewer than two columns", i + 1)));
        }
        match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
            (Ok(x), Ok(v)) => {
                xs.push(x);
                vs.push(v);
            }
            _ if i == 0 => continue,
            _ => return Err(Error::config("file", format!("row {} is not numeric", i + 1))),
        }
    }
    Ok((xs, vs))
}

fn parse_inline_samples(raw: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for pair in raw.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, v) =
            pair.split_once(':').ok_or_else(|| Error::config("samples", format!("expected x:V, got {pair:?}")))?;
        let x = x.trim().parse::<f64>().map_err(|_| Error::config("samples", format!("bad x in {pair:?}")))?;
        let v = v.trim().parse::<f64>().map_err(|_| Error::config("samples", format!("bad V in {pair:?}")))?;
        xs.push(x);
        vs.push(v);
    }
    Ok((xs, vs))
}

const KNOWN_KEYS: &[&str] = &[
    "kind",
    "system",
    "hbar",
    "energy_unit",
    "m",
    "omega",
    "alpha",
    "l",
    "v0",
    "r0",
    "kappa",
    "alpha_s",
    "m_q",
    "file",
    "samples",
];

/// Builds a validated [`System`] from a flat key-value map.
///
/// Keys are case-insensitive. `kind` (or `system`) selects the family; `hbar`
/// defaults to 1.
pub fn build_system(config: &BTreeMap<String, String>) -> Result<System> {
    let config: BTreeMap<String, String> =
        config.iter().map(|(k, v)| (k.trim().to_ascii_lowercase(), v.trim().to_string())).collect();
    if let Some(unknown) = config.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(Error::config(unknown, "unknown parameter"));
    }
    let kind_name = config
        .get("kind")
        .or_else(|| config.get("system"))
        .ok_or_else(|| Error::config("kind", "missing system kind"))?
        .to_ascii_lowercase();
    let hbar = parse_f64_or(&config, "hbar", 1.0)?;
    let label = config.get("energy_unit").cloned().unwrap_or_default();
    let units = UnitSystem::new(hbar, label)?;

    let kind = match kind_name.as_str() {
        "harmonic" | "harmonic1d" => {
            PotentialKind::Harmonic1D { m: parse_f64(&config, "m")?, omega: parse_f64(&config, "omega")? }
        }
        "coulomb" => PotentialKind::CoulombRadial {
            m: parse_f64(&config, "m")?,
            alpha: parse_f64(&config, "alpha")?,
            l: parse_l(&config)?,
        },
        "isotropic" | "isotropic-oscillator" | "oscillator3d" => PotentialKind::IsotropicOscillatorRadial {
            m: parse_f64(&config, "m")?,
            omega: parse_f64(&config, "omega")?,
            l: parse_l(&config)?,
        },
        "hulthen" => PotentialKind::HulthenRadial {
            m: parse_f64(&config, "m")?,
            v0: parse_f64(&config, "v0")?,
            r0: parse_f64(&config, "r0")?,
            l: parse_l(&config)?,
        },
        "morse" | "morse-bare" => PotentialKind::MorseRadialBare {
            m: parse_f64(&config, "m")?,
            v0: parse_f64(&config, "v0")?,
            alpha: parse_f64(&config, "alpha")?,
            r0: parse_f64(&config, "r0")?,
        },
        "morse-reduced" => PotentialKind::MorseRadialReduced {
            m: parse_f64(&config, "m")?,
            v0: parse_f64(&config, "v0")?,
            alpha: parse_f64(&config, "alpha")?,
            r0: parse_f64(&config, "r0")?,
            l: parse_l(&config)?,
        },
        "cornell" => PotentialKind::CornellRelativistic {
            m_q: parse_f64_or(&config, "m_q", 0.0)?,
            alpha_s: parse_f64(&config, "alpha_s")?,
            kappa: parse_f64(&config, "kappa")?,
            l: parse_l(&config)?,
        },
        "tabulated" => {
            let m = parse_f64(&config, "m")?;
            let (xs, vs) = if let Some(file) = config.get("file") {
                read_tabulated_csv(Path::new(file))?
            } else if let Some(raw) = config.get("samples") {
                parse_inline_samples(raw)?
            } else {
                return Err(Error::config("samples", "tabulated kind needs `samples` or `file`"));
            };
            PotentialKind::Tabulated1D(TabulatedPotential::new(m, xs, vs)?)
        }
        other => return Err(Error::config("kind", format!("unknown system kind {other:?}"))),
    };
    System::new(kind, units)
}
