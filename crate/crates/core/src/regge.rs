//! Cornell meson spectroscopy: spectroscopic labels, the two-cut mass
//! formula, a bounded two-parameter least-squares fit and the ρ-family table.

use std::path::Path;

use rayon::prelude::*;

use crate::analytic::{cornell_energy_sq, linear_regge_energy_sq};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelParts {
    pub n_r: u32,
    pub l: u32,
    /// Total spin S = (multiplicity − 1)/2.
    pub s: u32,
    pub j: u32,
}

const L_LETTERS: &[char] = &['S', 'P', 'D', 'F', 'G'];

fn parse_uint(chars: &[char], pos: &mut usize, what: &str) -> Result<u32> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if *pos == start {
        return Err(Error::Parse { position: start, reason: format!("expected {what}") });
    }
    let text: String = chars[start..*pos].iter().collect();
    text.parse().map_err(|_| Error::Parse { position: start, reason: format!("{what} out of range") })
}

fn expect(chars: &[char], pos: &mut usize, c: char) -> Result<()> {
    if chars.get(*pos) == Some(&c) {
        *pos += 1;
        Ok(())
    } else {
        Err(Error::Parse { position: *pos, reason: format!("expected '{c}'") })
    }
}

/// Parses `n^(2S+1)L_J`, e.g. `1^3S_1`.
pub fn parse_label(label: &str) -> Result<LabelParts> {
    let chars: Vec<char> = label.trim().chars().collect();
    let mut pos = 0;
    let n = parse_uint(&chars, &mut pos, "radial number n")?;
    if n == 0 {
        return Err(Error::Parse { position: 0, reason: "n must be >= 1".into() });
    }
    expect(&chars, &mut pos, '^')?;
    let mult_pos = pos;
    let mult = parse_uint(&chars, &mut pos, "multiplicity 2S+1")?;
    if mult % 2 == 0 {
        return Err(Error::Parse { position: mult_pos, reason: format!("multiplicity {mult} is not odd") });
    }
    let l = match chars.get(pos).and_then(|c| L_LETTERS.iter().position(|x| x == c)) {
        Some(l) => l as u32,
        None => return Err(Error::Parse { position: pos, reason: "expected one of S, P, D, F, G".into() }),
    };
    pos += 1;
    expect(&chars, &mut pos, '_')?;
    let j = parse_uint(&chars, &mut pos, "total angular momentum J")?;
    if pos != chars.len() {
        return Err(Error::Parse { position: pos, reason: "trailing characters".into() });
    }
    Ok(LabelParts { n_r: n - 1, l, s: (mult - 1) / 2, j })
}

pub fn format_label(parts: &LabelParts) -> String {
    format!("{}^{}{}_{}", parts.n_r + 1, 2 * parts.s + 1, L_LETTERS[parts.l as usize], parts.j)
}

/// `E = √(8κ[2(n_r+½) + √((l+½)² + α̃²) − α̃])`, α̃ = 4α_s/3, in GeV.
pub fn meson_energy(alpha_s: f64, kappa: f64, n_r: u32, l: u32) -> f64 {
    cornell_energy_sq(alpha_s, kappa, n_r, l).sqrt()
}

/// `M = √(E² − C²)`; `None` when the shift exceeds the energy.
pub fn shifted_mass(energy: f64, c: f64) -> Option<f64> {
    let m2 = energy * energy - c * c;
    (m2 >= 0.0).then(|| m2.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MesonState {
    pub label: String,
    pub n_r: u32,
    pub l: u32,
    pub exp_mass: Option<f64>,
    pub pinned: bool,
}

impl MesonState {
    pub fn new(label: &str, exp_mass: Option<f64>, pinned: bool) -> Result<Self> {
        let p = parse_label(label)?;
        Ok(MesonState { label: label.trim().to_string(), n_r: p.n_r, l: p.l, exp_mass, pinned })
    }
}

/// ρ-family rows: label, tabulated theory mass, experimental mass, fitted (starred).
pub const TABLE1: &[(&str, f64, Option<f64>, bool)] = &[
    ("1^3S_1", 0.763, Some(0.768), true),
    ("1^3P_2", 1.319, Some(1.318), true),
    ("1^3D_3", 1.703, Some(1.691), true),
    ("1^3F_4", 2.014, Some(2.037), false),
    ("1^3G_5", 2.284, None, false),
    ("2^3S_1", 1.703, Some(1.700), true),
    ("2^3P_2", 2.014, None, false),
    ("2^3D_3", 2.284, None, false),
    ("2^3F_4", 2.525, None, false),
];

pub fn table1_states() -> Vec<MesonState> {
    TABLE1
        .iter()
        .map(|&(label, _, exp, pinned)| MesonState::new(label, exp, pinned).expect("embedded labels parse"))
        .collect()
}

/// Reads `label, exp_mass_gev, pinned` rows (header required; empty mass allowed).
pub fn read_states_csv(path: &Path) -> Result<Vec<MesonState>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::config("states", e.to_string()))?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::config("states", e.to_string()))?;
        let bad = |what: &str| Error::config("states", format!("row {}: bad {what}", i + 1));
        let label = rec.get(0).ok_or_else(|| bad("label"))?;
        let mass = match rec.get(1).unwrap_or("") {
            "" | "-" => None,
            t => Some(t.parse::<f64>().map_err(|_| bad("exp_mass_gev"))?),
        };
        let pinned = match rec.get(2).unwrap_or("").to_ascii_lowercase().as_str() {
            "" | "0" | "false" | "no" => false,
            "1" | "true" | "yes" | "*" => true,
            _ => return Err(bad("pinned")),
        };
        out.push(MesonState::new(label, mass, pinned)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitObjective {
    #[default]
    Mass,
    MassSquared,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub alpha_s: f64,
    pub kappa: f64,
    /// √(mean (E − E_exp)²) in GeV, whatever the objective.
    pub rms_residual: f64,
    /// (label, E − E_exp) per fitted state.
    pub residuals: Vec<(String, f64)>,
    pub objective: FitObjective,
}

pub const ALPHA_S_RANGE: (f64, f64) = (0.0, 3.0);
pub const KAPPA_RANGE: (f64, f64) = (0.001, 2.0);

fn objective_value(obj: FitObjective, states: &[(u32, u32, f64)], a: f64, k: f64) -> f64 {
    states
        .iter()
        .map(|&(n_r, l, m)| {
            let d = match obj {
                FitObjective::Mass => meson_energy(a, k, n_r, l) - m,
                FitObjective::MassSquared => cornell_energy_sq(a, k, n_r, l) - m * m,
            };
            d * d
        })
        .sum()
}

/// Best grid cell of `cells × cells` over the box; ties go to the lower index.
fn grid_min(
    obj: FitObjective,
    data: &[(u32, u32, f64)],
    (a0, a1): (f64, f64),
    (k0, k1): (f64, f64),
    cells: usize,
) -> (f64, f64, f64) {
    let vals: Vec<(f64, f64, f64)> = (0..=cells * (cells + 1) + cells)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / (cells + 1), idx % (cells + 1));
            let a = a0 + (a1 - a0) * i as f64 / cells as f64;
            let k = k0 + (k1 - k0) * j as f64 / cells as f64;
            (objective_value(obj, data, a, k), a, k)
        })
        .collect();
    vals.into_iter().fold((f64::INFINITY, 0.0, 0.0), |best, v| if v.0 < best.0 { v } else { best })
}

/// Bounded least squares over (α_s, κ): a coarse grid, then repeated zooms.
pub fn fit_parameters(states: &[MesonState], use_pinned_only: bool, objective: FitObjective) -> Result<FitResult> {
    let used: Vec<&MesonState> =
        states.iter().filter(|s| s.exp_mass.is_some() && (!use_pinned_only || s.pinned)).collect();
    if used.len() < 2 {
        return Err(Error::Fit(format!("{} usable states; at least two are needed", used.len())));
    }
    let data: Vec<(u32, u32, f64)> = used.iter().map(|s| (s.n_r, s.l, s.exp_mass.unwrap())).collect();

    let (mut ar, mut kr) = (ALPHA_S_RANGE, KAPPA_RANGE);
    let mut cells = 120;
    let (mut best, mut a, mut k) = grid_min(objective, &data, ar, kr, cells);
    cells = 20;
    for _ in 0..200 {
        let (da, dk) = ((ar.1 - ar.0) / 10.0, (kr.1 - kr.0) / 10.0);
        if da < 1e-13 && dk < 1e-13 {
            break;
        }
        ar = ((a - 2.0 * da).max(ALPHA_S_RANGE.0), (a + 2.0 * da).min(ALPHA_S_RANGE.1));
        kr = ((k - 2.0 * dk).max(KAPPA_RANGE.0), (k + 2.0 * dk).min(KAPPA_RANGE.1));
        let cand = grid_min(objective, &data, ar, kr, cells);
        if cand.0 < best {
            (best, a, k) = cand;
        }
    }
    let residuals: Vec<(String, f64)> =
        used.iter().map(|s| (s.label.clone(), meson_energy(a, k, s.n_r, s.l) - s.exp_mass.unwrap())).collect();
    let rms = (residuals.iter().map(|(_, d)| d * d).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(FitResult { alpha_s: a, kappa: k, rms_residual: rms, residuals, objective })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub label: String,
    pub n_r: u32,
    pub l: u32,
    /// Two-cut formula at the given parameters (optionally mass-shifted).
    pub e_theory: f64,
    /// Linearized formula; `None` when E² < 0.
    pub e_linear: Option<f64>,
    /// Tabulated theory mass.
    pub e_tabulated: f64,
    pub e_exp: Option<f64>,
    pub pinned: bool,
    /// e_theory − e_exp.
    pub diff: Option<f64>,
}

/// All nine ρ-family rows at (α_s, κ), with an optional shift M² = E² − C².
pub fn table1_report(alpha_s: f64, kappa: f64, mass_shift: Option<f64>) -> Vec<TableRow> {
    TABLE1
        .iter()
        .map(|&(label, tabulated, exp, pinned)| {
            let p = parse_label(label).expect("embedded labels parse");
            let mut e = meson_energy(alpha_s, kappa, p.n_r, p.l);
            if let Some(c) = mass_shift {
                e = shifted_mass(e, c).unwrap_or(f64::NAN);
            }
            let lin = linear_regge_energy_sq(alpha_s, kappa, p.n_r, p.l);
            TableRow {
                label: label.to_string(),
                n_r: p.n_r,
                l: p.l,
                e_theory: e,
                e_linear: (lin >= 0.0).then(|| lin.sqrt()),
                e_tabulated: tabulated,
                e_exp: exp,
                pinned,
                diff: exp.map(|x| e - x),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_examples() {
        assert_eq!(parse_label("1^3S_1").unwrap(), LabelParts { n_r: 0, l: 0, s: 1, j: 1 });
        assert_eq!(parse_label("2^3P_2").unwrap(), LabelParts { n_r: 1, l: 1, s: 1, j: 2 });
        assert_eq!(parse_label("1^3G_5").unwrap(), LabelParts { n_r: 0, l: 4, s: 1, j: 5 });
        for (label, _, _, _) in TABLE1 {
            assert_eq!(format_label(&parse_label(label).unwrap()), *label);
        }
        assert_eq!(
            parse_label("1^3X_1"),
            Err(Error::Parse { position: 3, reason: "expected one of S, P, D, F, G".into() })
        );
        assert!(matches!(parse_label("1-3S_1"), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_label("0^3S_1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_label("1^3S_1x"), Err(Error::Parse { position: 6, .. })));
    }

    #[test]
    fn energy_examples() {
        assert!((meson_energy(0.75, 0.14, 0, 0) - 1.11902).abs() < 1e-5);
        assert!((meson_energy(0.0, 0.14, 0, 0) - 1.29615).abs() < 1e-5);
        let d = linear_regge_energy_sq(0.6, 0.2, 1, 0) - linear_regge_energy_sq(0.6, 0.2, 0, 2);
        assert_eq!(d, 0.0);
        assert_eq!(shifted_mass(1.0, 2.0), None);
        assert!((shifted_mass(5.0, 3.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn monotonicity() {
        for n_r in 0..3 {
            for l in 0..3 {
                let e = meson_energy(0.5, 0.2, n_r, l);
                assert!(meson_energy(0.5, 0.2, n_r + 1, l) > e);
                assert!(meson_energy(0.5, 0.2, n_r, l + 1) > e);
                assert!(meson_energy(0.5, 0.21, n_r, l) > e);
                assert!(meson_energy(0.51, 0.2, n_r, l) < e);
            }
        }
    }

    #[test]
    fn fit_round_trip_and_errors() {
        let states: Vec<MesonState> = TABLE1
            .iter()
            .map(|&(label, _, _, _)| {
                let p = parse_label(label).unwrap();
                MesonState::new(label, Some(meson_energy(0.6, 0.2, p.n_r, p.l)), true).unwrap()
            })
            .collect();
        let fit = fit_parameters(&states, true, FitObjective::Mass).unwrap();
        assert!((fit.alpha_s - 0.6).abs() < 1e-4 && (fit.kappa - 0.2).abs() < 1e-4, "{fit:?}");
        let again = fit_parameters(&states, true, FitObjective::Mass).unwrap();
        assert_eq!(fit, again);
        let single = vec![states[0].clone()];
        assert!(matches!(fit_parameters(&single, false, FitObjective::Mass), Err(Error::Fit(_))));
    }

    #[test]
    fn table_rows() {
        let rows = table1_report(0.75, 0.14, None);
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[3].e_exp, Some(2.037));
        for i in [4, 6, 7, 8] {
            assert_eq!(rows[i].e_exp, None);
        }
        assert!((rows[0].e_theory - 1.11902).abs() < 1e-5);
    }
}
