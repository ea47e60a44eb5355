//! Closed-form spectra used as oracles for the numerical quantizer.

use crate::error::{Error, Result};
use crate::model::{PotentialKind, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    Harmonic,
    Coulomb,
    IsotropicOscillator,
    Hulthen,
    MorseBare,
    MorseReduced,
    Cornell,
    CornellLinear,
}

impl FormulaId {
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Harmonic => "harmonic",
            FormulaId::Coulomb => "coulomb",
            FormulaId::IsotropicOscillator => "isotropic",
            FormulaId::Hulthen => "hulthen",
            FormulaId::MorseBare => "morse",
            FormulaId::MorseReduced => "morse-reduced",
            FormulaId::Cornell => "cornell",
            FormulaId::CornellLinear => "cornell-linear",
        }
    }
}

/// The closed-form spectrum attached to a system kind, if any.
pub fn formula_for(system: &System) -> Option<FormulaId> {
    Some(match system.kind() {
        PotentialKind::Harmonic1D { .. } => FormulaId::Harmonic,
        PotentialKind::CoulombRadial { .. } => FormulaId::Coulomb,
        PotentialKind::IsotropicOscillatorRadial { .. } => FormulaId::IsotropicOscillator,
        PotentialKind::HulthenRadial { .. } => FormulaId::Hulthen,
        PotentialKind::MorseRadialBare { .. } => FormulaId::MorseBare,
        PotentialKind::MorseRadialReduced { .. } => FormulaId::MorseReduced,
        PotentialKind::CornellRelativistic { .. } => FormulaId::Cornell,
        PotentialKind::Tabulated1D(_) => return None,
    })
}

/// Hulthén level for a given principal quantum number `N` (action units).
pub fn hulthen_energy(m: f64, v0: f64, r0: f64, big_n: f64) -> f64 {
    let a = 2.0 * m * v0 * r0 * r0 / big_n - big_n;
    -a * a / (8.0 * m * r0 * r0)
}

/// E² of the Cornell two-cut spectrum (ħ = c = 1).
pub fn cornell_energy_sq(alpha_s: f64, kappa: f64, n_r: u32, l: u32) -> f64 {
    let at = 4.0 * alpha_s / 3.0;
    let lh = l as f64 + 0.5;
    8.0 * kappa * (2.0 * (n_r as f64 + 0.5) + (lh * lh + at * at).sqrt() - at)
}

/// E² of the linearized Cornell spectrum. May be negative (unphysical).
pub fn linear_regge_energy_sq(alpha_s: f64, kappa: f64, n_r: u32, l: u32) -> f64 {
    8.0 * kappa * (2.0 * n_r as f64 + l as f64 - 4.0 * alpha_s / 3.0 + 1.5)
}

/// −V0·b², past the top of the parabola (b ≤ 0) the level is not bound.
fn morse_level(v0: f64, b: f64) -> Result<f64> {
    if b <= 0.0 {
        return Err(Error::Unbound { energy: -v0 * b * b });
    }
    Ok(-v0 * b * b)
}

/// Closed-form energy for radial quantum number `n_r` (or `n` in 1D), with
/// M = (l + ½)ħ.
pub fn exact_energy(system: &System, n_r: u32) -> Result<f64> {
    let hbar = system.hbar();
    let n = n_r as f64 + 0.5;
    let big_m = system.centrifugal_m().unwrap_or(0.0);
    Ok(match system.kind() {
        PotentialKind::Harmonic1D { omega, .. } => omega * hbar * n,
        PotentialKind::CoulombRadial { m, alpha, .. } => {
            let big_n = n * hbar + big_m;
            -alpha * alpha * m / (2.0 * big_n * big_n)
        }
        PotentialKind::IsotropicOscillatorRadial { omega, .. } => omega * (2.0 * hbar * n + big_m),
        PotentialKind::HulthenRadial { m, v0, r0, .. } => {
            let big_n = n * hbar + big_m;
            if big_n * big_n >= 2.0 * m * v0 * r0 * r0 {
                return Err(Error::Unbound { energy: hulthen_energy(*m, *v0, *r0, big_n) });
            }
            hulthen_energy(*m, *v0, *r0, big_n)
        }
        PotentialKind::MorseRadialBare { m, v0, alpha, r0 } => {
            let b = 1.0 - alpha * hbar * n / (r0 * (2.0 * m * v0).sqrt());
            morse_level(*v0, b)?
        }
        PotentialKind::MorseRadialReduced { m, v0, alpha, r0, .. } => {
            // Kept for b < 0 too, where the reduced well is read with two cuts.
            let b = 1.0 - alpha * (2.0 * hbar * n + big_m) / (r0 * (2.0 * m * v0).sqrt());
            -v0 * b * b
        }
        PotentialKind::CornellRelativistic { alpha_s, kappa, l, .. } => {
            cornell_energy_sq(*alpha_s, *kappa, n_r, *l).sqrt()
        }
        PotentialKind::Tabulated1D(_) => {
            return Err(Error::Unsupported("tabulated potentials have no closed-form spectrum".into()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UnitSystem;

    fn sys(kind: PotentialKind) -> System {
        System::new(kind, UnitSystem::default()).unwrap()
    }

    #[test]
    fn examples() {
        let h = sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 });
        assert_eq!(exact_energy(&h, 4).unwrap(), 4.5);

        let c = sys(PotentialKind::CornellRelativistic { m_q: 0.0, alpha_s: 0.75, kappa: 0.14, l: 1 });
        let e = exact_energy(&c, 0).unwrap();
        // 1.12·√3.25
        assert!((e * e - 2.019_108_714_259_83).abs() < 1e-12, "{}", e * e);
        assert!((e - 1.420_953_452_531).abs() < 1e-11);

        let hul = sys(PotentialKind::HulthenRadial { m: 1.0, v0: 2.0, r0: 1.0, l: 0 });
        assert!((exact_energy(&hul, 0).unwrap() + 1.125).abs() < 1e-15);
        assert_eq!(exact_energy(&hul, 1), Err(Error::Unbound { energy: 0.0 }));

        let mor = sys(PotentialKind::MorseRadialBare { m: 1.0, v0: 1.0, alpha: 1.0, r0: 1.0 });
        assert!((exact_energy(&mor, 0).unwrap() + 0.417_893).abs() < 1e-6);
        assert!(matches!(exact_energy(&mor, 1), Err(Error::Unbound { .. })));
        let morr = sys(PotentialKind::MorseRadialReduced { m: 1.0, v0: 1.0, alpha: 1.0, r0: 1.0, l: 0 });
        assert!((exact_energy(&morr, 0).unwrap() + 0.003_679_7).abs() < 1e-7);
    }

    #[test]
    fn linear_form() {
        assert!((linear_regge_energy_sq(0.75, 0.14, 0, 0) - 0.56).abs() < 1e-12);
        assert!((linear_regge_energy_sq(0.0, 0.14, 0, 0) - 1.68).abs() < 1e-12);
        for n_r in 0..4 {
            for l in 0..4 {
                let d = linear_regge_energy_sq(0.75, 0.14, n_r, l + 1) - linear_regge_energy_sq(0.75, 0.14, n_r, l);
                assert!((d - 8.0 * 0.14).abs() < 1e-12);
                assert!(
                    (cornell_energy_sq(0.0, 0.14, n_r, l) - linear_regge_energy_sq(0.0, 0.14, n_r, l)).abs() < 1e-12
                );
            }
        }
    }

    #[test]
    fn hulthen_m0_matches_textbook_form() {
        let (m, v0, r0) = (1.0, 2.0, 1.0);
        for n in 1..=3 {
            let nf = n as f64;
            let textbook = -((2.0 * m * v0 * r0 * r0 - nf * nf) / (2.0 * nf)).powi(2) / (2.0 * m * r0 * r0);
            assert!((hulthen_energy(m, v0, r0, nf) - textbook).abs() < 1e-14);
        }
        assert_eq!(hulthen_energy(m, v0, r0, 1.0), -1.125);
    }

    #[test]
    fn coulomb_rydberg_limit() {
        let c = sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: 0 });
        // N = 100 at n_r = 99, l = 0
        let e = exact_energy(&c, 99).unwrap();
        assert!((e * 100.0 * 100.0 + 0.5).abs() < 1e-12);
    }
}
