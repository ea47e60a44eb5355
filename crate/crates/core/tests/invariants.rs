//! Property-based invariants across modules.

use std::f64::consts::PI;

use proptest::prelude::*;

use wkb0::analytic::{cornell_energy_sq, exact_energy, hulthen_energy, linear_regge_energy_sq};
use wkb0::cuts::{
    default_window, find_cuts, refine_turning_point, Axes, Window, DEFAULT_SCAN_POINTS, TURNING_POINT_REL_TOL,
};
use wkb0::model::angular_momentum;
use wkb0::phase::{cut_action, phase_function};
use wkb0::quantize::{condition_value, default_spec, quantize_2tp, quantize_multitp, quantize_state, QuantizationSpec};
use wkb0::refsolver::{reference_solve, Centrifugal, Grid, ReferenceProblem};
use wkb0::regge::meson_energy;
use wkb0::report::fmt_float;
use wkb0::{PotentialKind, System, UnitSystem};

fn sys(kind: PotentialKind) -> System {
    System::new(kind, UnitSystem::default()).unwrap()
}

fn radial_kinds(l: u32) -> Vec<System> {
    vec![
        sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l }),
        sys(PotentialKind::IsotropicOscillatorRadial { m: 1.0, omega: 1.0, l }),
        sys(PotentialKind::HulthenRadial { m: 1.0, v0: 2.0, r0: 1.0, l }),
        sys(PotentialKind::MorseRadialReduced { m: 1.0, v0: 8.0, alpha: 1.0, r0: 1.0, l }),
        sys(PotentialKind::CornellRelativistic { m_q: 0.0, alpha_s: 0.75, kappa: 0.14, l }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn centrifugal_dominates_at_origin(l in 0u32..6, e in -2.0f64..2.0) {
        for s in radial_kinds(l) {
            let mut last = f64::INFINITY;
            for k in 4..10 {
                let p2 = s.momentum_squared(e, 10f64.powi(-k)).unwrap();
                prop_assert!(p2 < last, "{}: p2 not decreasing toward r = 0", s.name());
                last = p2;
            }
            prop_assert!(last < -1e10);
        }
    }

    #[test]
    fn momentum_squared_is_continuous(l in 0u32..4, x in 0.05f64..8.0) {
        let mut systems = radial_kinds(l);
        systems.push(sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 }));
        systems.push(sys(PotentialKind::MorseRadialBare { m: 1.0, v0: 1.0, alpha: 1.0, r0: 1.0 }));
        for s in systems {
            let a = s.momentum_squared(-0.1, x).unwrap();
            let b = s.momentum_squared(-0.1, x + 1e-9).unwrap();
            prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{}: {a} vs {b}", s.name());
        }
    }

    #[test]
    fn angular_momentum_square_is_exact(l in 0i64..1000, hbar in 0.1f64..10.0) {
        let units = UnitSystem::with_hbar(hbar).unwrap();
        let m = angular_momentum(l, &units).unwrap().m;
        let expected = (l as f64 + 0.5) * (l as f64 + 0.5) * hbar * hbar;
        prop_assert!((m * m - expected).abs() <= 2.0 * f64::EPSILON * expected);
    }

    #[test]
    fn cornell_bracket_maps_onto_itself(r in 0.01f64..50.0) {
        // r ↦ α̃/(κr) flips the sign of −α̃/r + κr, so its square is invariant.
        let (at, kappa) = (1.0, 0.14);
        let image = at / (kappa * r);
        let f = |r: f64| (-at / r + kappa * r).powi(2);
        prop_assert!((f(r) - f(image)).abs() <= 1e-12 * (1.0 + f(r)));
    }

    #[test]
    fn turning_points_change_sign(e in 0.2f64..30.0) {
        let s = sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 });
        let a = (2.0 * e).sqrt();
        let x = refine_turning_point(&s, e, (0.5 * a, 2.0 * a)).unwrap();
        let eps = 10.0 * TURNING_POINT_REL_TOL * x.abs();
        let lo = s.momentum_squared(e, x - eps).unwrap();
        let hi = s.momentum_squared(e, x + eps).unwrap();
        prop_assert!(lo * hi < 0.0);
    }

    #[test]
    fn harmonic_cuts_are_symmetric(e in 0.2f64..30.0) {
        let s = sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 });
        let cuts = find_cuts(&s, e, default_window(&s, e), DEFAULT_SCAN_POINTS).unwrap();
        prop_assert_eq!(cuts.nu(), 1);
        let c = &cuts.cuts[0];
        prop_assert!((c.x1 + c.x2).abs() <= 1e-10 * c.x2);
    }

    #[test]
    fn phase_function_reaches_the_action(e in 0.2f64..30.0, l in 0u32..4) {
        for s in [
            sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 }),
            sys(PotentialKind::IsotropicOscillatorRadial { m: 1.0, omega: 1.0, l }),
        ] {
            let e = e + (l as f64 + 0.5);
            let cuts = find_cuts(&s, e, default_window(&s, e), DEFAULT_SCAN_POINTS).unwrap();
            let c = &cuts.cuts[0];
            let action = cut_action(&s, e, c).unwrap().value;
            let phi = phase_function(&s, e, c, c.x2).unwrap();
            prop_assert!((phi - action / s.hbar()).abs() <= 1e-10 * phi.abs());
        }
    }

    #[test]
    fn action_grows_with_energy(e in 0.3f64..20.0, de in 0.01f64..5.0, l in 0u32..3) {
        let s = sys(PotentialKind::IsotropicOscillatorRadial { m: 1.0, omega: 1.0, l });
        let (e0, e1) = (e + l as f64 + 0.5, e + de + l as f64 + 0.5);
        let i0: f64 = find_cuts(&s, e0, default_window(&s, e0), DEFAULT_SCAN_POINTS).unwrap()
            .cuts.iter().map(|c| cut_action(&s, e0, c).unwrap().value).sum();
        let i1: f64 = find_cuts(&s, e1, default_window(&s, e1), DEFAULT_SCAN_POINTS).unwrap()
            .cuts.iter().map(|c| cut_action(&s, e1, c).unwrap().value).sum();
        prop_assert!(i1 > i0);
    }

    #[test]
    fn coulomb_levels_depend_on_principal_number(n in 1u32..8, l in 0u32..5) {
        let a = quantize_2tp(&sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l }), n).unwrap().energy;
        let b = quantize_2tp(&sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: l + 1 }), n - 1).unwrap().energy;
        prop_assert!((a - b).abs() <= 1e-9 * a.abs());
    }

    #[test]
    fn meson_energy_is_monotone(n in 0u32..4, l in 0u32..5, a in 0.0f64..1.5, k in 0.05f64..0.5) {
        let e = meson_energy(a, k, n, l);
        prop_assert!(meson_energy(a, k, n + 1, l) > e);
        prop_assert!(meson_energy(a, k, n, l + 1) > e);
        prop_assert!(meson_energy(a, k * 1.01, n, l) > e);
        prop_assert!(meson_energy(a + 0.01, k, n, l) < e);
    }

    #[test]
    fn formulas_coincide_without_coupling(n in 0u32..10, l in 0u32..10, k in 0.01f64..1.0) {
        let exact = cornell_energy_sq(0.0, k, n, l);
        let linear = linear_regge_energy_sq(0.0, k, n, l);
        prop_assert!((exact - linear).abs() <= 1e-12 * exact.abs());
        let slope = linear_regge_energy_sq(0.6, k, n, l + 1) - linear_regge_energy_sq(0.6, k, n, l);
        prop_assert!((slope - 8.0 * k).abs() <= 1e-12);
    }

    #[test]
    fn float_format_round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
        let s = fmt_float(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-14 * v.abs(), "{v} -> {s}");
        prop_assert_eq!(fmt_float(back), s);
    }
}

#[test]
fn detection_is_monotone_in_scan_points() {
    let catalog = vec![
        (sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 }), 2.5),
        (sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: 1 }), -0.055_555_555_555_555_6),
        (sys(PotentialKind::IsotropicOscillatorRadial { m: 1.0, omega: 1.0, l: 2 }), 5.5),
        (sys(PotentialKind::CornellRelativistic { m_q: 0.0, alpha_s: 0.75, kappa: 0.14, l: 1 }), 1.420_953_452_531_023),
    ];
    for (s, e) in catalog {
        let w = default_window(&s, e);
        let counts: Vec<usize> = [64, 256, 1024].iter().map(|&p| find_cuts(&s, e, w, p).unwrap().nu()).collect();
        assert!(counts.windows(2).all(|c| c[1] >= c[0]), "{}: {counts:?}", s.name());
    }
    assert!(find_cuts(&sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 }), 1.0, Window::new(-3.0, 3.0).unwrap(), 8)
        .is_err());
}

#[test]
fn harmonic_action_closed_form() {
    let s = sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 });
    for k in 0..=20 {
        let e = k as f64 + 0.5;
        let cuts = find_cuts(&s, e, default_window(&s, e), DEFAULT_SCAN_POINTS).unwrap();
        let i = cut_action(&s, e, &cuts.cuts[0]).unwrap().value;
        assert!((i / PI - e).abs() <= 1e-11 * e, "E = {e}: {}", i / PI);
    }
}

#[test]
fn levels_increase_and_residuals_hold() {
    let systems = vec![
        sys(PotentialKind::Harmonic1D { m: 1.0, omega: 1.0 }),
        sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: 2 }),
        sys(PotentialKind::IsotropicOscillatorRadial { m: 1.0, omega: 1.0, l: 1 }),
        sys(PotentialKind::MorseRadialBare { m: 1.0, v0: 60.0, alpha: 1.0, r0: 1.0 }),
        sys(PotentialKind::CornellRelativistic { m_q: 0.0, alpha_s: 0.75, kappa: 0.14, l: 2 }),
    ];
    for s in systems {
        let mut last = f64::NEG_INFINITY;
        for n in 0..=10 {
            let r = quantize_state(&s, n).unwrap();
            assert!(r.energy > last, "{} n = {n}", s.name());
            last = r.energy;
            let (f, _) = condition_value(&s, r.energy, &default_spec(&s, n)).unwrap();
            assert!(f.abs() <= 1e-10 * PI * s.hbar(), "{} n = {n}: residual {f}", s.name());
        }
    }
}

#[test]
fn multi_cut_condition_forms_agree() {
    for l in 0..3 {
        let s = sys(PotentialKind::CornellRelativistic { m_q: 0.0, alpha_s: 0.75, kappa: 0.14, l });
        for n in 0..3 {
            let per_cut = quantize_multitp(&s, &QuantizationSpec::per_cut(vec![n, n]).with_axes(Axes::Both)).unwrap();
            let maslov = quantize_multitp(&s, &QuantizationSpec::maslov(2 * n, 4).with_axes(Axes::Both)).unwrap();
            assert!((per_cut.energy - maslov.energy).abs() <= 1e-10 * per_cut.energy, "l = {l}, n = {n}");
        }
    }
}

#[test]
fn analytic_limits() {
    for big_n in [1.0f64, 2.0, 3.0] {
        // Textbook l = 0 form with integer n = N.
        let textbook = -((4.0 - big_n * big_n) / (2.0 * big_n)).powi(2) / 2.0;
        assert!((hulthen_energy(1.0, 2.0, 1.0, big_n) - textbook).abs() <= 1e-15);
    }
    // n_r = 99, l = 0 gives N = 100.
    let c = sys(PotentialKind::CoulombRadial { m: 1.0, alpha: 1.0, l: 0 });
    let e = exact_energy(&c, 99).unwrap();
    assert!((e * 100.0 * 100.0 + 0.5).abs() <= 1e-12);
}

#[test]
fn reference_grid_refinement_converges() {
    let s = sys(PotentialKind::IsotropicOscillatorRadial { m: 1.0, omega: 1.0, l: 1 });
    let p = ReferenceProblem::new(s, Centrifugal::TrueL).unwrap();
    let grid = Grid { x_min: -8.0, x_max: 2.0, step: 0.02 };
    let coarse = reference_solve(&p.clone().with_grid(grid).unwrap(), 1).unwrap();
    let fine = reference_solve(&p.with_grid(Grid { step: 0.01, ..grid }).unwrap(), 1).unwrap();
    let d1 = (coarse.energy_step - coarse.energy_half_step).abs();
    let d2 = (fine.energy_step - fine.energy_half_step).abs();
    assert!(d1 >= d2, "{d1} < {d2}");
    assert!((fine.energy - 4.5).abs() < 1e-6);
}
