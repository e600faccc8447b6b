#[path = "common/series.rs"]
mod series;

use std::f64::consts::PI;

use exchange_budget::exchange::{
    exchange_unitary, gate_error_leading_order, gate_error_vs_phase, phase_from_pulse,
    swap_power_target, ExchangePhase, ProfileSample, PulseSpec,
};
use exchange_budget::linalg::{
    kron, pauli_x, pauli_y, pauli_z, process_fidelity, swap_matrix, Complex64, ComplexMat, Unitary4,
};
use proptest::prelude::*;

fn u(theta: f64) -> Unitary4 {
    exchange_unitary(ExchangePhase::new(theta).unwrap())
}

/// `exp(-iφ n·σ/2)` on one qubit, tensored with itself.
fn global_rotation(phi: f64, n: [f64; 3]) -> Unitary4 {
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let (c, s) = ((phi / 2.0).cos(), (phi / 2.0).sin());
    let gen = pauli_x().scale(Complex64::new(n[0] / len, 0.0))
        + pauli_y().scale(Complex64::new(n[1] / len, 0.0))
        + pauli_z().scale(Complex64::new(n[2] / len, 0.0));
    let r1 = ComplexMat::identity(2)
        .unwrap()
        .scale(Complex64::new(c, 0.0))
        - gen.scale(Complex64::new(0.0, s));
    Unitary4::new(kron(&r1, &r1).unwrap()).unwrap()
}

#[test]
fn matches_series_exponential() {
    for k in -40..=40 {
        let theta = 0.25 * k as f64;
        let d = series::max_diff(&series::exchange_oracle(theta), u(theta).matrix());
        assert!(d < 1e-10, "theta = {theta}: {d:e}");
    }
}

#[test]
fn swap_powers_hit_their_targets() {
    for alpha in [0.0, 0.25, 0.5, 1.0, 2.0, -0.5, 3.7] {
        let f = process_fidelity(&u(PI * alpha), &swap_power_target(alpha).unwrap());
        assert!(f >= 1.0 - 1e-12, "alpha = {alpha}: {f}");
    }
    let swap = Unitary4::new(swap_matrix()).unwrap();
    assert!(process_fidelity(&u(PI), &swap) > 1.0 - 1e-15);
}

#[test]
fn gate_error_leading_order_agrees_for_small_errors() {
    for d in [1e-6, 1e-4, 1e-3, 1e-2] {
        let rel = (gate_error_vs_phase(d) - gate_error_leading_order(d)).abs()
            / gate_error_leading_order(d);
        assert!(rel < d * d, "{d}: {rel:e}");
    }
}

#[test]
fn gate_error_stays_accurate_for_tiny_errors() {
    // (3/8)(1 - cos x) computed naively returns 0 here
    let d = 1e-9;
    let rel = (gate_error_vs_phase(d) - 3.0 / 16.0 * d * d).abs() / (3.0 / 16.0 * d * d);
    assert!(rel < 1e-12);
}

proptest! {
    #[test]
    fn group_law(a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let lhs = u(a) * u(b);
        prop_assert!(lhs.matrix().max_abs_diff(u(a + b).matrix()) < 1e-12);
    }

    #[test]
    fn unitary_for_any_phase(theta in -100.0f64..100.0) {
        prop_assert!(u(theta).matrix().unitary_deviation() < 1e-12);
    }

    #[test]
    fn commutes_with_swap(theta in -20.0f64..20.0) {
        let m = *u(theta).matrix();
        prop_assert!(m.commutator(&swap_matrix()).entries().iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn commutes_with_global_rotations(
        theta in -20.0f64..20.0,
        phi in -7.0f64..7.0,
        n in prop::array::uniform3(-1.0f64..1.0),
    ) {
        prop_assume!(n.iter().map(|x| x * x).sum::<f64>() > 1e-3);
        let r = global_rotation(phi, n);
        let m = *u(theta).matrix();
        prop_assert!(m.commutator(r.matrix()).entries().iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn fidelity_is_left_invariant(a in -10.0f64..10.0, b in -10.0f64..10.0, phi in -7.0f64..7.0) {
        let w = global_rotation(phi, [0.3, -0.5, 0.8]) * u(0.7);
        let f0 = process_fidelity(&u(a), &u(b));
        let f1 = process_fidelity(&(w * u(a)), &(w * u(b)));
        prop_assert!((f0 - f1).abs() < 1e-12);
    }

    #[test]
    fn infidelity_matches_closed_form(a in -10.0f64..10.0, b in -10.0f64..10.0) {
        let numeric = 1.0 - process_fidelity(&u(a), &u(b));
        prop_assert!((numeric - gate_error_vs_phase(a - b)).abs() < 1e-12);
    }

    #[test]
    fn gate_error_even_and_periodic(d in -50.0f64..50.0) {
        prop_assert!((gate_error_vs_phase(d) - gate_error_vs_phase(-d)).abs() < 1e-15);
        prop_assert!((gate_error_vs_phase(d) - gate_error_vs_phase(d + 2.0 * PI)).abs() < 1e-12);
        prop_assert!((0.0..=0.75 + 1e-15).contains(&gate_error_vs_phase(d)));
    }

    #[test]
    fn only_pulse_area_matters(
        j in 1e6f64..1e11,
        t in 1e-12f64..1e-7,
        shape in prop::collection::vec(0.0f64..1.0, 2..12),
    ) {
        // constant pulses with equal area
        let p1 = PulseSpec::constant(j, t).unwrap();
        let p2 = PulseSpec::constant(j * 2.0, t / 2.0).unwrap();
        let (t1, t2) = (phase_from_pulse(&p1).value(), phase_from_pulse(&p2).value());
        prop_assert!((t1 - t2).abs() <= 1e-12 * t1.abs().max(1.0));

        // an arbitrary piecewise-linear profile rescaled to the same area
        let n = shape.len();
        let dt = t / (n - 1) as f64;
        let raw: Vec<ProfileSample> = shape
            .iter()
            .enumerate()
            .map(|(i, &s)| ProfileSample { t: i as f64 * dt, j_rad_s: s + 0.01 })
            .collect();
        let area = PulseSpec::profile(raw.clone()).unwrap().area();
        let k = p1.area() / area;
        let scaled: Vec<ProfileSample> = raw
            .iter()
            .map(|s| ProfileSample { t: s.t, j_rad_s: s.j_rad_s * k })
            .collect();
        let p3 = PulseSpec::profile(scaled).unwrap();
        let u1 = exchange_unitary(phase_from_pulse(&p1));
        let u3 = exchange_unitary(phase_from_pulse(&p3));
        prop_assert!(u1.matrix().max_abs_diff(u3.matrix()) < 1e-9);
    }
}
