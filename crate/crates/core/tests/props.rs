//! Property tests over randomized scenarios and special-function arguments.

use proptest::prelude::*;
use udn_sg_core::analytic::{coverage_probability, laplace_interference, rho};
use udn_sg_core::quad::QuadratureControl;
use udn_sg_core::specfun::{hurwitz_zeta, sum_inv_quadratic, SeriesControl};
use udn_sg_core::{Deployment, DeploymentKind, PathLossModel, Scenario};

const CTRL: QuadratureControl = QuadratureControl {
    abs_tol: 1e-10,
    rel_tol: 1e-8,
    max_subdivisions: 200,
    product_truncation: 1e-12,
};

fn scenario_strategy() -> impl Strategy<Value = Scenario> {
    (
        prop_oneof![
            Just((DeploymentKind::Ppp, 1u8)),
            Just((DeploymentKind::Ppp, 2u8)),
            Just((DeploymentKind::Line, 1u8)),
            Just((DeploymentKind::Hex, 2u8)),
        ],
        0.05f64..20.0,  // lambda
        0.0f64..1.5,    // h
        prop_oneof![Just(true), Just(false)], // l0 vs l1
    )
        .prop_map(|((kind, dim), lambda, h, use_l0)| {
            let alpha = if dim == 1 { 2.0 } else { 4.0 };
            let model = if use_l0 { PathLossModel::l0(alpha) } else { PathLossModel::l1(h, alpha) };
            let deployment = Deployment { kind, dimension: dim, lambda };
            Scenario::noiseless(deployment, model)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pc_is_probability_and_monotone(scenario in scenario_strategy(), t in 0.05f64..20.0) {
        let p1 = coverage_probability(&scenario, t, &CTRL).unwrap();
        let p2 = coverage_probability(&scenario, 1.5 * t, &CTRL).unwrap();
        prop_assert!((0.0..=1.0).contains(&p1), "pc = {p1}");
        prop_assert!(p2 <= p1 + 1e-7, "pc not monotone: {p1} -> {p2}");
    }

    #[test]
    fn laplace_lies_in_unit_interval(scenario in scenario_strategy(), s in 0.0f64..50.0) {
        let ups = scenario.deployment.isd();
        let r = 0.3 * ups;
        let theta = (scenario.deployment.kind == DeploymentKind::Hex).then_some(0.2);
        let lap = laplace_interference(&scenario, s, r, theta, &CTRL).unwrap();
        // lattice products at large s can underflow f64 to exactly 0
        prop_assert!((0.0..=1.0).contains(&lap), "L = {lap}");
        if s < 1.0 {
            prop_assert!(lap > 0.0, "L = {lap} at s = {s}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hurwitz_recurrence_holds(s in 1.05f64..9.0, a in 0.05f64..30.0) {
        let ctrl = SeriesControl::default();
        let lhs = hurwitz_zeta(s, a, &ctrl).unwrap() - hurwitz_zeta(s, a + 1.0, &ctrl).unwrap();
        let rhs = a.powf(-s);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs.abs().max(1e-30), "{lhs} vs {rhs}");
    }

    #[test]
    fn rho_positive_and_increasing(t in 0.01f64..50.0, which in prop_oneof![Just((4.0, 2u8)), Just((2.0, 1u8)), Just((3.0, 2u8))]) {
        let (alpha, d) = which;
        let r1 = rho(t, alpha, d, &CTRL).unwrap();
        let r2 = rho(2.0 * t, alpha, d, &CTRL).unwrap();
        prop_assert!(r1 > 0.0);
        prop_assert!(r2 > r1);
    }

    #[test]
    fn quadratic_sum_decreasing(c in 0.01f64..50.0) {
        let a = sum_inv_quadratic(c).unwrap();
        let b = sum_inv_quadratic(c * 1.1).unwrap();
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }

    #[test]
    fn path_gain_ordering(h in 0.001f64..5.0, alpha in 2.1f64..6.0, r in 0.0f64..30.0) {
        let l1 = PathLossModel::l1(h, alpha).gain(r).unwrap();
        let l2 = PathLossModel::l2(h, alpha).gain(r).unwrap();
        prop_assert!(l2 >= l1);
        if h > 0.0 {
            prop_assert!(l1 <= h.powf(-alpha) * (1.0 + 1e-12));
        }
    }
}
