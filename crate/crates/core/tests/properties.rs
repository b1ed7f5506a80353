use catenary_core::classify::{classify, expected_regime, ClassifyConfig, Regime};
use catenary_core::conservation::momentum_drift;
use catenary_core::dynamics::{integrate, interpolation_residual, reflection_defect, SolverConfig, StopReason};
use catenary_core::model::{curvature_relation_residual, PowerParams};
use proptest::prelude::*;

fn alpha() -> impl Strategy<Value = f64> {
    prop_oneof![0.25..4.0f64, -0.9..-0.1f64, -4.0..-1.0f64]
}

fn r0() -> impl Strategy<Value = f64> {
    prop_oneof![0.05..0.95f64, 1.05..5.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solutions_satisfy_the_equation_between_samples(a in alpha(), r0 in r0()) {
        let p = PowerParams::new(a).unwrap();
        let t = integrate(&p, r0, &SolverConfig::default()).unwrap();
        prop_assert!(interpolation_residual(&t) <= 1e-6);
    }

    #[test]
    fn curvature_matches_the_angle_relation(a in alpha(), r0 in r0()) {
        let p = PowerParams::new(a).unwrap();
        let t = integrate(&p, r0, &SolverConfig::default()).unwrap();
        for s in t.samples().iter().step_by(7) {
            let (r, dr, ddr) = t.eval(s.s).unwrap();
            let k = catenary_core::model::curvature(r, dr, ddr);
            let res = curvature_relation_residual(&p, r, dr, ddr).unwrap();
            prop_assert!(res.abs() <= 1e-7 * k.abs().max(1.0), "s {} residual {res:e}", s.s);
        }
    }

    #[test]
    fn momentum_is_conserved_away_from_the_circle(a in alpha(), r0 in r0()) {
        let p = PowerParams::new(a).unwrap();
        let t = integrate(&p, r0, &SolverConfig::default()).unwrap();
        if !matches!(t.stop_reason(), StopReason::SingularUnit | StopReason::NearOrigin) {
            prop_assert!(momentum_drift(&t) <= 1e-8);
        }
    }

    #[test]
    fn two_sided_runs_are_even(a in 0.25..3.0f64, r0 in 0.1..0.9f64) {
        let p = PowerParams::new(a).unwrap();
        let cfg = SolverConfig { two_sided: true, ..SolverConfig::default() };
        let t = integrate(&p, r0, &cfg).unwrap();
        prop_assert!(reflection_defect(&t).unwrap() <= 1e-6);
    }

    #[test]
    fn classification_never_contradicts_the_theorems(a in alpha(), r0 in r0()) {
        let p = PowerParams::new(a).unwrap();
        let rep = classify(&p, r0, &ClassifyConfig::default()).unwrap();
        prop_assert!(rep.regime == expected_regime(&p, r0) || rep.regime == Regime::Unresolved);
        prop_assert_eq!(rep.period.is_some(), rep.regime == Regime::PeriodicInner);
        prop_assert_eq!(rep.blowup_angle.is_some(), rep.regime == Regime::OuterAsymptotic);
        prop_assert_eq!(
            rep.orthogonality_defect.is_some(),
            matches!(rep.regime, Regime::OrthogonalHitConvex | Regime::OrthogonalHitConcave)
        );
    }
}

#[test]
fn near_equilibrium_orbits_may_wind_around_the_origin() {
    // alpha in (-1, 0) with r0 just below 1/(1+alpha): recorded, not asserted
    let p = PowerParams::new(-0.5).unwrap();
    let rep = classify(&p, 1.95, &ClassifyConfig::default()).unwrap();
    assert_eq!(rep.regime, Regime::OrthogonalHitConcave, "{:?}", rep.notes);
    println!("angular extent at r0 = 1.95: {:.4}", rep.angular_extent);
}
