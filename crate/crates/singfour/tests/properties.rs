mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_case, rescaled};
use singfour::detect::{classify_point, PointKind};
use singfour::geometry::{real_part, to_complex};
use singfour::problem::bypass_side;

const KINDS: [PointKind; 5] = [
    PointKind::NonSpecial,
    PointKind::SpInterior,
    PointKind::SpOnSurface,
    PointKind::SpOnCrossing,
    PointKind::TripleCrossing,
];

fn kind_strategy() -> impl Strategy<Value = PointKind> {
    prop::sample::select(KINDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn constructed_kind_is_recovered(seed in any::<u64>(), kind in kind_strategy()) {
        let case = random_case(&mut ChaCha8Rng::seed_from_u64(seed), kind);
        let sp = classify_point(&case.problem, &case.point).unwrap();
        prop_assert_eq!(sp.kind, kind);
        prop_assert!(sp.verdict.is_some());
    }

    #[test]
    fn witnesses_are_tangent_and_not_level(seed in any::<u64>()) {
        let case = random_case(&mut ChaCha8Rng::seed_from_u64(seed), PointKind::NonSpecial);
        let sp = classify_point(&case.problem, &case.point).unwrap();
        let a = sp.witness.expect("non-special point without witness");
        let x = *case.point.vector();
        for &k in &sp.components {
            let gg = real_part(&case.problem.amplitude.components[k].g.gradient(&to_complex(&x)));
            prop_assert!(a.dot(&gg).abs() <= 1e-9 * a.norm() * gg.norm());
        }
        let gp = case.problem.phase.real_gradient(&case.point);
        prop_assert!(a.dot(&gp).abs() > 1e-6 * a.norm() * gp.norm());
        prop_assert!(!sp.contributes());
    }

    #[test]
    fn verdicts_survive_positive_rescaling(
        seed in any::<u64>(),
        kind in kind_strategy(),
        c in prop::collection::vec(0.05f64..20.0, 4),
        s in 0.1f64..2.0,
    ) {
        let case = random_case(&mut ChaCha8Rng::seed_from_u64(seed), kind);
        let base = classify_point(&case.problem, &case.point).unwrap();
        let n = case.problem.amplitude.components.len();
        let scaled = rescaled(&case.problem, &c[..n]);
        let sp = classify_point(&scaled, &case.point).unwrap();
        prop_assert_eq!(sp.kind, base.kind);
        prop_assert_eq!(sp.contributes(), base.contributes());
        let shifted = case.problem.with_shift(case.problem.shift.scaled(s).unwrap());
        prop_assert_eq!(classify_point(&shifted, &case.point).unwrap().contributes(), base.contributes());
        for k in &base.components {
            let a = bypass_side(&case.problem.shift, &case.problem.amplitude.components[*k], &case.point).unwrap();
            let b = bypass_side(&scaled.shift, &scaled.amplitude.components[*k], &case.point).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn reversing_the_shift_flips_every_side(seed in any::<u64>(), kind in kind_strategy()) {
        let case = random_case(&mut ChaCha8Rng::seed_from_u64(seed), kind);
        let flipped = case.problem.shift.scaled(-1.0).unwrap();
        let sp = classify_point(&case.problem, &case.point).unwrap();
        for &k in &sp.components {
            let comp = &case.problem.amplitude.components[k];
            let a = bypass_side(&case.problem.shift, comp, &case.point).unwrap();
            let b = bypass_side(&flipped, comp, &case.point).unwrap();
            prop_assert_eq!(a.sign(), -b.sign());
        }
    }

    #[test]
    fn a_single_surface_contributes_for_exactly_one_shift_direction(seed in any::<u64>()) {
        let case = random_case(&mut ChaCha8Rng::seed_from_u64(seed), PointKind::SpOnSurface);
        let up = classify_point(&case.problem, &case.point).unwrap();
        let down = classify_point(&case.problem.with_shift(case.problem.shift.scaled(-1.0).unwrap()), &case.point).unwrap();
        prop_assert!(up.contributes() != down.contributes());
    }
}
