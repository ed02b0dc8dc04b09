use proptest::prelude::*;

use ccsurvive::cut::cut_along;
use ccsurvive::diagram::geometric_intersection;
use ccsurvive::graph::{distance, Budget, ComplexKind};
use ccsurvive::normal::{disjoint, NormalCurve};
use ccsurvive::registry::load_surface;
use ccsurvive::samples::{curves_in, random_curve, random_surviving, rng, witness_pool};
use ccsurvive::surface::Surface;
use ccsurvive::twist::dehn_twist;

fn surface(id: usize) -> Surface {
    load_surface(["S06", "S13"][id]).unwrap()
}

fn pair(s: &Surface, seed: u64) -> (NormalCurve, NormalCurve) {
    let mut r = rng(seed);
    (random_curve(s, &mut r, 3).unwrap(), random_curve(s, &mut r, 3).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_is_symmetric(id in 0..2usize, seed in any::<u64>()) {
        let s = surface(id);
        let (a, b) = pair(&s, seed);
        prop_assert_eq!(geometric_intersection(&s, &a, &b).unwrap(), geometric_intersection(&s, &b, &a).unwrap());
        prop_assert_eq!(geometric_intersection(&s, &a, &a).unwrap(), 0);
        prop_assert_eq!(disjoint(&s, &a, &b), geometric_intersection(&s, &a, &b).unwrap() == 0);
    }

    #[test]
    fn twists_compose(id in 0..2usize, seed in any::<u64>(), m in -5i64..=5, n in -5i64..=5) {
        let s = surface(id);
        let (a, b) = pair(&s, seed);
        let step = dehn_twist(&s, &a, m, &dehn_twist(&s, &a, n, &b).unwrap()).unwrap();
        let once = dehn_twist(&s, &a, m + n, &b).unwrap();
        prop_assert_eq!(step.code(), once.code());
    }

    #[test]
    fn twist_fixes_intersection_with_its_curve(id in 0..2usize, seed in any::<u64>(), n in -3i64..=3) {
        let s = surface(id);
        let (a, b) = pair(&s, seed);
        let moved = dehn_twist(&s, &a, n, &b).unwrap();
        prop_assert_eq!(geometric_intersection(&s, &moved, &a).unwrap(), geometric_intersection(&s, &b, &a).unwrap());
    }

    #[test]
    fn cutting_preserves_euler_characteristic(id in 0..2usize, seed in any::<u64>()) {
        let s = surface(id);
        let (a, b) = pair(&s, seed);
        let mut multi = vec![a];
        if disjoint(&s, &multi[0], &b) && multi[0] != b {
            multi.push(b);
        }
        let d = cut_along(&s, &multi).unwrap();
        prop_assert_eq!(d.euler_sum(), s.euler_characteristic());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn more_budget_never_hurts(id in 0..2usize, seed in any::<u64>()) {
        let s = surface(id);
        let mut r = rng(seed);
        let a = random_surviving(&s, &mut r, 2).unwrap();
        let b = random_surviving(&s, &mut r, 2).unwrap();
        for kind in [ComplexKind::Full, ComplexKind::Surviving] {
            let small = distance(&s, &a, &b, &kind, Budget::new(12)).unwrap();
            let large = distance(&s, &a, &b, &kind, Budget::new(20)).unwrap();
            prop_assert!(large.value <= small.value);
            prop_assert!(small.lower <= large.value && large.lower <= small.value);
            if small.exact {
                prop_assert!(large.exact && large.value == small.value);
            }
        }
    }

    #[test]
    fn subcomplexes_are_farther(id in 0..2usize, seed in any::<u64>()) {
        let s = surface(id);
        let mut r = rng(seed);
        let a = random_surviving(&s, &mut r, 2).unwrap();
        let b = random_surviving(&s, &mut r, 2).unwrap();
        let full = distance(&s, &a, &b, &ComplexKind::Full, Budget::new(20)).unwrap();
        let surv = distance(&s, &a, &b, &ComplexKind::Surviving, Budget::new(20)).unwrap();
        prop_assert!(surv.value >= full.lower);
        if full.exact && surv.exact {
            prop_assert!(surv.value >= full.value);
        }

        let pool = witness_pool(&s).unwrap();
        let w = &pool[(seed % pool.len() as u64) as usize];
        let inside = curves_in(&s, w).unwrap();
        if inside.len() >= 2 {
            let (x, y) = (&inside[0], &inside[inside.len() - 1]);
            let dw = distance(&s, x, y, &ComplexKind::Witness(w.clone()), Budget::new(20)).unwrap();
            let df = distance(&s, x, y, &ComplexKind::Full, Budget::new(20)).unwrap();
            prop_assert!(dw.value >= df.lower);
            if dw.exact && df.exact {
                prop_assert!(dw.value >= df.value);
            }
            // Curves of a witness miss z, so its curve graph sits inside the
            // surviving one.
            let ds = distance(&s, x, y, &ComplexKind::Surviving, Budget::new(20)).unwrap();
            prop_assert!(ds.lower <= dw.value);
        }
    }
}
