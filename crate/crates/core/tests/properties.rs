use intsep::fast::solve_fast;
use intsep::format::{parse_instance, render_instance};
use intsep::model::{
    is_feasible, left_possible_placement, max_displacement, to_two_direction, Direction, Instance,
};
use intsep::oracle::brute_force;
use intsep::prelim::solve_preliminary;
use intsep::{solve, Scalar};
use proptest::prelude::*;

fn pairs(max_n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..40, 1i64..15), 1..=max_n)
        .prop_map(|v| v.into_iter().map(|(l, len)| (l, l + len)).collect())
}

fn instance(pairs: &[(Scalar, Scalar)]) -> Instance {
    Instance::from_pairs(pairs.iter().cloned()).unwrap()
}

fn scalars(p: &[(i64, i64)]) -> Vec<(Scalar, Scalar)> {
    p.iter()
        .map(|&(l, r)| (Scalar::from(l), Scalar::from(r)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn translation_shifts_positions(p in pairs(12), num in -50i128..50, den in 1i128..6) {
        let t = Scalar::ratio(num, den);
        let base = scalars(&p);
        let moved: Vec<_> = base.iter().map(|(l, r)| (l + &t, r + &t)).collect();
        let a = instance(&base);
        let b = instance(&moved);
        let sa = solve_fast(&a).reconstruct(&a).unwrap();
        let sb = solve_fast(&b).reconstruct(&b).unwrap();
        prop_assert_eq!(&sa.delta, &sb.delta);
        for (r, pos) in sa.config.iter() {
            prop_assert_eq!(sb.config.position(r).unwrap(), &(pos + &t));
        }
    }

    #[test]
    fn scaling_scales_delta(p in pairs(12), num in 1i128..20, den in 1i128..7) {
        let s = Scalar::ratio(num, den);
        let base = scalars(&p);
        let scaled: Vec<_> = base.iter().map(|(l, r)| (l * &s, r * &s)).collect();
        let da = solve_fast(&instance(&base)).delta;
        let db = solve_fast(&instance(&scaled)).delta;
        prop_assert_eq!(da * s, db);
    }

    #[test]
    fn reflection_keeps_two_direction_value(p in pairs(12), c in -20i64..20) {
        let base = scalars(&p);
        let axis = Scalar::from(2 * c);
        let mirrored: Vec<_> = base.iter().map(|(l, r)| (&axis - r, &axis - l)).collect();
        let a = solve(&instance(&base), Direction::Two);
        let b = solve(&instance(&mirrored), Direction::Two);
        prop_assert_eq!(a.delta, b.delta);
    }

    #[test]
    fn placement_is_pointwise_minimal(
        p in pairs(9),
        keys in prop::collection::vec(any::<u32>(), 9),
        gaps in prop::collection::vec(0i64..5, 9),
    ) {
        let inst = instance(&scalars(&p));
        let mut order: Vec<usize> = (0..inst.len()).collect();
        order.sort_by_key(|&r| keys[r]);
        let placed = left_possible_placement(&inst, &order).unwrap();
        prop_assert!(is_feasible(&placed, &inst, Direction::One));
        // Any other feasible placement in the same order: push each interval
        // right by an arbitrary extra gap.
        let mut end: Option<Scalar> = None;
        for (k, &r) in order.iter().enumerate() {
            let iv = &inst[r];
            let floor = match &end { Some(e) if e > iv.left() => e.clone(), _ => iv.left().clone() };
            let pos = floor + Scalar::from(gaps[k]);
            prop_assert!(placed.position(r).unwrap() <= &pos);
            end = Some(&pos + iv.length());
        }
        prop_assert!(brute_force(&inst).unwrap().delta <= max_displacement(&placed, &inst));
    }

    #[test]
    fn rational_coordinates_match_brute_force(
        v in prop::collection::vec((-30i128..30, 1i128..4, 1i128..20, 1i128..4), 1..=7)
    ) {
        let raw: Vec<(Scalar, Scalar)> = v
            .iter()
            .map(|&(l, ld, len, lend)| {
                let left = Scalar::ratio(l, ld);
                let right = &left + &Scalar::ratio(len, lend);
                (left, right)
            })
            .collect();
        let inst = instance(&raw);
        let brute = brute_force(&inst).unwrap().delta;
        prop_assert_eq!(&solve_preliminary(&inst).delta, &brute);
        let fast = solve_fast(&inst);
        prop_assert_eq!(&fast.delta, &brute);
        let sol = fast.reconstruct(&inst).unwrap();
        let two = to_two_direction(&sol);
        prop_assert!(is_feasible(&two.config, &inst, Direction::Two));
        prop_assert_eq!(max_displacement(&two.config, &inst), brute.half());
    }

    #[test]
    fn instance_text_round_trips(v in prop::collection::vec((-100i128..100, 1i128..9, 1i128..50), 1..20)) {
        let raw: Vec<(Scalar, Scalar)> = v
            .iter()
            .map(|&(l, d, len)| (Scalar::ratio(l, d), Scalar::ratio(l + len, d)))
            .collect();
        let inst = instance(&raw);
        prop_assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
    }
}
