use intsep::fast::{check_invariants, check_lineage, init_state, solve_fast};
use intsep::gen::{gen_random, GenSpec};
use intsep::model::{is_feasible, left_possible_placement, max_displacement, Direction};
use intsep::oracle::brute_force;
use intsep::prelim::solve_preliminary;

#[test]
fn small_instances_match_brute_force() {
    for seed in 0..1500u64 {
        let n = 1 + (seed % 8) as usize;
        let inst = gen_random(&GenSpec::new(n, seed));
        let brute = brute_force(&inst).unwrap();
        let prelim = solve_preliminary(&inst);
        let fast = solve_fast(&inst);
        assert_eq!(brute.delta, prelim.delta, "prelim seed {seed}: {inst:?}");
        assert_eq!(brute.delta, fast.delta, "fast seed {seed}: {inst:?}");
        let sol = fast.reconstruct(&inst).unwrap();
        assert_eq!(
            left_possible_placement(&inst, &sol.order).unwrap(),
            sol.config
        );
        assert!(is_feasible(&sol.config, &inst, Direction::One));
        assert_eq!(max_displacement(&sol.config, &inst), fast.delta);

        let mut state = init_state(&inst);
        while state.step().is_some() {
            let v = check_invariants(&state);
            assert!(
                v.is_empty(),
                "seed {seed} step {}: {v:?}",
                state.processed()
            );
            let v = check_lineage(&state);
            assert!(
                v.is_empty(),
                "seed {seed} step {}: {v:?}",
                state.processed()
            );
        }
    }
}

#[test]
fn mid_instances_match_preliminary() {
    for seed in 0..300u64 {
        let n = 1 + (seed % 200) as usize;
        let inst = gen_random(&GenSpec::new(n, 10_000 + seed));
        let prelim = solve_preliminary(&inst);
        let fast = solve_fast(&inst);
        assert_eq!(prelim.delta, fast.delta, "seed {seed}");
        let sol = fast.reconstruct(&inst).unwrap();
        assert!(is_feasible(&sol.config, &inst, Direction::One));
        let mut state = init_state(&inst);
        while state.step().is_some() {
            assert!(check_invariants(&state).is_empty(), "seed {seed}");
        }
    }
}

#[test]
fn targeted_instances_reach_rare_branches() {
    use intsep::Instance;
    let tie = Instance::from_pairs([
        (10, 17),
        (1, 7),
        (12, 15),
        (11, 13),
        (13, 15),
        (2, 5),
        (12, 13),
    ])
    .unwrap();
    let f = solve_fast(&tie);
    assert!(f.coverage.flag_count("spawn-tie") > 0);
    assert_eq!(f.delta, brute_force(&tie).unwrap().delta);

    let dropped = Instance::from_pairs([
        (15, 25),
        (16, 17),
        (20, 23),
        (16, 17),
        (19, 24),
        (23, 24),
        (21, 22),
        (16, 17),
        (23, 24),
        (16, 17),
    ])
    .unwrap();
    let f = solve_fast(&dropped);
    assert!(f.coverage.flag_count("insert-outer-dropped") > 0);
    assert_eq!(f.delta, brute_force(&dropped).unwrap().delta);
}
