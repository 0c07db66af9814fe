mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::lp::{compare_random, random_lp};
use wvg_core::{Constraint, LPOutcome, Rational, SimplexState};

#[test]
fn simplex_matches_vertex_enumeration() {
    let tally = compare_random(0x5eed, 12_000);
    // every outcome kind is well represented
    assert!(tally.iter().all(|&t| t > 500), "{tally:?}");
}

#[test]
fn warm_started_rows_match_cold_solves() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
    for case in 0..3_000 {
        let (lp, _, _) = random_lp(&mut rng);
        let (first, mut state) = SimplexState::solve(lp.clone());
        let (extra, sys, c) = random_lp(&mut rng);
        if extra.num_vars() != lp.num_vars() {
            continue;
        }
        let _ = (sys, c);
        let rows: Vec<Constraint> = extra.constraints().to_vec();
        let warm = state.add_constraints(rows.clone());
        let mut full = lp.clone();
        for r in rows {
            full.add_constraint(r);
        }
        let (cold, _) = SimplexState::solve(full.clone());
        assert!(
            warm.same_result(&cold),
            "case {case} (first {first:?}): warm {warm:?} cold {cold:?}\n{full}"
        );
        if let LPOutcome::Optimal { solution, .. } = &warm {
            assert!(full.is_feasible(solution));
        }
        // switching the objective afterwards also agrees with a cold solve
        let objective: Vec<Rational> = (0..lp.num_vars())
            .map(|_| Rational::from_int(rng.gen_range(-3..=3)))
            .collect();
        let warm = state.set_objective(objective.clone());
        full.set_objective(objective);
        let (cold, _) = SimplexState::solve(full);
        assert!(warm.same_result(&cold), "case {case}: objective switch");
    }
}
