//! Solver soundness, completeness at desk scale, option invariance and
//! determinism.

mod common;

use common::{all_policies, random_problem, rng};
use fondplus::bench::{clear_qnp, figure1, gen_f01, gen_f11, gen_qnp2, Base};
use fondplus::oracle::fair_lasso_oracle;
use fondplus::solver::{prune_hopeless, solve, ActionOrder, SolveOptions, SolveStatus};
use fondplus::termination::{verify_fondplus, verify_strong, verify_strong_cyclic};
use fondplus::translate::{qnp_to_fondplus, strong_cyclic_to_fondplus, strong_to_fondplus};
use fondplus::{FondPlusProblem, Policy};

fn brute_force_solvable(p: &FondPlusProblem) -> bool {
    all_policies(p.model())
        .iter()
        .any(|pi| fair_lasso_oracle(p, pi).unwrap().solves)
}

fn option_grid() -> Vec<SolveOptions> {
    let mut grid = Vec::new();
    for action_order in [ActionOrder::Declaration, ActionOrder::Degree] {
        for restart_on_conflict in [false, true] {
            for prune in [false, true] {
                grid.push(SolveOptions {
                    action_order,
                    restart_on_conflict,
                    prune,
                    ..SolveOptions::default()
                });
            }
        }
    }
    grid
}

#[test]
fn complete_and_sound_on_small_problems() {
    let mut r = rng(0x501e);
    let grid = option_grid();
    for i in 0..3000 {
        let p = random_problem(&mut r, 2 + i % 3, 1 + i % 3, 2);
        let expected = brute_force_solvable(&p);
        for opts in &grid {
            let res = solve(&p, opts);
            assert_eq!(
                res.status == SolveStatus::Solved,
                expected,
                "problem {i} with {opts:?}: {p:?}"
            );
            assert_ne!(res.status, SolveStatus::ResourceLimit);
            if let Some(pi) = &res.policy {
                assert!(verify_fondplus(&p, pi).solves);
                assert!(fair_lasso_oracle(&p, pi).unwrap().solves);
            }
        }
    }
}

#[test]
fn prune_never_rejects_a_completable_policy() {
    let mut r = rng(0x9e11);
    for i in 0..1500 {
        let p = random_problem(&mut r, 2 + i % 5, 1 + i % 3, 2);
        for pi in all_policies(p.model()) {
            if !fair_lasso_oracle(&p, &pi).unwrap().solves {
                continue;
            }
            // every restriction of a solution to a prefix of its states is completable
            let entries: Vec<_> = pi.iter().collect();
            for k in 0..=entries.len() {
                let partial: Policy = entries[..k].iter().copied().collect();
                assert!(
                    !prune_hopeless(&p, &partial),
                    "{p:?}\npartial {partial:?} of {pi:?}"
                );
            }
        }
    }
}

#[test]
fn deterministic_results() {
    let mut r = rng(0xde7);
    for i in 0..300 {
        let p = random_problem(&mut r, 2 + i % 6, 1 + i % 3, 2);
        let opts = SolveOptions::default();
        let a = solve(&p, &opts);
        let b = solve(&p, &opts);
        assert_eq!(a.status, b.status);
        assert_eq!(a.policy, b.policy);
        assert_eq!(
            (
                a.stats.nodes_expanded,
                a.stats.verifier_calls,
                a.stats.backtracks
            ),
            (
                b.stats.nodes_expanded,
                b.stats.verifier_calls,
                b.stats.backtracks
            )
        );
    }
}

#[test]
fn specialized_semantics() {
    let mut r = rng(0x5bec);
    for i in 0..500 {
        let m = random_problem(&mut r, 2 + i % 6, 1 + i % 3, 0)
            .model()
            .clone();
        if let Some(pi) = solve(&strong_to_fondplus(&m), &SolveOptions::default()).policy {
            assert!(verify_strong(&m, &pi));
        }
        if let Some(pi) = solve(&strong_cyclic_to_fondplus(&m), &SolveOptions::default()).policy {
            assert!(verify_strong_cyclic(&m, &pi));
        }
    }
}

#[test]
fn figure1_c7_single_policy() {
    let res = solve(&figure1(7).unwrap(), &SolveOptions::default());
    let pi = res.policy.unwrap();
    let rendered: Vec<(u32, u32)> = pi.iter().map(|(s, a)| (s.0, a.0)).collect();
    assert_eq!(rendered, [(0, 0), (1, 1), (2, 1)]);
}

#[test]
fn clear_policy_is_two_rules() {
    let g = qnp_to_fondplus(&clear_qnp()).unwrap();
    let p = g.problem();
    assert_eq!(p.constraints().len(), 1);
    assert!(p.model().num_states() <= 6);
    let pi = solve(p, &SolveOptions::default()).policy.unwrap();
    let m = p.model();
    // "if p and n>0, do a; if not p and n>0, do b"
    for (s, a) in pi.iter() {
        let atoms: Vec<&str> = m
            .state_label(s)
            .trim_matches(|c| c == '{' || c == '}')
            .split(';')
            .collect();
        assert!(!atoms.contains(&"p_n"), "goal state assigned");
        let expected = if atoms.contains(&"p") { "a" } else { "b" };
        assert_eq!(m.action_name(a), expected, "state {}", m.state_label(s));
    }
    assert!(verify_fondplus(p, &pi).solves);
}

#[test]
fn family_statuses() {
    for n in 2..=6 {
        let f01 = gen_f01(Base::Qnp1, n).unwrap();
        assert_eq!(
            solve(&f01, &SolveOptions::default()).status,
            SolveStatus::Unsolvable,
            "f01 qnp1 {n}"
        );
        let f01 = gen_f01(Base::Qnp2, n).unwrap();
        assert_eq!(
            solve(&f01, &SolveOptions::default()).status,
            SolveStatus::Unsolvable,
            "f01 qnp2 {n}"
        );
        let q2 = qnp_to_fondplus(&gen_qnp2(n)).unwrap();
        assert_eq!(
            solve(q2.problem(), &SolveOptions::default()).status,
            SolveStatus::Solved,
            "qnp2 {n}"
        );
    }
    for n in 2..=4 {
        for base in [Base::Qnp1, Base::Qnp2] {
            let f11 = gen_f11(base, n).unwrap();
            assert_eq!(
                solve(&f11, &SolveOptions::default()).status,
                SolveStatus::Solved,
                "f11 {base:?} {n}"
            );
        }
    }
}

#[test]
fn state_cap_is_a_resource_limit() {
    let p = qnp_to_fondplus(&gen_qnp2(4)).unwrap();
    let opts = SolveOptions {
        max_states: 3,
        ..SolveOptions::default()
    };
    let res = solve(p.problem(), &opts);
    assert_eq!(res.status, SolveStatus::ResourceLimit);
    assert!(res.policy.is_none());
}
