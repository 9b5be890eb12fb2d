//! The Figure 1 problem under the eight constraint sets: the fixed policy
//! `s0 -> a, s1 -> b, s2 -> b` is verified and the solver is run on each.
//!
//! cargo run --example figure1_matrix

use fondplus::bench::{figure1, figure1_expected};
use fondplus::solver::{solve, SolveOptions, SolveStatus};
use fondplus::termination::verify_fondplus;
use fondplus::{ActionId, Policy, StateId};

fn main() {
    let pi: Policy = [
        (StateId(0), ActionId(0)),
        (StateId(1), ActionId(1)),
        (StateId(2), ActionId(1)),
    ]
    .into_iter()
    .collect();
    println!("variant  constraints               verify  solve");
    for v in 1..=8 {
        let p = figure1(v).unwrap();
        let m = p.model();
        let constraints: Vec<String> = p
            .constraints()
            .iter()
            .map(|c| {
                let names = |set: &std::collections::BTreeSet<ActionId>| {
                    set.iter()
                        .map(|&a| m.action_name(a))
                        .collect::<Vec<_>>()
                        .join(",")
                };
                format!("{{{}}}/{{{}}}", names(&c.a_set), names(&c.b_set))
            })
            .collect();
        let verdict = verify_fondplus(&p, &pi);
        assert_eq!(Some(verdict.solves), figure1_expected(v));
        let res = solve(&p, &SolveOptions::default());
        let solved = res.status == SolveStatus::Solved;
        println!(
            "C{v}       {:<24}  {:<6}  {}",
            constraints.join(" "),
            if verdict.solves { "yes" } else { "no" },
            if solved { "solved" } else { "unsolvable" }
        );
    }
}
