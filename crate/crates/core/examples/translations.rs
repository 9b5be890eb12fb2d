//! Strong, strong-cyclic and Dual FOND planning as FOND+ problems over the
//! Figure 1 model, each solved natively and through its reduction.
//!
//! cargo run --example translations

use std::collections::BTreeSet;

use fondplus::bench::figure1_model;
use fondplus::solver::{solve, SolveOptions, SolveStatus};
use fondplus::termination::{dual_terminates, verify_strong, verify_strong_cyclic};
use fondplus::translate::{
    dual_to_fondplus, strong_cyclic_to_fondplus, strong_to_fondplus, DualFond,
};

fn status(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Solved => "solved",
        SolveStatus::Unsolvable => "unsolvable",
        SolveStatus::ResourceLimit => "resource limit",
    }
}

fn main() {
    let m = figure1_model();
    let opts = SolveOptions::default();

    let strong = solve(&strong_to_fondplus(&m), &opts);
    println!("strong:        {} (no constraints)", status(strong.status));

    let cyclic = solve(&strong_cyclic_to_fondplus(&m), &opts);
    let pi = cyclic.policy.expect("figure 1 is strong-cyclic solvable");
    assert!(verify_strong_cyclic(&m, &pi) && !verify_strong(&m, &pi));
    println!(
        "strong-cyclic: {} (one constraint: all non-deterministic actions fair)",
        status(cyclic.status)
    );

    for fair in [vec![], vec!["a"], vec!["b"], vec!["a", "b"]] {
        let set: BTreeSet<_> = fair.iter().map(|n| m.action_by_name(n).unwrap()).collect();
        let d = DualFond::from_fair_set(m.clone(), &set);
        let res = solve(&dual_to_fondplus(&d), &opts);
        if let Some(pi) = &res.policy {
            assert!(dual_terminates(&d, pi));
        }
        println!("dual fair={fair:?}: {}", status(res.status));
    }
}
