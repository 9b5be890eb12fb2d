//! QNP termination: the edge-removal Sieve on a qnp2 policy, the inductive
//! labeling, and a strong-cyclic policy that the Sieve accepts but FOND+
//! rejects under `C5 = {a}/{b}`.
//!
//! cargo run --example sieve

use std::collections::{BTreeMap, BTreeSet};

use fondplus::bench::{figure1, gen_qnp2};
use fondplus::solver::{solve, SolveOptions};
use fondplus::termination::{qnp_terminates, sieve_qnp, verify_fondplus, verify_strong_cyclic};
use fondplus::translate::{qnp_to_fondplus, QnpAnnotation};
use fondplus::{ActionId, Policy, StateId};

fn main() {
    let g = qnp_to_fondplus(&gen_qnp2(2)).unwrap();
    let m = g.problem().model();
    let pi = solve(g.problem(), &SolveOptions::default()).policy.unwrap();
    let out = sieve_qnp(m, &g.annotation, &pi);
    println!(
        "qnp2(2): sieve {} after removing",
        if out.accepted { "accepts" } else { "rejects" }
    );
    for (s, t) in &out.removed {
        println!("  {} -> {}", m.state_label(*s), m.state_label(*t));
    }
    assert_eq!(out.accepted, qnp_terminates(m, &g.annotation, &pi));

    let p5 = figure1(5).unwrap();
    let pi: Policy = [
        (StateId(0), ActionId(0)),
        (StateId(1), ActionId(1)),
        (StateId(2), ActionId(1)),
    ]
    .into_iter()
    .collect();
    let ann = QnpAnnotation {
        dec_actions: BTreeMap::from([("x".to_string(), BTreeSet::from([ActionId(0)]))]),
        inc_actions: BTreeMap::from([("x".to_string(), BTreeSet::new())]),
    };
    let verdict = verify_fondplus(&p5, &pi);
    println!(
        "figure 1 policy: strong-cyclic {}, sieve {}, FOND+ under C5 {}",
        verify_strong_cyclic(p5.model(), &pi),
        sieve_qnp(p5.model(), &ann, &pi).accepted,
        verdict.solves
    );
    if let Some(w) = verdict.witness {
        println!("  {}", w.describe(p5.model()));
    }
}
