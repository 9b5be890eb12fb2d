//! The block-clearing QNP: direct translation, grounding, the induced
//! fairness assumption and the policy the solver finds.
//!
//! cargo run --example clear_qnp

use fondplus::bench::clear_qnp;
use fondplus::frontend::serialize_qnp;
use fondplus::solver::{solve, SolveOptions};
use fondplus::translate::qnp_to_fondplus;

fn main() {
    let q = clear_qnp();
    println!("{}", serialize_qnp(&q));
    let g = qnp_to_fondplus(&q).expect("clear grounds");
    let p = g.problem();
    let m = p.model();
    println!("ground states: {}", m.state_labels().join(" "));
    for c in p.constraints() {
        let a: Vec<_> = c.a_set.iter().map(|&a| m.action_name(a)).collect();
        let b: Vec<_> = c.b_set.iter().map(|&a| m.action_name(a)).collect();
        println!("constraint: A = {a:?} / B = {b:?}");
    }
    let pi = solve(p, &SolveOptions::default())
        .policy
        .expect("clear is solvable");
    println!("policy:");
    for (s, a) in pi.iter() {
        println!("  {:<10} {}", m.state_label(s), m.action_name(a));
    }
}
