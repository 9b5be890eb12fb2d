//! Verifies policies read from text against a problem in the explicit format
//! and prints the verdict, the witness and the termination rounds.
//!
//! cargo run --example verify_witness

use fondplus::cli::parse_policy;
use fondplus::frontend::parse_explicit;
use fondplus::termination::{terminate_fixpoint, verify_fondplus};

const PROBLEM: &str = "\
format: fondplus-v1
kind: explicit
states: s0 s1 s2 g
initial: s0
goals: g
actions: a b
transitions:
s0 a s1
s0 a s2
s1 b s0
s1 b g
s2 b s0
s2 b g
constraints:
A = {a} / B = {}
A = {b} / B = {a}
";

fn main() {
    let p = parse_explicit(PROBLEM).unwrap();
    let m = p.model();
    for text in ["s0 a\ns1 b\ns2 b\n", "s0 a\ns1 b\n"] {
        let pi = parse_policy(&p, text).unwrap();
        let verdict = verify_fondplus(&p, &pi);
        println!("policy {:?}", text.trim().replace('\n', ", "));
        match &verdict.witness {
            None => println!("  solves the problem"),
            Some(w) => println!("  rejected: {}", w.describe(m)),
        }
        let labels = terminate_fixpoint(&p, &pi);
        for (i, round) in labels.rounds.iter().enumerate() {
            let names: Vec<_> = round.iter().map(|&s| m.state_label(s)).collect();
            println!("  round {i}: {}", names.join(" "));
        }
    }
}
