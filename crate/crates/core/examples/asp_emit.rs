//! Emits the ASP program for Figure 1 under C7 and reads a policy back from
//! `pi/2` atoms. Pass `--clingo` for the dialect clingo accepts.
//!
//! cargo run --example asp_emit [-- --clingo]

use fondplus::bench::figure1;
use fondplus::solver::{emit_asp, emit_asp_clingo, extract_policy, solve, SolveOptions};
use fondplus::termination::verify_fondplus;

fn main() {
    let p = figure1(7).unwrap();
    let clingo = std::env::args().any(|a| a == "--clingo");
    print!(
        "{}",
        if clingo {
            emit_asp_clingo(&p)
        } else {
            emit_asp(&p)
        }
    );

    let native = solve(&p, &SolveOptions::default()).policy.unwrap();
    let answer = "pi(s0,a0) pi(s1,a1) pi(s2,a1)";
    let read = extract_policy(&p, answer).unwrap();
    assert_eq!(read, native);
    assert!(verify_fondplus(&p, &read).solves);
    eprintln!("answer `{answer}` matches the native policy");
}
