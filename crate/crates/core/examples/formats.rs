//! The three input formats: an explicit model, a compact propositional
//! problem that is grounded, and a QNP that goes through the direct
//! translation.
//!
//! cargo run --example formats

use fondplus::frontend::{ground, parse_compact, parse_qnp};
use fondplus::translate::qnp_to_fondplus;

const COMPACT: &str = "\
format: fondplus-v1
kind: compact
atoms: p q
init:
goal: q
action flip: pre {!p} eff oneof({p} | {!p})
action finish: pre {p} eff {q}
constraints:
A = {flip} / B = {}
";

const QNP: &str = "\
format: fondplus-v1
kind: qnp
atoms: p
vars: n
init: !p, n>0
goal: n=0
action a: pre {p, n>0} eff {!p, dec(n)}
action b: pre {!p} eff {p}
";

fn main() {
    let c = parse_compact(COMPACT).unwrap();
    let g = ground(&c, &c.constraints).unwrap();
    println!(
        "compact: {} ground states {:?}",
        g.problem.model().num_states(),
        g.problem.model().state_labels()
    );

    let q = parse_qnp(QNP).unwrap();
    let g = qnp_to_fondplus(&q).unwrap();
    let m = g.problem().model();
    println!(
        "qnp: {} ground states {:?}",
        m.num_states(),
        m.state_labels()
    );
    println!("constraints: {}", g.problem().constraints().len());
}
