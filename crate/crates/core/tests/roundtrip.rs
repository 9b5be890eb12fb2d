//! Serialization round trips and grounding determinism.

mod common;

use common::{random_problem, random_qnp, rng};
use fondplus::bench::{f01_compact, f11_compact, gen_f01, gen_f11, Base};
use fondplus::cli::{format_policy, load_problem, parse_policy, Semantics};
use fondplus::frontend::{
    ground, parse_compact, parse_explicit, parse_qnp, serialize_compact, serialize_explicit,
    serialize_qnp,
};
use fondplus::solver::{solve, SolveOptions};
use fondplus::translate::{qnp_to_compact, qnp_to_fondplus};
use proptest::prelude::*;

proptest! {
    #[test]
    fn explicit_round_trip(seed in any::<u64>(), n in 1usize..10, k in 1usize..4, c in 0usize..3) {
        let p = random_problem(&mut rng(seed), n, k, c);
        let text = serialize_explicit(&p);
        let back = parse_explicit(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(serialize_explicit(&back), text);
    }

    #[test]
    fn qnp_round_trip_and_deterministic_grounding(seed in any::<u64>()) {
        let q = random_qnp(&mut rng(seed));
        prop_assume!(q.validate().is_ok());
        let text = serialize_qnp(&q);
        let back = parse_qnp(&text).unwrap();
        prop_assert_eq!(&back, &q);
        let (compact, _) = qnp_to_compact(&q);
        let reparsed = parse_compact(&serialize_compact(&compact)).unwrap();
        prop_assert_eq!(&reparsed, &compact);
        match (qnp_to_fondplus(&q), qnp_to_fondplus(&back)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.problem(), b.problem());
                let g = ground(&reparsed, &reparsed.constraints).unwrap();
                prop_assert_eq!(&g.problem, a.problem());
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "grounding outcome differs after round trip"),
        }
    }

    #[test]
    fn policy_text_round_trip(seed in any::<u64>(), n in 2usize..8) {
        let p = random_problem(&mut rng(seed), n, 3, 2);
        if let Some(pi) = solve(&p, &SolveOptions::default()).policy {
            let back = parse_policy(&p, &format_policy(&p, &pi)).unwrap();
            prop_assert_eq!(back, pi);
        }
    }
}

#[test]
fn family_compact_files_round_trip() {
    for n in 2..=6 {
        for base in [Base::Qnp1, Base::Qnp2] {
            for p in [gen_f01(base, n).unwrap(), gen_f11(base, n).unwrap()] {
                let text = serialize_explicit(&p);
                assert_eq!(parse_explicit(&text).unwrap(), p);
            }
            for c in [f01_compact(base, n), f11_compact(base, n)] {
                assert_eq!(parse_compact(&serialize_compact(&c)).unwrap(), c);
            }
        }
    }
}

/// Every complete document in `docs/formats.md` parses and grounds.
#[test]
fn documented_examples_load() {
    let doc = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../docs/formats.md"
    ))
    .unwrap();
    let mut loaded = 0;
    for block in doc.split("```\n").skip(1).step_by(2) {
        // skip grammar sketches, including the header template
        if !block.starts_with("format: fondplus-v1\nkind: ")
            || block.contains("kind: explicit | compact")
        {
            continue;
        }
        let semantics = if block.contains("kind: qnp") {
            Semantics::Qnp
        } else {
            Semantics::Fondplus
        };
        load_problem(block, semantics, 1000).unwrap_or_else(|e| panic!("{e}\n{block}"));
        loaded += 1;
    }
    assert_eq!(loaded, 3);
}
