//! Generates the benchmark families and solves each instance, printing the
//! status and search statistics.
//!
//! cargo run --release --example families -- [max_n]

use fondplus::bench::{generate, Family, FamilySpec};
use fondplus::solver::{solve, SolveOptions};

fn main() {
    let max_n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(5);
    println!(
        "{:<10} {:>3} {:>7} {:<11} {:>6} {:>6} {:>9}",
        "family", "n", "states", "status", "nodes", "calls", "ms"
    );
    for family in Family::ALL {
        if matches!(family, Family::Figure1 | Family::Clear) {
            continue;
        }
        for n in 2..=max_n {
            let problem = generate(FamilySpec { family, n }).unwrap().to_problem();
            let problem = match problem {
                Ok(p) => p,
                Err(e) => {
                    println!("{:<10} {n:>3} {e}", family.to_string());
                    continue;
                }
            };
            let res = solve(&problem, &SolveOptions::default());
            println!(
                "{:<10} {n:>3} {:>7} {:<11} {:>6} {:>6} {:>9.1}",
                family.to_string(),
                problem.model().num_states(),
                format!("{:?}", res.status).to_lowercase(),
                res.stats.nodes_expanded,
                res.stats.verifier_calls,
                res.stats.elapsed.as_secs_f64() * 1e3
            );
        }
    }
}
