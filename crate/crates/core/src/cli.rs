//! The `fondp` command line: solve, verify, translate, gen, ground, emit-asp.
//!
//! Exit codes: 0 solved / verified, 10 unsolvable / rejected, 20 resource
//! limit, 30 input error. The last stdout line is always `STATUS: <word>`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{generate, Family, FamilySpec};
use crate::frontend::{
    document_kind, ground_with_cap, parse_compact, parse_explicit, parse_explicit_document,
    parse_qnp, serialize_explicit, GroundError, DEFAULT_MAX_STATES,
};
use crate::model::{FondPlusProblem, Policy, PolicyGraph};
use crate::solver::{emit_asp, emit_asp_clingo, solve, SolveOptions, SolveStatus};
use crate::termination::{dual_terminates, verify_fondplus, verify_strong, verify_strong_cyclic};
use crate::translate::{
    dual_to_fondplus, qnp_to_fondplus_with_cap, strong_cyclic_to_fondplus, strong_to_fondplus,
    DualFond,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 10;
pub const EXIT_LIMIT: i32 = 20;
pub const EXIT_INPUT: i32 = 30;

#[derive(Parser, Debug)]
#[command(name = "fondp", version, about = "FOND+ planner and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    /// The file's own fairness assumptions (QNP files get theirs from `T_D`).
    Fondplus,
    /// No fairness: every action adversarial.
    Strong,
    /// Every non-deterministic action fair.
    StrongCyclic,
    /// Fair actions from the `fair:` section, the rest adversarial.
    Dual,
    /// QNP input.
    Qnp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum From {
    Qnp,
    Dual,
    FondStrong,
    FondStrongCyclic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a policy.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "fondplus")]
        semantics: Semantics,
        #[arg(long)]
        max_states: Option<usize>,
        /// Time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Write the policy here (`state action` per line).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write solver statistics as JSON here.
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Write the policy graph in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Limited-discrepancy restarts instead of plain depth-first search.
        #[arg(long)]
        restarts: bool,
    },
    /// Check a policy.
    Verify {
        problem: PathBuf,
        policy: PathBuf,
        #[arg(long, value_enum, default_value = "fondplus")]
        semantics: Semantics,
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Rewrite a problem as an explicit FOND+ file.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: From,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Generate a benchmark instance.
    Gen {
        /// qnp1, qnp2, f01_qnp1, f01_qnp2, f11_qnp1, f11_qnp2, figure1 or clear.
        family: String,
        /// Size parameter; the variant 1..8 for figure1.
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ground a problem and report its size.
    Ground {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "fondplus")]
        semantics: Semantics,
        #[arg(long)]
        max_states: Option<usize>,
        /// Write the explicit problem here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the ASP program for a problem.
    EmitAsp {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "fondplus")]
        semantics: Semantics,
        /// Lower-case input predicates and `#show pi/2.`, for clingo.
        #[arg(long)]
        clingo: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_states: Option<usize>,
    },
}

#[derive(Serialize)]
struct StatsJson {
    status: SolveStatus,
    states: usize,
    nodes_expanded: u64,
    verifier_calls: u64,
    backtracks: u64,
    elapsed_ms: u128,
}

/// A failure with its exit code and the word for the `STATUS:` line.
struct Failure {
    code: i32,
    status: &'static str,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            status: "error",
            message: message.into(),
        }
    }
}

fn ground_failure(e: GroundError) -> Failure {
    match e {
        GroundError::TooManyStates { .. } => Failure {
            code: EXIT_LIMIT,
            status: "resource-limit",
            message: e.to_string(),
        },
        GroundError::NoGoal => Failure {
            code: EXIT_NO,
            status: "unsolvable",
            message: e.to_string(),
        },
        other => Failure::input(other.to_string()),
    }
}

/// Default state cap, overridable through `FONDP_MAX_STATES`.
pub fn default_max_states() -> usize {
    std::env::var("FONDP_MAX_STATES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A loaded problem under some semantics. `dual` is kept for the Dual FOND
/// verifier.
pub struct Loaded {
    pub problem: FondPlusProblem,
    pub dual: Option<DualFond>,
}

/// Reads a file of any kind and builds the FOND+ problem for `semantics`.
pub fn load_problem(text: &str, semantics: Semantics, cap: usize) -> Result<Loaded, String> {
    load(text, semantics, cap).map_err(|f| f.message)
}

fn load(text: &str, semantics: Semantics, cap: usize) -> Result<Loaded, Failure> {
    let kind =
        document_kind(text).ok_or_else(|| Failure::input("missing `format:`/`kind:` header"))?;
    let plain = |problem: FondPlusProblem| Loaded {
        problem,
        dual: None,
    };
    match (kind.as_str(), semantics) {
        ("qnp", Semantics::Fondplus | Semantics::Qnp) => {
            let q = parse_qnp(text).map_err(|e| Failure::input(e.to_string()))?;
            let g = qnp_to_fondplus_with_cap(&q, cap).map_err(ground_failure)?;
            Ok(plain(g.grounding.problem))
        }
        ("qnp", _) => Err(Failure::input("QNP files need --semantics qnp or fondplus")),
        (_, Semantics::Qnp) => Err(Failure::input(format!(
            "--semantics qnp needs a qnp file, got `{kind}`"
        ))),
        ("explicit", _) => {
            let doc = parse_explicit_document(text).map_err(|e| Failure::input(e.to_string()))?;
            let fair = doc.fair.clone();
            let (model, _) = doc.problem.clone().into_parts();
            Ok(match semantics {
                Semantics::Fondplus => plain(doc.problem),
                Semantics::Strong => plain(strong_to_fondplus(&model)),
                Semantics::StrongCyclic => plain(strong_cyclic_to_fondplus(&model)),
                Semantics::Dual => {
                    let d = DualFond::from_fair_set(model, &fair.unwrap_or_default());
                    Loaded {
                        problem: dual_to_fondplus(&d),
                        dual: Some(d),
                    }
                }
                Semantics::Qnp => unreachable!(),
            })
        }
        ("compact", _) => {
            let c = parse_compact(text).map_err(|e| Failure::input(e.to_string()))?;
            let g = ground_with_cap(&c, &c.constraints, cap).map_err(ground_failure)?;
            let (model, _) = g.problem.clone().into_parts();
            Ok(match semantics {
                Semantics::Fondplus => plain(g.problem),
                Semantics::Strong => plain(strong_to_fondplus(&model)),
                Semantics::StrongCyclic => plain(strong_cyclic_to_fondplus(&model)),
                Semantics::Dual => {
                    let fair = c
                        .fair
                        .iter()
                        .flatten()
                        .map(|n| {
                            model.action_by_name(n).ok_or_else(|| {
                                Failure::input(format!("fair: unknown action `{n}`"))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    let d = DualFond::from_fair_set(model, &fair);
                    Loaded {
                        problem: dual_to_fondplus(&d),
                        dual: Some(d),
                    }
                }
                Semantics::Qnp => unreachable!(),
            })
        }
        (other, _) => Err(Failure::input(format!("unknown document kind `{other}`"))),
    }
}

/// Renders a policy as `state action` lines over reachable states, in state order.
pub fn format_policy(problem: &FondPlusProblem, pi: &Policy) -> String {
    let m = problem.model();
    pi.iter()
        .map(|(s, a)| format!("{} {}\n", m.state_label(s), m.action_name(a)))
        .collect()
}

pub fn parse_policy(problem: &FondPlusProblem, text: &str) -> Result<Policy, String> {
    let m = problem.model();
    let mut pi = Policy::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [s, a] = parts.as_slice() else {
            return Err(format!("policy line {}: expected `state action`", i + 1));
        };
        let state = m
            .state_by_label(s)
            .ok_or_else(|| format!("policy line {}: unknown state `{s}`", i + 1))?;
        let action = m
            .action_by_name(a)
            .ok_or_else(|| format!("policy line {}: unknown action `{a}`", i + 1))?;
        pi.assign(state, action);
    }
    Ok(pi)
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok((code, status)) => {
            let _ = writeln!(out, "STATUS: {status}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            let _ = writeln!(out, "STATUS: {}", f.status);
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(e.to_string())),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(i32, &'static str), Failure> {
    let cap_or = |c: Option<usize>| c.unwrap_or_else(default_max_states);
    match command {
        Command::Solve {
            file,
            semantics,
            max_states,
            budget,
            out: policy_out,
            stats,
            dot,
            restarts,
        } => {
            let cap = cap_or(max_states);
            let loaded = match load(&read(&file)?, semantics, cap) {
                Ok(l) => l,
                Err(f) if f.code == EXIT_NO => {
                    let _ = writeln!(out, "{}", f.message);
                    if let Some(path) = stats {
                        let json = StatsJson {
                            status: SolveStatus::Unsolvable,
                            states: 0,
                            nodes_expanded: 0,
                            verifier_calls: 0,
                            backtracks: 0,
                            elapsed_ms: 0,
                        };
                        write_file(
                            &path,
                            &serde_json::to_string_pretty(&json).expect("serializable"),
                        )?;
                    }
                    return Ok((EXIT_NO, "unsolvable"));
                }
                Err(f) => return Err(f),
            };
            let problem = &loaded.problem;
            let opts = SolveOptions {
                max_states: cap,
                restart_on_conflict: restarts,
                time_budget: budget.map(Duration::from_secs_f64),
                ..Default::default()
            };
            let result = solve(problem, &opts);
            let _ = writeln!(
                out,
                "states: {}  nodes: {}  verifier calls: {}  backtracks: {}",
                problem.model().num_states(),
                result.stats.nodes_expanded,
                result.stats.verifier_calls,
                result.stats.backtracks
            );
            if let Some(path) = stats {
                let json = StatsJson {
                    status: result.status,
                    states: problem.model().num_states(),
                    nodes_expanded: result.stats.nodes_expanded,
                    verifier_calls: result.stats.verifier_calls,
                    backtracks: result.stats.backtracks,
                    elapsed_ms: result.stats.elapsed.as_millis(),
                };
                write_file(
                    &path,
                    &serde_json::to_string_pretty(&json).expect("serializable"),
                )?;
            }
            match (result.status, result.policy) {
                (SolveStatus::Solved, Some(pi)) => {
                    let text = format_policy(problem, &pi);
                    emit(out, policy_out.as_deref(), &text)?;
                    if let Some(path) = dot {
                        write_file(
                            &path,
                            &PolicyGraph::build(problem.model(), &pi).to_dot(problem.model()),
                        )?;
                    }
                    Ok((EXIT_OK, "solved"))
                }
                (SolveStatus::Unsolvable, _) => Ok((EXIT_NO, "unsolvable")),
                _ => Ok((EXIT_LIMIT, "resource-limit")),
            }
        }
        Command::Verify {
            problem,
            policy,
            semantics,
            max_states,
        } => {
            let loaded = load(&read(&problem)?, semantics, cap_or(max_states))?;
            let p = &loaded.problem;
            let pi = parse_policy(p, &read(&policy)?).map_err(Failure::input)?;
            for warning in pi.lint(p.model()) {
                let _ = writeln!(out, "warning: {warning}");
            }
            let m = p.model();
            let ok = match semantics {
                Semantics::Strong => verify_strong(m, &pi),
                Semantics::StrongCyclic => verify_strong_cyclic(m, &pi),
                Semantics::Dual => {
                    let d = loaded
                        .dual
                        .as_ref()
                        .expect("dual semantics keeps the labels");
                    dual_terminates(d, &pi)
                }
                Semantics::Fondplus | Semantics::Qnp => {
                    let verdict = verify_fondplus(p, &pi);
                    if let Some(w) = &verdict.witness {
                        let _ = writeln!(out, "witness: {}", w.describe(m));
                    }
                    verdict.solves
                }
            };
            let _ = writeln!(
                out,
                "policy {}",
                if ok {
                    "solves the problem"
                } else {
                    "does not solve the problem"
                }
            );
            Ok(if ok {
                (EXIT_OK, "valid")
            } else {
                (EXIT_NO, "invalid")
            })
        }
        Command::Translate {
            file,
            from,
            out: path,
            max_states,
        } => {
            let semantics = match from {
                From::Qnp => Semantics::Qnp,
                From::Dual => Semantics::Dual,
                From::FondStrong => Semantics::Strong,
                From::FondStrongCyclic => Semantics::StrongCyclic,
            };
            let loaded = load(&read(&file)?, semantics, cap_or(max_states))?;
            emit(out, path.as_deref(), &serialize_explicit(&loaded.problem))?;
            Ok((EXIT_OK, "ok"))
        }
        Command::Gen {
            family,
            n,
            out: path,
        } => {
            let family: Family = family
                .parse()
                .map_err(|e: crate::bench::BenchError| Failure::input(e.to_string()))?;
            let inst =
                generate(FamilySpec { family, n }).map_err(|e| Failure::input(e.to_string()))?;
            emit(out, path.as_deref(), &inst.to_text())?;
            Ok((EXIT_OK, "ok"))
        }
        Command::Ground {
            file,
            semantics,
            max_states,
            out: path,
        } => {
            let loaded = load(&read(&file)?, semantics, cap_or(max_states))?;
            let m = loaded.problem.model();
            let _ = writeln!(
                out,
                "states: {}  goals: {}  actions: {}  constraints: {}",
                m.num_states(),
                m.goals().count(),
                m.num_actions(),
                loaded.problem.constraints().len()
            );
            if let Some(p) = path {
                write_file(&p, &serialize_explicit(&loaded.problem))?;
            }
            Ok((EXIT_OK, "ok"))
        }
        Command::EmitAsp {
            file,
            semantics,
            clingo,
            out: path,
            max_states,
        } => {
            let loaded = load(&read(&file)?, semantics, cap_or(max_states))?;
            let text = if clingo {
                emit_asp_clingo(&loaded.problem)
            } else {
                emit_asp(&loaded.problem)
            };
            emit(out, path.as_deref(), &text)?;
            Ok((EXIT_OK, "ok"))
        }
    }
}

/// Parses an explicit file; shorthand used by examples and tests.
pub fn read_explicit(path: &Path) -> Result<FondPlusProblem, String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    parse_explicit(&text).map_err(|e| e.to_string())
}
