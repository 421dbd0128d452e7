//! Command-line driver: parsing, proof checking, backward search, the
//! structural transformations, structure checking, and the acceptance suite.
//!
//! Exit codes: 0 ok/provable/all-pass, 1 refuted/property-failed,
//! 2 unknown/budget exhausted, 3 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fpsc::aps;
use fpsc::parse::{parse_formula, parse_formula_csv, parse_sequent};
use fpsc::prooffile::{proof_from_text, proof_to_text};
use fpsc::prover::{search, SearchBudget, SearchVerdict};
use fpsc::suite;
use fpsc::transform::{eliminate_cut, weaken, CutProblem, TransformError};
use fpsc::Ruleset;

#[derive(Parser)]
#[command(name = "fpsc", version, about = "Proof kernel and prover for a contraction-free modal sequent calculus with fixed points")]
struct Cli {
    /// Machine-readable one-record-per-line output with stable field order.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a formula and print its core form.
    Parse { formula: String },
    /// Check a proof file against a ruleset.
    Check {
        path: PathBuf,
        #[arg(long, default_value = "s")]
        ruleset: String,
    },
    /// Backward proof search for a sequent (cut-free ruleset only).
    Search {
        sequent: String,
        #[arg(long, default_value = "s")]
        ruleset: String,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        max_sequents: Option<usize>,
    },
    /// Eliminate a cut between two proof files.
    Cut {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        left_occ: usize,
        #[arg(long)]
        right_occ: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weaken a proof by comma-separated formula lists.
    Weaken {
        path: PathBuf,
        #[arg(default_value = "")]
        add_left: String,
        #[arg(default_value = "")]
        add_right: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a finite provability structure and check its conditions.
    ApsCheck { path: PathBuf },
    /// Build and validate the abstract consistency derivation for a
    /// fixed point of a finite structure.
    ApsG2 { path: PathBuf, fixed_point: String },
    /// Run a named battery; `paper` runs all acceptance criteria.
    Suite { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli);
    ExitCode::from(code)
}

fn input_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    3
}

fn parse_ruleset(s: &str) -> Result<Ruleset, String> {
    match s {
        "s" => Ok(Ruleset::S),
        "sc" => Ok(Ruleset::Sc),
        other => Err(format!("unknown ruleset `{other}` (expected `s` or `sc`)")),
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit_proof(proof: &fpsc::Proof, out: &Option<PathBuf>) -> Result<(), String> {
    let text = proof_to_text(proof);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> u8 {
    let porcelain = cli.porcelain;
    match cli.cmd {
        Cmd::Parse { formula } => match parse_formula(&formula) {
            Ok(f) => {
                if porcelain {
                    println!("parse ok {f}");
                } else {
                    println!("{f}");
                }
                0
            }
            Err(e) => input_error(e),
        },
        Cmd::Check { path, ruleset } => {
            let ruleset = match parse_ruleset(&ruleset) {
                Ok(r) => r,
                Err(e) => return input_error(e),
            };
            let text = match read(&path) {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let proof = match proof_from_text(&text) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            match proof.check(ruleset) {
                Ok(()) => {
                    if porcelain {
                        println!("check ok size={} root={}", proof.size(), proof.conclusion);
                    } else {
                        println!(
                            "valid under ruleset {ruleset}: {} ({} nodes)",
                            proof.conclusion,
                            proof.size()
                        );
                    }
                    0
                }
                Err(e) => {
                    if porcelain {
                        println!("check invalid {e}");
                    } else {
                        println!("invalid: {e}");
                    }
                    1
                }
            }
        }
        Cmd::Search { sequent, ruleset, max_depth, max_sequents } => {
            match parse_ruleset(&ruleset) {
                Ok(Ruleset::S) => {}
                Ok(Ruleset::Sc) => {
                    return input_error(
                        "backward search is not available for ruleset sc (explicit cut is not analytic)",
                    )
                }
                Err(e) => return input_error(e),
            }
            let goal = match parse_sequent(&sequent) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            if max_depth == Some(0) || max_sequents == Some(0) {
                return input_error("budget values must be positive");
            }
            let mut budget = SearchBudget::default();
            if let Some(d) = max_depth {
                budget.max_depth = d;
            }
            if let Some(n) = max_sequents {
                budget.max_sequents = n;
            }
            match search(&goal, &budget) {
                SearchVerdict::Provable(w) => {
                    if porcelain {
                        println!("search provable size={}", w.size());
                    } else {
                        println!("provable ({} nodes)", w.size());
                        print!("{}", proof_to_text(&w));
                    }
                    0
                }
                SearchVerdict::Refuted => {
                    if porcelain {
                        println!("search refuted");
                    } else {
                        println!("refuted: complete loop-pruned search exhausted");
                    }
                    1
                }
                SearchVerdict::Unknown => {
                    if porcelain {
                        println!("search unknown");
                    } else {
                        println!("unknown: budget exhausted before the space was explored");
                    }
                    2
                }
            }
        }
        Cmd::Cut { left, right, left_occ, right_occ, out } => {
            let (lt, rt) = match (read(&left), read(&right)) {
                (Ok(l), Ok(r)) => (l, r),
                (Err(e), _) | (_, Err(e)) => return input_error(e),
            };
            let (lp, rp) = match (proof_from_text(&lt), proof_from_text(&rt)) {
                (Ok(l), Ok(r)) => (l, r),
                (Err(e), _) | (_, Err(e)) => return input_error(e),
            };
            let bound = lp.size() + rp.size();
            let prob = CutProblem { left: lp, right: rp, left_occ, right_occ };
            match eliminate_cut(&prob) {
                Ok(result) => {
                    if porcelain {
                        println!("cut ok size={} bound={bound} root={}", result.size(), result.conclusion);
                    } else {
                        println!(
                            "cut eliminated: {} ({} nodes, strictly below {bound})",
                            result.conclusion,
                            result.size()
                        );
                    }
                    match emit_proof(&result, &out) {
                        Ok(()) => 0,
                        Err(e) => input_error(e),
                    }
                }
                Err(TransformError::InvalidCutProblem(msg)) => input_error(msg),
                Err(e) => {
                    eprintln!("transformation failed: {e}");
                    1
                }
            }
        }
        Cmd::Weaken { path, add_left, add_right, out } => {
            let text = match read(&path) {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let proof = match proof_from_text(&text) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            let (al, ar) = match (parse_formula_csv(&add_left), parse_formula_csv(&add_right)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => return input_error(e),
            };
            let result = weaken(&proof, &al, &ar);
            if porcelain {
                println!("weaken ok size={} root={}", result.size(), result.conclusion);
            } else {
                println!("weakened: {} ({} nodes)", result.conclusion, result.size());
            }
            match emit_proof(&result, &out) {
                Ok(()) => 0,
                Err(e) => input_error(e),
            }
        }
        Cmd::ApsCheck { path } => {
            let text = match read(&path) {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let inst = match aps::parse_aps(&text) {
                Ok(i) => i,
                Err(e) => return input_error(e),
            };
            let report = aps::check_conditions(&inst);
            print!("{report}");
            if !porcelain {
                let fps: Vec<&str> = inst
                    .goedelian_fixed_points()
                    .into_iter()
                    .map(|k| inst.carrier[k].as_str())
                    .collect();
                println!("fixed points: [{}]", fps.join(", "));
            }
            if report.checks.iter().all(|c| c.passed()) {
                0
            } else {
                1
            }
        }
        Cmd::ApsG2 { path, fixed_point } => {
            let text = match read(&path) {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let inst = match aps::parse_aps(&text) {
                Ok(i) => i,
                Err(e) => return input_error(e),
            };
            let p = match inst.index_of(&fixed_point) {
                Ok(p) => p,
                Err(e) => return input_error(e),
            };
            let trace = match aps::g2_trace(&inst, p) {
                Ok(t) => t,
                Err(aps::ApsError::NotFixedPoint(t)) => {
                    return input_error(format!("`{t}` is not a fixed point"))
                }
                Err(e) => {
                    eprintln!("derivation blocked: {e}");
                    return 1;
                }
            };
            print!("{}", trace.render(&inst));
            match aps::g2_consistency_check(&inst, p) {
                Ok(aps::G2Consistency::Holds) => {
                    println!("consistency-implication holds");
                    0
                }
                Ok(aps::G2Consistency::Violated { failing_conditions }) => {
                    println!(
                        "consistency-implication violated; failing conditions: [{}]",
                        failing_conditions.join(", ")
                    );
                    1
                }
                Err(e) => input_error(e),
            }
        }
        Cmd::Suite { name } => {
            if name != "paper" {
                return input_error(format!("unknown suite `{name}` (expected `paper`)"));
            }
            let outcomes = suite::run_all();
            for o in &outcomes {
                if porcelain {
                    println!(
                        "criterion {} {} {} {}",
                        o.id,
                        o.name,
                        if o.pass { "pass" } else { "fail" },
                        o.detail
                    );
                } else {
                    println!("{}", o.render());
                }
            }
            let passed = outcomes.iter().filter(|o| o.pass).count();
            if !porcelain {
                println!("{passed}/{} criteria passed", outcomes.len());
            }
            if passed == outcomes.len() {
                0
            } else {
                1
            }
        }
    }
}
