//! A contraction-free modal sequent calculus with fixed-point operators:
//! formula syntax, a proof kernel with role-annotated trees, admissible
//! structural transformations (weakening, cut elimination), backward proof
//! search with loop pruning, a forward enumeration oracle, and finite
//! abstract provability structures with executable condition checking.
//!
//! ```
//! use fpsc::{parse_sequent, search, Ruleset, SearchBudget, SearchVerdict};
//!
//! let goal = parse_sequent("box (p -> q), box p => box q").unwrap();
//! match search(&goal, &SearchBudget::default()) {
//!     SearchVerdict::Provable(witness) => witness.check(Ruleset::S).unwrap(),
//!     other => panic!("expected a proof, got {other:?}"),
//! }
//!
//! let consistency = parse_sequent("box (box bot -> bot) => box bot").unwrap();
//! assert_eq!(search(&consistency, &SearchBudget::default()), SearchVerdict::Refuted);
//! ```

pub mod aps;
pub mod conseq;
pub mod enumerate;
pub mod formula;
pub mod parse;
pub mod proof;
pub mod prooffile;
pub mod prover;
pub mod sequent;
pub mod suite;
pub mod transform;

pub use formula::{Formula, FormulaError, F};
pub use parse::{parse_formula, parse_sequent, ParseError};
pub use proof::{BoxClass, CheckError, OccRole, Proof, RuleApp, Ruleset};
pub use prooffile::{proof_from_text, proof_to_text};
pub use prover::{equiv, search, SearchBudget, SearchVerdict};
pub use sequent::Sequent;
pub use transform::{eliminate_cut, strip_weakening, weaken, CutProblem, TransformError};
