//! Process terms with conjunction and disjunction: a transition semantics
//! with an inconsistency predicate, ready simulation and the refinement
//! preorder it induces, and an axiom system whose proofs are emitted as
//! checkable traces.
//!
//! ```
//! use cll::{parse, refinement::ready_sim_preorder};
//!
//! let t = parse("a.0").unwrap();
//! let s = parse("a.0 \\/ b.0").unwrap();
//! assert!(ready_sim_preorder(&t, &s).holds);
//! assert!(!ready_sim_preorder(&s, &t).holds);
//! ```
//!
//! Modules:
//!
//! * [`term`], [`parser`]: syntax, printing and parsing (ASCII or Unicode).
//! * [`semantics`], [`rules`]: transitions, inconsistency, weak moves and
//!   finite LTS fragments with JSON/DOT export.
//! * [`refinement`]: stable ready simulation, `⊑`, equivalence, witnesses.
//! * [`axioms`]: schemas, proof traces and their checker, normal forms and
//!   the prover.
//! * [`testkit`]: random terms, reference oracles and the property suites.
//! * [`cli`]: the `cll` command line.
//!
//! Runnable examples:
//!
//! ```text
//! cargo run --example parse_print -- "a.(b.0 ∨ ⊥) □ τ.c.0"
//! cargo run --example lts_export -- "tau.(a.0 \/ b.0) [] c.0" dot
//! cargo run --example refinement_witness
//! cargo run --example normal_forms -- "(a.0 \/ b.0) /\ a.c.0"
//! cargo run --example proving -- "a.bot [] a.0" "a.(bot \/ 0)"
//! cargo run --release --example random_selftest -- 42
//! ```

pub mod axioms;
pub mod cli;
pub mod parser;
pub mod refinement;
pub mod rules;
pub mod semantics;
pub mod term;
pub mod testkit;

pub use parser::{parse, ParseError};
pub use term::{canonical_compare, Action, Name, SyncSet, Term};
