//! The axiom system: schemas, proof traces, normal forms and a prover.

mod builder;
pub mod nf;
mod normalize;
mod prove;
pub mod schema;
pub mod trace;

pub use nf::{is_normal_form, Branch, NfB, NormalForm};
pub use normalize::{nf_conjoin, nf_ec_merge, nf_parallel, normalize};
pub use prove::{nf_leq, nfb_embeds, prove, Proof, ProveError};
pub use schema::{choice_bindings, Axiom, Binding, Bindings, SchemaError};
pub use trace::{validate_trace, Goal, ProofStep, ProofTrace, Relation, Rule, TraceError};
