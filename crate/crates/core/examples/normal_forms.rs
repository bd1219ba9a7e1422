//! Rewrite terms to normal form, with the equational derivation.
//!
//!     cargo run --example normal_forms -- "(a.0 \/ b.0) /\ a.c.0"

use cll::axioms::{normalize, validate_trace};
use cll::parse;

fn main() {
    let src = std::env::args().nth(1);
    let inputs = match &src {
        Some(s) => vec![s.as_str()],
        None => vec!["a.bot", "tau.a.0 [] b.0", "(a.0 \\/ b.0) /\\ a.c.0", "a.0 |[a]| (a.b.0 [] c.0)"],
    };
    for s in inputs {
        let t = parse(s).unwrap();
        let (nf, trace) = normalize(&t);
        println!("{t}\n  = {nf}   ({} steps, valid: {})", trace.len(), validate_trace(&trace).is_ok());
        if src.is_some() {
            print!("{trace}");
        }
    }
}
