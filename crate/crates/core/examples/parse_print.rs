//! Parse terms in ASCII or Unicode notation and print their canonical form.
//!
//!     cargo run --example parse_print -- "a.(b.0 ∨ ⊥) □ τ.c.0"

use cll::parse;

fn main() {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if inputs.is_empty() {
        vec![
            "a.0 [] b.0".to_string(),
            "a.(b.0 ∨ ⊥) □ τ.c.0".to_string(),
            "(a.0 /\\ b.0) \\/ c.0 |[a, c]| c.0".to_string(),
            "a.(".to_string(),
        ]
    } else {
        inputs
    };
    for src in inputs {
        match parse(&src) {
            Ok(t) => println!("{src:<40} => {t}  (degree {}, basic: {})", t.degree(), t.is_basic()),
            Err(e) => println!("{src:<40} => error: {e}"),
        }
    }
}
