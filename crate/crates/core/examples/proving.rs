//! Decide refinement by proof: a checked derivation when it holds,
//! a semantic witness when it does not.
//!
//!     cargo run --example proving -- "a.bot [] a.0" "a.(bot \/ 0)"

use cll::axioms::{prove, validate_trace};
use cll::parse;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (l, r) = match args.as_slice() {
        [l, r] => (l.clone(), r.clone()),
        _ => ("a.bot [] a.0".to_string(), "a.(bot \\/ 0)".to_string()),
    };
    let (t, s) = (parse(&l).unwrap(), parse(&r).unwrap());
    match prove(&t, &s) {
        Ok(p) if p.holds => {
            let trace = p.trace.unwrap();
            print!("{trace}");
            println!("checker: {:?}", validate_trace(&trace));
        }
        Ok(p) => println!("no proof; witness: {}", p.witness.unwrap()),
        Err(e) => println!("internal disagreement: {e}"),
    }
}
