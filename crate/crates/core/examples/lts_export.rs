//! Build the reachable transition system of a term and export it.
//!
//!     cargo run --example lts_export -- "tau.(a.0 \/ b.0) [] c.0" dot

use cll::parse;
use cll::semantics::{build_lts, DEFAULT_MAX_STATES};

fn main() {
    let mut args = std::env::args().skip(1);
    let src = args.next().unwrap_or_else(|| "tau.(a.0 \\/ b.0) [] c.0".into());
    let format = args.next().unwrap_or_else(|| "json".into());
    let t = parse(&src).expect("term");
    let lts = build_lts(&t, DEFAULT_MAX_STATES).expect("state limit");
    for s in lts.states() {
        let tags = [(s.stable, "stable"), (s.inconsistent, "inconsistent")];
        let tags: Vec<&str> = tags.iter().filter(|(on, _)| *on).map(|(_, n)| *n).collect();
        eprintln!("{:<32} {}", s.term.to_string(), tags.join(" "));
    }
    match format.as_str() {
        "dot" => print!("{}", lts.to_dot()),
        _ => println!("{}", serde_json::to_string_pretty(&lts.to_json()).unwrap()),
    }
}
