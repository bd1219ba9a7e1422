//! Check refinements and print a witness when one fails.
//!
//!     cargo run --example refinement_witness

use cll::parse;
use cll::refinement::Refinement;
use cll::semantics::Semantics;

fn main() {
    let sem = Semantics::new();
    let r = Refinement::new(&sem);
    let pairs = [
        ("a.0", "a.0 \\/ b.0"),
        ("tau.(a.0 \\/ b.0)", "tau.a.0 [] tau.b.0"),
        ("a.bot [] a.0", "a.(bot \\/ 0)"),
        ("a.(bot \\/ 0)", "a.bot [] a.0"),
        ("(a.b.0 [] a.c.0) /\\ (a.b.0 [] a.b.0)", "a.(b.0 /\\ b.0) [] a.(c.0 /\\ b.0)"),
    ];
    for (l, s) in pairs {
        let (t, u) = (parse(l).unwrap(), parse(s).unwrap());
        let v = r.ready_sim_preorder(&t, &u);
        println!("{t}  ⊑  {u}: {}", v.holds);
        if let Some(w) = &v.witness {
            println!("  because {w}");
            println!("  {}", serde_json::to_string(&w.to_json()).unwrap());
        }
    }
    let c = parse("c.0 /\\ b.0").unwrap();
    println!("{c} inconsistent: {}", sem.is_inconsistent(&c));
}
