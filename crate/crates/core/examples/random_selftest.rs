//! Draw random terms and run a small, seeded round of the property suites.
//!
//!     cargo run --release --example random_selftest -- 42

use cll::testkit::suites::{run_all, SuiteConfig};
use cll::testkit::{GenConfig, TermGen};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let mut g = TermGen::new(GenConfig::default().with_seed(seed).with_max_degree(10));
    for _ in 0..5 {
        println!("sample: {}", g.term());
    }
    let mut g = TermGen::new(GenConfig::default().with_seed(seed).with_max_degree(10).stable());
    println!("stable sample: {}", g.term());
    let reports = run_all(&SuiteConfig { seed, count: 40, jobs: 2 });
    for r in &reports {
        println!("{r}");
    }
}
