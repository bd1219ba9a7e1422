//! Random term generation and reference oracles for tests.

mod gen;
mod oracle;


pub use gen::{gen_term, GenConfig, TermGen, Weights};
pub use oracle::{oracle_semantics, oracle_stable_sim, OracleModel, SimOracle};
pub mod suites;

pub use suites::{run_all, SuiteConfig, SuiteReport};
