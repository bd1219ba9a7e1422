//! The `cll` command line, as a library function so it can be tested
//! without spawning processes.
//!
//! Exit codes: 0 success or the property holds, 1 the property fails,
//! 2 usage or parse error, 3 resource limit.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::axioms::{normalize, prove, validate_trace};
use crate::refinement::{Refinement, Side};
use crate::semantics::{Semantics, SemanticsError, DEFAULT_MAX_STATES};
use crate::testkit::suites::{run_all, SuiteConfig};
use crate::{parse, Term};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cll", version, about = "Refinement checking and proofs for CLL process terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Terms given inline or, with `--file`, one per non-empty line
/// (lines starting with `#` are skipped).
#[derive(Args, Debug)]
struct Input {
    terms: Vec<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum LtsFormat {
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form of a term.
    Parse {
        #[command(flatten)]
        input: Input,
    },
    /// Export the reachable transition system of a term.
    Lts {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "json")]
        format: LtsFormat,
        #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Check LHS ⊑ RHS (or LHS ≲ RHS with --stable).
    Refines {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        stable: bool,
    },
    /// Check LHS = RHS, i.e. refinement both ways.
    Equiv {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        stable: bool,
    },
    /// Compute the normal form of a term.
    Normalize {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
    /// Decide LHS ⊑ RHS and produce a proof when it holds.
    Prove {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        trace: bool,
        /// Run the proof checker on the produced trace.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
    },
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Self {
        Output { code, stdout, stderr: String::new() }
    }

    fn err(code: i32, msg: impl std::fmt::Display) -> Self {
        Output { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

impl Input {
    fn terms(&self, want: usize) -> Result<Vec<Term>, Output> {
        let mut srcs = self.terms.clone();
        if let Some(path) = &self.file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Output::err(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            srcs.extend(
                text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from),
            );
        }
        if srcs.len() != want {
            return Err(Output::err(EXIT_USAGE, format!("expected {want} term(s), got {}", srcs.len())));
        }
        srcs.iter()
            .map(|s| parse(s).map_err(|e| Output::err(EXIT_USAGE, format!("cannot parse `{s}`: {e}"))))
            .collect()
    }
}

/// Run one invocation; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Output::ok(EXIT_OK, text)
            };
        }
    };
    match dispatch(cli.command) {
        Ok(o) | Err(o) => o,
    }
}

fn dispatch(cmd: Command) -> Result<Output, Output> {
    match cmd {
        Command::Parse { input } => {
            let t = input.terms(1)?.remove(0);
            Ok(Output::ok(EXIT_OK, format!("{t}\n")))
        }
        Command::Lts { input, format, max_states } => {
            let t = input.terms(1)?.remove(0);
            let f = Semantics::new().build_lts(&t, max_states).map_err(|e| match e {
                SemanticsError::ResourceLimit { .. } => Output::err(EXIT_LIMIT, e),
                other => Output::err(EXIT_FAILS, other),
            })?;
            Ok(Output::ok(
                EXIT_OK,
                match format {
                    LtsFormat::Json => pretty(&f.to_json()),
                    LtsFormat::Dot => f.to_dot(),
                },
            ))
        }
        Command::Refines { input, stable } => {
            let ts = input.terms(2)?;
            let sem = Semantics::new();
            let r = Refinement::new(&sem);
            let v = if stable { r.stable_ready_sim(&ts[0], &ts[1]) } else { r.ready_sim_preorder(&ts[0], &ts[1]) };
            let out = json!({
                "relation": if stable { "stable_ready_simulation" } else { "refinement" },
                "lhs": ts[0].to_string(),
                "rhs": ts[1].to_string(),
                "holds": v.holds,
                "witness": v.witness.as_ref().map(|w| w.to_json()),
            });
            Ok(Output::ok(if v.holds { EXIT_OK } else { EXIT_FAILS }, pretty(&out)))
        }
        Command::Equiv { input, stable } => {
            let ts = input.terms(2)?;
            let sem = Semantics::new();
            let r = Refinement::new(&sem);
            let res = if stable { r.stable_rs_equiv(&ts[0], &ts[1]) } else { r.rs_equiv(&ts[0], &ts[1]) };
            let (failed, witness) = match &res {
                Ok(()) => (Value::Null, Value::Null),
                Err((side, w)) => (
                    Value::String(if *side == Side::Left { "lhs_below_rhs" } else { "rhs_below_lhs" }.into()),
                    w.to_json(),
                ),
            };
            let out = json!({
                "relation": if stable { "stable_equivalence" } else { "equivalence" },
                "lhs": ts[0].to_string(),
                "rhs": ts[1].to_string(),
                "holds": res.is_ok(),
                "failed_direction": failed,
                "witness": witness,
            });
            Ok(Output::ok(if res.is_ok() { EXIT_OK } else { EXIT_FAILS }, pretty(&out)))
        }
        Command::Normalize { input, trace, format } => {
            let t = input.terms(1)?.remove(0);
            let (nf, tr) = normalize(&t);
            let text = match format {
                OutFormat::Json => pretty(&json!({
                    "term": t.to_string(),
                    "normal_form": nf.to_string(),
                    "trace": if trace { tr.to_json() } else { Value::Null },
                })),
                OutFormat::Text if trace => format!("{nf}\n{}", tr.to_text()),
                OutFormat::Text => format!("{nf}\n"),
            };
            Ok(Output::ok(EXIT_OK, text))
        }
        Command::Prove { input, trace, check, format } => {
            let ts = input.terms(2)?;
            let pr = prove(&ts[0], &ts[1]).map_err(|e| Output::err(EXIT_FAILS, e))?;
            let checked = match (&pr.trace, check) {
                (Some(tr), true) => Some(validate_trace(tr)),
                _ => None,
            };
            let valid = checked.as_ref().is_none_or(|c| c.is_ok());
            let code = if pr.holds && valid { EXIT_OK } else { EXIT_FAILS };
            let text = match format {
                OutFormat::Json => pretty(&json!({
                    "lhs": ts[0].to_string(),
                    "rhs": ts[1].to_string(),
                    "holds": pr.holds,
                    "trace": pr.trace.as_ref().filter(|_| trace).map(|t| t.to_json()),
                    "check": checked.as_ref().map(|c| match c {
                        Ok(()) => json!({ "valid": true }),
                        Err(e) => json!({ "valid": false, "reason": e.to_string() }),
                    }),
                    "witness": pr.witness.as_ref().map(|w| w.to_json()),
                })),
                OutFormat::Text => {
                    let mut s = format!("{}\n", if pr.holds { "holds" } else { "fails" });
                    if let (true, Some(tr)) = (trace, &pr.trace) {
                        s.push_str(&tr.to_text());
                    }
                    match &checked {
                        Some(Ok(())) => s.push_str("check: valid\n"),
                        Some(Err(e)) => {
                            let _ = writeln!(s, "check: invalid ({e})");
                        }
                        None => {}
                    }
                    if let Some(w) = &pr.witness {
                        s.push_str(&pretty(&w.to_json()));
                    }
                    s
                }
            };
            Ok(Output::ok(code, text))
        }
        Command::Selftest { seed, count, jobs } => {
            let reports = run_all(&SuiteConfig { seed, count, jobs });
            let mut s = String::new();
            for r in &reports {
                let _ = writeln!(s, "{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            let _ = writeln!(s, "{} suites, {failed} failed", reports.len());
            Ok(Output::ok(if failed == 0 { EXIT_OK } else { EXIT_FAILS }, s))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cll(args: &[&str]) -> Output {
        run(std::iter::once("cll").chain(args.iter().copied()))
    }

    #[test]
    fn exit_codes() {
        assert_eq!(cll(&["parse", "a.0 [] b.0"]).code, EXIT_OK);
        assert_eq!(cll(&["parse", "a.("]).code, EXIT_USAGE);
        assert_eq!(cll(&["parse"]).code, EXIT_USAGE);
        assert_eq!(cll(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(cll(&["--help"]).code, EXIT_OK);
        assert_eq!(cll(&["refines", "a.0", "a.0 \\/ b.0"]).code, EXIT_OK);
        assert_eq!(cll(&["refines", "a.0 \\/ b.0", "a.0"]).code, EXIT_FAILS);
        assert_eq!(cll(&["lts", "a.b.c.0", "--max-states", "2"]).code, EXIT_LIMIT);
    }

    #[test]
    fn normalize_prints_bot() {
        let o = cll(&["normalize", "a.bot"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "bot\n"));
    }
}
