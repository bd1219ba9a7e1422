//! Seeded property suites shared by the acceptance tests and `cll selftest`.
//!
//! Instance `i` of a suite draws from its own generator seeded from
//! `(seed, suite, i)`, so results do not depend on how work is sharded.

use std::collections::BTreeSet;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::seq::SliceRandom;
use rand::Rng;

use super::gen::{GenConfig, TermGen};
use super::oracle::{oracle_semantics, oracle_stable_sim};
use crate::axioms::{choice_bindings, normalize, prove, validate_trace, Axiom, Binding, Bindings, NormalForm};
use crate::refinement::Refinement;
use crate::semantics::{
    build_lts, check_degree_decrease, check_lts1, check_lts2, check_stable_model, check_tau_pure, Semantics,
    DEFAULT_MAX_STATES,
};
use crate::term::{ext_all, Action, Name, SyncSet, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Instances per suite (per law / per axiom for the grouped suites).
    pub count: usize,
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, count: 200, jobs: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    /// The first few failures.
    pub examples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {} ({} checked, {} failed)", self.name, self.checked, self.failed)?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

pub enum Outcome {
    Pass,
    Fail(String),
}

const MAX_EXAMPLES: usize = 5;

fn instance_seed(seed: u64, stream: u64, i: usize) -> u64 {
    seed ^ stream.wrapping_mul(0xA076_1D64_78BD_642F) ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Run `f(0..count)` over `jobs` threads and collect a report in index order.
pub fn run_sharded<F>(name: &str, count: usize, jobs: usize, f: F) -> SuiteReport
where
    F: Fn(usize) -> Outcome + Sync,
{
    let jobs = jobs.clamp(1, count.max(1));
    let chunk = count.div_ceil(jobs);
    let results: Vec<Vec<Outcome>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let f = &f;
                s.spawn(move || {
                    (j * chunk..((j + 1) * chunk).min(count))
                        .map(|i| {
                            catch_unwind(AssertUnwindSafe(|| f(i))).unwrap_or_else(|p| {
                                let msg = p
                                    .downcast_ref::<String>()
                                    .cloned()
                                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                                    .unwrap_or_default();
                                Outcome::Fail(format!("instance {i} panicked: {msg}"))
                            })
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut report = SuiteReport { name: name.to_string(), checked: 0, failed: 0, examples: vec![] };
    for o in results.into_iter().flatten() {
        report.checked += 1;
        if let Outcome::Fail(msg) = o {
            report.failed += 1;
            if report.examples.len() < MAX_EXAMPLES {
                report.examples.push(msg);
            }
        }
    }
    report
}

fn fixed(name: &str, checks: Vec<(String, bool)>) -> SuiteReport {
    let failures: Vec<String> = checks.iter().filter(|(_, ok)| !ok).map(|(d, _)| d.clone()).collect();
    SuiteReport {
        name: name.to_string(),
        checked: checks.len(),
        failed: failures.len(),
        examples: failures.into_iter().take(MAX_EXAMPLES).collect(),
    }
}

fn p(s: &str) -> Term {
    crate::parse(s).expect("built-in term")
}

/// Inconsistency of the reference terms.
pub fn constants() -> SuiteReport {
    let sem = Semantics::new();
    let cases = [("bot", true), ("0", false), ("a.0 /\\ b.0", true), ("a.(bot \\/ 0)", false), ("a.bot [] a.0", true)];
    fixed(
        "constants",
        cases
            .iter()
            .map(|(t, want)| (format!("inconsistent({t}) should be {want}"), sem.is_inconsistent(&p(t)) == *want))
            .collect(),
    )
}

/// The reference refinement and non-refinement pairs.
pub fn counterexamples() -> SuiteReport {
    let sem = Semantics::new();
    let r = Refinement::new(&sem);
    let le = |l: &str, s: &str| r.ready_sim_preorder(&p(l), &p(s)).holds;
    let stable_le = |l: &str, s: &str| r.stable_ready_sim(&p(l), &p(s)).holds;
    let eq = |l: &str, s: &str| r.rs_equiv(&p(l), &p(s)).is_ok();
    let lhs = "(a.b.0 [] a.c.0) /\\ (a.b.0 [] a.b.0)";
    let rhs = "a.(b.0 /\\ b.0) [] a.(c.0 /\\ b.0)";
    let checks = vec![
        ("tau.(a.0 \\/ b.0) not below tau.a.0 [] tau.b.0".to_string(), !le("tau.(a.0 \\/ b.0)", "tau.a.0 [] tau.b.0")),
        ("a.(bot \\/ 0) not below a.bot [] a.0".into(), !le("a.(bot \\/ 0)", "a.bot [] a.0")),
        ("a.bot [] a.0 below a.(bot \\/ 0)".into(), le("a.bot [] a.0", "a.(bot \\/ 0)")),
        ("a.0 not stably below a.0 [] b.0".into(), !stable_le("a.0", "a.0 [] b.0")),
        ("a.0 not below a.0 [] b.0".into(), !le("a.0", "a.0 [] b.0")),
        (format!("{lhs} not below {rhs}"), !le(lhs, rhs)),
        ("c.0 /\\ b.0 inconsistent".into(), sem.is_inconsistent(&p("c.0 /\\ b.0"))),
        // Silent branches of a choice do not resolve it.
        ("tau.a.0 [] tau.c.0 not below tau.(a.0 \\/ c.0)".into(), !le("tau.a.0 [] tau.c.0", "tau.(a.0 \\/ c.0)")),
        ("(a.0 \\/ b.0) [] (a.0 \\/ b.0) not equal to a.0 \\/ b.0".into(), !eq("(a.0 \\/ b.0) [] (a.0 \\/ b.0)", "a.0 \\/ b.0")),
    ];
    fixed("counterexamples", checks)
}

/// Structural checks on the reachable LTS of random terms.
pub fn invariants(cfg: &SuiteConfig, max_degree: usize) -> SuiteReport {
    run_sharded("structural invariants", cfg.count, cfg.jobs, |i| {
        let mut g = TermGen::new(GenConfig::default().with_seed(instance_seed(cfg.seed, 1, i)).with_max_degree(max_degree));
        let t = g.term();
        let f = match build_lts(&t, DEFAULT_MAX_STATES) {
            Ok(f) => f,
            Err(e) => return Outcome::Fail(format!("{t}: {e}")),
        };
        let checks = [check_tau_pure, check_lts1, check_lts2, check_degree_decrease, check_stable_model];
        for c in checks {
            if let Err(v) = c(&f) {
                return Outcome::Fail(format!("{t}: {v}"));
            }
        }
        Outcome::Pass
    })
}

/// Structural-recursion semantics against the rule-closure oracle.
pub fn oracle_semantics_suite(cfg: &SuiteConfig, max_degree: usize) -> SuiteReport {
    run_sharded("semantics oracle", cfg.count, cfg.jobs, |i| {
        let mut g = TermGen::new(GenConfig::default().with_seed(instance_seed(cfg.seed, 2, i)).with_max_degree(max_degree));
        let t = g.term();
        let sem = Semantics::new();
        let m = oracle_semantics(&t);
        for u in m.universe() {
            let mine: BTreeSet<(Action, Term)> = sem.transitions(u).iter().cloned().collect();
            if m.transitions(u) != Some(&mine) {
                return Outcome::Fail(format!("transitions of {u} in {t}"));
            }
            if m.is_inconsistent(u) != Some(sem.is_inconsistent(u)) {
                return Outcome::Fail(format!("inconsistency of {u} in {t}"));
            }
            if let Term::Conj(..) = u {
                let fb: BTreeSet<Action> = mine
                    .iter()
                    .map(|(a, _)| a.clone())
                    .filter(|a| sem.fbar(u, a).unwrap_or(false))
                    .collect();
                if m.fbar_set(u).cloned().unwrap_or_default() != fb {
                    return Outcome::Fail(format!("auxiliary predicate of {u} in {t}"));
                }
            }
        }
        Outcome::Pass
    })
}

/// A term at least as large as `t` in the refinement order: a disjunct is
/// added somewhere, relying on precongruence.
pub fn weaken(g: &mut TermGen, t: &Term, depth: usize) -> Term {
    let extra = |g: &mut TermGen| g.term_up_to(depth.max(1));
    let kids = t.children();
    if kids.is_empty() || g.rng().gen_bool(0.3) {
        let r = extra(g);
        return if g.rng().gen_bool(0.5) { Term::disj(t.clone(), r) } else { Term::disj(r, t.clone()) };
    }
    rebuild_one(g, t, |g, c| weaken(g, c, depth))
}

/// Like `weaken` but keeps a stable term stable: changes happen only
/// below a visible prefix.
pub fn weaken_stable(g: &mut TermGen, t: &Term, depth: usize) -> Term {
    match t {
        Term::Prefix(a, u) if !a.is_tau() => Term::prefix(a.clone(), weaken(g, u, depth)),
        Term::ExtChoice(..) | Term::Conj(..) | Term::Par(..) => rebuild_one(g, t, |g, c| weaken_stable(g, c, depth)),
        _ => t.clone(),
    }
}

fn rebuild_one(g: &mut TermGen, t: &Term, f: impl Fn(&mut TermGen, &Term) -> Term) -> Term {
    let left = g.rng().gen_bool(0.5);
    match t {
        Term::Prefix(a, u) => Term::prefix(a.clone(), f(g, u)),
        Term::ExtChoice(l, r) | Term::Conj(l, r) | Term::Disj(l, r) | Term::Par(l, r, _) => {
            let (l, r) = if left { (f(g, l), (**r).clone()) } else { ((**l).clone(), f(g, r)) };
            match t {
                Term::ExtChoice(..) => Term::ext(l, r),
                Term::Conj(..) => Term::conj(l, r),
                Term::Disj(..) => Term::disj(l, r),
                Term::Par(_, _, a) => Term::par(l, r, a.clone()),
                _ => unreachable!(),
            }
        }
        _ => t.clone(),
    }
}

/// Memoised stable simulation against the fixpoint oracle on stable pairs,
/// roots and every reachable stable pair.
pub fn oracle_sim_suite(cfg: &SuiteConfig, max_degree: usize) -> SuiteReport {
    run_sharded("simulation oracle", cfg.count, cfg.jobs, |i| {
        let mut g = TermGen::new(
            GenConfig::default().with_seed(instance_seed(cfg.seed, 3, i)).with_max_degree(max_degree).stable(),
        );
        let t = g.term();
        let s = if g.rng().gen_bool(0.5) {
            weaken_stable(&mut g, &t, 3)
        } else {
            g.term()
        };
        let o = oracle_stable_sim(&[t.clone(), s.clone()]);
        let sem = Semantics::new();
        let r = Refinement::new(&sem);
        let mut reach: BTreeSet<Term> = BTreeSet::new();
        for root in [&t, &s] {
            match build_lts(root, DEFAULT_MAX_STATES) {
                Ok(f) => reach.extend(f.states().iter().filter(|st| st.stable).map(|st| st.term.clone())),
                Err(e) => return Outcome::Fail(format!("{root}: {e}")),
            }
        }
        for p in &reach {
            for q in &reach {
                if o.relates(p, q) != r.stable_sim(p, q).is_none() {
                    return Outcome::Fail(format!("{p} vs {q} (roots {t}, {s})"));
                }
            }
        }
        Outcome::Pass
    })
}

// ---- laws ----

enum Claim {
    /// ⊑
    Le(Term, Term),
    /// =
    Eq(Term, Term),
    /// ≲ on stable terms
    StableLe(Term, Term),
    /// ≈ on stable terms
    StableEq(Term, Term),
    Fact(bool, String),
    /// Side condition failed; draw again.
    Skip,
}

fn judge(c: Claim) -> Option<Outcome> {
    let sem = Semantics::new();
    let r = Refinement::new(&sem);
    let (ok, what) = match c {
        Claim::Skip => return None,
        Claim::Fact(ok, what) => (ok, what),
        Claim::Le(l, s) => (r.ready_sim_preorder(&l, &s).holds, format!("{l} ⊑ {s}")),
        Claim::Eq(l, s) => (r.rs_equiv(&l, &s).is_ok(), format!("{l} = {s}")),
        Claim::StableLe(l, s) => (r.stable_ready_sim(&l, &s).holds, format!("{l} ≲ {s}")),
        Claim::StableEq(l, s) => (r.stable_rs_equiv(&l, &s).is_ok(), format!("{l} ≈ {s}")),
    };
    Some(if ok { Outcome::Pass } else { Outcome::Fail(what) })
}

/// Laws that are false exactly as stated: idempotence of choice fails for
/// unstable terms and the prefix merge fails under a silent prefix. Each
/// has a restricted sibling in `LAWS` that holds.
pub const REFUTED_LAWS: &[&str] = &["choice-6", "special-prefix-merge"];

/// Names of the laws the law suite checks.
pub const LAWS: &[&str] = &[
    "prefix-1", "prefix-2", "disjunction-1", "disjunction-2", "disjunction-3", "disjunction-4", "disjunction-5",
    "choice-1", "choice-2", "choice-3", "choice-4", "choice-5", "choice-6", "choice-6-stable", "choice-7", "choice-8", "choice-9",
    "conjunction-1", "conjunction-2", "conjunction-3", "conjunction-4", "conjunction-5", "conjunction-6",
    "conjunction-7", "parallel-1", "parallel-2", "parallel-3", "parallel-4", "precongruence-prefix",
    "precongruence-binary", "precongruence-stable", "distributive", "special-prefix-merge",
    "special-prefix-merge-visible", "special-uniform-iff", "conj-choice-mismatch",
    "conj-choice-match", "conj-choice-pointwise", "conj-choice-injective", "expansion-upper", "expansion-lower",
    "basic-consistent",
];

const LAW_DEGREE: usize = 6;

struct Pools {
    g: TermGen,
    stable: TermGen,
    basic: TermGen,
}

impl Pools {
    fn new(seed: u64) -> Self {
        let base = GenConfig::default().with_max_degree(LAW_DEGREE);
        Pools {
            g: TermGen::new(base.clone().with_seed(seed)),
            stable: TermGen::new(base.clone().with_seed(seed ^ 1).stable()),
            basic: TermGen::new(base.with_seed(seed ^ 2).basic()),
        }
    }

    fn t(&mut self) -> Term {
        self.g.term()
    }

    fn s(&mut self) -> Term {
        self.stable.term()
    }

    fn action(&mut self) -> Name {
        self.g.action()
    }

    fn sync(&mut self) -> SyncSet {
        self.g.sync_set()
    }

    fn choice(&mut self, max: usize, depth: usize) -> Vec<(Name, Term)> {
        let n = self.g.rng().gen_range(0..=max);
        (0..n).map(|_| (self.g.action(), self.g.term_up_to(depth))).collect()
    }
}

fn choice(items: &[(Name, Term)]) -> Term {
    ext_all(items.iter().map(|(a, t)| Term::prefix(Action::Visible(a.clone()), t.clone())))
}

fn names(items: &[(Name, Term)]) -> BTreeSet<Name> {
    items.iter().map(|(a, _)| a.clone()).collect()
}

fn expansion(l: &[(Name, Term)], r: &[(Name, Term)], a: &SyncSet) -> Term {
    let (lt, rt) = (choice(l), choice(r));
    let par = |x: Term, y: Term| Term::par(x, y, a.clone());
    let o1: Vec<(Name, Term)> =
        l.iter().filter(|(n, _)| !a.contains(n)).map(|(n, x)| (n.clone(), par(x.clone(), rt.clone()))).collect();
    let o2: Vec<(Name, Term)> =
        r.iter().filter(|(n, _)| !a.contains(n)).map(|(n, y)| (n.clone(), par(lt.clone(), y.clone()))).collect();
    let mut o3 = Vec::new();
    for (n, x) in l {
        for (m, y) in r {
            if n == m && a.contains(n) {
                o3.push((n.clone(), par(x.clone(), y.clone())));
            }
        }
    }
    Term::ext(Term::ext(choice(&o1), choice(&o2)), choice(&o3))
}

fn law_claim(law: &str, k: &mut Pools) -> Claim {
    use Claim::*;
    let sem = Semantics::new();
    match law {
        "prefix-1" => Eq(Term::act(k.action().as_str(), Term::Bot), Term::Bot),
        "prefix-2" => {
            let t = k.t();
            Eq(Term::tau(t.clone()), t)
        }
        "disjunction-1" => {
            let (x, y) = (k.t(), k.t());
            Eq(Term::disj(x.clone(), y.clone()), Term::disj(y, x))
        }
        "disjunction-2" => {
            let (x, y, z) = (k.t(), k.t(), k.t());
            Eq(Term::disj(Term::disj(x.clone(), y.clone()), z.clone()), Term::disj(x, Term::disj(y, z)))
        }
        "disjunction-3" => {
            let x = k.t();
            Eq(Term::disj(x.clone(), x.clone()), x)
        }
        "disjunction-4" => {
            let x = k.t();
            Eq(Term::disj(x.clone(), Term::Bot), x)
        }
        "disjunction-5" => {
            let (x, y) = (k.t(), k.t());
            Le(x.clone(), Term::disj(x, y))
        }
        "choice-1" | "choice-2" => {
            let (x, y) = if law == "choice-1" { (k.s(), k.s()) } else { (k.t(), k.t()) };
            let (l, r) = (Term::ext(x.clone(), y.clone()), Term::ext(y, x));
            if law == "choice-1" { StableEq(l, r) } else { Eq(l, r) }
        }
        "choice-3" | "choice-4" => {
            let (x, y, z) = if law == "choice-3" { (k.s(), k.s(), k.s()) } else { (k.t(), k.t(), k.t()) };
            let (l, r) = (Term::ext(Term::ext(x.clone(), y.clone()), z.clone()), Term::ext(x, Term::ext(y, z)));
            if law == "choice-3" { StableEq(l, r) } else { Eq(l, r) }
        }
        "choice-5" => {
            let x = k.s();
            StableEq(Term::ext(x.clone(), x.clone()), x)
        }
        "choice-6" | "choice-6-stable" => {
            let x = if law == "choice-6" { k.t() } else { k.s() };
            Eq(Term::ext(x.clone(), x.clone()), x)
        }
        "choice-7" => {
            let x = k.t();
            Eq(Term::ext(x, Term::Bot), Term::Bot)
        }
        "choice-8" => {
            let x = k.s();
            StableEq(Term::ext(x.clone(), Term::Nil), x)
        }
        "choice-9" => {
            let x = k.t();
            Eq(Term::ext(x.clone(), Term::Nil), x)
        }
        "conjunction-1" | "conjunction-2" => {
            let (x, y) = if law == "conjunction-1" { (k.s(), k.s()) } else { (k.t(), k.t()) };
            let (l, r) = (Term::conj(x.clone(), y.clone()), Term::conj(y, x));
            if law == "conjunction-1" { StableEq(l, r) } else { Eq(l, r) }
        }
        "conjunction-3" | "conjunction-4" => {
            let st = law == "conjunction-3";
            let (x, y, z) = if st { (k.s(), k.s(), k.s()) } else { (k.t(), k.t(), k.t()) };
            let (l, r) = (Term::conj(Term::conj(x.clone(), y.clone()), z.clone()), Term::conj(x, Term::conj(y, z)));
            if st { StableEq(l, r) } else { Eq(l, r) }
        }
        "conjunction-5" => {
            let x = k.s();
            StableEq(Term::conj(x.clone(), x.clone()), x)
        }
        "conjunction-6" => {
            let x = k.t();
            Eq(Term::conj(x.clone(), x.clone()), x)
        }
        "conjunction-7" => {
            let x = k.t();
            Eq(Term::conj(x, Term::Bot), Term::Bot)
        }
        "parallel-1" | "parallel-2" => {
            let a = k.sync();
            let (x, y) = if law == "parallel-1" { (k.s(), k.s()) } else { (k.t(), k.t()) };
            let (l, r) = (Term::par(x.clone(), y.clone(), a.clone()), Term::par(y, x, a));
            if law == "parallel-1" { StableEq(l, r) } else { Eq(l, r) }
        }
        "parallel-3" => {
            let (x, a) = (k.t(), k.sync());
            Eq(Term::par(x, Term::Bot, a), Term::Bot)
        }
        "parallel-4" => Eq(Term::par(Term::Nil, Term::Nil, k.sync()), Term::Nil),
        "precongruence-prefix" => {
            let t1 = k.t();
            let t2 = weaken(&mut k.g, &t1, 2);
            let alpha = if k.g.rng().gen_bool(0.2) { Action::Tau } else { Action::Visible(k.action()) };
            Le(Term::prefix(alpha.clone(), t1), Term::prefix(alpha, t2))
        }
        "precongruence-binary" => {
            let (t1, s1) = (k.t(), k.t());
            let t2 = weaken(&mut k.g, &t1, 2);
            let s2 = if k.g.rng().gen_bool(0.3) { s1.clone() } else { weaken(&mut k.g, &s1, 2) };
            let a = k.sync();
            let op = k.g.rng().gen_range(0..4);
            let mk = |x: Term, y: Term| match op {
                0 => Term::ext(x, y),
                1 => Term::conj(x, y),
                2 => Term::disj(x, y),
                _ => Term::par(x, y, a.clone()),
            };
            Le(mk(t1, s1), mk(t2, s2))
        }
        "precongruence-stable" => {
            let (t1, s1) = (k.s(), k.s());
            let t2 = weaken_stable(&mut k.g, &t1, 2);
            let a = k.sync();
            let op = k.g.rng().gen_range(0..3);
            let mk = |x: Term, y: Term| match op {
                0 => Term::ext(x, y),
                1 => Term::conj(x, y),
                _ => Term::par(x, y, a.clone()),
            };
            StableLe(mk(t1, s1.clone()), mk(t2, s1))
        }
        "distributive" => {
            let (x, y, z, a) = (k.t(), k.t(), k.t(), k.sync());
            let op = k.g.rng().gen_range(0..3);
            let mk = |l: Term, r: Term| match op {
                0 => Term::ext(l, r),
                1 => Term::conj(l, r),
                _ => Term::par(l, r, a.clone()),
            };
            Eq(mk(x.clone(), Term::disj(y.clone(), z.clone())), Term::disj(mk(x.clone(), y), mk(x, z)))
        }
        "special-prefix-merge" | "special-prefix-merge-visible" => {
            let (x, y) = (k.t(), k.t());
            let tau = law == "special-prefix-merge" && k.g.rng().gen_bool(0.25);
            let alpha = if tau { Action::Tau } else { Action::Visible(k.action()) };
            Le(
                Term::ext(Term::prefix(alpha.clone(), x.clone()), Term::prefix(alpha.clone(), y.clone())),
                Term::prefix(alpha, Term::disj(x, y)),
            )
        }
        "special-uniform-iff" => {
            let (x, y, a) = (k.t(), k.t(), k.action());
            let l = Term::act(a.as_str(), Term::disj(x.clone(), y.clone()));
            let r = Term::ext(Term::act(a.as_str(), x.clone()), Term::act(a.as_str(), y.clone()));
            let holds = Refinement::new(&sem).ready_sim_preorder(&l, &r).holds;
            let uniform = sem.is_inconsistent(&x) == sem.is_inconsistent(&y);
            Fact(holds == uniform, format!("{l} ⊑ {r} is {holds}, uniformity is {uniform}"))
        }
        "conj-choice-mismatch" => {
            let (l, r) = (k.choice(3, 3), k.choice(3, 3));
            if names(&l) == names(&r) {
                return Skip;
            }
            Eq(Term::conj(choice(&l), choice(&r)), Term::Bot)
        }
        "conj-choice-match" => {
            let l = k.choice(3, 3);
            let mut acts: Vec<Name> = names(&l).into_iter().collect();
            let extra = k.g.rng().gen_range(0..=1);
            for _ in 0..extra {
                if let Some(a) = acts.choose(k.g.rng()).cloned() {
                    acts.push(a);
                }
            }
            acts.shuffle(k.g.rng());
            let r: Vec<(Name, Term)> = acts.into_iter().map(|a| (a, k.g.term_up_to(3))).collect();
            let mut m = Vec::new();
            for (a, x) in &l {
                for (b, y) in &r {
                    if a == b {
                        m.push((a.clone(), Term::conj(x.clone(), y.clone())));
                    }
                }
            }
            Le(choice(&m), Term::conj(choice(&l), choice(&r)))
        }
        "conj-choice-pointwise" | "conj-choice-injective" => {
            let mut l = k.choice(3, 3);
            if law == "conj-choice-injective" {
                let mut seen = BTreeSet::new();
                l.retain(|(a, _)| seen.insert(a.clone()));
            }
            let ys: Vec<Term> = l.iter().map(|_| k.g.term_up_to(3)).collect();
            let r: Vec<(Name, Term)> = l.iter().zip(&ys).map(|((a, _), y)| (a.clone(), y.clone())).collect();
            let both: Vec<(Name, Term)> =
                l.iter().zip(&ys).map(|((a, x), y)| (a.clone(), Term::conj(x.clone(), y.clone()))).collect();
            let split = Term::conj(choice(&l), choice(&r));
            if law == "conj-choice-pointwise" { Le(choice(&both), split) } else { Le(split, choice(&both)) }
        }
        "expansion-upper" | "expansion-lower" => {
            let (l, r, a) = (k.choice(3, 3), k.choice(3, 3), k.sync());
            let big = Term::par(choice(&l), choice(&r), a.clone());
            let exp = expansion(&l, &r, &a);
            if law == "expansion-upper" {
                return Le(big, exp);
            }
            // Unmatched synchronised bodies must be consistent.
            let unmatched_bad = l
                .iter()
                .filter(|(n, _)| a.contains(n) && !r.iter().any(|(m, _)| m == n))
                .chain(r.iter().filter(|(m, _)| a.contains(m) && !l.iter().any(|(n, _)| n == m)))
                .any(|(_, t)| sem.is_inconsistent(t));
            if unmatched_bad {
                return Skip;
            }
            Le(exp, big)
        }
        "basic-consistent" => {
            let t = k.basic.term();
            Fact(!sem.is_inconsistent(&t), format!("{t} is inconsistent"))
        }
        _ => Fact(false, format!("unknown law {law}")),
    }
}

const DRAWS: usize = 50;

/// One report per law, each over `cfg.count` instances meeting the law's
/// side conditions.
pub fn laws(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    laws_named(cfg, LAWS)
}

/// The law suite restricted to `names`; unknown names report a failure.
pub fn laws_named(cfg: &SuiteConfig, names: &[&str]) -> Vec<SuiteReport> {
    names
        .iter()
        .map(|law| {
            let li = LAWS.iter().position(|l| l == law).unwrap_or(LAWS.len());
            run_sharded(&format!("law {law}"), cfg.count, cfg.jobs, |i| {
                let mut k = Pools::new(instance_seed(cfg.seed, 100 + li as u64, i));
                for _ in 0..DRAWS {
                    if let Some(o) = judge(law_claim(law, &mut k)) {
                        return o;
                    }
                }
                Outcome::Fail("side condition never met".into())
            })
        })
        .collect()
}

// ---- axioms ----

fn term_b(t: Term) -> Binding {
    Binding::Term(t)
}

fn axiom_bindings(ax: Axiom, k: &mut Pools) -> Option<Bindings> {
    use Axiom::*;
    let mut b: Bindings = Vec::new();
    let mut put = |n: &str, v: Binding| b.push((n.to_string(), v));
    match ax {
        EC3 => put("x", term_b(k.s())),
        DS4 => {
            put("a", Binding::Action(Action::Visible(k.action())));
            put("x", term_b(k.basic.term()));
            put("y", term_b(k.basic.term()));
        }
        PR1 => put("a", Binding::Action(Action::Visible(k.action()))),
        ECC1 | ECC2 | ECC3 | EXP1 | EXP2 => {
            let basic = matches!(ax, EXP1 | EXP2);
            let body = |k: &mut Pools| if basic { k.basic.term_up_to(3) } else { k.g.term_up_to(3) };
            let n = k.g.rng().gen_range(0..=3);
            let mut l: Vec<(Name, Term)> = (0..n).map(|_| (k.action(), body(k))).collect();
            if ax == ECC3 {
                let mut seen = BTreeSet::new();
                l.retain(|(a, _)| seen.insert(a.clone()));
            }
            b = choice_bindings("a", "x", &l);
            match ax {
                ECC2 | ECC3 => {
                    for i in 0..l.len() {
                        b.push((format!("y{i}"), term_b(body(k))));
                    }
                }
                _ => {
                    let m = k.g.rng().gen_range(0..=3);
                    let r: Vec<(Name, Term)> = (0..m).map(|_| (k.action(), body(k))).collect();
                    if ax == ECC1 && names(&l) == names(&r) {
                        return None;
                    }
                    b.extend(choice_bindings("b", "y", &r));
                    if matches!(ax, EXP1 | EXP2) {
                        b.push(("A".into(), Binding::Sync(k.sync())));
                    }
                }
            }
            return Some(b);
        }
        _ => {
            let (x, y, z) = (k.t(), k.t(), k.t());
            put("x", term_b(x));
            put("y", term_b(y));
            put("z", term_b(z));
            put("A", Binding::Sync(k.sync()));
        }
    }
    Some(b)
}

/// `x [] x = x` with no restriction on `x`, i.e. the idempotence schema
/// without the stability side condition `Axiom::EC3` enforces. False.
pub fn ec3_unrestricted(cfg: &SuiteConfig) -> SuiteReport {
    run_sharded("axiom EC3 without side condition", cfg.count, cfg.jobs, |i| {
        let mut k = Pools::new(instance_seed(cfg.seed, 300, i));
        let x = k.t();
        judge(Claim::Eq(Term::ext(x.clone(), x.clone()), x)).expect("not skipped")
    })
}

/// Every ground instance drawn must be sound: `⊑` for each schema, both
/// ways for equations.
pub fn axiom_soundness(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    Axiom::ALL
        .iter()
        .enumerate()
        .map(|(ai, &ax)| {
            run_sharded(&format!("axiom {ax}"), cfg.count, cfg.jobs, |i| {
                let mut k = Pools::new(instance_seed(cfg.seed, 200 + ai as u64, i));
                for _ in 0..DRAWS {
                    let Some(b) = axiom_bindings(ax, &mut k) else { continue };
                    let (l, r) = match ax.instantiate(&b) {
                        Ok(lr) => lr,
                        Err(e) => return Outcome::Fail(format!("{ax}: {e}")),
                    };
                    let claim = if ax.is_equation() { Claim::Eq(l, r) } else { Claim::Le(l, r) };
                    return judge(claim).expect("not skipped");
                }
                Outcome::Fail("side condition never met".into())
            })
        })
        .collect()
}

// ---- normal forms and completeness ----

pub fn normal_forms(cfg: &SuiteConfig, max_degree: usize) -> SuiteReport {
    run_sharded("normal forms", cfg.count, cfg.jobs, |i| {
        let mut g = TermGen::new(GenConfig::default().with_seed(instance_seed(cfg.seed, 4, i)).with_max_degree(max_degree));
        let t = g.term();
        let (nf, trace) = normalize(&t);
        let back = nf.reify();
        if NormalForm::from_term(&back).as_ref() != Some(&nf) || !nf.is_canonical() {
            return Outcome::Fail(format!("{t}: malformed normal form {nf}"));
        }
        if let Err(e) = validate_trace(&trace) {
            return Outcome::Fail(format!("{t}: trace rejected, {e}"));
        }
        if trace.goal.lhs != t || trace.goal.rhs != back {
            return Outcome::Fail(format!("{t}: trace proves the wrong goal"));
        }
        let sem = Semantics::new();
        if Refinement::new(&sem).rs_equiv(&t, &back).is_err() {
            return Outcome::Fail(format!("{t} differs from its normal form {nf}"));
        }
        if normalize(&back).0 != nf {
            return Outcome::Fail(format!("{t}: normalising {nf} again changes it"));
        }
        if t.is_basic() && nf.is_bot() {
            return Outcome::Fail(format!("basic {t} normalised to bot"));
        }
        Outcome::Pass
    })
}

pub fn completeness(cfg: &SuiteConfig, max_degree: usize) -> SuiteReport {
    run_sharded("prover vs semantics", cfg.count, cfg.jobs, |i| {
        let mut g = TermGen::new(GenConfig::default().with_seed(instance_seed(cfg.seed, 5, i)).with_max_degree(max_degree));
        let (t, s) = loop {
            let t = g.term();
            let s = match g.rng().gen_range(0..3) {
                0 => weaken(&mut g, &t, 2),
                1 => g.term_up_to(t.degree()),
                _ => g.term(),
            };
            if s.degree() <= max_degree {
                break (t, s);
            }
        };
        let sem = Semantics::new();
        let holds = Refinement::new(&sem).ready_sim_preorder(&t, &s).holds;
        match prove(&t, &s) {
            Err(e) => Outcome::Fail(e.to_string()),
            Ok(pr) if pr.holds != holds => Outcome::Fail(format!("{t} ≤ {s}: prover {} semantics {holds}", pr.holds)),
            Ok(pr) => match pr.trace {
                Some(tr) => match validate_trace(&tr) {
                    Ok(()) if tr.goal.lhs == t && tr.goal.rhs == s => Outcome::Pass,
                    Ok(()) => Outcome::Fail(format!("{t} ≤ {s}: trace proves something else")),
                    Err(e) => Outcome::Fail(format!("{t} ≤ {s}: {e}")),
                },
                None if holds => Outcome::Fail(format!("{t} ≤ {s}: no trace")),
                None => Outcome::Pass,
            },
        }
    })
}

/// Everything `cll selftest` runs, with degree caps of 30 for the
/// structural suite, 12 for the oracle suites and 10 for the prover.
/// The laws in `REFUTED_LAWS` are left out; `counterexamples` covers them.
pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    let mut out = vec![constants(), counterexamples()];
    out.push(invariants(cfg, 30));
    out.push(oracle_semantics_suite(cfg, 12));
    out.push(oracle_sim_suite(cfg, 12));
    let sound: Vec<&str> = LAWS.iter().copied().filter(|l| !REFUTED_LAWS.contains(l)).collect();
    out.extend(laws_named(cfg, &sound));
    out.extend(axiom_soundness(cfg));
    out.push(normal_forms(cfg, 12));
    out.push(completeness(cfg, 10));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_suites_pass() {
        assert!(constants().passed(), "{}", constants());
        assert!(counterexamples().passed(), "{}", counterexamples());
    }

    #[test]
    fn sharding_does_not_change_results() {
        let one = SuiteConfig { seed: 9, count: 12, jobs: 1 };
        let four = SuiteConfig { jobs: 4, ..one.clone() };
        assert_eq!(normal_forms(&one, 8), normal_forms(&four, 8));
    }

    #[test]
    fn failures_are_reported() {
        let r = run_sharded("demo", 5, 2, |i| if i == 3 { Outcome::Fail("three".into()) } else { Outcome::Pass });
        assert_eq!((r.checked, r.failed), (5, 1));
        assert!(r.to_string().starts_with("FAIL demo"));
        let r = run_sharded("boom", 2, 1, |_| panic!("kaboom"));
        assert_eq!(r.failed, 2);
        assert!(r.examples[0].contains("kaboom"));
    }

    #[test]
    fn weakening_goes_up() {
        let sem = Semantics::new();
        let r = Refinement::new(&sem);
        let mut g = TermGen::new(GenConfig::default().with_seed(4).with_max_degree(6));
        for _ in 0..100 {
            let t = g.term();
            let s = weaken(&mut g, &t, 2);
            assert!(r.ready_sim_preorder(&t, &s).holds, "{t} vs {s}");
        }
        let mut g = TermGen::new(GenConfig::default().with_seed(4).with_max_degree(6).stable());
        for _ in 0..100 {
            let t = g.term();
            let s = weaken_stable(&mut g, &t, 2);
            assert!(sem.is_stable(&s));
            assert!(r.stable_ready_sim(&t, &s).holds, "{t} vs {s}");
        }
    }

    #[test]
    fn refuted_laws_are_refuted() {
        let cfg = SuiteConfig { seed: 0, count: 500, jobs: 2 };
        for r in laws_named(&cfg, REFUTED_LAWS) {
            assert!(!r.passed(), "{r}");
        }
        assert!(!ec3_unrestricted(&cfg).passed());
    }

    #[test]
    fn small_run_of_everything() {
        let cfg = SuiteConfig { seed: 1, count: 15, jobs: 2 };
        for rep in run_all(&cfg) {
            assert!(rep.passed(), "{rep}");
        }
    }
}
