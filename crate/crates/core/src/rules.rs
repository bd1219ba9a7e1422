//! The transition system specification written down as data.
//!
//! Each rule is a conclusion pattern plus a list of premises. [`derive()`]
//! enumerates all ground instances whose conclusion talks about a given
//! term and whose premises hold in a supplied set of facts. Nothing here
//! knows how the semantics engine computes anything;
//! the model checker and the test oracle both judge the engine against
//! this table.

use std::collections::BTreeSet;

use crate::term::{Action, SyncSet, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Head {
    Bot,
    Prefix,
    Ext,
    Conj,
    Disj,
    Par,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Var {
    X1,
    X2,
    Y1,
    Y2,
    Z,
}

/// Label slot of a premise. `A` is the rule's visible label variable,
/// `Alpha` the same slot ranging over every label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lbl {
    Tau,
    A,
    Alpha,
}

#[derive(Debug, Clone, Copy)]
enum Prem {
    Trans(Var, Lbl, Var),
    NoTrans(Var, Lbl),
    WholeTrans(Lbl, Var),
    WholeNoTrans(Lbl),
    Inc(Var),
    Cons(Var),
    WholeNoFbar(Lbl),
    InSync,
    NotInSync,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    Var(Var),
    Ext(Var, Var),
    Conj(Var, Var),
    Par(Var, Var),
}

#[derive(Debug, Clone, Copy)]
enum Concl {
    Trans(Lbl, Target),
    Inc,
    Fbar(Lbl),
}

struct Rule {
    name: &'static str,
    head: Head,
    premises: &'static [Prem],
    concl: Concl,
}

use Lbl::*;
use Prem::*;
use Var::*;

const RULES: &[Rule] = &[
    Rule { name: "Ra1", head: Head::Prefix, premises: &[], concl: Concl::Trans(Alpha, Target::Var(X1)) },
    Rule { name: "Ra2", head: Head::Ext, premises: &[Trans(X1, A, Y1), NoTrans(X2, Tau)], concl: Concl::Trans(A, Target::Var(Y1)) },
    Rule { name: "Ra3", head: Head::Ext, premises: &[NoTrans(X1, Tau), Trans(X2, A, Y2)], concl: Concl::Trans(A, Target::Var(Y2)) },
    Rule { name: "Ra4", head: Head::Ext, premises: &[Trans(X1, Tau, Y1)], concl: Concl::Trans(Tau, Target::Ext(Y1, X2)) },
    Rule { name: "Ra5", head: Head::Ext, premises: &[Trans(X2, Tau, Y2)], concl: Concl::Trans(Tau, Target::Ext(X1, Y2)) },
    Rule { name: "Ra6", head: Head::Conj, premises: &[Trans(X1, A, Y1), Trans(X2, A, Y2)], concl: Concl::Trans(A, Target::Conj(Y1, Y2)) },
    Rule { name: "Ra7", head: Head::Conj, premises: &[Trans(X1, Tau, Y1)], concl: Concl::Trans(Tau, Target::Conj(Y1, X2)) },
    Rule { name: "Ra8", head: Head::Conj, premises: &[Trans(X2, Tau, Y2)], concl: Concl::Trans(Tau, Target::Conj(X1, Y2)) },
    Rule { name: "Ra9", head: Head::Disj, premises: &[], concl: Concl::Trans(Tau, Target::Var(X1)) },
    Rule { name: "Ra10", head: Head::Disj, premises: &[], concl: Concl::Trans(Tau, Target::Var(X2)) },
    Rule { name: "Ra11", head: Head::Par, premises: &[Trans(X1, Tau, Y1)], concl: Concl::Trans(Tau, Target::Par(Y1, X2)) },
    Rule { name: "Ra12", head: Head::Par, premises: &[Trans(X2, Tau, Y2)], concl: Concl::Trans(Tau, Target::Par(X1, Y2)) },
    Rule { name: "Ra13", head: Head::Par, premises: &[Trans(X1, A, Y1), NoTrans(X2, Tau), NotInSync], concl: Concl::Trans(A, Target::Par(Y1, X2)) },
    Rule { name: "Ra14", head: Head::Par, premises: &[NoTrans(X1, Tau), Trans(X2, A, Y2), NotInSync], concl: Concl::Trans(A, Target::Par(X1, Y2)) },
    // The synchronised target keeps the sync set of the source.
    Rule { name: "Ra15", head: Head::Par, premises: &[Trans(X1, A, Y1), Trans(X2, A, Y2), InSync], concl: Concl::Trans(A, Target::Par(Y1, Y2)) },
    Rule { name: "Rp1", head: Head::Bot, premises: &[], concl: Concl::Inc },
    Rule { name: "Rp2", head: Head::Prefix, premises: &[Inc(X1)], concl: Concl::Inc },
    Rule { name: "Rp3", head: Head::Disj, premises: &[Inc(X1), Inc(X2)], concl: Concl::Inc },
    Rule { name: "Rp4", head: Head::Ext, premises: &[Inc(X1)], concl: Concl::Inc },
    Rule { name: "Rp5", head: Head::Ext, premises: &[Inc(X2)], concl: Concl::Inc },
    Rule { name: "Rp6", head: Head::Par, premises: &[Inc(X1)], concl: Concl::Inc },
    Rule { name: "Rp7", head: Head::Par, premises: &[Inc(X2)], concl: Concl::Inc },
    Rule { name: "Rp8", head: Head::Conj, premises: &[Inc(X1)], concl: Concl::Inc },
    Rule { name: "Rp9", head: Head::Conj, premises: &[Inc(X2)], concl: Concl::Inc },
    Rule { name: "Rp10", head: Head::Conj, premises: &[Trans(X1, A, Y1), NoTrans(X2, A), WholeNoTrans(Tau)], concl: Concl::Inc },
    Rule { name: "Rp11", head: Head::Conj, premises: &[NoTrans(X1, A), Trans(X2, A, Y2), WholeNoTrans(Tau)], concl: Concl::Inc },
    Rule { name: "Rp12", head: Head::Conj, premises: &[WholeTrans(Alpha, Z), Cons(Z)], concl: Concl::Fbar(Alpha) },
    Rule { name: "Rp13", head: Head::Conj, premises: &[WholeTrans(Alpha, Z), WholeNoFbar(Alpha)], concl: Concl::Inc },
];

/// A positive literal about one term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    Trans(Action, Term),
    Inc,
    Fbar(Action),
}

/// Which conclusions to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Trans,
    Fbar,
    Inc,
}

/// Read access to a candidate model. `None` means the term lies outside
/// the universe the facts were recorded for.
pub trait Facts {
    fn moves(&self, t: &Term) -> Option<Vec<(Action, Term)>>;
    fn inconsistent(&self, t: &Term) -> Option<bool>;
    fn fbar(&self, t: &Term, alpha: &Action) -> Option<bool>;
}

/// A rule instance whose premises hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: &'static str,
    pub fact: Fact,
}

#[derive(Clone, Default)]
struct Env {
    x1: Option<Term>,
    x2: Option<Term>,
    y1: Option<Term>,
    y2: Option<Term>,
    z: Option<Term>,
    label: Option<Action>,
    sync: Option<SyncSet>,
}

impl Env {
    fn get(&self, v: Var) -> &Term {
        let slot = match v {
            X1 => &self.x1,
            X2 => &self.x2,
            Y1 => &self.y1,
            Y2 => &self.y2,
            Z => &self.z,
        };
        slot.as_ref().expect("rule variable bound before use")
    }

    fn set(&mut self, v: Var, t: Term) {
        let slot = match v {
            X1 => &mut self.x1,
            X2 => &mut self.x2,
            Y1 => &mut self.y1,
            Y2 => &mut self.y2,
            Z => &mut self.z,
        };
        *slot = Some(t);
    }

    // Does `a` fit the slot? Binds the label variable on first use.
    fn unify(&self, l: Lbl, a: &Action) -> Option<Env> {
        match l {
            Tau => a.is_tau().then(|| self.clone()),
            A | Alpha => {
                if l == A && a.is_tau() {
                    return None;
                }
                match &self.label {
                    Some(b) => (b == a).then(|| self.clone()),
                    None => {
                        let mut e = self.clone();
                        e.label = Some(a.clone());
                        Some(e)
                    }
                }
            }
        }
    }

    fn label(&self, l: Lbl) -> Action {
        match l {
            Tau => Action::Tau,
            A | Alpha => self.label.clone().expect("label bound before use"),
        }
    }
}

fn match_head(head: Head, t: &Term) -> Option<Env> {
    let mut e = Env::default();
    match (head, t) {
        (Head::Bot, Term::Bot) => {}
        (Head::Prefix, Term::Prefix(a, x)) => {
            e.x1 = Some((**x).clone());
            e.label = Some(a.clone());
        }
        (Head::Ext, Term::ExtChoice(l, r))
        | (Head::Conj, Term::Conj(l, r))
        | (Head::Disj, Term::Disj(l, r)) => {
            e.x1 = Some((**l).clone());
            e.x2 = Some((**r).clone());
        }
        (Head::Par, Term::Par(l, r, s)) => {
            e.x1 = Some((**l).clone());
            e.x2 = Some((**r).clone());
            e.sync = Some(s.clone());
        }
        _ => return None,
    }
    Some(e)
}

fn build(target: Target, e: &Env) -> Term {
    match target {
        Target::Var(v) => e.get(v).clone(),
        Target::Ext(a, b) => Term::ext(e.get(a).clone(), e.get(b).clone()),
        Target::Conj(a, b) => Term::conj(e.get(a).clone(), e.get(b).clone()),
        Target::Par(a, b) => Term::par(
            e.get(a).clone(),
            e.get(b).clone(),
            e.sync.clone().expect("sync set bound by head"),
        ),
    }
}

fn kind_of(c: &Concl) -> Kind {
    match c {
        Concl::Trans(..) => Kind::Trans,
        Concl::Inc => Kind::Inc,
        Concl::Fbar(_) => Kind::Fbar,
    }
}

fn is_negative(p: &Prem) -> bool {
    matches!(p, NoTrans(..) | WholeNoTrans(_) | Cons(_) | WholeNoFbar(_))
}

struct Ctx<'a, F: Facts> {
    whole: &'a Term,
    facts: &'a F,
    positive_only: bool,
}

impl<F: Facts> Ctx<'_, F> {
    fn moves(&self, t: &Term) -> Result<Vec<(Action, Term)>, Term> {
        self.facts.moves(t).ok_or_else(|| t.clone())
    }

    fn inc(&self, t: &Term) -> Result<bool, Term> {
        self.facts.inconsistent(t).ok_or_else(|| t.clone())
    }

    // Extend `env` through premises[i..], calling `emit` for each full match.
    fn solve(
        &self,
        premises: &[Prem],
        env: Env,
        emit: &mut dyn FnMut(&Env),
    ) -> Result<(), Term> {
        let Some((p, rest)) = premises.split_first() else {
            emit(&env);
            return Ok(());
        };
        if self.positive_only && is_negative(p) {
            return self.solve(rest, env, emit);
        }
        match *p {
            Trans(_, l, y) | WholeTrans(l, y) => {
                let src = match *p {
                    Trans(x, ..) => env.get(x).clone(),
                    _ => self.whole.clone(),
                };
                for (a, t) in self.moves(&src)? {
                    if let Some(mut e) = env.unify(l, &a) {
                        e.set(y, t);
                        self.solve(rest, e, emit)?;
                    }
                }
                Ok(())
            }
            NoTrans(_, l) | WholeNoTrans(l) => {
                let src = match *p {
                    NoTrans(x, _) => env.get(x).clone(),
                    _ => self.whole.clone(),
                };
                let moves = self.moves(&src)?;
                match l {
                    Tau => {
                        if moves.iter().all(|(a, _)| !a.is_tau()) {
                            self.solve(rest, env, emit)?;
                        }
                        Ok(())
                    }
                    A | Alpha => {
                        let lbl = env.label(l);
                        if moves.iter().all(|(a, _)| *a != lbl) {
                            self.solve(rest, env, emit)?;
                        }
                        Ok(())
                    }
                }
            }
            Inc(x) => {
                if self.inc(env.get(x))? {
                    self.solve(rest, env, emit)?;
                }
                Ok(())
            }
            Cons(x) => {
                if !self.inc(env.get(x))? {
                    self.solve(rest, env, emit)?;
                }
                Ok(())
            }
            WholeNoFbar(l) => {
                let lbl = env.label(l);
                let holds = self.facts.fbar(self.whole, &lbl).ok_or_else(|| self.whole.clone())?;
                if !holds {
                    self.solve(rest, env, emit)?;
                }
                Ok(())
            }
            InSync | NotInSync => {
                let name = env.label(A);
                let inside = match name.name() {
                    Some(n) => env.sync.as_ref().is_some_and(|s| s.contains(n)),
                    None => false,
                };
                if inside == matches!(p, InSync) {
                    self.solve(rest, env, emit)?;
                }
                Ok(())
            }
        }
    }
}

// Ra3 and Rp11 list a negative premise first. Evaluate positive premises
// first so the label variable is bound before anything tests it.
fn ordered(premises: &[Prem]) -> Vec<Prem> {
    let rank = |p: &Prem| match p {
        InSync | NotInSync => 2,
        _ if is_negative(p) => 1,
        _ => 0,
    };
    let mut v = premises.to_vec();
    v.sort_by_key(rank);
    v
}

/// All conclusions of the requested kinds about `t` derivable in one step
/// from `facts`. With `positive_only`, negative premises are ignored, which
/// yields an over-approximation of the transitions.
///
/// Returns `Err(u)` when some premise refers to a term `u` the facts do not
/// cover.
pub fn derive<F: Facts>(
    t: &Term,
    facts: &F,
    kinds: &[Kind],
    positive_only: bool,
) -> Result<Vec<Derivation>, Term> {
    let ctx = Ctx { whole: t, facts, positive_only };
    let mut out: Vec<Derivation> = Vec::new();
    for rule in RULES {
        if !kinds.contains(&kind_of(&rule.concl)) {
            continue;
        }
        let Some(env) = match_head(rule.head, t) else { continue };
        let premises = ordered(rule.premises);
        let mut found: Vec<Fact> = Vec::new();
        ctx.solve(&premises, env, &mut |e| {
            let fact = match rule.concl {
                Concl::Trans(l, tgt) => Fact::Trans(e.label(l), build(tgt, e)),
                Concl::Inc => Fact::Inc,
                Concl::Fbar(l) => Fact::Fbar(e.label(l)),
            };
            found.push(fact);
        })?;
        out.extend(found.into_iter().map(|fact| Derivation { rule: rule.name, fact }));
    }
    Ok(out)
}

/// The distinct facts among a list of derivations.
pub fn facts_of(ds: &[Derivation]) -> BTreeSet<Fact> {
    ds.iter().map(|d| d.fact.clone()).collect()
}

/// Names of every rule in the table, in order.
pub fn rule_names() -> Vec<&'static str> {
    RULES.iter().map(|r| r.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;
    use crate::semantics::Semantics;

    struct Engine(Semantics);

    impl Facts for Engine {
        fn moves(&self, t: &Term) -> Option<Vec<(Action, Term)>> {
            Some(self.0.transitions(t).to_vec())
        }
        fn inconsistent(&self, t: &Term) -> Option<bool> {
            Some(self.0.is_inconsistent(t))
        }
        fn fbar(&self, t: &Term, a: &Action) -> Option<bool> {
            self.0.fbar(t, a).ok()
        }
    }

    #[test]
    fn table_has_every_rule() {
        let names = rule_names();
        assert_eq!(names.len(), 28);
        assert_eq!(names.iter().filter(|n| n.starts_with("Ra")).count(), 15);
    }

    #[test]
    fn one_step_derivations_agree_with_engine_on_samples() {
        let e = Engine(Semantics::new());
        for src in ["a.0 [] tau.b.0", "a.b.0 /\\ a.c.0", "a.0 |[a]| a.b.0", "a.0 /\\ b.0", "a.bot /\\ a.0"] {
            let t = parse(src).unwrap();
            let ds = derive(&t, &e, &[Kind::Trans, Kind::Inc], false).unwrap();
            let facts = facts_of(&ds);
            let want: BTreeSet<Fact> = e
                .0
                .transitions(&t)
                .iter()
                .map(|(a, v)| Fact::Trans(a.clone(), v.clone()))
                .chain(e.0.is_inconsistent(&t).then_some(Fact::Inc))
                .collect();
            assert_eq!(facts, want, "{src}");
        }
    }

    #[test]
    fn negative_premise_blocks_visible_move() {
        let e = Engine(Semantics::new());
        let t = parse("a.0 [] tau.0").unwrap();
        let ds = derive(&t, &e, &[Kind::Trans], false).unwrap();
        assert!(ds.iter().all(|d| d.rule != "Ra2"));
        let over = derive(&t, &e, &[Kind::Trans], true).unwrap();
        assert!(over.iter().any(|d| d.rule == "Ra2"));
    }
}
