//! Ready simulation and the refinement preorder built on it.
//!
//! `t ≲ s` (stable ready simulation) needs both sides stable; an
//! inconsistent `t` is simulated by anything stable. Otherwise `s` must be
//! consistent with the same ready set, and every weak consistent `a`-move
//! of `t` must be matched by one of `s` with the targets again related.
//! Moves strictly lower the degree, so the relation is decided by
//! memoised recursion on pairs.
//!
//! `t ⊑ s` asks that every consistent stabilisation of `t` be ≲ some
//! consistent stabilisation of `s`.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::semantics::Semantics;
use crate::term::{Name, Term};

/// How many failed candidates a witness keeps per unmatched move.
pub const MAX_TRIED: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Why a pair is not related. Nested witnesses explain each rejected
/// candidate match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    NotStable { side: Side, term: Term },
    ConsistencyGap { left: Term, right: Term },
    ReadySetMismatch { left: Term, right: Term, only_left: BTreeSet<Name>, only_right: BTreeSet<Name> },
    UnmatchedMove { left: Term, right: Term, action: Name, target: Term, tried: Vec<(Term, Arc<Witness>)> },
    UnmatchedStabilization { left: Term, right: Term, stable: Term, tried: Vec<(Term, Arc<Witness>)> },
}

impl Witness {
    /// The clause of the definition this witness violates.
    pub fn clause(&self) -> &'static str {
        match self {
            Witness::NotStable { .. } => "RS1",
            Witness::ConsistencyGap { .. } => "RS2",
            Witness::UnmatchedMove { .. } => "RS3",
            Witness::ReadySetMismatch { .. } => "RS4",
            Witness::UnmatchedStabilization { .. } => "stabilization",
        }
    }

    pub fn to_json(&self) -> Value {
        let names = |s: &BTreeSet<Name>| s.iter().map(|n| n.to_string()).collect::<Vec<_>>();
        let tried = |v: &[(Term, Arc<Witness>)]| {
            v.iter()
                .map(|(c, w)| json!({ "candidate": c.to_string(), "witness": w.to_json() }))
                .collect::<Vec<_>>()
        };
        match self {
            Witness::NotStable { side, term } => json!({
                "kind": "not_stable", "clause": self.clause(),
                "side": if *side == Side::Left { "left" } else { "right" },
                "term": term.to_string(),
            }),
            Witness::ConsistencyGap { left, right } => json!({
                "kind": "consistency_gap", "clause": self.clause(),
                "left": left.to_string(), "right": right.to_string(),
            }),
            Witness::ReadySetMismatch { left, right, only_left, only_right } => json!({
                "kind": "ready_set_mismatch", "clause": self.clause(),
                "left": left.to_string(), "right": right.to_string(),
                "only_left": names(only_left), "only_right": names(only_right),
            }),
            Witness::UnmatchedMove { left, right, action, target, tried: t } => json!({
                "kind": "unmatched_move", "clause": self.clause(),
                "left": left.to_string(), "right": right.to_string(),
                "action": action.to_string(), "target": target.to_string(),
                "tried": tried(t),
            }),
            Witness::UnmatchedStabilization { left, right, stable, tried: t } => json!({
                "kind": "unmatched_stabilization", "clause": self.clause(),
                "left": left.to_string(), "right": right.to_string(),
                "stable": stable.to_string(), "tried": tried(t),
            }),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotStable { side, term } => write!(f, "{side:?} side {term} is not stable"),
            Witness::ConsistencyGap { left, right } => {
                write!(f, "{left} is consistent but {right} is not")
            }
            Witness::ReadySetMismatch { left, right, only_left, only_right } => write!(
                f,
                "ready sets of {left} and {right} differ (only left: {only_left:?}, only right: {only_right:?})"
            ),
            Witness::UnmatchedMove { left, right, action, target, .. } => write!(
                f,
                "{left} =={action}=> {target} has no related counterpart from {right}"
            ),
            Witness::UnmatchedStabilization { left, right, stable, .. } => write!(
                f,
                "{left} stabilises to {stable}, which no stabilisation of {right} simulates"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Arc<Witness>>,
}

impl Verdict {
    fn from(w: Option<Arc<Witness>>) -> Self {
        Verdict { holds: w.is_none(), witness: w }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

type Memo = HashMap<(Term, Term), Option<Arc<Witness>>>;

/// Memoising checker sharing one evaluator across queries.
pub struct Refinement<'a> {
    sem: &'a Semantics,
    memo: RefCell<Memo>,
}

impl<'a> Refinement<'a> {
    pub fn new(sem: &'a Semantics) -> Self {
        Refinement { sem, memo: RefCell::new(HashMap::new()) }
    }

    pub fn semantics(&self) -> &Semantics {
        self.sem
    }

    /// Witness against `t ≲ s`, or `None` when it holds.
    pub fn stable_sim(&self, t: &Term, s: &Term) -> Option<Arc<Witness>> {
        let key = (t.clone(), s.clone());
        if let Some(r) = self.memo.borrow().get(&key) {
            return r.clone();
        }
        let r = self.compute(t, s).map(Arc::new);
        self.memo.borrow_mut().insert(key, r.clone());
        r
    }

    fn compute(&self, t: &Term, s: &Term) -> Option<Witness> {
        let sem = self.sem;
        if !sem.is_stable(t) {
            return Some(Witness::NotStable { side: Side::Left, term: t.clone() });
        }
        if !sem.is_stable(s) {
            return Some(Witness::NotStable { side: Side::Right, term: s.clone() });
        }
        if sem.is_inconsistent(t) {
            return None;
        }
        if sem.is_inconsistent(s) {
            return Some(Witness::ConsistencyGap { left: t.clone(), right: s.clone() });
        }
        let (rt, rs) = (sem.ready_set(t), sem.ready_set(s));
        if rt != rs {
            return Some(Witness::ReadySetMismatch {
                left: t.clone(),
                right: s.clone(),
                only_left: rt.difference(&rs).cloned().collect(),
                only_right: rs.difference(&rt).cloned().collect(),
            });
        }
        for a in &rt {
            let answers = sem.weak_a_f(s, a);
            for t2 in sem.weak_a_f(t, a) {
                let mut tried = Vec::new();
                let mut matched = false;
                for s2 in &answers {
                    match self.stable_sim(&t2, s2) {
                        None => {
                            matched = true;
                            break;
                        }
                        Some(w) if tried.len() < MAX_TRIED => tried.push((s2.clone(), w)),
                        Some(_) => {}
                    }
                }
                if !matched {
                    return Some(Witness::UnmatchedMove {
                        left: t.clone(),
                        right: s.clone(),
                        action: a.clone(),
                        target: t2,
                        tried,
                    });
                }
            }
        }
        None
    }

    /// Witness against `t ⊑ s`, or `None` when it holds.
    pub fn preorder(&self, t: &Term, s: &Term) -> Option<Arc<Witness>> {
        let answers = self.sem.weak_eps_f(s);
        for t2 in self.sem.weak_eps_f(t) {
            let mut tried = Vec::new();
            let mut matched = false;
            for s2 in &answers {
                match self.stable_sim(&t2, s2) {
                    None => {
                        matched = true;
                        break;
                    }
                    Some(w) if tried.len() < MAX_TRIED => tried.push((s2.clone(), w)),
                    Some(_) => {}
                }
            }
            if !matched {
                return Some(Arc::new(Witness::UnmatchedStabilization {
                    left: t.clone(),
                    right: s.clone(),
                    stable: t2,
                    tried,
                }));
            }
        }
        None
    }

    pub fn stable_ready_sim(&self, t: &Term, s: &Term) -> Verdict {
        Verdict::from(self.stable_sim(t, s))
    }

    pub fn ready_sim_preorder(&self, t: &Term, s: &Term) -> Verdict {
        Verdict::from(self.preorder(t, s))
    }

    /// Preorder both ways. The witness, if any, is for the first failing
    /// direction; `Left` means `t ⊑ s` failed.
    pub fn rs_equiv(&self, t: &Term, s: &Term) -> Result<(), (Side, Arc<Witness>)> {
        if let Some(w) = self.preorder(t, s) {
            return Err((Side::Left, w));
        }
        if let Some(w) = self.preorder(s, t) {
            return Err((Side::Right, w));
        }
        Ok(())
    }

    pub fn stable_rs_equiv(&self, t: &Term, s: &Term) -> Result<(), (Side, Arc<Witness>)> {
        if let Some(w) = self.stable_sim(t, s) {
            return Err((Side::Left, w));
        }
        if let Some(w) = self.stable_sim(s, t) {
            return Err((Side::Right, w));
        }
        Ok(())
    }

    /// Re-check a witness against the definition: every claim it makes must
    /// be true of the terms it names.
    pub fn confirms(&self, w: &Witness) -> bool {
        let sem = self.sem;
        match w {
            Witness::NotStable { term, .. } => !sem.is_stable(term),
            Witness::ConsistencyGap { left, right } => {
                sem.is_stable(left)
                    && sem.is_stable(right)
                    && !sem.is_inconsistent(left)
                    && sem.is_inconsistent(right)
            }
            Witness::ReadySetMismatch { left, right, only_left, only_right } => {
                let (rl, rr) = (sem.ready_set(left), sem.ready_set(right));
                sem.is_stable(left)
                    && sem.is_stable(right)
                    && !sem.is_inconsistent(left)
                    && !sem.is_inconsistent(right)
                    && (!only_left.is_empty() || !only_right.is_empty())
                    && *only_left == rl.difference(&rr).cloned().collect()
                    && *only_right == rr.difference(&rl).cloned().collect()
            }
            Witness::UnmatchedMove { left, right, action, target, tried } => {
                sem.weak_a_f(left, action).contains(target)
                    && sem.weak_a_f(right, action).iter().all(|c| self.stable_sim(target, c).is_some())
                    && tried.iter().all(|(c, w)| {
                        sem.weak_a_f(right, action).contains(c) && self.confirms(w)
                    })
            }
            Witness::UnmatchedStabilization { left, right, stable, tried } => {
                sem.weak_eps_f(left).contains(stable)
                    && sem.weak_eps_f(right).iter().all(|c| self.stable_sim(stable, c).is_some())
                    && tried
                        .iter()
                        .all(|(c, w)| sem.weak_eps_f(right).contains(c) && self.confirms(w))
            }
        }
    }
}

pub fn stable_ready_sim(t: &Term, s: &Term) -> Verdict {
    let sem = Semantics::new();
    Refinement::new(&sem).stable_ready_sim(t, s)
}

pub fn ready_sim_preorder(t: &Term, s: &Term) -> Verdict {
    let sem = Semantics::new();
    Refinement::new(&sem).ready_sim_preorder(t, s)
}

pub fn rs_equiv(t: &Term, s: &Term) -> bool {
    let sem = Semantics::new();
    Refinement::new(&sem).rs_equiv(t, s).is_ok()
}

pub fn stable_rs_equiv(t: &Term, s: &Term) -> bool {
    let sem = Semantics::new();
    Refinement::new(&sem).stable_rs_equiv(t, s).is_ok()
}

/// Both inconsistent or both consistent.
pub fn uniform_wrt_f(t: &Term, s: &Term) -> bool {
    let sem = Semantics::new();
    sem.is_inconsistent(t) == sem.is_inconsistent(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn sqsubseteq(t: &str, s: &str) -> bool {
        ready_sim_preorder(&p(t), &p(s)).holds
    }

    #[test]
    fn distribution_fails_under_silent_prefix() {
        assert!(!sqsubseteq("tau.(a.0 \\/ b.0)", "tau.a.0 [] tau.b.0"));
    }

    #[test]
    fn uniformity_matters_for_prefix_distribution() {
        assert!(!sqsubseteq("a.(bot \\/ 0)", "a.bot [] a.0"));
        assert!(sqsubseteq("a.bot [] a.0", "a.(bot \\/ 0)"));
    }

    #[test]
    fn ready_sets_must_agree() {
        let v = stable_ready_sim(&p("a.0"), &p("a.0 [] b.0"));
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.clause(), "RS4");
        match &*w {
            Witness::ReadySetMismatch { only_left, only_right, .. } => {
                assert!(only_left.is_empty());
                assert_eq!(only_right.iter().map(|n| n.as_str()).collect::<Vec<_>>(), ["b"]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unstable_arguments_are_rejected() {
        let v = stable_ready_sim(&p("tau.0"), &p("0"));
        assert_eq!(v.witness.unwrap().clause(), "RS1");
    }

    #[test]
    fn inconsistent_left_is_simulated_by_anything_stable() {
        assert!(stable_ready_sim(&p("bot"), &p("a.0")).holds);
        assert!(!stable_ready_sim(&p("0"), &p("bot")).holds);
        assert!(sqsubseteq("bot", "a.0 \\/ 0"));
    }

    #[test]
    fn witnesses_replay() {
        let sem = Semantics::new();
        let r = Refinement::new(&sem);
        let pairs = [
            ("(a.b.0 [] a.c.0) /\\ (a.b.0 [] a.b.0)", "a.(b.0 /\\ b.0) [] a.(c.0 /\\ b.0)"),
            ("a.b.0", "a.c.0"),
            ("a.(b.0 \\/ c.0)", "a.b.0"),
            ("tau.(a.0 \\/ b.0)", "tau.a.0 [] tau.b.0"),
            ("a.0", "a.bot"),
        ];
        for (t, s) in pairs {
            let w = r.preorder(&p(t), &p(s)).expect(t);
            assert!(r.confirms(&w), "{t} vs {s}: {w}");
            let j = w.to_json();
            assert_eq!(j["kind"], "unmatched_stabilization");
        }
    }

    #[test]
    fn nested_witness_names_the_move() {
        let sem = Semantics::new();
        let r = Refinement::new(&sem);
        let w = r.stable_sim(&p("a.b.0"), &p("a.c.0")).unwrap();
        match &*w {
            Witness::UnmatchedMove { action, target, tried, .. } => {
                assert_eq!(action.as_str(), "a");
                assert_eq!(*target, p("b.0"));
                assert_eq!(tried.len(), 1);
                assert_eq!(tried[0].1.clause(), "RS4");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equivalences() {
        assert!(rs_equiv(&p("tau.a.0"), &p("a.0")));
        assert!(rs_equiv(&p("a.bot"), &p("bot")));
        assert!(!rs_equiv(&p("a.0"), &p("a.0 \\/ b.0")));
        assert!(stable_rs_equiv(&p("a.0 [] b.0"), &p("b.0 [] a.0")));
        assert!(uniform_wrt_f(&p("bot"), &p("a.bot")));
        assert!(!uniform_wrt_f(&p("bot"), &p("0")));
    }
}
