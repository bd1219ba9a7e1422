//! Transitions, the inconsistency predicate and weak moves.
//!
//! Every fact about a term is computed from facts about terms of smaller
//! degree, so plain memoised structural recursion reaches the unique stable
//! model without any fixpoint iteration.

mod check;
mod lts;

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::term::{Action, Name, Term};

pub use check::{
    check_degree_decrease, check_lts1, check_lts2, check_stable_model, check_tau_pure, Violation,
};
pub use lts::{build_lts, LtsFragment, State, DEFAULT_MAX_STATES};

/// Outgoing moves of a term, sorted and without duplicates.
pub type Moves = Arc<Vec<(Action, Term)>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("{0} is not a conjunction")]
    NotConjunction(Term),
    #[error("state space exceeds the limit of {limit} states")]
    ResourceLimit { limit: usize },
}

/// Memoising evaluator. Caches live as long as the value; create one per
/// batch of related queries.
#[derive(Default)]
pub struct Semantics {
    moves: RefCell<HashMap<Term, Moves>>,
    inconsistent: RefCell<HashMap<Term, bool>>,
}

fn has_tau(moves: &[(Action, Term)]) -> bool {
    moves.iter().any(|(a, _)| a.is_tau())
}

impl Semantics {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn transitions(&self, t: &Term) -> Moves {
        if let Some(m) = self.moves.borrow().get(t) {
            return m.clone();
        }
        let mut out: Vec<(Action, Term)> = Vec::new();
        match t {
            Term::Nil | Term::Bot => {}
            Term::Prefix(a, body) => out.push((a.clone(), (**body).clone())),
            Term::Disj(l, r) => {
                out.push((Action::Tau, (**l).clone()));
                out.push((Action::Tau, (**r).clone()));
            }
            Term::ExtChoice(l, r) => {
                let (ml, mr) = (self.transitions(l), self.transitions(r));
                for (a, y) in ml.iter() {
                    if a.is_tau() {
                        out.push((Action::Tau, Term::ExtChoice(Arc::new(y.clone()), r.clone())));
                    } else if !has_tau(&mr) {
                        out.push((a.clone(), y.clone()));
                    }
                }
                for (a, y) in mr.iter() {
                    if a.is_tau() {
                        out.push((Action::Tau, Term::ExtChoice(l.clone(), Arc::new(y.clone()))));
                    } else if !has_tau(&ml) {
                        out.push((a.clone(), y.clone()));
                    }
                }
            }
            Term::Conj(l, r) => {
                let (ml, mr) = (self.transitions(l), self.transitions(r));
                for (a, y1) in ml.iter() {
                    if a.is_tau() {
                        out.push((Action::Tau, Term::Conj(Arc::new(y1.clone()), r.clone())));
                        continue;
                    }
                    for (b, y2) in mr.iter() {
                        if a == b {
                            out.push((a.clone(), Term::conj(y1.clone(), y2.clone())));
                        }
                    }
                }
                for (a, y2) in mr.iter() {
                    if a.is_tau() {
                        out.push((Action::Tau, Term::Conj(l.clone(), Arc::new(y2.clone()))));
                    }
                }
            }
            Term::Par(l, r, sync) => {
                let (ml, mr) = (self.transitions(l), self.transitions(r));
                for (a, y1) in ml.iter() {
                    match a {
                        Action::Tau => out.push((
                            Action::Tau,
                            Term::Par(Arc::new(y1.clone()), r.clone(), sync.clone()),
                        )),
                        Action::Visible(n) if sync.contains(n) => {
                            for (b, y2) in mr.iter() {
                                if a == b {
                                    out.push((
                                        a.clone(),
                                        Term::par(y1.clone(), y2.clone(), sync.clone()),
                                    ));
                                }
                            }
                        }
                        Action::Visible(_) => {
                            if !has_tau(&mr) {
                                out.push((
                                    a.clone(),
                                    Term::Par(Arc::new(y1.clone()), r.clone(), sync.clone()),
                                ));
                            }
                        }
                    }
                }
                for (a, y2) in mr.iter() {
                    match a {
                        Action::Tau => out.push((
                            Action::Tau,
                            Term::Par(l.clone(), Arc::new(y2.clone()), sync.clone()),
                        )),
                        Action::Visible(n) if !sync.contains(n) && !has_tau(&ml) => out.push((
                            a.clone(),
                            Term::Par(l.clone(), Arc::new(y2.clone()), sync.clone()),
                        )),
                        Action::Visible(_) => {}
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        let m: Moves = Arc::new(out);
        self.moves.borrow_mut().insert(t.clone(), m.clone());
        m
    }

    /// Membership in the inconsistency predicate F.
    pub fn is_inconsistent(&self, t: &Term) -> bool {
        if let Some(&b) = self.inconsistent.borrow().get(t) {
            return b;
        }
        let b = match t {
            Term::Nil => false,
            Term::Bot => true,
            Term::Prefix(_, body) => self.is_inconsistent(body),
            Term::Disj(l, r) => self.is_inconsistent(l) && self.is_inconsistent(r),
            Term::ExtChoice(l, r) | Term::Par(l, r, _) => {
                self.is_inconsistent(l) || self.is_inconsistent(r)
            }
            Term::Conj(l, r) => {
                self.is_inconsistent(l)
                    || self.is_inconsistent(r)
                    || self.ready_mismatch(l, r, t)
                    || self.some_label_all_inconsistent(t)
            }
        };
        self.inconsistent.borrow_mut().insert(t.clone(), b);
        b
    }

    // x1 ∧ x2 stable and one side offers a visible action the other refuses.
    fn ready_mismatch(&self, l: &Term, r: &Term, whole: &Term) -> bool {
        if !self.is_stable(whole) {
            return false;
        }
        self.ready_set(l) != self.ready_set(r)
    }

    fn some_label_all_inconsistent(&self, t: &Term) -> bool {
        let moves = self.transitions(t);
        let labels: BTreeSet<Action> = moves.iter().map(|(a, _)| a.clone()).collect();
        labels.iter().any(|a| !self.fbar_unchecked(t, a))
    }

    fn fbar_unchecked(&self, t: &Term, alpha: &Action) -> bool {
        self.transitions(t)
            .iter()
            .any(|(a, y)| a == alpha && !self.is_inconsistent(y))
    }

    /// The auxiliary predicate: `t` has a consistent `alpha`-derivative.
    /// Only defined on conjunctions.
    pub fn fbar(&self, t: &Term, alpha: &Action) -> Result<bool, SemanticsError> {
        match t {
            Term::Conj(..) => Ok(self.fbar_unchecked(t, alpha)),
            _ => Err(SemanticsError::NotConjunction(t.clone())),
        }
    }

    /// Labels of all outgoing moves, the silent one included.
    pub fn initials(&self, t: &Term) -> BTreeSet<Action> {
        self.transitions(t).iter().map(|(a, _)| a.clone()).collect()
    }

    /// Visible labels the term can perform immediately.
    pub fn ready_set(&self, t: &Term) -> BTreeSet<Name> {
        self.transitions(t)
            .iter()
            .filter_map(|(a, _)| a.name().cloned())
            .collect()
    }

    pub fn is_stable(&self, t: &Term) -> bool {
        !has_tau(&self.transitions(t))
    }

    /// `t` and everything it reaches by silent moves, never passing an
    /// inconsistent state. Empty when `t` itself is inconsistent.
    fn tau_closure(&self, t: &Term) -> BTreeSet<Term> {
        let mut seen = BTreeSet::new();
        if self.is_inconsistent(t) {
            return seen;
        }
        let mut stack = vec![t.clone()];
        seen.insert(t.clone());
        while let Some(u) = stack.pop() {
            for (a, v) in self.transitions(&u).iter() {
                if a.is_tau() && !self.is_inconsistent(v) && seen.insert(v.clone()) {
                    stack.push(v.clone());
                }
            }
        }
        seen
    }

    /// Stable consistent states reachable through consistent silent moves.
    pub fn weak_eps_f(&self, t: &Term) -> BTreeSet<Term> {
        self.tau_closure(t)
            .into_iter()
            .filter(|u| self.is_stable(u))
            .collect()
    }

    /// Stable consistent states reachable by silent moves, one `a`-move and
    /// silent moves again, all through consistent states.
    pub fn weak_a_f(&self, t: &Term, a: &Name) -> BTreeSet<Term> {
        let label = Action::Visible(a.clone());
        let mut out = BTreeSet::new();
        for u in self.tau_closure(t) {
            for (b, v) in self.transitions(&u).iter() {
                if *b == label && !self.is_inconsistent(v) {
                    out.extend(self.weak_eps_f(v));
                }
            }
        }
        out
    }
}

pub fn transitions(t: &Term) -> Moves {
    Semantics::new().transitions(t)
}

pub fn is_inconsistent(t: &Term) -> bool {
    Semantics::new().is_inconsistent(t)
}

pub fn fbar(t: &Term, alpha: &Action) -> Result<bool, SemanticsError> {
    Semantics::new().fbar(t, alpha)
}

pub fn ready_set(t: &Term) -> BTreeSet<Name> {
    Semantics::new().ready_set(t)
}

pub fn is_stable(t: &Term) -> bool {
    Semantics::new().is_stable(t)
}

pub fn weak_eps_f(t: &Term) -> BTreeSet<Term> {
    Semantics::new().weak_eps_f(t)
}

pub fn weak_a_f(t: &Term, a: &Name) -> BTreeSet<Term> {
    Semantics::new().weak_a_f(t, a)
}
