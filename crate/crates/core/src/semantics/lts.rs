use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};

use super::{Semantics, SemanticsError};
use crate::term::{Action, Term};

pub const DEFAULT_MAX_STATES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub term: Term,
    /// Outgoing moves as (label, target id), sorted.
    pub moves: Vec<(Action, usize)>,
    pub inconsistent: bool,
    pub stable: bool,
    /// Labels with a consistent derivative. Only filled for conjunctions.
    pub fbar: BTreeSet<Action>,
}

/// A finite piece of the transition model.
///
/// Ids `0..reachable_len()` are the states reachable from the root in
/// breadth-first order. Later ids are support terms: subterms and their
/// derivatives, present so that every rule premise about a state can be
/// looked up inside the fragment.
#[derive(Debug, Clone)]
pub struct LtsFragment {
    states: Vec<State>,
    reachable: usize,
    index: HashMap<Term, usize>,
}

impl LtsFragment {
    pub fn root(&self) -> &Term {
        &self.states[0].term
    }

    /// States reachable from the root.
    pub fn states(&self) -> &[State] {
        &self.states[..self.reachable]
    }

    /// Reachable states followed by support terms.
    pub fn universe(&self) -> &[State] {
        &self.states
    }

    pub fn reachable_len(&self) -> usize {
        self.reachable
    }

    pub fn id(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn state(&self, id: usize) -> &State {
        &self.states[id]
    }

    pub fn get(&self, t: &Term) -> Option<&State> {
        self.id(t).map(|i| &self.states[i])
    }

    /// Mutable access to every recorded fact. The checkers in this module
    /// take nothing on trust, so tampered fragments are a fair test input.
    pub fn states_mut(&mut self) -> &mut [State] {
        &mut self.states
    }

    pub fn to_json(&self) -> Value {
        let states: Vec<Value> = self
            .states()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                json!({
                    "id": i,
                    "term": s.term.to_string(),
                    "stable": s.stable,
                    "inconsistent": s.inconsistent,
                })
            })
            .collect();
        let mut transitions = Vec::new();
        for (i, s) in self.states().iter().enumerate() {
            for (a, j) in &s.moves {
                transitions.push(json!({ "from": i, "label": a.to_string(), "to": j }));
            }
        }
        json!({ "root": 0, "states": states, "transitions": transitions })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph lts {\n  node [shape=box];\n");
        for (i, s) in self.states().iter().enumerate() {
            let label = s.term.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            let style = if s.inconsistent { ", style=filled" } else { "" };
            let _ = writeln!(out, "  s{i} [label=\"{label}\"{style}];");
        }
        for (i, s) in self.states().iter().enumerate() {
            for (a, j) in &s.moves {
                let style = if a.is_tau() { ", style=dashed" } else { "" };
                let _ = writeln!(out, "  s{i} -> s{j} [label=\"{a}\"{style}];");
            }
        }
        out.push_str("}\n");
        out
    }
}

impl Semantics {
    /// Explore everything reachable from `t`, giving up once more than
    /// `max_states` terms (reachable plus support) have been seen.
    pub fn build_lts(&self, t: &Term, max_states: usize) -> Result<LtsFragment, SemanticsError> {
        let mut terms: Vec<Term> = Vec::new();
        let mut index: HashMap<Term, usize> = HashMap::new();
        let mut add = |u: &Term, terms: &mut Vec<Term>| -> Result<(), SemanticsError> {
            if index.contains_key(u) {
                return Ok(());
            }
            if terms.len() >= max_states {
                return Err(SemanticsError::ResourceLimit { limit: max_states });
            }
            index.insert(u.clone(), terms.len());
            terms.push(u.clone());
            Ok(())
        };

        add(t, &mut terms)?;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let u = terms[i].clone();
            for (_, v) in self.transitions(&u).iter() {
                let before = terms.len();
                add(v, &mut terms)?;
                if terms.len() > before {
                    queue.push_back(before);
                }
            }
        }
        let reachable = terms.len();

        let mut i = 0;
        while i < terms.len() {
            let u = terms[i].clone();
            for c in u.children() {
                add(c, &mut terms)?;
            }
            for (_, v) in self.transitions(&u).iter() {
                add(v, &mut terms)?;
            }
            i += 1;
        }

        let states = terms
            .iter()
            .map(|u| {
                let moves = self.transitions(u);
                let fbar = match u {
                    Term::Conj(..) => moves
                        .iter()
                        .filter(|(_, v)| !self.is_inconsistent(v))
                        .map(|(a, _)| a.clone())
                        .collect(),
                    _ => BTreeSet::new(),
                };
                State {
                    term: u.clone(),
                    moves: moves.iter().map(|(a, v)| (a.clone(), index[v])).collect(),
                    inconsistent: self.is_inconsistent(u),
                    stable: self.is_stable(u),
                    fbar,
                }
            })
            .collect();
        Ok(LtsFragment { states, reachable, index })
    }
}

pub fn build_lts(t: &Term, max_states: usize) -> Result<LtsFragment, SemanticsError> {
    Semantics::new().build_lts(t, max_states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    #[test]
    fn three_states_for_colliding_prefixes() {
        let f = build_lts(&parse("a.bot [] a.0").unwrap(), DEFAULT_MAX_STATES).unwrap();
        assert_eq!(f.states().len(), 3);
        assert!(f.states()[0].inconsistent);
        assert_eq!(f.states()[0].moves.len(), 2);
    }

    #[test]
    fn ids_follow_breadth_first_order() {
        let f = build_lts(&parse("a.b.0 [] c.0").unwrap(), DEFAULT_MAX_STATES).unwrap();
        let terms: Vec<String> = f.states().iter().map(|s| s.term.to_string()).collect();
        assert_eq!(terms, vec!["a.b.0 [] c.0", "b.0", "0"]);
        assert!(f.universe().len() > f.states().len());
    }

    #[test]
    fn limit_is_reported() {
        let t = parse("a.b.c.0 |[]| d.e.f.0").unwrap();
        assert_eq!(build_lts(&t, 5).unwrap_err(), SemanticsError::ResourceLimit { limit: 5 });
    }

    #[test]
    fn json_and_dot_exports() {
        let f = build_lts(&parse("tau.a.0 \\/ bot").unwrap(), DEFAULT_MAX_STATES).unwrap();
        let j = f.to_json();
        assert_eq!(j["root"], 0);
        assert_eq!(j["states"].as_array().unwrap().len(), f.states().len());
        assert_eq!(j["transitions"][0]["label"], "tau");
        let dot = f.to_dot();
        assert!(dot.contains("style=dashed"));
        assert!(dot.contains("style=filled"));
    }
}
