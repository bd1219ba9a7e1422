//! Independent checks over a finite fragment. None of them call back into
//! the evaluator; they only read what the fragment recorded.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::lts::LtsFragment;
use crate::rules::{derive, facts_of, Fact, Facts, Kind};
use crate::term::{Action, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: &'static str,
    pub state: Term,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {}: {}", self.property, self.state, self.detail)
    }
}

impl std::error::Error for Violation {}

fn violation(property: &'static str, state: &Term, detail: String) -> Violation {
    Violation { property, state: state.clone(), detail }
}

/// A state with a silent move has no visible move.
pub fn check_tau_pure(f: &LtsFragment) -> Result<(), Violation> {
    for s in f.universe() {
        let tau = s.moves.iter().any(|(a, _)| a.is_tau());
        if let Some((a, _)) = s.moves.iter().find(|(a, _)| !a.is_tau()) {
            if tau {
                return Err(violation("tau-purity", &s.term, format!("silent move next to `{a}`")));
            }
        }
    }
    Ok(())
}

/// A state with some label whose derivatives are all inconsistent is
/// itself inconsistent.
pub fn check_lts1(f: &LtsFragment) -> Result<(), Violation> {
    for s in f.universe() {
        if s.inconsistent {
            continue;
        }
        let labels: BTreeSet<&Action> = s.moves.iter().map(|(a, _)| a).collect();
        for a in labels {
            let all_bad = s
                .moves
                .iter()
                .filter(|(b, _)| b == a)
                .all(|(_, j)| f.state(*j).inconsistent);
            if all_bad {
                return Err(violation(
                    "LTS1",
                    &s.term,
                    format!("every `{a}`-derivative is inconsistent but the state is not"),
                ));
            }
        }
    }
    Ok(())
}

/// Every consistent state can stabilise through consistent states.
pub fn check_lts2(f: &LtsFragment) -> Result<(), Violation> {
    for (i, s) in f.universe().iter().enumerate() {
        if s.inconsistent {
            continue;
        }
        let mut seen = HashSet::from([i]);
        let mut stack = vec![i];
        let mut found = false;
        while let Some(u) = stack.pop() {
            let st = f.state(u);
            if st.stable {
                found = true;
                break;
            }
            for (a, v) in &st.moves {
                if a.is_tau() && !f.state(*v).inconsistent && seen.insert(*v) {
                    stack.push(*v);
                }
            }
        }
        if !found {
            return Err(violation("LTS2", &s.term, "no consistent stabilisation".into()));
        }
    }
    Ok(())
}

/// Every move strictly lowers the degree.
pub fn check_degree_decrease(f: &LtsFragment) -> Result<(), Violation> {
    for s in f.universe() {
        let d = s.term.degree();
        for (a, j) in &s.moves {
            let t = &f.state(*j).term;
            if t.degree() >= d {
                return Err(violation("degree", &s.term, format!("`{a}`-move to {t}")));
            }
        }
    }
    Ok(())
}

impl Facts for LtsFragment {
    fn moves(&self, t: &Term) -> Option<Vec<(Action, Term)>> {
        let s = self.get(t)?;
        Some(
            s.moves
                .iter()
                .map(|(a, j)| (a.clone(), self.state(*j).term.clone()))
                .collect(),
        )
    }

    fn inconsistent(&self, t: &Term) -> Option<bool> {
        self.get(t).map(|s| s.inconsistent)
    }

    fn fbar(&self, t: &Term, alpha: &Action) -> Option<bool> {
        self.get(t).map(|s| s.fbar.contains(alpha))
    }
}

/// The recorded facts are exactly those derivable in one step from
/// themselves: every fact is supported by a rule instance whose premises
/// hold, and every such instance has its conclusion recorded.
pub fn check_stable_model(f: &LtsFragment) -> Result<(), Violation> {
    let mut unrecorded = None;
    for s in f.universe() {
        let ds = derive(&s.term, f, &[Kind::Trans, Kind::Fbar, Kind::Inc], false).map_err(|u| {
            violation("closure", &s.term, format!("premise about {u} lies outside the fragment"))
        })?;
        let derived = facts_of(&ds);
        let mut recorded: BTreeSet<Fact> = BTreeSet::new();
        for (a, j) in &s.moves {
            recorded.insert(Fact::Trans(a.clone(), f.state(*j).term.clone()));
        }
        if s.inconsistent {
            recorded.insert(Fact::Inc);
        }
        for a in &s.fbar {
            recorded.insert(Fact::Fbar(a.clone()));
        }
        if let Some(x) = recorded.difference(&derived).next() {
            return Err(violation("supported", &s.term, format!("no rule instance yields {x:?}")));
        }
        if unrecorded.is_none() {
            if let Some(x) = derived.difference(&recorded).next() {
                let rule = ds.iter().find(|d| &d.fact == x).map(|d| d.rule).unwrap_or("?");
                unrecorded =
                    Some(violation("model", &s.term, format!("{rule} yields unrecorded {x:?}")));
            }
        }
    }
    // An unsupported fact usually explains an unrecorded one upstream, so
    // report those first.
    unrecorded.map_or(Ok(()), Err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;
    use crate::semantics::{build_lts, DEFAULT_MAX_STATES};

    fn frag(s: &str) -> LtsFragment {
        build_lts(&parse(s).unwrap(), DEFAULT_MAX_STATES).unwrap()
    }

    #[test]
    fn honest_fragments_pass() {
        for src in [
            "a.bot [] a.0",
            "(a.b.0 [] a.c.0) /\\ (a.b.0 [] a.b.0)",
            "tau.(a.0 \\/ b.0) |[a]| a.bot",
            "(bot \\/ a.0) /\\ (tau.a.0 [] 0)",
        ] {
            let f = frag(src);
            check_tau_pure(&f).unwrap();
            check_lts1(&f).unwrap();
            check_lts2(&f).unwrap();
            check_degree_decrease(&f).unwrap();
            check_stable_model(&f).unwrap();
        }
    }

    #[test]
    fn forged_inconsistency_is_caught() {
        let mut f = frag("a.0");
        let id = f.id(&Term::Nil).unwrap();
        f.states_mut()[id].inconsistent = true;
        let v = check_stable_model(&f).unwrap_err();
        assert_eq!(v.property, "supported");
        assert_eq!(v.state, Term::Nil);
    }

    #[test]
    fn dropped_move_is_caught() {
        let mut f = frag("a.0 [] b.0");
        f.states_mut()[0].moves.pop();
        assert_eq!(check_stable_model(&f).unwrap_err().property, "model");
    }

    #[test]
    fn forged_fbar_is_caught() {
        let mut f = frag("a.bot /\\ a.0");
        f.states_mut()[0].fbar.insert(Action::visible("a"));
        assert!(check_stable_model(&f).is_err());
    }

    #[test]
    fn lts_properties_detect_tampering() {
        let mut f = frag("a.bot");
        f.states_mut()[0].inconsistent = false;
        assert_eq!(check_lts1(&f).unwrap_err().property, "LTS1");

        let mut f = frag("tau.0");
        let id = f.id(&Term::Nil).unwrap();
        f.states_mut()[id].stable = false;
        assert_eq!(check_lts2(&f).unwrap_err().property, "LTS2");

        let mut f = frag("tau.0 \\/ a.0");
        let id = f.id(&Term::Nil).unwrap();
        f.states_mut()[0].moves.push((Action::visible("a"), id));
        assert_eq!(check_tau_pure(&f).unwrap_err().property, "tau-purity");
    }
}
