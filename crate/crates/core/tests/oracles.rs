use std::collections::BTreeSet;

use cll::refinement::Refinement;
use cll::semantics::{
    build_lts, check_degree_decrease, check_lts1, check_lts2, check_stable_model, check_tau_pure,
    Semantics, DEFAULT_MAX_STATES,
};
use cll::testkit::{oracle_semantics, oracle_stable_sim, GenConfig, TermGen};
use cll::{Action, Term};

#[test]
fn engine_matches_rule_closure() {
    let mut g = TermGen::new(GenConfig::default().with_seed(7).with_max_degree(12));
    for _ in 0..400 {
        let t = g.term();
        let sem = Semantics::new();
        let m = oracle_semantics(&t);
        for u in m.universe() {
            let mine: BTreeSet<(Action, Term)> = sem.transitions(u).iter().cloned().collect();
            assert_eq!(m.transitions(u), Some(&mine), "transitions of {u} inside {t}");
            assert_eq!(m.is_inconsistent(u), Some(sem.is_inconsistent(u)), "F of {u} inside {t}");
            if let Term::Conj(..) = u {
                let fb: BTreeSet<Action> = mine
                    .iter()
                    .map(|(a, _)| a.clone())
                    .filter(|a| sem.fbar(u, a).unwrap())
                    .collect();
                assert_eq!(m.fbar_set(u).cloned().unwrap_or_default(), fb, "{u}");
            }
        }
    }
}

#[test]
fn memoised_simulation_matches_fixpoint_on_whole_fragments() {
    let mut g = TermGen::new(GenConfig::default().with_seed(11).with_max_degree(9).stable());
    for _ in 0..150 {
        let t = g.term();
        let s = g.term();
        let o = oracle_stable_sim(&[t.clone(), s.clone()]);
        let sem = Semantics::new();
        let r = Refinement::new(&sem);
        let states: Vec<Term> = o
            .model()
            .universe()
            .filter(|u| o.model().is_stable(u) == Some(true))
            .cloned()
            .collect();
        assert!(o.relates(&t, &s) == r.stable_sim(&t, &s).is_none(), "{t} vs {s}");
        // Every stable pair the fixpoint kept must be accepted and vice versa,
        // restricted to states reachable from the roots.
        let reach: BTreeSet<Term> = [&t, &s]
            .iter()
            .flat_map(|x| build_lts(x, DEFAULT_MAX_STATES).unwrap().states().iter().map(|st| st.term.clone()).collect::<Vec<_>>())
            .collect();
        for p in states.iter().filter(|u| reach.contains(*u)) {
            for q in states.iter().filter(|u| reach.contains(*u)) {
                assert_eq!(o.relates(p, q), r.stable_sim(p, q).is_none(), "{p} vs {q}");
            }
        }
    }
}

#[test]
fn structural_invariants_hold_on_large_terms() {
    let mut g = TermGen::new(GenConfig::default().with_seed(3).with_max_degree(30));
    for _ in 0..300 {
        let t = g.term();
        let f = build_lts(&t, DEFAULT_MAX_STATES).unwrap();
        check_tau_pure(&f).unwrap();
        check_lts1(&f).unwrap();
        check_lts2(&f).unwrap();
        check_degree_decrease(&f).unwrap();
        check_stable_model(&f).unwrap();
    }
}
