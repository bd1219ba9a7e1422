//! Property tests over a shrinking term strategy.

use cll::axioms::{normalize, prove, schema::stable, validate_trace, NormalForm};
use cll::refinement::{ready_sim_preorder, rs_equiv};
use cll::semantics::{build_lts, is_stable, Semantics, DEFAULT_MAX_STATES};
use cll::{parse, Action, Name, SyncSet, Term};
use proptest::prelude::*;

fn action() -> impl Strategy<Value = Name> {
    prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(Name::new)
}

fn sync() -> impl Strategy<Value = SyncSet> {
    proptest::collection::btree_set(action(), 0..=3).prop_map(|s| s.into_iter().collect())
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![3 => Just(Term::Nil), 1 => Just(Term::Bot)];
    leaf.prop_recursive(5, 14, 2, |inner| {
        prop_oneof![
            4 => (action(), inner.clone()).prop_map(|(a, t)| Term::prefix(Action::Visible(a), t)),
            1 => inner.clone().prop_map(Term::tau),
            2 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::ext(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::conj(l, r)),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::disj(l, r)),
            1 => (inner.clone(), inner, sync()).prop_map(|(l, r, a)| Term::par(l, r, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(t in term()) {
        prop_assert_eq!(parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn transitions_lower_degree(t in term()) {
        let sem = Semantics::new();
        for (_, u) in sem.transitions(&t).iter() {
            prop_assert!(u.degree() < t.degree());
        }
    }

    #[test]
    fn stability_is_syntactic(t in term()) {
        prop_assert_eq!(stable(&t), is_stable(&t));
    }

    #[test]
    fn lts_export_is_closed(t in term()) {
        let f = build_lts(&t, DEFAULT_MAX_STATES).unwrap();
        let n = f.states().len();
        prop_assert_eq!(&f.states()[0].term, &t);
        for s in f.states() {
            prop_assert!(s.moves.iter().all(|(_, j)| *j < n));
        }
    }

    #[test]
    fn refinement_is_reflexive(t in term()) {
        prop_assert!(ready_sim_preorder(&t, &t).holds);
    }

    #[test]
    fn normal_form_is_equivalent_and_stable_under_renormalising(t in term()) {
        let (nf, trace) = normalize(&t);
        prop_assert!(validate_trace(&trace).is_ok());
        let back = nf.reify();
        prop_assert_eq!(NormalForm::from_term(&back), Some(nf.clone()));
        prop_assert!(rs_equiv(&t, &back));
        prop_assert_eq!(normalize(&back).0, nf);
    }

    #[test]
    fn prover_agrees_with_refinement(t in term(), s in term()) {
        let pr = prove(&t, &s).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(pr.holds, ready_sim_preorder(&t, &s).holds);
        if let Some(tr) = pr.trace {
            prop_assert!(validate_trace(&tr).is_ok());
        }
    }

    #[test]
    fn disjunction_is_an_upper_bound(t in term(), s in term()) {
        let j = Term::disj(t.clone(), s.clone());
        prop_assert!(ready_sim_preorder(&t, &j).holds);
        prop_assert!(ready_sim_preorder(&s, &j).holds);
    }
}

#[test]
fn crate_level_example() {
    let t = parse("a.0").unwrap();
    let s = parse("a.0 \\/ b.0").unwrap();
    assert!(ready_sim_preorder(&t, &s).holds);
    assert!(!ready_sim_preorder(&s, &t).holds);
}
