//! Slow reference implementations the fast code is compared against.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::rules::{derive, Fact, Facts, Kind};
use crate::term::{Action, Name, Term};

/// Facts about every term in a closed universe, computed by applying the
/// rule table stratum by stratum.
#[derive(Debug, Clone, Default)]
pub struct OracleModel {
    moves: HashMap<Term, BTreeSet<(Action, Term)>>,
    inconsistent: HashMap<Term, bool>,
    fbar: HashMap<Term, BTreeSet<Action>>,
}

impl OracleModel {
    pub fn universe(&self) -> impl Iterator<Item = &Term> {
        self.moves.keys()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.moves.contains_key(t)
    }

    pub fn transitions(&self, t: &Term) -> Option<&BTreeSet<(Action, Term)>> {
        self.moves.get(t)
    }

    pub fn is_inconsistent(&self, t: &Term) -> Option<bool> {
        self.inconsistent.get(t).copied()
    }

    pub fn fbar_set(&self, t: &Term) -> Option<&BTreeSet<Action>> {
        self.fbar.get(t)
    }

    pub fn is_stable(&self, t: &Term) -> Option<bool> {
        self.moves.get(t).map(|m| m.iter().all(|(a, _)| !a.is_tau()))
    }

    fn merge(&mut self, other: OracleModel) {
        self.moves.extend(other.moves);
        self.inconsistent.extend(other.inconsistent);
        self.fbar.extend(other.fbar);
    }
}

impl Facts for OracleModel {
    fn moves(&self, t: &Term) -> Option<Vec<(Action, Term)>> {
        self.moves.get(t).map(|m| m.iter().cloned().collect())
    }

    fn inconsistent(&self, t: &Term) -> Option<bool> {
        self.contains(t).then(|| self.inconsistent.get(t).copied().unwrap_or(false))
    }

    fn fbar(&self, t: &Term, alpha: &Action) -> Option<bool> {
        self.contains(t).then(|| self.fbar.get(t).is_some_and(|s| s.contains(alpha)))
    }
}

// Transitions ignoring every negative premise: a superset of the real ones,
// good for fixing the universe before the real evaluation.
struct Over(HashMap<Term, Vec<(Action, Term)>>);

impl Facts for Over {
    fn moves(&self, t: &Term) -> Option<Vec<(Action, Term)>> {
        self.0.get(t).cloned()
    }
    fn inconsistent(&self, _: &Term) -> Option<bool> {
        Some(false)
    }
    fn fbar(&self, _: &Term, _: &Action) -> Option<bool> {
        Some(false)
    }
}

fn close(t: &Term, over: &mut Over) {
    if over.0.contains_key(t) {
        return;
    }
    for c in t.children() {
        close(c, over);
    }
    let ds = derive(t, over, &[Kind::Trans], true).expect("children closed first");
    let moves: Vec<(Action, Term)> = ds
        .into_iter()
        .filter_map(|d| match d.fact {
            Fact::Trans(a, u) => Some((a, u)),
            _ => None,
        })
        .collect();
    over.0.insert(t.clone(), moves.clone());
    for (_, u) in moves {
        close(&u, over);
    }
}

/// Evaluate the rule table over everything `t` can reach or contain.
///
/// Each fact gets a stratum: transitions of `u` at `|u|`, the auxiliary
/// predicate at `2|u|`, inconsistency at `2|u|+1`. Strata are saturated in
/// increasing order, so negative premises only ever consult finished
/// strata.
pub fn oracle_semantics(t: &Term) -> OracleModel {
    let mut over = Over(HashMap::new());
    close(t, &mut over);

    let mut model = OracleModel::default();
    let mut tasks: BTreeMap<usize, Vec<(Term, Kind)>> = BTreeMap::new();
    for u in over.0.keys() {
        model.moves.insert(u.clone(), BTreeSet::new());
        let d = u.degree();
        tasks.entry(d).or_default().push((u.clone(), Kind::Trans));
        if matches!(u, Term::Conj(..)) {
            tasks.entry(2 * d).or_default().push((u.clone(), Kind::Fbar));
        }
        tasks.entry(2 * d + 1).or_default().push((u.clone(), Kind::Inc));
    }

    for group in tasks.values() {
        loop {
            let mut changed = false;
            for (u, kind) in group {
                let ds = derive(u, &model, &[*kind], false).expect("universe is closed");
                for d in ds {
                    changed |= match d.fact {
                        Fact::Trans(a, v) => model.moves.get_mut(u).unwrap().insert((a, v)),
                        Fact::Inc => model.inconsistent.insert(u.clone(), true) != Some(true),
                        Fact::Fbar(a) => model.fbar.entry(u.clone()).or_default().insert(a),
                    };
                }
            }
            if !changed {
                break;
            }
        }
    }
    for u in over.0.keys() {
        model.inconsistent.entry(u.clone()).or_insert(false);
    }
    model
}

/// The greatest stable ready simulation over the states reachable from a
/// set of roots, found by deleting violating pairs until none remain.
pub struct SimOracle {
    model: OracleModel,
    relation: HashSet<(Term, Term)>,
}

impl SimOracle {
    /// Whether `(t, s)` survives. Both must be stable reachable states of
    /// the roots the oracle was built from.
    pub fn relates(&self, t: &Term, s: &Term) -> bool {
        self.relation.contains(&(t.clone(), s.clone()))
    }

    pub fn model(&self) -> &OracleModel {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.relation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relation.is_empty()
    }
}

fn reachable(model: &OracleModel, roots: &[Term]) -> BTreeSet<Term> {
    let mut seen: BTreeSet<Term> = roots.iter().cloned().collect();
    let mut stack: Vec<Term> = roots.to_vec();
    while let Some(u) = stack.pop() {
        for (_, v) in model.transitions(&u).into_iter().flatten() {
            if seen.insert(v.clone()) {
                stack.push(v.clone());
            }
        }
    }
    seen
}

fn weak_targets(model: &OracleModel, t: &Term, a: &Name) -> BTreeSet<Term> {
    let inc = |u: &Term| model.is_inconsistent(u).unwrap_or(true);
    let closure = |start: &Term| -> Vec<Term> {
        if inc(start) {
            return vec![];
        }
        let mut seen = vec![start.clone()];
        let mut i = 0;
        while i < seen.len() {
            let u = seen[i].clone();
            for (b, v) in model.transitions(&u).into_iter().flatten() {
                if b.is_tau() && !inc(v) && !seen.contains(v) {
                    seen.push(v.clone());
                }
            }
            i += 1;
        }
        seen
    };
    let label = Action::Visible(a.clone());
    let mut out = BTreeSet::new();
    for u in closure(t) {
        for (b, v) in model.transitions(&u).into_iter().flatten() {
            if *b == label && !inc(v) {
                for w in closure(v) {
                    if model.is_stable(&w) == Some(true) {
                        out.insert(w);
                    }
                }
            }
        }
    }
    out
}

pub fn oracle_stable_sim(roots: &[Term]) -> SimOracle {
    let mut model = OracleModel::default();
    for r in roots {
        model.merge(oracle_semantics(r));
    }
    let states: Vec<Term> = reachable(&model, roots)
        .into_iter()
        .filter(|u| model.is_stable(u) == Some(true))
        .collect();
    let ready = |u: &Term| -> BTreeSet<Name> {
        model.transitions(u).into_iter().flatten().filter_map(|(a, _)| a.name().cloned()).collect()
    };
    let alphabet: BTreeSet<Name> = states.iter().flat_map(&ready).collect();
    let mut weak: HashMap<(Term, Name), BTreeSet<Term>> = HashMap::new();
    for u in &states {
        for a in &alphabet {
            weak.insert((u.clone(), a.clone()), weak_targets(&model, u, a));
        }
    }

    let mut relation: HashSet<(Term, Term)> = HashSet::new();
    for p in &states {
        for q in &states {
            relation.insert((p.clone(), q.clone()));
        }
    }
    loop {
        let doomed: Vec<(Term, Term)> = relation
            .iter()
            .filter(|(p, q)| {
                if model.is_inconsistent(p) == Some(true) {
                    return false;
                }
                if model.is_inconsistent(q) == Some(true) || ready(p) != ready(q) {
                    return true;
                }
                alphabet.iter().any(|a| {
                    let answers = &weak[&(q.clone(), a.clone())];
                    weak[&(p.clone(), a.clone())].iter().any(|p2| {
                        !answers.iter().any(|q2| relation.contains(&(p2.clone(), q2.clone())))
                    })
                })
            })
            .cloned()
            .collect();
        if doomed.is_empty() {
            break;
        }
        for pair in doomed {
            relation.remove(&pair);
        }
    }
    SimOracle { model, relation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;
    use crate::semantics::Semantics;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn oracle_matches_known_values() {
        let m = oracle_semantics(&p("a.bot [] a.0"));
        assert_eq!(m.is_inconsistent(&p("a.bot [] a.0")), Some(true));
        assert_eq!(m.transitions(&p("a.bot [] a.0")).unwrap().len(), 2);
        let m = oracle_semantics(&p("a.(bot \\/ 0)"));
        assert_eq!(m.is_inconsistent(&p("a.(bot \\/ 0)")), Some(false));
        let m = oracle_semantics(&p("a.0 /\\ a.0"));
        assert!(m.fbar_set(&p("a.0 /\\ a.0")).unwrap().contains(&Action::visible("a")));
    }

    #[test]
    fn oracle_agrees_with_engine_on_samples() {
        let sem = Semantics::new();
        for src in [
            "(a.b.0 [] a.c.0) /\\ (a.b.0 [] a.b.0)",
            "tau.(a.0 \\/ b.0) |[a]| (a.bot [] tau.0)",
            "(bot \\/ a.0) /\\ (tau.a.0 [] 0) /\\ a.(0 \\/ bot)",
        ] {
            let m = oracle_semantics(&p(src));
            for u in m.universe() {
                let mine: BTreeSet<(Action, Term)> = sem.transitions(u).iter().cloned().collect();
                assert_eq!(m.transitions(u), Some(&mine), "{u}");
                assert_eq!(m.is_inconsistent(u), Some(sem.is_inconsistent(u)), "{u}");
            }
        }
    }

    #[test]
    fn gfp_on_small_pair() {
        let t = p("a.b.0");
        let s = p("a.b.0 [] a.(b.0 /\\ b.0)");
        let o = oracle_stable_sim(&[t.clone(), s.clone()]);
        assert!(o.relates(&t, &s));
        assert!(o.relates(&s, &t));
        assert!(!o.relates(&t, &p("b.0")));
    }
}
