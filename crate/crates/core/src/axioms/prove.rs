use std::collections::BTreeSet;
use std::sync::Arc;

use super::builder::{bind, Op};
use super::nf::{Branch, NfB, NormalForm};
use super::normalize::Normalizer;
use super::schema::Axiom;
use super::trace::ProofTrace;
use crate::refinement::{Refinement, Witness};
use crate::semantics::Semantics;
use crate::term::{Action, Name, Term};

fn same_prefixes(x: &Branch, y: &Branch) -> bool {
    let a: BTreeSet<Name> = x.actions().into_iter().collect();
    let b: BTreeSet<Name> = y.actions().into_iter().collect();
    a == b
}

/// Every branch of `x` embeds into some branch of `y`.
pub fn nfb_embeds(x: &NfB, y: &NfB) -> bool {
    x.branches().iter().all(|bx| y.branches().iter().any(|by| branch_embeds(bx, by)))
}

fn branch_embeds(x: &Branch, y: &Branch) -> bool {
    same_prefixes(x, y)
        && x.summands().iter().all(|(a, u)| {
            let v = &y.summands().iter().find(|(b, _)| b == a).unwrap().1;
            nfb_embeds(u, v)
        })
}

fn sorted_terms(b: &Branch) -> (Vec<Term>, Vec<Name>) {
    b.summands()
        .iter()
        .map(|(a, n)| (Term::prefix(Action::Visible(a.clone()), n.reify()), a.clone()))
        .unzip()
}

impl Normalizer {
    /// Proof of `reify(x) ≤ reify(y)`; the caller checked `nfb_embeds`.
    fn leq_nfb(&mut self, x: &NfB, y: &NfB) -> usize {
        let ty = y.reify();
        let mut acc: Option<usize> = None;
        for bx in x.branches() {
            let by = y.branches().iter().find(|by| branch_embeds(bx, by)).expect("embedding checked");
            let s = self.leq_branch(bx, by);
            let m = self.b.member(&by.reify(), &ty).expect("branch of y");
            let p = self.b.trans(s, m);
            acc = Some(match acc {
                None => p,
                Some(a) => {
                    let c = self.b.ctx(&Op::Disj, a, p);
                    let idem = self.b.axiom(Axiom::DI3, bind(&[("x", &ty)]));
                    self.b.trans(c, idem)
                }
            });
        }
        acc.expect("non-empty disjunction")
    }

    fn leq_branch(&mut self, bx: &Branch, by: &Branch) -> usize {
        if bx.is_empty() {
            return self.b.refl(&Term::Nil);
        }
        let (tx, kx) = sorted_terms(bx);
        let (ty, ky) = sorted_terms(by);
        let (ox, ex) = self.b.sort(&tx, &kx);
        let (oy, ey) = self.b.sort(&ty, &ky);
        let mut parts = Vec::new();
        for (&i, &j) in ox.iter().zip(&oy) {
            let (a, u) = &bx.summands()[i];
            let v = &by.summands()[j].1;
            let s = self.leq_nfb(u, v);
            parts.push(self.b.ctx_prefix(&Action::Visible(a.clone()), s));
        }
        let mid = self.b.le_map(&Op::Ext, &parts);
        self.b.chain(&[ex.fwd, mid, ey.bwd])
    }

    pub(crate) fn leq(&mut self, x: &NormalForm, y: &NormalForm) -> Option<usize> {
        match (x, y) {
            (NormalForm::Bot, _) => Some(self.b.bot_le(&y.reify())),
            (_, NormalForm::Bot) => None,
            (NormalForm::Basic(x), NormalForm::Basic(y)) => nfb_embeds(x, y).then(|| self.leq_nfb(x, y)),
        }
    }
}

/// A proof of `reify(x) ≤ reify(y)` if there is one.
pub fn nf_leq(x: &NormalForm, y: &NormalForm) -> Option<ProofTrace> {
    let mut n = Normalizer::new();
    let s = n.leq(x, y)?;
    Some(n.b.finish_le(s))
}

#[derive(Debug, Clone)]
pub struct Proof {
    pub holds: bool,
    /// Present when `holds`.
    pub trace: Option<ProofTrace>,
    /// Present when not `holds`.
    pub witness: Option<Arc<Witness>>,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("semantic check says {semantic} but normal form comparison says {syntactic} for {lhs} ≤ {rhs}")]
pub struct ProveError {
    pub lhs: Term,
    pub rhs: Term,
    pub semantic: bool,
    pub syntactic: bool,
}

/// Decide `t ≤ s`: semantically first, then by normalising both sides and
/// comparing. The two answers must agree.
pub fn prove(t: &Term, s: &Term) -> Result<Proof, ProveError> {
    let sem = Semantics::new();
    let verdict = Refinement::new(&sem).ready_sim_preorder(t, s);
    let mut n = Normalizer::new();
    let (nt, et) = n.norm(t);
    let (ns, es) = n.norm(s);
    let mid = n.leq(&nt, &ns);
    if mid.is_some() != verdict.holds {
        return Err(ProveError { lhs: t.clone(), rhs: s.clone(), semantic: verdict.holds, syntactic: mid.is_some() });
    }
    Ok(match mid {
        Some(m) => {
            let step = n.b.chain(&[et.fwd, m, es.bwd]);
            Proof { holds: true, trace: Some(n.b.finish_le(step)), witness: None }
        }
        None => Proof { holds: false, trace: None, witness: verdict.witness },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::trace::validate_trace;
    use crate::parse;
    use crate::testkit::{GenConfig, TermGen};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn nf_of(s: &str) -> NormalForm {
        NormalForm::from_term(&p(s)).unwrap()
    }

    fn proves(l: &str, r: &str) -> bool {
        let pr = prove(&p(l), &p(r)).unwrap();
        if let Some(t) = &pr.trace {
            validate_trace(t).unwrap_or_else(|e| panic!("{e}\n{t}"));
            assert_eq!((t.goal.lhs.clone(), t.goal.rhs.clone()), (p(l), p(r)));
        }
        pr.holds
    }

    #[test]
    fn leq_examples() {
        let t = nf_leq(&NormalForm::Bot, &nf_of("0")).unwrap();
        validate_trace(&t).unwrap();
        assert!(nf_leq(&nf_of("0"), &nf_of("a.0")).is_none());
        let t = nf_leq(&nf_of("a.0"), &nf_of("a.0 \\/ b.0")).unwrap();
        validate_trace(&t).unwrap();
        let t = nf_leq(&nf_of("b.0 [] a.c.0"), &nf_of("a.(0 \\/ c.0) [] b.0")).unwrap();
        validate_trace(&t).unwrap();
        assert!(nf_leq(&nf_of("a.(0 \\/ c.0)"), &nf_of("a.c.0")).is_none());
    }

    #[test]
    fn prove_examples() {
        assert!(proves("a.0 [] b.0", "a.0 [] b.0 \\/ c.0"));
        assert!(proves("a.0 /\\ b.0", "bot"));
        assert!(proves("bot", "a.0 /\\ b.0"));
        assert!(!proves("a.(bot \\/ 0)", "a.bot [] a.0"));
        assert!(proves("a.bot [] a.0", "a.(bot \\/ 0)"));
        assert!(!proves("tau.(a.0 \\/ b.0)", "tau.a.0 [] tau.b.0"));
        let pr = prove(&p("a.0"), &p("a.0 [] b.0")).unwrap();
        assert!(!pr.holds && pr.witness.is_some());
    }

    #[test]
    fn prove_matches_semantics_on_random_pairs() {
        let mut g = TermGen::new(GenConfig::default().with_seed(123).with_max_degree(7));
        let mut held = 0;
        for _ in 0..300 {
            let t = g.term();
            let s = if g.rng().gen_bool(0.5) { Term::disj(t.clone(), g.term()) } else { g.term() };
            let pr = prove(&t, &s).unwrap_or_else(|e| panic!("{e}"));
            if let Some(tr) = &pr.trace {
                validate_trace(tr).unwrap();
                held += 1;
            }
        }
        assert!(held > 50, "{held}");
    }

    use rand::Rng;
}
