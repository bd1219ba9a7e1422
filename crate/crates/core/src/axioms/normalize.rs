use std::collections::{BTreeSet, HashMap};

use super::builder::{bind, Builder, Eqn, Op};
use super::nf::{Branch, NfB, NormalForm};
use super::schema::{choice_bindings, Axiom, Binding};
use super::trace::ProofTrace;
use crate::term::{Action, Name, SyncSet, Term};

fn summand_terms(items: &[(Name, NfB)]) -> Vec<Term> {
    items.iter().map(|(a, n)| Term::prefix(Action::Visible(a.clone()), n.reify())).collect()
}

fn bodies(b: &Branch) -> Vec<(Name, Term)> {
    b.summands().iter().map(|(a, n)| (a.clone(), n.reify())).collect()
}

/// Builds normal forms together with their proofs. Results are memoised,
/// and the builder shares identical steps.
#[derive(Default)]
pub(crate) struct Normalizer {
    pub b: Builder,
    norm_memo: HashMap<Term, (NormalForm, Eqn)>,
    combine_memo: HashMap<(Op, NormalForm, NormalForm), (NormalForm, Eqn)>,
}

impl Normalizer {
    pub fn new() -> Self {
        Normalizer::default()
    }

    /// `t = reify(nf)`.
    pub fn norm(&mut self, t: &Term) -> (NormalForm, Eqn) {
        if let Some(r) = self.norm_memo.get(t) {
            return r.clone();
        }
        let r = match t {
            Term::Nil => (NormalForm::Basic(NfB::nil()), self.b.eq_refl(t)),
            Term::Bot => (NormalForm::Bot, self.b.eq_refl(t)),
            Term::Prefix(Action::Tau, u) => {
                let e1 = self.b.eq_axiom(Axiom::PR2, bind(&[("x", u)]));
                let (n, e2) = self.norm(u);
                (n, self.b.eq_trans(e1, e2))
            }
            Term::Prefix(a @ Action::Visible(name), u) => {
                let (n, e) = self.norm(u);
                let e = self.b.eq_prefix(a, e);
                match n {
                    NormalForm::Bot => {
                        let z = self.b.eq_axiom(Axiom::PR1, vec![("a".into(), Binding::Action(a.clone()))]);
                        (NormalForm::Bot, self.b.eq_trans(e, z))
                    }
                    NormalForm::Basic(body) => {
                        let br = Branch::from_summands(vec![(name.clone(), body)]);
                        (NormalForm::Basic(NfB::single(br)), e)
                    }
                }
            }
            Term::ExtChoice(l, r) => self.norm_binary(&Op::Ext, l, r),
            Term::Conj(l, r) => self.norm_binary(&Op::Conj, l, r),
            Term::Disj(l, r) => self.norm_binary(&Op::Disj, l, r),
            Term::Par(l, r, a) => self.norm_binary(&Op::Par(a.clone()), l, r),
        };
        self.norm_memo.insert(t.clone(), r.clone());
        r
    }

    fn norm_binary(&mut self, op: &Op, l: &Term, r: &Term) -> (NormalForm, Eqn) {
        let (n1, e1) = self.norm(l);
        let (n2, e2) = self.norm(r);
        let c = self.b.eq_ctx(op, e1, e2);
        let (n, e3) = self.combine(op, &n1, &n2);
        (n, self.b.eq_trans(c, e3))
    }

    /// `reify(n1) ⊙ reify(n2) = reify(result)`.
    pub fn combine(&mut self, op: &Op, n1: &NormalForm, n2: &NormalForm) -> (NormalForm, Eqn) {
        let key = (op.clone(), n1.clone(), n2.clone());
        if let Some(r) = self.combine_memo.get(&key) {
            return r.clone();
        }
        let (t1, t2) = (n1.reify(), n2.reify());
        let r = match (op, n1, n2) {
            (Op::Disj, _, _) => {
                let mut bs = Vec::new();
                for n in [n1, n2] {
                    if let NormalForm::Basic(x) = n {
                        bs.extend(x.branches().iter().cloned());
                    }
                }
                self.canon_disj(&op.apply(t1, t2), bs)
            }
            (_, NormalForm::Bot, _) => {
                let c = self.b.comm(op, &t1, &t2);
                let z = self.absorb(op, &t2);
                (NormalForm::Bot, self.b.eq_trans(c, z))
            }
            (_, _, NormalForm::Bot) => (NormalForm::Bot, self.absorb(op, &t1)),
            (_, NormalForm::Basic(x), NormalForm::Basic(y)) => {
                let xs: Vec<Term> = x.branches().iter().map(Branch::reify).collect();
                let ys: Vec<Term> = y.branches().iter().map(Branch::reify).collect();
                let d = self.b.distribute(op, &xs, &ys);
                let mut rows = Vec::new();
                let mut results = Vec::new();
                for bx in x.branches() {
                    let mut row = Vec::new();
                    for by in y.branches() {
                        let (r, e) = self.pair(op, bx, by);
                        row.push(e);
                        results.extend(r);
                    }
                    rows.push(self.b.eq_map(&Op::Disj, &row));
                }
                let m = self.b.eq_map(&Op::Disj, &rows);
                let mid = self.b.eq_rhs(m);
                let (n, c) = self.canon_disj(&mid, results);
                (n, self.b.eq_chain(&[d, m, c]))
            }
        };
        self.combine_memo.insert(key, r.clone());
        r
    }

    /// `x ⊙ ⊥ = ⊥`.
    fn absorb(&mut self, op: &Op, x: &Term) -> Eqn {
        match op {
            Op::Ext => self.b.eq_axiom(Axiom::EC5, bind(&[("x", x)])),
            Op::Conj => self.b.eq_axiom(Axiom::CO4, bind(&[("x", x)])),
            Op::Par(a) => {
                let mut b = bind(&[("x", x)]);
                b.push(("A".into(), Binding::Sync(a.clone())));
                self.b.eq_axiom(Axiom::PA2, b)
            }
            Op::Disj => unreachable!(),
        }
    }

    fn pair(&mut self, op: &Op, bx: &Branch, by: &Branch) -> (Option<Branch>, Eqn) {
        match op {
            Op::Ext => {
                let (b, e) = self.ec_merge(bx, by);
                (Some(b), e)
            }
            Op::Conj => self.conj_branch(bx, by),
            Op::Par(a) => {
                let (b, e) = self.par_branch(bx, by, a);
                (Some(b), e)
            }
            Op::Disj => unreachable!(),
        }
    }

    /// Sort, deduplicate and drop ⊥ from the disjuncts of `lhs`, whose
    /// non-⊥ disjuncts are exactly the reified `bs`.
    fn canon_disj(&mut self, lhs: &Term, bs: Vec<Branch>) -> (NormalForm, Eqn) {
        let mut keyed: Vec<(Term, Branch)> = bs.into_iter().map(|b| (b.reify(), b)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let nf = if keyed.is_empty() {
            NormalForm::Bot
        } else {
            NormalForm::Basic(NfB::from_branches(keyed.into_iter().map(|(_, b)| b).collect()))
        };
        let e = self.b.disj_eq(lhs, &nf.reify());
        (nf, e)
    }

    fn basic_combine(&mut self, op: &Op, x: &NfB, y: &NfB) -> (NfB, Eqn) {
        match self.combine(op, &NormalForm::Basic(x.clone()), &NormalForm::Basic(y.clone())) {
            (NormalForm::Basic(n), e) => (n, e),
            (NormalForm::Bot, _) => unreachable!("basic terms are consistent"),
        }
    }

    /// Merge two choices into one, joining bodies under shared prefixes.
    pub fn ec_merge(&mut self, bx: &Branch, by: &Branch) -> (Branch, Eqn) {
        let (tx, ty) = (bx.reify(), by.reify());
        match (bx.is_empty(), by.is_empty()) {
            (_, true) => return (bx.clone(), self.b.eq_axiom(Axiom::EC4, bind(&[("x", &tx)]))),
            (true, false) => {
                let c = self.b.comm(&Op::Ext, &tx, &ty);
                let z = self.b.eq_axiom(Axiom::EC4, bind(&[("x", &ty)]));
                return (by.clone(), self.b.eq_trans(c, z));
            }
            _ => {}
        }
        let mut items: Vec<(Name, NfB)> = bx.summands().iter().chain(by.summands()).cloned().collect();
        let mut e = self.b.append(&summand_terms(bx.summands()), &summand_terms(by.summands()));
        let keys: Vec<Name> = items.iter().map(|(a, _)| a.clone()).collect();
        let (order, s) = self.b.sort(&summand_terms(&items), &keys);
        e = self.b.eq_trans(e, s);
        items = order.into_iter().map(|i| items[i].clone()).collect();
        let mut i = 0;
        while i + 1 < items.len() {
            if items[i].0 != items[i + 1].0 {
                i += 1;
                continue;
            }
            let a = Action::Visible(items[i].0.clone());
            let (x, y) = (items[i].1.clone(), items[i + 1].1.clone());
            let m = self.b.merge_prefix(&a, &x.reify(), &y.reify());
            let (z, ez) = self.basic_combine(&Op::Disj, &x, &y);
            let ez = self.b.eq_prefix(&a, ez);
            let m = self.b.eq_trans(m, ez);
            let step = self.b.merge_at(&summand_terms(&items), i, m);
            e = self.b.eq_trans(e, step);
            items[i].1 = z;
            items.remove(i + 1);
        }
        (Branch::from_summands(items), e)
    }

    fn conj_branch(&mut self, bx: &Branch, by: &Branch) -> (Option<Branch>, Eqn) {
        let tx = bx.reify();
        let ax: BTreeSet<Name> = bx.actions().into_iter().collect();
        let ay: BTreeSet<Name> = by.actions().into_iter().collect();
        if ax != ay {
            let mut b = choice_bindings("a", "x", &bodies(bx));
            b.extend(choice_bindings("b", "y", &bodies(by)));
            return (None, self.b.eq_axiom(Axiom::ECC1, b));
        }
        if bx.is_empty() {
            return (Some(bx.clone()), self.b.eq_axiom(Axiom::CO3, bind(&[("x", &tx)])));
        }
        // Line the right choice up with the left one.
        let names = bx.actions();
        let keys: Vec<usize> =
            by.summands().iter().map(|(a, _)| names.iter().position(|n| n == a).unwrap()).collect();
        let (order, s) = self.b.sort(&summand_terms(by.summands()), &keys);
        let ys: Vec<NfB> = order.iter().map(|&i| by.summands()[i].1.clone()).collect();
        let rx = self.b.eq_refl(&tx);
        let e0 = self.b.eq_ctx(&Op::Conj, rx, s);

        let mut b = choice_bindings("a", "x", &bodies(bx));
        for (i, y) in ys.iter().enumerate() {
            b.push((format!("y{i}"), Binding::Term(y.reify())));
        }
        let e1 = Eqn { fwd: self.b.axiom(Axiom::ECC3, b.clone()), bwd: self.b.axiom(Axiom::ECC2, b) };

        let mut es = Vec::new();
        let mut out = Vec::new();
        let mut bot_at = None;
        for (i, ((a, x), y)) in bx.summands().iter().zip(&ys).enumerate() {
            let act = Action::Visible(a.clone());
            let (n, e) = self.combine(&Op::Conj, &NormalForm::Basic(x.clone()), &NormalForm::Basic(y.clone()));
            let mut e = self.b.eq_prefix(&act, e);
            match n {
                NormalForm::Bot => {
                    let z = self.b.eq_axiom(Axiom::PR1, vec![("a".into(), Binding::Action(act))]);
                    e = self.b.eq_trans(e, z);
                    bot_at.get_or_insert(i);
                }
                NormalForm::Basic(n) => out.push((a.clone(), n)),
            }
            es.push(e);
        }
        let e2 = self.b.eq_map(&Op::Ext, &es);
        match bot_at {
            Some(k) => {
                let items: Vec<Term> = es.iter().map(|&e| self.b.eq_rhs(e)).collect();
                let e3 = self.b.absorb_bot(&items, k);
                (None, self.b.eq_chain(&[e0, e1, e2, e3]))
            }
            None => {
                let keys: Vec<Name> = out.iter().map(|(a, _)| a.clone()).collect();
                let (order, e3) = self.b.sort(&summand_terms(&out), &keys);
                let out = order.into_iter().map(|i| out[i].clone()).collect();
                (Some(Branch::from_summands(out)), self.b.eq_chain(&[e0, e1, e2, e3]))
            }
        }
    }

    fn par_branch(&mut self, bx: &Branch, by: &Branch, sync: &SyncSet) -> (Branch, Eqn) {
        let mut b = choice_bindings("a", "x", &bodies(bx));
        b.extend(choice_bindings("b", "y", &bodies(by)));
        b.push(("A".into(), Binding::Sync(sync.clone())));
        let e1 = Eqn { fwd: self.b.axiom(Axiom::EXP1, b.clone()), bwd: self.b.axiom(Axiom::EXP2, b) };

        let op = Op::Par(sync.clone());
        let (nx, ny) = (NfB::single(bx.clone()), NfB::single(by.clone()));
        let mut groups: [Vec<(Name, NfB, Eqn)>; 3] = [vec![], vec![], vec![]];
        for (a, x) in bx.summands().iter().filter(|(a, _)| !sync.contains(a)) {
            let (n, e) = self.basic_combine(&op, x, &ny);
            groups[0].push((a.clone(), n, e));
        }
        for (c, y) in by.summands().iter().filter(|(c, _)| !sync.contains(c)) {
            let (n, e) = self.basic_combine(&op, &nx, y);
            groups[1].push((c.clone(), n, e));
        }
        for (a, x) in bx.summands() {
            for (c, y) in by.summands() {
                if a == c && sync.contains(a) {
                    let (n, e) = self.basic_combine(&op, x, y);
                    groups[2].push((a.clone(), n, e));
                }
            }
        }
        let mut branches = Vec::new();
        let mut eqs = Vec::new();
        for g in groups {
            if g.is_empty() {
                branches.push(Branch::from_summands(vec![]));
                eqs.push(self.b.eq_refl(&Term::Nil));
                continue;
            }
            let es: Vec<Eqn> =
                g.iter().map(|(a, _, e)| self.b.eq_prefix(&Action::Visible(a.clone()), *e)).collect();
            eqs.push(self.b.eq_map(&Op::Ext, &es));
            branches.push(Branch::from_summands(g.into_iter().map(|(a, n, _)| (a, n)).collect()));
        }
        let inner = self.b.eq_ctx(&Op::Ext, eqs[0], eqs[1]);
        let e2 = self.b.eq_ctx(&Op::Ext, inner, eqs[2]);
        let (m12, e3) = self.ec_merge(&branches[0], &branches[1]);
        let r3 = self.b.eq_refl(&branches[2].reify());
        let e3 = self.b.eq_ctx(&Op::Ext, e3, r3);
        let (r, e4) = self.ec_merge(&m12, &branches[2]);
        (r, self.b.eq_chain(&[e1, e2, e3, e4]))
    }
}

/// Normal form of `t` and a proof of `t = reify(nf)`.
pub fn normalize(t: &Term) -> (NormalForm, ProofTrace) {
    let mut n = Normalizer::new();
    let (nf, e) = n.norm(t);
    (nf, n.b.finish_eq(e))
}

/// Normal form of `reify(x) ∧ reify(y)`.
pub fn nf_conjoin(x: &NormalForm, y: &NormalForm) -> (NormalForm, ProofTrace) {
    let mut n = Normalizer::new();
    let (nf, e) = n.combine(&Op::Conj, x, y);
    (nf, n.b.finish_eq(e))
}

/// Normal form of `reify(x) |[A]| reify(y)`.
pub fn nf_parallel(x: &NormalForm, y: &NormalForm, sync: &SyncSet) -> (NormalForm, ProofTrace) {
    let mut n = Normalizer::new();
    let (nf, e) = n.combine(&Op::Par(sync.clone()), x, y);
    (nf, n.b.finish_eq(e))
}

/// One choice equal to `reify(x) □ reify(y)`.
pub fn nf_ec_merge(x: &Branch, y: &Branch) -> (NormalForm, ProofTrace) {
    let mut n = Normalizer::new();
    let (b, e) = n.ec_merge(x, y);
    (NormalForm::Basic(NfB::single(b)), n.b.finish_eq(e))
}
