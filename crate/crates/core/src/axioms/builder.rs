//! Incremental construction of proof traces, plus the derived lemmas the
//! normaliser and the prover lean on.

use std::collections::HashMap;

use super::schema::{Axiom, Binding, Bindings};
use super::trace::{Goal, ProofStep, ProofTrace, Relation, Rule};
use crate::term::{disj_all, Action, SyncSet, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Op {
    Ext,
    Conj,
    Disj,
    Par(SyncSet),
}

impl Op {
    pub(crate) fn apply(&self, l: Term, r: Term) -> Term {
        match self {
            Op::Ext => Term::ext(l, r),
            Op::Conj => Term::conj(l, r),
            Op::Disj => Term::disj(l, r),
            Op::Par(a) => Term::par(l, r, a.clone()),
        }
    }

    fn comm(&self) -> Axiom {
        match self {
            Op::Ext => Axiom::EC1,
            Op::Conj => Axiom::CO1,
            Op::Disj => Axiom::DI1,
            Op::Par(_) => Axiom::PA1,
        }
    }

    fn bind(&self, pairs: &[(&str, &Term)]) -> Bindings {
        let mut b = bind(pairs);
        if let Op::Par(a) = self {
            b.push(("A".into(), Binding::Sync(a.clone())));
        }
        b
    }
}

pub(crate) fn bind(pairs: &[(&str, &Term)]) -> Bindings {
    pairs.iter().map(|(n, t)| (n.to_string(), Binding::Term((*t).clone()))).collect()
}

/// Proof of `l = r` as the pair `l ≤ r`, `r ≤ l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Eqn {
    pub fwd: usize,
    pub bwd: usize,
}

#[derive(Default)]
pub(crate) struct Builder {
    steps: Vec<ProofStep>,
    seen: HashMap<(Term, Term), usize>,
}

impl Builder {
    pub fn lhs(&self, s: usize) -> &Term {
        &self.steps[s].lhs
    }

    pub fn rhs(&self, s: usize) -> &Term {
        &self.steps[s].rhs
    }

    pub fn eq_rhs(&self, e: Eqn) -> Term {
        self.steps[e.fwd].rhs.clone()
    }

    fn is_refl(&self, s: usize) -> bool {
        self.steps[s].lhs == self.steps[s].rhs
    }

    fn push(&mut self, rule: Rule, bindings: Bindings, lhs: Term, rhs: Term) -> usize {
        let key = (lhs, rhs);
        if let Some(&i) = self.seen.get(&key) {
            return i;
        }
        let i = self.steps.len();
        self.steps.push(ProofStep { rule, bindings, lhs: key.0.clone(), rhs: key.1.clone() });
        self.seen.insert(key, i);
        i
    }

    pub fn refl(&mut self, t: &Term) -> usize {
        self.push(Rule::Ref, bind(&[("x", t)]), t.clone(), t.clone())
    }

    pub fn axiom(&mut self, ax: Axiom, b: Bindings) -> usize {
        let (l, r) = ax.instantiate(&b).unwrap_or_else(|e| panic!("bad {ax} instance: {e}"));
        self.push(Rule::Axiom(ax), b, l, r)
    }

    /// An equation used right to left.
    pub fn axiom_rev(&mut self, ax: Axiom, b: Bindings) -> usize {
        assert!(ax.is_equation(), "{ax} is not an equation");
        let (l, r) = ax.instantiate(&b).unwrap_or_else(|e| panic!("bad {ax} instance: {e}"));
        self.push(Rule::Axiom(ax), b, r, l)
    }

    pub fn trans(&mut self, a: usize, b: usize) -> usize {
        if self.is_refl(a) {
            return b;
        }
        if self.is_refl(b) {
            return a;
        }
        assert_eq!(self.rhs(a), self.lhs(b), "steps do not chain");
        let (l, r) = (self.lhs(a).clone(), self.rhs(b).clone());
        self.push(Rule::Trans(a, b), vec![], l, r)
    }

    pub fn chain(&mut self, ss: &[usize]) -> usize {
        let mut acc = ss[0];
        for &s in &ss[1..] {
            acc = self.trans(acc, s);
        }
        acc
    }

    pub fn ctx_prefix(&mut self, a: &Action, s: usize) -> usize {
        let l = Term::prefix(a.clone(), self.lhs(s).clone());
        if self.is_refl(s) {
            return self.refl(&l);
        }
        let r = Term::prefix(a.clone(), self.rhs(s).clone());
        self.push(Rule::Context(vec![s]), vec![], l, r)
    }

    pub fn ctx(&mut self, op: &Op, a: usize, b: usize) -> usize {
        let l = op.apply(self.lhs(a).clone(), self.lhs(b).clone());
        if self.is_refl(a) && self.is_refl(b) {
            return self.refl(&l);
        }
        let r = op.apply(self.rhs(a).clone(), self.rhs(b).clone());
        self.push(Rule::Context(vec![a, b]), vec![], l, r)
    }

    pub fn eq_refl(&mut self, t: &Term) -> Eqn {
        let s = self.refl(t);
        Eqn { fwd: s, bwd: s }
    }

    pub fn eq_axiom(&mut self, ax: Axiom, b: Bindings) -> Eqn {
        Eqn { fwd: self.axiom(ax, b.clone()), bwd: self.axiom_rev(ax, b) }
    }

    pub fn eq_trans(&mut self, e1: Eqn, e2: Eqn) -> Eqn {
        Eqn { fwd: self.trans(e1.fwd, e2.fwd), bwd: self.trans(e2.bwd, e1.bwd) }
    }

    pub fn eq_chain(&mut self, es: &[Eqn]) -> Eqn {
        let mut acc = es[0];
        for &e in &es[1..] {
            acc = self.eq_trans(acc, e);
        }
        acc
    }

    pub fn eq_sym(e: Eqn) -> Eqn {
        Eqn { fwd: e.bwd, bwd: e.fwd }
    }

    pub fn eq_prefix(&mut self, a: &Action, e: Eqn) -> Eqn {
        Eqn { fwd: self.ctx_prefix(a, e.fwd), bwd: self.ctx_prefix(a, e.bwd) }
    }

    pub fn eq_ctx(&mut self, op: &Op, e1: Eqn, e2: Eqn) -> Eqn {
        Eqn { fwd: self.ctx(op, e1.fwd, e2.fwd), bwd: self.ctx(op, e1.bwd, e2.bwd) }
    }

    pub fn finish_le(self, s: usize) -> ProofTrace {
        let goal = Goal {
            lhs: self.steps[s].lhs.clone(),
            rhs: self.steps[s].rhs.clone(),
            relation: Relation::Le,
            steps: vec![s],
        };
        ProofTrace { steps: self.steps, goal }
    }

    pub fn finish_eq(self, e: Eqn) -> ProofTrace {
        let goal = Goal {
            lhs: self.steps[e.fwd].lhs.clone(),
            rhs: self.steps[e.fwd].rhs.clone(),
            relation: Relation::Eq,
            steps: vec![e.fwd, e.bwd],
        };
        ProofTrace { steps: self.steps, goal }
    }

    // ---- small lemmas ----

    pub fn comm(&mut self, op: &Op, x: &Term, y: &Term) -> Eqn {
        let b = op.bind(&[("x", x), ("y", y)]);
        self.eq_axiom(op.comm(), b)
    }

    /// `(x ⊙ y) ⊙ z = x ⊙ (y ⊙ z)` for □ and ∨.
    pub fn assoc(&mut self, op: &Op, x: &Term, y: &Term, z: &Term) -> Eqn {
        let b = bind(&[("x", x), ("y", y), ("z", z)]);
        match op {
            Op::Ext => self.eq_axiom(Axiom::EC2, b),
            Op::Disj => Self::eq_sym(self.eq_axiom(Axiom::DI2, b)),
            _ => unreachable!("associativity only used for choice and disjunction"),
        }
    }

    /// `(x ⊙ y) ∨ (x ⊙ z) ≤ x ⊙ (y ∨ z)`.
    pub fn undistribute(&mut self, op: &Op, x: &Term, y: &Term, z: &Term) -> usize {
        let rx = self.refl(x);
        let yz = self.axiom(Axiom::DI5, bind(&[("x", y), ("y", z)]));
        let left = self.ctx(op, rx, yz);
        let zy = self.axiom(Axiom::DI5, bind(&[("x", z), ("y", y)]));
        let sw = self.axiom(Axiom::DI1, bind(&[("x", z), ("y", y)]));
        let zs = self.trans(zy, sw);
        let right = self.ctx(op, rx, zs);
        let both = self.ctx(&Op::Disj, left, right);
        let w = self.rhs(left).clone();
        let idem = self.axiom(Axiom::DI3, bind(&[("x", &w)]));
        self.trans(both, idem)
    }

    /// `x ⊙ (y ∨ z) = (x ⊙ y) ∨ (x ⊙ z)` for □, ∧ and ∥_A.
    pub fn distrib(&mut self, op: &Op, x: &Term, y: &Term, z: &Term) -> Eqn {
        let ax = match op {
            Op::Ext => Axiom::DS1,
            Op::Conj => Axiom::DS2,
            Op::Par(_) => Axiom::DS3,
            Op::Disj => unreachable!(),
        };
        let fwd = self.axiom(ax, op.bind(&[("x", x), ("y", y), ("z", z)]));
        let bwd = self.undistribute(op, x, y, z);
        Eqn { fwd, bwd }
    }

    /// `a.x □ a.y ≤ a.(x ∨ y)`.
    pub fn prefix_merge_le(&mut self, a: &Action, x: &Term, y: &Term) -> usize {
        let xy = self.axiom(Axiom::DI5, bind(&[("x", x), ("y", y)]));
        let left = self.ctx_prefix(a, xy);
        let yx = self.axiom(Axiom::DI5, bind(&[("x", y), ("y", x)]));
        let sw = self.axiom(Axiom::DI1, bind(&[("x", y), ("y", x)]));
        let ys = self.trans(yx, sw);
        let right = self.ctx_prefix(a, ys);
        let both = self.ctx(&Op::Ext, left, right);
        let w = self.rhs(left).clone();
        let idem = self.axiom(Axiom::EC3, bind(&[("x", &w)]));
        self.trans(both, idem)
    }

    /// `a.x □ a.y = a.(x ∨ y)` for basic `x`, `y`.
    pub fn merge_prefix(&mut self, a: &Action, x: &Term, y: &Term) -> Eqn {
        let fwd = self.prefix_merge_le(a, x, y);
        let mut b = bind(&[("x", x), ("y", y)]);
        b.insert(0, ("a".into(), Binding::Action(a.clone())));
        let bwd = self.axiom(Axiom::DS4, b);
        Eqn { fwd, bwd }
    }

    pub fn bot_le(&mut self, y: &Term) -> usize {
        if *y == Term::Bot {
            return self.refl(y);
        }
        let s1 = self.axiom(Axiom::DI5, bind(&[("x", &Term::Bot), ("y", y)]));
        let s2 = self.axiom(Axiom::DI1, bind(&[("x", &Term::Bot), ("y", y)]));
        let s3 = self.axiom(Axiom::DI4, bind(&[("x", y)]));
        self.chain(&[s1, s2, s3])
    }

    /// `x ≤ t` when `x` occurs in the disjunction tree of `t`.
    pub fn member(&mut self, x: &Term, t: &Term) -> Option<usize> {
        if x == t {
            return Some(self.refl(t));
        }
        let Term::Disj(l, r) = t else { return None };
        if let Some(s) = self.member(x, l) {
            let up = self.axiom(Axiom::DI5, bind(&[("x", l), ("y", r)]));
            return Some(self.trans(s, up));
        }
        let s = self.member(x, r)?;
        let up = self.axiom(Axiom::DI5, bind(&[("x", r), ("y", l)]));
        let sw = self.axiom(Axiom::DI1, bind(&[("x", r), ("y", l)]));
        Some(self.chain(&[s, up, sw]))
    }

    /// `t ≤ s` when every disjunct of `t` is ⊥ or a disjunct of `s`.
    pub fn disj_le(&mut self, t: &Term, s: &Term) -> usize {
        if let Some(m) = self.member(t, s) {
            return m;
        }
        match t {
            Term::Disj(l, r) => {
                let pl = self.disj_le(l, s);
                let pr = self.disj_le(r, s);
                let both = self.ctx(&Op::Disj, pl, pr);
                let idem = self.axiom(Axiom::DI3, bind(&[("x", s)]));
                self.trans(both, idem)
            }
            Term::Bot => self.bot_le(s),
            _ => panic!("{t} is not a disjunct of {s}"),
        }
    }

    /// Two disjunctions with the same disjuncts, ignoring order, repeats and ⊥.
    pub fn disj_eq(&mut self, t: &Term, s: &Term) -> Eqn {
        if t == s {
            return self.eq_refl(t);
        }
        Eqn { fwd: self.disj_le(t, s), bwd: self.disj_le(s, t) }
    }

    // ---- lists folded to the left ----

    /// Pointwise congruence over `e0 ⊙ e1 ⊙ ...`.
    pub fn eq_map(&mut self, op: &Op, es: &[Eqn]) -> Eqn {
        let mut acc = es[0];
        for &e in &es[1..] {
            acc = self.eq_ctx(op, acc, e);
        }
        acc
    }

    pub fn le_map(&mut self, op: &Op, ss: &[usize]) -> usize {
        let mut acc = ss[0];
        for &s in &ss[1..] {
            acc = self.ctx(op, acc, s);
        }
        acc
    }

    fn lift(&mut self, op: &Op, mut e: Eqn, rest: &[Term]) -> Eqn {
        for r in rest {
            let rr = self.eq_refl(r);
            e = self.eq_ctx(op, e, rr);
        }
        e
    }

    fn fold(op: &Op, items: &[Term]) -> Term {
        let mut acc = items[0].clone();
        for t in &items[1..] {
            acc = op.apply(acc, t.clone());
        }
        acc
    }

    /// `fold(l1) □ fold(l2) = fold(l1 ++ l2)`, both non-empty.
    pub fn append(&mut self, l1: &[Term], l2: &[Term]) -> Eqn {
        let op = Op::Ext;
        let n = l2.len();
        if n == 1 {
            let t = op.apply(Self::fold(&op, l1), l2[0].clone());
            return self.eq_refl(&t);
        }
        let (p, q) = (Self::fold(&op, l1), Self::fold(&op, &l2[..n - 1]));
        let a = Self::eq_sym(self.assoc(&op, &p, &q, &l2[n - 1]));
        let inner = self.append(l1, &l2[..n - 1]);
        let last = self.eq_refl(&l2[n - 1]);
        let b = self.eq_ctx(&op, inner, last);
        self.eq_trans(a, b)
    }

    /// Replace the adjacent pair at `i`, `i+1` by the right side of `e`,
    /// which proves `items[i] □ items[i+1] = m`.
    pub fn merge_at(&mut self, items: &[Term], i: usize, e: Eqn) -> Eqn {
        let op = Op::Ext;
        let base = if i == 0 {
            e
        } else {
            let p = Self::fold(&op, &items[..i]);
            let a = self.assoc(&op, &p, &items[i], &items[i + 1]);
            let rp = self.eq_refl(&p);
            let c = self.eq_ctx(&op, rp, e);
            self.eq_trans(a, c)
        };
        self.lift(&op, base, &items[i + 2..])
    }

    fn swap(&mut self, items: &[Term], i: usize) -> Eqn {
        let op = Op::Ext;
        let base = if i == 0 {
            self.comm(&op, &items[0], &items[1])
        } else {
            let p = Self::fold(&op, &items[..i]);
            let (x, y) = (&items[i], &items[i + 1]);
            let a = self.assoc(&op, &p, x, y);
            let rp = self.eq_refl(&p);
            let c = self.comm(&op, x, y);
            let mid = self.eq_ctx(&op, rp, c);
            let back = Self::eq_sym(self.assoc(&op, &p, y, x));
            self.eq_chain(&[a, mid, back])
        };
        self.lift(&op, base, &items[i + 2..])
    }

    /// Stable sort of a non-empty choice list by `keys`, returning the
    /// permutation applied and a proof `fold(items) = fold(sorted)`.
    pub fn sort<K: Ord + Clone>(&mut self, items: &[Term], keys: &[K]) -> (Vec<usize>, Eqn) {
        let mut order: Vec<usize> = (0..items.len()).collect();
        let mut cur: Vec<Term> = items.to_vec();
        let mut e = self.eq_refl(&Self::fold(&Op::Ext, items));
        let n = cur.len();
        for pass in 0..n {
            for i in 0..n.saturating_sub(pass + 1) {
                if keys[order[i]] > keys[order[i + 1]] {
                    let s = self.swap(&cur, i);
                    e = self.eq_trans(e, s);
                    cur.swap(i, i + 1);
                    order.swap(i, i + 1);
                }
            }
        }
        (order, e)
    }

    /// `fold(items) = ⊥` when `items[k]` is ⊥.
    pub fn absorb_bot(&mut self, items: &[Term], k: usize) -> Eqn {
        let op = Op::Ext;
        let bot = Term::Bot;
        let mut e = if k == 0 {
            self.eq_refl(&bot)
        } else {
            let p = Self::fold(&op, &items[..k]);
            self.eq_axiom(Axiom::EC5, bind(&[("x", &p)]))
        };
        for r in &items[k + 1..] {
            let rr = self.eq_refl(r);
            let c = self.eq_ctx(&op, e, rr);
            let sw = self.comm(&op, &bot, r);
            let z = self.eq_axiom(Axiom::EC5, bind(&[("x", r)]));
            e = self.eq_chain(&[c, sw, z]);
        }
        e
    }

    // ---- distribution over disjunction lists ----

    /// `x ⊙ ⋁ys = ⋁(x ⊙ y)`.
    fn dist_right(&mut self, op: &Op, x: &Term, ys: &[Term]) -> Eqn {
        let n = ys.len();
        if n == 1 {
            return self.eq_refl(&op.apply(x.clone(), ys[0].clone()));
        }
        let init = disj_all(ys[..n - 1].iter().cloned()).unwrap();
        let d = self.distrib(op, x, &init, &ys[n - 1]);
        let rec = self.dist_right(op, x, &ys[..n - 1]);
        let last = self.eq_refl(&op.apply(x.clone(), ys[n - 1].clone()));
        let c = self.eq_ctx(&Op::Disj, rec, last);
        self.eq_trans(d, c)
    }

    /// `⋁xs ⊙ y = ⋁(x ⊙ y)`.
    fn dist_left(&mut self, op: &Op, xs: &[Term], y: &Term) -> Eqn {
        if xs.len() == 1 {
            return self.eq_refl(&op.apply(xs[0].clone(), y.clone()));
        }
        let big = disj_all(xs.iter().cloned()).unwrap();
        let c1 = self.comm(op, &big, y);
        let d = self.dist_right(op, y, xs);
        let back: Vec<Eqn> = xs.iter().map(|x| self.comm(op, y, x)).collect();
        let c2 = self.eq_map(&Op::Disj, &back);
        self.eq_chain(&[c1, d, c2])
    }

    /// `⋁xs ⊙ ⋁ys = ⋁_i ⋁_j (x_i ⊙ y_j)`, nested by `i` then `j`.
    pub fn distribute(&mut self, op: &Op, xs: &[Term], ys: &[Term]) -> Eqn {
        let big_y = disj_all(ys.iter().cloned()).unwrap();
        let l = self.dist_left(op, xs, &big_y);
        let rows: Vec<Eqn> = xs.iter().map(|x| self.dist_right(op, x, ys)).collect();
        let r = self.eq_map(&Op::Disj, &rows);
        self.eq_trans(l, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::trace::validate_trace;
    use crate::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn terms(ss: &[&str]) -> Vec<Term> {
        ss.iter().map(|s| p(s)).collect()
    }

    fn check_eq(b: Builder, e: Eqn, l: &str, r: &str) {
        let t = b.finish_eq(e);
        assert_eq!(t.goal.lhs, p(l));
        assert_eq!(t.goal.rhs, p(r));
        validate_trace(&t).unwrap_or_else(|err| panic!("{err}\n{t}"));
    }

    #[test]
    fn undistribute_and_prefix_merge() {
        let mut b = Builder::default();
        let s = b.undistribute(&Op::Conj, &p("a.0"), &p("b.0"), &p("c.0"));
        let t = b.finish_le(s);
        assert_eq!(t.goal.lhs, p("a.0 /\\ b.0 \\/ a.0 /\\ c.0"));
        validate_trace(&t).unwrap();

        let mut b = Builder::default();
        let s = b.prefix_merge_le(&Action::visible("a"), &p("b.0"), &p("c.0"));
        let t = b.finish_le(s);
        assert_eq!(t.goal.rhs, p("a.(b.0 \\/ c.0)"));
        validate_trace(&t).unwrap();
    }

    #[test]
    fn disjunction_reshaping() {
        let mut b = Builder::default();
        let e = b.disj_eq(&p("(c.0 \\/ bot) \\/ (a.0 \\/ c.0)"), &p("a.0 \\/ c.0"));
        check_eq(b, e, "(c.0 \\/ bot) \\/ (a.0 \\/ c.0)", "a.0 \\/ c.0");
    }

    #[test]
    fn sorting_and_merging_lists() {
        let items = terms(&["c.0", "a.0", "b.0", "a.b.0"]);
        let mut b = Builder::default();
        let (order, e) = b.sort(&items, &["c", "a", "b", "a"]);
        assert_eq!(order, vec![1, 3, 2, 0]);
        check_eq(b, e, "c.0 [] a.0 [] b.0 [] a.b.0", "a.0 [] a.b.0 [] b.0 [] c.0");

        let items = terms(&["a.0", "a.b.0", "c.0"]);
        let mut b = Builder::default();
        let m = b.merge_prefix(&Action::visible("a"), &p("0"), &p("b.0"));
        let e = b.merge_at(&items, 0, m);
        check_eq(b, e, "a.0 [] a.b.0 [] c.0", "a.(0 \\/ b.0) [] c.0");

        let mut b = Builder::default();
        let e = b.append(&terms(&["a.0", "b.0"]), &terms(&["c.0", "d.0", "e.0"]));
        check_eq(b, e, "(a.0 [] b.0) [] ((c.0 [] d.0) [] e.0)", "a.0 [] b.0 [] c.0 [] d.0 [] e.0");

        let mut b = Builder::default();
        let e = b.absorb_bot(&terms(&["a.0", "bot", "b.0"]), 1);
        check_eq(b, e, "a.0 [] bot [] b.0", "bot");
    }

    #[test]
    fn distribution() {
        let mut b = Builder::default();
        let op = Op::Par(["a"].into_iter().collect());
        let e = b.distribute(&op, &terms(&["a.0", "b.0"]), &terms(&["0", "c.0"]));
        check_eq(
            b,
            e,
            "(a.0 \\/ b.0) |[a]| (0 \\/ c.0)",
            "(a.0 |[a]| 0 \\/ a.0 |[a]| c.0) \\/ (b.0 |[a]| 0 \\/ b.0 |[a]| c.0)",
        );
    }
}
