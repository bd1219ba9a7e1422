use std::fmt;

use crate::term::{disj_all, ext_all, Action, Name, Term};

/// An external choice of visible prefixes with pairwise distinct actions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    summands: Vec<(Name, NfB)>,
}

/// A non-empty disjunction of branches.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NfB {
    branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormalForm {
    Bot,
    Basic(NfB),
}

impl Branch {
    pub(crate) fn from_summands(summands: Vec<(Name, NfB)>) -> Branch {
        Branch { summands }
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> &[(Name, NfB)] {
        &self.summands
    }

    pub fn actions(&self) -> Vec<Name> {
        self.summands.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn reify(&self) -> Term {
        ext_all(self.summands.iter().map(|(a, b)| Term::prefix(Action::Visible(a.clone()), b.reify())))
    }

    fn from_term(t: &Term) -> Option<Branch> {
        if *t == Term::Nil {
            return Some(Branch { summands: vec![] });
        }
        let mut items = Vec::new();
        let mut cur = t;
        while let Term::ExtChoice(l, r) = cur {
            items.push(&**r);
            cur = l;
        }
        items.push(cur);
        items.reverse();
        let mut summands: Vec<(Name, NfB)> = Vec::new();
        for it in items {
            let Term::Prefix(Action::Visible(a), body) = it else { return None };
            if summands.iter().any(|(b, _)| b == a) {
                return None;
            }
            summands.push((a.clone(), NfB::from_term(body)?));
        }
        Some(Branch { summands })
    }
}

impl NfB {
    pub(crate) fn from_branches(branches: Vec<Branch>) -> NfB {
        debug_assert!(!branches.is_empty());
        NfB { branches }
    }

    pub(crate) fn single(b: Branch) -> NfB {
        NfB { branches: vec![b] }
    }

    /// The normal form of `0`.
    pub fn nil() -> NfB {
        NfB::single(Branch { summands: vec![] })
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn reify(&self) -> Term {
        disj_all(self.branches.iter().map(Branch::reify)).expect("at least one branch")
    }

    pub fn from_term(t: &Term) -> Option<NfB> {
        let mut items = Vec::new();
        let mut cur = t;
        while let Term::Disj(l, r) = cur {
            items.push(&**r);
            cur = l;
        }
        items.push(cur);
        items.reverse();
        let branches = items.into_iter().map(Branch::from_term).collect::<Option<Vec<_>>>()?;
        Some(NfB { branches })
    }

    /// Branches in canonical order with no repeats, summands sorted by
    /// action, recursively.
    pub fn is_canonical(&self) -> bool {
        let terms: Vec<Term> = self.branches.iter().map(Branch::reify).collect();
        terms.windows(2).all(|w| w[0] < w[1])
            && self.branches.iter().all(|b| {
                b.summands.windows(2).all(|w| w[0].0 < w[1].0)
                    && b.summands.iter().all(|(_, n)| n.is_canonical())
            })
    }
}

impl NormalForm {
    pub fn reify(&self) -> Term {
        match self {
            NormalForm::Bot => Term::Bot,
            NormalForm::Basic(n) => n.reify(),
        }
    }

    /// Read a term as a normal form, if it is one.
    pub fn from_term(t: &Term) -> Option<NormalForm> {
        match t {
            Term::Bot => Some(NormalForm::Bot),
            _ => NfB::from_term(t).map(NormalForm::Basic),
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, NormalForm::Bot)
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            NormalForm::Bot => true,
            NormalForm::Basic(n) => n.is_canonical(),
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reify())
    }
}

pub fn is_normal_form(t: &Term) -> bool {
    NormalForm::from_term(t).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    fn nf(s: &str) -> Option<NormalForm> {
        NormalForm::from_term(&parse(s).unwrap())
    }

    #[test]
    fn recognises_normal_forms() {
        assert!(nf("bot").is_some());
        assert!(nf("0").is_some());
        assert!(nf("a.0 [] b.(0 \\/ c.0)").is_some());
        assert!(nf("0 \\/ a.0 \\/ a.b.0 [] b.0").is_some());
    }

    #[test]
    fn rejects_other_terms() {
        assert!(nf("a.0 [] a.0").is_none());
        assert!(nf("tau.0").is_none());
        assert!(nf("a.bot").is_none());
        assert!(nf("0 [] a.0").is_none());
        assert!(nf("a.0 \\/ (b.0 \\/ 0)").is_none());
        assert!(nf("a.0 /\\ a.0").is_none());
        assert!(nf("bot \\/ 0").is_none());
    }

    #[test]
    fn round_trip() {
        for s in ["0", "bot", "a.0 [] b.(0 \\/ c.0)", "0 \\/ a.b.0"] {
            let t = parse(s).unwrap();
            assert_eq!(NormalForm::from_term(&t).unwrap().reify(), t);
        }
    }

    #[test]
    fn canonical_order() {
        assert!(nf("0 \\/ a.0").unwrap().is_canonical());
        assert!(!nf("a.0 \\/ 0").unwrap().is_canonical());
        assert!(!nf("b.0 [] a.0").unwrap().is_canonical());
        assert!(!nf("0 \\/ 0").unwrap().is_canonical());
    }
}
