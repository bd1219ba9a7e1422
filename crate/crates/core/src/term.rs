//! Process terms, actions and synchronisation sets.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A visible action name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// An action label: the silent action or a visible name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Tau,
    Visible(Name),
}

impl Action {
    pub fn visible(s: &str) -> Self {
        Action::Visible(Name::new(s))
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }

    pub fn name(&self) -> Option<&Name> {
        match self {
            Action::Tau => None,
            Action::Visible(n) => Some(n),
        }
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Tau => f.write_str("tau"),
            Action::Visible(n) => f.write_str(n.as_str()),
        }
    }
}

/// Finite set of visible names a parallel composition synchronises on.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SyncSet(BTreeSet<Name>);

impl SyncSet {
    pub fn new() -> Self {
        SyncSet(BTreeSet::new())
    }

    pub fn contains(&self, n: &Name) -> bool {
        self.0.contains(n)
    }

    pub fn insert(&mut self, n: Name) {
        self.0.insert(n);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Name> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<'a> FromIterator<&'a str> for SyncSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        SyncSet(iter.into_iter().map(Name::new).collect())
    }
}

impl FromIterator<Name> for SyncSet {
    fn from_iter<I: IntoIterator<Item = Name>>(iter: I) -> Self {
        SyncSet(iter.into_iter().collect())
    }
}

impl fmt::Debug for SyncSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SyncSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(n.as_str())?;
        }
        f.write_str("}")
    }
}

/// A process term. Children are shared, so cloning is cheap.
///
/// The derived `Ord` is the canonical order: constructors compare in
/// declaration order, then fields left to right.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Nil,
    Bot,
    Prefix(Action, Arc<Term>),
    ExtChoice(Arc<Term>, Arc<Term>),
    Conj(Arc<Term>, Arc<Term>),
    Disj(Arc<Term>, Arc<Term>),
    Par(Arc<Term>, Arc<Term>, SyncSet),
}

impl Term {
    pub fn prefix(a: Action, t: Term) -> Term {
        Term::Prefix(a, Arc::new(t))
    }

    /// Visible prefix by name.
    pub fn act(a: &str, t: Term) -> Term {
        Term::prefix(Action::visible(a), t)
    }

    pub fn tau(t: Term) -> Term {
        Term::prefix(Action::Tau, t)
    }

    pub fn ext(l: Term, r: Term) -> Term {
        Term::ExtChoice(Arc::new(l), Arc::new(r))
    }

    pub fn conj(l: Term, r: Term) -> Term {
        Term::Conj(Arc::new(l), Arc::new(r))
    }

    pub fn disj(l: Term, r: Term) -> Term {
        Term::Disj(Arc::new(l), Arc::new(r))
    }

    pub fn par(l: Term, r: Term, a: SyncSet) -> Term {
        Term::Par(Arc::new(l), Arc::new(r), a)
    }

    /// Number of operator occurrences, counting constants as one.
    pub fn degree(&self) -> usize {
        match self {
            Term::Nil | Term::Bot => 1,
            Term::Prefix(_, t) => t.degree() + 1,
            Term::ExtChoice(l, r) | Term::Conj(l, r) | Term::Disj(l, r) | Term::Par(l, r, _) => {
                l.degree() + r.degree() + 1
            }
        }
    }

    /// True when the term mentions neither bottom nor conjunction.
    pub fn is_basic(&self) -> bool {
        match self {
            Term::Nil => true,
            Term::Bot | Term::Conj(..) => false,
            Term::Prefix(_, t) => t.is_basic(),
            Term::ExtChoice(l, r) | Term::Disj(l, r) | Term::Par(l, r, _) => {
                l.is_basic() && r.is_basic()
            }
        }
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Nil | Term::Bot => vec![],
            Term::Prefix(_, t) => vec![t],
            Term::ExtChoice(l, r) | Term::Conj(l, r) | Term::Disj(l, r) | Term::Par(l, r, _) => {
                vec![l, r]
            }
        }
    }

    /// Every subterm including the term itself, deduplicated.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if out.insert(t.clone()) {
                stack.extend(t.children());
            }
        }
        out
    }

    /// Visible names occurring anywhere in the term, sync sets included.
    pub fn alphabet(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for t in self.subterms() {
            match &t {
                Term::Prefix(Action::Visible(n), _) => {
                    out.insert(n.clone());
                }
                Term::Par(_, _, a) => out.extend(a.iter().cloned()),
                _ => {}
            }
        }
        out
    }

    /// Binding strength used by the printer; larger binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            Term::Disj(..) => 1,
            Term::ExtChoice(..) => 2,
            Term::Par(..) => 3,
            Term::Conj(..) => 4,
            Term::Prefix(..) => 5,
            Term::Nil | Term::Bot => 6,
        }
    }
}

/// Canonical total order on terms.
pub fn canonical_compare(t: &Term, s: &Term) -> std::cmp::Ordering {
    t.cmp(s)
}

/// General external choice over a sequence: `0` when empty, the sole
/// element when singleton, otherwise nested to the left.
pub fn ext_all<I: IntoIterator<Item = Term>>(items: I) -> Term {
    let mut it = items.into_iter();
    match it.next() {
        None => Term::Nil,
        Some(first) => it.fold(first, Term::ext),
    }
}

/// General disjunction, nested to the left. `None` on an empty sequence.
pub fn disj_all<I: IntoIterator<Item = Term>>(items: I) -> Option<Term> {
    let mut it = items.into_iter();
    let first = it.next()?;
    Some(it.fold(first, Term::disj))
}

fn write_side(f: &mut fmt::Formatter<'_>, t: &Term, min: u8) -> fmt::Result {
    if t.precedence() < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

fn write_binary(f: &mut fmt::Formatter<'_>, me: &Term, l: &Term, op: &str, r: &Term) -> fmt::Result {
    let p = me.precedence();
    write_side(f, l, p)?;
    write!(f, " {op} ")?;
    write_side(f, r, p + 1)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Nil => f.write_str("0"),
            Term::Bot => f.write_str("bot"),
            Term::Prefix(a, t) => {
                write!(f, "{a}.")?;
                write_side(f, t, 5)
            }
            Term::ExtChoice(l, r) => write_binary(f, self, l, "[]", r),
            Term::Conj(l, r) => write_binary(f, self, l, "/\\", r),
            Term::Disj(l, r) => write_binary(f, self, l, "\\/", r),
            Term::Par(l, r, a) => {
                let mut op = String::from("|[");
                for (i, n) in a.iter().enumerate() {
                    if i > 0 {
                        op.push(',');
                    }
                    op.push_str(n.as_str());
                }
                op.push_str("]|");
                write_binary(f, self, l, &op, r)
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}
