use std::fmt;

use crate::term::{ext_all, Action, Name, SyncSet, Term};

/// What a schema variable is bound to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Binding {
    Term(Term),
    Action(Action),
    Sync(SyncSet),
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binding::Term(t) => write!(f, "{t}"),
            Binding::Action(a) => write!(f, "{a}"),
            Binding::Sync(s) => write!(f, "{s}"),
        }
    }
}

impl From<Term> for Binding {
    fn from(t: Term) -> Self {
        Binding::Term(t)
    }
}

impl From<Action> for Binding {
    fn from(a: Action) -> Self {
        Binding::Action(a)
    }
}

impl From<SyncSet> for Binding {
    fn from(s: SyncSet) -> Self {
        Binding::Sync(s)
    }
}

pub type Bindings = Vec<(String, Binding)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    EC1,
    EC2,
    EC3,
    EC4,
    EC5,
    DI1,
    DI2,
    DI3,
    DI4,
    DI5,
    CO1,
    CO2,
    CO3,
    CO4,
    DS1,
    DS2,
    DS3,
    DS4,
    PR1,
    PR2,
    PA1,
    PA2,
    ECC1,
    ECC2,
    ECC3,
    EXP1,
    EXP2,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError(pub String);

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError(msg.into()))
}

struct Lookup<'a>(&'a Bindings);

impl Lookup<'_> {
    fn get(&self, name: &str) -> Option<&Binding> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, b)| b)
    }

    fn term(&self, name: &str) -> Result<Term, SchemaError> {
        match self.get(name) {
            Some(Binding::Term(t)) => Ok(t.clone()),
            Some(_) => err(format!("`{name}` must be bound to a term")),
            None => err(format!("`{name}` is unbound")),
        }
    }

    fn action(&self, name: &str) -> Result<Action, SchemaError> {
        match self.get(name) {
            Some(Binding::Action(a)) => Ok(a.clone()),
            Some(_) => err(format!("`{name}` must be bound to an action")),
            None => err(format!("`{name}` is unbound")),
        }
    }

    fn visible(&self, name: &str) -> Result<Name, SchemaError> {
        match self.action(name)? {
            Action::Visible(n) => Ok(n),
            Action::Tau => err(format!("`{name}` must be a visible action")),
        }
    }

    fn sync(&self, name: &str) -> Result<SyncSet, SchemaError> {
        match self.get(name) {
            Some(Binding::Sync(s)) => Ok(s.clone()),
            Some(_) => err(format!("`{name}` must be bound to a sync set")),
            None => err(format!("`{name}` is unbound")),
        }
    }

    // a0.x0, a1.x1, ... while `a{i}` is bound.
    fn prefixes(&self, act: &str, var: &str) -> Result<Vec<(Name, Term)>, SchemaError> {
        let mut out = Vec::new();
        while self.get(&format!("{act}{}", out.len())).is_some() {
            let i = out.len();
            out.push((self.visible(&format!("{act}{i}"))?, self.term(&format!("{var}{i}"))?));
        }
        Ok(out)
    }

    fn count(&self, var: &str) -> usize {
        (0..).take_while(|i| self.get(&format!("{var}{i}")).is_some()).count()
    }
}

/// No τ-move at the top, read off the syntax: τ-moves only come from
/// disjunctions and τ-prefixes not guarded by a visible prefix.
pub fn stable(t: &Term) -> bool {
    match t {
        Term::Nil | Term::Bot => true,
        Term::Prefix(a, _) => !a.is_tau(),
        Term::Disj(..) => false,
        Term::ExtChoice(l, r) | Term::Conj(l, r) | Term::Par(l, r, _) => stable(l) && stable(r),
    }
}

fn choice(items: &[(Name, Term)]) -> Term {
    ext_all(items.iter().map(|(a, t)| Term::prefix(Action::Visible(a.clone()), t.clone())))
}

fn names(items: &[(Name, Term)]) -> std::collections::BTreeSet<Name> {
    items.iter().map(|(a, _)| a.clone()).collect()
}

impl Axiom {
    pub const ALL: [Axiom; 27] = [
        Axiom::EC1,
        Axiom::EC2,
        Axiom::EC3,
        Axiom::EC4,
        Axiom::EC5,
        Axiom::DI1,
        Axiom::DI2,
        Axiom::DI3,
        Axiom::DI4,
        Axiom::DI5,
        Axiom::CO1,
        Axiom::CO2,
        Axiom::CO3,
        Axiom::CO4,
        Axiom::DS1,
        Axiom::DS2,
        Axiom::DS3,
        Axiom::DS4,
        Axiom::PR1,
        Axiom::PR2,
        Axiom::PA1,
        Axiom::PA2,
        Axiom::ECC1,
        Axiom::ECC2,
        Axiom::ECC3,
        Axiom::EXP1,
        Axiom::EXP2,
    ];

    pub fn from_name(s: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.to_string() == s)
    }

    /// Equations may be used in either direction; the rest only as written.
    pub fn is_equation(self) -> bool {
        !matches!(
            self,
            Axiom::DI5
                | Axiom::DS1
                | Axiom::DS2
                | Axiom::DS3
                | Axiom::DS4
                | Axiom::ECC2
                | Axiom::ECC3
                | Axiom::EXP1
                | Axiom::EXP2
        )
    }

    /// The instance `lhs ≤ rhs` (or `lhs = rhs` for equations) under the
    /// given bindings, after checking side conditions.
    pub fn instantiate(self, b: &Bindings) -> Result<(Term, Term), SchemaError> {
        let v = Lookup(b);
        let x = || v.term("x");
        let y = || v.term("y");
        let z = || v.term("z");
        use Axiom::*;
        Ok(match self {
            EC1 => (Term::ext(x()?, y()?), Term::ext(y()?, x()?)),
            EC2 => (
                Term::ext(Term::ext(x()?, y()?), z()?),
                Term::ext(x()?, Term::ext(y()?, z()?)),
            ),
            EC3 => {
                let x = x()?;
                if !stable(&x) {
                    return err("EC3 needs a stable argument");
                }
                (Term::ext(x.clone(), x.clone()), x)
            }
            EC4 => (Term::ext(x()?, Term::Nil), x()?),
            EC5 => (Term::ext(x()?, Term::Bot), Term::Bot),
            DI1 => (Term::disj(x()?, y()?), Term::disj(y()?, x()?)),
            DI2 => (
                Term::disj(x()?, Term::disj(y()?, z()?)),
                Term::disj(Term::disj(x()?, y()?), z()?),
            ),
            DI3 => (Term::disj(x()?, x()?), x()?),
            DI4 => (Term::disj(x()?, Term::Bot), x()?),
            DI5 => (x()?, Term::disj(x()?, y()?)),
            CO1 => (Term::conj(x()?, y()?), Term::conj(y()?, x()?)),
            CO2 => (
                Term::conj(Term::conj(x()?, y()?), z()?),
                Term::conj(x()?, Term::conj(y()?, z()?)),
            ),
            CO3 => (Term::conj(x()?, x()?), x()?),
            CO4 => (Term::conj(x()?, Term::Bot), Term::Bot),
            DS1 => (
                Term::ext(x()?, Term::disj(y()?, z()?)),
                Term::disj(Term::ext(x()?, y()?), Term::ext(x()?, z()?)),
            ),
            DS2 => (
                Term::conj(x()?, Term::disj(y()?, z()?)),
                Term::disj(Term::conj(x()?, y()?), Term::conj(x()?, z()?)),
            ),
            DS3 => {
                let a = v.sync("A")?;
                (
                    Term::par(x()?, Term::disj(y()?, z()?), a.clone()),
                    Term::disj(Term::par(x()?, y()?, a.clone()), Term::par(x()?, z()?, a)),
                )
            }
            DS4 => {
                let a = Action::Visible(v.visible("a")?);
                let (x, y) = (x()?, y()?);
                if !x.is_basic() || !y.is_basic() {
                    return err("DS4 needs basic arguments");
                }
                (
                    Term::prefix(a.clone(), Term::disj(x.clone(), y.clone())),
                    Term::ext(Term::prefix(a.clone(), x), Term::prefix(a, y)),
                )
            }
            PR1 => {
                let a = Action::Visible(v.visible("a")?);
                (Term::prefix(a, Term::Bot), Term::Bot)
            }
            PR2 => (Term::tau(x()?), x()?),
            PA1 => {
                let a = v.sync("A")?;
                (Term::par(x()?, y()?, a.clone()), Term::par(y()?, x()?, a))
            }
            PA2 => (Term::par(x()?, Term::Bot, v.sync("A")?), Term::Bot),
            ECC1 => {
                let (l, r) = (v.prefixes("a", "x")?, v.prefixes("b", "y")?);
                if names(&l) == names(&r) {
                    return err("ECC1 needs different prefix sets");
                }
                (Term::conj(choice(&l), choice(&r)), Term::Bot)
            }
            ECC2 | ECC3 => {
                let l = v.prefixes("a", "x")?;
                if v.count("y") != l.len() {
                    return err("ECC2/ECC3 need one `y` per `a`");
                }
                let ys: Vec<Term> = (0..l.len()).map(|i| v.term(&format!("y{i}"))).collect::<Result<_, _>>()?;
                let r: Vec<(Name, Term)> = l.iter().zip(&ys).map(|((a, _), y)| (a.clone(), y.clone())).collect();
                let both: Vec<(Name, Term)> =
                    l.iter().zip(&ys).map(|((a, x), y)| (a.clone(), Term::conj(x.clone(), y.clone()))).collect();
                let split = Term::conj(choice(&l), choice(&r));
                if self == ECC2 {
                    (choice(&both), split)
                } else {
                    if names(&l).len() != l.len() {
                        return err("ECC3 needs a choice injective in prefixes");
                    }
                    (split, choice(&both))
                }
            }
            EXP1 | EXP2 => {
                let a = v.sync("A")?;
                let (l, r) = (v.prefixes("a", "x")?, v.prefixes("b", "y")?);
                if l.iter().chain(&r).any(|(_, t)| !t.is_basic()) {
                    return err("EXP1/EXP2 need basic arguments");
                }
                let (lt, rt) = (choice(&l), choice(&r));
                let par = |p: Term, q: Term| Term::par(p, q, a.clone());
                let o1: Vec<(Name, Term)> = l
                    .iter()
                    .filter(|(n, _)| !a.contains(n))
                    .map(|(n, x)| (n.clone(), par(x.clone(), rt.clone())))
                    .collect();
                let o2: Vec<(Name, Term)> = r
                    .iter()
                    .filter(|(n, _)| !a.contains(n))
                    .map(|(n, y)| (n.clone(), par(lt.clone(), y.clone())))
                    .collect();
                let mut o3: Vec<(Name, Term)> = Vec::new();
                for (n, x) in &l {
                    for (m, y) in &r {
                        if n == m && a.contains(n) {
                            o3.push((n.clone(), par(x.clone(), y.clone())));
                        }
                    }
                }
                let expansion = Term::ext(Term::ext(choice(&o1), choice(&o2)), choice(&o3));
                if self == EXP1 {
                    (par(lt, rt), expansion)
                } else {
                    (expansion, par(lt, rt))
                }
            }
        })
    }
}

/// Bindings for a choice `□ a_i.x_i` under variable names `a{i}`, `x{i}`.
pub fn choice_bindings(act: &str, var: &str, items: &[(Name, Term)]) -> Bindings {
    let mut out = Vec::new();
    for (i, (a, t)) in items.iter().enumerate() {
        out.push((format!("{act}{i}"), Binding::Action(Action::Visible(a.clone()))));
        out.push((format!("{var}{i}"), Binding::Term(t.clone())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn b(pairs: &[(&str, Binding)]) -> Bindings {
        pairs.iter().map(|(n, v)| (n.to_string(), v.clone())).collect()
    }

    #[test]
    fn simple_instances() {
        let bs = b(&[("x", p("a.0").into()), ("y", p("0").into())]);
        assert_eq!(Axiom::EC1.instantiate(&bs).unwrap(), (p("a.0 [] 0"), p("0 [] a.0")));
        assert_eq!(Axiom::DI5.instantiate(&bs).unwrap(), (p("a.0"), p("a.0 \\/ 0")));
        assert!(Axiom::EC2.instantiate(&bs).is_err());
    }

    #[test]
    fn side_conditions() {
        let a = Binding::Action(Action::visible("a"));
        let basic = b(&[("a", a.clone()), ("x", p("0").into()), ("y", p("b.0").into())]);
        assert!(Axiom::DS4.instantiate(&basic).is_ok());
        let not_basic = b(&[("a", a.clone()), ("x", p("bot").into()), ("y", p("b.0").into())]);
        assert!(Axiom::DS4.instantiate(&not_basic).is_err());
        assert!(Axiom::PR1.instantiate(&b(&[("a", Binding::Action(Action::Tau))])).is_err());

        let same = [(Name::new("a"), p("0"))];
        let mut bs = choice_bindings("a", "x", &same);
        bs.extend(choice_bindings("b", "y", &same));
        assert!(Axiom::ECC1.instantiate(&bs).is_err());

        let twice = [(Name::new("a"), p("0")), (Name::new("a"), p("b.0"))];
        let mut bs = choice_bindings("a", "x", &twice);
        bs.push(("y0".into(), p("0").into()));
        bs.push(("y1".into(), p("0").into()));
        assert!(Axiom::ECC2.instantiate(&bs).is_ok());
        assert!(Axiom::ECC3.instantiate(&bs).is_err());
    }

    #[test]
    fn idempotence_of_choice_needs_stability() {
        // a.0 \/ b.0 [] a.0 \/ b.0 can settle on a.0 [] b.0, which the
        // single disjunction never offers.
        let x = p("a.0 \\/ b.0");
        assert!(Axiom::EC3.instantiate(&b(&[("x", x.clone().into())])).is_err());
        let sem = crate::semantics::Semantics::new();
        assert!(!crate::refinement::ready_sim_preorder(&Term::ext(x.clone(), x.clone()), &x).holds);
        assert!(sem.is_stable(&p("a.0 [] b.0")));
        assert!(Axiom::EC3.instantiate(&b(&[("x", p("a.(0 \\/ b.0)").into())])).is_ok());
    }

    #[test]
    fn syntactic_stability_agrees_with_semantics() {
        let sem = crate::semantics::Semantics::new();
        let mut g = crate::testkit::TermGen::new(crate::testkit::GenConfig::default().with_seed(5));
        for _ in 0..500 {
            let t = g.term();
            assert_eq!(stable(&t), sem.is_stable(&t), "{t}");
        }
    }

    #[test]
    fn expansion_shape() {
        let l = [(Name::new("a"), p("0")), (Name::new("c"), p("0"))];
        let r = [(Name::new("b"), p("0")), (Name::new("c"), p("d.0"))];
        let mut bs = choice_bindings("a", "x", &l);
        bs.extend(choice_bindings("b", "y", &r));
        bs.push(("A".into(), Binding::Sync(["c"].into_iter().collect())));
        let (lhs, rhs) = Axiom::EXP1.instantiate(&bs).unwrap();
        assert_eq!(lhs, p("(a.0 [] c.0) |[c]| (b.0 [] c.d.0)"));
        assert_eq!(
            rhs,
            p("a.(0 |[c]| (b.0 [] c.d.0)) [] b.((a.0 [] c.0) |[c]| 0) [] c.(0 |[c]| d.0)")
        );
    }

    #[test]
    fn empty_choices_are_nil() {
        let mut bs = choice_bindings("a", "x", &[]);
        bs.extend(choice_bindings("b", "y", &[]));
        bs.push(("A".into(), Binding::Sync(SyncSet::new())));
        let (lhs, rhs) = Axiom::EXP1.instantiate(&bs).unwrap();
        assert_eq!(lhs, p("0 |[]| 0"));
        assert_eq!(rhs, p("0 [] 0 [] 0"));
    }
}
