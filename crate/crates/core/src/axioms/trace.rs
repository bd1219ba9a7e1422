use std::fmt;

use serde_json::{json, Value};

use super::schema::{Axiom, Binding, Bindings};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom(Axiom),
    Ref,
    /// Premise indices, 0-based.
    Trans(usize, usize),
    Context(Vec<usize>),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Axiom(a) => write!(f, "{a}"),
            Rule::Ref => f.write_str("REF"),
            Rule::Trans(i, j) => write!(f, "TRANS({},{})", i + 1, j + 1),
            Rule::Context(ps) => {
                let ps: Vec<String> = ps.iter().map(|p| (p + 1).to_string()).collect();
                write!(f, "CONTEXT({})", ps.join(","))
            }
        }
    }
}

/// One derived inequation `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub rule: Rule,
    pub bindings: Bindings,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub lhs: Term,
    pub rhs: Term,
    pub relation: Relation,
    /// `[lhs ≤ rhs]` for `Le`, `[lhs ≤ rhs, rhs ≤ lhs]` for `Eq`.
    pub steps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub steps: Vec<ProofStep>,
    pub goal: Goal,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("step {}: {reason}", step.map_or("goal".to_string(), |s| (s + 1).to_string()))]
pub struct TraceError {
    /// 0-based; `None` when the steps are fine but the goal does not follow.
    pub step: Option<usize>,
    pub reason: String,
}

fn binding_text(b: &Bindings) -> String {
    if b.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = b.iter().map(|(n, v)| format!("{n}={v}")).collect();
    format!(" [{}]", parts.join("; "))
}

impl ProofTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "STEP {}: {}{} ⊢ {} ≤ {}\n",
                i + 1,
                s.rule,
                binding_text(&s.bindings),
                s.lhs,
                s.rhs
            ));
        }
        let rel = match self.goal.relation {
            Relation::Le => "≤",
            Relation::Eq => "=",
        };
        let by: Vec<String> = self.goal.steps.iter().map(|i| (i + 1).to_string()).collect();
        out.push_str(&format!("GOAL: {} {rel} {} BY {}\n", self.goal.lhs, self.goal.rhs, by.join(",")));
        out
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (rule, premises): (String, Vec<usize>) = match &s.rule {
                    Rule::Axiom(a) => (a.to_string(), vec![]),
                    Rule::Ref => ("REF".into(), vec![]),
                    Rule::Trans(a, b) => ("TRANS".into(), vec![a + 1, b + 1]),
                    Rule::Context(ps) => ("CONTEXT".into(), ps.iter().map(|p| p + 1).collect()),
                };
                let bindings: serde_json::Map<String, Value> =
                    s.bindings.iter().map(|(n, v)| (n.clone(), Value::String(v.to_string()))).collect();
                json!({
                    "index": i + 1,
                    "rule": rule,
                    "premises": premises,
                    "bindings": bindings,
                    "lhs": s.lhs.to_string(),
                    "rhs": s.rhs.to_string(),
                })
            })
            .collect();
        json!({
            "goal": {
                "lhs": self.goal.lhs.to_string(),
                "rhs": self.goal.rhs.to_string(),
                "relation": match self.goal.relation { Relation::Le => "<=", Relation::Eq => "=" },
                "steps": self.goal.steps.iter().map(|i| i + 1).collect::<Vec<_>>(),
            },
            "steps": steps,
        })
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn bad<T>(step: usize, reason: impl Into<String>) -> Result<T, TraceError> {
    Err(TraceError { step: Some(step), reason: reason.into() })
}

fn check_context(steps: &[ProofStep], i: usize, prems: &[usize]) -> Result<(), TraceError> {
    let s = &steps[i];
    let same_head = match (&s.lhs, &s.rhs) {
        (Term::Nil, Term::Nil) | (Term::Bot, Term::Bot) => true,
        (Term::Prefix(a, _), Term::Prefix(b, _)) => a == b,
        (Term::ExtChoice(..), Term::ExtChoice(..))
        | (Term::Conj(..), Term::Conj(..))
        | (Term::Disj(..), Term::Disj(..)) => true,
        (Term::Par(_, _, a), Term::Par(_, _, b)) => a == b,
        _ => false,
    };
    if !same_head {
        return bad(i, "CONTEXT needs the same operator on both sides");
    }
    let (l, r) = (s.lhs.children(), s.rhs.children());
    if prems.len() != l.len() {
        return bad(i, format!("CONTEXT needs {} premises, got {}", l.len(), prems.len()));
    }
    for (k, &p) in prems.iter().enumerate() {
        if p >= i {
            return bad(i, format!("premise {} is not an earlier step", p + 1));
        }
        if steps[p].lhs != *l[k] || steps[p].rhs != *r[k] {
            return bad(i, format!("premise {} does not match argument {}", p + 1, k + 1));
        }
    }
    Ok(())
}

/// Check every step and that the goal follows. Reports the first problem.
pub fn validate_trace(trace: &ProofTrace) -> Result<(), TraceError> {
    let steps = &trace.steps;
    for (i, s) in steps.iter().enumerate() {
        match &s.rule {
            Rule::Axiom(ax) => {
                let (l, r) = ax.instantiate(&s.bindings).or_else(|e| bad(i, e.0))?;
                let forward = s.lhs == l && s.rhs == r;
                let backward = ax.is_equation() && s.lhs == r && s.rhs == l;
                if !forward && !backward {
                    return bad(i, format!("conclusion is not an instance of {ax} under its bindings"));
                }
            }
            Rule::Ref => {
                if s.lhs != s.rhs {
                    return bad(i, "REF needs identical sides");
                }
                if let Some((_, b)) = s.bindings.iter().find(|(n, _)| n == "x") {
                    if *b != Binding::Term(s.lhs.clone()) {
                        return bad(i, "REF binding differs from its conclusion");
                    }
                }
            }
            Rule::Trans(j, k) => {
                if *j >= i || *k >= i {
                    return bad(i, "TRANS premises must be earlier steps");
                }
                let (p, q) = (&steps[*j], &steps[*k]);
                if p.lhs != s.lhs || p.rhs != q.lhs || q.rhs != s.rhs {
                    return bad(i, "TRANS premises do not chain to the conclusion");
                }
            }
            Rule::Context(prems) => check_context(steps, i, prems)?,
        }
    }
    let g = &trace.goal;
    let want: Vec<(&Term, &Term)> = match g.relation {
        Relation::Le => vec![(&g.lhs, &g.rhs)],
        Relation::Eq => vec![(&g.lhs, &g.rhs), (&g.rhs, &g.lhs)],
    };
    if g.steps.len() != want.len() {
        return Err(TraceError { step: None, reason: "wrong number of goal steps".into() });
    }
    for (&k, (l, r)) in g.steps.iter().zip(want) {
        let s = steps.get(k).ok_or(TraceError { step: None, reason: format!("no step {}", k + 1) })?;
        if s.lhs != *l || s.rhs != *r {
            return Err(TraceError { step: None, reason: format!("step {} does not conclude the goal", k + 1) });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;
    use crate::term::Action;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn step(rule: Rule, bindings: &[(&str, Binding)], l: &str, r: &str) -> ProofStep {
        ProofStep {
            rule,
            bindings: bindings.iter().map(|(n, b)| (n.to_string(), b.clone())).collect(),
            lhs: p(l),
            rhs: p(r),
        }
    }

    fn le(l: &str, r: &str, at: usize) -> Goal {
        Goal { lhs: p(l), rhs: p(r), relation: Relation::Le, steps: vec![at] }
    }

    #[test]
    fn accepts_small_proof() {
        // a.0 [] 0 ≤ a.0 [] 0 \/ b.0 by EC4 then DI5.
        let t = ProofTrace {
            steps: vec![
                step(Rule::Axiom(Axiom::EC4), &[("x", p("a.0").into())], "a.0 [] 0", "a.0"),
                step(
                    Rule::Axiom(Axiom::DI5),
                    &[("x", p("a.0").into()), ("y", p("b.0").into())],
                    "a.0",
                    "a.0 \\/ b.0",
                ),
                step(Rule::Trans(0, 1), &[], "a.0 [] 0", "a.0 \\/ b.0"),
            ],
            goal: le("a.0 [] 0", "a.0 \\/ b.0", 2),
        };
        validate_trace(&t).unwrap();
        assert!(t.to_text().contains("STEP 3: TRANS(1,2) ⊢ a.0 [] 0 ≤ a.0 \\/ b.0"));
        assert_eq!(t.to_json()["steps"][2]["premises"], json!([1, 2]));
    }

    #[test]
    fn equations_run_both_ways_inequations_do_not() {
        let b = [("x", p("a.0").into()), ("y", p("b.0").into())];
        let ok = ProofTrace {
            steps: vec![step(Rule::Axiom(Axiom::DI1), &b, "b.0 \\/ a.0", "a.0 \\/ b.0")],
            goal: le("b.0 \\/ a.0", "a.0 \\/ b.0", 0),
        };
        validate_trace(&ok).unwrap();
        let wrong = ProofTrace {
            steps: vec![step(Rule::Axiom(Axiom::DI5), &b, "a.0 \\/ b.0", "a.0")],
            goal: le("a.0 \\/ b.0", "a.0", 0),
        };
        assert_eq!(validate_trace(&wrong).unwrap_err().step, Some(0));
    }

    #[test]
    fn ds4_with_non_basic_arguments_is_rejected() {
        let b = [
            ("a", Binding::Action(Action::visible("a"))),
            ("x", p("bot").into()),
            ("y", p("0").into()),
        ];
        let t = ProofTrace {
            steps: vec![step(Rule::Axiom(Axiom::DS4), &b, "a.(bot \\/ 0)", "a.bot [] a.0")],
            goal: le("a.(bot \\/ 0)", "a.bot [] a.0", 0),
        };
        let e = validate_trace(&t).unwrap_err();
        assert!(e.reason.contains("basic"), "{e}");
    }

    #[test]
    fn ecc3_on_non_injective_choice_is_rejected() {
        let a = Binding::Action(Action::visible("a"));
        let b = [
            ("a0", a.clone()),
            ("x0", p("0").into()),
            ("a1", a),
            ("x1", p("b.0").into()),
            ("y0", p("0").into()),
            ("y1", p("0").into()),
        ];
        let t = ProofTrace {
            steps: vec![step(
                Rule::Axiom(Axiom::ECC3),
                &b,
                "(a.0 [] a.b.0) /\\ (a.0 [] a.0)",
                "a.(0 /\\ 0) [] a.(b.0 /\\ 0)",
            )],
            goal: le("(a.0 [] a.b.0) /\\ (a.0 [] a.0)", "a.(0 /\\ 0) [] a.(b.0 /\\ 0)", 0),
        };
        assert!(validate_trace(&t).unwrap_err().reason.contains("injective"));
    }

    #[test]
    fn structural_rules_are_checked() {
        let x = [("x", p("a.0").into())];
        let base = step(Rule::Axiom(Axiom::EC4), &x, "a.0 [] 0", "a.0");
        let good = ProofTrace {
            steps: vec![base.clone(), step(Rule::Context(vec![0]), &[], "b.(a.0 [] 0)", "b.a.0")],
            goal: le("b.(a.0 [] 0)", "b.a.0", 1),
        };
        validate_trace(&good).unwrap();

        let wrong_head = ProofTrace {
            steps: vec![base.clone(), step(Rule::Context(vec![0]), &[], "b.(a.0 [] 0)", "c.a.0")],
            goal: le("b.(a.0 [] 0)", "c.a.0", 1),
        };
        assert!(validate_trace(&wrong_head).is_err());

        let forward_ref = ProofTrace {
            steps: vec![step(Rule::Trans(0, 1), &[], "a.0 [] 0", "a.0"), base.clone()],
            goal: le("a.0 [] 0", "a.0", 0),
        };
        assert_eq!(validate_trace(&forward_ref).unwrap_err().step, Some(0));

        let bad_ref = ProofTrace {
            steps: vec![step(Rule::Ref, &[], "a.0", "b.0")],
            goal: le("a.0", "b.0", 0),
        };
        assert!(validate_trace(&bad_ref).is_err());

        let bad_goal = ProofTrace { steps: vec![base], goal: le("a.0", "a.0 [] 0", 0) };
        assert_eq!(validate_trace(&bad_goal).unwrap_err().step, None);
    }
}
