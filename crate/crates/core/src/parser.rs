//! Concrete syntax.
//!
//! ```text
//! term := disj
//! disj := ext  { "\/" ext }
//! ext  := par  { "[]" par }
//! par  := conj { "|[" [ident {"," ident}] "]|" conj }
//! conj := pre  { "/\" pre }
//! pre  := (ident | "tau") "." pre | atom
//! atom := "0" | "bot" | "(" term ")"
//! ```
//!
//! The unicode operators `□ ∧ ∨ ⊥ τ` are accepted as aliases.

use std::fmt;

use thiserror::Error;

use crate::term::{Action, Name, SyncSet, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: unexpected {found}, expected one of: {}", expected.join(" "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Zero,
    Bot,
    Tau,
    Ident(String),
    Dot,
    Ext,
    Conj,
    Disj,
    ParOpen,
    ParClose,
    Comma,
    LParen,
    RParen,
    Eof,
    Bad(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Zero => f.write_str("`0`"),
            Tok::Bot => f.write_str("`bot`"),
            Tok::Tau => f.write_str("`tau`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Ext => f.write_str("`[]`"),
            Tok::Conj => f.write_str("`/\\`"),
            Tok::Disj => f.write_str("`\\/`"),
            Tok::ParOpen => f.write_str("`|[`"),
            Tok::ParClose => f.write_str("`]|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
            Tok::Bad(c) => write!(f, "character `{c}`"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Vec<Spanned> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('[', Some(']')) => (Tok::Ext, 2),
            ('/', Some('\\')) => (Tok::Conj, 2),
            ('\\', Some('/')) => (Tok::Disj, 2),
            ('|', Some('[')) => (Tok::ParOpen, 2),
            (']', Some('|')) => (Tok::ParClose, 2),
            ('.', _) => (Tok::Dot, 1),
            (',', _) => (Tok::Comma, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('□', _) => (Tok::Ext, 1),
            ('∧', _) => (Tok::Conj, 1),
            ('∨', _) => (Tok::Disj, 1),
            ('⊥', _) => (Tok::Bot, 1),
            ('τ', _) => (Tok::Tau, 1),
            _ if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[start..j].iter().collect();
                let tok = match word.as_str() {
                    "0" => Tok::Zero,
                    "bot" => Tok::Bot,
                    "tau" => Tok::Tau,
                    _ if c.is_ascii_digit() => Tok::Bad(c),
                    _ => Tok::Ident(word),
                };
                let w = if matches!(tok, Tok::Bad(_)) { 1 } else { j - start };
                (tok, w)
            }
            _ => (Tok::Bad(c), 1),
        };
        out.push(Spanned { tok, line, column: col });
        i += width;
        col += width;
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const ATOM_START: &[&str] = &["0", "bot", "tau", "identifier", "("];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            found: s.tok.to_string(),
            expected: expected.iter().map(|e| e.to_string()).collect(),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut t = self.ext()?;
        while *self.peek() == Tok::Disj {
            self.bump();
            t = Term::disj(t, self.ext()?);
        }
        Ok(t)
    }

    fn ext(&mut self) -> Result<Term, ParseError> {
        let mut t = self.par()?;
        while *self.peek() == Tok::Ext {
            self.bump();
            t = Term::ext(t, self.par()?);
        }
        Ok(t)
    }

    fn par(&mut self) -> Result<Term, ParseError> {
        let mut t = self.conj()?;
        while *self.peek() == Tok::ParOpen {
            self.bump();
            let sync = self.sync_set()?;
            t = Term::par(t, self.conj()?, sync);
        }
        Ok(t)
    }

    fn sync_set(&mut self) -> Result<SyncSet, ParseError> {
        let mut set = SyncSet::new();
        if *self.peek() == Tok::ParClose {
            self.bump();
            return Ok(set);
        }
        loop {
            match self.peek().clone() {
                Tok::Ident(n) => {
                    self.bump();
                    set.insert(Name::new(&n));
                }
                _ => return Err(self.error(&["identifier"])),
            }
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::ParClose => {
                    self.bump();
                    return Ok(set);
                }
                _ => return Err(self.error(&[",", "]|"])),
            }
        }
    }

    fn conj(&mut self) -> Result<Term, ParseError> {
        let mut t = self.pre()?;
        while *self.peek() == Tok::Conj {
            self.bump();
            t = Term::conj(t, self.pre()?);
        }
        Ok(t)
    }

    fn pre(&mut self) -> Result<Term, ParseError> {
        let action = match self.peek() {
            Tok::Tau => Action::Tau,
            Tok::Ident(n) => Action::visible(n),
            _ => return self.atom(),
        };
        self.bump();
        if *self.peek() != Tok::Dot {
            return Err(self.error(&["."]));
        }
        self.bump();
        Ok(Term::prefix(action, self.pre()?))
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Nil)
            }
            Tok::Bot => {
                self.bump();
                Ok(Term::Bot)
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["\\/", "[]", "|[", "/\\", ")"]));
                }
                self.bump();
                Ok(t)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

/// Parse a term from its concrete syntax.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(src), pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["\\/", "[]", "|[", "/\\", "end of input"]));
    }
    Ok(t)
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn prefix_binds_tighter_than_choice() {
        assert_eq!(
            p("a.bot [] a.0"),
            Term::ext(Term::act("a", Term::Bot), Term::act("a", Term::Nil))
        );
    }

    #[test]
    fn precedence_ladder() {
        let a = Term::act("a", Term::Nil);
        let b = Term::act("b", Term::Nil);
        assert_eq!(p("a.0 /\\ b.0 [] 0"), Term::ext(Term::conj(a.clone(), b.clone()), Term::Nil));
        assert_eq!(
            p("a.0 \\/ b.0 [] 0"),
            Term::disj(a.clone(), Term::ext(b.clone(), Term::Nil))
        );
        let sync: SyncSet = ["a"].into_iter().collect();
        assert_eq!(
            p("a.0 |[a]| b.0 /\\ 0"),
            Term::par(a.clone(), Term::conj(b.clone(), Term::Nil), sync.clone())
        );
        assert_eq!(p("a.0 |[a]| b.0 [] 0"), Term::ext(Term::par(a, b, sync), Term::Nil));
    }

    #[test]
    fn left_associative() {
        assert_eq!(
            p("0 \\/ bot \\/ 0"),
            Term::disj(Term::disj(Term::Nil, Term::Bot), Term::Nil)
        );
    }

    #[test]
    fn tau_and_unicode() {
        assert_eq!(p("tau.0"), Term::tau(Term::Nil));
        assert_eq!(p("τ.a.⊥ □ 0"), p("tau.a.bot [] 0"));
        assert_eq!(p("a.0 ∧ b.0 ∨ 0"), p("a.0 /\\ b.0 \\/ 0"));
    }

    #[test]
    fn empty_and_multi_sync_sets() {
        assert_eq!(p("0 |[]| 0"), Term::par(Term::Nil, Term::Nil, SyncSet::new()));
        let t = p("0 |[b, a]| 0");
        assert_eq!(t.to_string(), "0 |[a,b]| 0");
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let e = parse("a.0 [] \n  b.").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(e.expected.contains(&"(".to_string()));
        let e = parse("a 0").unwrap_err();
        assert_eq!(e.expected, vec!["."]);
        let e = parse("(0").unwrap_err();
        assert!(e.expected.contains(&")".to_string()));
        assert!(parse("0 0").is_err());
        assert!(parse("tau").is_err());
        assert!(parse("1").is_err());
        assert!(parse("a.0 |[a,]| 0").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn reserved_words_are_not_actions() {
        assert!(parse("bot.0").is_err());
        assert!(parse("0 |[tau]| 0").is_err());
    }
}
