//! Concrete syntax for process terms and formulas.
//!
//! Terms: `0`, `a.P`, `a!.P` (executed prefix), `P + Q`, parentheses.
//! `.` binds tighter than `+`, and `+` associates to the left.
//!
//! Formulas: `tt`, `init`, `~f`, `f & g`, `<a>f`, `<a!>f`, `<<tau>>f`,
//! `<<a>>f`, `<<tau!>>f`, `<<a!>>f` and `until(f, a, g)`. Prefix operators
//! bind tighter than `&`, which associates to the left.
//!
//! Rendering (`Display`) produces the canonical text, which parses back to
//! the same tree.

use std::fmt;

use thiserror::Error;

use crate::logic::Formula;
use crate::term::{is_action_token, Action, ProcessTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    /// 0-based byte offset into the input.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Dot,
    Bang,
    Plus,
    Amp,
    Tilde,
    Comma,
    LParen,
    RParen,
    Lt,
    Gt,
    LtLt,
    GtGt,
    Eof,
}

impl Tok {
    fn lexeme(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::LtLt => "`<<`".into(),
            Tok::GtGt => "`>>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'.' => Tok::Dot,
            b'!' => Tok::Bang,
            b'+' => Tok::Plus,
            b'&' => Tok::Amp,
            b'~' => Tok::Tilde,
            b',' => Tok::Comma,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0' => Tok::Zero,
            b'<' if bytes.get(i + 1) == Some(&b'<') => {
                i += 1;
                Tok::LtLt
            }
            b'>' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::GtGt
            }
            b'<' => Tok::Lt,
            b'>' => Tok::Gt,
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let ident = text[i..j].to_string();
                i = j;
                out.push((start, Tok::Ident(ident)));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    position: i,
                    expected: "a token".into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.offset(),
            expected: expected.to_string(),
            found: self.peek().lexeme(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn action(&mut self) -> Result<Action, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if is_action_token(&name) => {
                self.bump();
                Ok(Action::new(&name).expect("lexer only yields valid tokens"))
            }
            _ => Err(self.error("an action name")),
        }
    }

    // term := unit ('+' unit)*
    fn term(&mut self) -> Result<ProcessTerm, ParseError> {
        let mut acc = self.unit()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.unit()?;
            acc = ProcessTerm::choice(acc, rhs);
        }
        Ok(acc)
    }

    // unit := '0' | '(' term ')' | action ['!'] '.' unit
    fn unit(&mut self) -> Result<ProcessTerm, ParseError> {
        match self.peek() {
            Tok::Zero => {
                self.bump();
                Ok(ProcessTerm::Nil)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(_) => {
                let a = self.action()?;
                let executed = if *self.peek() == Tok::Bang {
                    self.bump();
                    true
                } else {
                    false
                };
                self.expect(Tok::Dot, "`.`")?;
                let cont = self.unit()?;
                Ok(if executed {
                    ProcessTerm::exec(a, cont)
                } else {
                    ProcessTerm::prefix(a, cont)
                })
            }
            _ => Err(self.error("`0`, `(` or an action prefix")),
        }
    }

    // formula := unary ('&' unary)*
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn modality_action(&mut self) -> Result<(Action, bool), ParseError> {
        let a = self.action()?;
        let back = if *self.peek() == Tok::Bang {
            self.bump();
            true
        } else {
            false
        };
        Ok((a, back))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let (a, back) = self.modality_action()?;
                self.expect(Tok::Gt, "`>`")?;
                let body = self.unary()?;
                Ok(if back {
                    Formula::BackDiamond(a, Box::new(body))
                } else {
                    Formula::StrongDiamond(a, Box::new(body))
                })
            }
            Tok::LtLt => {
                self.bump();
                let (a, back) = self.modality_action()?;
                self.expect(Tok::GtGt, "`>>`")?;
                let body = Box::new(self.unary()?);
                Ok(match (a.is_tau(), back) {
                    (true, false) => Formula::WeakTauDiamond(body),
                    (true, true) => Formula::WeakBackTauDiamond(body),
                    (false, false) => Formula::WeakDiamond(a, body),
                    (false, true) => Formula::WeakBackDiamond(a, body),
                })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "tt" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "init" => {
                    self.bump();
                    Ok(Formula::Init)
                }
                "until" if *self.peek_at(1) == Tok::LParen => {
                    self.bump();
                    self.bump();
                    let lhs = self.formula()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let a = self.action()?;
                    self.expect(Tok::Comma, "`,`")?;
                    let rhs = self.formula()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Formula::Until(Box::new(lhs), a, Box::new(rhs)))
                }
                _ => Err(self.error("a formula")),
            },
            _ => Err(self.error("a formula")),
        }
    }
}

/// Parses a process term. The result is not checked for reachability.
pub fn parse_term(text: &str) -> Result<ProcessTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Canonical text of a term.
pub fn render_term(p: &ProcessTerm) -> String {
    p.to_string()
}

pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}

fn fmt_unit(p: &ProcessTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if matches!(p, ProcessTerm::Choice(..)) {
        write!(f, "({p})")
    } else {
        write!(f, "{p}")
    }
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProcessTerm::Nil => f.write_str("0"),
            ProcessTerm::Prefix(a, p) => {
                write!(f, "{a}.")?;
                fmt_unit(p, f)
            }
            ProcessTerm::ExecPrefix(a, p) => {
                write!(f, "{a}!.")?;
                fmt_unit(p, f)
            }
            ProcessTerm::Choice(l, r) => {
                write!(f, "{l} + ")?;
                fmt_unit(r, f)
            }
        }
    }
}

fn fmt_operand(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if matches!(g, Formula::And(..)) {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("tt"),
            Formula::Init => f.write_str("init"),
            Formula::Not(g) => {
                f.write_str("~")?;
                fmt_operand(g, f)
            }
            Formula::And(l, r) => {
                write!(f, "{l} & ")?;
                fmt_operand(r, f)
            }
            Formula::StrongDiamond(a, g) => {
                write!(f, "<{a}>")?;
                fmt_operand(g, f)
            }
            Formula::BackDiamond(a, g) => {
                write!(f, "<{a}!>")?;
                fmt_operand(g, f)
            }
            Formula::WeakTauDiamond(g) => {
                f.write_str("<<tau>>")?;
                fmt_operand(g, f)
            }
            Formula::WeakDiamond(a, g) => {
                write!(f, "<<{a}>>")?;
                fmt_operand(g, f)
            }
            Formula::WeakBackTauDiamond(g) => {
                f.write_str("<<tau!>>")?;
                fmt_operand(g, f)
            }
            Formula::WeakBackDiamond(a, g) => {
                write!(f, "<<{a}!>>")?;
                fmt_operand(g, f)
            }
            Formula::Until(l, a, r) => write!(f, "until({l}, {a}, {r})"),
        }
    }
}

impl std::str::FromStr for ProcessTerm {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act(s: &str) -> Action {
        Action::new(s).unwrap()
    }

    #[test]
    fn parses_choice_of_prefixes() {
        let a0 = ProcessTerm::prefix(act("a"), ProcessTerm::Nil);
        assert_eq!(parse_term("a.0 + a.0").unwrap(), ProcessTerm::choice(a0.clone(), a0));
    }

    #[test]
    fn parses_executed_prefix() {
        let expected = ProcessTerm::exec(act("a"), ProcessTerm::prefix(act("b"), ProcessTerm::Nil));
        assert_eq!(parse_term("a!.b.0").unwrap(), expected);
    }

    #[test]
    fn unbalanced_parenthesis() {
        let err = parse_term("a.(b.0").unwrap_err();
        assert_eq!(err.position, 6);
        assert_eq!(err.expected, "`)`");
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn term_errors() {
        assert_eq!(parse_term("").unwrap_err().position, 0);
        assert_eq!(parse_term("a").unwrap_err().position, 1);
        assert_eq!(parse_term("a.0 +").unwrap_err().position, 5);
        assert_eq!(parse_term("a.0 b").unwrap_err().position, 4);
        assert_eq!(parse_term("A.0").unwrap_err().position, 0);
        assert_eq!(parse_term("a.0 $").unwrap_err().found, "`$`");
    }

    #[test]
    fn dot_binds_tighter_than_plus_and_plus_is_left_assoc() {
        let t = parse_term("a.b.0 + c.0 + d.0").unwrap();
        match t {
            ProcessTerm::Choice(l, r) => {
                assert_eq!(*r, parse_term("d.0").unwrap());
                assert!(matches!(*l, ProcessTerm::Choice(..)));
            }
            _ => panic!("expected a choice"),
        }
        assert_eq!(parse_term("a.(b.0 + c.0)").unwrap().to_string(), "a.(b.0 + c.0)");
    }

    #[test]
    fn renders_canonically() {
        assert_eq!(render_term(&ProcessTerm::Nil), "0");
        assert_eq!(render_term(&parse_term("a!.b.0").unwrap()), "a!.b.0");
        let t = ProcessTerm::choice(ProcessTerm::prefix(act("a"), ProcessTerm::Nil), ProcessTerm::Nil);
        assert_eq!(render_term(&t), "a.0 + 0");
        let right_nested = parse_term("a.0 + (b.0 + c.0)").unwrap();
        assert_eq!(render_term(&right_nested), "a.0 + (b.0 + c.0)");
        assert_eq!(render_term(&parse_term(" ( a.0 )+b . 0 ").unwrap()), "a.0 + b.0");
    }

    #[test]
    fn parses_formulas() {
        assert_eq!(
            parse_formula("<a>tt").unwrap(),
            Formula::StrongDiamond(act("a"), Box::new(Formula::True))
        );
        assert_eq!(
            parse_formula("<a!><c>tt").unwrap(),
            Formula::BackDiamond(
                act("a"),
                Box::new(Formula::StrongDiamond(act("c"), Box::new(Formula::True)))
            )
        );
        assert_eq!(
            parse_formula("~(init & <<tau>>tt)").unwrap(),
            Formula::not(Formula::and(Formula::Init, Formula::WeakTauDiamond(Box::new(Formula::True))))
        );
        assert_eq!(
            parse_formula("<a>tt & init").unwrap(),
            Formula::and(Formula::StrongDiamond(act("a"), Box::new(Formula::True)), Formula::Init)
        );
        assert!(matches!(parse_formula("<<tau!>>tt").unwrap(), Formula::WeakBackTauDiamond(_)));
        assert!(matches!(parse_formula("<<b!>>tt").unwrap(), Formula::WeakBackDiamond(..)));
        assert!(matches!(parse_formula("<tau>tt").unwrap(), Formula::StrongDiamond(..)));
        assert!(matches!(parse_formula("<tau!>tt").unwrap(), Formula::BackDiamond(..)));
        assert!(matches!(parse_formula("until(tt, a, init)").unwrap(), Formula::Until(..)));
    }

    #[test]
    fn formula_errors() {
        assert!(parse_formula("").is_err());
        assert!(parse_formula("<a>").is_err());
        assert!(parse_formula("<a tt").is_err());
        assert!(parse_formula("tt &").is_err());
        assert!(parse_formula("until(tt, a)").is_err());
        assert!(parse_formula("foo").is_err());
        assert_eq!(parse_formula("tt tt").unwrap_err().position, 3);
    }

    #[test]
    fn renders_formulas() {
        for text in [
            "tt",
            "~<a!>tt",
            "<a>tt & init",
            "<a>(tt & init)",
            "~(init & <<tau>>tt)",
            "tt & (init & tt)",
            "until(<a>tt & init, tau, ~tt)",
            "<<b!>><<tau!>><tau!>tt",
        ] {
            assert_eq!(parse_formula(text).unwrap().to_string(), text);
        }
    }
}
