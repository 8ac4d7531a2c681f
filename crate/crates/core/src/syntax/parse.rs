use thiserror::Error;

use super::formula::{BinOp, Constant, Formula};
use super::structure::{Sequent, Structure};

/// Which optional pieces of the language are enabled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Language {
    pub bang: bool,
    pub zero: bool,
    pub top: bool,
    pub bot: bool,
}

impl Language {
    /// Everything enabled.
    pub const FULL: Language = Language { bang: true, zero: true, top: true, bot: true };

    /// Empty succedents come with the 0-rules.
    pub fn allows_empty_succedent(&self) -> bool {
        self.zero
    }

    pub fn allows_const(&self, c: Constant) -> bool {
        match c {
            Constant::One => true,
            Constant::Zero => self.zero,
            Constant::Top => self.top,
            Constant::Bot => self.bot,
        }
    }

    pub fn admits_formula(&self, f: &Formula) -> bool {
        match f {
            Formula::Var(_) => true,
            Formula::Const(c) => self.allows_const(*c),
            Formula::Bang(a) => self.bang && self.admits_formula(a),
            Formula::Bin(_, l, r) => self.admits_formula(l) && self.admits_formula(r),
        }
    }

    pub fn admits_sequent(&self, s: &Sequent) -> bool {
        s.antecedent.is_unit_normal()
            && s.formulas().all(|f| self.admits_formula(f))
            && (s.succedent.is_some() || self.allows_empty_succedent())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    One,
    Zero,
    Top,
    Bot,
    Eps,
    Bang,
    Tilde,
    Minus,
    Star,
    Bsl,
    Sl,
    And,
    Or,
    LParen,
    RParen,
    Comma,
    Arrow,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((
                    match word {
                        "eps" => Tok::Eps,
                        "top" => Tok::Top,
                        "bot" => Tok::Bot,
                        _ => Tok::Var(word.to_string()),
                    },
                    start,
                ));
                continue;
            }
            b'/' if two(b"/\\") => {
                i += 2;
                Tok::And
            }
            b'\\' if two(b"\\/") => {
                i += 2;
                Tok::Or
            }
            b'=' if two(b"=>") => {
                i += 2;
                Tok::Arrow
            }
            b'1' => {
                i += 1;
                Tok::One
            }
            b'0' => {
                i += 1;
                Tok::Zero
            }
            b'!' => {
                i += 1;
                Tok::Bang
            }
            b'~' => {
                i += 1;
                Tok::Tilde
            }
            b'-' => {
                i += 1;
                Tok::Minus
            }
            b'*' => {
                i += 1;
                Tok::Star
            }
            b'\\' => {
                i += 1;
                Tok::Bsl
            }
            b'/' => {
                i += 1;
                Tok::Sl
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b',' => {
                i += 1;
                Tok::Comma
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError { offset: start, message: format!("unexpected character {ch:?}") });
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    end: usize,
    lang: &'a Language,
}

type PResult<T> = Result<(T, usize), ParseError>;

impl Parser<'_> {
    fn peek(&self, pos: usize) -> Option<&Tok> {
        self.toks.get(pos).map(|(t, _)| t)
    }

    fn offset(&self, pos: usize) -> usize {
        self.toks.get(pos).map_or(self.end, |(_, o)| *o)
    }

    fn err<T>(&self, pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(pos), message: message.into() })
    }

    fn expect(&self, pos: usize, tok: Tok, what: &str) -> Result<usize, ParseError> {
        if self.peek(pos) == Some(&tok) {
            Ok(pos + 1)
        } else {
            self.err(pos, format!("expected {what}"))
        }
    }

    fn sequent(&self, pos: usize) -> PResult<Sequent> {
        let (antecedent, pos) = self.structure(pos)?;
        let pos = self.expect(pos, Tok::Arrow, "'=>'")?;
        if pos == self.toks.len() {
            if !self.lang.allows_empty_succedent() {
                return self.err(pos, "empty succedent requires the constant 0");
            }
            return Ok((Sequent::empty_succedent(antecedent), pos));
        }
        let (succ, pos) = self.formula(pos)?;
        Ok((Sequent::new(antecedent, succ), pos))
    }

    fn structure(&self, pos: usize) -> PResult<Structure> {
        match self.peek(pos) {
            Some(Tok::Eps) => Ok((Structure::Unit, pos + 1)),
            Some(Tok::LParen) => {
                if let Ok(found) = self.pair(pos) {
                    return Ok(found);
                }
                let (f, pos) = self.formula(pos)?;
                Ok((Structure::leaf(f), pos))
            }
            _ => {
                let (f, pos) = self.formula(pos)?;
                Ok((Structure::leaf(f), pos))
            }
        }
    }

    fn pair(&self, pos: usize) -> PResult<Structure> {
        let (l, pos) = self.structure(pos + 1)?;
        let pos = self.expect(pos, Tok::Comma, "','")?;
        let (r, pos) = self.structure(pos)?;
        let pos = self.expect(pos, Tok::RParen, "')'")?;
        Ok((Structure::pair(l, r), pos))
    }

    fn formula(&self, pos: usize) -> PResult<Formula> {
        self.level(pos, 0)
    }

    /// Binary levels, loosest first. Every level is non-associative: a
    /// second operator of the same level without parentheses is an error.
    fn level(&self, pos: usize, lvl: usize) -> PResult<Formula> {
        const LEVELS: [&[(Tok, BinOp)]; 4] = [
            &[(Tok::Or, BinOp::Or)],
            &[(Tok::And, BinOp::And)],
            &[(Tok::Bsl, BinOp::Lres), (Tok::Sl, BinOp::Rres)],
            &[(Tok::Star, BinOp::Fus)],
        ];
        if lvl == LEVELS.len() {
            return self.unary(pos);
        }
        let (left, pos) = self.level(pos, lvl + 1)?;
        let op_at = |p: usize| {
            self.peek(p).and_then(|t| LEVELS[lvl].iter().find(|(tok, _)| tok == t).map(|(_, op)| *op))
        };
        let Some(op) = op_at(pos) else {
            return Ok((left, pos));
        };
        let (right, next) = self.level(pos + 1, lvl + 1)?;
        if op_at(next).is_some() {
            return self.err(next, "ambiguous operator chain; add parentheses");
        }
        Ok((Formula::bin(op, left, right), next))
    }

    fn unary(&self, pos: usize) -> PResult<Formula> {
        match self.peek(pos) {
            Some(Tok::Bang) => {
                if !self.lang.bang {
                    return self.err(pos, "'!' is not enabled in this language");
                }
                let (a, pos) = self.unary(pos + 1)?;
                Ok((Formula::bang(a), pos))
            }
            Some(Tok::Tilde) | Some(Tok::Minus) => {
                if !self.lang.zero {
                    return self.err(pos, "negation sugar requires the constant 0");
                }
                let left = self.peek(pos) == Some(&Tok::Minus);
                let (a, pos) = self.unary(pos + 1)?;
                Ok((if left { Formula::neg_l(a) } else { Formula::neg_r(a) }, pos))
            }
            _ => self.atom(pos),
        }
    }

    fn atom(&self, pos: usize) -> PResult<Formula> {
        let constant = |c: Constant, name: &str| {
            if self.lang.allows_const(c) {
                Ok((Formula::Const(c), pos + 1))
            } else {
                self.err(pos, format!("constant {name} is not enabled in this language"))
            }
        };
        match self.peek(pos) {
            Some(Tok::Var(v)) => Ok((Formula::var(v), pos + 1)),
            Some(Tok::One) => Ok((Formula::one(), pos + 1)),
            Some(Tok::Zero) => constant(Constant::Zero, "0"),
            Some(Tok::Top) => constant(Constant::Top, "top"),
            Some(Tok::Bot) => constant(Constant::Bot, "bot"),
            Some(Tok::LParen) => {
                let (f, pos) = self.formula(pos + 1)?;
                let pos = self.expect(pos, Tok::RParen, "')'")?;
                Ok((f, pos))
            }
            Some(Tok::Eps) => self.err(pos, "'eps' is not a formula"),
            Some(_) => self.err(pos, "expected a formula"),
            None => self.err(pos, "unexpected end of input"),
        }
    }
}

fn run<T>(
    text: &str,
    lang: &Language,
    entry: impl Fn(&Parser<'_>, usize) -> PResult<T>,
) -> Result<T, ParseError> {
    let parser = Parser { toks: lex(text)?, end: text.len(), lang };
    let (value, pos) = entry(&parser, 0)?;
    if pos != parser.toks.len() {
        return parser.err(pos, "unexpected trailing input");
    }
    Ok(value)
}

pub fn parse_sequent(text: &str, lang: &Language) -> Result<Sequent, ParseError> {
    run(text, lang, |p, pos| p.sequent(pos))
}

pub fn parse_formula(text: &str, lang: &Language) -> Result<Formula, ParseError> {
    run(text, lang, |p, pos| p.formula(pos))
}

pub fn parse_structure(text: &str, lang: &Language) -> Result<Structure, ParseError> {
    run(text, lang, |p, pos| p.structure(pos))
}

pub fn format_sequent(s: &Sequent) -> String {
    s.to_string()
}
