//! Text syntax for formulas and sequents.
//!
//! Grammar:
//! ```text
//! formula := impl
//! impl    := unary ("->" impl)?                       (right-assoc)
//! unary   := "box" unary | "~" unary | atom
//! atom    := "bot" | "top" | IDENT | "$" IDENT
//!          | "(" formula ("*" formula)? ")"
//!          | "fp" "$" IDENT "." formula
//! sequent := formulas "=>" formulas ; formulas := (formula ("," formula)*)?
//! ```
//! `~`, `top` and `*` are parse-time sugar; the printer emits core
//! constructors only, so printed identity coincides with graphic identity.

use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, F};
use crate::sequent::Sequent;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(usize),
    Dollar,
    Dot,
    Comma,
    Semi,
    Star,
    Tilde,
    Arrow,
    FatArrow,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Dollar => write!(f, "`$`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::FatArrow => write!(f, "`=>`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
        }
    }
}

pub fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '$' => {
                toks.push((Tok::Dollar, i));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            ';' => {
                toks.push((Tok::Semi, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '~' => {
                toks.push((Tok::Tilde, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(ParseError {
                        pos: i,
                        msg: "expected `->`".into(),
                    });
                }
            }
            '=' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::FatArrow, i));
                    i += 2;
                } else {
                    return Err(ParseError {
                        pos: i,
                        msg: "expected `=>`".into(),
                    });
                }
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: usize = input[start..i].parse().map_err(|_| ParseError {
                    pos: start,
                    msg: "number out of range".into(),
                })?;
                toks.push((Tok::Num(n), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let b = bytes[i] as char;
                    if b.is_ascii_alphanumeric() || b == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(input[start..i].to_string()), start));
            }
            other => {
                return Err(ParseError {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

/// Cursor over a token stream; shared by the formula, sequent, proof-file
/// and APS parsers.
pub struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pub pos: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [(Tok, usize)], input_len: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            end: input_len,
        }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    pub fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        if self.eat(want) {
            Ok(())
        } else {
            Err(self.error(format!("expected {want}")))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected identifier".into())),
        }
    }

    pub fn expect_num(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected number".into())),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn error(&self, msg: String) -> ParseError {
        ParseError {
            pos: self.here(),
            msg,
        }
    }
}

const KEYWORDS: [&str; 4] = ["bot", "top", "box", "fp"];

pub fn parse_formula_at(cur: &mut Cursor) -> Result<F, ParseError> {
    parse_impl(cur)
}

fn parse_impl(cur: &mut Cursor) -> Result<F, ParseError> {
    let lhs = parse_unary(cur)?;
    if cur.eat(&Tok::Arrow) {
        let rhs = parse_impl(cur)?;
        Ok(Formula::imp(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn parse_unary(cur: &mut Cursor) -> Result<F, ParseError> {
    match cur.peek() {
        Some(Tok::Ident(s)) if s == "box" => {
            cur.pos += 1;
            Ok(Formula::boxed(parse_unary(cur)?))
        }
        Some(Tok::Tilde) => {
            cur.pos += 1;
            Ok(Formula::neg(parse_unary(cur)?))
        }
        _ => parse_atom(cur),
    }
}

fn parse_atom(cur: &mut Cursor) -> Result<F, ParseError> {
    let at = cur.here();
    match cur.next() {
        Some(Tok::Ident(s)) if s == "bot" => Ok(Formula::bot()),
        Some(Tok::Ident(s)) if s == "top" => Ok(Formula::top()),
        Some(Tok::Ident(s)) if s == "fp" => {
            cur.expect(&Tok::Dollar)?;
            let var = cur.expect_ident()?;
            cur.expect(&Tok::Dot)?;
            let body = parse_impl(cur)?;
            Formula::fp(var, body).map_err(|e| ParseError {
                pos: at,
                msg: e.to_string(),
            })
        }
        Some(Tok::Ident(s)) => {
            if KEYWORDS.contains(&s.as_str()) {
                Err(ParseError {
                    pos: at,
                    msg: format!("keyword `{s}` cannot be an atom"),
                })
            } else {
                Ok(Formula::atom(s))
            }
        }
        Some(Tok::Dollar) => {
            let name = cur.expect_ident()?;
            if KEYWORDS.contains(&name.as_str()) {
                return Err(ParseError {
                    pos: at,
                    msg: format!("keyword `{name}` cannot be a variable"),
                });
            }
            Ok(Formula::var(name))
        }
        Some(Tok::LParen) => {
            let a = parse_impl(cur)?;
            if cur.eat(&Tok::Star) {
                let b = parse_impl(cur)?;
                cur.expect(&Tok::RParen)?;
                Ok(Formula::conj(a, b))
            } else {
                cur.expect(&Tok::RParen)?;
                Ok(a)
            }
        }
        _ => Err(ParseError {
            pos: at,
            msg: "expected formula".into(),
        }),
    }
}

/// Comma-separated formulas, ending at `=>`, `)` or end of input.
pub fn parse_formula_list(cur: &mut Cursor) -> Result<Vec<F>, ParseError> {
    let mut out = Vec::new();
    match cur.peek() {
        None | Some(Tok::FatArrow) | Some(Tok::RParen) => return Ok(out),
        _ => {}
    }
    loop {
        out.push(parse_impl(cur)?);
        if !cur.eat(&Tok::Comma) {
            break;
        }
    }
    Ok(out)
}

pub fn parse_formula(input: &str) -> Result<F, ParseError> {
    let toks = lex(input)?;
    let mut cur = Cursor::new(&toks, input.len());
    let f = parse_formula_at(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after formula".into()));
    }
    Ok(f)
}

/// Comma-separated closed formulas; the empty string is the empty list.
pub fn parse_formula_csv(input: &str) -> Result<Vec<F>, ParseError> {
    let toks = lex(input)?;
    let mut cur = Cursor::new(&toks, input.len());
    let list = parse_formula_list(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after formula list".into()));
    }
    for f in &list {
        if !f.is_closed() {
            return Err(ParseError {
                pos: 0,
                msg: format!("formula `{f}` is not closed"),
            });
        }
    }
    Ok(list)
}

pub fn parse_sequent(input: &str) -> Result<Sequent, ParseError> {
    let toks = lex(input)?;
    let mut cur = Cursor::new(&toks, input.len());
    let ante = parse_formula_list(&mut cur)?;
    cur.expect(&Tok::FatArrow)?;
    let succ = parse_formula_list(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after sequent".into()));
    }
    let seq = Sequent::new(ante, succ);
    if let Some(f) = seq.first_open_formula() {
        return Err(ParseError {
            pos: 0,
            msg: format!("sequent formula `{f}` is not closed"),
        });
    }
    Ok(seq)
}
