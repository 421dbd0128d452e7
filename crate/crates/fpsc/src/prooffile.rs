//! Parenthesized text format for proofs, one node per parenthesis group:
//!
//! ```text
//! node  := "(" TAG seq roles premise* ")"
//! seq   := "(seq (" formulas ") (" formulas "))"
//! roles := "(ax I J)" | "(bot I)" | "(prin I)"
//!        | "(prin I (lsplit I*) (rsplit I*))"
//!        | "(prin I (sigma I*) (pi I*))"
//!        | "(ctr I J)" | "(cut I J)"
//! ```
//! Indices are 0-based positions into the conclusion's antecedent/succedent
//! lists (left indices for antecedent, right for succedent; `ax I J` is
//! antecedent I, succedent J). `ctr I J` names the two contracted
//! occurrences in the premise antecedent and `cut I J` the cut occurrence in
//! the left premise succedent and right premise antecedent, since those
//! formulas do not occur in the conclusion.

use std::fmt::Write as _;

use crate::parse::{lex, parse_formula_list, Cursor, ParseError, Tok};
use crate::proof::{Proof, RuleApp};
use crate::sequent::Sequent;

pub fn proof_to_text(proof: &Proof) -> String {
    let mut out = String::new();
    write_node(proof, 0, &mut out);
    out.push('\n');
    out
}

fn write_node(p: &Proof, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let _ = write!(out, "{pad}({} {} {}", p.rule.tag(), seq_text(&p.conclusion), roles_text(&p.rule));
    if p.premises.is_empty() {
        out.push(')');
        return;
    }
    for q in &p.premises {
        out.push('\n');
        write_node(q, indent + 1, out);
    }
    out.push(')');
}

fn seq_text(s: &Sequent) -> String {
    let side = |v: &[crate::formula::F]| {
        v.iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!("(seq ({}) ({}))", side(&s.ante), side(&s.succ))
}

fn roles_text(rule: &RuleApp) -> String {
    let idxs = |v: &[usize]| {
        v.iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    match rule {
        RuleApp::Init { ante, succ } => format!("(ax {ante} {succ})"),
        RuleApp::BotInit { ante } => format!("(bot {ante})"),
        RuleApp::FixL { prin } | RuleApp::FixR { prin } | RuleApp::ImpR { prin } => {
            format!("(prin {prin})")
        }
        RuleApp::ImpL { prin, lsplit, rsplit } => {
            format!("(prin {prin} (lsplit {}) (rsplit {}))", idxs(lsplit), idxs(rsplit))
                .replace("( ", "(")
                .replace(" )", ")")
        }
        RuleApp::BoxRule { prin, sigma, pi } => {
            format!("(prin {prin} (sigma {}) (pi {}))", idxs(sigma), idxs(pi))
                .replace("( ", "(")
                .replace(" )", ")")
        }
        RuleApp::CtrL { first, second } => format!("(ctr {first} {second})"),
        RuleApp::Cut { left, right } => format!("(cut {left} {right})"),
    }
}

pub fn proof_from_text(input: &str) -> Result<Proof, ParseError> {
    let toks = lex(input)?;
    let mut cur = Cursor::new(&toks, input.len());
    let p = parse_node(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after proof".into()));
    }
    if let Some(f) = p.conclusion.first_open_formula() {
        return Err(ParseError {
            pos: 0,
            msg: format!("proof conclusion contains the open formula `{f}`"),
        });
    }
    Ok(p)
}

fn parse_node(cur: &mut Cursor) -> Result<Proof, ParseError> {
    cur.expect(&Tok::LParen)?;
    let tag = cur.expect_ident()?;
    let conclusion = parse_seq(cur)?;
    let rule = parse_roles(cur, &tag)?;
    let mut premises = Vec::new();
    while cur.peek() == Some(&Tok::LParen) {
        premises.push(parse_node(cur)?);
    }
    cur.expect(&Tok::RParen)?;
    Ok(Proof { conclusion, rule, premises })
}

fn parse_seq(cur: &mut Cursor) -> Result<Sequent, ParseError> {
    cur.expect(&Tok::LParen)?;
    let kw = cur.expect_ident()?;
    if kw != "seq" {
        return Err(cur.error(format!("expected `seq`, found `{kw}`")));
    }
    cur.expect(&Tok::LParen)?;
    let ante = parse_formula_list(cur)?;
    cur.expect(&Tok::RParen)?;
    cur.expect(&Tok::LParen)?;
    let succ = parse_formula_list(cur)?;
    cur.expect(&Tok::RParen)?;
    cur.expect(&Tok::RParen)?;
    Ok(Sequent::new(ante, succ))
}

fn parse_roles(cur: &mut Cursor, tag: &str) -> Result<RuleApp, ParseError> {
    cur.expect(&Tok::LParen)?;
    let kind = cur.expect_ident()?;
    let rule = match (tag, kind.as_str()) {
        ("Init", "ax") => {
            let i = cur.expect_num()?;
            let j = cur.expect_num()?;
            RuleApp::Init { ante: i, succ: j }
        }
        ("BotInit", "bot") => RuleApp::BotInit { ante: cur.expect_num()? },
        ("FixL", "prin") => RuleApp::FixL { prin: cur.expect_num()? },
        ("FixR", "prin") => RuleApp::FixR { prin: cur.expect_num()? },
        ("ImpR", "prin") => RuleApp::ImpR { prin: cur.expect_num()? },
        ("ImpL", "prin") => {
            let prin = cur.expect_num()?;
            let lsplit = parse_index_group(cur, "lsplit")?;
            let rsplit = parse_index_group(cur, "rsplit")?;
            RuleApp::ImpL { prin, lsplit, rsplit }
        }
        ("BoxRule", "prin") => {
            let prin = cur.expect_num()?;
            let sigma = parse_index_group(cur, "sigma")?;
            let pi = parse_index_group(cur, "pi")?;
            RuleApp::BoxRule { prin, sigma, pi }
        }
        ("CtrL", "ctr") => {
            let first = cur.expect_num()?;
            let second = cur.expect_num()?;
            RuleApp::CtrL { first, second }
        }
        ("Cut", "cut") => {
            let left = cur.expect_num()?;
            let right = cur.expect_num()?;
            RuleApp::Cut { left, right }
        }
        _ => {
            return Err(cur.error(format!("rule tag `{tag}` does not take `{kind}` roles")));
        }
    };
    cur.expect(&Tok::RParen)?;
    Ok(rule)
}

fn parse_index_group(cur: &mut Cursor, name: &str) -> Result<Vec<usize>, ParseError> {
    cur.expect(&Tok::LParen)?;
    let kw = cur.expect_ident()?;
    if kw != name {
        return Err(cur.error(format!("expected `{name}`, found `{kw}`")));
    }
    let mut out = Vec::new();
    while let Some(Tok::Num(n)) = cur.peek() {
        out.push(*n);
        cur.next();
    }
    cur.expect(&Tok::RParen)?;
    Ok(out)
}
