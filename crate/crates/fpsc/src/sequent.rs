//! Sequents: pairs of finite multisets of closed formulas.
//!
//! Sides are stored as ordered lists so that rule annotations can designate
//! occurrences by index; multiset semantics is imposed at comparison time.

use std::fmt;

use crate::formula::F;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ante: Vec<F>,
    pub succ: Vec<F>,
}

impl Sequent {
    pub fn new(ante: Vec<F>, succ: Vec<F>) -> Self {
        Sequent { ante, succ }
    }

    pub fn first_open_formula(&self) -> Option<&F> {
        self.ante
            .iter()
            .chain(self.succ.iter())
            .find(|f| !f.is_closed())
    }

    /// Multiset equality on both sides.
    pub fn multiset_eq(&self, other: &Sequent) -> bool {
        multiset_eq(&self.ante, &other.ante) && multiset_eq(&self.succ, &other.succ)
    }

    /// Order-normalized copy, usable as a map key for multiset identity.
    pub fn canon(&self) -> Sequent {
        let mut ante = self.ante.clone();
        let mut succ = self.succ.clone();
        ante.sort();
        succ.sort();
        Sequent { ante, succ }
    }

    /// Total formula size over both sides.
    pub fn total_size(&self) -> usize {
        self.ante
            .iter()
            .chain(self.succ.iter())
            .map(|f| f.size())
            .sum()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.ante.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        if self.ante.is_empty() {
            write!(f, "=>")?;
        } else {
            write!(f, " =>")?;
        }
        for (k, s) in self.succ.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

pub fn multiset_eq(a: &[F], b: &[F]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x: Vec<&F> = a.iter().collect();
    let mut y: Vec<&F> = b.iter().collect();
    x.sort();
    y.sort();
    x == y
}

/// Copy of `v` with position `idx` removed.
pub fn without(v: &[F], idx: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(v.len().saturating_sub(1));
    for (k, f) in v.iter().enumerate() {
        if k != idx {
            out.push(f.clone());
        }
    }
    out
}

/// Copy of `v` with position `idx` replaced by `f`.
pub fn replace_at(v: &[F], idx: usize, f: F) -> Vec<F> {
    let mut out = v.to_vec();
    out[idx] = f;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::parse::parse_sequent;

    #[test]
    fn multiset_equality_respects_multiplicity() {
        let s1 = parse_sequent("p, q => r").unwrap();
        let s2 = parse_sequent("q, p => r").unwrap();
        let s3 = parse_sequent("p, p, q => r").unwrap();
        assert!(s1.multiset_eq(&s2));
        assert!(!s1.multiset_eq(&s3));
    }

    #[test]
    fn display_round_trip() {
        for text in ["p, q => r", "=> p", "p =>", "=>", "box p, box p => box ((p * p))"] {
            let s = parse_sequent(text).unwrap();
            let re = parse_sequent(&s.to_string()).unwrap();
            assert!(s.multiset_eq(&re));
            assert_eq!(s.ante, re.ante);
            assert_eq!(s.succ, re.succ);
        }
    }

    #[test]
    fn helpers() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        assert_eq!(without(&[p.clone(), q.clone()], 0), vec![q.clone()]);
        assert_eq!(
            replace_at(&[p.clone(), q.clone()], 1, p.clone()),
            vec![p.clone(), p]
        );
    }
}
