//! Modal formulas with fixed-point binders.
//!
//! Equality is graphic (purely structural): `fp $x. box $x` and
//! `fp $y. box $y` are distinct formulas and no renaming is ever applied.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Shared handle for formulas. Formulas are immutable; clones are cheap.
pub type F = Arc<Formula>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// Atomic proposition, written `p`.
    Atom(String),
    /// Variable, written `$x`. Atoms and variables use disjoint alphabets.
    Var(String),
    /// Falsum, written `bot`.
    Bot,
    /// Implication `A -> B`, right-associative.
    Imp(F, F),
    /// Modality `box A`.
    Box(F),
    /// Fixed point `fp $x. A`; every free `$x` in `A` must sit under a `box`.
    Fp(String, F),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("fp ${0}: variable has a free occurrence outside the scope of box")]
    NotModalized(String),
    #[error("substituend is not closed (free variable ${0})")]
    NonClosedSubstituend(String),
    #[error("formula is not an fp formula")]
    NotFixpoint,
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> F {
        Arc::new(Formula::Atom(name.into()))
    }

    pub fn var(name: impl Into<String>) -> F {
        Arc::new(Formula::Var(name.into()))
    }

    pub fn bot() -> F {
        Arc::new(Formula::Bot)
    }

    pub fn imp(left: F, right: F) -> F {
        Arc::new(Formula::Imp(left, right))
    }

    pub fn boxed(body: F) -> F {
        Arc::new(Formula::Box(body))
    }

    /// `fp $x. body`, rejecting bodies where `$x` occurs free outside a box.
    pub fn fp(var: impl Into<String>, body: F) -> Result<F, FormulaError> {
        let var = var.into();
        if !body.is_modalized(&var) {
            return Err(FormulaError::NotModalized(var));
        }
        Ok(Arc::new(Formula::Fp(var, body)))
    }

    /// `~A` expands to `A -> bot`.
    pub fn neg(a: F) -> F {
        Self::imp(a, Self::bot())
    }

    /// `top` expands to `bot -> bot`.
    pub fn top() -> F {
        Self::imp(Self::bot(), Self::bot())
    }

    /// `A * B` expands to `(A -> (B -> bot)) -> bot`.
    pub fn conj(a: F, b: F) -> F {
        Self::neg(Self::imp(a, Self::neg(b)))
    }

    /// The refutability fixed point `fp $x. box ($x -> bot)`.
    pub fn goedel_fp(var: impl Into<String>) -> F {
        let var = var.into();
        let body = Self::boxed(Self::neg(Self::var(var.clone())));
        Self::fp(var, body).expect("body is modalized by construction")
    }

    /// The provability fixed point `fp $x. box $x`.
    pub fn henkin_fp(var: impl Into<String>) -> F {
        let var = var.into();
        let body = Self::boxed(Self::var(var.clone()));
        Self::fp(var, body).expect("body is modalized by construction")
    }

    /// Free variables; `fp $x` binds `$x`.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_) | Formula::Bot => {}
            Formula::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Box(a) => a.collect_free(bound, out),
            Formula::Fp(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True iff every free occurrence of `var` lies strictly under a `box`.
    pub fn is_modalized(&self, var: &str) -> bool {
        fn walk(f: &Formula, var: &str, under_box: bool) -> bool {
            match f {
                Formula::Atom(_) | Formula::Bot => true,
                Formula::Var(x) => x != var || under_box,
                Formula::Imp(a, b) => walk(a, var, under_box) && walk(b, var, under_box),
                Formula::Box(a) => walk(a, var, true),
                Formula::Fp(x, a) => x == var || walk(a, var, under_box),
            }
        }
        walk(self, var, false)
    }

    /// `A[B//x]`: replace all free occurrences of `x` by the closed `B`.
    ///
    /// Open substituends are rejected rather than capture-avoided.
    pub fn substitute(a: &F, b: &F, var: &str) -> Result<F, FormulaError> {
        if let Some(v) = b.free_vars().into_iter().next() {
            return Err(FormulaError::NonClosedSubstituend(v));
        }
        Ok(Self::subst_closed(a, b, var))
    }

    fn subst_closed(a: &F, b: &F, var: &str) -> F {
        match a.as_ref() {
            Formula::Atom(_) | Formula::Bot => a.clone(),
            Formula::Var(x) => {
                if x == var {
                    b.clone()
                } else {
                    a.clone()
                }
            }
            Formula::Imp(l, r) => {
                Formula::imp(Self::subst_closed(l, b, var), Self::subst_closed(r, b, var))
            }
            Formula::Box(body) => Formula::boxed(Self::subst_closed(body, b, var)),
            Formula::Fp(x, body) => {
                if x == var {
                    a.clone()
                } else {
                    // b is closed, so no capture; guardedness of the body is
                    // unaffected because b contributes no free occurrences.
                    Arc::new(Formula::Fp(x.clone(), Self::subst_closed(body, b, var)))
                }
            }
        }
    }

    /// One-step unfolding of a closed `fp $x. A`: `A[fp $x. A//x]`.
    pub fn unfold(fp: &F) -> Result<F, FormulaError> {
        match fp.as_ref() {
            Formula::Fp(x, body) => Self::substitute(body, fp, x),
            _ => Err(FormulaError::NotFixpoint),
        }
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Var(_) | Formula::Bot => 1,
            Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Box(a) | Formula::Fp(_, a) => 1 + a.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Imp(a, b) => write!(f, "{} -> {}", Head(a), b),
            Formula::Fp(x, a) => write!(f, "fp ${}. {}", x, a),
            _ => write!(f, "{}", Head(self)),
        }
    }
}

/// Prints at `unary` precedence: implication and fp get parenthesized.
struct Head<'a>(&'a Formula);

impl fmt::Display for Head<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Var(x) => write!(f, "${x}"),
            Formula::Bot => write!(f, "bot"),
            Formula::Box(a) => write!(f, "box {}", Head(a)),
            other => write!(f, "({other})"),
        }
    }
}
