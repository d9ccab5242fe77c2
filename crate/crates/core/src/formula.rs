//! Object language: terms and formulas.
//!
//! Formulas are plain trees. The biconditional is not a constructor; use
//! [`Formula::iff`], which builds `(a -> b) & (b -> a)`.
//!
//! Identifiers follow a case convention that the parser relies on:
//! lowercase names are atoms (formula position) or variables (term
//! position), names starting with an uppercase letter are defined sentence
//! constants. `T` is reserved for the truth predicate.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::FormulaError;

pub type Ident = String;

/// First-order objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(Ident),
    /// `{x | body}`, binding `x` in `body`.
    SetAbs(Ident, Box<Formula>),
    /// `[A]`, the name of a closed formula.
    Quote(Box<Formula>),
    /// Name of a defined sentence constant.
    Const(Ident),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    Atom(Ident),
    /// A defined sentence constant used as a formula.
    Const(Ident),
    /// `T[t]`; `t` is a `Quote` or a `Const`.
    Truth(Box<Term>),
    Member(Box<Term>, Box<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
}

pub fn is_const_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl Term {
    pub fn var(name: impl Into<Ident>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<Ident>) -> Term {
        Term::Const(name.into())
    }

    pub fn set_abs(bound: impl Into<Ident>, body: Formula) -> Term {
        Term::SetAbs(bound.into(), Box::new(body))
    }

    /// Quotes `f`. A quoted constant is written as the constant's name.
    pub fn quote(f: Formula) -> Term {
        match f {
            Formula::Const(c) => Term::Const(c),
            other => Term::Quote(Box::new(other)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::SetAbs(_, body) | Term::Quote(body) => 1 + body.size(),
        }
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::Quote(f) => f.collect_free(bound, out),
            Term::SetAbs(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }
}

impl Formula {
    pub fn atom(name: impl Into<Ident>) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn constant(name: impl Into<Ident>) -> Formula {
        Formula::Const(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Formula, r: Formula) -> Formula {
        Formula::Imp(Box::new(l), Box::new(r))
    }

    /// `l <-> r`, i.e. `(l -> r) & (r -> l)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::imp(l.clone(), r.clone()), Formula::imp(r, l))
    }

    pub fn member(lhs: Term, rhs: Term) -> Formula {
        Formula::Member(Box::new(lhs), Box::new(rhs))
    }

    pub fn truth(arg: Term) -> Formula {
        Formula::Truth(Box::new(arg))
    }

    /// `T[f]`: the truth predicate applied to the name of `f`.
    pub fn truth_of(f: Formula) -> Formula {
        Formula::truth(Term::quote(f))
    }

    /// Splits a biconditional into its two sides, if `self` has that shape.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(l, r) => match (&**l, &**r) {
                (Formula::Imp(a, b), Formula::Imp(b2, a2)) if a == a2 && b == b2 => Some((a, b)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Number of formula and term nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Const(_) => 1,
            Formula::Truth(t) => 1 + t.size(),
            Formula::Member(l, r) => 1 + l.size() + r.size(),
            Formula::Not(f) => 1 + f.size(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => 1 + l.size() + r.size(),
        }
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        match self {
            Formula::Atom(_) | Formula::Const(_) => {}
            Formula::Truth(t) => t.collect_free(bound, out),
            Formula::Member(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Atom names occurring in `self`, including inside quotations and
    /// set-abstraction bodies. Constants are not unfolded.
    pub fn atoms(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    /// Constant names mentioned anywhere, in formula or term position.
    pub fn constants(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Const(c) => {
                out.insert(c.clone());
            }
            Formula::Truth(t) => {
                if let Term::Const(c) = &**t {
                    out.insert(c.clone());
                }
            }
            Formula::Member(l, r) => {
                for t in [l, r] {
                    if let Term::Const(c) = &**t {
                        out.insert(c.clone());
                    }
                }
            }
            _ => {}
        });
        out
    }

    /// Pre-order walk over every formula node, descending into terms.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(_) | Formula::Const(_) => {}
            Formula::Truth(t) => t.visit_formulas(f),
            Formula::Member(l, r) => {
                l.visit_formulas(f);
                r.visit_formulas(f);
            }
            Formula::Not(g) => g.visit(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    /// Subformulas in formula position only (no descent into terms),
    /// deduplicated, in pre-order.
    pub fn subformulas(&self) -> Vec<Formula> {
        fn go(f: &Formula, out: &mut Vec<Formula>) {
            if !out.contains(f) {
                out.push(f.clone());
            }
            match f {
                Formula::Not(g) => go(g, out),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                    go(l, out);
                    go(r, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Replaces every free `Var(x)` with `t`. Fails instead of renaming when
    /// a binder would capture a free variable of `t`.
    pub fn substitute(&self, x: &str, t: &Term) -> Result<Formula, FormulaError> {
        let t_free = t.free_vars();
        self.subst_inner(x, t, &t_free)
    }

    fn subst_inner(&self, x: &str, t: &Term, t_free: &BTreeSet<Ident>) -> Result<Formula, FormulaError> {
        Ok(match self {
            Formula::Atom(_) | Formula::Const(_) => self.clone(),
            Formula::Truth(a) => Formula::Truth(Box::new(a.subst_inner(x, t, t_free)?)),
            Formula::Member(l, r) => Formula::Member(
                Box::new(l.subst_inner(x, t, t_free)?),
                Box::new(r.subst_inner(x, t, t_free)?),
            ),
            Formula::Not(f) => Formula::not(f.subst_inner(x, t, t_free)?),
            Formula::And(l, r) => Formula::and(l.subst_inner(x, t, t_free)?, r.subst_inner(x, t, t_free)?),
            Formula::Or(l, r) => Formula::or(l.subst_inner(x, t, t_free)?, r.subst_inner(x, t, t_free)?),
            Formula::Imp(l, r) => Formula::imp(l.subst_inner(x, t, t_free)?, r.subst_inner(x, t, t_free)?),
        })
    }

    /// Replaces every occurrence of constant `name`, in formula position by
    /// `definiens` and in term position by the quotation of `definiens`.
    /// One layer only: the inserted copies are not revisited.
    pub fn replace_const(&self, name: &str, definiens: &Formula) -> Formula {
        match self {
            Formula::Const(c) if c == name => definiens.clone(),
            Formula::Atom(_) | Formula::Const(_) => self.clone(),
            Formula::Truth(t) => Formula::Truth(Box::new(t.replace_const(name, definiens))),
            Formula::Member(l, r) => Formula::Member(
                Box::new(l.replace_const(name, definiens)),
                Box::new(r.replace_const(name, definiens)),
            ),
            Formula::Not(f) => Formula::not(f.replace_const(name, definiens)),
            Formula::And(l, r) => Formula::and(l.replace_const(name, definiens), r.replace_const(name, definiens)),
            Formula::Or(l, r) => Formula::or(l.replace_const(name, definiens), r.replace_const(name, definiens)),
            Formula::Imp(l, r) => Formula::imp(l.replace_const(name, definiens), r.replace_const(name, definiens)),
        }
    }

    /// Replaces every formula-position occurrence of `from` (up to alpha
    /// equivalence) with `to`. Terms are left alone, so quotations keep
    /// naming the sentence they named.
    pub fn replace_subformula(&self, from: &Formula, to: &Formula) -> Formula {
        if alpha_eq(self, from) {
            return to.clone();
        }
        match self {
            Formula::Not(f) => Formula::not(f.replace_subformula(from, to)),
            Formula::And(l, r) => Formula::and(l.replace_subformula(from, to), r.replace_subformula(from, to)),
            Formula::Or(l, r) => Formula::or(l.replace_subformula(from, to), r.replace_subformula(from, to)),
            Formula::Imp(l, r) => Formula::imp(l.replace_subformula(from, to), r.replace_subformula(from, to)),
            _ => self.clone(),
        }
    }

    /// Alpha-normal form: every binder is renamed to `#d`, where `d` is its
    /// binder depth. Two formulas are alpha-equivalent iff their canonical
    /// forms are equal. `#` never occurs in parsed identifiers.
    pub fn canonical(&self) -> Formula {
        self.canon(&mut Vec::new())
    }

    fn canon(&self, scope: &mut Vec<(Ident, Ident)>) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Const(_) => self.clone(),
            Formula::Truth(t) => Formula::Truth(Box::new(t.canon(scope))),
            Formula::Member(l, r) => Formula::Member(Box::new(l.canon(scope)), Box::new(r.canon(scope))),
            Formula::Not(f) => Formula::not(f.canon(scope)),
            Formula::And(l, r) => Formula::and(l.canon(scope), r.canon(scope)),
            Formula::Or(l, r) => Formula::or(l.canon(scope), r.canon(scope)),
            Formula::Imp(l, r) => Formula::imp(l.canon(scope), r.canon(scope)),
        }
    }
}

impl Term {
    fn subst_inner(&self, x: &str, t: &Term, t_free: &BTreeSet<Ident>) -> Result<Term, FormulaError> {
        Ok(match self {
            Term::Var(y) if y == x => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            // quotations are closed
            Term::Quote(_) => self.clone(),
            Term::SetAbs(y, _) if y == x => self.clone(),
            Term::SetAbs(y, body) => {
                if t_free.contains(y) && body.free_vars().contains(x) {
                    return Err(FormulaError::Capture {
                        binder: y.clone(),
                        var: x.to_string(),
                    });
                }
                Term::SetAbs(y.clone(), Box::new(body.subst_inner(x, t, t_free)?))
            }
        })
    }

    fn replace_const(&self, name: &str, definiens: &Formula) -> Term {
        match self {
            Term::Const(c) if c == name => Term::quote(definiens.clone()),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::Quote(f) => Term::Quote(Box::new(f.replace_const(name, definiens))),
            Term::SetAbs(x, body) => Term::SetAbs(x.clone(), Box::new(body.replace_const(name, definiens))),
        }
    }

    fn visit_formulas<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        match self {
            Term::Var(_) | Term::Const(_) => {}
            Term::Quote(g) | Term::SetAbs(_, g) => g.visit(f),
        }
    }

    fn canon(&self, scope: &mut Vec<(Ident, Ident)>) -> Term {
        match self {
            Term::Var(x) => match scope.iter().rev().find(|(orig, _)| orig == x) {
                Some((_, fresh)) => Term::Var(fresh.clone()),
                None => self.clone(),
            },
            Term::Const(_) => self.clone(),
            Term::Quote(f) => Term::Quote(Box::new(f.canon(scope))),
            Term::SetAbs(x, body) => {
                let fresh = format!("#{}", scope.len());
                scope.push((x.clone(), fresh.clone()));
                let body = body.canon(scope);
                scope.pop();
                Term::SetAbs(fresh, Box::new(body))
            }
        }
    }

    pub fn canonical(&self) -> Term {
        self.canon(&mut Vec::new())
    }
}

/// Structural equality up to renaming of set-abstraction binders.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    a == b || a.canonical() == b.canonical()
}

pub fn formulas_equal(a: &Formula, b: &Formula) -> bool {
    alpha_eq(a, b)
}

pub fn atoms_of(f: &Formula) -> BTreeSet<Ident> {
    f.atoms()
}

pub fn substitute(f: &Formula, x: &str, t: &Term) -> Result<Formula, FormulaError> {
    f.substitute(x, t)
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&crate::syntax::render_formula(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&crate::syntax::render_term(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = crate::error::ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        crate::syntax::parse_formula(text)
    }
}

impl std::str::FromStr for Term {
    type Err = crate::error::ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        crate::syntax::parse_term(text)
    }
}
