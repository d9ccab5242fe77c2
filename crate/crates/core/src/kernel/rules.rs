//! The rule catalogue in forward form.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Judgment;
use crate::defs::DefEnv;
use crate::error::FormulaError;
use crate::formula::{alpha_eq, Formula, Ident, Term};
use crate::schema::{match_schema, SchemaId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    Axiom,
    Premise,
    Def,
    TSchema,
    Abstraction,
    USpec,
    Mp,
    Mt,
    SimpL,
    SimpR,
    Adj,
    Contraction,
    Idem,
    SubstEq,
    Trans,
    ConjGlb,
    ConjSplitL,
    ConjSplitR,
    Resid,
    Deresid,
    TEnthymemeOut,
    TEnthymemeIn,
}

impl RuleId {
    pub const ALL: [RuleId; 22] = [
        RuleId::Axiom,
        RuleId::Premise,
        RuleId::Def,
        RuleId::TSchema,
        RuleId::Abstraction,
        RuleId::USpec,
        RuleId::Mp,
        RuleId::Mt,
        RuleId::SimpL,
        RuleId::SimpR,
        RuleId::Adj,
        RuleId::Contraction,
        RuleId::Idem,
        RuleId::SubstEq,
        RuleId::Trans,
        RuleId::ConjGlb,
        RuleId::ConjSplitL,
        RuleId::ConjSplitR,
        RuleId::Resid,
        RuleId::Deresid,
        RuleId::TEnthymemeOut,
        RuleId::TEnthymemeIn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Axiom => "AXIOM",
            RuleId::Premise => "PREMISE",
            RuleId::Def => "DEF",
            RuleId::TSchema => "TSCHEMA",
            RuleId::Abstraction => "ABSTRACTION",
            RuleId::USpec => "USPEC",
            RuleId::Mp => "MP",
            RuleId::Mt => "MT",
            RuleId::SimpL => "SIMP_L",
            RuleId::SimpR => "SIMP_R",
            RuleId::Adj => "ADJ",
            RuleId::Contraction => "CONTRACTION",
            RuleId::Idem => "IDEM",
            RuleId::SubstEq => "SUBST_EQ",
            RuleId::Trans => "TRANS",
            RuleId::ConjGlb => "CONJ_GLB",
            RuleId::ConjSplitL => "CONJ_SPLIT_L",
            RuleId::ConjSplitR => "CONJ_SPLIT_R",
            RuleId::Resid => "RESID",
            RuleId::Deresid => "DERESID",
            RuleId::TEnthymemeOut => "T_ENTHYMEME_OUT",
            RuleId::TEnthymemeIn => "T_ENTHYMEME_IN",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// A rule application. `R` is how premises are referenced: step labels in
/// scripts, indices in the saturator.
///
/// | rule | consumes | produces |
/// |------|----------|----------|
/// | `Axiom` | | `\|- A`, an instance of the schema |
/// | `Premise(k)` | | the k-th declared premise (1-based) |
/// | `Def(C)` | | `\|- C <-> definiens` |
/// | `TSchema(A)` | | `\|- T[A] <-> A` |
/// | `Abstraction(x, A)` | | `\|- x in {x \| A} <-> A` |
/// | `USpec(i, t)` | `\|- A(x)` | `\|- A(t)` |
/// | `Mp(i, j)` | `\|- A`, `\|- A -> B` (either order) | `\|- B` |
/// | `Mt(i, j)` | `\|- A -> B`, `\|- ~B` (either order) | `\|- ~A` |
/// | `SimpL(i)` / `SimpR(i)` | `\|- A & B` | `\|- A` / `\|- B` |
/// | `Adj(i, j)` | `\|- A`, `\|- B` | `\|- A & B` |
/// | `Contraction(i)` | `\|- A -> (A -> B)` | `\|- A -> B` |
/// | `Idem(i)` | `\|- A & A -> B` | `\|- A -> B` |
/// | `SubstEq(i, j)` | `\|- A <-> B`, any J | J with A replaced by B (B by A if reversed) |
/// | `Trans(i, j)` | `A \|- B`, `B \|- C` | `A \|- C` |
/// | `ConjGlb(i, j)` | `A \|- B`, `A \|- C` | `A \|- B & C` |
/// | `ConjSplitL(i)` / `ConjSplitR(i)` | `A \|- B & C` | `A \|- B` / `A \|- C` |
/// | `Resid(i)` | `A & B \|- C` | `A \|- B -> C` |
/// | `Deresid(i)` | `A \|- B -> C` | `A & B \|- C` |
/// | `TEnthymemeOut(i, A)` | `\|- C`, a declared premise | `T[A] & C \|- A` |
/// | `TEnthymemeIn(i, A)` | `\|- C`, a declared premise | `A & C \|- T[A]` |
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule<R = String> {
    Axiom { schema: SchemaId, instance: Formula },
    Premise(usize),
    Def(Ident),
    TSchema(Formula),
    Abstraction { var: Ident, body: Formula },
    USpec { from: R, term: Term },
    Mp(R, R),
    Mt(R, R),
    SimpL(R),
    SimpR(R),
    Adj(R, R),
    Contraction(R),
    Idem(R),
    SubstEq { eq: R, target: R, reverse: bool },
    Trans(R, R),
    ConjGlb(R, R),
    ConjSplitL(R),
    ConjSplitR(R),
    Resid(R),
    Deresid(R),
    TEnthymemeOut { background: R, sentence: Formula },
    TEnthymemeIn { background: R, sentence: Formula },
}

impl<R> Rule<R> {
    pub fn id(&self) -> RuleId {
        match self {
            Rule::Axiom { .. } => RuleId::Axiom,
            Rule::Premise(_) => RuleId::Premise,
            Rule::Def(_) => RuleId::Def,
            Rule::TSchema(_) => RuleId::TSchema,
            Rule::Abstraction { .. } => RuleId::Abstraction,
            Rule::USpec { .. } => RuleId::USpec,
            Rule::Mp(..) => RuleId::Mp,
            Rule::Mt(..) => RuleId::Mt,
            Rule::SimpL(_) => RuleId::SimpL,
            Rule::SimpR(_) => RuleId::SimpR,
            Rule::Adj(..) => RuleId::Adj,
            Rule::Contraction(_) => RuleId::Contraction,
            Rule::Idem(_) => RuleId::Idem,
            Rule::SubstEq { .. } => RuleId::SubstEq,
            Rule::Trans(..) => RuleId::Trans,
            Rule::ConjGlb(..) => RuleId::ConjGlb,
            Rule::ConjSplitL(_) => RuleId::ConjSplitL,
            Rule::ConjSplitR(_) => RuleId::ConjSplitR,
            Rule::Resid(_) => RuleId::Resid,
            Rule::Deresid(_) => RuleId::Deresid,
            Rule::TEnthymemeOut { .. } => RuleId::TEnthymemeOut,
            Rule::TEnthymemeIn { .. } => RuleId::TEnthymemeIn,
        }
    }

    /// Premise references in the order [`rule_output`] expects them.
    pub fn premises(&self) -> Vec<&R> {
        match self {
            Rule::Axiom { .. } | Rule::Premise(_) | Rule::Def(_) | Rule::TSchema(_) | Rule::Abstraction { .. } => {
                vec![]
            }
            Rule::USpec { from, .. } => vec![from],
            Rule::SimpL(i)
            | Rule::SimpR(i)
            | Rule::Contraction(i)
            | Rule::Idem(i)
            | Rule::ConjSplitL(i)
            | Rule::ConjSplitR(i)
            | Rule::Resid(i)
            | Rule::Deresid(i) => vec![i],
            Rule::Mp(i, j) | Rule::Mt(i, j) | Rule::Adj(i, j) | Rule::Trans(i, j) | Rule::ConjGlb(i, j) => {
                vec![i, j]
            }
            Rule::SubstEq { eq, target, .. } => vec![eq, target],
            Rule::TEnthymemeOut { background, .. } | Rule::TEnthymemeIn { background, .. } => vec![background],
        }
    }

    pub fn map_refs<S>(self, mut f: impl FnMut(R) -> S) -> Rule<S> {
        match self {
            Rule::Axiom { schema, instance } => Rule::Axiom { schema, instance },
            Rule::Premise(k) => Rule::Premise(k),
            Rule::Def(c) => Rule::Def(c),
            Rule::TSchema(a) => Rule::TSchema(a),
            Rule::Abstraction { var, body } => Rule::Abstraction { var, body },
            Rule::USpec { from, term } => Rule::USpec { from: f(from), term },
            Rule::Mp(i, j) => {
                let i = f(i);
                Rule::Mp(i, f(j))
            }
            Rule::Mt(i, j) => {
                let i = f(i);
                Rule::Mt(i, f(j))
            }
            Rule::SimpL(i) => Rule::SimpL(f(i)),
            Rule::SimpR(i) => Rule::SimpR(f(i)),
            Rule::Adj(i, j) => {
                let i = f(i);
                Rule::Adj(i, f(j))
            }
            Rule::Contraction(i) => Rule::Contraction(f(i)),
            Rule::Idem(i) => Rule::Idem(f(i)),
            Rule::SubstEq { eq, target, reverse } => {
                let eq = f(eq);
                Rule::SubstEq {
                    eq,
                    target: f(target),
                    reverse,
                }
            }
            Rule::Trans(i, j) => {
                let i = f(i);
                Rule::Trans(i, f(j))
            }
            Rule::ConjGlb(i, j) => {
                let i = f(i);
                Rule::ConjGlb(i, f(j))
            }
            Rule::ConjSplitL(i) => Rule::ConjSplitL(f(i)),
            Rule::ConjSplitR(i) => Rule::ConjSplitR(f(i)),
            Rule::Resid(i) => Rule::Resid(f(i)),
            Rule::Deresid(i) => Rule::Deresid(f(i)),
            Rule::TEnthymemeOut { background, sentence } => Rule::TEnthymemeOut {
                background: f(background),
                sentence,
            },
            Rule::TEnthymemeIn { background, sentence } => Rule::TEnthymemeIn {
                background: f(background),
                sentence,
            },
        }
    }

    /// Constants mentioned by the rule's own arguments.
    pub fn constants(&self) -> BTreeSet<Ident> {
        match self {
            Rule::Axiom { instance: f, .. }
            | Rule::TSchema(f)
            | Rule::Abstraction { body: f, .. }
            | Rule::TEnthymemeOut { sentence: f, .. }
            | Rule::TEnthymemeIn { sentence: f, .. } => f.constants(),
            Rule::USpec { term, .. } => Formula::member(term.clone(), Term::var("_")).constants(),
            _ => BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule} expects {expected} premise(s), got {got}")]
    Arity { rule: RuleId, expected: usize, got: usize },
    #[error("{rule}: {message}")]
    Shape { rule: RuleId, message: String },
    #[error("{0}")]
    Formula(#[from] FormulaError),
}

fn shape(rule: RuleId, message: impl Into<String>) -> RuleError {
    RuleError::Shape {
        rule,
        message: message.into(),
    }
}

/// Script-level facts some rules consult.
#[derive(Clone, Copy, Debug)]
pub struct RuleContext<'a> {
    pub env: &'a DefEnv,
    pub premises: &'a [Judgment],
}

impl<'a> RuleContext<'a> {
    pub fn new(env: &'a DefEnv, premises: &'a [Judgment]) -> Self {
        RuleContext { env, premises }
    }
}

fn categorical(rule: RuleId, j: &Judgment) -> Result<&Formula, RuleError> {
    match &j.antecedent {
        None => Ok(&j.succedent),
        Some(_) => Err(shape(rule, format!("needs a categorical judgment, got `{j}`"))),
    }
}

fn binary(rule: RuleId, j: &Judgment) -> Result<(&Formula, &Formula), RuleError> {
    match &j.antecedent {
        Some(a) => Ok((a, &j.succedent)),
        None => Err(shape(rule, format!("needs a binary judgment, got `{j}`"))),
    }
}

fn conj(rule: RuleId, f: &Formula) -> Result<(&Formula, &Formula), RuleError> {
    match f {
        Formula::And(l, r) => Ok((l, r)),
        _ => Err(shape(rule, format!("`{f}` is not a conjunction"))),
    }
}

fn implication(rule: RuleId, f: &Formula) -> Result<(&Formula, &Formula), RuleError> {
    match f {
        Formula::Imp(l, r) => Ok((l, r)),
        _ => Err(shape(rule, format!("`{f}` is not an implication"))),
    }
}

/// For premises `a` and `b` of MP in either order, the index of the minor
/// premise and the conclusion. At most one order can fit.
pub(crate) fn mp_split<'f>(a: &'f Formula, b: &'f Formula) -> Option<(usize, &'f Formula)> {
    if let Formula::Imp(ante, cons) = b {
        if alpha_eq(ante, a) {
            return Some((0, cons));
        }
    }
    if let Formula::Imp(ante, cons) = a {
        if alpha_eq(ante, b) {
            return Some((1, cons));
        }
    }
    None
}

fn mt_split(a: &Formula, b: &Formula) -> Option<Formula> {
    let try_order = |imp: &Formula, neg: &Formula| match (imp, neg) {
        (Formula::Imp(ante, cons), Formula::Not(n)) if alpha_eq(cons, n) => Some(Formula::not((**ante).clone())),
        _ => None,
    };
    try_order(a, b).or_else(|| try_order(b, a))
}

/// The judgment `rule` produces from `premises`, which must be given in the
/// order of [`Rule::premises`].
pub fn rule_output<R>(rule: &Rule<R>, premises: &[&Judgment], ctx: &RuleContext<'_>) -> Result<Judgment, RuleError> {
    let id = rule.id();
    let expected = rule.premises().len();
    if premises.len() != expected {
        return Err(RuleError::Arity {
            rule: id,
            expected,
            got: premises.len(),
        });
    }
    let cat = |f: Formula| Ok(Judgment::categorical(f));
    match rule {
        Rule::Axiom { schema, instance } => {
            if match_schema(&schema.schema(), instance).is_none() {
                return Err(shape(id, format!("`{instance}` is not an instance of {schema}")));
            }
            cat(instance.clone())
        }
        Rule::Premise(k) => k
            .checked_sub(1)
            .and_then(|i| ctx.premises.get(i))
            .cloned()
            .ok_or_else(|| shape(id, format!("there is no premise {k}"))),
        Rule::Def(name) => {
            let definiens = ctx
                .env
                .get(name)
                .ok_or_else(|| FormulaError::UnknownConst(name.clone()))?;
            cat(Formula::iff(Formula::constant(name.clone()), definiens.clone()))
        }
        Rule::TSchema(a) => {
            if !a.is_closed() {
                return Err(shape(id, format!("`{a}` is not closed and cannot be named")));
            }
            cat(Formula::iff(Formula::truth_of(a.clone()), a.clone()))
        }
        Rule::Abstraction { var, body } => {
            if crate::formula::is_const_name(var) {
                return Err(shape(id, format!("`{var}` is not a variable")));
            }
            let set = Term::set_abs(var.clone(), body.clone());
            cat(Formula::iff(Formula::member(Term::var(var.clone()), set), body.clone()))
        }
        Rule::USpec { term, .. } => {
            let f = categorical(id, premises[0])?;
            let free = f.free_vars();
            let mut it = free.iter();
            match (it.next(), it.next()) {
                (Some(x), None) => cat(f.substitute(x, term)?),
                (None, _) => Err(shape(id, format!("`{f}` has no free variable"))),
                _ => Err(shape(id, format!("`{f}` has more than one free variable"))),
            }
        }
        Rule::Mp(..) => {
            let a = categorical(id, premises[0])?;
            let b = categorical(id, premises[1])?;
            let (_, cons) = mp_split(a, b).ok_or_else(|| shape(id, format!("`{a}` and `{b}` do not fit A, A -> B")))?;
            cat(cons.clone())
        }
        Rule::Mt(..) => {
            let a = categorical(id, premises[0])?;
            let b = categorical(id, premises[1])?;
            let out = mt_split(a, b).ok_or_else(|| shape(id, format!("`{a}` and `{b}` do not fit A -> B, ~B")))?;
            cat(out)
        }
        Rule::SimpL(_) | Rule::SimpR(_) => {
            let (l, r) = conj(id, categorical(id, premises[0])?)?;
            cat(if id == RuleId::SimpL { l.clone() } else { r.clone() })
        }
        Rule::Adj(..) => {
            let a = categorical(id, premises[0])?;
            let b = categorical(id, premises[1])?;
            cat(Formula::and(a.clone(), b.clone()))
        }
        Rule::Contraction(_) => {
            let (a, rest) = implication(id, categorical(id, premises[0])?)?;
            let (a2, b) = implication(id, rest)?;
            if !alpha_eq(a, a2) {
                return Err(shape(id, format!("`{a}` and `{a2}` differ")));
            }
            cat(Formula::imp(a.clone(), b.clone()))
        }
        Rule::Idem(_) => {
            let (ante, b) = implication(id, categorical(id, premises[0])?)?;
            let (a, a2) = conj(id, ante)?;
            if !alpha_eq(a, a2) {
                return Err(shape(id, format!("`{a}` and `{a2}` differ")));
            }
            cat(Formula::imp(a.clone(), b.clone()))
        }
        Rule::SubstEq { reverse, .. } => {
            let eq = categorical(id, premises[0])?;
            let (Formula::Imp(a, b), Formula::Imp(b2, a2)) = conj(id, eq)? else {
                return Err(shape(id, format!("`{eq}` is not a biconditional")));
            };
            if !alpha_eq(a, a2) || !alpha_eq(b, b2) {
                return Err(shape(id, format!("`{eq}` is not a biconditional")));
            }
            let (from, to) = if *reverse { (&**b, &**a) } else { (&**a, &**b) };
            let target = premises[1];
            Ok(Judgment {
                antecedent: target.antecedent.as_ref().map(|f| f.replace_subformula(from, to)),
                succedent: target.succedent.replace_subformula(from, to),
            })
        }
        Rule::Trans(..) => {
            let (a, b) = binary(id, premises[0])?;
            let (b2, c) = binary(id, premises[1])?;
            if !alpha_eq(b, b2) {
                return Err(shape(id, format!("middle formulas `{b}` and `{b2}` differ")));
            }
            Ok(Judgment::binary(a.clone(), c.clone()))
        }
        Rule::ConjGlb(..) => {
            let (a, b) = binary(id, premises[0])?;
            let (a2, c) = binary(id, premises[1])?;
            if !alpha_eq(a, a2) {
                return Err(shape(id, format!("antecedents `{a}` and `{a2}` differ")));
            }
            Ok(Judgment::binary(a.clone(), Formula::and(b.clone(), c.clone())))
        }
        Rule::ConjSplitL(_) | Rule::ConjSplitR(_) => {
            let (a, bc) = binary(id, premises[0])?;
            let (b, c) = conj(id, bc)?;
            let out = if id == RuleId::ConjSplitL { b } else { c };
            Ok(Judgment::binary(a.clone(), out.clone()))
        }
        Rule::Resid(_) => {
            let (ab, c) = binary(id, premises[0])?;
            let (a, b) = conj(id, ab)?;
            Ok(Judgment::binary(a.clone(), Formula::imp(b.clone(), c.clone())))
        }
        Rule::Deresid(_) => {
            let (a, bc) = binary(id, premises[0])?;
            let (b, c) = implication(id, bc)?;
            Ok(Judgment::binary(Formula::and(a.clone(), b.clone()), c.clone()))
        }
        Rule::TEnthymemeOut { sentence, .. } | Rule::TEnthymemeIn { sentence, .. } => {
            let background = categorical(id, premises[0])?;
            let declared = ctx
                .premises
                .iter()
                .any(|p| p.is_categorical() && alpha_eq(&p.succedent, background));
            if !declared {
                return Err(shape(id, format!("`{background}` is not a declared premise")));
            }
            if !sentence.is_closed() {
                return Err(shape(id, format!("`{sentence}` is not closed and cannot be named")));
            }
            let named = Formula::truth_of(sentence.clone());
            Ok(if id == RuleId::TEnthymemeOut {
                Judgment::binary(Formula::and(named, background.clone()), sentence.clone())
            } else {
                Judgment::binary(Formula::and(sentence.clone(), background.clone()), named)
            })
        }
    }
}
