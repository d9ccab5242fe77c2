//! Blocked sets for restricted modus ponens.
//!
//! A blocked set is a finite description of the formulas that may not serve
//! as the minor premise of MP in restricted mode. Membership is decided by
//! pattern matching modulo alpha-renaming and definition unfolding; there is
//! no provability search.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::defs::DefEnv;
use crate::error::ParseError;
use crate::formula::{Formula, Ident, Term};
use crate::syntax::{parse_formula, render_formula};

/// Which conclusions `F` a Curry pattern ranges over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Delta {
    All,
    Only(Vec<Formula>),
}

impl Delta {
    fn admits(&self, f: &Formula, env: &DefEnv) -> bool {
        match self {
            Delta::All => true,
            Delta::Only(fs) => fs.iter().any(|g| env.equal_modulo_defs(f, g)),
        }
    }

    pub fn union(&self, other: &Delta) -> Delta {
        match (self, other) {
            (Delta::All, _) | (_, Delta::All) => Delta::All,
            (Delta::Only(a), Delta::Only(b)) => Delta::Only(a.iter().chain(b).cloned().collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockedSetSpec {
    /// Self-membership of a Curry set: `t in t` with `t = {x | x in x -> F}`.
    CurrySet(Delta),
    /// The truth of a diagonal sentence `C := T[C] -> F`, as `T[C]` or `C`.
    /// `lambda` lists the truth-predicate symbols the pattern applies to.
    CurryTruth { delta: Delta, lambda: BTreeSet<Ident> },
    Explicit(Vec<Formula>),
    Union(Vec<BlockedSetSpec>),
    Empty,
}

pub fn make_curry_set(delta: Delta) -> BlockedSetSpec {
    BlockedSetSpec::CurrySet(delta)
}

pub fn make_curry_truth(delta: Delta, lambda: impl IntoIterator<Item = Ident>) -> BlockedSetSpec {
    BlockedSetSpec::CurryTruth {
        delta,
        lambda: lambda.into_iter().collect(),
    }
}

pub fn make_empty() -> BlockedSetSpec {
    BlockedSetSpec::Empty
}

pub fn is_blocked(f: &Formula, spec: &BlockedSetSpec, env: &DefEnv) -> bool {
    spec.blocks(f, env)
}

/// The truth predicate symbol of the object language.
pub const TRUTH_PREDICATE: &str = "T";

impl BlockedSetSpec {
    pub fn blocks(&self, f: &Formula, env: &DefEnv) -> bool {
        match self {
            BlockedSetSpec::Empty => false,
            BlockedSetSpec::Explicit(fs) => fs.iter().any(|g| env.equal_modulo_defs(f, g)),
            BlockedSetSpec::Union(specs) => specs.iter().any(|s| s.blocks(f, env)),
            BlockedSetSpec::CurrySet(delta) => curry_set_conclusion(f, env).is_some_and(|c| delta.admits(c, env)),
            BlockedSetSpec::CurryTruth { delta, lambda } => {
                lambda.contains(TRUTH_PREDICATE)
                    && env.iter().any(|(name, _)| {
                        curry_truth_conclusion(name, env).is_some_and(|c| delta.admits(c, env))
                            && (env.equal_modulo_defs(f, &Formula::constant(name.clone()))
                                || env.equal_modulo_defs(f, &Formula::truth(Term::constant(name.clone()))))
                    })
            }
        }
    }
}

/// Peels definitions off a formula-position constant. Definitions are never
/// bare constants, so one step reaches a compound formula.
fn unfold_head<'a>(f: &'a Formula, env: &'a DefEnv) -> Option<&'a Formula> {
    match f {
        Formula::Const(c) => env.get(c),
        _ => Some(f),
    }
}

/// If `f` is `t in t` with `t = {x | x in x -> F}` and `F` not mentioning
/// `x`, returns `F`.
fn curry_set_conclusion<'a>(f: &'a Formula, env: &'a DefEnv) -> Option<&'a Formula> {
    let Formula::Member(l, r) = unfold_head(f, env)? else {
        return None;
    };
    let Term::SetAbs(x, body) = &**l else {
        return None;
    };
    let Formula::Imp(hyp, concl) = &**body else {
        return None;
    };
    let self_member = Formula::member(Term::var(x.clone()), Term::var(x.clone()));
    if **hyp != self_member || concl.free_vars().contains(x) {
        return None;
    }
    let lhs = Formula::member(Term::var("a"), (**l).clone());
    let rhs = Formula::member(Term::var("a"), (**r).clone());
    env.equal_modulo_defs(&lhs, &rhs).then_some(concl)
}

/// If constant `name` is defined as `T[name] -> F`, returns `F`.
fn curry_truth_conclusion<'a>(name: &str, env: &'a DefEnv) -> Option<&'a Formula> {
    let Formula::Imp(hyp, concl) = env.get(name)? else {
        return None;
    };
    let names_itself = Formula::truth(Term::constant(name));
    env.equal_modulo_defs(hyp, &names_itself).then_some(&**concl)
}

impl fmt::Display for Delta {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::All => out.write_str("all"),
            Delta::Only(fs) => {
                let parts: Vec<String> = fs.iter().map(render_formula).collect();
                out.write_str(&parts.join(", "))
            }
        }
    }
}

impl fmt::Display for BlockedSetSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockedSetSpec::Empty => out.write_str("none"),
            BlockedSetSpec::CurrySet(d) => write!(out, "curry-set({d})"),
            BlockedSetSpec::CurryTruth { delta, lambda } => {
                let syms: Vec<&str> = lambda.iter().map(String::as_str).collect();
                write!(out, "curry-truth({delta}; {})", syms.join(", "))
            }
            BlockedSetSpec::Explicit(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| format!("\"{}\"", render_formula(f))).collect();
                write!(out, "explicit({})", parts.join(", "))
            }
            BlockedSetSpec::Union(specs) => {
                let parts: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
                write!(out, "union({})", parts.join(", "))
            }
        }
    }
}

/// Splits on `sep` at bracket depth zero, outside string literals.
fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut in_str, mut start) = (0i32, false, 0);
    for (i, c) in text.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '(' | '[' | '{' if !in_str => depth += 1,
            ')' | ']' | '}' if !in_str => depth -= 1,
            c if c == sep && depth == 0 && !in_str => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn spec_error(message: impl Into<String>) -> ParseError {
    ParseError::new(1, 1, message)
}

fn parse_delta(text: &str) -> Result<Delta, ParseError> {
    let text = text.trim();
    if text == "all" {
        return Ok(Delta::All);
    }
    let fs = split_top(text, ',')
        .into_iter()
        .map(|s| parse_formula(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Delta::Only(fs))
}

impl FromStr for BlockedSetSpec {
    type Err = ParseError;

    /// `none`, `curry-set(all)`, `curry-set(f, g)`, `curry-truth(all; T)`,
    /// `explicit("p", "q")`, `union(spec, ...)`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text == "none" {
            return Ok(BlockedSetSpec::Empty);
        }
        let open = text
            .find('(')
            .ok_or_else(|| spec_error(format!("unrecognized blocked-set spec `{text}`")))?;
        if !text.ends_with(')') {
            return Err(spec_error(format!("missing `)` in blocked-set spec `{text}`")));
        }
        let head = text[..open].trim();
        let inner = &text[open + 1..text.len() - 1];
        match head {
            "curry-set" => Ok(BlockedSetSpec::CurrySet(parse_delta(inner)?)),
            "curry-truth" => {
                let parts = split_top(inner, ';');
                let (delta, lambda) = match parts.as_slice() {
                    [d] => (parse_delta(d)?, BTreeSet::from([TRUTH_PREDICATE.to_string()])),
                    [d, l] => {
                        let syms = l
                            .split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect();
                        (parse_delta(d)?, syms)
                    }
                    _ => return Err(spec_error("curry-truth takes `delta` or `delta; lambda`")),
                };
                Ok(BlockedSetSpec::CurryTruth { delta, lambda })
            }
            "explicit" => {
                let fs = split_top(inner, ',')
                    .into_iter()
                    .map(|s| {
                        let s = s.trim();
                        let s = s
                            .strip_prefix('"')
                            .and_then(|s| s.strip_suffix('"'))
                            .ok_or_else(|| spec_error(format!("explicit formulas must be quoted: {s}")))?;
                        parse_formula(s)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(BlockedSetSpec::Explicit(fs))
            }
            "union" => Ok(BlockedSetSpec::Union(
                split_top(inner, ',')
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<Vec<_>, _>>()?,
            )),
            other => Err(spec_error(format!("unknown blocked-set kind `{other}`"))),
        }
    }
}
