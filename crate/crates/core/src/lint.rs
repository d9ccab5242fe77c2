//! Variable-sharing lint over a list of formulas.
//!
//! Input is one formula per line. Blank lines and lines starting with `#`
//! are skipped; `def N := f` lines extend the definition table used by
//! later lines.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::defs::DefEnv;
use crate::error::ParseError;
use crate::formula::{Formula, Ident, Term};
use crate::schema::{check_variable_sharing, classify_axiom, SchemaId, SharingVerdict};
use crate::syntax::parse_formula;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LintFlag {
    /// An instance of `B -> (~B -> A)`, which shares atoms yet is the
    /// classic relevance counterexample.
    Ax10Advisory,
    /// A set abstraction whose body applies its variable to itself.
    SelfMembershipAbstraction { term: String },
    /// A constant whose definition speaks about its own truth.
    TruthFixedPoint { constant: Ident },
}

impl fmt::Display for LintFlag {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LintFlag::Ax10Advisory => out.write_str("AX10 advisory: instance of B -> (~B -> A)"),
            LintFlag::SelfMembershipAbstraction { term } => write!(out, "self-membership abstraction `{term}`"),
            LintFlag::TruthFixedPoint { constant } => write!(out, "truth fixed point `{constant}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub line: usize,
    #[serde(serialize_with = "display")]
    pub formula: Formula,
    /// Verdict on the top-level implication.
    pub verdict: SharingVerdict,
    /// For `A1 -> (A2 -> ... -> C)`, whether `C` shares no atom with the
    /// antecedents taken together.
    pub chain_violation: bool,
    #[serde(serialize_with = "display_all")]
    pub axioms: Vec<SchemaId>,
    pub flags: Vec<LintFlag>,
}

fn display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_all<T: fmt::Display, S: serde::Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl Finding {
    pub fn is_violation(&self) -> bool {
        self.verdict == SharingVerdict::Violation || self.chain_violation
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.is_violation() {
            "violation".to_string()
        } else {
            self.verdict.to_string()
        };
        write!(out, "line {}: {}: {verdict}", self.line, self.formula)?;
        if self.chain_violation {
            write!(out, "\n  final consequent shares no atom with the antecedents")?;
        }
        if !self.axioms.is_empty() {
            let names: Vec<&str> = self.axioms.iter().map(|a| a.name()).collect();
            write!(out, "\n  axiom instance: {}", names.join(", "))?;
        }
        for flag in &self.flags {
            write!(out, "\n  {flag}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LintReport {
    pub findings: Vec<Finding>,
}

impl LintReport {
    pub fn violations(&self) -> usize {
        self.findings.iter().filter(|f| f.is_violation()).count()
    }
}

impl fmt::Display for LintReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for f in &self.findings {
            writeln!(out, "{f}")?;
        }
        writeln!(out, "{} formula(s), {} violation(s)", self.findings.len(), self.violations())
    }
}

fn chain_violation(f: &Formula) -> bool {
    let mut antecedents = BTreeSet::new();
    let mut rest = f;
    while let Formula::Imp(a, c) = rest {
        antecedents.extend(a.atoms());
        rest = c;
    }
    !std::ptr::eq(rest, f) && rest.atoms().is_disjoint(&antecedents)
}

fn self_membership_sets(f: &Formula) -> Vec<Term> {
    fn in_term(t: &Term, out: &mut Vec<Term>) {
        match t {
            Term::SetAbs(x, body) => {
                let mut self_applied = false;
                body.visit(&mut |g| {
                    if let Formula::Member(l, r) = g {
                        if **l == Term::Var(x.clone()) && **r == Term::Var(x.clone()) {
                            self_applied = true;
                        }
                    }
                });
                if self_applied && !out.contains(t) {
                    out.push(t.clone());
                }
                in_formula(body, out);
            }
            Term::Quote(g) => in_formula(g, out),
            Term::Var(_) | Term::Const(_) => {}
        }
    }
    fn in_formula(f: &Formula, out: &mut Vec<Term>) {
        match f {
            Formula::Atom(_) | Formula::Const(_) => {}
            Formula::Truth(t) => in_term(t, out),
            Formula::Member(l, r) => {
                in_term(l, out);
                in_term(r, out);
            }
            Formula::Not(g) => in_formula(g, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
                in_formula(l, out);
                in_formula(r, out);
            }
        }
    }
    let mut out = Vec::new();
    in_formula(f, &mut out);
    out
}

/// Whether the definiens of `name` applies the truth predicate to `name`.
fn is_truth_fixed_point(name: &str, env: &DefEnv) -> bool {
    let Some(def) = env.get(name) else {
        return false;
    };
    let mut found = false;
    def.visit(&mut |g| {
        if let Formula::Truth(t) = g {
            if matches!(&**t, Term::Const(c) if c == name) {
                found = true;
            }
        }
    });
    found
}

pub fn lint_formula(line: usize, f: &Formula, env: &DefEnv) -> Finding {
    let axioms = classify_axiom(f);
    let mut flags = Vec::new();
    if axioms.contains(&SchemaId::Ax10) {
        flags.push(LintFlag::Ax10Advisory);
    }
    for t in self_membership_sets(f) {
        flags.push(LintFlag::SelfMembershipAbstraction { term: t.to_string() });
    }
    let consts: BTreeSet<Ident> = f.constants();
    for c in consts {
        if is_truth_fixed_point(&c, env) {
            flags.push(LintFlag::TruthFixedPoint { constant: c });
        }
    }
    Finding {
        line,
        formula: f.clone(),
        verdict: check_variable_sharing(f),
        chain_violation: chain_violation(f),
        axioms,
        flags,
    }
}

pub fn lint_text(text: &str) -> Result<LintReport, ParseError> {
    let mut env = DefEnv::new();
    let mut report = LintReport::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix("def ") {
            let Some(eq) = rest.find(":=") else {
                return Err(ParseError::new(line, indent + 1, "expected `def NAME := formula`"));
            };
            let name = rest[..eq].trim();
            let definiens =
                parse_formula(&rest[eq + 2..]).map_err(|e| e.relocate(line, indent + 4 + eq + 2))?;
            env.define(name, definiens)
                .map_err(|e| ParseError::new(line, indent + 1, e.to_string()))?;
            continue;
        }
        let f = parse_formula(trimmed).map_err(|e| e.relocate(line, indent))?;
        let undefined = env.undefined_in(&f);
        if let Some(c) = undefined.first() {
            return Err(ParseError::new(line, indent + 1, format!("constant `{c}` is not defined")));
        }
        report.findings.push(lint_formula(line, &f, &env));
    }
    Ok(report)
}
