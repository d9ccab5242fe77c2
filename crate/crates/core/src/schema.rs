//! Axiom schemata: matching, instantiation and classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::SchemaError;
use crate::formula::{alpha_eq, Formula};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metavar {
    A,
    B,
    C,
}

impl Metavar {
    fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Metavar::A => 'A',
            Metavar::B => 'B',
            Metavar::C => 'C',
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemaId {
    Ax1,
    Ax2,
    Ax3,
    Ax4,
    Ax5,
    Ax6,
    Ax7,
    Ax8,
    Ax9,
    Ax10,
    Assertion,
}

impl SchemaId {
    pub const ALL: [SchemaId; 11] = [
        SchemaId::Ax1,
        SchemaId::Ax2,
        SchemaId::Ax3,
        SchemaId::Ax4,
        SchemaId::Ax5,
        SchemaId::Ax6,
        SchemaId::Ax7,
        SchemaId::Ax8,
        SchemaId::Ax9,
        SchemaId::Ax10,
        SchemaId::Assertion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::Ax1 => "AX1",
            SchemaId::Ax2 => "AX2",
            SchemaId::Ax3 => "AX3",
            SchemaId::Ax4 => "AX4",
            SchemaId::Ax5 => "AX5",
            SchemaId::Ax6 => "AX6",
            SchemaId::Ax7 => "AX7",
            SchemaId::Ax8 => "AX8",
            SchemaId::Ax9 => "AX9",
            SchemaId::Ax10 => "AX10",
            SchemaId::Assertion => "ASSERTION",
        }
    }

    pub fn schema(self) -> Schema {
        Schema::get(self)
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaId {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| SchemaError::UnknownSchema(s.to_string()))
    }
}

/// Formula-shaped tree whose leaves may be metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Meta(Metavar),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    Imp(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    /// Node count, with each metavariable counted as one leaf.
    pub fn skeleton_size(&self) -> usize {
        match self {
            Pattern::Meta(_) => 1,
            Pattern::Not(p) => 1 + p.skeleton_size(),
            Pattern::And(l, r) | Pattern::Or(l, r) | Pattern::Imp(l, r) => 1 + l.skeleton_size() + r.skeleton_size(),
        }
    }

    pub fn metavars(&self) -> Vec<Metavar> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Occurrence count per metavariable, indexed A, B, C.
    pub fn occurrences(&self) -> [usize; 3] {
        let mut all = Vec::new();
        self.collect(&mut all);
        let mut counts = [0; 3];
        for m in all {
            counts[m.index()] += 1;
        }
        counts
    }

    fn collect(&self, out: &mut Vec<Metavar>) {
        match self {
            Pattern::Meta(m) => out.push(*m),
            Pattern::Not(p) => p.collect(out),
            Pattern::And(l, r) | Pattern::Or(l, r) | Pattern::Imp(l, r) => {
                l.collect(out);
                r.collect(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub id: SchemaId,
    pub pattern: Pattern,
}

fn m(v: Metavar) -> Pattern {
    Pattern::Meta(v)
}
fn imp(l: Pattern, r: Pattern) -> Pattern {
    Pattern::Imp(Box::new(l), Box::new(r))
}
fn and(l: Pattern, r: Pattern) -> Pattern {
    Pattern::And(Box::new(l), Box::new(r))
}
fn or(l: Pattern, r: Pattern) -> Pattern {
    Pattern::Or(Box::new(l), Box::new(r))
}
fn not(p: Pattern) -> Pattern {
    Pattern::Not(Box::new(p))
}

impl Schema {
    pub fn get(id: SchemaId) -> Schema {
        use Metavar::{A, B, C};
        let pattern = match id {
            // A -> (B -> A)
            SchemaId::Ax1 => imp(m(A), imp(m(B), m(A))),
            // (A -> B) -> ((A -> (B -> C)) -> (A -> C))
            SchemaId::Ax2 => imp(
                imp(m(A), m(B)),
                imp(imp(m(A), imp(m(B), m(C))), imp(m(A), m(C))),
            ),
            // A -> (B -> A & B)
            SchemaId::Ax3 => imp(m(A), imp(m(B), and(m(A), m(B)))),
            SchemaId::Ax4 => imp(and(m(A), m(B)), m(A)),
            SchemaId::Ax5 => imp(and(m(A), m(B)), m(B)),
            SchemaId::Ax6 => imp(m(A), or(m(A), m(B))),
            SchemaId::Ax7 => imp(m(B), or(m(A), m(B))),
            // (A -> C) -> ((B -> C) -> (A | B -> C))
            SchemaId::Ax8 => imp(
                imp(m(A), m(C)),
                imp(imp(m(B), m(C)), imp(or(m(A), m(B)), m(C))),
            ),
            SchemaId::Ax9 => or(m(A), not(m(A))),
            // B -> (~B -> A)
            SchemaId::Ax10 => imp(m(B), imp(not(m(B)), m(A))),
            // (A & (A -> B)) -> B
            SchemaId::Assertion => imp(and(m(A), imp(m(A), m(B))), m(B)),
        };
        Schema { id, pattern }
    }

    pub fn all() -> Vec<Schema> {
        SchemaId::ALL.into_iter().map(Schema::get).collect()
    }
}

/// Partial map from metavariables to formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MatchAssignment {
    slots: [Option<Formula>; 3],
}

impl MatchAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, v: Metavar, f: Formula) -> Self {
        self.slots[v.index()] = Some(f);
        self
    }

    pub fn get(&self, v: Metavar) -> Option<&Formula> {
        self.slots[v.index()].as_ref()
    }

    pub fn bindings(&self) -> impl Iterator<Item = (Metavar, &Formula)> {
        [Metavar::A, Metavar::B, Metavar::C]
            .into_iter()
            .filter_map(|v| self.get(v).map(|f| (v, f)))
    }
}

fn match_pattern(p: &Pattern, f: &Formula, sigma: &mut MatchAssignment) -> bool {
    match (p, f) {
        (Pattern::Meta(v), _) => match &sigma.slots[v.index()] {
            Some(bound) => alpha_eq(bound, f),
            None => {
                sigma.slots[v.index()] = Some(f.clone());
                true
            }
        },
        (Pattern::Not(p), Formula::Not(g)) => match_pattern(p, g, sigma),
        (Pattern::And(pl, pr), Formula::And(l, r))
        | (Pattern::Or(pl, pr), Formula::Or(l, r))
        | (Pattern::Imp(pl, pr), Formula::Imp(l, r)) => match_pattern(pl, l, sigma) && match_pattern(pr, r, sigma),
        _ => false,
    }
}

/// The assignment under which `s` instantiates to `f`, if any. Patterns
/// are matched left to right; a repeated metavariable must meet an
/// alpha-equivalent formula at each later occurrence.
pub fn match_schema(s: &Schema, f: &Formula) -> Option<MatchAssignment> {
    let mut sigma = MatchAssignment::new();
    match_pattern(&s.pattern, f, &mut sigma).then_some(sigma)
}

pub fn instantiate_schema(s: &Schema, sigma: &MatchAssignment) -> Result<Formula, SchemaError> {
    instantiate_pattern(&s.pattern, sigma)
}

pub fn instantiate_pattern(p: &Pattern, sigma: &MatchAssignment) -> Result<Formula, SchemaError> {
    Ok(match p {
        Pattern::Meta(v) => sigma.get(*v).cloned().ok_or(SchemaError::UnboundMetavar(v.letter()))?,
        Pattern::Not(p) => Formula::not(instantiate_pattern(p, sigma)?),
        Pattern::And(l, r) => Formula::and(instantiate_pattern(l, sigma)?, instantiate_pattern(r, sigma)?),
        Pattern::Or(l, r) => Formula::or(instantiate_pattern(l, sigma)?, instantiate_pattern(r, sigma)?),
        Pattern::Imp(l, r) => Formula::imp(instantiate_pattern(l, sigma)?, instantiate_pattern(r, sigma)?),
    })
}

/// Every schema `f` instantiates, in id order.
pub fn classify_axiom(f: &Formula) -> Vec<SchemaId> {
    SchemaId::ALL
        .into_iter()
        .filter(|id| match_schema(&id.schema(), f).is_some())
        .collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SharingVerdict {
    Shared,
    Violation,
    NotAnImplication,
}

impl fmt::Display for SharingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SharingVerdict::Shared => "shared",
            SharingVerdict::Violation => "violation",
            SharingVerdict::NotAnImplication => "not-an-implication",
        })
    }
}

/// Variable-sharing test on the top-level implication of `f`.
pub fn check_variable_sharing(f: &Formula) -> SharingVerdict {
    match f {
        Formula::Imp(l, r) => {
            if l.atoms().intersection(&r.atoms()).next().is_some() {
                SharingVerdict::Shared
            } else {
                SharingVerdict::Violation
            }
        }
        _ => SharingVerdict::NotAnImplication,
    }
}
