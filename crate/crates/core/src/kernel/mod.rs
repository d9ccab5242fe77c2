//! The proof kernel.
//!
//! Judgments come in two forms: categorical `|- A` and binary `A |- B`.
//! Rules declare which forms they consume; see [`Rule`].

mod check;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::formula::{alpha_eq, Formula};

pub use check::{check_script, check_step, CheckReport, RejectReason, StepRecord, StepStatus};
pub use rules::{rule_output, Rule, RuleContext, RuleError, RuleId};
pub(crate) use rules::mp_split;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Judgment {
    pub antecedent: Option<Formula>,
    pub succedent: Formula,
}

impl Judgment {
    pub fn categorical(succedent: Formula) -> Self {
        Judgment {
            antecedent: None,
            succedent,
        }
    }

    pub fn binary(antecedent: Formula, succedent: Formula) -> Self {
        Judgment {
            antecedent: Some(antecedent),
            succedent,
        }
    }

    pub fn is_categorical(&self) -> bool {
        self.antecedent.is_none()
    }

    pub fn size(&self) -> usize {
        self.succedent.size() + self.antecedent.as_ref().map_or(0, Formula::size)
    }

    pub fn alpha_eq(&self, other: &Judgment) -> bool {
        let same_antecedent = match (&self.antecedent, &other.antecedent) {
            (None, None) => true,
            (Some(a), Some(b)) => alpha_eq(a, b),
            _ => false,
        };
        same_antecedent && alpha_eq(&self.succedent, &other.succedent)
    }

    /// Representative of the alpha-equivalence class, for hashing.
    pub fn canonical(&self) -> Judgment {
        Judgment {
            antecedent: self.antecedent.as_ref().map(Formula::canonical),
            succedent: self.succedent.canonical(),
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(std::iter::once(&self.succedent))
    }
}

impl fmt::Display for Judgment {
    /// `|- A` or `A |- B`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.antecedent {
            Some(a) => write!(out, "{a} |- {}", self.succedent),
            None => write!(out, "|- {}", self.succedent),
        }
    }
}

impl FromStr for Judgment {
    type Err = crate::error::ParseError;

    /// Accepts `A |- B`, `|- B`, or a bare formula `B`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        crate::script::parse_judgment(text)
    }
}

impl Serialize for Judgment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Judgment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Unrestricted,
    Restricted,
}

impl fmt::Display for Mode {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            Mode::Unrestricted => "unrestricted",
            Mode::Restricted => "restricted",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unrestricted" => Ok(Mode::Unrestricted),
            "restricted" => Ok(Mode::Restricted),
            other => Err(format!("unknown mode `{other}` (expected unrestricted or restricted)")),
        }
    }
}
