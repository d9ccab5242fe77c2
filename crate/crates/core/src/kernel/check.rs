use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::rules::{mp_split, rule_output, Rule, RuleContext, RuleId};
use super::{Judgment, Mode};
use crate::blocked::BlockedSetSpec;
use crate::formula::Formula;
use crate::script::{DerivationScript, Step};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// Restricted MP whose minor premise lies in the blocked set.
    BlockedPremise { premise: Formula },
    /// The claimed judgment differs from what the rule yields.
    Mismatch { expected: Judgment },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepStatus {
    Ok,
    Rejected(RejectReason),
    Malformed(String),
}

impl StepStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, StepStatus::Ok)
    }

    pub fn is_blocked(&self) -> bool {
        matches!(self, StepStatus::Rejected(RejectReason::BlockedPremise { .. }))
    }

    pub fn label(&self) -> &'static str {
        match self {
            StepStatus::Ok => "ok",
            StepStatus::Rejected(_) => "rejected",
            StepStatus::Malformed(_) => "malformed",
        }
    }

    pub fn reason(&self) -> Option<String> {
        match self {
            StepStatus::Ok => None,
            StepStatus::Rejected(RejectReason::BlockedPremise { premise }) => {
                Some(format!("blocked-premise: `{premise}` is in the blocked set"))
            }
            StepStatus::Rejected(RejectReason::Mismatch { expected }) => {
                Some(format!("mismatch: rule yields `{expected}`"))
            }
            StepStatus::Malformed(why) => Some(why.clone()),
        }
    }
}

impl fmt::Display for StepStatus {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason() {
            Some(r) => write!(out, "{} ({r})", self.label()),
            None => out.write_str(self.label()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub id: String,
    pub rule: RuleId,
    pub auxiliary: bool,
    pub judgment: Judgment,
    pub status: StepStatus,
}

impl Serialize for StepRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StepRecord", 6)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("rule", self.rule.name())?;
        st.serialize_field("auxiliary", &self.auxiliary)?;
        st.serialize_field("judgment", &self.judgment)?;
        st.serialize_field("status", self.status.label())?;
        st.serialize_field("reason", &self.status.reason())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub mode: Mode,
    #[serde(serialize_with = "display")]
    pub blocked: BlockedSetSpec,
    pub steps: Vec<StepRecord>,
    pub blocked_at: Option<String>,
    pub conclusion: Option<Judgment>,
}

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl CheckReport {
    pub fn all_ok(&self) -> bool {
        self.steps.iter().all(|s| s.status.is_ok())
    }

    pub fn status_of(&self, id: &str) -> Option<&StepStatus> {
        self.steps.iter().find(|s| s.id == id).map(|s| &s.status)
    }

    /// Outcome-only comparison, ignoring how the run was configured.
    pub fn same_outcome(&self, other: &CheckReport) -> bool {
        self.steps == other.steps && self.blocked_at == other.blocked_at && self.conclusion == other.conclusion
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "mode: {}", self.mode)?;
        writeln!(out, "blocked: {}", self.blocked)?;
        for step in &self.steps {
            let aux = if step.auxiliary { " (auxiliary)" } else { "" };
            writeln!(out, "step {}{aux}: {} by {}: {}", step.id, step.judgment, step.rule, step.status)?;
        }
        match &self.blocked_at {
            Some(id) => writeln!(out, "blocked at: step {id}")?,
            None => writeln!(out, "blocked at: -")?,
        }
        match &self.conclusion {
            Some(j) => writeln!(out, "conclusion: {j}"),
            None => writeln!(out, "conclusion: -"),
        }
    }
}

/// Checks one step against the records of the steps before it.
pub fn check_step(
    ctx: &RuleContext<'_>,
    prior: &[StepRecord],
    step: &Step,
    mode: Mode,
    blocked: &BlockedSetSpec,
) -> StepStatus {
    let mut premises = Vec::new();
    for label in step.rule.premises() {
        match prior.iter().find(|r| &r.id == label) {
            None => return StepStatus::Malformed(format!("premise `{label}` is not an earlier step")),
            Some(r) if !r.status.is_ok() => {
                return StepStatus::Malformed(format!("premise `{label}` did not check"));
            }
            Some(r) => premises.push(&r.judgment),
        }
    }
    let mentioned = step
        .judgment
        .formulas()
        .flat_map(Formula::constants)
        .chain(step.rule.constants());
    for c in mentioned {
        if ctx.env.get(&c).is_none() {
            return StepStatus::Malformed(format!("constant `{c}` is not defined"));
        }
    }
    let expected = match rule_output(&step.rule, &premises, ctx) {
        Ok(j) => j,
        Err(e) => return StepStatus::Malformed(e.to_string()),
    };
    if mode == Mode::Restricted {
        if let Rule::Mp(..) = step.rule {
            // rule_output succeeded, so exactly one order fits
            let (a, b) = (&premises[0].succedent, &premises[1].succedent);
            let (minor, _) = mp_split(a, b).expect("checked by rule_output");
            let minor = if minor == 0 { a } else { b };
            if blocked.blocks(minor, ctx.env) {
                return StepStatus::Rejected(RejectReason::BlockedPremise { premise: minor.clone() });
            }
        }
    }
    if step.judgment.alpha_eq(&expected) {
        StepStatus::Ok
    } else {
        StepStatus::Rejected(RejectReason::Mismatch { expected })
    }
}

/// Checks every step in order. A failed step does not stop the run; steps
/// that cite it are reported malformed.
pub fn check_script(script: &DerivationScript, mode: Mode, blocked: &BlockedSetSpec) -> CheckReport {
    let ctx = RuleContext::new(&script.env, &script.premises);
    let mut records: Vec<StepRecord> = Vec::with_capacity(script.steps.len());
    for step in &script.steps {
        let status = if records.iter().any(|r| r.id == step.id) {
            StepStatus::Malformed(format!("duplicate step id `{}`", step.id))
        } else {
            check_step(&ctx, &records, step, mode, blocked)
        };
        records.push(StepRecord {
            id: step.id.clone(),
            rule: step.rule.id(),
            auxiliary: step.is_auxiliary(),
            judgment: step.judgment.clone(),
            status,
        });
    }
    let blocked_at = records.iter().find(|r| r.status.is_blocked()).map(|r| r.id.clone());
    let conclusion = match records.last() {
        Some(last) if records.iter().all(|r| r.status.is_ok()) => Some(last.judgment.clone()),
        _ => None,
    };
    CheckReport {
        mode,
        blocked: blocked.clone(),
        steps: records,
        blocked_at,
        conclusion,
    }
}
