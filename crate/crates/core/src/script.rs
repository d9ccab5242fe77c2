//! Derivation scripts and their line-oriented text format.
//!
//! ```text
//! # comment
//! def C := T[C] -> f
//! premise p -> q
//! premise a & b |- c
//! 1: x in {x | x in x -> f} <-> (x in x -> f) by ABSTRACTION(x, x in x -> f)
//! 4a: a |- b by RESID(3)
//! ```
//!
//! A step label is alphanumeric. Labels that are plain numbers mark the
//! main line of a derivation; any other label marks an auxiliary step.
//! A categorical judgment may be written with or without a leading `|-`.

use std::fmt;
use std::str::FromStr;

use crate::defs::DefEnv;
use crate::error::ParseError;
use crate::formula::Formula;
use crate::kernel::{Judgment, Rule, RuleId};
use crate::schema::SchemaId;
use crate::syntax::{parse_formula, parse_term, render_formula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub judgment: Judgment,
    pub rule: Rule,
}

impl Step {
    pub fn new(id: impl Into<String>, judgment: Judgment, rule: Rule) -> Self {
        Step {
            id: id.into(),
            judgment,
            rule,
        }
    }

    pub fn is_auxiliary(&self) -> bool {
        !self.id.chars().all(|c| c.is_ascii_digit())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationScript {
    pub env: DefEnv,
    pub premises: Vec<Judgment>,
    pub steps: Vec<Step>,
}

impl DerivationScript {
    pub fn step(&self, id: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// Steps whose labels are plain numbers.
    pub fn main_steps(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| !s.is_auxiliary())
    }
}

fn is_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Byte offset of the turnstile `|-`, if any.
fn find_turnstile(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    (0..bytes.len().saturating_sub(1)).find(|&i| bytes[i] == b'|' && bytes[i + 1] == b'-' && bytes.get(i + 2) != Some(&b'>'))
}

fn parse_formula_at(text: &str, line: usize, col: usize) -> Result<Formula, ParseError> {
    parse_formula(text).map_err(|e| e.relocate(line, col - 1))
}

fn judgment_at(text: &str, line: usize, col: usize) -> Result<Judgment, ParseError> {
    match find_turnstile(text) {
        None => Ok(Judgment::categorical(parse_formula_at(text, line, col)?)),
        Some(at) => {
            let succedent = parse_formula_at(&text[at + 2..], line, col + at + 2)?;
            let ante = &text[..at];
            if ante.trim().is_empty() {
                Ok(Judgment::categorical(succedent))
            } else {
                Ok(Judgment::binary(parse_formula_at(ante, line, col)?, succedent))
            }
        }
    }
}

pub fn parse_judgment(text: &str) -> Result<Judgment, ParseError> {
    judgment_at(text, 1, 1)
}

/// Offset of the first standalone word `by`.
fn find_by(text: &str) -> Option<usize> {
    let word = |c: u8| c.is_ascii_alphanumeric() || c == b'_';
    let bytes = text.as_bytes();
    (0..bytes.len().saturating_sub(1)).find(|&i| {
        &bytes[i..i + 2] == b"by"
            && (i == 0 || !word(bytes[i - 1]))
            && bytes.get(i + 2).is_none_or(|&c| !word(c))
    })
}

/// Splits on commas outside brackets, returning each piece with its offset.
fn split_args(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    if !text[start..].trim().is_empty() || !out.is_empty() {
        out.push((start, &text[start..]));
    }
    out
}

fn parse_rule(text: &str, line: usize, col: usize, judgment: &Judgment) -> Result<Rule, ParseError> {
    let err = |c: usize, m: String| ParseError::new(line, c, m);
    let text_trim = text.trim_end();
    let lead = text.len() - text.trim_start().len();
    let text_trim = &text_trim[lead..];
    let col = col + lead;
    let (name, args_text, args_col) = match text_trim.find('(') {
        Some(open) => {
            if !text_trim.ends_with(')') {
                return Err(err(col + text_trim.len(), "expected `)` closing the rule arguments".into()));
            }
            (&text_trim[..open], &text_trim[open + 1..text_trim.len() - 1], col + open + 1)
        }
        None => (text_trim, "", col + text_trim.len()),
    };
    let id: RuleId = name.trim().parse().map_err(|e: String| err(col, e))?;
    let args: Vec<(usize, &str)> = split_args(args_text)
        .into_iter()
        .map(|(off, a)| {
            let skip = a.len() - a.trim_start().len();
            (args_col + off + skip, a.trim())
        })
        .collect();
    let arity = |n: &[usize]| -> Result<(), ParseError> {
        if n.contains(&args.len()) {
            Ok(())
        } else {
            let want: Vec<String> = n.iter().map(|k| k.to_string()).collect();
            Err(err(
                args_col,
                format!("{id} takes {} argument(s), got {}", want.join(" or "), args.len()),
            ))
        }
    };
    let label = |k: usize| -> Result<String, ParseError> {
        let (c, a) = args[k];
        if is_label(a) {
            Ok(a.to_string())
        } else {
            Err(err(c, format!("`{a}` is not a step label")))
        }
    };
    let formula = |k: usize| -> Result<Formula, ParseError> {
        let (c, a) = args[k];
        parse_formula_at(a, line, c)
    };
    Ok(match id {
        RuleId::Axiom => {
            arity(&[1, 2])?;
            let (c, s) = args[0];
            let schema: SchemaId = s.parse().map_err(|e: crate::error::SchemaError| err(c, e.to_string()))?;
            let instance = if args.len() == 2 { formula(1)? } else { judgment.succedent.clone() };
            Rule::Axiom { schema, instance }
        }
        RuleId::Premise => {
            arity(&[1])?;
            let (c, k) = args[0];
            Rule::Premise(k.parse().map_err(|_| err(c, format!("`{k}` is not a premise number")))?)
        }
        RuleId::Def => {
            arity(&[1])?;
            Rule::Def(args[0].1.to_string())
        }
        RuleId::TSchema => {
            arity(&[1])?;
            Rule::TSchema(formula(0)?)
        }
        RuleId::Abstraction => {
            arity(&[2])?;
            Rule::Abstraction {
                var: args[0].1.to_string(),
                body: formula(1)?,
            }
        }
        RuleId::USpec => {
            arity(&[2])?;
            let (c, t) = args[1];
            Rule::USpec {
                from: label(0)?,
                term: parse_term(t).map_err(|e| e.relocate(line, c - 1))?,
            }
        }
        RuleId::Mp | RuleId::Mt | RuleId::Adj | RuleId::Trans | RuleId::ConjGlb => {
            arity(&[2])?;
            let (i, j) = (label(0)?, label(1)?);
            match id {
                RuleId::Mp => Rule::Mp(i, j),
                RuleId::Mt => Rule::Mt(i, j),
                RuleId::Adj => Rule::Adj(i, j),
                RuleId::Trans => Rule::Trans(i, j),
                _ => Rule::ConjGlb(i, j),
            }
        }
        RuleId::SimpL
        | RuleId::SimpR
        | RuleId::Contraction
        | RuleId::Idem
        | RuleId::ConjSplitL
        | RuleId::ConjSplitR
        | RuleId::Resid
        | RuleId::Deresid => {
            arity(&[1])?;
            let i = label(0)?;
            match id {
                RuleId::SimpL => Rule::SimpL(i),
                RuleId::SimpR => Rule::SimpR(i),
                RuleId::Contraction => Rule::Contraction(i),
                RuleId::Idem => Rule::Idem(i),
                RuleId::ConjSplitL => Rule::ConjSplitL(i),
                RuleId::ConjSplitR => Rule::ConjSplitR(i),
                RuleId::Resid => Rule::Resid(i),
                _ => Rule::Deresid(i),
            }
        }
        RuleId::SubstEq => {
            arity(&[2, 3])?;
            let reverse = match args.get(2) {
                None => false,
                Some((_, "rev")) => true,
                Some((c, other)) => return Err(err(*c, format!("expected `rev`, found `{other}`"))),
            };
            Rule::SubstEq {
                eq: label(0)?,
                target: label(1)?,
                reverse,
            }
        }
        RuleId::TEnthymemeOut | RuleId::TEnthymemeIn => {
            arity(&[2])?;
            let background = label(0)?;
            let sentence = formula(1)?;
            if id == RuleId::TEnthymemeOut {
                Rule::TEnthymemeOut { background, sentence }
            } else {
                Rule::TEnthymemeIn { background, sentence }
            }
        }
    })
}

impl FromStr for DerivationScript {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut script = DerivationScript::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let indent = raw.len() - raw.trim_start().len();
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let col = indent + 1;
            if let Some(rest) = body.strip_prefix("def ") {
                let Some(eq) = rest.find(":=") else {
                    return Err(ParseError::new(line, col, "expected `def <Name> := <formula>`"));
                };
                let name = rest[..eq].trim();
                let definiens = parse_formula_at(&rest[eq + 2..], line, col + 4 + eq + 2)?;
                script
                    .env
                    .define(name, definiens)
                    .map_err(|e| ParseError::new(line, col, e.to_string()))?;
            } else if let Some(rest) = body.strip_prefix("premise ") {
                script.premises.push(judgment_at(rest, line, col + 8)?);
            } else {
                let Some(colon) = body.find(':') else {
                    return Err(ParseError::new(line, col, "expected `def`, `premise`, or `<label>: ...`"));
                };
                let id = body[..colon].trim();
                if !is_label(id) {
                    return Err(ParseError::new(line, col, format!("`{id}` is not a step label")));
                }
                if script.step(id).is_some() {
                    return Err(ParseError::new(line, col, format!("duplicate step label `{id}`")));
                }
                let rest = &body[colon + 1..];
                let rest_col = col + colon + 1;
                let by = find_by(rest).ok_or_else(|| ParseError::new(line, rest_col, "expected `by <RULE>(...)`"))?;
                let judgment = judgment_at(&rest[..by], line, rest_col)?;
                let rule = parse_rule(&rest[by + 2..], line, rest_col + by + 2, &judgment)?;
                script.steps.push(Step::new(id, judgment, rule));
            }
        }
        Ok(script)
    }
}

pub fn parse_script(text: &str) -> Result<DerivationScript, ParseError> {
    text.parse()
}

/// Judgment text as it appears on a script line: no leading turnstile for
/// categorical judgments.
fn line_judgment(j: &Judgment) -> String {
    match &j.antecedent {
        Some(a) => format!("{} |- {}", render_formula(a), render_formula(&j.succedent)),
        None => render_formula(&j.succedent),
    }
}

pub fn render_rule(rule: &Rule, judgment: &Judgment) -> String {
    let id = rule.id();
    let args: Vec<String> = match rule {
        Rule::Axiom { schema, instance } => {
            if judgment.is_categorical() && &judgment.succedent == instance {
                vec![schema.to_string()]
            } else {
                vec![schema.to_string(), render_formula(instance)]
            }
        }
        Rule::Premise(k) => vec![k.to_string()],
        Rule::Def(c) => vec![c.clone()],
        Rule::TSchema(a) => vec![render_formula(a)],
        Rule::Abstraction { var, body } => vec![var.clone(), render_formula(body)],
        Rule::USpec { from, term } => vec![from.clone(), term.to_string()],
        Rule::SubstEq { eq, target, reverse } => {
            let mut v = vec![eq.clone(), target.clone()];
            if *reverse {
                v.push("rev".into());
            }
            v
        }
        Rule::TEnthymemeOut { background, sentence } | Rule::TEnthymemeIn { background, sentence } => {
            vec![background.clone(), render_formula(sentence)]
        }
        other => other.premises().into_iter().cloned().collect(),
    };
    format!("{id}({})", args.join(", "))
}

impl fmt::Display for Step {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "{}: {} by {}",
            self.id,
            line_judgment(&self.judgment),
            render_rule(&self.rule, &self.judgment)
        )
    }
}

impl fmt::Display for DerivationScript {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, definiens) in self.env.iter() {
            writeln!(out, "def {name} := {definiens}")?;
        }
        for p in &self.premises {
            writeln!(out, "premise {}", line_judgment(p))?;
        }
        for step in &self.steps {
            writeln!(out, "{step}")?;
        }
        Ok(())
    }
}
