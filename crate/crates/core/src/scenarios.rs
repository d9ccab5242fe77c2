//! The two Curry derivations, as checkable scripts.
//!
//! Both scripts number their main-line steps 1 to 6. Steps that split a
//! biconditional, or that set up the diagonal sentence, carry auxiliary
//! labels (`0a`, `4a`, ...).

use std::fmt;
use std::str::FromStr;

use crate::blocked::{make_curry_set, make_curry_truth, BlockedSetSpec, Delta, TRUTH_PREDICATE};
use crate::defs::DefEnv;
use crate::formula::{Formula, Term};
use crate::kernel::{check_script, CheckReport, Judgment, Mode, Rule};
use crate::schema::SchemaId;
use crate::script::{DerivationScript, Step};

/// Name of the diagonal sentence in the truth variant.
pub const DIAGONAL: &str = "C";

/// Bound variable of the Curry set.
const X: &str = "x";

/// `{x | x in x -> f}`.
pub fn curry_set(falsum: &Formula) -> Term {
    let self_member = Formula::member(Term::var(X), Term::var(X));
    Term::set_abs(X, Formula::imp(self_member, falsum.clone()))
}

/// `C[F] in C[F]`.
pub fn curry_self_membership(falsum: &Formula) -> Formula {
    let t = curry_set(falsum);
    Formula::member(t.clone(), t)
}

fn step(id: &str, f: Formula, rule: Rule) -> Step {
    Step::new(id, Judgment::categorical(f), rule)
}

/// Set-theoretic Curry derivation of `falsum` from unrestricted abstraction
/// and contraction.
pub fn curry_set_script(falsum: &Formula) -> DerivationScript {
    let f = falsum.clone();
    let x_in_x = Formula::member(Term::var(X), Term::var(X));
    let body = Formula::imp(x_in_x, f.clone());
    let set = curry_set(&f);
    let cc = curry_self_membership(&f);
    let cc_to_f = Formula::imp(cc.clone(), f.clone());
    let abstraction = Formula::iff(Formula::member(Term::var(X), set.clone()), body.clone());
    let steps = vec![
        step(
            "1",
            abstraction,
            Rule::Abstraction {
                var: X.into(),
                body,
            },
        ),
        step(
            "2",
            Formula::iff(cc.clone(), cc_to_f.clone()),
            Rule::USpec {
                from: "1".into(),
                term: set,
            },
        ),
        step("3", Formula::imp(cc.clone(), cc_to_f.clone()), Rule::SimpL("2".into())),
        step("4", cc_to_f.clone(), Rule::Contraction("3".into())),
        step("4a", Formula::imp(cc_to_f, cc.clone()), Rule::SimpR("2".into())),
        step("5", cc, Rule::Mp("4".into(), "4a".into())),
        step("6", f, Rule::Mp("5".into(), "4".into())),
    ];
    DerivationScript {
        env: DefEnv::new(),
        premises: vec![],
        steps,
    }
}

/// Truth-theoretic Curry derivation of `falsum` from the T-schema and the
/// diagonal sentence `C := T[C] -> falsum`.
pub fn curry_truth_script(falsum: &Formula) -> DerivationScript {
    let f = falsum.clone();
    let c = Formula::constant(DIAGONAL);
    let t_c = Formula::truth(Term::constant(DIAGONAL));
    let definiens = Formula::imp(t_c.clone(), f.clone());
    let env = DefEnv::new()
        .with(DIAGONAL, definiens.clone())
        .expect("diagonal definition is well formed");
    let c_to_f = Formula::imp(c.clone(), f.clone());
    let steps = vec![
        step("0a", Formula::iff(c.clone(), definiens), Rule::Def(DIAGONAL.into())),
        step("0b", Formula::iff(t_c, c.clone()), Rule::TSchema(c.clone())),
        step(
            "1",
            Formula::iff(c.clone(), c_to_f.clone()),
            Rule::SubstEq {
                eq: "0b".into(),
                target: "0a".into(),
                reverse: false,
            },
        ),
        step(
            "2",
            Formula::imp(Formula::and(c.clone(), c_to_f.clone()), f.clone()),
            Rule::Axiom {
                schema: SchemaId::Assertion,
                instance: Formula::imp(Formula::and(c.clone(), c_to_f.clone()), f.clone()),
            },
        ),
        step(
            "3",
            Formula::imp(Formula::and(c.clone(), c.clone()), f.clone()),
            Rule::SubstEq {
                eq: "1".into(),
                target: "2".into(),
                reverse: true,
            },
        ),
        step("4", c_to_f.clone(), Rule::Idem("3".into())),
        step("4a", Formula::imp(c_to_f, c.clone()), Rule::SimpR("1".into())),
        step("5", c, Rule::Mp("4".into(), "4a".into())),
        step("6", f, Rule::Mp("5".into(), "4".into())),
    ];
    DerivationScript {
        env,
        premises: vec![],
        steps,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    Truth,
    Set,
}

impl Variant {
    pub fn script(self, falsum: &Formula) -> DerivationScript {
        match self {
            Variant::Truth => curry_truth_script(falsum),
            Variant::Set => curry_set_script(falsum),
        }
    }

    /// The blocked set that stops this variant's final step.
    pub fn default_blocked(self) -> BlockedSetSpec {
        match self {
            Variant::Truth => make_curry_truth(Delta::All, [TRUTH_PREDICATE.to_string()]),
            Variant::Set => make_curry_set(Delta::All),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(match self {
            Variant::Truth => "curry-truth",
            Variant::Set => "curry-set",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "curry-truth" | "truth" => Ok(Variant::Truth),
            "curry-set" | "set" => Ok(Variant::Set),
            other => Err(format!("unknown variant `{other}` (expected curry-set or curry-truth)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub variant: Variant,
    pub falsum: Formula,
    pub mode: Mode,
    pub blocked: BlockedSetSpec,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> CheckReport {
    check_script(&cfg.variant.script(&cfg.falsum), cfg.mode, &cfg.blocked)
}
