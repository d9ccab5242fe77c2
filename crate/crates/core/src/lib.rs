//! A small proof kernel for a paraconsistent logic with naive truth and
//! naive comprehension, in which modus ponens can be restricted so that
//! Curry-style derivations of arbitrary conclusions are blocked.
//!
//! ```
//! use lpsharp::{run_scenario, ScenarioConfig, Variant, Mode, parse_formula};
//!
//! let report = run_scenario(&ScenarioConfig {
//!     variant: Variant::Set,
//!     falsum: parse_formula("f").unwrap(),
//!     mode: Mode::Restricted,
//!     blocked: Variant::Set.default_blocked(),
//! });
//! assert_eq!(report.blocked_at.as_deref(), Some("6"));
//! ```

pub mod blocked;
pub mod defs;
pub mod error;
pub mod formula;
pub mod kernel;
pub mod lint;
pub mod saturate;
pub mod scenarios;
pub mod schema;
pub mod script;
pub mod syntax;

pub use blocked::{is_blocked, make_curry_set, make_curry_truth, make_empty, BlockedSetSpec, Delta, TRUTH_PREDICATE};
pub use defs::{unfold_def, DefEnv};
pub use error::{FormulaError, ParseError, SchemaError};
pub use formula::{alpha_eq, atoms_of, formulas_equal, substitute, Formula, Ident, Term};
pub use kernel::{
    check_script, check_step, rule_output, CheckReport, Judgment, Mode, RejectReason, Rule, RuleContext, RuleError,
    RuleId, StepRecord, StepStatus,
};
pub use lint::{lint_formula, lint_text, Finding, LintFlag, LintReport};
pub use saturate::{derives_within, saturate, Derivability, Justification, SaturationConfig, SaturationResult, Witness};
pub use scenarios::{curry_set, curry_set_script, curry_truth_script, run_scenario, ScenarioConfig, Variant};
pub use schema::{
    check_variable_sharing, classify_axiom, instantiate_schema, match_schema, MatchAssignment, Metavar, Pattern,
    Schema, SchemaId, SharingVerdict,
};
pub use script::{parse_judgment, parse_script, DerivationScript, Step};
pub use syntax::{parse_formula, parse_term, render_formula, render_term};
