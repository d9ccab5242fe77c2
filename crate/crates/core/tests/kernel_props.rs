mod common;

use common::{arb_script, mp_minor, sample_blocked_sets};
use lpsharp::{
    check_script, BlockedSetSpec, DerivationScript, Formula, Judgment, Mode, RejectReason, Rule, Step, StepStatus,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Wraps the `k`-th formula-position node (pre-order) in a negation.
fn negate_node(f: &Formula, k: &mut usize) -> Formula {
    if *k == 0 {
        *k = usize::MAX;
        return Formula::not(f.clone());
    }
    *k -= 1;
    match f {
        Formula::Not(g) => Formula::not(negate_node(g, k)),
        Formula::And(l, r) => {
            let l = negate_node(l, k);
            Formula::and(l, negate_node(r, k))
        }
        Formula::Or(l, r) => {
            let l = negate_node(l, k);
            Formula::or(l, negate_node(r, k))
        }
        Formula::Imp(l, r) => {
            let l = negate_node(l, k);
            Formula::imp(l, negate_node(r, k))
        }
        _ => f.clone(),
    }
}

fn count_nodes(f: &Formula) -> usize {
    match f {
        Formula::Not(g) => 1 + count_nodes(g),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => 1 + count_nodes(l) + count_nodes(r),
        _ => 1,
    }
}

proptest! {
    #![proptest_config(common::config(300))]

    #[test]
    fn restricted_acceptance_implies_unrestricted(script in arb_script()) {
        let free = check_script(&script, Mode::Unrestricted, &BlockedSetSpec::Empty);
        for blocked in sample_blocked_sets(&script) {
            let restricted = check_script(&script, Mode::Restricted, &blocked);
            for (r, u) in restricted.steps.iter().zip(&free.steps) {
                if r.status.is_ok() {
                    prop_assert!(u.status.is_ok(), "step {} under {}", r.id, blocked);
                }
            }
            if restricted.all_ok() {
                prop_assert!(restricted.same_outcome(&free));
            }
        }
    }

    #[test]
    fn checking_is_deterministic(script in arb_script()) {
        for blocked in sample_blocked_sets(&script) {
            let a = check_script(&script, Mode::Restricted, &blocked);
            let b = check_script(&script.clone(), Mode::Restricted, &blocked.clone());
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn checker_accepts_exactly_the_rule_output(script in arb_script(), seed in any::<u64>()) {
        let report = check_script(&script, Mode::Unrestricted, &BlockedSetSpec::Empty);
        let mut rng = StdRng::seed_from_u64(seed);
        for (k, rec) in report.steps.iter().enumerate() {
            if !rec.status.is_ok() {
                continue;
            }
            let original = &script.steps[k];
            let succ = &original.judgment.succedent;
            let mut at = rng.gen_range(0..count_nodes(succ));
            let mutated = Judgment {
                antecedent: original.judgment.antecedent.clone(),
                succedent: negate_node(succ, &mut at),
            };
            let mut altered = script.clone();
            altered.steps[k] = Step::new(original.id.clone(), mutated, original.rule.clone());
            let again = check_script(&altered, Mode::Unrestricted, &BlockedSetSpec::Empty);
            match &again.steps[k].status {
                StepStatus::Rejected(RejectReason::Mismatch { expected }) => {
                    prop_assert!(expected.alpha_eq(&original.judgment));
                }
                other => prop_assert!(false, "step {} gave {}", original.id, other),
            }
        }
    }

    /// Blocking everything that is never a minor premise changes nothing.
    #[test]
    fn only_minor_premises_are_gated(script in arb_script()) {
        let minors: Vec<Formula> = script.steps.iter().filter_map(|s| mp_minor(&script, s)).collect();
        let others: Vec<Formula> = script
            .steps
            .iter()
            .map(|s| &s.judgment)
            .chain(&script.premises)
            .flat_map(|j| j.formulas().cloned().collect::<Vec<_>>())
            .filter(|f| !minors.iter().any(|m| script.env.equal_modulo_defs(f, m)))
            .collect();
        let blocked = BlockedSetSpec::Explicit(others);
        let restricted = check_script(&script, Mode::Restricted, &blocked);
        let free = check_script(&script, Mode::Unrestricted, &BlockedSetSpec::Empty);
        prop_assert!(restricted.same_outcome(&free));
    }
}

fn mp_script(minor_first: bool) -> DerivationScript {
    let mut script: DerivationScript = "premise p\npremise p -> q\n1: p by PREMISE(1)\n2: p -> q by PREMISE(2)\n3: q by MP(1, 2)\n"
        .parse()
        .unwrap();
    if !minor_first {
        script.steps[2].rule = Rule::Mp("2".into(), "1".into());
    }
    script
}

#[test]
fn conclusions_and_major_premises_may_be_blocked_formulas() {
    let blocked = BlockedSetSpec::Explicit(vec!["q".parse().unwrap(), "p -> q".parse().unwrap()]);
    for order in [true, false] {
        let report = check_script(&mp_script(order), Mode::Restricted, &blocked);
        assert!(report.all_ok(), "{report}");
    }
    let blocked = BlockedSetSpec::Explicit(vec!["p".parse().unwrap()]);
    for order in [true, false] {
        let report = check_script(&mp_script(order), Mode::Restricted, &blocked);
        assert_eq!(report.blocked_at.as_deref(), Some("3"));
    }
}
