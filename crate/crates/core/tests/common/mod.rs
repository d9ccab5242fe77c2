//! Generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lpsharp::{
    curry_set_script, curry_truth_script, parse_formula, rule_output, DefEnv, DerivationScript, Formula, Judgment,
    Rule, RuleContext, SchemaId, Step, Term,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const ATOMS: [&str; 4] = ["p", "q", "r", "f"];
pub const VARS: [&str; 3] = ["x", "y", "z"];
pub const CONSTS: [&str; 2] = ["C", "D"];

// ---------------------------------------------------------------------------
// random formulas (rand)

/// Random formula with at most `budget` nodes. Variables are drawn from
/// `scope` when it is non-empty, and from [`VARS`] otherwise.
pub fn formula(rng: &mut StdRng, budget: usize, scope: &mut Vec<String>, closed: bool) -> Formula {
    if budget <= 1 {
        return leaf(rng);
    }
    if budget == 2 {
        return if rng.gen_bool(0.7) {
            Formula::not(leaf(rng))
        } else {
            Formula::truth(Term::constant(*CONSTS.choose(rng).unwrap()))
        };
    }
    match rng.gen_range(0..10) {
        0 => Formula::not(formula(rng, budget - 1, scope, closed)),
        // `a <-> b` spends each side twice
        1 if budget >= 7 => {
            let half = (budget - 3) / 2;
            let left = rng.gen_range(1..half);
            let l = formula(rng, left, scope, closed);
            let r = formula(rng, half - left, scope, closed);
            Formula::iff(l, r)
        }
        1..=6 => {
            let left = rng.gen_range(1..budget - 1);
            let l = formula(rng, left, scope, closed);
            let r = formula(rng, budget - 1 - left, scope, closed);
            match rng.gen_range(0..3) {
                0 => Formula::and(l, r),
                1 => Formula::or(l, r),
                _ => Formula::imp(l, r),
            }
        }
        7 | 8 => {
            let left = rng.gen_range(1..budget - 1);
            let l = term(rng, left, scope, closed);
            let r = term(rng, budget - 1 - left, scope, closed);
            Formula::member(l, r)
        }
        _ => Formula::truth(quotable(rng, budget - 1)),
    }
}

fn leaf(rng: &mut StdRng) -> Formula {
    if rng.gen_bool(0.15) {
        Formula::constant(*CONSTS.choose(rng).unwrap())
    } else {
        Formula::atom(*ATOMS.choose(rng).unwrap())
    }
}

fn var(rng: &mut StdRng, scope: &[String], closed: bool) -> String {
    if closed || (!scope.is_empty() && rng.gen_bool(0.7)) {
        scope.choose(rng).expect("caller checked scope").clone()
    } else {
        VARS.choose(rng).unwrap().to_string()
    }
}

/// A closed formula's name: a constant or a quotation.
fn quotable(rng: &mut StdRng, budget: usize) -> Term {
    if budget <= 1 || rng.gen_bool(0.2) {
        Term::constant(*CONSTS.choose(rng).unwrap())
    } else {
        // quotations are closed whatever the surrounding scope
        Term::quote(formula(rng, budget - 1, &mut Vec::new(), true))
    }
}

pub fn term(rng: &mut StdRng, budget: usize, scope: &mut Vec<String>, closed: bool) -> Term {
    let can_var = !closed || !scope.is_empty();
    if budget <= 1 {
        return if can_var {
            Term::var(var(rng, scope, closed))
        } else {
            Term::constant(*CONSTS.choose(rng).unwrap())
        };
    }
    match rng.gen_range(0..3) {
        0 if budget >= 2 => quotable(rng, budget),
        _ => {
            let x = VARS.choose(rng).unwrap().to_string();
            scope.push(x.clone());
            let body = formula(rng, budget - 1, scope, closed);
            scope.pop();
            Term::set_abs(x, body)
        }
    }
}

pub fn random_formula(rng: &mut StdRng, max_size: usize) -> Formula {
    let budget = rng.gen_range(1..=max_size);
    formula(rng, budget, &mut Vec::new(), false)
}

pub fn random_closed_formula(rng: &mut StdRng, max_size: usize) -> Formula {
    let budget = rng.gen_range(1..=max_size);
    formula(rng, budget, &mut Vec::new(), true)
}

/// Formula over atoms only, with `~ & | ->`.
pub fn random_propositional(rng: &mut StdRng, max_size: usize, atoms: &[&str]) -> Formula {
    fn go(rng: &mut StdRng, budget: usize, atoms: &[&str]) -> Formula {
        if budget <= 1 {
            return Formula::atom(*atoms.choose(rng).unwrap());
        }
        if budget == 2 || rng.gen_bool(0.2) {
            return Formula::not(go(rng, budget - 1, atoms));
        }
        let left = rng.gen_range(1..budget - 1);
        let l = go(rng, left, atoms);
        let r = go(rng, budget - 1 - left, atoms);
        match rng.gen_range(0..3) {
            0 => Formula::and(l, r),
            1 => Formula::or(l, r),
            _ => Formula::imp(l, r),
        }
    }
    let budget = rng.gen_range(1..=max_size);
    go(rng, budget, atoms)
}

// ---------------------------------------------------------------------------
// proptest strategies

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

pub fn arb_propositional() -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(ATOMS.to_vec()).prop_map(Formula::atom);
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::imp(l, r)),
        ]
    })
}

/// Formulas in the full language, built by the rand generator from a
/// proptest-chosen seed.
pub fn arb_formula(max_size: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = <StdRng as rand::SeedableRng>::seed_from_u64(seed);
        random_formula(&mut rng, max_size)
    })
}

pub fn arb_closed_formula(max_size: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = <StdRng as rand::SeedableRng>::seed_from_u64(seed);
        random_closed_formula(&mut rng, max_size)
    })
}

// ---------------------------------------------------------------------------
// alpha renaming

/// Renames every binder to a fresh name `wN`, which the generators never
/// produce.
pub fn rename_binders(f: &Formula, next: &mut usize, scope: &mut Vec<(String, String)>) -> Formula {
    fn term(t: &Term, next: &mut usize, scope: &mut Vec<(String, String)>) -> Term {
        match t {
            Term::Var(x) => match scope.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Term::var(new.clone()),
                None => t.clone(),
            },
            Term::SetAbs(x, body) => {
                let fresh = format!("w{next}");
                *next += 1;
                scope.push((x.clone(), fresh.clone()));
                let body = rename_binders(body, next, scope);
                scope.pop();
                Term::set_abs(fresh, body)
            }
            Term::Quote(g) => Term::quote(rename_binders(g, next, &mut Vec::new())),
            Term::Const(_) => t.clone(),
        }
    }
    match f {
        Formula::Atom(_) | Formula::Const(_) => f.clone(),
        Formula::Truth(t) => Formula::truth(term(t, next, scope)),
        Formula::Member(l, r) => {
            let l = term(l, next, scope);
            Formula::member(l, term(r, next, scope))
        }
        Formula::Not(g) => Formula::not(rename_binders(g, next, scope)),
        Formula::And(l, r) => {
            let l = rename_binders(l, next, scope);
            Formula::and(l, rename_binders(r, next, scope))
        }
        Formula::Or(l, r) => {
            let l = rename_binders(l, next, scope);
            Formula::or(l, rename_binders(r, next, scope))
        }
        Formula::Imp(l, r) => {
            let l = rename_binders(l, next, scope);
            Formula::imp(l, rename_binders(r, next, scope))
        }
    }
}

pub fn renamed(f: &Formula) -> Formula {
    rename_binders(f, &mut 0, &mut Vec::new())
}

// ---------------------------------------------------------------------------
// exhaustive enumeration and the schema oracle

/// Every formula over `atoms` with `~ & | ->` and at most `max_size` nodes.
pub fn all_formulas(max_size: usize, atoms: &[&str]) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_size + 1];
    if max_size >= 1 {
        by_size[1] = atoms.iter().map(|a| Formula::atom(*a)).collect();
    }
    for n in 2..=max_size {
        let mut out: Vec<Formula> = by_size[n - 1].iter().cloned().map(Formula::not).collect();
        for left in 1..n - 1 {
            let right = n - 1 - left;
            for l in &by_size[left] {
                for r in &by_size[right] {
                    out.push(Formula::and(l.clone(), r.clone()));
                    out.push(Formula::or(l.clone(), r.clone()));
                    out.push(Formula::imp(l.clone(), r.clone()));
                }
            }
        }
        by_size[n] = out;
    }
    by_size.into_iter().flatten().collect()
}

/// The schemas written out as formulas, with the constants `A`, `B`, `C`
/// standing for metavariables.
pub fn schema_templates() -> Vec<(SchemaId, Formula)> {
    [
        (SchemaId::Ax1, "A -> (B -> A)"),
        (SchemaId::Ax2, "(A -> B) -> ((A -> (B -> C)) -> (A -> C))"),
        (SchemaId::Ax3, "A -> (B -> A & B)"),
        (SchemaId::Ax4, "A & B -> A"),
        (SchemaId::Ax5, "A & B -> B"),
        (SchemaId::Ax6, "A -> (A | B)"),
        (SchemaId::Ax7, "B -> (A | B)"),
        (SchemaId::Ax8, "(A -> C) -> ((B -> C) -> (A | B -> C))"),
        (SchemaId::Ax9, "A | ~A"),
        (SchemaId::Ax10, "B -> (~B -> A)"),
        (SchemaId::Assertion, "A & (A -> B) -> B"),
    ]
    .into_iter()
    .map(|(id, text)| (id, parse_formula(text).unwrap()))
    .collect()
}

/// Replaces the placeholder constants of a template.
pub fn fill(template: &Formula, slots: &[(&str, &Formula)]) -> Formula {
    let mut out = template.clone();
    for (name, f) in slots {
        out = replace_placeholder(&out, name, f);
    }
    out
}

fn replace_placeholder(t: &Formula, name: &str, f: &Formula) -> Formula {
    match t {
        Formula::Const(c) if c == name => f.clone(),
        Formula::Not(g) => Formula::not(replace_placeholder(g, name, f)),
        Formula::And(l, r) => Formula::and(replace_placeholder(l, name, f), replace_placeholder(r, name, f)),
        Formula::Or(l, r) => Formula::or(replace_placeholder(l, name, f), replace_placeholder(r, name, f)),
        Formula::Imp(l, r) => Formula::imp(replace_placeholder(l, name, f), replace_placeholder(r, name, f)),
        other => other.clone(),
    }
}

fn placeholders(t: &Formula) -> Vec<&'static str> {
    let used = t.constants();
    ["A", "B", "C"].into_iter().filter(|m| used.contains(*m)).collect()
}

/// Non-placeholder node count of a template, and occurrences of each
/// placeholder in `metas` order.
fn template_shape(t: &Formula, metas: &[&str]) -> (usize, Vec<usize>) {
    let mut skeleton = 0;
    let mut occ = vec![0; metas.len()];
    t.visit(&mut |g| match g {
        Formula::Const(c) => {
            let k = metas.iter().position(|m| m == c).expect("placeholder");
            occ[k] += 1;
        }
        _ => skeleton += 1,
    });
    (skeleton, occ)
}

/// Every assignment of subformulas of `f` to the template's placeholders
/// that rebuilds `f` exactly. Assignments whose sizes cannot add up to
/// `f`'s size are skipped without building the instance.
pub fn brute_force_assignments(template: &Formula, f: &Formula) -> Vec<Vec<Formula>> {
    let metas = placeholders(template);
    let (skeleton, occ) = template_shape(template, &metas);
    let subs = f.subformulas();
    let sizes: Vec<usize> = subs.iter().map(Formula::size).collect();
    let target = f.size();
    let mut found = Vec::new();
    let mut choice = vec![0usize; metas.len()];
    loop {
        let total: usize = skeleton + choice.iter().zip(&occ).map(|(&k, &n)| n * sizes[k]).sum::<usize>();
        if total == target {
            let picked: Vec<&Formula> = choice.iter().map(|&k| &subs[k]).collect();
            let slots: Vec<(&str, &Formula)> = metas.iter().copied().zip(picked.iter().copied()).collect();
            if fill(template, &slots) == *f {
                found.push(picked.into_iter().cloned().collect());
            }
        }
        let mut pos = 0;
        while pos < choice.len() {
            choice[pos] += 1;
            if choice[pos] < subs.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == choice.len() {
            break;
        }
    }
    found
}

/// Schemas `f` is an instance of, by exhaustive search.
pub fn brute_force_classify(f: &Formula, templates: &[(SchemaId, Formula)]) -> BTreeSet<SchemaId> {
    templates
        .iter()
        .filter(|(_, t)| !brute_force_assignments(t, f).is_empty())
        .map(|(id, _)| *id)
        .collect()
}

// ---------------------------------------------------------------------------
// random scripts

/// Random well-formed script. Most steps are valid rule applications; some
/// scripts carry a deliberately wrong step. Curry prefixes are mixed in so
/// restricted checking has something to block.
pub fn random_script(rng: &mut StdRng) -> DerivationScript {
    let falsum = random_propositional(rng, 3, &["f", "p"]);
    let mut script = match rng.gen_range(0..4) {
        0 => curry_set_script(&falsum),
        1 => curry_truth_script(&falsum),
        _ => DerivationScript {
            env: DefEnv::new(),
            premises: vec![],
            steps: vec![],
        },
    };
    if rng.gen_bool(0.5) {
        let cut = rng.gen_range(0..=script.steps.len());
        script.steps.truncate(cut);
    }
    if script.env.is_empty() && rng.gen_bool(0.4) {
        let def = Formula::imp(Formula::truth(Term::constant("C")), falsum.clone());
        script.env = DefEnv::new().with("C", def).unwrap();
    }
    let n_premises = rng.gen_range(0..4);
    for _ in 0..n_premises {
        let f = match rng.gen_range(0..4) {
            0 if script.env.get("C").is_some() => Formula::constant("C"),
            1 => {
                let t = lpsharp::curry_set(&falsum);
                Formula::member(t.clone(), t)
            }
            _ => random_propositional(rng, 5, &["p", "q", "f"]),
        };
        script.premises.push(Judgment::categorical(f));
    }
    let extra = rng.gen_range(3..20);
    let mut next = script.steps.len() + 1;
    for _ in 0..extra * 4 {
        if script.steps.len() >= extra + 9 {
            break;
        }
        if let Some(step) = random_step(rng, &script, next.to_string()) {
            script.steps.push(step);
            next += 1;
        }
    }
    if rng.gen_bool(0.15) && !script.steps.is_empty() {
        let k = rng.gen_range(0..script.steps.len());
        script.steps[k].judgment = Judgment::categorical(random_propositional(rng, 4, &["p", "q"]));
    }
    script
}

fn pool_formulas(script: &DerivationScript) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for j in script.steps.iter().map(|s| &s.judgment).chain(&script.premises) {
        for f in j.formulas() {
            for g in f.subformulas() {
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
    }
    for a in ["p", "q", "f"] {
        out.push(Formula::atom(a));
    }
    out
}

fn random_step(rng: &mut StdRng, script: &DerivationScript, id: String) -> Option<Step> {
    let labels: Vec<&str> = script.steps.iter().map(|s| s.id.as_str()).collect();
    let pool = pool_formulas(script);
    let closed: Vec<&Formula> = pool.iter().filter(|f| f.is_closed()).collect();
    let pick = |rng: &mut StdRng| labels.choose(rng).map(|s| s.to_string());
    let rule: Rule = match rng.gen_range(0..16) {
        0 => {
            let schema = *SchemaId::ALL.choose(rng).unwrap();
            let mut sigma = lpsharp::MatchAssignment::new();
            for m in [lpsharp::Metavar::A, lpsharp::Metavar::B, lpsharp::Metavar::C] {
                sigma = sigma.bind(m, (*closed.choose(rng)?).clone());
            }
            let instance = lpsharp::instantiate_schema(&schema.schema(), &sigma).ok()?;
            Rule::Axiom { schema, instance }
        }
        1 => Rule::Premise(rng.gen_range(1..=script.premises.len().max(1))),
        2 => Rule::TSchema((*closed.choose(rng)?).clone()),
        3 => Rule::Def(script.env.iter().next()?.0.clone()),
        4 => Rule::Abstraction {
            var: "x".into(),
            body: Formula::imp(Formula::member(Term::var("x"), Term::var("x")), (*closed.choose(rng)?).clone()),
        },
        5..=8 => {
            // look for a fitting MP pair rather than waiting for luck
            let mut pairs = Vec::new();
            for a in &script.steps {
                for b in &script.steps {
                    if let Formula::Imp(ante, _) = &b.judgment.succedent {
                        if a.judgment.antecedent.is_none()
                            && b.judgment.antecedent.is_none()
                            && lpsharp::alpha_eq(ante, &a.judgment.succedent)
                        {
                            pairs.push((a.id.clone(), b.id.clone()));
                        }
                    }
                }
            }
            let (a, b) = pairs.choose(rng)?.clone();
            if rng.gen_bool(0.5) {
                Rule::Mp(a, b)
            } else {
                Rule::Mp(b, a)
            }
        }
        9 => Rule::SimpL(pick(rng)?),
        10 => Rule::SimpR(pick(rng)?),
        11 => Rule::Adj(pick(rng)?, pick(rng)?),
        12 => Rule::Contraction(pick(rng)?),
        13 => Rule::SubstEq {
            eq: pick(rng)?,
            target: pick(rng)?,
            reverse: rng.gen_bool(0.5),
        },
        14 => Rule::Idem(pick(rng)?),
        _ => Rule::Mt(pick(rng)?, pick(rng)?),
    };
    let premises: Vec<Judgment> = rule
        .premises()
        .into_iter()
        .map(|l| script.step(l).map(|s| s.judgment.clone()))
        .collect::<Option<_>>()?;
    let refs: Vec<&Judgment> = premises.iter().collect();
    let out = rule_output(&rule, &refs, &RuleContext::new(&script.env, &script.premises)).ok()?;
    if out.size() > 80 {
        return None;
    }
    Some(Step::new(id, out, rule))
}

pub fn arb_script() -> impl Strategy<Value = DerivationScript> {
    any::<u64>().prop_map(|seed| {
        let mut rng = <StdRng as rand::SeedableRng>::seed_from_u64(seed);
        random_script(&mut rng)
    })
}

/// The minor premise of an MP step, read off the cited steps.
pub fn mp_minor(script: &DerivationScript, step: &Step) -> Option<Formula> {
    let Rule::Mp(i, j) = &step.rule else {
        return None;
    };
    let a = &script.step(i)?.judgment.succedent;
    let b = &script.step(j)?.judgment.succedent;
    match b {
        Formula::Imp(ante, _) if lpsharp::alpha_eq(ante, a) => Some(a.clone()),
        _ => Some(b.clone()),
    }
}

/// The blocked sets the script properties are run against.
pub fn sample_blocked_sets(script: &DerivationScript) -> Vec<lpsharp::BlockedSetSpec> {
    use lpsharp::{make_curry_set, make_curry_truth, BlockedSetSpec, Delta};
    let mut explicit: Vec<Formula> = script.premises.iter().map(|j| j.succedent.clone()).collect();
    explicit.extend(script.steps.iter().take(3).map(|s| s.judgment.succedent.clone()));
    vec![
        make_curry_set(Delta::All),
        make_curry_truth(Delta::All, ["T".to_string()]),
        BlockedSetSpec::Union(vec![
            make_curry_set(Delta::Only(vec![Formula::atom("f")])),
            make_curry_truth(Delta::Only(vec![Formula::atom("p")]), ["T".to_string()]),
        ]),
        BlockedSetSpec::Explicit(explicit),
    ]
}
