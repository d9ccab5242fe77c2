//! Bounded forward chaining over the kernel's rules.
//!
//! Rounds are computed from a snapshot of what was known when the round
//! started, so the result does not depend on the order candidates are found
//! within a round. Within a round, rules fire in [`RuleId`] order and
//! premises are taken in insertion order. A candidate is kept only if no
//! alpha-equivalent judgment is known yet.
//!
//! A goal that is not reached is only "not derived within these bounds".

use std::collections::{BTreeSet, HashMap};

use crate::blocked::BlockedSetSpec;
use crate::defs::DefEnv;
use crate::formula::{Formula, Term};
use crate::kernel::{mp_split, rule_output, Judgment, Mode, Rule, RuleContext, RuleId};
use crate::schema::{instantiate_schema, MatchAssignment, SchemaId};
use crate::script::{DerivationScript, Step};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationConfig {
    pub seeds: Vec<Judgment>,
    pub rules: BTreeSet<RuleId>,
    /// Formulas that nullary rules may be instantiated with. `None` means
    /// every subformula of the seeds.
    pub pool: Option<Vec<Formula>>,
    /// Largest judgment size kept (antecedent plus succedent).
    pub max_size: usize,
    pub max_rounds: usize,
    pub mode: Mode,
    pub blocked: BlockedSetSpec,
    pub env: DefEnv,
}

impl SaturationConfig {
    pub fn new(seeds: Vec<Judgment>, rules: impl IntoIterator<Item = RuleId>) -> Self {
        let max_size = 2 * seeds.iter().map(Judgment::size).max().unwrap_or(1);
        SaturationConfig {
            seeds,
            rules: rules.into_iter().collect(),
            pool: None,
            max_size,
            max_rounds: 10,
            mode: Mode::Unrestricted,
            blocked: BlockedSetSpec::Empty,
            env: DefEnv::new(),
        }
    }

    pub fn restricted(mut self, blocked: BlockedSetSpec) -> Self {
        self.mode = Mode::Restricted;
        self.blocked = blocked;
        self
    }

    fn effective_pool(&self) -> Vec<Formula> {
        if let Some(pool) = &self.pool {
            return pool.clone();
        }
        let mut out: Vec<Formula> = Vec::new();
        let mut seen = BTreeSet::new();
        for j in &self.seeds {
            for f in j.formulas() {
                for g in f.subformulas() {
                    if seen.insert(g.canonical()) {
                        out.push(g);
                    }
                }
            }
        }
        out
    }

    /// Closed terms occurring in the seeds and the pool, for USPEC.
    fn term_pool(&self, pool: &[Formula]) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        let mut push = |t: &Term| {
            if t.free_vars().is_empty() && !out.contains(t) {
                out.push(t.clone());
            }
        };
        for f in self.seeds.iter().flat_map(Judgment::formulas).chain(pool) {
            for_each_term(f, &mut push);
        }
        out
    }
}

fn for_each_term(f: &Formula, visit: &mut impl FnMut(&Term)) {
    fn term(t: &Term, visit: &mut impl FnMut(&Term)) {
        visit(t);
        match t {
            Term::SetAbs(_, body) | Term::Quote(body) => for_each_term(body, visit),
            Term::Var(_) | Term::Const(_) => {}
        }
    }
    match f {
        Formula::Atom(_) | Formula::Const(_) => {}
        Formula::Truth(t) => term(t, visit),
        Formula::Member(l, r) => {
            term(l, visit);
            term(r, visit);
        }
        Formula::Not(g) => for_each_term(g, visit),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
            for_each_term(l, visit);
            for_each_term(r, visit);
        }
    }
}

/// How a derived judgment was first obtained. Premises are indices into
/// [`SaturationResult::derived`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    /// The k-th seed, 0-based.
    Seed(usize),
    Rule(Rule<usize>),
}

/// A derivation tree for one judgment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Witness {
    Seed { index: usize, judgment: Judgment },
    Step { judgment: Judgment, rule: Box<Rule<Witness>> },
}

impl Witness {
    pub fn judgment(&self) -> &Judgment {
        match self {
            Witness::Seed { judgment, .. } | Witness::Step { judgment, .. } => judgment,
        }
    }

    /// Rule applications on the longest path to a seed or nullary rule.
    pub fn depth(&self) -> usize {
        match self {
            Witness::Seed { .. } => 0,
            Witness::Step { rule, .. } => 1 + rule.premises().iter().map(|w| w.depth()).max().unwrap_or(0),
        }
    }

    /// Replayable script: seeds become declared premises, and each distinct
    /// judgment in the tree becomes one step.
    pub fn to_script(&self, seeds: &[Judgment], env: &DefEnv) -> DerivationScript {
        fn emit(w: &Witness, steps: &mut Vec<Step>, labels: &mut HashMap<Judgment, String>) -> String {
            let key = w.judgment().canonical();
            if let Some(label) = labels.get(&key) {
                return label.clone();
            }
            let rule: Rule = match w {
                Witness::Seed { index, .. } => Rule::Premise(index + 1),
                Witness::Step { rule, .. } => (**rule).clone().map_refs(|p| emit(&p, steps, labels)),
            };
            let label = (steps.len() + 1).to_string();
            steps.push(Step::new(label.clone(), w.judgment().clone(), rule));
            labels.insert(key, label.clone());
            label
        }
        let mut steps = Vec::new();
        emit(self, &mut steps, &mut HashMap::new());
        DerivationScript {
            env: env.clone(),
            premises: seeds.to_vec(),
            steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationResult {
    /// Every known judgment, seeds first, in the order found.
    pub derived: Vec<Judgment>,
    /// Parallel to `derived`.
    pub justification: Vec<Justification>,
    /// Round in which each judgment was found; seeds are round 0.
    pub round_found: Vec<usize>,
    pub rounds: usize,
    /// Whether a candidate was dropped by the size bound, or the round
    /// bound was hit before reaching a fixed point.
    pub truncated: bool,
    /// MP applications refused because the minor premise was blocked.
    pub blocked_applications: usize,
}

impl SaturationResult {
    pub fn index_of(&self, j: &Judgment) -> Option<usize> {
        self.derived.iter().position(|d| d.alpha_eq(j))
    }

    pub fn contains(&self, j: &Judgment) -> bool {
        self.index_of(j).is_some()
    }

    pub fn witness_at(&self, index: usize) -> Witness {
        let judgment = self.derived[index].clone();
        match &self.justification[index] {
            Justification::Seed(k) => Witness::Seed { index: *k, judgment },
            Justification::Rule(rule) => Witness::Step {
                judgment,
                rule: Box::new(rule.clone().map_refs(|i| self.witness_at(i))),
            },
        }
    }

    pub fn witness(&self, j: &Judgment) -> Option<Witness> {
        self.index_of(j).map(|i| self.witness_at(i))
    }
}

struct State {
    result: SaturationResult,
    known: HashMap<Judgment, usize>,
}

impl State {
    fn add(&mut self, j: Judgment, why: Justification, round: usize, max_size: usize) {
        if j.size() > max_size {
            self.result.truncated = true;
            return;
        }
        let key = j.canonical();
        if self.known.contains_key(&key) {
            return;
        }
        self.known.insert(key, self.result.derived.len());
        self.result.derived.push(j);
        self.result.justification.push(why);
        self.result.round_found.push(round);
    }
}

fn nullary_candidates(cfg: &SaturationConfig, id: RuleId, pool: &[Formula]) -> Vec<Rule<usize>> {
    match id {
        RuleId::Axiom => {
            let mut out = Vec::new();
            for schema_id in SchemaId::ALL {
                let schema = schema_id.schema();
                let vars = schema.pattern.metavars();
                let mut choice = vec![0usize; vars.len()];
                if !vars.is_empty() && pool.is_empty() {
                    continue;
                }
                loop {
                    let mut sigma = MatchAssignment::new();
                    for (v, &k) in vars.iter().zip(&choice) {
                        sigma = sigma.bind(*v, pool[k].clone());
                    }
                    if let Ok(instance) = instantiate_schema(&schema, &sigma) {
                        out.push(Rule::Axiom {
                            schema: schema_id,
                            instance,
                        });
                    }
                    // odometer over pool^vars
                    let mut pos = 0;
                    loop {
                        if pos == choice.len() {
                            break;
                        }
                        choice[pos] += 1;
                        if choice[pos] < pool.len() {
                            break;
                        }
                        choice[pos] = 0;
                        pos += 1;
                    }
                    if pos == choice.len() {
                        break;
                    }
                }
            }
            out
        }
        RuleId::Def => cfg.env.iter().map(|(name, _)| Rule::Def(name.clone())).collect(),
        RuleId::TSchema => pool
            .iter()
            .filter(|f| f.is_closed())
            .map(|f| Rule::TSchema(f.clone()))
            .collect(),
        RuleId::Abstraction => pool
            .iter()
            .flat_map(|f| {
                f.free_vars().into_iter().map(move |var| Rule::Abstraction {
                    var,
                    body: f.clone(),
                })
            })
            .collect(),
        _ => Vec::new(),
    }
}

fn unary_rule(id: RuleId, i: usize) -> Option<Rule<usize>> {
    Some(match id {
        RuleId::SimpL => Rule::SimpL(i),
        RuleId::SimpR => Rule::SimpR(i),
        RuleId::Contraction => Rule::Contraction(i),
        RuleId::Idem => Rule::Idem(i),
        RuleId::ConjSplitL => Rule::ConjSplitL(i),
        RuleId::ConjSplitR => Rule::ConjSplitR(i),
        RuleId::Resid => Rule::Resid(i),
        RuleId::Deresid => Rule::Deresid(i),
        _ => return None,
    })
}

fn binary_rule(id: RuleId, i: usize, j: usize) -> Option<Rule<usize>> {
    Some(match id {
        RuleId::Mp => Rule::Mp(i, j),
        RuleId::Mt => Rule::Mt(i, j),
        RuleId::Adj => Rule::Adj(i, j),
        RuleId::Trans => Rule::Trans(i, j),
        RuleId::ConjGlb => Rule::ConjGlb(i, j),
        RuleId::SubstEq => Rule::SubstEq {
            eq: i,
            target: j,
            reverse: false,
        },
        _ => return None,
    })
}

/// Runs rounds until nothing new appears or `max_rounds` is reached.
pub fn saturate(cfg: &SaturationConfig) -> SaturationResult {
    let pool = cfg.effective_pool();
    let terms = cfg.term_pool(&pool);
    let ctx = RuleContext::new(&cfg.env, &cfg.seeds);
    let mut st = State {
        result: SaturationResult {
            derived: Vec::new(),
            justification: Vec::new(),
            round_found: Vec::new(),
            rounds: 0,
            truncated: false,
            blocked_applications: 0,
        },
        known: HashMap::new(),
    };
    for (k, seed) in cfg.seeds.iter().enumerate() {
        // seeds are kept whatever their size
        st.add(seed.clone(), Justification::Seed(k), 0, usize::MAX);
    }
    let mut frontier = 0;
    for round in 1..=cfg.max_rounds {
        let end = st.result.derived.len();
        let snapshot: Vec<Judgment> = st.result.derived[..end].to_vec();
        let mut candidates: Vec<Rule<usize>> = Vec::new();
        for &id in &cfg.rules {
            if round == 1 {
                candidates.extend(nullary_candidates(cfg, id, &pool));
            }
            // at least one premise must be new since the previous round
            for i in 0..end {
                if let Some(rule) = unary_rule(id, i) {
                    if i >= frontier {
                        candidates.push(rule);
                    }
                }
                match id {
                    RuleId::USpec if i >= frontier => {
                        candidates.extend(terms.iter().map(|t| Rule::USpec { from: i, term: t.clone() }));
                    }
                    RuleId::TEnthymemeOut | RuleId::TEnthymemeIn if i >= frontier => {
                        for s in pool.iter().filter(|f| f.is_closed()) {
                            candidates.push(if id == RuleId::TEnthymemeOut {
                                Rule::TEnthymemeOut {
                                    background: i,
                                    sentence: s.clone(),
                                }
                            } else {
                                Rule::TEnthymemeIn {
                                    background: i,
                                    sentence: s.clone(),
                                }
                            });
                        }
                    }
                    _ => {}
                }
                for j in 0..end {
                    if i < frontier && j < frontier {
                        continue;
                    }
                    // MP and MT ignore premise order
                    if matches!(id, RuleId::Mp | RuleId::Mt) && j <= i {
                        continue;
                    }
                    if let Some(rule) = binary_rule(id, i, j) {
                        candidates.push(rule);
                    }
                    if id == RuleId::SubstEq {
                        candidates.push(Rule::SubstEq {
                            eq: i,
                            target: j,
                            reverse: true,
                        });
                    }
                }
            }
        }
        for rule in candidates {
            let premises: Vec<&Judgment> = rule.premises().into_iter().map(|&i| &snapshot[i]).collect();
            let Ok(out) = rule_output(&rule, &premises, &ctx) else {
                continue;
            };
            if cfg.mode == Mode::Restricted {
                if let Rule::Mp(..) = rule {
                    let (a, b) = (&premises[0].succedent, &premises[1].succedent);
                    if let Some((minor, _)) = mp_split(a, b) {
                        let minor = if minor == 0 { a } else { b };
                        if cfg.blocked.blocks(minor, &cfg.env) {
                            st.result.blocked_applications += 1;
                            continue;
                        }
                    }
                }
            }
            st.add(out, Justification::Rule(rule), round, cfg.max_size);
        }
        st.result.rounds = round;
        frontier = end;
        if st.result.derived.len() == end {
            return st.result;
        }
    }
    // round bound reached while still growing
    st.result.truncated = true;
    st.result
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivability {
    Derived { witness: Witness, script: DerivationScript },
    /// Not found within the configured bounds. Says nothing beyond them.
    NotWithinBounds { rounds: usize, truncated: bool },
}

impl Derivability {
    pub fn is_derived(&self) -> bool {
        matches!(self, Derivability::Derived { .. })
    }
}

pub fn derives_within(goal: &Judgment, cfg: &SaturationConfig) -> Derivability {
    let result = saturate(cfg);
    match result.witness(goal) {
        Some(witness) => {
            let script = witness.to_script(&cfg.seeds, &cfg.env);
            Derivability::Derived { witness, script }
        }
        None => Derivability::NotWithinBounds {
            rounds: result.rounds,
            truncated: result.truncated,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocked::{make_curry_set, Delta};
    use crate::kernel::check_script;
    use crate::scenarios::curry_set_script;
    use crate::syntax::parse_formula;

    fn j(s: &str) -> Judgment {
        s.parse().unwrap()
    }

    fn curry_seeds() -> Vec<Judgment> {
        let script = curry_set_script(&parse_formula("f").unwrap());
        ["1", "2", "3", "4"]
            .iter()
            .map(|id| script.step(id).unwrap().judgment.clone())
            .collect()
    }

    #[test]
    fn single_modus_ponens() {
        let mut cfg = SaturationConfig::new(vec![j("|- p"), j("|- p -> q")], [RuleId::Mp]);
        cfg.max_size = 2;
        let res = saturate(&cfg);
        let q = res.index_of(&j("|- q")).unwrap();
        assert_eq!(res.round_found[q], 1);
        // the second round finds nothing new
        assert_eq!(res.rounds, 2);
        assert!(!res.truncated);
    }

    #[test]
    fn curry_seeds_trivialize_unrestricted() {
        let cfg = SaturationConfig::new(curry_seeds(), [RuleId::Mp, RuleId::SimpR]);
        let Derivability::Derived { witness, script } = derives_within(&j("|- f"), &cfg) else {
            panic!("f not derived");
        };
        assert!(witness.depth() <= 3);
        let report = check_script(&script, cfg.mode, &cfg.blocked);
        assert!(report.all_ok(), "{report}");
    }

    #[test]
    fn curry_seeds_restricted() {
        let cfg = SaturationConfig::new(curry_seeds(), [RuleId::Mp, RuleId::SimpR]).restricted(make_curry_set(Delta::All));
        let res = saturate(&cfg);
        assert!(!res.contains(&j("|- f")));
        assert!(res.blocked_applications > 0);
    }

    #[test]
    fn seed_goal_has_trivial_witness() {
        let cfg = SaturationConfig::new(vec![j("|- p")], [RuleId::Mp]);
        match derives_within(&j("|- p"), &cfg) {
            Derivability::Derived { witness, .. } => assert_eq!(witness.depth(), 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_seeds() {
        let cfg = SaturationConfig::new(vec![], [RuleId::Mp, RuleId::SimpL]);
        let res = saturate(&cfg);
        assert!(res.derived.is_empty());
    }

    #[test]
    fn axioms_come_from_the_pool() {
        let mut cfg = SaturationConfig::new(vec![], [RuleId::Axiom]);
        cfg.pool = Some(vec![parse_formula("p").unwrap()]);
        cfg.max_size = 100;
        let res = saturate(&cfg);
        assert!(res.contains(&j("|- p -> (p -> p)")));
        // AX4/AX5 and AX6/AX7 coincide when every metavariable is `p`
        assert_eq!(res.derived.len(), SchemaId::ALL.len() - 2);
    }
}
