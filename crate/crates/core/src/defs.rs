//! Definitional environments for self-referential sentence constants.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::FormulaError;
use crate::formula::{is_const_name, Formula, Ident, Term};

/// Ordered `name := definiens` table.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefEnv {
    entries: Vec<(Ident, Formula)>,
}

impl DefEnv {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a definition. The definiens must be closed, must not be a bare
    /// constant, and may mention only earlier names or `name` itself.
    pub fn define(&mut self, name: impl Into<Ident>, definiens: Formula) -> Result<(), FormulaError> {
        let name = name.into();
        if !is_const_name(&name) || name == "T" {
            return Err(FormulaError::BadConstName(name));
        }
        if self.get(&name).is_some() {
            return Err(FormulaError::Redefined(name));
        }
        if !definiens.is_closed() {
            return Err(FormulaError::OpenDefinition(name));
        }
        if matches!(definiens, Formula::Const(_)) {
            return Err(FormulaError::AliasDefinition(name));
        }
        for other in definiens.constants() {
            if other != name && self.get(&other).is_none() {
                return Err(FormulaError::ForwardReference { name, other });
            }
        }
        self.entries.push((name, definiens));
        Ok(())
    }

    pub fn with(mut self, name: impl Into<Ident>, definiens: Formula) -> Result<Self, FormulaError> {
        self.define(name, definiens)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &Formula)> {
        self.entries.iter().map(|(n, d)| (n, d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Constants `f` mentions that have no definition here.
    pub fn undefined_in(&self, f: &Formula) -> Vec<Ident> {
        f.constants().into_iter().filter(|c| self.get(c).is_none()).collect()
    }

    /// Replaces each occurrence of `name` with one layer of its definiens.
    pub fn unfold(&self, f: &Formula, name: &str) -> Result<Formula, FormulaError> {
        let definiens = self.get(name).ok_or_else(|| FormulaError::UnknownConst(name.to_string()))?;
        Ok(f.replace_const(name, definiens))
    }

    /// Alpha-equivalence where a constant may be matched against its
    /// definiens, to any depth. Constant-against-constant comparisons are
    /// decided coinductively, so mutually self-referential definitions
    /// terminate.
    pub fn equal_modulo_defs(&self, a: &Formula, b: &Formula) -> bool {
        let mut cmp = DefComparator {
            env: self,
            assumed: BTreeSet::new(),
            left: Vec::new(),
            right: Vec::new(),
        };
        cmp.formulas(a, b)
    }
}

pub fn unfold_def(f: &Formula, env: &DefEnv, name: &str) -> Result<Formula, FormulaError> {
    env.unfold(f, name)
}

struct DefComparator<'e> {
    env: &'e DefEnv,
    assumed: BTreeSet<(Ident, Ident)>,
    left: Vec<Ident>,
    right: Vec<Ident>,
}

impl DefComparator<'_> {
    fn consts(&mut self, c: &str, d: &str) -> bool {
        if c == d {
            return true;
        }
        let key = (c.to_string(), d.to_string());
        if self.assumed.contains(&key) {
            return true;
        }
        let (Some(dc), Some(dd)) = (self.env.get(c), self.env.get(d)) else {
            return false;
        };
        self.assumed.insert(key);
        // definitions are closed, so binder scopes restart
        let saved = (std::mem::take(&mut self.left), std::mem::take(&mut self.right));
        let ok = self.formulas(dc, dd);
        (self.left, self.right) = saved;
        ok
    }

    fn unfold_left(&mut self, c: &str, b: &Formula) -> bool {
        let Some(d) = self.env.get(c) else {
            return false;
        };
        let saved = std::mem::take(&mut self.left);
        let ok = self.formulas(d, b);
        self.left = saved;
        ok
    }

    fn unfold_right(&mut self, a: &Formula, c: &str) -> bool {
        let Some(d) = self.env.get(c) else {
            return false;
        };
        let saved = std::mem::take(&mut self.right);
        let ok = self.formulas(a, d);
        self.right = saved;
        ok
    }

    fn formulas(&mut self, a: &Formula, b: &Formula) -> bool {
        use Formula::*;
        match (a, b) {
            (Const(c), Const(d)) => self.consts(c, d),
            (Const(c), _) => self.unfold_left(c, b),
            (_, Const(d)) => self.unfold_right(a, d),
            (Atom(x), Atom(y)) => x == y,
            (Truth(s), Truth(t)) => self.terms(s, t),
            (Member(l1, r1), Member(l2, r2)) => self.terms(l1, l2) && self.terms(r1, r2),
            (Not(f), Not(g)) => self.formulas(f, g),
            (And(l1, r1), And(l2, r2)) | (Or(l1, r1), Or(l2, r2)) | (Imp(l1, r1), Imp(l2, r2)) => {
                self.formulas(l1, l2) && self.formulas(r1, r2)
            }
            _ => false,
        }
    }

    fn terms(&mut self, s: &Term, t: &Term) -> bool {
        use Term::*;
        match (s, t) {
            (Var(x), Var(y)) => {
                let i = self.left.iter().rposition(|b| b == x);
                let j = self.right.iter().rposition(|b| b == y);
                match (i, j) {
                    (Some(i), Some(j)) => self.left.len() - i == self.right.len() - j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Const(c), Const(d)) => self.consts(c, d),
            (Const(c), Quote(g)) => self.unfold_left(c, g),
            (Quote(f), Const(d)) => self.unfold_right(f, d),
            (Quote(f), Quote(g)) => self.formulas(f, g),
            (SetAbs(x, f), SetAbs(y, g)) => {
                self.left.push(x.clone());
                self.right.push(y.clone());
                let ok = self.formulas(f, g);
                self.left.pop();
                self.right.pop();
                ok
            }
            _ => false,
        }
    }
}
