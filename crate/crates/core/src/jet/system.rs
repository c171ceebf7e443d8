use std::cell::RefCell;
use std::collections::HashMap;

use super::{AuxRules, JetSpace, TotalDerivative};
use crate::error::{Error, Result};
use crate::symbolic::{derive, substitute, Atom, AtomKind, Expr, JetKey};

/// `lead = rhs`, with `rhs` free of `lead` and of lower rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedRule {
    pub lead: JetKey,
    pub rhs: Expr,
}

/// Residuals `F^ℓ` together with their orientation as solved rules.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EquationSystem {
    pub residuals: Vec<Expr>,
    pub rules: Vec<SolvedRule>,
}

impl EquationSystem {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Orients each residual on its highest-ranked jet, after reducing it by the
    /// rules obtained from the residuals before it.
    pub fn from_residuals(residuals: Vec<Expr>, space: &JetSpace) -> Result<Self> {
        let mut sys = EquationSystem::empty();
        for f in residuals {
            let reduced = sys.reduce(&f, space)?;
            let lead = reduced
                .atoms()
                .into_iter()
                .filter_map(|a| a.as_jet().cloned())
                .max()
                .ok_or_else(|| Error::NotSolvable(format!("{f:?} contains no jet")))?;
            let atom = Atom::jet(lead.var, lead.idx.clone());
            let rhs = solve_linear(&reduced, &atom)?;
            sys.residuals.push(f);
            sys.rules.push(SolvedRule { lead, rhs });
        }
        Ok(sys)
    }

    /// System given in solved form `lead_ℓ = rhs_ℓ`.
    pub fn from_solved(rules: Vec<(JetKey, Expr)>) -> Result<Self> {
        let mut sys = EquationSystem::empty();
        for (lead, rhs) in rules {
            let atom = Atom::jet(lead.var, lead.idx.clone());
            if rhs.depends_on(&atom) {
                return Err(Error::NotSolvable(format!(
                    "right-hand side contains its own leading jet {atom:?}"
                )));
            }
            sys.residuals.push(Expr::atom(atom).sub(&rhs));
            sys.rules.push(SolvedRule { lead, rhs });
        }
        Ok(sys)
    }

    pub fn max_order(&self) -> usize {
        self.residuals
            .iter()
            .flat_map(|f| f.coordinates())
            .map(|a| a.jet_order())
            .max()
            .unwrap_or(0)
    }

    /// Reduction modulo the system (no auxiliary rules).
    pub fn reduce(&self, e: &Expr, space: &JetSpace) -> Result<Expr> {
        Reducer::new(self, space, None).reduce(e)
    }
}

/// Solves `f = 0` for `atom`, which must occur linearly.
pub fn solve_linear(f: &Expr, atom: &Atom) -> Result<Expr> {
    let name = || format!("{:?}", Expr::atom(atom.clone()));
    if f.den().degree_in(atom) > 0 || f.num().degree_in(atom) != 1 {
        return Err(Error::NotSolvable(name()));
    }
    if f.atoms().iter().any(|a| a != atom && a.children().iter().any(|c| c.depends_on(atom))) {
        return Err(Error::NotSolvable(name()));
    }
    let coeffs = f.num().coeffs_in(atom);
    let b = Expr::from_poly(coeffs[0].clone());
    let a = Expr::from_poly(coeffs[1].clone());
    b.neg().div(&a)
}

/// Reduces expressions modulo an equation system, its differential consequences
/// and optionally a set of auxiliary rules. Consequences are memoized.
pub struct Reducer<'a> {
    sys: &'a EquationSystem,
    space: &'a JetSpace,
    aux: Option<&'a AuxRules>,
    memo: RefCell<HashMap<JetKey, Expr>>,
}

const MAX_ROUNDS: usize = 64;

impl<'a> Reducer<'a> {
    pub fn new(sys: &'a EquationSystem, space: &'a JetSpace, aux: Option<&'a AuxRules>) -> Self {
        Reducer {
            sys,
            space,
            aux,
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn rule_for(&self, k: &JetKey) -> Option<&SolvedRule> {
        self.sys
            .rules
            .iter()
            .find(|r| r.lead.var == k.var && k.idx.dominates(&r.lead.idx))
    }

    fn d(&self, i: usize, e: &Expr) -> Result<Expr> {
        match self.aux {
            Some(rules) => derive(&TotalDerivative::augmented(self.space, i, rules), e),
            None => derive(&TotalDerivative::new(self.space, i), e),
        }
    }

    /// Reduced value of a principal jet.
    fn consequence(&self, k: &JetKey) -> Result<Expr> {
        if let Some(v) = self.memo.borrow().get(k) {
            return Ok(v.clone());
        }
        let rule = self
            .rule_for(k)
            .ok_or_else(|| Error::NoSolvedRule(format!("{:?}", Expr::jet(k.var, k.idx.clone()))))?;
        let v = if *k == rule.lead {
            self.reduce(&rule.rhs)?
        } else {
            let diff = k.idx.sub(&rule.lead.idx).expect("dominates");
            let i = diff
                .counts()
                .iter()
                .position(|&c| c > 0)
                .expect("strictly dominates");
            let parent = JetKey::new(k.var, k.idx.decrement(i).expect("positive"));
            let pv = self.consequence(&parent)?;
            self.reduce(&self.d(i, &pv)?)?
        };
        self.memo.borrow_mut().insert(k.clone(), v.clone());
        Ok(v)
    }

    /// Fixpoint of replacing principal jets (and auxiliary jets of positive order).
    pub fn reduce(&self, e: &Expr) -> Result<Expr> {
        let mut cur = e.clone();
        for _ in 0..MAX_ROUNDS {
            let mut sigma = HashMap::new();
            for a in cur.atoms_deep() {
                match a.kind() {
                    AtomKind::Jet(k) if self.rule_for(k).is_some() => {
                        let v = self.consequence(k)?;
                        sigma.insert(a.clone(), v);
                    }
                    AtomKind::Aux(k) if k.order() > 0 => {
                        if let Some(rules) = self.aux {
                            sigma.insert(a.clone(), rules.value(self.space, k.var, &k.idx)?);
                        }
                    }
                    _ => {}
                }
            }
            if sigma.is_empty() {
                return Ok(cur);
            }
            cur = substitute(&cur, &sigma)?;
        }
        let left = cur
            .atoms_deep()
            .into_iter()
            .find(|a| a.as_jet().is_some_and(|k| self.rule_for(k).is_some()))
            .map(|a| format!("{:?}", Expr::atom(a)))
            .unwrap_or_default();
        Err(Error::NoSolvedRule(left))
    }
}

/// `reduce_mod_system` with optional auxiliary rules.
pub fn reduce_mod_system(
    e: &Expr,
    sys: &EquationSystem,
    space: &JetSpace,
    aux: Option<&AuxRules>,
) -> Result<Expr> {
    Reducer::new(sys, space, aux).reduce(e)
}
