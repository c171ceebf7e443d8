use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::symbolic::{derive, Atom, AtomKind, Derivation, Expr, JetKey, MultiIndex};

/// Truncated jet space with `p` independent, `q` dependent and `r` auxiliary
/// variables. Jets up to order `n + 1` are admitted, the extra level being room
/// for one more total derivative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JetSpace {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub n: usize,
}

impl JetSpace {
    pub fn new(p: usize, q: usize, r: usize, n: usize) -> Result<Self> {
        if p == 0 || q == 0 || n == 0 {
            return Err(Error::DimensionMismatch(format!(
                "jet space needs p, q, n >= 1 (got p={p}, q={q}, n={n})"
            )));
        }
        Ok(JetSpace { p, q, r, n })
    }

    pub fn with_order(&self, n: usize) -> JetSpace {
        JetSpace { n, ..self.clone() }
    }

    pub fn limit(&self) -> usize {
        self.n + 1
    }

    pub fn x(&self, i: usize) -> Expr {
        Expr::indep(i)
    }

    pub fn u(&self, a: usize, idx: MultiIndex) -> Expr {
        Expr::jet(a, idx)
    }

    pub fn u0(&self, a: usize) -> Expr {
        Expr::jet(a, MultiIndex::zero(self.p))
    }

    pub fn w(&self, b: usize, idx: MultiIndex) -> Expr {
        Expr::aux(b, idx)
    }

    pub fn w0(&self, b: usize) -> Expr {
        Expr::aux(b, MultiIndex::zero(self.p))
    }

    /// `u^a_J` with `J` given by per-direction counts.
    pub fn uj(&self, a: usize, counts: &[u32]) -> Expr {
        Expr::jet(a, MultiIndex::from_counts(counts.to_vec()))
    }

    pub fn check_order(&self, order: usize) -> Result<()> {
        if order > self.limit() {
            return Err(Error::TruncationExceeded {
                order,
                limit: self.limit(),
            });
        }
        Ok(())
    }

    /// Total derivative `D_i` (auxiliary jets are treated as free coordinates).
    pub fn total_derivative(&self, e: &Expr, i: usize) -> Result<Expr> {
        derive(&TotalDerivative::new(self, i), e)
    }

    /// `D_J e` for a multi-index `J`.
    pub fn total_derivative_multi(&self, e: &Expr, idx: &MultiIndex) -> Result<Expr> {
        let mut cur = e.clone();
        for (i, &c) in idx.counts().iter().enumerate() {
            for _ in 0..c {
                cur = self.total_derivative(&cur, i)?;
            }
        }
        Ok(cur)
    }

    /// All dependent-variable jet atoms up to `order`.
    pub fn jets_up_to(&self, order: usize) -> Vec<JetKey> {
        let mut out = Vec::new();
        for idx in MultiIndex::up_to(self.p, order) {
            for a in 0..self.q {
                out.push(JetKey::new(a, idx.clone()));
            }
        }
        out.sort();
        out
    }
}

/// `D_i`, or the augmented `D̃_i` when auxiliary rules are supplied.
pub struct TotalDerivative<'a> {
    space: &'a JetSpace,
    dir: usize,
    aux: Option<&'a AuxRules>,
}

impl<'a> TotalDerivative<'a> {
    pub fn new(space: &'a JetSpace, dir: usize) -> Self {
        TotalDerivative {
            space,
            dir,
            aux: None,
        }
    }

    pub fn augmented(space: &'a JetSpace, dir: usize, aux: &'a AuxRules) -> Self {
        TotalDerivative {
            space,
            dir,
            aux: Some(aux),
        }
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        derive(self, e)
    }
}

impl Derivation for TotalDerivative<'_> {
    fn coordinate(&self, atom: &Atom) -> Result<Expr> {
        match atom.kind() {
            AtomKind::Indep(i) => Ok(if *i == self.dir {
                Expr::one()
            } else {
                Expr::zero()
            }),
            AtomKind::Jet(k) => {
                let idx = k.idx.append(self.dir);
                self.space.check_order(idx.order())?;
                Ok(Expr::jet(k.var, idx))
            }
            AtomKind::Aux(k) => {
                let idx = k.idx.append(self.dir);
                match self.aux {
                    Some(rules) => rules.value(self.space, k.var, &idx),
                    None => {
                        self.space.check_order(idx.order())?;
                        Ok(Expr::aux(k.var, idx))
                    }
                }
            }
            _ => Ok(Expr::zero()),
        }
    }
}

/// First-order auxiliary rules `w^β_i = H^β_i` and their differential consequences.
#[derive(Debug)]
pub struct AuxRules {
    /// `h[β][i]`.
    h: Vec<Vec<Expr>>,
    cache: Mutex<HashMap<JetKey, Expr>>,
}

impl Clone for AuxRules {
    fn clone(&self) -> Self {
        AuxRules::new(self.h.clone())
    }
}

impl PartialEq for AuxRules {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}

impl Eq for AuxRules {}

impl AuxRules {
    pub fn new(h: Vec<Vec<Expr>>) -> Self {
        AuxRules {
            h,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn h(&self, beta: usize, i: usize) -> &Expr {
        &self.h[beta][i]
    }

    pub fn rules(&self) -> &[Vec<Expr>] {
        &self.h
    }

    pub fn r(&self) -> usize {
        self.h.len()
    }

    /// Value of `w^β_J` on the covering: `w^β` itself for `J = 0`, otherwise
    /// `D̃_i` applied to the value at `J - e_i` for the first direction `i` in `J`.
    pub fn value(&self, space: &JetSpace, beta: usize, idx: &MultiIndex) -> Result<Expr> {
        if idx.order() == 0 {
            return Ok(Expr::aux(beta, idx.clone()));
        }
        let key = JetKey::new(beta, idx.clone());
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let i = idx
            .counts()
            .iter()
            .position(|&c| c > 0)
            .expect("nonzero index");
        let parent = idx.decrement(i).expect("positive count");
        let v = if parent.order() == 0 {
            self.h[beta][i].clone()
        } else {
            let pv = self.value(space, beta, &parent)?;
            derive(&TotalDerivative::augmented(space, i, self), &pv)?
        };
        self.cache
            .lock()
            .expect("cache lock")
            .insert(key, v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_derivative_of_square() {
        let s = JetSpace::new(1, 1, 0, 2).unwrap();
        let u = s.u0(0);
        let d = s.total_derivative(&u.mul(&u), 0).unwrap();
        let ux = s.uj(0, &[1]);
        assert_eq!(d, Expr::int(2).mul(&u).mul(&ux));
    }

    #[test]
    fn truncation_enforced() {
        let s = JetSpace::new(1, 1, 0, 1).unwrap();
        let uxx = s.uj(0, &[2]);
        assert!(matches!(
            s.total_derivative(&uxx, 0),
            Err(Error::TruncationExceeded { order: 3, limit: 2 })
        ));
    }

    #[test]
    fn augmented_derivative_uses_rule() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let w = s.w0(0);
        let h = s.u0(0).mul(&w);
        let rules = AuxRules::new(vec![vec![h.clone()]]);
        let d = derive(&TotalDerivative::augmented(&s, 0, &rules), &w).unwrap();
        assert_eq!(d, h);
        assert_eq!(
            s.total_derivative(&s.u0(0), 0).unwrap(),
            derive(&TotalDerivative::augmented(&s, 0, &rules), &s.u0(0)).unwrap()
        );
    }
}
