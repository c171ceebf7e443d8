//! Coverings `w^β_i = H^β_i` of an equation system, their compatibility, matrix
//! (zero-curvature) coverings and the reconstruction of twisted symmetries from
//! standard symmetries of the covering.

mod matrix;
mod reconstruct;

#[cfg(test)]
mod props;

pub use matrix::{check_matrix_covering, MatrixCovering, MatrixCoveringReport};
pub use reconstruct::{
    check_augmented_symmetry, check_semiclassical, reconstruct_lambda, reconstruct_mu,
    AugmentedSymmetryReport, LambdaReconstruction, MuReconstruction, SemiClassicalReport,
};

use crate::error::{Error, Result};
use crate::jet::{AuxRules, EquationSystem, JetSpace, Reducer, TotalDerivative};
use crate::symbolic::{derive, Expr};

/// Base system together with first-order auxiliary rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSystem {
    pub base: EquationSystem,
    pub aux: AuxRules,
    pub space: JetSpace,
}

impl CoveringSystem {
    /// `h[β][i]` is `H^β_i`; one rule per auxiliary variable and direction.
    pub fn new(base: EquationSystem, h: Vec<Vec<Expr>>, space: JetSpace) -> Result<Self> {
        if h.len() != space.r || h.iter().any(|row| row.len() != space.p) {
            return Err(Error::DimensionMismatch(format!(
                "covering needs {} x {} rules",
                space.r, space.p
            )));
        }
        for e in h.iter().flatten() {
            if let Some(a) = e
                .coordinates()
                .into_iter()
                .find(|a| a.as_aux().is_some() && a.jet_order() > 0)
            {
                return Err(Error::InvalidExpression(format!(
                    "rule right-hand side contains the auxiliary jet {a:?}"
                )));
            }
        }
        Ok(CoveringSystem {
            base,
            aux: AuxRules::new(h),
            space,
        })
    }

    pub fn h(&self, beta: usize, i: usize) -> &Expr {
        self.aux.h(beta, i)
    }

    /// Replaces auxiliary jets of positive order by their values on the covering.
    pub fn restrict(&self, e: &Expr) -> Result<Expr> {
        let empty = EquationSystem::empty();
        Reducer::new(&empty, &self.space, Some(&self.aux)).reduce(e)
    }
}

/// `D̃_i e = D_i e + H^β_i ∂e/∂w^β`, higher `w`-jets eliminated.
pub fn augmented_total_derivative(e: &Expr, i: usize, cov: &CoveringSystem) -> Result<Expr> {
    let d = derive(&TotalDerivative::augmented(&cov.space, i, &cov.aux), e)?;
    cov.restrict(&d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityResidual {
    pub beta: usize,
    /// Pair `(i, j)` with `i > j`; the residual is `D̃_i H^β_j - D̃_j H^β_i`.
    pub i: usize,
    pub j: usize,
    pub residual: Expr,
    /// Cofactors `c_ℓ` with `residual = Σ_ℓ c_ℓ F^ℓ`, one per base residual.
    pub cofactors: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub pass: bool,
    /// Every residual vanishes identically, so the base system is not properly embedded.
    pub trivial: bool,
    pub residuals: Vec<CompatibilityResidual>,
}

/// Cross-derivative compatibility of the auxiliary rules modulo the base system.
/// With one independent variable there is nothing to check.
pub fn check_compatibility(cov: &CoveringSystem) -> Result<CompatibilityReport> {
    let space = &cov.space;
    let reducer = Reducer::new(&cov.base, space, Some(&cov.aux));
    let mut residuals = Vec::new();
    for beta in 0..space.r {
        for i in 0..space.p {
            for j in 0..i {
                let c = augmented_total_derivative(cov.h(beta, j), i, cov)?
                    .sub(&augmented_total_derivative(cov.h(beta, i), j, cov)?);
                let reduced = reducer.reduce(&c)?;
                if !reduced.is_zero() {
                    return Err(Error::NoDecomposition(format!("{c:?}")));
                }
                let cofactors = cofactors(&c, &cov.base.residuals)
                    .ok_or_else(|| Error::NoDecomposition(format!("{c:?}")))?;
                residuals.push(CompatibilityResidual {
                    beta,
                    i,
                    j,
                    residual: c,
                    cofactors,
                });
            }
        }
    }
    let trivial = !residuals.is_empty() && residuals.iter().all(|r| r.residual.is_zero());
    Ok(CompatibilityReport {
        pass: !trivial,
        trivial,
        residuals,
    })
}

/// Writes `e = Σ_ℓ c_ℓ F^ℓ` by dividing the numerator of `e` by the numerators of
/// the `F^ℓ` in graded-lex order. `None` when the division leaves a remainder.
pub fn cofactors(e: &Expr, base: &[Expr]) -> Option<Vec<Expr>> {
    if e.is_zero() {
        return Some(vec![Expr::zero(); base.len()]);
    }
    let nums: Vec<_> = base.iter().map(|f| f.num().clone()).collect();
    let (quots, rem) = e.num().div_rem_multi(&nums);
    if !rem.is_zero() {
        return None;
    }
    let den = Expr::from_poly(e.den().clone());
    quots
        .into_iter()
        .zip(base)
        .map(|(q, f)| {
            Expr::from_poly(q)
                .mul(&Expr::from_poly(f.den().clone()))
                .div(&den)
                .ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{agree_at_random_points, MultiIndex};

    fn gibbons_tsarev() -> CoveringSystem {
        let s = JetSpace::new(2, 1, 1, 2).unwrap();
        let (ux, ut) = (s.uj(0, &[1, 0]), s.uj(0, &[0, 1]));
        let (uxx, uxt, utt) = (s.uj(0, &[2, 0]), s.uj(0, &[1, 1]), s.uj(0, &[0, 2]));
        let f = uxx.add(&ut.mul(&uxt)).sub(&ux.mul(&utt)).add(&Expr::one());
        let w = s.w0(0);
        let d = ux.add(&ut.mul(&w)).sub(&w.mul(&w));
        let ht = d.recip().unwrap();
        let hx = w.sub(&ut).div(&d).unwrap();
        let base = EquationSystem::from_residuals(vec![f], &s).unwrap();
        CoveringSystem::new(base, vec![vec![hx, ht]], s).unwrap()
    }

    #[test]
    fn gibbons_tsarev_quotient() {
        let cov = gibbons_tsarev();
        let rep = check_compatibility(&cov).unwrap();
        assert!(rep.pass && !rep.trivial);
        let r = &rep.residuals[0];
        let s = &cov.space;
        let w = s.w0(0);
        let d = s.uj(0, &[1, 0]).add(&s.uj(0, &[0, 1]).sub(&w).mul(&w));
        let expect = cov.base.residuals[0].div(&d.mul(&d)).unwrap();
        assert_eq!(r.residual, expect);
        assert_eq!(r.cofactors[0], d.mul(&d).recip().unwrap());
        assert!(agree_at_random_points(&r.residual, &expect, 30, 1).unwrap());
    }

    #[test]
    fn potential_burgers() {
        let s = JetSpace::new(2, 1, 1, 2).unwrap();
        let (u, ux, ut, uxx) = (s.u0(0), s.uj(0, &[1, 0]), s.uj(0, &[0, 1]), s.uj(0, &[2, 0]));
        let f = ut.sub(&uxx).sub(&u.mul(&ux));
        let base = EquationSystem::from_residuals(vec![f.clone()], &s).unwrap();
        let ht = ux.add(&u.mul(&u).scale(&crate::Q::new(1.into(), 2.into())));
        let cov = CoveringSystem::new(base, vec![vec![u.clone(), ht]], s).unwrap();
        let rep = check_compatibility(&cov).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.residuals[0].residual, f);
        assert_eq!(rep.residuals[0].cofactors, vec![Expr::one()]);
    }

    #[test]
    fn closed_rules_are_trivial() {
        let s = JetSpace::new(2, 1, 1, 1).unwrap();
        let base = EquationSystem::from_residuals(vec![s.uj(0, &[0, 1]).sub(&s.uj(0, &[1, 0]))], &s).unwrap();
        let cov = CoveringSystem::new(base, vec![vec![s.x(1), s.x(0)]], s).unwrap();
        let rep = check_compatibility(&cov).unwrap();
        assert!(rep.trivial && !rep.pass);
    }

    #[test]
    fn incompatible_rules_rejected() {
        let s = JetSpace::new(2, 1, 1, 1).unwrap();
        let base = EquationSystem::from_residuals(vec![s.uj(0, &[0, 1])], &s).unwrap();
        let cov = CoveringSystem::new(base, vec![vec![s.x(1), Expr::zero()]], s).unwrap();
        assert!(matches!(check_compatibility(&cov), Err(Error::NoDecomposition(_))));
    }

    #[test]
    fn augmented_derivative_example() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let h = s.u0(0).mul(&s.w0(0));
        let base = EquationSystem::from_residuals(vec![s.uj(0, &[1]).sub(&s.u0(0))], &s).unwrap();
        let cov = CoveringSystem::new(base, vec![vec![h.clone()]], s.clone()).unwrap();
        assert_eq!(augmented_total_derivative(&s.w0(0), 0, &cov).unwrap(), h);
        assert_eq!(augmented_total_derivative(&s.u0(0), 0, &cov).unwrap(), s.uj(0, &[1]));
        let wx = Expr::aux(0, MultiIndex::unit(1, 0));
        assert!(!augmented_total_derivative(&wx, 0, &cov).unwrap().depends_on(wx.as_atom().unwrap()));
    }

    #[test]
    fn aux_jets_rejected_in_rules() {
        let s = JetSpace::new(1, 1, 1, 1).unwrap();
        let wx = Expr::aux(0, MultiIndex::unit(1, 0));
        assert!(CoveringSystem::new(EquationSystem::empty(), vec![vec![wx]], s).is_err());
    }
}
