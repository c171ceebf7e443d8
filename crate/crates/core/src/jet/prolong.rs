use std::collections::BTreeMap;

use super::{AuxRules, JetSpace, ProlongedField, TotalDerivative, VectorField};
use crate::error::{Error, Result};
use crate::forms::{check_mch, MatrixOneForm};
use crate::symbolic::{derive, Expr, JetKey, MultiIndex};

/// How a prolongation is twisted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Standard,
    /// Scalar stretching `D_x + λ`; requires one independent variable.
    Lambda(Expr),
    /// Matrix twisting `(Λ_i)^a_b` for `μ = Λ_i dx^i`.
    Mu(MatrixOneForm),
}

/// Prolongs `x` to order `n`.
///
/// `ψ^a_{J,i} = D_i ψ^a_J - u^a_{J,k} D_i ξ^k + T_i(ψ_J - u_{J,k} ξ^k)` where `T_i`
/// is zero, `λ`, or `Λ_i`. Auxiliary coefficients follow the untwisted rule. When
/// `aux` is given, every `D_i` is the augmented derivative and `w`-jets of positive
/// order are replaced by their values on the covering.
pub fn prolong(
    x: &VectorField,
    twist: &Twist,
    n: usize,
    space: &JetSpace,
    aux: Option<&AuxRules>,
) -> Result<ProlongedField> {
    x.check_dimensions(space)?;
    if n > space.n {
        return Err(Error::TruncationExceeded {
            order: n,
            limit: space.n,
        });
    }
    match twist {
        Twist::Standard => {}
        Twist::Lambda(_) => {
            if space.p != 1 {
                return Err(Error::NotScalarBase(space.p));
            }
        }
        Twist::Mu(mu) => {
            if mu.p() != space.p || mu.q() != space.q {
                return Err(Error::DimensionMismatch(format!(
                    "mu has p={}, q={} on a space with p={}, q={}",
                    mu.p(),
                    mu.q(),
                    space.p,
                    space.q
                )));
            }
        }
    }
    let p = space.p;
    let zero = MultiIndex::zero(p);
    let mut psi: BTreeMap<JetKey, Expr> = BTreeMap::new();
    let mut chi: BTreeMap<JetKey, Expr> = BTreeMap::new();
    for a in 0..space.q {
        psi.insert(JetKey::new(a, zero.clone()), x.phi[a].clone());
    }
    for b in 0..space.r {
        chi.insert(JetKey::new(b, zero.clone()), x.eta(b));
    }

    let d = |i: usize, e: &Expr| -> Result<Expr> {
        match aux {
            Some(rules) => derive(&TotalDerivative::augmented(space, i, rules), e),
            None => derive(&TotalDerivative::new(space, i), e),
        }
    };
    let w_jet = |b: usize, idx: &MultiIndex| -> Result<Expr> {
        match aux {
            Some(rules) => rules.value(space, b, idx),
            None => Ok(Expr::aux(b, idx.clone())),
        }
    };
    let mut dxi: Vec<Vec<Expr>> = Vec::with_capacity(p);
    for i in 0..p {
        dxi.push(x.xi.iter().map(|e| d(i, e)).collect::<Result<_>>()?);
    }

    for k in 1..=n {
        for target in MultiIndex::all_of_order(p, k) {
            let i = target.last_direction().expect("positive order");
            let parent = target.decrement(i).expect("positive count");
            // characteristic-like combinations ψ_J - u_{J,k} ξ^k for the twist
            let reduced: Vec<Expr> = if matches!(twist, Twist::Standard) {
                Vec::new()
            } else {
                (0..space.q)
                    .map(|a| {
                        let mut v = psi[&JetKey::new(a, parent.clone())].clone();
                        for (kk, xi) in x.xi.iter().enumerate() {
                            if !xi.is_zero() {
                                v = v.sub(&Expr::jet(a, parent.append(kk)).mul(xi));
                            }
                        }
                        v
                    })
                    .collect()
            };
            for a in 0..space.q {
                let prev = &psi[&JetKey::new(a, parent.clone())];
                let mut v = d(i, prev)?;
                for (kk, dx) in dxi[i].iter().enumerate() {
                    if !dx.is_zero() {
                        v = v.sub(&Expr::jet(a, parent.append(kk)).mul(dx));
                    }
                }
                match twist {
                    Twist::Standard => {}
                    Twist::Lambda(lambda) => v = v.add(&lambda.mul(&reduced[a])),
                    Twist::Mu(mu) => {
                        let lam = mu.lambda(i);
                        for (b, r) in reduced.iter().enumerate() {
                            let c = lam.get(a, b);
                            if !c.is_zero() {
                                v = v.add(&c.mul(r));
                            }
                        }
                    }
                }
                psi.insert(JetKey::new(a, target.clone()), v);
            }
            for b in 0..space.r {
                let prev = &chi[&JetKey::new(b, parent.clone())];
                let mut v = d(i, prev)?;
                for (kk, dx) in dxi[i].iter().enumerate() {
                    if !dx.is_zero() {
                        v = v.sub(&w_jet(b, &parent.append(kk))?.mul(dx));
                    }
                }
                chi.insert(JetKey::new(b, target.clone()), v);
            }
        }
    }
    Ok(ProlongedField {
        order: n,
        xi: x.xi.clone(),
        psi,
        chi,
    })
}

pub fn prolong_standard(x: &VectorField, n: usize, space: &JetSpace) -> Result<ProlongedField> {
    prolong(x, &Twist::Standard, n, space, None)
}

/// λ-prolongation; only defined for a single independent variable.
pub fn prolong_lambda(
    x: &VectorField,
    lambda: &Expr,
    n: usize,
    space: &JetSpace,
) -> Result<ProlongedField> {
    prolong(x, &Twist::Lambda(lambda.clone()), n, space, None)
}

/// μ-prolongation. With more than one independent variable the horizontal
/// Maurer-Cartan condition is enforced first.
pub fn prolong_mu(
    x: &VectorField,
    mu: &MatrixOneForm,
    n: usize,
    space: &JetSpace,
) -> Result<ProlongedField> {
    if space.p > 1 {
        let report = check_mch(mu, space)?;
        if let Some(&(i, j)) = report.failing.first() {
            return Err(Error::MchViolated(i, j));
        }
    }
    prolong(x, &Twist::Mu(mu.clone()), n, space, None)
}
