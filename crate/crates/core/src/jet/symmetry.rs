use std::collections::BTreeMap;

use super::{
    commutator, evolutionary_representative, prolong, prolong_mu, EquationSystem,
    ProlongedField, Reducer, JetSpace, Twist, VectorField,
};
use crate::error::{Error, Result};
use crate::symbolic::{Expr, JetKey, MultiIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub pass: bool,
    /// `Y[F^ℓ]` reduced on the solution manifold, one per residual.
    pub residuals: Vec<Expr>,
    pub prolonged: ProlongedField,
}

/// Prolongs `x` according to `twist` (μ-twists enforce the Maurer-Cartan
/// condition when there is more than one independent variable).
pub fn prolong_twisted(
    x: &VectorField,
    twist: &Twist,
    n: usize,
    space: &JetSpace,
) -> Result<ProlongedField> {
    match twist {
        Twist::Mu(mu) => prolong_mu(x, mu, n, space),
        _ => prolong(x, twist, n, space, None),
    }
}

/// Tangency of the twisted prolongation to the level set `F = 0`.
pub fn check_symmetry(
    x: &VectorField,
    sys: &EquationSystem,
    twist: &Twist,
    n: usize,
    space: &JetSpace,
) -> Result<SymmetryReport> {
    x.check_lie_point()?;
    let ord = sys.max_order();
    if n < ord {
        return Err(Error::TruncationExceeded {
            order: ord,
            limit: n,
        });
    }
    let y = prolong_twisted(x, twist, n, space)?;
    let reducer = Reducer::new(sys, space, None);
    let residuals = sys
        .residuals
        .iter()
        .map(|f| reducer.reduce(&y.apply(f)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymmetryReport {
        pass: residuals.iter().all(Expr::is_zero),
        residuals,
        prolonged: y,
    })
}

/// Order-zero part of a prolonged field.
pub fn base_field(y: &ProlongedField, space: &JetSpace) -> VectorField {
    let zero = MultiIndex::zero(space.p);
    VectorField {
        xi: y.xi.clone(),
        phi: (0..space.q).map(|a| y.psi(a, &zero)).collect(),
        eta: (0..space.r).map(|b| y.chi(b, &zero)).collect(),
    }
}

/// `[X^(n)_λ, Y^(n)_λ] - ([X, Y])^(n)_λ` for the given twist.
pub fn commutator_defect(
    x: &VectorField,
    y: &VectorField,
    twist: &Twist,
    n: usize,
    space: &JetSpace,
) -> Result<ProlongedField> {
    let xp = prolong_twisted(x, twist, n, space)?;
    let yp = prolong_twisted(y, twist, n, space)?;
    let bracket = commutator(&xp, &yp)?;
    let base = commutator(&x.as_prolonged(space.p), &y.as_prolonged(space.p))?;
    let base = base_field(&base, space);
    let bp = prolong_twisted(&base, twist, n, space)?;
    Ok(bracket.sub(&bp))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IbdpReport {
    pub pass: bool,
    /// `D_x ζ / D_x η`.
    pub quotient: Expr,
    /// The prolonged field applied to the quotient.
    pub residual: Expr,
}

fn jet_order(e: &Expr) -> usize {
    e.coordinates().iter().map(|a| a.jet_order()).max().unwrap_or(0)
}

/// Invariance by differentiation: with `η`, `ζ` invariants of the prolonged field,
/// checks that `D_x ζ / D_x η` is again an invariant.
pub fn check_ibdp(
    x: &VectorField,
    twist: &Twist,
    eta: &Expr,
    zeta: &Expr,
    space: &JetSpace,
) -> Result<IbdpReport> {
    if space.p != 1 {
        return Err(Error::NotScalarBase(space.p));
    }
    let k = jet_order(eta).max(jet_order(zeta));
    let y = prolong(x, twist, k + 1, space, None)?;
    if !y.apply(eta)?.is_zero() {
        return Err(Error::NotInvariant("eta".into()));
    }
    if !y.apply(zeta)?.is_zero() {
        return Err(Error::NotInvariant("zeta".into()));
    }
    let quotient = space
        .total_derivative(zeta, 0)?
        .div(&space.total_derivative(eta, 0)?)?;
    let residual = y.apply(&quotient)?;
    Ok(IbdpReport {
        pass: residual.is_zero(),
        quotient,
        residual,
    })
}

/// Repeats the invariance-by-differentiation step until the differential
/// invariant reaches order `max_order`.
pub fn check_ibdp_chain(
    x: &VectorField,
    twist: &Twist,
    eta: &Expr,
    zeta: &Expr,
    max_order: usize,
    space: &JetSpace,
) -> Result<Vec<IbdpReport>> {
    let mut out = Vec::new();
    let mut z = zeta.clone();
    while jet_order(&z) < max_order {
        let r = check_ibdp(x, twist, eta, &z, space)?;
        let pass = r.pass;
        z = r.quotient.clone();
        out.push(r);
        if !pass {
            break;
        }
    }
    Ok(out)
}

/// `F^a_J = (ψ^a_J)_μ - (ψ^a_J)_0`.
pub fn mu_deviation(
    x: &VectorField,
    twist: &Twist,
    n: usize,
    space: &JetSpace,
) -> Result<BTreeMap<JetKey, Expr>> {
    let twisted = prolong_twisted(x, twist, n, space)?;
    let standard = prolong(x, &Twist::Standard, n, space, None)?;
    Ok(twisted.sub(&standard).psi)
}

/// Reduces every deviation modulo `Q^a = 0` and its differential consequences;
/// the returned residuals all vanish when the deviation lies in that ideal.
pub fn deviation_on_invariant_set(
    x: &VectorField,
    twist: &Twist,
    n: usize,
    space: &JetSpace,
) -> Result<BTreeMap<JetKey, Expr>> {
    let dev = mu_deviation(x, twist, n, space)?;
    let q = evolutionary_representative(x, space);
    let reduction_space = space.with_order(space.n + 1);
    let sys = EquationSystem::from_residuals(q, &reduction_space)?;
    let reducer = Reducer::new(&sys, &reduction_space, None);
    dev.into_iter()
        .map(|(k, v)| Ok((k, reducer.reduce(&v)?)))
        .collect()
}
