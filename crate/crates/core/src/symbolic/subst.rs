//! Simultaneous substitution of atoms.

use std::collections::HashMap;

use num_traits::One;

use super::{Atom, AtomKind, Expr, Poly, Q};
use crate::error::{Error, Result};

/// Replaces every mapped atom at once (also inside composite atoms) and renormalizes.
pub fn substitute(e: &Expr, sigma: &HashMap<Atom, Expr>) -> Result<Expr> {
    if sigma.is_empty() {
        return Ok(e.clone());
    }
    let mut memo = HashMap::new();
    subst_expr(e, sigma, &mut memo)
}

fn subst_expr(
    e: &Expr,
    sigma: &HashMap<Atom, Expr>,
    memo: &mut HashMap<Atom, Expr>,
) -> Result<Expr> {
    let num = subst_poly(e.num(), sigma, memo)?;
    if e.is_polynomial() {
        return Ok(num);
    }
    let den = subst_poly(e.den(), sigma, memo)?;
    if den.is_zero() {
        let culprits: Vec<String> = e
            .den()
            .atoms()
            .into_iter()
            .filter(|a| sigma.contains_key(a))
            .map(|a| format!("{:?}", Expr::atom(a)))
            .collect();
        return Err(Error::DivisionByZero(Some(format!(
            "denominator vanishes after substituting {}",
            culprits.join(", ")
        ))));
    }
    num.div(&den)
}

fn subst_poly(
    p: &Poly,
    sigma: &HashMap<Atom, Expr>,
    memo: &mut HashMap<Atom, Expr>,
) -> Result<Expr> {
    let atoms = p.atoms();
    let mut changed = false;
    for a in &atoms {
        let v = subst_atom(a, sigma, memo)?;
        if v.as_atom() != Some(a) {
            changed = true;
        }
    }
    if !changed {
        return Ok(Expr::from_poly(p.clone()));
    }
    // group terms by the untouched part to keep intermediate denominators small
    let mut out = Expr::zero();
    for (m, c) in p.terms() {
        let mut keep = Poly::constant(c.clone());
        let mut t = Expr::one();
        for (a, k) in m.factors() {
            let v = &memo[a];
            if v.as_atom() == Some(a) {
                keep = keep.mul_term(&super::Monomial::atom(a.clone(), *k), &Q::one());
            } else {
                t = t.mul(&v.powi(*k as i64)?);
            }
        }
        out = out.add(&Expr::from_poly(keep).mul(&t));
    }
    Ok(out)
}

fn subst_atom(
    a: &Atom,
    sigma: &HashMap<Atom, Expr>,
    memo: &mut HashMap<Atom, Expr>,
) -> Result<Expr> {
    if let Some(v) = memo.get(a) {
        return Ok(v.clone());
    }
    let v = if let Some(v) = sigma.get(a) {
        v.clone()
    } else {
        match a.kind() {
            AtomKind::Func(f) => {
                let mut args = Vec::with_capacity(f.args.len());
                let mut changed = false;
                for arg in &f.args {
                    let s = subst_expr(arg, sigma, memo)?;
                    changed |= &s != arg;
                    args.push(s);
                }
                if changed {
                    Expr::func(&f.name, f.orders.clone(), args)
                } else {
                    Expr::atom(a.clone())
                }
            }
            AtomKind::Power { base, exponent } => {
                let b = subst_expr(base, sigma, memo)?;
                let x = subst_expr(exponent, sigma, memo)?;
                if &b == base && &x == exponent {
                    Expr::atom(a.clone())
                } else {
                    Expr::power(&b, &x)?
                }
            }
            AtomKind::Exp(arg) => {
                let s = subst_expr(arg, sigma, memo)?;
                if &s == arg {
                    Expr::atom(a.clone())
                } else {
                    Expr::exp(&s)
                }
            }
            _ => Expr::atom(a.clone()),
        }
    };
    memo.insert(a.clone(), v.clone());
    Ok(v)
}

/// Substitutes repeatedly until no mapped atom remains (for triangular rule sets).
pub fn substitute_fixpoint(e: &Expr, sigma: &HashMap<Atom, Expr>, max_rounds: usize) -> Result<Expr> {
    let mut cur = e.clone();
    for _ in 0..max_rounds {
        if !cur.atoms_deep().iter().any(|a| sigma.contains_key(a)) {
            return Ok(cur);
        }
        cur = substitute(&cur, sigma)?;
    }
    Err(Error::Inconsistent(
        "substitution did not reach a fixpoint".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::MultiIndex;

    #[test]
    fn replaces_top_derivative() {
        let uxx = Atom::jet(0, MultiIndex::from_counts(vec![2]));
        let u = Expr::jet(0, MultiIndex::zero(1));
        let e = Expr::atom(uxx.clone()).sub(&u);
        let sigma = HashMap::from([(uxx, u)]);
        assert!(substitute(&e, &sigma).unwrap().is_zero());
    }

    #[test]
    fn pole_is_reported() {
        let u = Atom::jet(0, MultiIndex::zero(1));
        let e = Expr::one().div(&Expr::atom(u.clone())).unwrap();
        let sigma = HashMap::from([(u, Expr::zero())]);
        assert!(matches!(
            substitute(&e, &sigma),
            Err(Error::DivisionByZero(Some(_)))
        ));
    }

    #[test]
    fn reaches_inside_exp() {
        let w = Atom::aux(0, MultiIndex::zero(1));
        let x = Expr::indep(0);
        let e = Expr::exp(&Expr::atom(w.clone()));
        let sigma = HashMap::from([(w, x.clone())]);
        assert_eq!(substitute(&e, &sigma).unwrap(), Expr::exp(&x));
    }
}
