//! Derivations of the differential field.

use std::collections::HashMap;

use super::{Atom, AtomKind, Expr, Poly};
use crate::error::{Error, Result};

/// A derivation is determined by its values on coordinate-like atoms; composite
/// atoms (exp, symbolic powers, opaque functions) follow the chain rule.
pub trait Derivation {
    /// Value on a non-composite atom (independent variable, jet, constant).
    fn coordinate(&self, atom: &Atom) -> Result<Expr>;

    fn derive(&self, e: &Expr) -> Result<Expr>
    where
        Self: Sized,
    {
        derive(self, e)
    }
}

/// Applies `d` to `e` with the built-in chain rules.
pub fn derive<D: Derivation + ?Sized>(d: &D, e: &Expr) -> Result<Expr> {
    let mut memo = HashMap::new();
    derive_with(d, e, &mut memo)
}

fn derive_with<D: Derivation + ?Sized>(
    d: &D,
    e: &Expr,
    memo: &mut HashMap<Atom, Expr>,
) -> Result<Expr> {
    let dn = derive_poly(d, e.num(), memo)?;
    if e.is_polynomial() {
        return Ok(dn);
    }
    let dd = derive_poly(d, e.den(), memo)?;
    if dd.is_zero() {
        return dn.div(&Expr::from_poly(e.den().clone()));
    }
    let num = Expr::from_poly(e.num().clone());
    let den = Expr::from_poly(e.den().clone());
    let top = dn.mul(&den).sub(&num.mul(&dd));
    top.div(&den.mul(&den))
}

fn derive_poly<D: Derivation + ?Sized>(
    d: &D,
    p: &Poly,
    memo: &mut HashMap<Atom, Expr>,
) -> Result<Expr> {
    let mut out = Expr::zero();
    for a in p.atoms() {
        let da = derive_atom(d, &a, memo)?;
        if da.is_zero() {
            continue;
        }
        out = out.add(&Expr::from_poly(p.partial(&a)).mul(&da));
    }
    Ok(out)
}

fn derive_atom<D: Derivation + ?Sized>(
    d: &D,
    a: &Atom,
    memo: &mut HashMap<Atom, Expr>,
) -> Result<Expr> {
    if let Some(v) = memo.get(a) {
        return Ok(v.clone());
    }
    let v = match a.kind() {
        AtomKind::Indep(_) | AtomKind::Jet(_) | AtomKind::Aux(_) | AtomKind::Const(_) => {
            d.coordinate(a)?
        }
        AtomKind::Func(f) => {
            let mut total = Expr::zero();
            for (k, arg) in f.args.iter().enumerate() {
                let darg = derive_with(d, arg, memo)?;
                if darg.is_zero() {
                    continue;
                }
                let mut orders = f.orders.clone();
                orders[k] += 1;
                let bumped = Expr::func(&f.name, orders, f.args.clone());
                total = total.add(&bumped.mul(&darg));
            }
            total
        }
        AtomKind::Power { base, exponent } => {
            if !derive_with(d, exponent, memo)?.is_zero() {
                return Err(Error::InvalidExpression(
                    "derivation acts on a symbolic exponent".into(),
                ));
            }
            let db = derive_with(d, base, memo)?;
            if db.is_zero() {
                Expr::zero()
            } else {
                Expr::atom(a.clone()).mul(exponent).mul(&db).div(base)?
            }
        }
        AtomKind::Exp(arg) => Expr::atom(a.clone()).mul(&derive_with(d, arg, memo)?),
    };
    memo.insert(a.clone(), v.clone());
    Ok(v)
}

/// Derivation given by an explicit table; unmapped atoms derive to zero.
#[derive(Clone, Debug, Default)]
pub struct MapDerivation {
    pub action: HashMap<Atom, Expr>,
}

impl MapDerivation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, a: Atom, v: Expr) -> Self {
        self.action.insert(a, v);
        self
    }

    /// Partial derivative with respect to one coordinate.
    pub fn partial(a: &Atom) -> Self {
        Self::new().with(a.clone(), Expr::one())
    }
}

impl Derivation for MapDerivation {
    fn coordinate(&self, atom: &Atom) -> Result<Expr> {
        Ok(self.action.get(atom).cloned().unwrap_or_else(Expr::zero))
    }
}

/// `∂e/∂a`, treating every other coordinate as independent.
pub fn partial(e: &Expr, a: &Atom) -> Result<Expr> {
    derive(&MapDerivation::partial(a), e)
}
