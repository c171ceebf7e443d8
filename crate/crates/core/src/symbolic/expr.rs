//! Canonical rational functions over atoms.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{gcd, Atom, AtomKind, FuncAtom, Monomial, MultiIndex, Poly, Q};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Frac {
    num: Poly,
    den: Poly,
}

/// Element of the differential field: `num/den` with coprime parts and monic `den`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr(Arc<Frac>);

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    fn raw(num: Poly, den: Poly) -> Self {
        Expr(Arc::new(Frac { num, den }))
    }

    pub fn zero() -> Self {
        Self::raw(Poly::zero(), Poly::one())
    }

    pub fn one() -> Self {
        Self::raw(Poly::one(), Poly::one())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Q::from_integer(n.into()))
    }

    pub fn rational(q: Q) -> Self {
        Self::raw(Poly::constant(q), Poly::one())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(Q::new(n.into(), d.into()))
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::raw(p, Poly::one())
    }

    pub fn atom(a: Atom) -> Self {
        Self::from_poly(Poly::atom(a))
    }

    pub fn indep(i: usize) -> Self {
        Self::atom(Atom::indep(i))
    }

    pub fn jet(var: usize, idx: MultiIndex) -> Self {
        Self::atom(Atom::jet(var, idx))
    }

    pub fn aux(var: usize, idx: MultiIndex) -> Self {
        Self::atom(Atom::aux(var, idx))
    }

    pub fn constant(name: &str) -> Self {
        Self::atom(Atom::constant(name))
    }

    /// Canonical `num/den`.
    pub fn from_frac(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(None));
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if let Some(c) = den.constant_value() {
            return Ok(Self::from_poly(num.scale(&c.recip())));
        }
        let g = gcd::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::normalized(num, den))
    }

    /// Scales a coprime pair so the denominator is monic.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            Self::raw(num, den)
        } else {
            let inv = lc.recip();
            Self::raw(num.scale(&inv), den.scale(&inv))
        }
    }

    pub fn num(&self) -> &Poly {
        &self.0.num
    }

    pub fn den(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.num.is_one() && self.0.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_polynomial() {
            self.0.num.constant_value()
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_constant()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// A single atom with coefficient one.
    pub fn as_atom(&self) -> Option<&Atom> {
        if !self.is_polynomial() || !self.num().is_monomial() {
            return None;
        }
        let (m, c) = self.num().leading()?;
        match m.factors() {
            [(a, 1)] if c.is_one() => Some(a),
            _ => None,
        }
    }

    /// Top-level atoms of numerator and denominator.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut s = self.0.num.atoms();
        s.extend(self.0.den.atoms());
        s
    }

    /// All atoms, including those nested inside composite atoms.
    pub fn atoms_deep(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<Atom> = self.atoms().into_iter().collect();
        while let Some(a) = stack.pop() {
            for c in a.children() {
                stack.extend(c.atoms());
            }
            out.insert(a);
        }
        out
    }

    /// Coordinates (x, u-jets, w-jets) appearing anywhere in the expression.
    pub fn coordinates(&self) -> BTreeSet<Atom> {
        self.atoms_deep()
            .into_iter()
            .filter(|a| a.is_coordinate())
            .collect()
    }

    pub fn depends_on(&self, a: &Atom) -> bool {
        self.atoms_deep().contains(a)
    }

    pub fn has_transcendental(&self) -> bool {
        self.atoms().iter().any(|a| a.is_transcendental())
    }

    /// True when no coordinate occurs (a function of constants only).
    pub fn is_constant_valued(&self) -> bool {
        self.coordinates().is_empty()
    }

    pub fn add(&self, other: &Expr) -> Expr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den() == other.den() {
            let num = self.num() + other.num();
            if self.den().is_one() {
                return Self::from_poly(num);
            }
            return Self::from_frac(num, self.den().clone()).expect("nonzero denominator");
        }
        let g = gcd::gcd(self.den(), other.den());
        let sd = self.den().div_exact(&g).expect("gcd divides");
        let od = other.den().div_exact(&g).expect("gcd divides");
        let num = &(self.num() * &od) + &(other.num() * &sd);
        let den = self.den() * &od;
        Self::from_frac(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        Self::raw(-self.num(), self.den().clone())
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.is_polynomial() && other.is_polynomial() {
            return Self::from_poly(self.num() * other.num());
        }
        let g1 = gcd::gcd(self.num(), other.den());
        let g2 = gcd::gcd(other.num(), self.den());
        let an = self.num().div_exact(&g1).expect("gcd divides");
        let bd = other.den().div_exact(&g1).expect("gcd divides");
        let bn = other.num().div_exact(&g2).expect("gcd divides");
        let ad = self.den().div_exact(&g2).expect("gcd divides");
        Self::normalized(&an * &bn, &ad * &bd)
    }

    pub fn scale(&self, c: &Q) -> Expr {
        if c.is_zero() {
            return Self::zero();
        }
        Self::raw(self.num().scale(c), self.den().clone())
    }

    pub fn recip(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(None));
        }
        Ok(Self::normalized(self.den().clone(), self.num().clone()))
    }

    pub fn div(&self, other: &Expr) -> Result<Expr> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, k: i64) -> Result<Expr> {
        if k < 0 {
            return self.recip()?.powi(-k);
        }
        let k = k as u32;
        Ok(Self::raw(self.num().pow(k), self.den().pow(k)))
    }

    /// `exp(arg)`, split over the terms of a polynomial argument so that integer
    /// multiples become powers of a shared atom.
    pub fn exp(arg: &Expr) -> Expr {
        if arg.is_zero() {
            return Self::one();
        }
        if !arg.is_polynomial() {
            if arg.num().is_negative_lead() {
                let atom = Self::atom(Atom::new(AtomKind::Exp(arg.neg())));
                return atom.recip().expect("atom is nonzero");
            }
            return Self::atom(Atom::new(AtomKind::Exp(arg.clone())));
        }
        let mut out = Self::one();
        for (m, c) in arg.num().terms() {
            let d = c.denom().clone();
            let n = c.numer().clone();
            let unit = Poly::term(m.clone(), Q::new(BigInt::one(), d));
            let atom = Self::atom(Atom::new(AtomKind::Exp(Self::from_poly(unit))));
            let k = n.to_i64().expect("exponent multiple fits in i64");
            out = out.mul(&atom.powi(k).expect("atom is nonzero"));
        }
        out
    }

    /// `base^exponent` for a constant-valued exponent.
    pub fn power(base: &Expr, exponent: &Expr) -> Result<Expr> {
        if !exponent.is_constant_valued() {
            return Err(Error::InvalidExpression(
                "exponent must not depend on coordinates".into(),
            ));
        }
        if !exponent.is_polynomial() {
            return Ok(Self::atom(Atom::new(AtomKind::Power {
                base: base.clone(),
                exponent: exponent.clone(),
            })));
        }
        let c0 = exponent.num().constant_term();
        if exponent.num().is_constant() {
            if c0.is_integer() {
                let k = c0.to_integer().to_i64().ok_or_else(|| {
                    Error::InvalidExpression("integer exponent out of range".into())
                })?;
                return base.powi(k);
            }
        }
        if base.is_zero() {
            return Ok(Self::zero());
        }
        if base.is_one() {
            return Ok(Self::one());
        }
        let k = c0.floor();
        let rest = exponent.sub(&Self::rational(k.clone()));
        let ki = k
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::InvalidExpression("integer exponent out of range".into()))?;
        let int_part = base.powi(ki)?;
        Ok(int_part.mul(&Self::symbolic_power(base, &rest)?))
    }

    /// `base^s` with `s` non-integer; pulls out an integer content of `s`.
    fn symbolic_power(base: &Expr, s: &Expr) -> Result<Expr> {
        let p = s.num();
        let all_int = p.terms().all(|(_, c)| c.is_integer());
        if all_int && p.constant_term().is_zero() {
            let mut g = BigInt::zero();
            for (_, c) in p.terms() {
                g = g.gcd(&c.to_integer());
            }
            if p.is_negative_lead() {
                g = -g;
            }
            let k = g.to_i64().ok_or_else(|| {
                Error::InvalidExpression("exponent content out of range".into())
            })?;
            if k != 1 {
                let reduced = s.scale(&Q::from_integer(g).recip());
                return Self::power_atom(base, &reduced)?.powi(k);
            }
        }
        Self::power_atom(base, s)
    }

    /// Distributes over a monomial base, else wraps a single atom.
    fn power_atom(base: &Expr, s: &Expr) -> Result<Expr> {
        if base.as_atom().is_none() && base.num().is_monomial() && base.den().is_monomial() {
            let (nm, nc) = base.num().leading().expect("monomial");
            let (dm, _) = base.den().leading().expect("monomial");
            if nc.is_one() {
                let mut out = Self::one();
                for (a, k) in nm.factors() {
                    let f = Self::power_atom(&Self::atom(a.clone()), s)?;
                    out = out.mul(&f.powi(*k as i64)?);
                }
                for (a, k) in dm.factors() {
                    let f = Self::power_atom(&Self::atom(a.clone()), s)?;
                    out = out.div(&f.powi(*k as i64)?)?;
                }
                return Ok(out);
            }
        }
        Ok(Self::atom(Atom::new(AtomKind::Power {
            base: base.clone(),
            exponent: s.clone(),
        })))
    }

    /// Opaque function `name` differentiated `orders[k]` times in argument `k`.
    pub fn func(name: &str, orders: Vec<u32>, args: Vec<Expr>) -> Expr {
        Self::atom(Atom::new(AtomKind::Func(FuncAtom {
            name: Arc::from(name),
            orders,
            args,
        })))
    }
}

impl Poly {
    pub fn constant_term(&self) -> Q {
        self.terms()
            .next()
            .filter(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }
}

impl Monomial {
    pub fn to_expr(&self) -> Expr {
        Expr::from_poly(Poly::term(self.clone(), Q::one()))
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| a.add(&b))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::Names::generic().print(self))
    }
}
