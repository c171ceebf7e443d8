//! Sparse multivariate polynomials over the rationals, with atoms as variables.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Atom, Q};

/// Power product of atoms, kept sorted by atom with positive exponents.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of the
/// greatest atom, and so on downward.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom, k: u32) -> Self {
        if k == 0 {
            Self::one()
        } else {
            Monomial(vec![(a, k)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(b, _)| b.cmp(a))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, k) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *a {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *a {
                let kb = other.0[j].1;
                j += 1;
                match k.cmp(&kb) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((a.clone(), k - kb)),
                }
            } else {
                out.push((a.clone(), *k));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(a, k)| {
                    let kb = other.exponent(a);
                    (kb > 0).then(|| (a.clone(), (*k).min(kb)))
                })
                .collect(),
        )
    }

    pub fn without(&self, a: &Atom) -> Monomial {
        Monomial(self.0.iter().filter(|(b, _)| b != a).cloned().collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (self.0.len(), other.0.len());
            loop {
                match (i > 0, j > 0) {
                    (false, false) => return Ordering::Equal,
                    (true, false) => return Ordering::Greater,
                    (false, true) => return Ordering::Less,
                    (true, true) => {
                        let (a, ka) = &self.0[i - 1];
                        let (b, kb) = &other.0[j - 1];
                        match a.cmp(b) {
                            Ordering::Equal => match ka.cmp(kb) {
                                Ordering::Equal => {
                                    i -= 1;
                                    j -= 1;
                                }
                                o => return o,
                            },
                            o => return o,
                        }
                    }
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(Monomial::atom(a, 1), Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Value of a constant polynomial (zero included).
    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Q {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.leading().map(|(m, _)| m.degree()).unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, k)| (n.mul(m), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(a, _)| a.clone()))
            .collect()
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.exponent(a)).max().unwrap_or(0)
    }

    /// Coefficients of `self` as a univariate polynomial in `a`; index = power.
    pub fn coeffs_in(&self, a: &Atom) -> Vec<Poly> {
        let d = self.degree_in(a) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        for (m, c) in &self.terms {
            let k = m.exponent(a) as usize;
            out[k].add_term(m.without(a), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(a: &Atom, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let mk = Monomial::atom(a.clone(), k as u32);
            for (m, q) in &c.terms {
                out.add_term(m.mul(&mk), q.clone());
            }
        }
        out
    }

    /// Formal partial derivative with respect to an atom.
    pub fn partial(&self, a: &Atom) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let k = m.exponent(a);
            if k == 0 {
                continue;
            }
            let rest = m.without(a).mul(&Monomial::atom(a.clone(), k - 1));
            out.add_term(rest, c * Q::from_integer(k.into()));
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            terms.insert(n.div(m)?, c.clone());
        }
        Some(Poly { terms })
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.is_monomial() {
            let (m, c) = d.leading().unwrap();
            return self.div_monomial(m).map(|p| p.scale(&c.recip()));
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = &rem - &d.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Multivariate division by a list of divisors in graded-lex order.
    /// Returns quotients and the remainder.
    pub fn div_rem_multi(&self, divisors: &[Poly]) -> (Vec<Poly>, Poly) {
        let mut quots = vec![Poly::zero(); divisors.len()];
        let mut rem = Poly::zero();
        let mut p = self.clone();
        let leads: Vec<Option<(Monomial, Q)>> = divisors
            .iter()
            .map(|d| d.leading().map(|(m, c)| (m.clone(), c.clone())))
            .collect();
        while let Some((m, c)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let mut divided = false;
            for (k, lead) in leads.iter().enumerate() {
                let Some((lm, lc)) = lead else { continue };
                if let Some(qm) = m.div(lm) {
                    let qc = &c / lc;
                    p = &p - &divisors[k].mul_term(&qm, &qc);
                    quots[k].add_term(qm, qc);
                    divided = true;
                    break;
                }
            }
            if !divided {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        (quots, rem)
    }

    /// Exact evaluation; atoms missing from `values` yield `None`.
    pub fn eval(&self, values: &HashMap<Atom, Q>) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (a, k) in m.factors() {
                let v = values.get(a)?;
                t *= num_traits::pow(v.clone(), *k as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// True when the leading coefficient is negative.
    pub fn is_negative_lead(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::MultiIndex;

    fn x() -> Poly {
        Poly::atom(Atom::indep(0))
    }
    fn u() -> Poly {
        Poly::atom(Atom::jet(0, MultiIndex::zero(1)))
    }

    #[test]
    fn grlex_leading_term() {
        let p = &(&x() * &x()) + &u();
        let (m, _) = p.leading().unwrap();
        assert_eq!(m.degree(), 2);
        let q = &(&x() * &u()) + &(&x() * &x());
        // u outranks x, so x*u leads x^2
        assert_eq!(q.leading().unwrap().0.exponent(&Atom::jet(0, MultiIndex::zero(1))), 1);
    }

    #[test]
    fn exact_division() {
        let a = &(&u() * &u()) - &(&x() * &x());
        let b = &u() - &x();
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, &u() + &x());
        assert!(a.div_exact(&(&u() + &Poly::one())).is_none());
    }

    #[test]
    fn multi_division_remainder() {
        let f = &(&u() * &x()) + &Poly::one();
        let (q, r) = f.div_rem_multi(&[u()]);
        assert_eq!(q[0], x());
        assert_eq!(r, Poly::one());
    }

    #[test]
    fn partial_derivative() {
        let p = &(&u() * &u()) * &x();
        let d = p.partial(&Atom::jet(0, MultiIndex::zero(1)));
        assert_eq!(d, (&u() * &x()).scale(&Q::from_integer(2.into())));
    }
}
