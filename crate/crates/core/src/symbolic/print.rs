//! Canonical text form of expressions. The output parses back to the same value.

use num_traits::{One, Signed};

use super::{Atom, AtomKind, Expr, JetKey, Monomial, Poly, Q};

/// Display names for independent, dependent and auxiliary variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Names {
    pub indep: Vec<String>,
    pub dep: Vec<String>,
    pub aux: Vec<String>,
}

fn pick(defaults: &[&str], prefix: &str, i: usize) -> String {
    defaults
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("{prefix}{i}"))
}

impl Names {
    pub fn new<S: Into<String>>(
        indep: impl IntoIterator<Item = S>,
        dep: impl IntoIterator<Item = S>,
        aux: impl IntoIterator<Item = S>,
    ) -> Self {
        Names {
            indep: indep.into_iter().map(Into::into).collect(),
            dep: dep.into_iter().map(Into::into).collect(),
            aux: aux.into_iter().map(Into::into).collect(),
        }
    }

    /// Fallback names used by `Debug`.
    pub fn generic() -> Self {
        Names::default()
    }

    fn indep_name(&self, i: usize) -> String {
        self.indep
            .get(i)
            .cloned()
            .unwrap_or_else(|| pick(&["x", "t", "y"], "x", i))
    }

    fn jet_name(&self, base: String, key: &JetKey) -> String {
        if key.order() == 0 {
            return base;
        }
        let mut s = base;
        s.push('_');
        for (i, &c) in key.idx.counts().iter().enumerate() {
            let n = self.indep_name(i);
            for _ in 0..c {
                s.push_str(&n);
            }
        }
        s
    }

    pub fn atom(&self, a: &Atom) -> String {
        match a.kind() {
            AtomKind::Indep(i) => self.indep_name(*i),
            AtomKind::Jet(k) => {
                let base = self
                    .dep
                    .get(k.var)
                    .cloned()
                    .unwrap_or_else(|| pick(&["u", "v"], "u", k.var));
                self.jet_name(base, k)
            }
            AtomKind::Aux(k) => {
                let base = self
                    .aux
                    .get(k.var)
                    .cloned()
                    .unwrap_or_else(|| pick(&["w"], "w", k.var));
                self.jet_name(base, k)
            }
            AtomKind::Const(name) => name.to_string(),
            AtomKind::Func(f) => {
                let args: Vec<String> = f.args.iter().map(|e| self.print(e)).collect();
                let marks = if f.args.len() == 1 {
                    "'".repeat(f.orders[0] as usize)
                } else if f.orders.iter().all(|&o| o == 0) {
                    String::new()
                } else {
                    let o: Vec<String> = f.orders.iter().map(|o| o.to_string()).collect();
                    format!("[{}]", o.join(","))
                };
                format!("{}{}({})", f.name, marks, args.join(", "))
            }
            AtomKind::Power { base, exponent } => {
                let b = match base.as_atom() {
                    Some(a) => self.atom(a),
                    None => format!("({})", self.print(base)),
                };
                let e = match exponent.as_atom() {
                    Some(a) => self.atom(a),
                    None => format!("({})", self.print(exponent)),
                };
                format!("{b}^{e}")
            }
            AtomKind::Exp(arg) => format!("exp({})", self.print(arg)),
        }
    }

    fn factor(&self, a: &Atom, k: u32) -> String {
        let s = self.atom(a);
        if k == 1 {
            return s;
        }
        match a.kind() {
            AtomKind::Power { .. } => format!("({s})^{k}"),
            _ => format!("{s}^{k}"),
        }
    }

    fn monomial(&self, m: &Monomial) -> String {
        m.factors()
            .iter()
            .map(|(a, k)| self.factor(a, *k))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Term with a non-negative coefficient `c`.
    fn term(&self, m: &Monomial, c: &Q) -> String {
        if m.is_one() {
            return c.to_string();
        }
        let body = self.monomial(m);
        if c.is_one() {
            body
        } else {
            format!("{c}*{body}")
        }
    }

    pub fn poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms().rev().enumerate() {
            let t = self.term(m, &c.abs());
            match (i, c.is_negative()) {
                (0, false) => out.push_str(&t),
                (0, true) => {
                    out.push('-');
                    out.push_str(&t);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&t);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&t);
                }
            }
        }
        out
    }

    pub fn print(&self, e: &Expr) -> String {
        let num = self.poly(e.num());
        if e.is_polynomial() {
            return num;
        }
        let num = if e.num().len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den = e.den();
        let simple_den = den.is_monomial()
            && den.leading().is_some_and(|(m, c)| c.is_one() && m.factors().len() == 1);
        let den = if simple_den {
            self.poly(den)
        } else {
            format!("({})", self.poly(den))
        };
        format!("{num}/{den}")
    }

    /// Like `print`, but a denominator of the form `g^k` with `k > 1` prints as
    /// `(g)^k`, `g` written in Horner form in its highest atom.
    pub fn print_factored(&self, e: &Expr) -> String {
        let Some((g, k)) = perfect_power(e.den()) else {
            return self.print(e);
        };
        let num = self.poly(e.num());
        let num = if e.num().len() > 1 {
            format!("({num})")
        } else {
            num
        };
        let a = g.atoms().into_iter().next_back().expect("nonconstant base");
        format!("{num}/({})^{k}", self.horner(&g.coeffs_in(&a), &a))
    }

    /// `c0 + (c1 + (c2 + ...)*a)*a`.
    fn horner(&self, cs: &[Poly], a: &Atom) -> String {
        if cs.len() == 1 {
            return self.poly(&cs[0]);
        }
        let tail = Poly::from_coeffs_in(a, &cs[1..]);
        let prod = if tail.len() == 1 {
            self.poly(&(&tail * &Poly::atom(a.clone())))
        } else {
            format!("({})*{}", self.horner(&cs[1..], a), self.atom(a))
        };
        if cs[0].is_zero() {
            return prod;
        }
        match prod.strip_prefix('-') {
            Some(rest) => format!("{} - {rest}", self.poly(&cs[0])),
            None => format!("{} + {prod}", self.poly(&cs[0])),
        }
    }
}

/// Writes a monic `p` as `g^k` with `k > 1`. For even `k` the sign of `g` is
/// chosen so that its lowest coefficient in the top atom leads positively.
fn perfect_power(p: &Poly) -> Option<(Poly, u32)> {
    let a = p.atoms().into_iter().next_back()?;
    let dp = p.partial(&a);
    let g0 = super::gcd::gcd(p, &dp);
    if g0.is_constant() {
        return None;
    }
    let g = p.div_exact(&g0)?.monic();
    let (dg, d) = (g.degree_in(&a), p.degree_in(&a));
    if dg == 0 || d % dg != 0 {
        return None;
    }
    let k = d / dg;
    if k < 2 || g.pow(k) != *p {
        return None;
    }
    let low = g.coeffs_in(&a).into_iter().find(|c| !c.is_zero())?;
    if k % 2 == 0 && low.is_negative_lead() {
        return Some((-&g, k));
    }
    Some((g, k))
}
