use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::jet::JetSpace;
use crate::symbolic::{partial, Atom, AtomKind, Derivation, Expr, MultiIndex, Names};

/// Exterior form on jet space. Basis covectors are the differentials of
/// coordinates (`dx^i`, `du^a_J`, `dw^β_J`), kept in strictly increasing atom order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffForm {
    degree: usize,
    coeffs: BTreeMap<Vec<Atom>, Expr>,
}

/// Sorts a covector tuple, returning the permutation sign, or `None` on a repeat.
fn sort_with_sign(mut v: Vec<Atom>) -> Option<(Vec<Atom>, bool)> {
    let mut negative = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, negative))
}

impl DiffForm {
    pub fn zero(degree: usize) -> Self {
        DiffForm {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Zero-form.
    pub fn function(f: Expr) -> Self {
        let mut out = Self::zero(0);
        out.add_term(Vec::new(), f);
        out
    }

    /// `d(coord)` for a coordinate atom.
    pub fn d_coord(coord: &Atom) -> Self {
        let mut out = Self::zero(1);
        out.add_term(vec![coord.clone()], Expr::one());
        out
    }

    pub fn dx(i: usize) -> Self {
        Self::d_coord(&Atom::indep(i))
    }

    pub fn du(a: usize, idx: MultiIndex) -> Self {
        Self::d_coord(&Atom::jet(a, idx))
    }

    /// `f dc_1 ∧ ... ∧ dc_k` for arbitrary (unsorted) covectors.
    pub fn term(f: Expr, covectors: Vec<Atom>) -> Self {
        let mut out = Self::zero(covectors.len());
        if let Some((sorted, negative)) = sort_with_sign(covectors) {
            out.add_term(sorted, if negative { f.neg() } else { f });
        }
        out
    }

    fn add_term(&mut self, key: Vec<Atom>, c: Expr) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert_with(Expr::zero);
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Atom>, &Expr)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, covectors: &[Atom]) -> Expr {
        self.coeffs.get(covectors).cloned().unwrap_or_else(Expr::zero)
    }

    /// Coefficient of the zero-form part.
    pub fn as_function(&self) -> Option<Expr> {
        (self.degree == 0).then(|| self.coeff(&[]))
    }

    fn check_degree(&self, other: &DiffForm) -> Result<()> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DimensionMismatch(format!(
                "adding forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        self.check_degree(other)?;
        let mut out = if self.is_zero() {
            DiffForm::zero(other.degree)
        } else {
            self.clone()
        };
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        self.scale(&Expr::int(-1))
    }

    pub fn scale(&self, f: &Expr) -> DiffForm {
        let mut out = DiffForm::zero(self.degree);
        for (k, v) in &self.coeffs {
            out.add_term(k.clone(), v.mul(f));
        }
        out
    }

    pub fn map(&self, mut g: impl FnMut(&Expr) -> Result<Expr>) -> Result<DiffForm> {
        let mut out = DiffForm::zero(self.degree);
        for (k, v) in &self.coeffs {
            out.add_term(k.clone(), g(v)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        let mut out = DiffForm::zero(self.degree + other.degree);
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                let mut cov = ka.clone();
                cov.extend(kb.iter().cloned());
                if let Some((sorted, negative)) = sort_with_sign(cov) {
                    let c = va.mul(vb);
                    out.add_term(sorted, if negative { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// Full exterior derivative over every coordinate of jet space.
    pub fn d(&self) -> Result<DiffForm> {
        let mut out = DiffForm::zero(self.degree + 1);
        for (k, v) in &self.coeffs {
            for c in v.coordinates() {
                let dv = partial(v, &c)?;
                if dv.is_zero() {
                    continue;
                }
                let mut cov = vec![c.clone()];
                cov.extend(k.iter().cloned());
                if let Some((sorted, negative)) = sort_with_sign(cov) {
                    out.add_term(sorted, if negative { dv.neg() } else { dv });
                }
            }
        }
        Ok(out)
    }

    /// Horizontal differential `d_H(f dx^I) = D_i f dx^i ∧ dx^I` on horizontal forms.
    pub fn d_horizontal(&self, space: &JetSpace) -> Result<DiffForm> {
        if !self.is_horizontal() {
            return Err(Error::DimensionMismatch(
                "horizontal differential of a non-horizontal form".into(),
            ));
        }
        let mut out = DiffForm::zero(self.degree + 1);
        for (k, v) in &self.coeffs {
            for i in 0..space.p {
                let dv = space.total_derivative(v, i)?;
                let mut cov = vec![Atom::indep(i)];
                cov.extend(k.iter().cloned());
                if let Some((sorted, negative)) = sort_with_sign(cov) {
                    out.add_term(sorted, if negative { dv.neg() } else { dv });
                }
            }
        }
        Ok(out)
    }

    pub fn is_horizontal(&self) -> bool {
        self.coeffs
            .keys()
            .all(|k| k.iter().all(|a| matches!(a.kind(), AtomKind::Indep(_))))
    }

    /// Interior product with a field given as a derivation on coordinates.
    pub fn interior<F: Derivation + ?Sized>(&self, field: &F) -> Result<DiffForm> {
        if self.degree == 0 {
            return Ok(DiffForm::zero(0));
        }
        let mut out = DiffForm::zero(self.degree - 1);
        for (k, v) in &self.coeffs {
            for (j, c) in k.iter().enumerate() {
                let y = field.coordinate(c)?;
                if y.is_zero() {
                    continue;
                }
                let mut rest = k.clone();
                rest.remove(j);
                let t = v.mul(&y);
                out.add_term(rest, if j % 2 == 1 { t.neg() } else { t });
            }
        }
        Ok(out)
    }

    /// Lie derivative by Cartan's formula `d ∘ i_Y + i_Y ∘ d`.
    pub fn lie<F: Derivation + ?Sized>(&self, field: &F) -> Result<DiffForm> {
        let a = self.interior(field)?.d()?;
        let b = self.d()?.interior(field)?;
        let out = a.add(&b)?;
        Ok(if out.is_zero() {
            DiffForm::zero(self.degree)
        } else {
            out
        })
    }

    /// Replaces `du^a_J` by `u^a_{J,i} dx^i` (and likewise for auxiliary jets).
    pub fn horizontal_projection(&self, space: &JetSpace) -> Result<DiffForm> {
        let mut acc = DiffForm::zero(self.degree);
        for (k, v) in &self.coeffs {
            let mut t = DiffForm::function(v.clone());
            for c in k {
                t = t.wedge(&project_covector(c, space)?);
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    pub fn render(&self, names: &Names) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, v)| {
                let basis: Vec<String> = k.iter().map(|a| format!("d{}", names.atom(a))).collect();
                if basis.is_empty() {
                    names.print(v)
                } else {
                    format!("({})*{}", names.print(v), basis.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl std::fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(&Names::generic()))
    }
}

fn project_covector(c: &Atom, space: &JetSpace) -> Result<DiffForm> {
    let (k, aux) = match c.kind() {
        AtomKind::Indep(_) => return Ok(DiffForm::d_coord(c)),
        AtomKind::Jet(k) => (k, false),
        AtomKind::Aux(k) => (k, true),
        _ => {
            return Err(Error::InvalidExpression(
                "covector of a non-coordinate atom".into(),
            ))
        }
    };
    let mut out = DiffForm::zero(1);
    for i in 0..space.p {
        let idx = k.idx.append(i);
        space.check_order(idx.order())?;
        let coeff = if aux {
            Expr::aux(k.var, idx)
        } else {
            Expr::jet(k.var, idx)
        };
        out.add_term(vec![Atom::indep(i)], coeff);
    }
    Ok(out)
}

/// Total differential of a function.
pub fn exterior_d(f: &Expr) -> Result<DiffForm> {
    DiffForm::function(f.clone()).d()
}

/// `ϑ^a_J = du^a_J - u^a_{J,i} dx^i`.
pub fn contact_form(a: usize, idx: &MultiIndex, space: &JetSpace) -> Result<DiffForm> {
    if idx.order() >= space.n {
        return Err(Error::OrderTooHigh {
            order: idx.order(),
            limit: space.n,
        });
    }
    let mut out = DiffForm::du(a, idx.clone());
    for i in 0..space.p {
        let t = DiffForm::dx(i).scale(&Expr::jet(a, idx.append(i)));
        out = out.sub(&t)?;
    }
    Ok(out)
}

/// Contact-ideal membership for forms of degree 1 and 2: the purely horizontal
/// part left after rewriting `du_J = ϑ_J + u_{J,i} dx^i` must vanish.
pub fn is_in_contact_ideal(w: &DiffForm, space: &JetSpace) -> Result<bool> {
    if !(1..=2).contains(&w.degree()) {
        return Err(Error::UnsupportedDegree(w.degree()));
    }
    Ok(w.horizontal_projection(space)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> JetSpace {
        JetSpace::new(1, 1, 0, 2).unwrap()
    }

    #[test]
    fn wedge_antisymmetry() {
        let dx = DiffForm::dx(0);
        let du = DiffForm::du(0, MultiIndex::zero(1));
        assert!(dx.wedge(&dx).is_zero());
        assert_eq!(dx.wedge(&du), du.wedge(&dx).neg());
    }

    #[test]
    fn bilinear_wedge() {
        let s = space();
        let a = DiffForm::dx(0).scale(&s.u0(0));
        let b = DiffForm::du(0, MultiIndex::zero(1)).scale(&s.x(0));
        let got = a.wedge(&b);
        let expect = DiffForm::term(
            s.x(0).mul(&s.u0(0)),
            vec![Atom::indep(0), Atom::jet(0, MultiIndex::zero(1))],
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn d_of_product_and_contact() {
        let s = space();
        let d = exterior_d(&s.x(0).mul(&s.u0(0))).unwrap();
        let expect = DiffForm::dx(0)
            .scale(&s.u0(0))
            .add(&DiffForm::du(0, MultiIndex::zero(1)).scale(&s.x(0)))
            .unwrap();
        assert_eq!(d, expect);
        let theta = contact_form(0, &MultiIndex::zero(1), &s).unwrap();
        let dtheta = theta.d().unwrap();
        let expect = DiffForm::du(0, MultiIndex::unit(1, 0))
            .wedge(&DiffForm::dx(0))
            .neg();
        assert_eq!(dtheta, expect);
        assert!(dtheta.d().unwrap().is_zero());
    }

    #[test]
    fn contact_membership() {
        let s = space();
        let theta = contact_form(0, &MultiIndex::zero(1), &s).unwrap();
        assert!(is_in_contact_ideal(&theta, &s).unwrap());
        assert!(!is_in_contact_ideal(&DiffForm::dx(0), &s).unwrap());
        assert_eq!(
            contact_form(0, &MultiIndex::from_counts(vec![2]), &s),
            Err(Error::OrderTooHigh { order: 2, limit: 2 })
        );
    }
}
