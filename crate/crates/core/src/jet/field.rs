use std::collections::{BTreeMap, BTreeSet};

use super::JetSpace;
use crate::error::{Error, Result};
use crate::symbolic::{derive, Atom, AtomKind, Derivation, Expr, JetKey, MultiIndex, Names};

/// `ξ^i ∂_i + φ^a ∂_a + η^β ∂_β` on `(x, u, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub xi: Vec<Expr>,
    pub phi: Vec<Expr>,
    pub eta: Vec<Expr>,
}

impl VectorField {
    pub fn new(xi: Vec<Expr>, phi: Vec<Expr>, eta: Vec<Expr>) -> Self {
        VectorField { xi, phi, eta }
    }

    /// Vertical field `φ^a ∂_a` on a space with `p` independent variables.
    pub fn vertical(p: usize, phi: Vec<Expr>) -> Self {
        VectorField {
            xi: vec![Expr::zero(); p],
            phi,
            eta: Vec::new(),
        }
    }

    pub fn zero(space: &JetSpace) -> Self {
        VectorField {
            xi: vec![Expr::zero(); space.p],
            phi: vec![Expr::zero(); space.q],
            eta: vec![Expr::zero(); space.r],
        }
    }

    pub fn is_vertical(&self) -> bool {
        self.xi.iter().all(Expr::is_zero)
    }

    pub fn check_dimensions(&self, space: &JetSpace) -> Result<()> {
        if self.xi.len() != space.p || self.phi.len() != space.q {
            return Err(Error::DimensionMismatch(format!(
                "field has {} xi and {} phi components on a space with p={}, q={}",
                self.xi.len(),
                self.phi.len(),
                space.p,
                space.q
            )));
        }
        if !self.eta.is_empty() && self.eta.len() != space.r {
            return Err(Error::DimensionMismatch(format!(
                "field has {} eta components on a space with r={}",
                self.eta.len(),
                space.r
            )));
        }
        Ok(())
    }

    /// ξ and φ may depend on order-zero coordinates only.
    pub fn check_lie_point(&self) -> Result<()> {
        for e in self.xi.iter().chain(&self.phi) {
            if let Some(a) = e.coordinates().into_iter().find(|a| a.jet_order() > 0) {
                return Err(Error::NotLiePoint(format!("coefficient depends on {a:?}")));
            }
        }
        Ok(())
    }

    pub fn eta(&self, beta: usize) -> Expr {
        self.eta.get(beta).cloned().unwrap_or_else(Expr::zero)
    }

    /// The field as an order-zero prolonged field.
    pub fn as_prolonged(&self, p: usize) -> ProlongedField {
        let zero = MultiIndex::zero(p);
        ProlongedField {
            order: 0,
            xi: self.xi.clone(),
            psi: self
                .phi
                .iter()
                .enumerate()
                .map(|(a, e)| (JetKey::new(a, zero.clone()), e.clone()))
                .collect(),
            chi: self
                .eta
                .iter()
                .enumerate()
                .map(|(b, e)| (JetKey::new(b, zero.clone()), e.clone()))
                .collect(),
        }
    }

    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        self.as_prolonged(self.xi.len()).apply(e)
    }
}

/// `ξ^i ∂_i + ψ^a_J ∂_a^J + χ^β_J ∂_β^J`, truncated at `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    pub order: usize,
    pub xi: Vec<Expr>,
    pub psi: BTreeMap<JetKey, Expr>,
    pub chi: BTreeMap<JetKey, Expr>,
}

impl ProlongedField {
    pub fn psi(&self, a: usize, idx: &MultiIndex) -> Expr {
        self.psi
            .get(&JetKey::new(a, idx.clone()))
            .cloned()
            .unwrap_or_else(Expr::zero)
    }

    pub fn chi(&self, b: usize, idx: &MultiIndex) -> Expr {
        self.chi
            .get(&JetKey::new(b, idx.clone()))
            .cloned()
            .unwrap_or_else(Expr::zero)
    }

    /// Applies the field to `e` as a derivation.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        derive(self, e)
    }

    /// Drops coefficients above order `n`.
    pub fn restrict(&self, n: usize) -> ProlongedField {
        ProlongedField {
            order: n.min(self.order),
            xi: self.xi.clone(),
            psi: self
                .psi
                .iter()
                .filter(|(k, _)| k.order() <= n)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            chi: self
                .chi
                .iter()
                .filter(|(k, _)| k.order() <= n)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(&Expr) -> Result<Expr>) -> Result<ProlongedField> {
        Ok(ProlongedField {
            order: self.order,
            xi: self.xi.iter().map(&mut f).collect::<Result<_>>()?,
            psi: self
                .psi
                .iter()
                .map(|(k, v)| Ok((k.clone(), f(v)?)))
                .collect::<Result<_>>()?,
            chi: self
                .chi
                .iter()
                .map(|(k, v)| Ok((k.clone(), f(v)?)))
                .collect::<Result<_>>()?,
        })
    }

    /// Coefficientwise difference over the union of coordinates.
    pub fn sub(&self, other: &ProlongedField) -> ProlongedField {
        let xi = self
            .xi
            .iter()
            .zip(&other.xi)
            .map(|(a, b)| a.sub(b))
            .collect();
        let diff = |a: &BTreeMap<JetKey, Expr>, b: &BTreeMap<JetKey, Expr>| {
            let keys: BTreeSet<&JetKey> = a.keys().chain(b.keys()).collect();
            keys.into_iter()
                .map(|k| {
                    let va = a.get(k).cloned().unwrap_or_else(Expr::zero);
                    let vb = b.get(k).cloned().unwrap_or_else(Expr::zero);
                    (k.clone(), va.sub(&vb))
                })
                .collect()
        };
        ProlongedField {
            order: self.order.max(other.order),
            xi,
            psi: diff(&self.psi, &other.psi),
            chi: diff(&self.chi, &other.chi),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.xi
            .iter()
            .chain(self.psi.values())
            .chain(self.chi.values())
            .all(Expr::is_zero)
    }

    /// Coefficients with their coordinate names, skipping zeros.
    pub fn components(&self, names: &Names) -> Vec<(String, Expr)> {
        let mut out = Vec::new();
        for (i, x) in self.xi.iter().enumerate() {
            if !x.is_zero() {
                out.push((names.atom(&Atom::indep(i)), x.clone()));
            }
        }
        for (k, v) in &self.psi {
            if !v.is_zero() {
                out.push((names.atom(&Atom::jet(k.var, k.idx.clone())), v.clone()));
            }
        }
        for (k, v) in &self.chi {
            if !v.is_zero() {
                out.push((names.atom(&Atom::aux(k.var, k.idx.clone())), v.clone()));
            }
        }
        out
    }

    /// Text form `c1*d/dx + c2*d/du_x + ...`.
    pub fn render(&self, names: &Names) -> String {
        let parts: Vec<String> = self
            .components(names)
            .into_iter()
            .map(|(n, v)| format!("({})*d/d{}", names.print(&v), n))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl Derivation for ProlongedField {
    fn coordinate(&self, atom: &Atom) -> Result<Expr> {
        match atom.kind() {
            AtomKind::Indep(i) => Ok(self.xi.get(*i).cloned().unwrap_or_else(Expr::zero)),
            AtomKind::Jet(k) => self.psi.get(k).cloned().ok_or(Error::TruncationExceeded {
                order: k.order(),
                limit: self.order,
            }),
            AtomKind::Aux(k) => {
                if k.order() > self.order {
                    return Err(Error::TruncationExceeded {
                        order: k.order(),
                        limit: self.order,
                    });
                }
                Ok(self.chi.get(k).cloned().unwrap_or_else(Expr::zero))
            }
            _ => Ok(Expr::zero()),
        }
    }
}

/// `[A, B]` with coefficients `A(B^k) - B(A^k)` over the coordinates of both fields,
/// truncated at the smaller order.
pub fn commutator(a: &ProlongedField, b: &ProlongedField) -> Result<ProlongedField> {
    let order = a.order.min(b.order);
    let p = a.xi.len().max(b.xi.len());
    let get = |v: &[Expr], i: usize| v.get(i).cloned().unwrap_or_else(Expr::zero);
    let mut xi = Vec::with_capacity(p);
    for i in 0..p {
        xi.push(a.apply(&get(&b.xi, i))?.sub(&b.apply(&get(&a.xi, i))?));
    }
    let bracket = |ma: &BTreeMap<JetKey, Expr>,
                   mb: &BTreeMap<JetKey, Expr>|
     -> Result<BTreeMap<JetKey, Expr>> {
        let keys: BTreeSet<&JetKey> = ma
            .keys()
            .chain(mb.keys())
            .filter(|k| k.order() <= order)
            .collect();
        keys.into_iter()
            .map(|k| {
                let vb = mb.get(k).cloned().unwrap_or_else(Expr::zero);
                let va = ma.get(k).cloned().unwrap_or_else(Expr::zero);
                Ok((k.clone(), a.apply(&vb)?.sub(&b.apply(&va)?)))
            })
            .collect()
    };
    Ok(ProlongedField {
        order,
        xi,
        psi: bracket(&a.psi, &b.psi)?,
        chi: bracket(&a.chi, &b.chi)?,
    })
}

/// Characteristic `Q^a = φ^a - u^a_i ξ^i`.
pub fn evolutionary_representative(x: &VectorField, space: &JetSpace) -> Vec<Expr> {
    (0..space.q)
        .map(|a| {
            let mut q = x.phi[a].clone();
            for (i, xi) in x.xi.iter().enumerate() {
                if !xi.is_zero() {
                    q = q.sub(&Expr::jet(a, MultiIndex::unit(space.p, i)).mul(xi));
                }
            }
            q
        })
        .collect()
}
