use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{Expr, MultiIndex};

/// A jet coordinate `u^a_J` (or `w^b_J`): variable index plus multi-index.
///
/// Ordered by derivative order first, then variable, then multi-index, which makes
/// the order a ranking: it is preserved by every total derivative.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JetKey {
    pub var: usize,
    pub idx: MultiIndex,
}

impl JetKey {
    pub fn new(var: usize, idx: MultiIndex) -> Self {
        JetKey { var, idx }
    }

    pub fn order(&self) -> usize {
        self.idx.order()
    }
}

impl Ord for JetKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then(self.var.cmp(&other.var))
            .then_with(|| self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for JetKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Opaque function `name(args)` differentiated `orders[k]` times in argument `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FuncAtom {
    pub name: Arc<str>,
    pub orders: Vec<u32>,
    pub args: Vec<Expr>,
}

/// Generators of the differential field. Variant order is the canonical atom order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum AtomKind {
    Indep(usize),
    Jet(JetKey),
    Aux(JetKey),
    Const(Arc<str>),
    Func(FuncAtom),
    /// `base^exponent` with a symbolic (constant-valued) exponent.
    Power { base: Expr, exponent: Expr },
    Exp(Expr),
}

#[derive(Clone, Debug)]
pub struct Atom(Arc<AtomKind>);

impl Atom {
    pub fn new(kind: AtomKind) -> Self {
        Atom(Arc::new(kind))
    }

    pub fn indep(i: usize) -> Self {
        Self::new(AtomKind::Indep(i))
    }

    pub fn jet(var: usize, idx: MultiIndex) -> Self {
        Self::new(AtomKind::Jet(JetKey::new(var, idx)))
    }

    pub fn aux(var: usize, idx: MultiIndex) -> Self {
        Self::new(AtomKind::Aux(JetKey::new(var, idx)))
    }

    pub fn constant(name: &str) -> Self {
        Self::new(AtomKind::Const(Arc::from(name)))
    }

    pub fn kind(&self) -> &AtomKind {
        &self.0
    }

    /// Coordinates of the jet space: independent, dependent and auxiliary jets.
    pub fn is_coordinate(&self) -> bool {
        matches!(
            *self.0,
            AtomKind::Indep(_) | AtomKind::Jet(_) | AtomKind::Aux(_)
        )
    }

    pub fn is_transcendental(&self) -> bool {
        matches!(
            *self.0,
            AtomKind::Func(_) | AtomKind::Power { .. } | AtomKind::Exp(_)
        )
    }

    pub fn as_jet(&self) -> Option<&JetKey> {
        match &*self.0 {
            AtomKind::Jet(k) => Some(k),
            _ => None,
        }
    }

    pub fn as_aux(&self) -> Option<&JetKey> {
        match &*self.0 {
            AtomKind::Aux(k) => Some(k),
            _ => None,
        }
    }

    /// Jet order of a coordinate (0 for independent variables and non-coordinates).
    pub fn jet_order(&self) -> usize {
        match &*self.0 {
            AtomKind::Jet(k) | AtomKind::Aux(k) => k.order(),
            _ => 0,
        }
    }

    /// Expressions nested inside a composite atom.
    pub fn children(&self) -> Vec<&Expr> {
        match &*self.0 {
            AtomKind::Func(f) => f.args.iter().collect(),
            AtomKind::Power { base, exponent } => vec![base, exponent],
            AtomKind::Exp(arg) => vec![arg],
            _ => Vec::new(),
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
