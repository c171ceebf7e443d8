//! Seeded generators for property suites: polynomials, unipotent gauges, fields,
//! twisting forms and differential forms.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::forms::{DiffForm, MatrixOneForm};
use crate::jet::{JetSpace, VectorField};
use crate::matrix::Matrix;
use crate::symbolic::{Atom, Expr, Sampler};

/// Sum of `terms` monomials of total degree at most `max_deg` in `atoms`,
/// with integer coefficients in `[-3, 3]`.
pub fn random_poly(s: &mut Sampler, atoms: &[Atom], max_deg: usize, terms: usize) -> Expr {
    let mut out = Expr::zero();
    for _ in 0..terms {
        let c = s.small_int(-3, 3);
        if c == 0 {
            continue;
        }
        let deg = s.rng().gen_range(0..=max_deg);
        let mut m = Expr::int(c);
        for _ in 0..deg {
            if let Some(a) = atoms.choose(s.rng()) {
                m = m.mul(&Expr::atom(a.clone()));
            }
        }
        out = out.add(&m);
    }
    out
}

/// Coordinates `x^i` and `u^a` of the base space.
pub fn base_atoms(space: &JetSpace) -> Vec<Atom> {
    let mut v: Vec<Atom> = (0..space.p).map(Atom::indep).collect();
    for a in 0..space.q {
        v.push(space.u0(a).as_atom().expect("atom").clone());
    }
    v
}

/// Base coordinates plus first-order jets.
pub fn first_order_atoms(space: &JetSpace) -> Vec<Atom> {
    let mut v = base_atoms(space);
    for a in 0..space.q {
        for i in 0..space.p {
            let mut c = vec![0; space.p];
            c[i] = 1;
            v.push(space.uj(a, &c).as_atom().expect("atom").clone());
        }
    }
    v
}

/// `R = U L` with `U` upper and `L` lower unitriangular, so `det R = 1`.
pub fn random_unipotent(s: &mut Sampler, q: usize, atoms: &[Atom], max_deg: usize) -> Matrix {
    let mut u = Matrix::identity(q);
    let mut l = Matrix::identity(q);
    for i in 0..q {
        for j in i + 1..q {
            u.set(i, j, random_poly(s, atoms, max_deg, 2));
            l.set(j, i, random_poly(s, atoms, max_deg, 2));
        }
    }
    u.mul(&l).expect("square")
}

/// Vertical field with polynomial `φ^a(x, u)`.
pub fn random_vertical_field(s: &mut Sampler, space: &JetSpace, max_deg: usize) -> VectorField {
    let atoms = base_atoms(space);
    let phi = (0..space.q)
        .map(|_| random_poly(s, &atoms, max_deg, 3))
        .collect();
    VectorField::vertical(space.p, phi)
}

/// Lie-point field with polynomial `ξ^i(x, u)` and `φ^a(x, u)`.
pub fn random_field(s: &mut Sampler, space: &JetSpace, max_deg: usize) -> VectorField {
    let atoms = base_atoms(space);
    let xi = (0..space.p)
        .map(|_| random_poly(s, &atoms, max_deg, 2))
        .collect();
    let phi = (0..space.q)
        .map(|_| random_poly(s, &atoms, max_deg, 3))
        .collect();
    VectorField::new(xi, phi, Vec::new())
}

/// Arbitrary `μ` with entries polynomial in first-order jet coordinates; only
/// meaningful as a twist when `p = 1` (no Maurer-Cartan constraint).
pub fn random_mu(s: &mut Sampler, space: &JetSpace, max_deg: usize) -> MatrixOneForm {
    let atoms = first_order_atoms(space);
    let lambdas = (0..space.p)
        .map(|_| {
            let mut m = Matrix::zero(space.q, space.q);
            for a in 0..space.q {
                for b in 0..space.q {
                    m.set(a, b, random_poly(s, &atoms, max_deg, 2));
                }
            }
            m
        })
        .collect();
    MatrixOneForm::new(lambdas).expect("square blocks")
}

/// Random `k`-form over `coords` with polynomial coefficients.
pub fn random_form(
    s: &mut Sampler,
    k: usize,
    coords: &[Atom],
    coeff_atoms: &[Atom],
    max_deg: usize,
) -> DiffForm {
    let mut out = DiffForm::zero(k);
    for _ in 0..3 {
        let mut cov: Vec<Atom> = coords.choose_multiple(s.rng(), k).cloned().collect();
        cov.sort();
        let c = random_poly(s, coeff_atoms, max_deg, 2);
        out = out.add(&DiffForm::term(c, cov)).expect("same degree");
    }
    out
}

/// Proptest strategies over one independent variable `x`, one dependent `u`,
/// one auxiliary `w`, the constant `m` and the unary function `g`.
#[cfg(test)]
pub(crate) mod strategies {
    use proptest::prelude::*;

    use crate::symbolic::{Expr, MultiIndex, Names};

    pub fn names() -> Names {
        Names::new(["x"], ["u"], ["w"])
    }

    fn leaf() -> impl Strategy<Value = Expr> {
        let u = Expr::jet(0, MultiIndex::zero(1));
        let m = Expr::constant("m");
        prop_oneof![
            (-5i64..=5).prop_map(Expr::int),
            (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::ratio(n, d)),
            Just(Expr::indep(0)),
            Just(u.clone()),
            Just(Expr::jet(0, MultiIndex::unit(1, 0))),
            Just(Expr::aux(0, MultiIndex::zero(1))),
            Just(m.clone()),
            Just(Expr::power(&u, &m).expect("symbolic power")),
        ]
    }

    /// Rational expressions of bounded depth with exp and opaque-function atoms.
    pub fn expr() -> impl Strategy<Value = Expr> {
        leaf().prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                4 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
                4 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
                2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
                2 => (inner.clone(), inner.clone()).prop_filter_map("zero divisor", |(a, b)| a.div(&b).ok()),
                1 => inner.clone().prop_map(|a| Expr::exp(&a)),
                1 => inner.prop_map(|a| Expr::func("g", vec![0], vec![a])),
            ]
        })
    }

    /// Polynomials in `x`, `u`, `u_x`, `w`, cheap enough for deep identities.
    pub fn poly() -> impl Strategy<Value = Expr> {
        let atoms = [
            Expr::indep(0),
            Expr::jet(0, MultiIndex::zero(1)),
            Expr::jet(0, MultiIndex::unit(1, 0)),
            Expr::aux(0, MultiIndex::zero(1)),
        ];
        prop::collection::vec((-3i64..=3, prop::collection::vec(0usize..4, 0..3)), 1..4).prop_map(
            move |terms| {
                terms.into_iter().fold(Expr::zero(), |acc, (c, fs)| {
                    let t = fs.iter().fold(Expr::int(c), |t, &k| t.mul(&atoms[k]));
                    acc.add(&t)
                })
            },
        )
    }
}
