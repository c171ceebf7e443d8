//! Gauge maps `R(x, u)` acting blockwise on every jet level, and the μ they induce.

use crate::error::{Error, Result};
use crate::forms::{check_mch, MatrixOneForm};
use crate::jet::{
    prolong_mu, prolong_standard, EquationSystem, JetSpace, ProlongedField, Reducer, Twist,
    VectorField,
};
use crate::matrix::Matrix;
use crate::symbolic::{Expr, JetKey};

/// Invertible `q x q` matrix over `(x, u)` with its cached inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeMap {
    r: Matrix,
    rinv: Matrix,
}

impl GaugeMap {
    pub fn new(r: Matrix) -> Result<Self> {
        let rinv = matrix_inverse(&r)?;
        if r.mul(&rinv)? != Matrix::identity(r.rows()) {
            return Err(Error::Inconsistent("R * R^-1 is not the identity".into()));
        }
        Ok(GaugeMap { r, rinv })
    }

    pub fn identity(q: usize) -> Self {
        GaugeMap {
            r: Matrix::identity(q),
            rinv: Matrix::identity(q),
        }
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn rinv(&self) -> &Matrix {
        &self.rinv
    }

    pub fn q(&self) -> usize {
        self.r.rows()
    }

    pub fn inverse_map(&self) -> GaugeMap {
        GaugeMap {
            r: self.rinv.clone(),
            rinv: self.r.clone(),
        }
    }
}

/// Exact inverse through the adjugate.
pub fn matrix_inverse(m: &Matrix) -> Result<Matrix> {
    m.inverse()
}

/// `Λ_i = R D_i(R^-1)`, cross-checked against `-(D_i R) R^-1`.
pub fn mu_from_gauge(g: &GaugeMap, space: &JetSpace) -> Result<MatrixOneForm> {
    if g.q() != space.q {
        return Err(Error::DimensionMismatch(format!(
            "gauge of size {} on a space with q={}",
            g.q(),
            space.q
        )));
    }
    let mut lambdas = Vec::with_capacity(space.p);
    for i in 0..space.p {
        let d_rinv = g.rinv.map(|e| space.total_derivative(e, i))?;
        let d_r = g.r.map(|e| space.total_derivative(e, i))?;
        let lam = g.r.mul(&d_rinv)?;
        let alt = d_r.mul(&g.rinv)?.neg();
        if lam != alt {
            return Err(Error::Inconsistent(format!(
                "R D_i(R^-1) and -(D_i R) R^-1 differ in direction {i}"
            )));
        }
        lambdas.push(lam);
    }
    MatrixOneForm::new(lambdas)
}

/// `ψ^a_J ↦ R^a_b ψ^b_J` on every jet level of a vertical field.
pub fn apply_gauge(g: &GaugeMap, v: &ProlongedField) -> Result<ProlongedField> {
    if v.xi.iter().any(|e| !e.is_zero()) {
        return Err(Error::NotVertical);
    }
    let q = g.q();
    let mut out = v.clone();
    let levels: Vec<_> = v
        .psi
        .keys()
        .filter(|k| k.var == 0)
        .map(|k| k.idx.clone())
        .collect();
    for idx in levels {
        let col: Vec<Expr> = (0..q).map(|b| v.psi(b, &idx)).collect();
        for (a, e) in g.r.apply(&col)?.into_iter().enumerate() {
            out.psi.insert(JetKey::new(a, idx.clone()), e);
        }
    }
    Ok(out)
}

/// The gauge-transformed vertical field `(Rφ)^a ∂_a`.
pub fn gauge_field(g: &GaugeMap, x: &VectorField) -> Result<VectorField> {
    if !x.is_vertical() {
        return Err(Error::NotVertical);
    }
    Ok(VectorField {
        xi: x.xi.clone(),
        phi: g.r.apply(&x.phi)?,
        eta: x.eta.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeDiagramReport {
    pub pass: bool,
    pub mu: MatrixOneForm,
    /// `prolong_mu(γX, μ_g)`.
    pub twisted: ProlongedField,
    /// `γ(prolong_standard(X))`.
    pub gauged: ProlongedField,
    /// Nonzero coefficient differences between the two paths.
    pub differences: Vec<(JetKey, Expr)>,
}

/// Both paths around the square: gauge then μ-prolong, or prolong then gauge.
pub fn check_gauge_diagram(
    g: &GaugeMap,
    x: &VectorField,
    n: usize,
    space: &JetSpace,
) -> Result<GaugeDiagramReport> {
    let mu = mu_from_gauge(g, space)?;
    let twisted = prolong_mu(&gauge_field(g, x)?, &mu, n, space)?;
    let gauged = apply_gauge(g, &prolong_standard(x, n, space)?)?;
    Ok(compare_paths(mu, twisted, gauged))
}

/// Compares the two paths coefficient by coefficient.
pub fn compare_paths(
    mu: MatrixOneForm,
    twisted: ProlongedField,
    gauged: ProlongedField,
) -> GaugeDiagramReport {
    let differences: Vec<_> = twisted
        .sub(&gauged)
        .psi
        .into_iter()
        .filter(|(_, e)| !e.is_zero())
        .collect();
    GaugeDiagramReport {
        pass: differences.is_empty(),
        mu,
        twisted,
        gauged,
        differences,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    /// `W` is a μ_g-symmetry of the system.
    pub mu_symmetry: bool,
    /// `γ(X^(n))` with `X = γ^-1 W` is tangent to the solution manifold.
    pub transformed_tangent: bool,
    pub residuals: Vec<Expr>,
}

/// If `W` is a μ-symmetry for `μ = μ_g`, the gauge transform of the standard
/// prolongation of `γ^-1 W` is tangent to the solution manifold.
pub fn check_gauge_corollary(
    g: &GaugeMap,
    w: &VectorField,
    sys: &EquationSystem,
    n: usize,
    space: &JetSpace,
) -> Result<CorollaryReport> {
    let mu = mu_from_gauge(g, space)?;
    let sym = crate::jet::check_symmetry(w, sys, &Twist::Mu(mu), n, space)?;
    let x = gauge_field(&g.inverse_map(), w)?;
    let transformed = apply_gauge(g, &prolong_standard(&x, n, space)?)?;
    let reducer = Reducer::new(sys, space, None);
    let residuals = sys
        .residuals
        .iter()
        .map(|f| reducer.reduce(&transformed.apply(f)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorollaryReport {
        mu_symmetry: sym.pass,
        transformed_tangent: residuals.iter().all(Expr::is_zero),
        residuals,
    })
}

/// Remark: a gauge-induced μ satisfies the horizontal Maurer-Cartan equation.
pub fn gauge_mu_is_flat(g: &GaugeMap, space: &JetSpace) -> Result<bool> {
    Ok(check_mch(&mu_from_gauge(g, space)?, space)?.pass)
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::random::{base_atoms, random_poly, random_unipotent, random_vertical_field};
    use crate::symbolic::Sampler;

    fn case(seed: u64, p: usize, q: usize) -> (GaugeMap, JetSpace, Sampler) {
        let s = JetSpace::new(p, q, 0, 2).unwrap();
        let mut smp = Sampler::new(seed);
        let atoms = base_atoms(&s);
        let r = if q == 1 {
            Matrix::diagonal(vec![Expr::exp(&random_poly(&mut smp, &atoms, 2, 2))])
        } else {
            random_unipotent(&mut smp, q, &atoms, 1)
        };
        (GaugeMap::new(r).unwrap(), s, smp)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn diagram_commutes_and_mu_is_flat(seed in any::<u64>(), p in 1usize..3, q in 1usize..4, n in 1usize..3) {
            let (g, s, mut smp) = case(seed, p, q);
            let x = random_vertical_field(&mut smp, &s, 2);
            prop_assert!(check_gauge_diagram(&g, &x, n, &s).unwrap().pass);
            prop_assert!(gauge_mu_is_flat(&g, &s).unwrap());
        }

        #[test]
        fn inverse_derivative_signs_agree(seed in any::<u64>(), p in 1usize..3, q in 1usize..4) {
            let (g, s, _) = case(seed, p, q);
            for i in 0..p {
                let a = g.r().mul(&g.rinv().map(|e| s.total_derivative(e, i)).unwrap()).unwrap();
                let b = g.r().map(|e| s.total_derivative(e, i)).unwrap().mul(g.rinv()).unwrap();
                prop_assert!(a.add(&b).unwrap().is_zero());
            }
        }

        /// `W = γ(u ∂_u)` is a μ_g-symmetry of `u_xx = 0`, and undoing the gauge
        /// gives back a tangent field.
        #[test]
        fn corollary_on_scaling(seed in any::<u64>()) {
            let (g, s, _) = case(seed, 1, 1);
            let sys = EquationSystem::from_residuals(vec![s.uj(0, &[2])], &s).unwrap();
            let w = gauge_field(&g, &VectorField::vertical(1, vec![s.u0(0)])).unwrap();
            let rep = check_gauge_corollary(&g, &w, &sys, 2, &s).unwrap();
            prop_assert!(rep.mu_symmetry && rep.transformed_tangent);
        }
    }
}
