use super::CoveringSystem;
use crate::error::{Error, Result};
use crate::forms::{check_mch, MatrixOneForm, MchReport};
use crate::jet::{prolong, prolong_lambda, ProlongedField, Reducer, Twist, VectorField};
use crate::matrix::Matrix;
use crate::symbolic::{partial, Atom, Expr, JetKey, MultiIndex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedSymmetryReport {
    pub pass: bool,
    /// `Ỹ[F^ℓ]` on the joint solution manifold.
    pub base_residuals: Vec<Expr>,
    /// `Ỹ[w^β_i - H^β_i]` on the joint solution manifold, keyed by `(β, i)`.
    pub aux_residuals: Vec<((usize, usize), Expr)>,
    pub prolonged: ProlongedField,
}

/// Standard symmetry check in the augmented space, total derivatives being the
/// augmented ones.
pub fn check_augmented_symmetry(
    x: &VectorField,
    cov: &CoveringSystem,
    n: usize,
) -> Result<AugmentedSymmetryReport> {
    let space = &cov.space;
    let need = cov.base.max_order().max(1);
    if n < need {
        return Err(Error::TruncationExceeded {
            order: need,
            limit: n,
        });
    }
    let y = prolong(x, &Twist::Standard, n, space, Some(&cov.aux))?;
    let reducer = Reducer::new(&cov.base, space, Some(&cov.aux));
    let base_residuals = cov
        .base
        .residuals
        .iter()
        .map(|f| reducer.reduce(&y.apply(f)?))
        .collect::<Result<Vec<_>>>()?;
    let mut aux_residuals = Vec::new();
    for beta in 0..space.r {
        for i in 0..space.p {
            let chi = y.chi(beta, &MultiIndex::unit(space.p, i));
            let r = reducer.reduce(&chi.sub(&y.apply(cov.h(beta, i))?))?;
            aux_residuals.push(((beta, i), r));
        }
    }
    let pass = base_residuals.iter().all(Expr::is_zero)
        && aux_residuals.iter().all(|(_, r)| r.is_zero());
    Ok(AugmentedSymmetryReport {
        pass,
        base_residuals,
        aux_residuals,
        prolonged: y,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiClassicalReport {
    pub is_semiclassical: bool,
    /// `[∂_w, X] = X`.
    pub exponential_form: bool,
    /// `e^{-w}` times the coefficients; empty unless `exponential_form`.
    pub xi0: Vec<Expr>,
    pub phi0: Vec<Expr>,
    pub eta0: Vec<Expr>,
}

fn w_atom(beta: usize, p: usize) -> Atom {
    Atom::aux(beta, MultiIndex::zero(p))
}

fn free_of_aux(e: &Expr) -> bool {
    e.coordinates().iter().all(|a| a.as_aux().is_none())
}

/// Semi-classical shape and the exponential-form condition for one auxiliary variable.
pub fn check_semiclassical(x: &VectorField, cov: &CoveringSystem) -> SemiClassicalReport {
    let space = &cov.space;
    let point = |e: &Expr| e.coordinates().iter().all(|a| a.jet_order() == 0);
    let no_w_jets = |e: &Expr| {
        e.coordinates()
            .iter()
            .all(|a| a.as_aux().is_none() || a.jet_order() == 0)
    };
    let is_semiclassical =
        x.xi.iter().chain(&x.phi).all(point) && x.eta.iter().all(no_w_jets);
    let mut report = SemiClassicalReport {
        is_semiclassical,
        exponential_form: false,
        xi0: Vec::new(),
        phi0: Vec::new(),
        eta0: Vec::new(),
    };
    if space.r != 1 {
        return report;
    }
    let w = w_atom(0, space.p);
    let eta: Vec<Expr> = (0..space.r).map(|b| x.eta(b)).collect();
    let all = x.xi.iter().chain(&x.phi).chain(&eta);
    let mut eigen = true;
    for c in all {
        match partial(c, &w) {
            Ok(d) if d == *c => {}
            _ => eigen = false,
        }
    }
    if !eigen {
        return report;
    }
    let damp = Expr::exp(&Expr::atom(w).neg());
    let strip = |v: &[Expr]| -> Option<Vec<Expr>> {
        v.iter()
            .map(|e| Some(e.mul(&damp)).filter(free_of_aux))
            .collect()
    };
    if let (Some(xi0), Some(phi0), Some(eta0)) = (strip(&x.xi), strip(&x.phi), strip(&eta)) {
        report.exponential_form = true;
        report.xi0 = xi0;
        report.phi0 = phi0;
        report.eta0 = eta0;
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaReconstruction {
    /// `ξ0 ∂_x + φ0 ∂_u`.
    pub x0: VectorField,
    pub lambda: Expr,
    /// `e^{-w}` times the augmented prolongation, restricted to the covering and
    /// projected to `u`-jets.
    pub restricted: ProlongedField,
    /// `prolong_lambda(X0, λ, n)`.
    pub expected: ProlongedField,
    pub matched: bool,
}

fn project(y: &ProlongedField) -> ProlongedField {
    ProlongedField {
        order: y.order,
        xi: y.xi.clone(),
        psi: y.psi.clone(),
        chi: Default::default(),
    }
}

/// Recovers the λ-symmetry underlying an exponential-form symmetry of the
/// covering `w_x = λ`.
pub fn reconstruct_lambda(
    x: &VectorField,
    cov: &CoveringSystem,
    n: usize,
) -> Result<LambdaReconstruction> {
    let space = &cov.space;
    if space.p != 1 {
        return Err(Error::NotScalarBase(space.p));
    }
    if space.r != 1 {
        return Err(Error::DimensionMismatch(format!(
            "lambda reconstruction needs one auxiliary variable, found {}",
            space.r
        )));
    }
    let sc = check_semiclassical(x, cov);
    if !sc.exponential_form {
        return Err(Error::NotExponentialForm);
    }
    let lambda = cov.h(0, 0).clone();
    let x0 = VectorField::new(sc.xi0.clone(), sc.phi0.clone(), Vec::new());
    let y = prolong(x, &Twist::Standard, n, space, Some(&cov.aux))?;
    let damp = Expr::exp(&Expr::atom(w_atom(0, space.p)).neg());
    let restricted = project(&y).map(|e| Ok(e.mul(&damp)))?;
    let expected = project(&prolong_lambda(&x0, &lambda, n, space)?);
    let matched = restricted.sub(&expected).is_zero();
    Ok(LambdaReconstruction {
        x0,
        lambda,
        restricted,
        expected,
        matched,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuReconstruction {
    pub x0: VectorField,
    pub mu: MatrixOneForm,
    pub mch: MchReport,
    /// `G^-1` applied blockwise to the restricted augmented prolongation.
    pub restricted: ProlongedField,
    /// `prolong_mu(X0, μ, n)`.
    pub expected: ProlongedField,
    pub matched: bool,
}

/// Recovers a μ-symmetry from a vertical symmetry of the covering whose
/// coefficients read `φ = G(w) φ0(x, u)`; `Λ_i = G^-1 H^β_i ∂G/∂w^β`.
pub fn reconstruct_mu(
    x: &VectorField,
    g: &Matrix,
    cov: &CoveringSystem,
    n: usize,
) -> Result<MuReconstruction> {
    let space = &cov.space;
    if !x.is_vertical() {
        return Err(Error::NotVertical);
    }
    if g.rows() != space.q || !g.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "G must be {0} x {0}",
            space.q
        )));
    }
    let ginv = g.inverse()?;
    let phi0 = ginv.apply(&x.phi)?;
    if let Some(e) = phi0.iter().find(|e| !free_of_aux(e)) {
        return Err(Error::InvalidExpression(format!(
            "G^-1 phi depends on auxiliary variables: {e:?}"
        )));
    }
    let mut lambdas = Vec::with_capacity(space.p);
    for i in 0..space.p {
        let mut dg = Matrix::zero(space.q, space.q);
        for beta in 0..space.r {
            let w = w_atom(beta, space.p);
            let h = cov.h(beta, i);
            dg = dg.add(&g.map(|e| Ok(partial(e, &w)?.mul(h)))?)?;
        }
        lambdas.push(ginv.mul(&dg)?);
    }
    let mu = MatrixOneForm::new(lambdas)?;
    let mch = check_mch(&mu, space)?;
    let x0 = VectorField::vertical(space.p, phi0);
    let y = prolong(x, &Twist::Standard, n, space, Some(&cov.aux))?;
    let mut restricted = project(&y);
    for idx in MultiIndex::up_to(space.p, n) {
        let col: Vec<Expr> = (0..space.q).map(|a| y.psi(a, &idx)).collect();
        for (a, e) in ginv.apply(&col)?.into_iter().enumerate() {
            restricted.psi.insert(JetKey::new(a, idx.clone()), e);
        }
    }
    let expected = project(&prolong(&x0, &Twist::Mu(mu.clone()), n, space, None)?);
    let matched = restricted.sub(&expected).is_zero();
    Ok(MuReconstruction {
        x0,
        mu,
        mch,
        restricted,
        expected,
        matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{EquationSystem, JetSpace};

    fn example3(s: &JetSpace) -> CoveringSystem {
        let base = EquationSystem::from_residuals(vec![s.uj(0, &[1]).sub(&s.u0(0))], s).unwrap();
        CoveringSystem::new(base, vec![vec![s.u0(0).mul(&s.w0(0))]], s.clone()).unwrap()
    }

    #[test]
    fn d_w_fails_with_minus_u() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let cov = example3(&s);
        let x = VectorField::new(vec![Expr::zero()], vec![Expr::zero()], vec![Expr::one()]);
        let rep = check_augmented_symmetry(&x, &cov, 1).unwrap();
        assert!(!rep.pass);
        assert!(rep.base_residuals[0].is_zero());
        assert_eq!(rep.aux_residuals[0].1, s.u0(0).neg());
    }

    #[test]
    fn w_scaling_is_a_symmetry() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let cov = example3(&s);
        let x = VectorField::new(vec![Expr::zero()], vec![Expr::zero()], vec![s.w0(0)]);
        assert!(check_augmented_symmetry(&x, &cov, 1).unwrap().pass);
    }

    #[test]
    fn semiclassical_shapes() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let cov = example3(&s);
        let ew = Expr::exp(&s.w0(0));
        let x = VectorField::new(vec![Expr::zero()], vec![ew], vec![]);
        let rep = check_semiclassical(&x, &cov);
        assert!(rep.is_semiclassical && rep.exponential_form);
        assert_eq!(rep.phi0, vec![Expr::one()]);
        let x3 = VectorField::new(vec![Expr::zero()], vec![s.u0(0).mul(&s.w0(0))], vec![s.w0(0)]);
        let rep3 = check_semiclassical(&x3, &cov);
        assert!(rep3.is_semiclassical && !rep3.exponential_form);
    }

    #[test]
    fn lambda_from_u_x() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let ux = s.uj(0, &[1]);
        let cov = CoveringSystem::new(EquationSystem::empty(), vec![vec![ux.clone()]], s.clone()).unwrap();
        let x = VectorField::new(vec![Expr::zero()], vec![Expr::exp(&s.w0(0))], vec![]);
        let rep = reconstruct_lambda(&x, &cov, 2).unwrap();
        assert!(rep.matched);
        assert_eq!(rep.x0.phi, vec![Expr::one()]);
        assert_eq!(rep.restricted.psi(0, &MultiIndex::unit(1, 0)), ux);
        assert_eq!(
            rep.restricted.psi(0, &MultiIndex::from_counts(vec![2])),
            s.uj(0, &[2]).add(&ux.mul(&ux))
        );
    }

    #[test]
    fn lambda_zero_is_standard() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let cov = CoveringSystem::new(EquationSystem::empty(), vec![vec![Expr::zero()]], s.clone()).unwrap();
        let x = VectorField::new(vec![Expr::zero()], vec![Expr::exp(&s.w0(0))], vec![]);
        let rep = reconstruct_lambda(&x, &cov, 2).unwrap();
        assert!(rep.matched);
        assert!(rep.restricted.psi.iter().all(|(k, v)| if k.order() == 0 { v.is_one() } else { v.is_zero() }));
    }

    #[test]
    fn not_exponential_rejected() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let x = VectorField::new(vec![Expr::zero()], vec![s.u0(0)], vec![]);
        assert_eq!(
            reconstruct_lambda(&x, &example3(&s), 1).map(|r| r.matched),
            Err(Error::NotExponentialForm)
        );
    }

    #[test]
    fn scalar_mu_matches_lambda() {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let lam = s.uj(0, &[1]).mul(&s.x(0));
        let cov = CoveringSystem::new(EquationSystem::empty(), vec![vec![lam.clone()]], s.clone()).unwrap();
        let x = VectorField::new(vec![Expr::zero()], vec![Expr::exp(&s.w0(0)).mul(&s.u0(0))], vec![]);
        let g = Matrix::diagonal(vec![Expr::exp(&s.w0(0))]);
        let mu = reconstruct_mu(&x, &g, &cov, 2).unwrap();
        let la = reconstruct_lambda(&x, &cov, 2).unwrap();
        assert!(mu.matched && la.matched);
        assert_eq!(mu.mu.lambda(0).get(0, 0), &lam);
        assert!(mu.restricted.sub(&la.restricted).is_zero());
    }

    #[test]
    fn diagonal_exponential_gauge() {
        let s = JetSpace::new(1, 2, 2, 2).unwrap();
        let l1 = s.uj(0, &[1]).add(&s.x(0));
        let l2 = s.u0(1).mul(&s.uj(1, &[1]));
        let cov = CoveringSystem::new(EquationSystem::empty(), vec![vec![l1.clone()], vec![l2.clone()]], s.clone()).unwrap();
        let g = Matrix::diagonal(vec![Expr::exp(&s.w0(0)), Expr::exp(&s.w0(1))]);
        let phi0 = vec![s.u0(1), s.x(0)];
        let x = VectorField::new(vec![Expr::zero()], g.apply(&phi0).unwrap(), vec![]);
        let rep = reconstruct_mu(&x, &g, &cov, 2).unwrap();
        assert!(rep.matched && rep.mch.pass);
        assert_eq!(rep.mu.lambda(0), &Matrix::diagonal(vec![l1, l2]));
    }

    #[test]
    fn unipotent_w_gauge() {
        let s = JetSpace::new(2, 2, 1, 1).unwrap();
        let (h0, h1) = (s.x(1).mul(&s.u0(0)), s.x(0).mul(&s.u0(0)));
        let cov = CoveringSystem::new(EquationSystem::empty(), vec![vec![h0.clone(), h1.clone()]], s.clone()).unwrap();
        let g = Matrix::from_rows(vec![vec![Expr::one(), s.w0(0)], vec![Expr::zero(), Expr::one()]]).unwrap();
        let phi0 = vec![s.u0(1), s.x(0)];
        let x = VectorField::vertical(2, g.apply(&phi0).unwrap());
        let rep = reconstruct_mu(&x, &g, &cov, 1).unwrap();
        assert!(rep.matched);
        for (i, h) in [h0, h1].iter().enumerate() {
            let expect = Matrix::from_rows(vec![vec![Expr::zero(), h.clone()], vec![Expr::zero(), Expr::zero()]]).unwrap();
            assert_eq!(rep.mu.lambda(i), &expect);
        }
    }
}
