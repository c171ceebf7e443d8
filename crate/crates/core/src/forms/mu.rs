use crate::error::{Error, Result};
use crate::jet::{commutator, JetSpace, ProlongedField};
use crate::matrix::Matrix;
use crate::symbolic::{Atom, Expr, MultiIndex};

use super::{contact_form, DiffForm};

/// Horizontal matrix one-form `μ = Λ_i dx^i`, one `q x q` matrix per direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOneForm {
    lambdas: Vec<Matrix>,
}

impl MatrixOneForm {
    pub fn new(lambdas: Vec<Matrix>) -> Result<Self> {
        let q = lambdas.first().map_or(0, Matrix::rows);
        if lambdas.is_empty() || lambdas.iter().any(|m| !m.is_square() || m.rows() != q) {
            return Err(Error::DimensionMismatch(
                "mu needs one square matrix of common size per direction".into(),
            ));
        }
        Ok(MatrixOneForm { lambdas })
    }

    pub fn zero(p: usize, q: usize) -> Self {
        MatrixOneForm {
            lambdas: vec![Matrix::zero(q, q); p],
        }
    }

    /// Scalar case `μ = λ_i dx^i`.
    pub fn scalar(lambdas: Vec<Expr>) -> Self {
        MatrixOneForm {
            lambdas: lambdas.into_iter().map(|l| Matrix::diagonal(vec![l])).collect(),
        }
    }

    /// `μ = λ I dx^i` in every direction.
    pub fn stretching(lambda: &Expr, p: usize, q: usize) -> Self {
        MatrixOneForm {
            lambdas: vec![Matrix::identity(q).scale(lambda); p],
        }
    }

    pub fn p(&self) -> usize {
        self.lambdas.len()
    }

    pub fn q(&self) -> usize {
        self.lambdas[0].rows()
    }

    pub fn lambda(&self, i: usize) -> &Matrix {
        &self.lambdas[i]
    }

    pub fn lambdas(&self) -> &[Matrix] {
        &self.lambdas
    }

    pub fn is_zero(&self) -> bool {
        self.lambdas.iter().all(Matrix::is_zero)
    }

    /// Entry `μ^a_b = Σ_i (Λ_i)^a_b dx^i` as a scalar one-form.
    pub fn entry_form(&self, a: usize, b: usize) -> DiffForm {
        let mut out = DiffForm::zero(1);
        for (i, l) in self.lambdas.iter().enumerate() {
            let t = DiffForm::dx(i).scale(l.get(a, b));
            out = out.add(&t).expect("same degree");
        }
        out
    }

    /// Scalar `μ` as a one-form (requires `q = 1`).
    pub fn as_scalar_form(&self) -> Result<DiffForm> {
        if self.q() != 1 {
            return Err(Error::DimensionMismatch("mu is not scalar".into()));
        }
        Ok(self.entry_form(0, 0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MchReport {
    pub pass: bool,
    /// `R_ij = D_iΛ_j - D_jΛ_i + [Λ_i, Λ_j]` for `i < j`.
    pub residuals: Vec<((usize, usize), Matrix)>,
    pub failing: Vec<(usize, usize)>,
}

/// Horizontal Maurer-Cartan check; vacuous for one independent variable.
pub fn check_mch(mu: &MatrixOneForm, space: &JetSpace) -> Result<MchReport> {
    if mu.p() != space.p {
        return Err(Error::DimensionMismatch(format!(
            "mu has {} directions on a space with p={}",
            mu.p(),
            space.p
        )));
    }
    let mut residuals = Vec::new();
    let mut failing = Vec::new();
    for i in 0..space.p {
        for j in i + 1..space.p {
            let di_lj = mu.lambda(j).map(|e| space.total_derivative(e, i))?;
            let dj_li = mu.lambda(i).map(|e| space.total_derivative(e, j))?;
            let r = di_lj
                .sub(&dj_li)?
                .add(&mu.lambda(i).commutator(mu.lambda(j))?)?;
            if !r.is_zero() {
                failing.push((i, j));
            }
            residuals.push(((i, j), r));
        }
    }
    Ok(MchReport {
        pass: failing.is_empty(),
        residuals,
        failing,
    })
}

/// `∇_i v = D_i v + Λ_i v`.
pub fn nabla_apply(mu: &MatrixOneForm, i: usize, v: &[Expr], space: &JetSpace) -> Result<Vec<Expr>> {
    if v.len() != mu.q() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for q={}",
            v.len(),
            mu.q()
        )));
    }
    let lv = mu.lambda(i).apply(v)?;
    v.iter()
        .zip(lv)
        .map(|(e, l)| Ok(space.total_derivative(e, i)?.add(&l)))
        .collect()
}

/// Scalar deformed differential `d_μ a = da + μ ∧ a`.
pub fn d_mu(a: &DiffForm, mu: &DiffForm) -> Result<DiffForm> {
    if mu.degree() != 1 && !mu.is_zero() {
        return Err(Error::DimensionMismatch("mu must be a one-form".into()));
    }
    a.d()?.add(&mu.wedge(a))
}

/// Vector-valued deformed differential `(d_μ α)^a = dα^a + μ^a_b ∧ α^b`.
pub fn d_mu_vector(alpha: &[DiffForm], mu: &MatrixOneForm) -> Result<Vec<DiffForm>> {
    d_mu_vector_with(alpha, mu, |f| f.d())
}

/// Horizontal variant `d_H + μ ∧` on horizontal vector-valued forms.
pub fn d_mu_horizontal(
    alpha: &[DiffForm],
    mu: &MatrixOneForm,
    space: &JetSpace,
) -> Result<Vec<DiffForm>> {
    d_mu_vector_with(alpha, mu, |f| f.d_horizontal(space))
}

fn d_mu_vector_with(
    alpha: &[DiffForm],
    mu: &MatrixOneForm,
    d: impl Fn(&DiffForm) -> Result<DiffForm>,
) -> Result<Vec<DiffForm>> {
    if alpha.len() != mu.q() {
        return Err(Error::DimensionMismatch(format!(
            "form with {} components for q={}",
            alpha.len(),
            mu.q()
        )));
    }
    let deg = alpha.iter().map(DiffForm::degree).max().unwrap_or(0);
    (0..mu.q())
        .map(|a| {
            let mut out = d(&alpha[a])?;
            if out.is_zero() {
                out = DiffForm::zero(deg + 1);
            }
            for (b, ab) in alpha.iter().enumerate() {
                out = out.add(&mu.entry_form(a, b).wedge(ab))?;
            }
            Ok(out)
        })
        .collect()
}

/// Deformed Lie derivative of a form: `L_X a + μ ∧ (X ⌟ a)`.
pub fn lie_mu(x: &ProlongedField, a: &DiffForm, mu: &DiffForm) -> Result<DiffForm> {
    let l = a.lie(x)?;
    let t = mu.wedge(&a.interior(x)?);
    if t.is_zero() {
        return Ok(l);
    }
    l.add(&t)
}

/// Deformed Lie derivative of a field: `[X, Y] - (Y ⌟ μ) X`.
pub fn lie_mu_field(x: &ProlongedField, y: &ProlongedField, mu: &DiffForm) -> Result<ProlongedField> {
    let bracket = commutator(x, y)?;
    let ymu = mu
        .interior(y)?
        .as_function()
        .ok_or_else(|| Error::DimensionMismatch("mu must be a one-form".into()))?;
    if ymu.is_zero() {
        return Ok(bracket);
    }
    let shift = x.map(|e| Ok(e.mul(&ymu)))?.restrict(bracket.order);
    Ok(bracket.sub(&shift))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuProlongationReport {
    pub pass: bool,
    /// ξ and ψ at order zero depend on `(x, u)` only.
    pub projectable: bool,
    /// Horizontal parts of `L^μ_Y ϑ^a_J`: `((a, J), coefficients of dx^i)`.
    pub residuals: Vec<((usize, MultiIndex), Vec<Expr>)>,
}

/// Contact-structure criterion: `Y` is a μ-prolongation iff it projects to `M`
/// and `L^μ_Y` maps every contact form into the contact ideal.
pub fn check_mu_prolongation(
    y: &ProlongedField,
    mu: &MatrixOneForm,
    space: &JetSpace,
) -> Result<MuProlongationReport> {
    if mu.p() != space.p || mu.q() != space.q {
        return Err(Error::DimensionMismatch("mu does not match the space".into()));
    }
    let zero = MultiIndex::zero(space.p);
    let projectable = y
        .xi
        .iter()
        .chain((0..space.q).filter_map(|a| y.psi.get(&crate::symbolic::JetKey::new(a, zero.clone()))))
        .all(|e| e.coordinates().iter().all(|c| c.jet_order() == 0));
    let work = space.with_order(space.n.max(y.order + 1));
    let mut residuals = Vec::new();
    let mut pass = projectable;
    for k in 0..y.order {
        for idx in MultiIndex::all_of_order(space.p, k) {
            let thetas: Vec<DiffForm> = (0..space.q)
                .map(|a| contact_form(a, &idx, &work))
                .collect::<Result<_>>()?;
            let contractions: Vec<DiffForm> = thetas
                .iter()
                .map(|t| t.interior(y))
                .collect::<Result<_>>()?;
            for a in 0..space.q {
                let mut form = thetas[a].lie(y)?;
                for (b, c) in contractions.iter().enumerate() {
                    let t = mu.entry_form(a, b).wedge(c);
                    if !t.is_zero() {
                        form = form.add(&t)?;
                    }
                }
                let h = form.horizontal_projection(&work)?;
                let coeffs: Vec<Expr> = (0..space.p).map(|i| h.coeff(&[Atom::indep(i)])).collect();
                if coeffs.iter().any(|c| !c.is_zero()) {
                    pass = false;
                }
                residuals.push(((a, idx.clone()), coeffs));
            }
        }
    }
    Ok(MuProlongationReport {
        pass,
        projectable,
        residuals,
    })
}
