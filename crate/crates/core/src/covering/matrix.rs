use super::cofactors;
use crate::error::{Error, Result};
use crate::jet::{EquationSystem, JetSpace, Reducer};
use crate::matrix::Matrix;
use crate::symbolic::Expr;

/// Linear covering `W_x = A W`, `W_t = B W` in two independent variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCovering {
    pub a: Matrix,
    pub b: Matrix,
    pub x_dir: usize,
    pub t_dir: usize,
}

impl MatrixCovering {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if !a.is_square() || a.rows() != b.rows() || a.cols() != b.cols() {
            return Err(Error::DimensionMismatch(
                "A and B must be square of the same size".into(),
            ));
        }
        Ok(MatrixCovering {
            a,
            b,
            x_dir: 0,
            t_dir: 1,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCoveringReport {
    pub pass: bool,
    /// `Z` vanishes before reduction.
    pub trivial: bool,
    /// `Z = D_t A - D_x B + AB - BA`.
    pub z: Matrix,
    pub reduced: Matrix,
    /// Cofactors of each nonzero entry of `Z`, `None` when division failed.
    pub cofactors: Vec<((usize, usize), Option<Vec<Expr>>)>,
}

/// Zero-curvature check modulo the base system.
pub fn check_matrix_covering(
    mc: &MatrixCovering,
    base: &EquationSystem,
    space: &JetSpace,
) -> Result<MatrixCoveringReport> {
    if space.p != 2 {
        return Err(Error::DimensionMismatch(format!(
            "matrix coverings need two independent variables, found {}",
            space.p
        )));
    }
    let dt_a = mc.a.map(|e| space.total_derivative(e, mc.t_dir))?;
    let dx_b = mc.b.map(|e| space.total_derivative(e, mc.x_dir))?;
    let z = dt_a.sub(&dx_b)?.add(&mc.a.commutator(&mc.b)?)?;
    let reducer = Reducer::new(base, space, None);
    let reduced = z.map(|e| reducer.reduce(e))?;
    let mut cof = Vec::new();
    for r in 0..z.rows() {
        for c in 0..z.cols() {
            let e = z.get(r, c);
            if !e.is_zero() {
                cof.push(((r, c), cofactors(e, &base.residuals)));
            }
        }
    }
    let trivial = z.is_zero();
    Ok(MatrixCoveringReport {
        pass: !trivial && reduced.is_zero(),
        trivial,
        z,
        reduced,
        cofactors: cof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn burgers(s: &JetSpace) -> EquationSystem {
        let (u, ux, ut, uxx) = (s.u0(0), s.uj(0, &[1, 0]), s.uj(0, &[0, 1]), s.uj(0, &[2, 0]));
        EquationSystem::from_residuals(vec![ut.sub(&uxx).sub(&u.mul(&ux))], s).unwrap()
    }

    fn m(rows: Vec<Vec<Expr>>) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn zero_pair_is_trivial() {
        let s = JetSpace::new(2, 1, 0, 2).unwrap();
        let mc = MatrixCovering::new(Matrix::zero(2, 2), Matrix::zero(2, 2)).unwrap();
        let rep = check_matrix_covering(&mc, &burgers(&s), &s).unwrap();
        assert!(rep.trivial && !rep.pass);
    }

    #[test]
    fn commuting_constants_are_trivial() {
        let s = JetSpace::new(2, 1, 0, 2).unwrap();
        let a = Matrix::diagonal(vec![Expr::int(1), Expr::int(2)]);
        let b = Matrix::diagonal(vec![Expr::int(3), Expr::int(5)]);
        let rep = check_matrix_covering(&MatrixCovering::new(a, b).unwrap(), &burgers(&s), &s).unwrap();
        assert!(rep.trivial && !rep.pass);
    }

    #[test]
    fn rescaled_burgers_pair_passes() {
        let s = JetSpace::new(2, 1, 0, 2).unwrap();
        let eta = Expr::constant("eta");
        let (u, ux) = (s.u0(0), s.uj(0, &[1, 0]));
        let q = |n: i64, d: i64| Expr::ratio(n, d);
        let e4 = eta.mul(&Expr::int(4));
        let a = m(vec![
            vec![e4.clone(), u.mul(&q(1, 4)).add(&e4)],
            vec![u.mul(&q(1, 4)).sub(&e4), e4.neg()],
        ]);
        let ue2 = u.mul(&eta).mul(&Expr::int(2));
        let s8 = u.mul(&u).mul(&q(1, 8)).add(&ux.mul(&q(1, 4)));
        let b = m(vec![vec![ue2.clone(), s8.add(&ue2)], vec![s8.sub(&ue2), ue2.neg()]]);
        let rep = check_matrix_covering(&MatrixCovering::new(a, b).unwrap(), &burgers(&s), &s).unwrap();
        assert!(rep.pass);
        assert!(!rep.cofactors.is_empty());
        for (_, c) in &rep.cofactors {
            let c4 = c.as_ref().unwrap()[0].mul(&Expr::int(4));
            assert!(c4 == Expr::one() || c4 == Expr::int(-1));
        }
    }
}
