use proptest::prelude::*;

use super::*;
use crate::jet::{check_symmetry, prolong, Twist, VectorField};
use crate::matrix::Matrix;
use crate::random::{first_order_atoms, random_poly};
use crate::symbolic::{partial, Atom, MultiIndex, Sampler};

fn gibbons_tsarev() -> CoveringSystem {
    let s = JetSpace::new(2, 1, 1, 2).unwrap();
    let (ux, ut, uxx, uxt, utt) = (
        s.uj(0, &[1, 0]),
        s.uj(0, &[0, 1]),
        s.uj(0, &[2, 0]),
        s.uj(0, &[1, 1]),
        s.uj(0, &[0, 2]),
    );
    let w = s.w0(0);
    let f = uxx.add(&ut.mul(&uxt)).sub(&ux.mul(&utt)).add(&Expr::one());
    let den = ux.add(&ut.mul(&w)).sub(&w.mul(&w));
    let ht = Expr::one().div(&den).unwrap();
    let hx = w.sub(&ut).div(&den).unwrap();
    let base = EquationSystem::from_residuals(vec![f], &s).unwrap();
    CoveringSystem::new(base, vec![vec![hx, ht]], s).unwrap()
}

/// Example 5 with the opaque coefficient replaced by a polynomial `c(x)`.
fn abel_family(c: &Expr, s: &JetSpace) -> (EquationSystem, Expr) {
    let (u, ux, uxx) = (s.u0(0), s.uj(0, &[1]), s.uj(0, &[2]));
    let m = Expr::constant("m");
    let um = Expr::power(&u, &m).unwrap();
    let dc = s.total_derivative(c, 0).unwrap();
    let rhs = ux.mul(&ux).div(&u).unwrap().add(&m.mul(c).mul(&ux).add(&dc.mul(&u)).mul(&um));
    let lambda = ux.div(&u).unwrap().add(&m.mul(c).mul(&um));
    (EquationSystem::from_residuals(vec![uxx.sub(&rhs)], s).unwrap(), lambda)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// `[D̃_x, D̃_t] e = (D̃_x H_t - D̃_t H_x) ∂e/∂w` before any reduction.
    #[test]
    fn augmented_derivatives_commute_up_to_compatibility(seed in any::<u64>()) {
        let cov = gibbons_tsarev();
        let s = &cov.space;
        let mut atoms = first_order_atoms(s);
        atoms.push(Atom::aux(0, MultiIndex::zero(2)));
        let e = random_poly(&mut Sampler::new(seed), &atoms, 2, 3);
        let d = |e: &Expr, i| augmented_total_derivative(e, i, &cov).unwrap();
        let comm = d(&d(&e, 1), 0).sub(&d(&d(&e, 0), 1));
        let c = d(cov.h(0, 1), 0).sub(&d(cov.h(0, 0), 1));
        let dw = partial(&e, &Atom::aux(0, MultiIndex::zero(2))).unwrap();
        prop_assert_eq!(comm, c.mul(&dw));
    }

    /// Substituting `w`-jets before or after a prolongation step agrees.
    #[test]
    fn restriction_commutes_with_prolongation(seed in any::<u64>(), n in 1usize..3) {
        let s = JetSpace::new(1, 1, 1, n + 1).unwrap();
        let mut smp = Sampler::new(seed);
        let lambda = random_poly(&mut smp, &first_order_atoms(&s), 2, 3);
        let cov = CoveringSystem::new(EquationSystem::empty(), vec![vec![lambda]], s.clone()).unwrap();
        let atoms = vec![Atom::indep(0), Atom::jet(0, MultiIndex::zero(1)), Atom::aux(0, MultiIndex::zero(1))];
        let mut pick = || random_poly(&mut smp, &atoms, 2, 3);
        let x = VectorField::new(vec![pick()], vec![pick()], vec![pick()]);
        let before = prolong(&x, &Twist::Standard, n, &s, Some(&cov.aux)).unwrap();
        let after = prolong(&x, &Twist::Standard, n, &s, None).unwrap();
        for idx in MultiIndex::up_to(1, n) {
            prop_assert_eq!(before.psi(0, &idx), cov.restrict(&after.psi(0, &idx)).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// The reconstructed field is a λ-symmetry of the base equation.
    #[test]
    fn lambda_reconstruction_is_sound(seed in any::<u64>()) {
        let s = JetSpace::new(1, 1, 1, 2).unwrap();
        let c = random_poly(&mut Sampler::new(seed), &[Atom::indep(0)], 2, 3);
        let (sys, lambda) = abel_family(&c, &s);
        let cov = CoveringSystem::new(sys.clone(), vec![vec![lambda.clone()]], s.clone()).unwrap();
        let ew = Expr::exp(&s.w0(0));
        let m1 = Expr::constant("m").add(&Expr::one());
        let xt = VectorField::new(vec![Expr::zero()], vec![ew.clone()], vec![ew.mul(&m1).div(&s.u0(0)).unwrap()]);
        prop_assert!(check_augmented_symmetry(&xt, &cov, 2).unwrap().pass);
        let rec = reconstruct_lambda(&xt, &cov, 2).unwrap();
        prop_assert!(rec.matched);
        let x0 = VectorField::new(rec.x0.xi.clone(), rec.x0.phi.clone(), vec![Expr::zero()]);
        prop_assert!(check_symmetry(&x0, &sys, &Twist::Lambda(rec.lambda), 2, &s).unwrap().pass);
    }

    /// On a potential covering `w_i = D_i φ` the reconstructed Λ_i are flat
    /// and the twisted prolongation matches.
    #[test]
    fn mu_reconstruction_is_flat(seed in any::<u64>(), q in 1usize..3) {
        let s = JetSpace::new(2, q, 1, 2).unwrap();
        let mut smp = Sampler::new(seed);
        let base: Vec<Atom> = crate::random::base_atoms(&s);
        let phi = random_poly(&mut smp, &base, 2, 3);
        let h = vec![(0..2).map(|i| s.total_derivative(&phi, i).unwrap()).collect()];
        let cov = CoveringSystem::new(EquationSystem::empty(), h, s.clone()).unwrap();
        let w = s.w0(0);
        let g = if q == 1 {
            Matrix::diagonal(vec![Expr::exp(&w.mul(&Expr::int(2)))])
        } else {
            Matrix::from_rows(vec![vec![Expr::one(), w.clone()], vec![Expr::zero(), Expr::one()]]).unwrap()
        };
        let phi0: Vec<Expr> = (0..q).map(|_| random_poly(&mut smp, &base, 2, 2)).collect();
        let x = VectorField::new(vec![Expr::zero(); 2], g.apply(&phi0).unwrap(), vec![Expr::zero()]);
        let rec = reconstruct_mu(&x, &g, &cov, 2).unwrap();
        prop_assert!(rec.mch.pass);
        prop_assert!(rec.matched);
    }
}
